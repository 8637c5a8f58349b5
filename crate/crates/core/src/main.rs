use clap::Parser;

fn main() {
    let cli = schauder::cli::Cli::parse();
    let code = schauder::cli::run(&cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
