//! The `schauder` command line.
//!
//! Indices are zero-based throughout (frame element `j` is row `j` of `F`).
//! Exit codes: 0 success, 1 input or configuration error, 2 falsification
//! of the inequality (always accompanied by a certificate file).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::document::{deserialize_frame, fmt_real, render_records, serialize_frame, Format, Record};
use crate::frames::{
    compose_frame, fourier_frame, identity_frame, parseval_frame_from_unitary, signed_permutation_frame,
    splitting_frame, PSchauderFrame, SignedPermutation,
};
use crate::numerics::{complex_gaussian, NumericsError, random_orthogonal, random_unitary, seeded_rng, CVec, Scalar};
use crate::search::{divisors, run_search, SearchConfig, SearchError, SearchMode};
use crate::search::comb_signal;
use crate::uncertainty::{
    cross_gram, donoho_stark_product_with, hilbert_reduction, reduction_residual, FramePair, UncertaintyReport,
    SLACK_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FALSIFIED: i32 = 2;
pub const MAX_DEMO_DIM: usize = 64;
const DEFAULT_SWEEP: usize = 1000;

#[derive(Debug, Parser, Serialize)]
#[command(name = "schauder", version, about = "p-Schauder frames and the functional uncertainty inequality")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative sparsity threshold: entries above rel_tol * max count as nonzero.
    #[arg(long = "rel-tol", global = true, default_value_t = 1e-8)]
    pub rel_tol: f64,
    /// Primary output file; derived files (.manifest.json, .trace.csv, .certificate) sit next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Check both inequality directions for a frame pair over a set of vectors.
    Verify {
        frame_f: PathBuf,
        frame_g: PathBuf,
        /// A vector file (one vector per line, entries like `1.5-2i` separated by commas)
        /// or `random:count[:sparsity[:seed]]` (sparsity 0 = dense).
        #[arg(long)]
        vectors: Option<String>,
    },
    /// Reproduce one of the classical specializations.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Frame size for ricaud-torresani.
        #[arg(long)]
        n: Option<usize>,
        /// Number of random frame pairs.
        #[arg(long)]
        pairs: Option<usize>,
        /// Random vectors per frame pair.
        #[arg(long, default_value_t = DEFAULT_SWEEP)]
        vectors: usize,
    },
    /// Search for equality cases.
    Search {
        #[arg(long)]
        mode: SearchMode,
        /// Built-in frame pair, ignored when frame files are given.
        #[arg(long, value_enum, default_value = "identity-fourier")]
        pair: PairName,
        #[arg(long, requires = "frame_g")]
        frame_f: Option<PathBuf>,
        #[arg(long, requires = "frame_f")]
        frame_g: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        /// Draw random and annealing entries from {-1, 0, 1} only.
        #[arg(long)]
        ternary: bool,
    },
    /// Build, validate and write a frame document.
    MakeFrame {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Size of the unitary for `parseval`.
        #[arg(long)]
        n: Option<usize>,
        /// Real orthogonal instead of complex unitary for `parseval`.
        #[arg(long)]
        real: bool,
        /// Splitting weights: lists separated by `;`, entries by `,` (e.g. `0.5,0.5;1`).
        #[arg(long)]
        weights: Option<String>,
        /// Signed permutation, e.g. `1,0`.
        #[arg(long)]
        perm: Option<String>,
        /// Unimodular phases, e.g. `i,1`.
        #[arg(long)]
        phases: Option<String>,
        #[arg(long)]
        label: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DemoName {
    DonohoStark,
    EladBruckstein,
    RicaudTorresani,
    GeneralP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairName {
    IdentityFourier,
    IdentityIdentity,
    RandomOnb,
    Splitting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Identity,
    Fourier,
    Parseval,
    Splitting,
    SignedPerm,
}

/// Input or configuration failure, reported with exit code 1.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult<T> = Result<T, InputError>;

/// Result of one command before it is written out.
struct Outcome {
    code: i32,
    summary: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    config: &'a Cli,
    seed: u64,
    version: &'static str,
    duration_ms: u128,
    exit_code: i32,
    outcome: &'a str,
}

fn derived(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Sends primary output to `--out` or stdout.
fn emit(cli: &Cli, text: &str, stdout: &mut dyn Write) -> CmdResult<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(InputError::from),
    }
}

fn certificate_path(cli: &Cli) -> PathBuf {
    match &cli.out {
        Some(out) => derived(out, ".certificate"),
        None => PathBuf::from("schauder-falsification.certificate"),
    }
}

fn write_certificate(cli: &Cli, report: &UncertaintyReport) -> CmdResult<PathBuf> {
    let path = certificate_path(cli);
    let mut text = String::from("# falsification certificate\n");
    text.push_str(&report.to_record().to_text());
    for v in report.chain_violations() {
        text.push_str(&format!("# chain: {v}\n"));
    }
    fs::write(&path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Verify { .. } => "verify",
        Command::Demo { .. } => "demo",
        Command::Search { .. } => "search",
        Command::MakeFrame { .. } => "make-frame",
    }
}

/// Runs one command; returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let result = match &cli.command {
        Command::Verify { frame_f, frame_g, vectors } => cmd_verify(cli, frame_f, frame_g, vectors.as_deref(), stdout),
        Command::Demo { name, d, p, n, pairs, vectors } => cmd_demo(cli, *name, *d, *p, *n, *pairs, *vectors, stdout),
        Command::Search { .. } => cmd_search(cli),
        Command::MakeFrame { .. } => cmd_make_frame(cli, stdout),
    };
    let outcome = result.unwrap_or_else(|InputError(msg)| Outcome { code: EXIT_INPUT, summary: format!("error: {msg}") });
    let _ = writeln!(stderr, "{}", outcome.summary);
    let manifest = RunManifest {
        command: command_name(&cli.command),
        config: cli,
        seed: cli.seed,
        version: env!("CARGO_PKG_VERSION"),
        duration_ms: start.elapsed().as_millis(),
        exit_code: outcome.code,
        outcome: &outcome.summary,
    };
    match &cli.out {
        Some(out) => {
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
            if let Err(e) = fs::write(derived(out, ".manifest.json"), text) {
                let _ = writeln!(stderr, "warning: could not write manifest: {e}");
            }
        }
        None => {
            let _ = writeln!(stderr, "{}", serde_json::to_string(&manifest).expect("manifest serializes"));
        }
    }
    outcome.code
}

fn load_frame(path: &Path) -> CmdResult<PSchauderFrame> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    deserialize_frame(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Parses `re`, `re+imi`, `re-imi`, `imi`, `i`, `-i`.
pub fn parse_complex(token: &str) -> Result<Scalar, String> {
    let s: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty entry".into());
    }
    let num = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| format!("`{token}` is not a number")),
        }
    };
    let z = match s.strip_suffix('i') {
        None => Scalar::new(s.parse::<f64>().map_err(|_| format!("`{token}` is not a number"))?, 0.0),
        Some(body) => {
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
            match split {
                Some(k) => {
                    let re = body[..k].parse::<f64>().map_err(|_| format!("`{token}` has a bad real part"))?;
                    Scalar::new(re, num(&body[k..])?)
                }
                None => Scalar::new(0.0, num(body)?),
            }
        }
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{token}` is not finite"))
    }
}

/// One vector per non-empty line; `#` starts a comment line.
pub fn parse_vector_file(text: &str, d: usize) -> Result<Vec<CVec>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let entries = line
            .split(',')
            .map(parse_complex)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        if entries.len() != d {
            return Err(format!("line {}: {} entries, frames live in dimension {d}", i + 1, entries.len()));
        }
        let v = CVec::new(entries).map_err(|e| format!("line {}: {e}", i + 1))?;
        if v.is_zero() {
            return Err(format!("line {}: the zero vector is excluded", i + 1));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err("no vectors".into());
    }
    Ok(out)
}

/// `count` seeded vectors with support size `sparsity` (0 = dense).
pub fn random_vectors(d: usize, count: usize, sparsity: usize, seed: u64) -> Vec<CVec> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| {
            let k = if sparsity == 0 { d } else { sparsity.min(d) };
            let mut v = vec![Scalar::new(0.0, 0.0); d];
            for i in sample(&mut rng, d, k).into_iter() {
                v[i] = complex_gaussian(&mut rng);
            }
            CVec::new(v).expect("finite")
        })
        .collect()
}

/// Sweep vectors whose support size cycles through `1..=d`.
pub fn sweep_vectors(d: usize, count: usize, seed: u64) -> Vec<CVec> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|i| {
            let k = 1 + i % d;
            let mut v = vec![Scalar::new(0.0, 0.0); d];
            for j in sample(&mut rng, d, k).into_iter() {
                v[j] = complex_gaussian(&mut rng);
            }
            CVec::new(v).expect("finite")
        })
        .collect()
}

/// Sweep vectors for a frame pair: even indices are sparse in the ambient
/// coordinates, odd ones are synthesized by `f` from sparse coefficients.
pub fn pair_sweep_vectors(f: &PSchauderFrame, count: usize, seed: u64) -> Vec<CVec> {
    let ambient = sweep_vectors(f.dim(), count.div_ceil(2), seed);
    let coeffs = sweep_vectors(f.size(), count / 2, pair_seed(seed, 1));
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let x = if i % 2 == 0 {
            ambient[i / 2].clone()
        } else {
            f.synthesize(&coeffs[i / 2]).expect("coefficients match the frame size")
        };
        // a synthesized vector can vanish only if the coefficients lie in the kernel of T
        out.push(if x.is_zero() { ambient[i / 2].clone() } else { x });
    }
    out
}

fn parse_vector_source(source: &str, d: usize, default_seed: u64) -> CmdResult<Vec<CVec>> {
    if let Some(rest) = source.strip_prefix("random:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.is_empty() || parts.len() > 3 {
            return Err(InputError(format!("bad generator `{source}`, expected random:count[:sparsity[:seed]]")));
        }
        let field = |i: usize, name: &str| -> CmdResult<Option<u64>> {
            parts
                .get(i)
                .map(|s| s.parse::<u64>().map_err(|_| InputError(format!("generator `{source}`: bad {name} `{s}`"))))
                .transpose()
        };
        let count = field(0, "count")?.unwrap_or(DEFAULT_SWEEP as u64) as usize;
        let sparsity = field(1, "sparsity")?.unwrap_or(0) as usize;
        let seed = field(2, "seed")?.unwrap_or(default_seed);
        if count == 0 {
            return Err(InputError(format!("generator `{source}` produces no vectors")));
        }
        return Ok(random_vectors(d, count, sparsity, seed));
    }
    let text = fs::read_to_string(source).map_err(|e| InputError(format!("{source}: {e}")))?;
    parse_vector_file(&text, d).map_err(|e| InputError(format!("{source}: {e}")))
}

fn cmd_verify(
    cli: &Cli,
    frame_f: &Path,
    frame_g: &Path,
    vectors: Option<&str>,
    stdout: &mut dyn Write,
) -> CmdResult<Outcome> {
    let f = load_frame(frame_f)?;
    let g = load_frame(frame_g)?;
    if f.dim() != g.dim() {
        return Err(InputError(format!(
            "{} has dimension {} but {} has dimension {}",
            frame_f.display(),
            f.dim(),
            frame_g.display(),
            g.dim()
        )));
    }
    let pair = FramePair::new(&f, &g)?;
    let default_source = format!("random:{DEFAULT_SWEEP}:0:{}", cli.seed);
    let xs = parse_vector_source(vectors.unwrap_or(&default_source), f.dim(), cli.seed)?;
    let mut records = Vec::with_capacity(xs.len());
    let mut falsified: Option<UncertaintyReport> = None;
    let mut chain_failures = 0;
    let mut min_slack = f64::INFINITY;
    for (i, x) in xs.iter().enumerate() {
        let r = pair.check(x, cli.rel_tol)?;
        min_slack = min_slack.min(r.slack1.min(r.slack2));
        if !r.chain_ok() {
            chain_failures += 1;
        }
        records.push(Record::new().int("index", i as i64).extend(r.to_record()));
        if !r.holds() && falsified.is_none() {
            falsified = Some(r);
        }
    }
    emit(cli, &render_records(&records, cli.format), stdout)?;
    if let Some(r) = falsified {
        let path = write_certificate(cli, &r)?;
        return Ok(Outcome {
            code: EXIT_FALSIFIED,
            summary: format!("FALSIFIED: certificate written to {}", path.display()),
        });
    }
    Ok(Outcome {
        code: EXIT_OK,
        summary: format!(
            "verified {} vectors: all slacks >= -{SLACK_TOL:e} (min {}), proof-chain failures: {chain_failures}",
            xs.len(),
            fmt_real(min_slack)
        ),
    })
}

fn pair_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Labels, exponents and threshold, so every record describes itself.
fn echo(instance: impl Into<String>, f: &PSchauderFrame, g: &PSchauderFrame, rel_tol: f64) -> Record {
    Record::new()
        .text("instance", instance)
        .text("label_f", f.label())
        .text("label_g", g.label())
        .real("p", f.p().p())
        .real("q", f.p().q())
        .real("rel_tol", rel_tol)
}

/// Sweeps a frame pair; returns (record, all good).
fn sweep_pair(
    label: &str,
    f: &PSchauderFrame,
    g: &PSchauderFrame,
    xs: &[CVec],
    rel_tol: f64,
    product_floor: Option<f64>,
) -> CmdResult<(Record, bool)> {
    let pair = FramePair::new(f, g)?;
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut min_product = usize::MAX;
    let mut chain_failures = 0;
    let mut holds = true;
    for x in xs {
        let r = pair.check(x, rel_tol)?;
        min1 = min1.min(r.slack1);
        min2 = min2.min(r.slack2);
        min_product = min_product.min(r.s_f.count * r.s_g.count);
        chain_failures += r.chain_violations().len();
        holds &= r.holds();
    }
    let mu = pair.gram_fw().mu;
    let mut record = echo(label, f, g, rel_tol)
        .int("vectors", xs.len() as i64)
        .real("mu_fw", mu)
        .real("mu_gt", pair.gram_gt().mu)
        .real("min_slack1", min1)
        .real("min_slack2", min2)
        .int("min_product", min_product as i64)
        .int("chain_violations", chain_failures as i64);
    let mut ok = holds && chain_failures == 0;
    if let Some(tol) = product_floor {
        let floor = 1.0 / (mu * mu);
        let product_ok = min_product as f64 >= floor - tol;
        record = record.real("product_bound", floor).flag("product_ok", product_ok);
        ok &= product_ok;
    }
    Ok((record.flag("holds", ok), ok))
}

fn check_dim(d: usize) -> CmdResult<usize> {
    if d == 0 || d > MAX_DEMO_DIM {
        return Err(InputError(format!("d = {d} is outside the supported range 1..={MAX_DEMO_DIM}")));
    }
    Ok(d)
}

/// Dyadic weight lists, at most `max_pieces` per coordinate.
fn dyadic_weights(d: usize, max_pieces: usize, seed: u64) -> Vec<Vec<f64>> {
    let menu: [&[f64]; 4] = [&[1.0], &[0.5, 0.5], &[0.25, 0.75], &[0.125, 0.375, 0.5]];
    let mut rng = seeded_rng(seed);
    (0..d)
        .map(|_| {
            let allowed: Vec<&[f64]> = menu.iter().copied().filter(|w| w.len() <= max_pieces).collect();
            allowed[rng.random_range(0..allowed.len())].to_vec()
        })
        .collect()
}

/// Frame pairs for general p: splitting frames, signed permutations and
/// compositions, each with at most 12 elements.
pub fn general_p_pairs(d: usize, p: f64, seed: u64) -> Result<Vec<(String, PSchauderFrame, PSchauderFrame)>, String> {
    let max_pieces = (12 / d).clamp(1, 3);
    let e = |e: crate::frames::FrameError| e.to_string();
    let a = splitting_frame(d, p, &dyadic_weights(d, max_pieces, pair_seed(seed, 1))).map_err(e)?;
    let b = splitting_frame(d, p, &dyadic_weights(d, max_pieces, pair_seed(seed, 2))).map_err(e)?;
    let b_perm = compose_frame(&b, &SignedPermutation::random(b.size(), pair_seed(seed, 3)).map_err(e)?).map_err(e)?;
    let sp = SignedPermutation::random(d, pair_seed(seed, 4)).map_err(e)?;
    let perm_frame = signed_permutation_frame(d, p, sp.perm().to_vec(), sp.phases().to_vec()).map_err(e)?;
    let id = identity_frame(d, p).map_err(e)?;
    // every coordinate split in halves on both sides: max |f_j(ω_k)| = 1/2
    let halves = if 2 * d <= 12 {
        let h = splitting_frame(d, p, &vec![vec![0.5, 0.5]; d]).map_err(e)?;
        let hp = compose_frame(&h, &SignedPermutation::random(2 * d, pair_seed(seed, 5)).map_err(e)?).map_err(e)?;
        Some(("halves/halves+perm".to_string(), h, hp))
    } else {
        None
    };
    let mut pairs = vec![
        ("splitting/splitting+perm".to_string(), a.clone(), b_perm),
        ("identity/splitting".to_string(), id, a.clone()),
        ("signed-perm/splitting".to_string(), perm_frame, b),
        ("splitting/identity".to_string(), a, identity_frame(d, p).map_err(e)?),
    ];
    pairs.extend(halves);
    Ok(pairs)
}

#[allow(clippy::too_many_arguments)]
fn cmd_demo(
    cli: &Cli,
    name: DemoName,
    d: Option<usize>,
    p: Option<f64>,
    n: Option<usize>,
    pairs: Option<usize>,
    count: usize,
    stdout: &mut dyn Write,
) -> CmdResult<Outcome> {
    if count == 0 {
        return Err(InputError("--vectors must be positive".into()));
    }
    let mut records = Vec::new();
    let mut ok = true;
    match name {
        DemoName::DonohoStark => {
            let d = check_dim(d.unwrap_or(16))?;
            let id = identity_frame(d, 2.0)?;
            let fo = fourier_frame(d)?;
            let pair = FramePair::new(&id, &fo)?;
            for a in divisors(d) {
                let x = comb_signal(d, a)?;
                let ds = donoho_stark_product_with(&x, cli.rel_tol)?;
                let r = pair.check(&x, cli.rel_tol)?;
                let good = ds.product == d && ds.am_gm_holds() && r.holds() && r.chain_ok();
                ok &= good;
                records.push(
                    echo(format!("comb spacing {a}"), &id, &fo, cli.rel_tol)
                        .int("d", d as i64)
                        .int("s_time", ds.time as i64)
                        .int("s_freq", ds.frequency as i64)
                        .int("product", ds.product as i64)
                        .flag("equality", ds.product == d)
                        .real("slack1", r.slack1)
                        .flag("holds", good),
                );
            }
            let xs = sweep_vectors(d, count, cli.seed);
            let mut min_product = usize::MAX;
            let mut all = true;
            for x in &xs {
                let ds = donoho_stark_product_with(x, cli.rel_tol)?;
                min_product = min_product.min(ds.product);
                all &= ds.bound_holds() && ds.am_gm_holds();
            }
            ok &= all;
            records.push(
                echo("random sweep", &id, &fo, cli.rel_tol)
                    .int("d", d as i64)
                    .int("vectors", xs.len() as i64)
                    .int("min_product", min_product as i64)
                    .flag("holds", all),
            );
        }
        DemoName::EladBruckstein => {
            let d = check_dim(d.unwrap_or(8))?;
            for k in 0..pairs.unwrap_or(20) as u64 {
                let a = parseval_frame_from_unitary(&random_unitary(d, pair_seed(cli.seed, 2 * k))?, d)?;
                let b = parseval_frame_from_unitary(&random_unitary(d, pair_seed(cli.seed, 2 * k + 1))?, d)?;
                let xs = pair_sweep_vectors(&a, count, pair_seed(cli.seed, 1_000_000 + k));
                let (rec, good) = sweep_pair(&format!("onb pair {k}"), &a, &b, &xs, cli.rel_tol, Some(1e-6))?;
                ok &= good;
                records.push(rec);
            }
        }
        DemoName::RicaudTorresani => {
            let d = check_dim(d.unwrap_or(8))?;
            let n = n.unwrap_or(12);
            if n < d || n > MAX_DEMO_DIM {
                return Err(InputError(format!("need d <= n <= {MAX_DEMO_DIM}, got d = {d}, n = {n}")));
            }
            for k in 0..pairs.unwrap_or(20) as u64 {
                let a = parseval_frame_from_unitary(&random_unitary(n, pair_seed(cli.seed, 2 * k))?, d)?;
                let b = parseval_frame_from_unitary(&random_unitary(n, pair_seed(cli.seed, 2 * k + 1))?, d)?;
                let xs = pair_sweep_vectors(&a, count, pair_seed(cli.seed, 1_000_000 + k));
                let (rec, good) = sweep_pair(&format!("parseval pair {k}"), &a, &b, &xs, cli.rel_tol, Some(1e-6))?;
                ok &= good;
                records.push(rec);

                // real Parseval frames through the Hilbert-space reduction
                let (tau, omega) = real_parseval_pair(n, d, pair_seed(cli.seed, 500_000 + k))?;
                let (rf, rg) = hilbert_reduction(&tau, &omega)?;
                let residual = reduction_residual(&cross_gram(&rf, &rg)?.gram, &tau, &omega)?;
                let xs = pair_sweep_vectors(&rf, count, pair_seed(cli.seed, 2_000_000 + k));
                let (rec, good) = sweep_pair(&format!("real parseval pair {k}"), &rf, &rg, &xs, cli.rel_tol, Some(1e-6))?;
                let reduction_ok = residual <= 1e-10;
                ok &= good && reduction_ok;
                records.push(rec.real("reduction_residual", residual).flag("reduction_ok", reduction_ok));
            }
        }
        DemoName::GeneralP => {
            let d = check_dim(d.unwrap_or(4))?;
            let p = p.unwrap_or(3.0);
            for (label, f, g) in general_p_pairs(d, p, cli.seed).map_err(InputError)? {
                let xs = pair_sweep_vectors(&f, count, cli.seed);
                let (rec, good) = sweep_pair(&label, &f, &g, &xs, cli.rel_tol, None)?;
                ok &= good;
                records.push(rec);
            }
        }
    }
    emit(cli, &render_records(&records, cli.format), stdout)?;
    let name = name.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Ok(if ok {
        Outcome { code: EXIT_OK, summary: format!("demo {name}: all {} instances hold", records.len()) }
    } else {
        Outcome { code: EXIT_FALSIFIED, summary: format!("demo {name}: some instance FAILED") }
    })
}

/// Two real Parseval frames of `n` vectors in `ℝ^d`, from the rows of the
/// leading `d` columns of seeded orthogonal matrices.
pub fn real_parseval_pair(n: usize, d: usize, seed: u64) -> Result<(Vec<CVec>, Vec<CVec>), NumericsError> {
    let rows = |seed: u64| -> Result<Vec<CVec>, NumericsError> {
        let w = random_orthogonal(n, seed)?;
        (0..n).map(|j| CVec::new(w.row(j)[..d].to_vec())).collect()
    };
    Ok((rows(seed)?, rows(pair_seed(seed, 1))?))
}

fn builtin_pair(name: PairName, d: usize, p: f64, seed: u64) -> CmdResult<(PSchauderFrame, PSchauderFrame)> {
    Ok(match name {
        PairName::IdentityFourier => (identity_frame(d, 2.0)?, fourier_frame(d)?),
        PairName::IdentityIdentity => (identity_frame(d, p)?, identity_frame(d, p)?),
        PairName::RandomOnb => (
            parseval_frame_from_unitary(&random_unitary(d, pair_seed(seed, 0))?, d)?,
            parseval_frame_from_unitary(&random_unitary(d, pair_seed(seed, 1))?, d)?,
        ),
        PairName::Splitting => {
            let (_, f, g) = general_p_pairs(d, p, seed).map_err(InputError)?.swap_remove(0);
            (f, g)
        }
    })
}

fn cmd_search(cli: &Cli) -> CmdResult<Outcome> {
    let Command::Search { mode, pair, frame_f, frame_g, d, p, iterations, restarts, ternary } = &cli.command else {
        unreachable!("dispatched on Search");
    };
    let (f, g) = match (frame_f, frame_g) {
        (Some(a), Some(b)) => (load_frame(a)?, load_frame(b)?),
        _ => builtin_pair(*pair, check_dim(*d)?, *p, cli.seed)?,
    };
    if f.dim() != g.dim() {
        return Err(InputError(format!("frame dimensions differ: {} vs {}", f.dim(), g.dim())));
    }
    let mut cfg = SearchConfig::for_frames(*mode, &f, &g)
        .with_seed(cli.seed)
        .with_iterations(*iterations)
        .with_ternary(*ternary);
    cfg.rel_tol = cli.rel_tol;
    cfg.restarts = *restarts;
    let result = match run_search(&cfg, &f, &g) {
        Ok(r) => r,
        Err(SearchError::Falsified(report)) => {
            let path = write_certificate(cli, &report)?;
            return Ok(Outcome {
                code: EXIT_FALSIFIED,
                summary: format!("FALSIFIED during search: certificate written to {}", path.display()),
            });
        }
        Err(e) => return Err(InputError(e.to_string())),
    };
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from(format!("search-{}.json", mode.name())));
    fs::write(&out, result.to_document()).map_err(|e| InputError(format!("{}: {e}", out.display())))?;
    let trace = derived(&out, ".trace.csv");
    fs::write(&trace, result.trace_csv()).map_err(|e| InputError(format!("{}: {e}", trace.display())))?;
    let summary = format!(
        "search {}: best slack1 {} (product {}), {} equality hits; wrote {} and {}",
        mode.name(),
        fmt_real(result.best_slack1),
        result.best_product(),
        result.equality_count,
        out.display(),
        trace.display()
    );
    Ok(Outcome { code: EXIT_OK, summary })
}

fn parse_list<T>(s: &str, what: &str, item: impl Fn(&str) -> Result<T, String>) -> CmdResult<Vec<T>> {
    s.split(',')
        .map(|t| item(t.trim()).map_err(|e| InputError(format!("--{what}: {e}"))))
        .collect()
}

fn cmd_make_frame(cli: &Cli, stdout: &mut dyn Write) -> CmdResult<Outcome> {
    let Command::MakeFrame { family, d, p, n, real, weights, perm, phases, label } = &cli.command else {
        unreachable!("dispatched on MakeFrame");
    };
    let d = check_dim(*d)?;
    let frame = match family {
        Family::Identity => identity_frame(d, *p)?,
        Family::Fourier => fourier_frame(d)?,
        Family::Parseval => {
            let n = n.unwrap_or(d);
            if n > MAX_DEMO_DIM {
                return Err(InputError(format!("n = {n} exceeds {MAX_DEMO_DIM}")));
            }
            let w = if *real { random_orthogonal(n, cli.seed)? } else { random_unitary(n, cli.seed)? };
            parseval_frame_from_unitary(&w, d)?
        }
        Family::Splitting => {
            let text = weights.as_deref().ok_or_else(|| InputError("--weights is required for splitting".into()))?;
            let lists = text
                .split(';')
                .map(|list| {
                    parse_list(list, "weights", |t| t.parse::<f64>().map_err(|_| format!("bad weight `{t}`")))
                })
                .collect::<CmdResult<Vec<_>>>()?;
            splitting_frame(d, *p, &lists)?
        }
        Family::SignedPerm => {
            let perm = match perm {
                Some(s) => parse_list(s, "perm", |t| t.parse::<usize>().map_err(|_| format!("bad index `{t}`")))?,
                None => (0..d).collect(),
            };
            let phases = match phases {
                Some(s) => parse_list(s, "phases", parse_complex)?,
                None => vec![Scalar::new(1.0, 0.0); perm.len()],
            };
            signed_permutation_frame(d, *p, perm, phases)?
        }
    };
    let frame = match label {
        Some(l) => frame.with_label(l.clone()),
        None => frame,
    };
    emit(cli, &serialize_frame(&frame), stdout)?;
    let v = frame.validation();
    let summary = format!(
        "{frame}: reconstruction residual {:e}, worst probe isometry error {:e} over {} probes",
        v.reconstruction_residual, v.isometry_error, v.probes
    );
    Ok(Outcome { code: EXIT_OK, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn complex_tokens() {
        assert_eq!(parse_complex("3").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_complex(" 1.5-2i ").unwrap(), c(1.5, -2.0));
        assert_eq!(parse_complex("1e-3+2.5e2i").unwrap(), c(1e-3, 250.0));
        assert_eq!(parse_complex("-1e+2-1e-2i").unwrap(), c(-100.0, -0.01));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2+i").unwrap(), c(2.0, 1.0));
        assert_eq!(parse_complex("-4.5i").unwrap(), c(0.0, -4.5));
        for bad in ["", "x", "1+2j", "nan", "1+inf i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn vector_files() {
        let v = parse_vector_file("# comb\n1, 0, 1+0i, 0\n\n0, i, 0, 0\n", 4).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1][1], c(0.0, 1.0));
        assert!(parse_vector_file("1, 0\n", 3).unwrap_err().contains("line 1"));
        assert!(parse_vector_file("0, 0\n", 2).unwrap_err().contains("zero vector"));
        assert!(parse_vector_file("1, q\n", 2).is_err());
    }

    #[test]
    fn generators_are_seeded() {
        let a = random_vectors(5, 10, 2, 3);
        assert_eq!(a, random_vectors(5, 10, 2, 3));
        assert!(a.iter().all(|v| v.iter().filter(|z| z.norm() > 0.0).count() == 2));
        let s = sweep_vectors(3, 6, 1);
        let sizes: Vec<usize> = s.iter().map(|v| v.iter().filter(|z| z.norm() > 0.0).count()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 1, 2, 3]);
    }

    #[test]
    fn general_p_pairs_stay_small() {
        for d in [2, 4, 6] {
            for (_, f, g) in general_p_pairs(d, 1.5, 9).unwrap() {
                assert!(f.size() <= 12 && g.size() <= 12);
            }
        }
    }
}
