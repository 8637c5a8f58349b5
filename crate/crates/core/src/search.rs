//! Searches for vectors that make the uncertainty inequality tight.
//!
//! The frames are fixed inputs; only the vector `x` varies. Every visited
//! candidate is checked against both directions of the inequality and a
//! violation aborts the run with [`SearchError::Falsified`]. The objective is
//! `slack1`; `slack2` is recorded alongside.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::document::fmt_real;
use crate::frames::PSchauderFrame;
use crate::numerics::{complex_gaussian, seeded_rng, CVec, Scalar};
use crate::uncertainty::{FramePair, UncertaintyError, UncertaintyReport, DEFAULT_REL_TOL, SLACK_TOL};

pub const MAX_TERNARY_DIM: usize = 8;
pub const MAX_ANNEAL_DIM: usize = 64;
pub const ANNEAL_T0: f64 = 1.0;
pub const ANNEAL_COOLING: f64 = 0.995;
/// Equality hits kept verbatim in a result; the rest are only counted.
pub const MAX_RECORDED_HITS: usize = 64;

pub const SCOPE_NOTE: &str =
    "vectors are searched for a fixed frame pair; frame pairs themselves are inputs, not search variables";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("NotDivisor: spacing {spacing} does not divide d = {d}")]
    NotDivisor { d: usize, spacing: usize },
    #[error("TooLarge: exhaustive ternary search needs d <= {MAX_TERNARY_DIM}, got {0}")]
    TooLarge(usize),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("falsification: slack1 = {:e}, slack2 = {:e}", .0.slack1, .0.slack2)]
    Falsified(Box<UncertaintyReport>),
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Comb,
    ExhaustiveTernary,
    Random,
    Anneal,
}

impl SearchMode {
    pub fn name(&self) -> &'static str {
        match self {
            SearchMode::Comb => "comb",
            SearchMode::ExhaustiveTernary => "exhaustive-ternary",
            SearchMode::Random => "random",
            SearchMode::Anneal => "anneal",
        }
    }
}

impl FromStr for SearchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "comb" => Ok(SearchMode::Comb),
            "exhaustive-ternary" => Ok(SearchMode::ExhaustiveTernary),
            "random" => Ok(SearchMode::Random),
            "anneal" => Ok(SearchMode::Anneal),
            other => Err(format!("unknown search mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SearchConfig {
    pub p: f64,
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub mode: SearchMode,
    pub seed: u64,
    pub iterations: usize,
    pub rel_tol: f64,
    /// Entry re-draws per support mask in annealing.
    pub restarts: usize,
    /// Restrict random and annealing candidates to entries in `{-1, 0, 1}`.
    pub ternary: bool,
}

impl SearchConfig {
    /// Config matching the shapes of a frame pair, with default knobs.
    pub fn for_frames(mode: SearchMode, f: &PSchauderFrame, g: &PSchauderFrame) -> Self {
        SearchConfig {
            p: f.p().p(),
            d: f.dim(),
            n: f.size(),
            m: g.size(),
            mode,
            seed: 0,
            iterations: 1000,
            rel_tol: DEFAULT_REL_TOL,
            restarts: 4,
            ternary: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_ternary(mut self, ternary: bool) -> Self {
        self.ternary = ternary;
        self
    }

    fn check(&self, f: &PSchauderFrame, g: &PSchauderFrame, expected: SearchMode) -> Result<(), SearchError> {
        if self.mode != expected {
            return Err(SearchError::InvalidConfig(format!(
                "mode is {}, expected {}",
                self.mode.name(),
                expected.name()
            )));
        }
        if self.iterations == 0 {
            return Err(SearchError::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(SearchError::InvalidConfig("restarts must be at least 1".into()));
        }
        if (self.p, self.d, self.n, self.m) != (f.p().p(), f.dim(), f.size(), g.size()) {
            return Err(SearchError::InvalidConfig(format!(
                "config (p={}, d={}, n={}, m={}) does not match frames {f} and {g}",
                self.p, self.d, self.n, self.m
            )));
        }
        if self.mode == SearchMode::ExhaustiveTernary && self.d > MAX_TERNARY_DIM {
            return Err(SearchError::TooLarge(self.d));
        }
        if self.mode == SearchMode::Anneal && self.d > MAX_ANNEAL_DIM {
            return Err(SearchError::InvalidConfig(format!("annealing supports d <= {MAX_ANNEAL_DIM}")));
        }
        Ok(())
    }
}

/// One CSV trace line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub slack1: f64,
    pub slack2: f64,
    pub s_f: usize,
    pub s_g: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualityHit {
    pub iter: usize,
    pub slack1: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub label_f: String,
    pub label_g: String,
    pub best_iter: usize,
    pub best_slack1: f64,
    /// `slack2` of the witness.
    pub best_slack2: f64,
    pub witness: CVec,
    pub trace: Vec<TraceRow>,
    /// Smallest `slack2` over every visited candidate.
    pub min_slack2: f64,
    pub equality_count: usize,
    pub equalities: Vec<EqualityHit>,
    pub evaluations: usize,
    /// Full report of the witness.
    pub certificate: UncertaintyReport,
}

impl SearchResult {
    pub fn min_slack1(&self) -> f64 {
        self.trace.iter().map(|r| r.slack1).fold(f64::INFINITY, f64::min)
    }

    pub fn median_slack1(&self) -> f64 {
        let mut s: Vec<f64> = self.trace.iter().map(|r| r.slack1).collect();
        s.sort_by(f64::total_cmp);
        let k = s.len();
        if k == 0 {
            f64::NAN
        } else if k % 2 == 1 {
            s[k / 2]
        } else {
            0.5 * (s[k / 2 - 1] + s[k / 2])
        }
    }

    /// Product of the witness' support sizes.
    pub fn best_product(&self) -> usize {
        self.certificate.s_f.count * self.certificate.s_g.count
    }

    /// Recomputes the witness report and compares it with the stored slacks.
    pub fn reverify(&self, f: &PSchauderFrame, g: &PSchauderFrame) -> Result<bool, SearchError> {
        let r = FramePair::new(f, g)?.check(&self.witness, self.config.rel_tol)?;
        Ok((r.slack1 - self.best_slack1).abs() <= 1e-12 && (r.slack2 - self.best_slack2).abs() <= 1e-12)
    }

    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iter,slack1,slack2,s_f,s_g\n");
        for r in &self.trace {
            let _ = writeln!(out, "{},{},{},{},{}", r.iter, fmt_real(r.slack1), fmt_real(r.slack2), r.s_f, r.s_g);
        }
        out
    }

    /// Structured text document; byte-identical for identical inputs.
    pub fn to_document(&self) -> String {
        let c = &self.config;
        let q = |s: &str| serde_json::to_string(s).expect("string");
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"version\": 1,");
        let _ = writeln!(out, "  \"mode\": {},", q(c.mode.name()));
        let _ = writeln!(out, "  \"label_f\": {},", q(&self.label_f));
        let _ = writeln!(out, "  \"label_g\": {},", q(&self.label_g));
        let _ = writeln!(out, "  \"p\": {},", fmt_real(c.p));
        let _ = writeln!(out, "  \"q\": {},", fmt_real(self.certificate.exponent.q()));
        let _ = writeln!(out, "  \"d\": {}, \"n\": {}, \"m\": {},", c.d, c.n, c.m);
        let _ = writeln!(out, "  \"seed\": {},", c.seed);
        let _ = writeln!(out, "  \"iterations\": {},", c.iterations);
        let _ = writeln!(out, "  \"restarts\": {},", c.restarts);
        let _ = writeln!(out, "  \"ternary\": {},", c.ternary);
        let _ = writeln!(out, "  \"rel_tol\": {},", fmt_real(c.rel_tol));
        let _ = writeln!(out, "  \"evaluations\": {},", self.evaluations);
        let _ = writeln!(out, "  \"best_iter\": {},", self.best_iter);
        let _ = writeln!(out, "  \"best_slack1\": {},", fmt_real(self.best_slack1));
        let _ = writeln!(out, "  \"best_slack2\": {},", fmt_real(self.best_slack2));
        let _ = writeln!(out, "  \"best_product\": {},", self.best_product());
        let _ = writeln!(out, "  \"min_slack1\": {},", fmt_real(self.min_slack1()));
        let _ = writeln!(out, "  \"median_slack1\": {},", fmt_real(self.median_slack1()));
        let _ = writeln!(out, "  \"min_slack2\": {},", fmt_real(self.min_slack2));
        let witness: Vec<String> =
            self.witness.iter().map(|z| format!("[{}, {}]", fmt_real(z.re), fmt_real(z.im))).collect();
        let _ = writeln!(out, "  \"witness\": [{}],", witness.join(", "));
        let _ = writeln!(out, "  \"equality_count\": {},", self.equality_count);
        let _ = writeln!(out, "  \"equalities\": [");
        for (i, h) in self.equalities.iter().enumerate() {
            let sep = if i + 1 == self.equalities.len() { "" } else { "," };
            let _ = writeln!(
                out,
                "    {{\"iter\": {}, \"slack1\": {}, \"note\": {}}}{sep}",
                h.iter,
                fmt_real(h.slack1),
                q(&h.note)
            );
        }
        let _ = writeln!(out, "  ],");
        let _ = writeln!(out, "  \"certificate\": {},", self.certificate.to_record().to_json_line().trim_end());
        let _ = writeln!(out, "  \"scope\": {}", q(SCOPE_NOTE));
        out.push_str("}\n");
        out
    }
}

/// Bookkeeping shared by all strategies.
struct Tracker<'a> {
    pair: FramePair<'a>,
    rel_tol: f64,
    trace: Vec<TraceRow>,
    best: Option<(usize, CVec, UncertaintyReport)>,
    min_slack2: f64,
    equality_count: usize,
    equalities: Vec<EqualityHit>,
    evaluations: usize,
}

impl<'a> Tracker<'a> {
    fn new(f: &'a PSchauderFrame, g: &'a PSchauderFrame, rel_tol: f64) -> Result<Self, SearchError> {
        Ok(Tracker {
            pair: FramePair::new(f, g)?,
            rel_tol,
            trace: Vec::new(),
            best: None,
            min_slack2: f64::INFINITY,
            equality_count: 0,
            equalities: Vec::new(),
            evaluations: 0,
        })
    }

    /// Checks one candidate; does not touch the trace.
    fn evaluate(&mut self, iter: usize, x: CVec, note: impl FnOnce() -> String) -> Result<UncertaintyReport, SearchError> {
        let report = self.pair.check(&x, self.rel_tol)?;
        self.evaluations += 1;
        if report.slack1 < -SLACK_TOL || report.slack2 < -SLACK_TOL {
            return Err(SearchError::Falsified(Box::new(report)));
        }
        self.min_slack2 = self.min_slack2.min(report.slack2);
        if report.is_equality1() {
            self.equality_count += 1;
            if self.equalities.len() < MAX_RECORDED_HITS {
                self.equalities.push(EqualityHit { iter, slack1: report.slack1, note: note() });
            }
        }
        let better = match &self.best {
            None => true,
            Some((_, _, b)) => report.slack1 < b.slack1,
        };
        if better {
            self.best = Some((iter, x, report.clone()));
        }
        Ok(report)
    }

    fn record(&mut self, iter: usize, r: &UncertaintyReport) {
        self.trace.push(TraceRow { iter, slack1: r.slack1, slack2: r.slack2, s_f: r.s_f.count, s_g: r.s_g.count });
    }

    fn visit(&mut self, iter: usize, x: CVec, note: impl FnOnce() -> String) -> Result<(), SearchError> {
        let r = self.evaluate(iter, x, note)?;
        self.record(iter, &r);
        Ok(())
    }

    fn finish(self, config: &SearchConfig) -> SearchResult {
        let (best_iter, witness, certificate) = self.best.expect("at least one candidate is evaluated");
        SearchResult {
            config: config.clone(),
            label_f: self.pair.first().label().to_string(),
            label_g: self.pair.second().label().to_string(),
            best_iter,
            best_slack1: certificate.slack1,
            best_slack2: certificate.slack2,
            witness,
            trace: self.trace,
            min_slack2: self.min_slack2,
            equality_count: self.equality_count,
            equalities: self.equalities,
            evaluations: self.evaluations,
            certificate,
        }
    }
}

/// Ones at `0, a, 2a, …`, zeros elsewhere.
pub fn comb_signal(d: usize, spacing: usize) -> Result<CVec, SearchError> {
    if d == 0 || spacing == 0 || !d.is_multiple_of(spacing) {
        return Err(SearchError::NotDivisor { d, spacing });
    }
    let v: Vec<f64> = (0..d).map(|i| if i % spacing == 0 { 1.0 } else { 0.0 }).collect();
    Ok(CVec::from_real(&v).expect("finite"))
}

pub fn divisors(d: usize) -> Vec<usize> {
    (1..=d).filter(|a| d.is_multiple_of(*a)).collect()
}

/// Evaluates the comb of every spacing dividing `d`.
pub fn comb_search(cfg: &SearchConfig, f: &PSchauderFrame, g: &PSchauderFrame) -> Result<SearchResult, SearchError> {
    cfg.check(f, g, SearchMode::Comb)?;
    let mut t = Tracker::new(f, g, cfg.rel_tol)?;
    for (iter, a) in divisors(cfg.d).into_iter().enumerate() {
        t.visit(iter, comb_signal(cfg.d, a)?, || format!("comb spacing {a}"))?;
    }
    Ok(t.finish(cfg))
}

/// `{0, 1, -1}` digits of `code` in base 3, least significant first.
fn ternary_vector(d: usize, mut code: usize) -> CVec {
    let v: Vec<f64> = (0..d)
        .map(|_| {
            let digit = code % 3;
            code /= 3;
            [0.0, 1.0, -1.0][digit]
        })
        .collect();
    CVec::from_real(&v).expect("finite")
}

fn fmt_ternary(x: &CVec) -> String {
    let parts: Vec<String> = x.iter().map(|z| format!("{}", z.re)).collect();
    format!("x = ({})", parts.join(", "))
}

/// Every `x ∈ {-1, 0, 1}^d \ {0}`, in base-3 order.
pub fn exhaustive_ternary_search(
    cfg: &SearchConfig,
    f: &PSchauderFrame,
    g: &PSchauderFrame,
) -> Result<SearchResult, SearchError> {
    cfg.check(f, g, SearchMode::ExhaustiveTernary)?;
    let mut t = Tracker::new(f, g, cfg.rel_tol)?;
    let total = 3usize.pow(cfg.d as u32);
    for code in 1..total {
        let x = ternary_vector(cfg.d, code);
        let note = fmt_ternary(&x);
        t.visit(code - 1, x, || note)?;
    }
    Ok(t.finish(cfg))
}

fn draw_entry(rng: &mut ChaCha8Rng, ternary: bool) -> Scalar {
    if ternary {
        Scalar::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0)
    } else {
        complex_gaussian(rng)
    }
}

/// Vector supported on `mask` with freshly drawn entries.
fn fill_support(d: usize, support: &[usize], rng: &mut ChaCha8Rng, ternary: bool) -> CVec {
    let mut v = vec![Scalar::new(0.0, 0.0); d];
    for &i in support {
        v[i] = draw_entry(rng, ternary);
    }
    CVec::new(v).expect("finite")
}

/// Seeded sampling: iteration `i` draws a random support of size
/// `1 + i mod d` and fills it with complex Gaussian (or `±1`) entries.
pub fn random_search(cfg: &SearchConfig, f: &PSchauderFrame, g: &PSchauderFrame) -> Result<SearchResult, SearchError> {
    cfg.check(f, g, SearchMode::Random)?;
    let mut rng = seeded_rng(cfg.seed);
    let mut t = Tracker::new(f, g, cfg.rel_tol)?;
    let d = cfg.d;
    for iter in 0..cfg.iterations {
        let k = 1 + iter % d;
        let mut support = sample(&mut rng, d, k).into_vec();
        support.sort_unstable();
        let x = fill_support(d, &support, &mut rng, cfg.ternary);
        t.visit(iter, x, || format!("random support {support:?}"))?;
    }
    Ok(t.finish(cfg))
}

fn mask_support(mask: u64, d: usize) -> Vec<usize> {
    (0..d).filter(|i| mask >> i & 1 == 1).collect()
}

/// Best slack over the entry restarts on one support mask: restart 0 is all
/// ones, restart 1 random signs, later ones fresh draws.
fn evaluate_mask(
    t: &mut Tracker<'_>,
    iter: usize,
    mask: u64,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> Result<UncertaintyReport, SearchError> {
    let support = mask_support(mask, cfg.d);
    let mut best: Option<UncertaintyReport> = None;
    for restart in 0..cfg.restarts {
        let x = match restart {
            0 => {
                let mut v = vec![Scalar::new(0.0, 0.0); cfg.d];
                support.iter().for_each(|&i| v[i] = Scalar::new(1.0, 0.0));
                CVec::new(v).expect("finite")
            }
            1 => fill_support(cfg.d, &support, rng, true),
            _ => fill_support(cfg.d, &support, rng, cfg.ternary),
        };
        let r = t.evaluate(iter, x, || format!("anneal support {support:?}, restart {restart}"))?;
        if best.as_ref().is_none_or(|b| r.slack1 < b.slack1) {
            best = Some(r);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// Simulated annealing over support masks of `x`: single-bit flips,
/// Metropolis acceptance on `slack1`, geometric cooling from
/// [`ANNEAL_T0`] by [`ANNEAL_COOLING`] per iteration.
pub fn anneal_gap(cfg: &SearchConfig, f: &PSchauderFrame, g: &PSchauderFrame) -> Result<SearchResult, SearchError> {
    cfg.check(f, g, SearchMode::Anneal)?;
    let d = cfg.d;
    let mut rng = seeded_rng(cfg.seed);
    let mut t = Tracker::new(f, g, cfg.rel_tol)?;
    let full = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    let mut mask = 0;
    while mask == 0 {
        mask = rng.random::<u64>() & full;
    }
    let first = evaluate_mask(&mut t, 0, mask, cfg, &mut rng)?;
    t.record(0, &first);
    let mut current = first.slack1;
    let mut temperature = ANNEAL_T0;
    for iter in 1..=cfg.iterations {
        let proposal = if d == 1 {
            mask
        } else {
            loop {
                let flipped = mask ^ (1u64 << rng.random_range(0..d));
                if flipped != 0 {
                    break flipped;
                }
            }
        };
        let r = evaluate_mask(&mut t, iter, proposal, cfg, &mut rng)?;
        t.record(iter, &r);
        let delta = r.slack1 - current;
        if delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp() {
            mask = proposal;
            current = r.slack1;
        }
        temperature *= ANNEAL_COOLING;
    }
    Ok(t.finish(cfg))
}

/// Dispatches on `cfg.mode`.
pub fn run_search(cfg: &SearchConfig, f: &PSchauderFrame, g: &PSchauderFrame) -> Result<SearchResult, SearchError> {
    match cfg.mode {
        SearchMode::Comb => comb_search(cfg, f, g),
        SearchMode::ExhaustiveTernary => exhaustive_ternary_search(cfg, f, g),
        SearchMode::Random => random_search(cfg, f, g),
        SearchMode::Anneal => anneal_gap(cfg, f, g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{fourier_frame, identity_frame, parseval_frame_from_unitary, splitting_frame};
    use crate::numerics::random_unitary;
    use crate::uncertainty::donoho_stark_product;

    fn id_fourier(d: usize) -> (PSchauderFrame, PSchauderFrame) {
        (identity_frame(d, 2.0).unwrap(), fourier_frame(d).unwrap())
    }

    #[test]
    fn comb_examples() {
        assert_eq!(comb_signal(4, 2).unwrap(), CVec::from_real(&[1.0, 0.0, 1.0, 0.0]).unwrap());
        assert_eq!(comb_signal(4, 4).unwrap(), CVec::basis(4, 0).unwrap());
        let ds = donoho_stark_product(&comb_signal(9, 3).unwrap()).unwrap();
        assert_eq!(ds.product, 9);
        assert_eq!(comb_signal(6, 4), Err(SearchError::NotDivisor { d: 6, spacing: 4 }));
        assert!(comb_signal(6, 0).is_err());
    }

    #[test]
    fn comb_products_equal_d_up_to_36() {
        for d in 1..=36 {
            for a in divisors(d) {
                let ds = donoho_stark_product(&comb_signal(d, a).unwrap()).unwrap();
                assert_eq!((ds.time, ds.frequency, ds.product), (d / a, a, d), "d = {d}, a = {a}");
            }
        }
    }

    #[test]
    fn comb_search_certifies_every_spacing() {
        let (f, g) = id_fourier(12);
        let r = comb_search(&SearchConfig::for_frames(SearchMode::Comb, &f, &g), &f, &g).unwrap();
        let notes: Vec<&str> = r.equalities.iter().map(|h| h.note.as_str()).collect();
        assert_eq!(
            notes,
            ["comb spacing 1", "comb spacing 2", "comb spacing 3", "comb spacing 4", "comb spacing 6", "comb spacing 12"]
        );
        assert_eq!(r.best_product(), 12);
    }

    #[test]
    fn exhaustive_small_cases() {
        let (f, g) = id_fourier(2);
        let cfg = SearchConfig::for_frames(SearchMode::ExhaustiveTernary, &f, &g);
        let r = exhaustive_ternary_search(&cfg, &f, &g).unwrap();
        assert_eq!(r.evaluations, 8);
        assert_eq!(r.best_product(), 2);
        assert!(r.best_slack1.abs() < 1e-12);

        let (f, g) = id_fourier(3);
        let cfg = SearchConfig::for_frames(SearchMode::ExhaustiveTernary, &f, &g);
        let r = exhaustive_ternary_search(&cfg, &f, &g).unwrap();
        assert_eq!(r.evaluations, 26);
        assert_eq!(r.best_product(), 3);

        let id = identity_frame(3, 2.0).unwrap();
        let cfg = SearchConfig::for_frames(SearchMode::ExhaustiveTernary, &id, &id);
        let r = exhaustive_ternary_search(&cfg, &id, &id).unwrap();
        assert_eq!(r.best_slack1, 0.0);
        assert_eq!(r.witness.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn exhaustive_rejects_large_d() {
        let id = identity_frame(9, 2.0).unwrap();
        let cfg = SearchConfig::for_frames(SearchMode::ExhaustiveTernary, &id, &id);
        assert_eq!(exhaustive_ternary_search(&cfg, &id, &id).unwrap_err(), SearchError::TooLarge(9));
    }

    #[test]
    fn config_must_match_mode_and_frames() {
        let (f, g) = id_fourier(3);
        let cfg = SearchConfig::for_frames(SearchMode::Random, &f, &g);
        assert!(matches!(anneal_gap(&cfg, &f, &g), Err(SearchError::InvalidConfig(_))));
        let mut bad = cfg.clone();
        bad.d = 4;
        assert!(matches!(random_search(&bad, &f, &g), Err(SearchError::InvalidConfig(_))));
        assert!(matches!(random_search(&cfg.clone().with_iterations(0), &f, &g), Err(SearchError::InvalidConfig(_))));
    }

    #[test]
    fn random_search_finds_diracs_for_identity_pair() {
        for d in 1..=6 {
            let id = identity_frame(d, 2.0).unwrap();
            let cfg = SearchConfig::for_frames(SearchMode::Random, &id, &id).with_iterations(10);
            let r = random_search(&cfg, &id, &id).unwrap();
            assert_eq!(r.best_slack1, 0.0);
        }
    }

    #[test]
    fn random_search_identity_fourier() {
        let (f, g) = id_fourier(4);
        let cfg = SearchConfig::for_frames(SearchMode::Random, &f, &g).with_seed(1).with_iterations(1000);
        let r = random_search(&cfg, &f, &g).unwrap();
        assert!(r.best_slack1.abs() <= 1e-9);
        assert!(r.reverify(&f, &g).unwrap());
    }

    #[test]
    fn random_search_splitting_p3_never_falsifies() {
        let f = splitting_frame(2, 3.0, &[vec![0.5, 0.5], vec![1.0]]).unwrap();
        let g = splitting_frame(2, 3.0, &[vec![0.25, 0.75], vec![0.5, 0.5]]).unwrap();
        let cfg = SearchConfig::for_frames(SearchMode::Random, &f, &g).with_seed(3).with_iterations(500);
        let r = random_search(&cfg, &f, &g).unwrap();
        assert!(r.trace.iter().all(|row| row.slack1 >= -SLACK_TOL && row.slack2 >= -SLACK_TOL));
        assert!(r.min_slack2 >= -SLACK_TOL);
    }

    #[test]
    fn anneal_examples() {
        let (f, g) = id_fourier(4);
        let cfg = SearchConfig::for_frames(SearchMode::Anneal, &f, &g).with_seed(0).with_iterations(200);
        let r = anneal_gap(&cfg, &f, &g).unwrap();
        assert!(r.best_slack1 <= 1e-9);
        assert_eq!(r.trace.len(), 201);

        let id = identity_frame(5, 2.0).unwrap();
        let cfg = SearchConfig::for_frames(SearchMode::Anneal, &id, &id).with_iterations(300);
        assert_eq!(anneal_gap(&cfg, &id, &id).unwrap().best_slack1, 0.0);

        let a = parseval_frame_from_unitary(&random_unitary(4, 7).unwrap(), 4).unwrap();
        let b = parseval_frame_from_unitary(&random_unitary(4, 8).unwrap(), 4).unwrap();
        let cfg = SearchConfig::for_frames(SearchMode::Anneal, &a, &b).with_seed(7).with_iterations(200);
        let r = anneal_gap(&cfg, &a, &b).unwrap();
        assert!(r.best_slack1 >= 0.0);
        assert!(r.reverify(&a, &b).unwrap());
    }

    #[test]
    fn identical_configs_give_identical_documents() {
        let (f, g) = id_fourier(4);
        for mode in [SearchMode::Comb, SearchMode::ExhaustiveTernary, SearchMode::Random, SearchMode::Anneal] {
            let cfg = SearchConfig::for_frames(mode, &f, &g).with_seed(11).with_iterations(100);
            let a = run_search(&cfg, &f, &g).unwrap();
            let b = run_search(&cfg, &f, &g).unwrap();
            assert_eq!(a.to_document(), b.to_document());
            assert_eq!(a.trace_csv(), b.trace_csv());
        }
    }

    #[test]
    fn ternary_heuristics_never_beat_exhaustive() {
        for d in [2, 3, 4] {
            let (f, g) = id_fourier(d);
            let ex = SearchConfig::for_frames(SearchMode::ExhaustiveTernary, &f, &g);
            let floor = exhaustive_ternary_search(&ex, &f, &g).unwrap().best_slack1;
            for mode in [SearchMode::Random, SearchMode::Anneal] {
                let cfg = SearchConfig::for_frames(mode, &f, &g).with_ternary(true).with_seed(d as u64).with_iterations(200);
                let r = run_search(&cfg, &f, &g).unwrap();
                assert!(r.best_slack1 >= floor, "{mode:?}: {} < {floor}", r.best_slack1);
            }
        }
    }

    #[test]
    fn trace_csv_layout() {
        let (f, g) = id_fourier(2);
        let r = comb_search(&SearchConfig::for_frames(SearchMode::Comb, &f, &g), &f, &g).unwrap();
        let csv = r.trace_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("iter,slack1,slack2,s_f,s_g"));
        assert_eq!(lines.count(), 2);
        let doc: serde_json::Value = serde_json::from_str(&r.to_document()).unwrap();
        assert_eq!(doc["mode"], "comb");
        assert_eq!(doc["scope"], SCOPE_NOTE);
    }
}
