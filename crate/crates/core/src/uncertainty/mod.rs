//! Sparsity, cross-Gram coherence and the functional uncertainty inequality
//!
//! ```text
//!   ‖θ_f x‖_0^{1/p} ‖θ_g x‖_0^{1/q} ≥ 1 / max_{j,k} |f_j(ω_k)|
//!   ‖θ_g x‖_0^{1/p} ‖θ_f x‖_0^{1/q} ≥ 1 / max_{j,k} |g_k(τ_j)|
//! ```
//!
//! for two p-Schauder frames `(f, τ)` and `(g, ω)` of the same space and
//! any `x ≠ 0`. Both directions are evaluated, and each one is accompanied by
//! a [`ProofChain`] holding the numerical value of every line of the
//! argument that establishes it.

mod chain;
pub mod hilbert;

pub use chain::{ChainViolation, ProofChain};
pub use hilbert::{hilbert_reduction, inner_product_gram, mercedes_benz, reduction_residual};

use thiserror::Error;

use crate::document::Record;
use crate::frames::{FrameError, PSchauderFrame};
use crate::numerics::{dft_matrix, matmul, matvec, CVec, Mat, NumericsError, PExponent};

/// Default relative threshold for `‖·‖_0`.
pub const DEFAULT_REL_TOL: f64 = 1e-8;
/// A slack below `-SLACK_TOL` falsifies the inequality.
pub const SLACK_TOL: f64 = 1e-9;
/// Entries within this factor of the sparsity threshold are flagged.
pub const FRAGILE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UncertaintyError {
    #[error("ZeroVector: the inequality is only stated for x != 0")]
    ZeroVector,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("frames use different exponents: p = {0} vs p = {1}")]
    ExponentMismatch(f64, f64),
    #[error("relative tolerance {0} must lie in [0, 1)")]
    InvalidTolerance(f64),
    #[error("NotParseval: family `{family}` fails reconstruction on probe {probe} (residual {residual:e})")]
    NotParseval { family: &'static str, probe: usize, residual: f64 },
    #[error("NotReal: {0}")]
    NotReal(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Numerical `‖x‖_0`: entries with `|x_i| > rel_tol · max|x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsityCount {
    pub count: usize,
    pub rel_tol: f64,
    /// Entries within a factor [`FRAGILE_FACTOR`] of the threshold, on
    /// either side. Such counts may flip under perturbation.
    pub fragile: usize,
}

pub fn sparsity(x: &CVec, rel_tol: f64) -> SparsityCount {
    let (count, fragile) = support_and_fragility(x, rel_tol);
    SparsityCount { count: count.len(), rel_tol, fragile }
}

fn support_and_fragility(x: &CVec, rel_tol: f64) -> (Vec<usize>, usize) {
    let max = x.max_modulus();
    if max == 0.0 {
        return (Vec::new(), 0);
    }
    let threshold = rel_tol * max;
    let mut support = Vec::new();
    let mut fragile = 0;
    for (i, z) in x.iter().enumerate() {
        let m = z.norm();
        if m > threshold {
            support.push(i);
        }
        if threshold > 0.0 && m > threshold / FRAGILE_FACTOR && m <= threshold * FRAGILE_FACTOR {
            fragile += 1;
        }
    }
    (support, fragile)
}

/// Indices of the numerically nonzero entries.
pub fn support(x: &CVec, rel_tol: f64) -> Vec<usize> {
    support_and_fragility(x, rel_tol).0
}

/// `G[j][k] = f_j(ω_k)` together with its largest modulus `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossGram {
    pub gram: Mat,
    pub mu: f64,
}

/// Cross-Gram of the functionals of `first` against the vectors of `second`:
/// `G = F_first · T_second`.
pub fn cross_gram(first: &PSchauderFrame, second: &PSchauderFrame) -> Result<CrossGram, UncertaintyError> {
    if first.dim() != second.dim() {
        return Err(UncertaintyError::Shape(format!(
            "frames live in different dimensions: {} vs {}",
            first.dim(),
            second.dim()
        )));
    }
    let gram = matmul(first.analysis(), second.synthesis())?;
    let mu = gram.max_modulus();
    Ok(CrossGram { gram, mu })
}

/// Everything measured for one vector `x` against a frame pair.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub label_f: String,
    pub label_g: String,
    pub exponent: PExponent,
    pub dim: usize,
    pub n: usize,
    pub m: usize,
    pub s_f: SparsityCount,
    pub s_g: SparsityCount,
    /// `max |f_j(ω_k)|`.
    pub mu_fw: f64,
    /// `max |g_k(τ_j)|`.
    pub mu_gt: f64,
    pub lhs1: f64,
    pub lhs2: f64,
    pub bound1: f64,
    pub bound2: f64,
    pub slack1: f64,
    pub slack2: f64,
    /// Trace of the argument for the first direction.
    pub chain1: ProofChain,
    /// Same argument with the frames exchanged.
    pub chain2: ProofChain,
}

impl UncertaintyReport {
    /// Both directions of the inequality hold to within [`SLACK_TOL`].
    pub fn holds(&self) -> bool {
        self.slack1 >= -SLACK_TOL && self.slack2 >= -SLACK_TOL
    }

    pub fn chain_violations(&self) -> Vec<ChainViolation> {
        let mut v = self.chain1.violations();
        v.extend(self.chain2.violations());
        v
    }

    pub fn chain_ok(&self) -> bool {
        self.chain_violations().is_empty()
    }

    /// Either sparsity count has entries near its threshold.
    pub fn is_fragile(&self) -> bool {
        self.s_f.fragile > 0 || self.s_g.fragile > 0
    }

    /// Equality in the first direction: slack within `1e-9·bound` and no
    /// fragile counts.
    pub fn is_equality1(&self) -> bool {
        self.slack1 <= SLACK_TOL * self.bound1 && !self.is_fragile()
    }

    pub fn is_equality2(&self) -> bool {
        self.slack2 <= SLACK_TOL * self.bound2 && !self.is_fragile()
    }

    pub fn to_record(&self) -> Record {
        let mut r = Record::new()
            .text("label_f", &self.label_f)
            .text("label_g", &self.label_g)
            .real("p", self.exponent.p())
            .real("q", self.exponent.q())
            .real("rel_tol", self.s_f.rel_tol)
            .int("d", self.dim as i64)
            .int("n", self.n as i64)
            .int("m", self.m as i64)
            .int("s_f", self.s_f.count as i64)
            .int("s_g", self.s_g.count as i64)
            .flag("fragile", self.is_fragile())
            .real("mu_fw", self.mu_fw)
            .real("mu_gt", self.mu_gt)
            .real("lhs1", self.lhs1)
            .real("bound1", self.bound1)
            .real("slack1", self.slack1)
            .real("lhs2", self.lhs2)
            .real("bound2", self.bound2)
            .real("slack2", self.slack2)
            .flag("holds", self.holds());
        for (prefix, chain) in [("chain1", &self.chain1), ("chain2", &self.chain2)] {
            for (name, value) in chain.steps() {
                r = r.real(&format!("{prefix}.{name}"), value);
            }
        }
        r.flag("chain_ok", self.chain_ok())
    }
}

/// A frame pair with both cross-Grams precomputed, for sweeps over many `x`.
#[derive(Debug, Clone)]
pub struct FramePair<'a> {
    f: &'a PSchauderFrame,
    g: &'a PSchauderFrame,
    /// `f_j(ω_k)`, n×m.
    fw: CrossGram,
    /// `g_k(τ_j)`, m×n.
    gt: CrossGram,
}

impl<'a> FramePair<'a> {
    pub fn new(f: &'a PSchauderFrame, g: &'a PSchauderFrame) -> Result<Self, UncertaintyError> {
        if f.p().p() != g.p().p() {
            return Err(UncertaintyError::ExponentMismatch(f.p().p(), g.p().p()));
        }
        let fw = cross_gram(f, g)?;
        let gt = cross_gram(g, f)?;
        Ok(FramePair { f, g, fw, gt })
    }

    pub fn first(&self) -> &PSchauderFrame {
        self.f
    }

    pub fn second(&self) -> &PSchauderFrame {
        self.g
    }

    pub fn exponent(&self) -> PExponent {
        self.f.p()
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// `G = F_f·T_g`.
    pub fn gram_fw(&self) -> &CrossGram {
        &self.fw
    }

    /// `G' = F_g·T_f`.
    pub fn gram_gt(&self) -> &CrossGram {
        &self.gt
    }

    pub fn check(&self, x: &CVec, rel_tol: f64) -> Result<UncertaintyReport, UncertaintyError> {
        if !(0.0..1.0).contains(&rel_tol) {
            return Err(UncertaintyError::InvalidTolerance(rel_tol));
        }
        if x.len() != self.dim() {
            return Err(UncertaintyError::Shape(format!(
                "vector has length {}, frames live in dimension {}",
                x.len(),
                self.dim()
            )));
        }
        if x.is_zero() {
            return Err(UncertaintyError::ZeroVector);
        }
        let exp = self.exponent();
        let (p, q) = (exp.p(), exp.q());
        let cf = self.f.analyze(x)?;
        let cg = self.g.analyze(x)?;
        let (supp_f, fragile_f) = support_and_fragility(&cf, rel_tol);
        let (supp_g, fragile_g) = support_and_fragility(&cg, rel_tol);
        let s_f = SparsityCount { count: supp_f.len(), rel_tol, fragile: fragile_f };
        let s_g = SparsityCount { count: supp_g.len(), rel_tol, fragile: fragile_g };
        let (nf, ng) = (s_f.count as f64, s_g.count as f64);

        let lhs1 = nf.powf(1.0 / p) * ng.powf(1.0 / q);
        let lhs2 = ng.powf(1.0 / p) * nf.powf(1.0 / q);
        let bound1 = 1.0 / self.fw.mu;
        let bound2 = 1.0 / self.gt.mu;

        let chain1 = ProofChain::trace(x, exp, &self.fw, &supp_f, &cg, &supp_g);
        let chain2 = ProofChain::trace(x, exp, &self.gt, &supp_g, &cf, &supp_f);

        Ok(UncertaintyReport {
            label_f: self.f.label().to_string(),
            label_g: self.g.label().to_string(),
            exponent: exp,
            dim: self.dim(),
            n: self.f.size(),
            m: self.g.size(),
            s_f,
            s_g,
            mu_fw: self.fw.mu,
            mu_gt: self.gt.mu,
            lhs1,
            lhs2,
            bound1,
            bound2,
            slack1: lhs1 - bound1,
            slack2: lhs2 - bound2,
            chain1,
            chain2,
        })
    }
}

/// Evaluates both directions of the inequality for `x` and traces the proof.
pub fn check_uncertainty(
    f: &PSchauderFrame,
    g: &PSchauderFrame,
    x: &CVec,
    rel_tol: f64,
) -> Result<UncertaintyReport, UncertaintyError> {
    FramePair::new(f, g)?.check(x, rel_tol)
}

/// Support sizes of `h` and of its unitary DFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DonohoStark {
    pub dim: usize,
    pub time: usize,
    pub frequency: usize,
    pub product: usize,
}

impl DonohoStark {
    /// `‖h‖_0 · ‖ĥ‖_0 ≥ d`.
    pub fn bound_holds(&self) -> bool {
        self.product >= self.dim
    }

    /// `((‖h‖_0 + ‖ĥ‖_0)/2)² ≥ ‖h‖_0 ‖ĥ‖_0`, in integers: `(a+b)² ≥ 4ab`.
    pub fn am_gm_holds(&self) -> bool {
        let (a, b) = (self.time as u128, self.frequency as u128);
        (a + b) * (a + b) >= 4 * a * b
    }
}

pub fn donoho_stark_product(x: &CVec) -> Result<DonohoStark, UncertaintyError> {
    donoho_stark_product_with(x, DEFAULT_REL_TOL)
}

pub fn donoho_stark_product_with(x: &CVec, rel_tol: f64) -> Result<DonohoStark, UncertaintyError> {
    if x.is_zero() {
        return Err(UncertaintyError::ZeroVector);
    }
    // the bare DFT matrix; building a validated frame per call is wasted work
    let spectrum = matvec(&dft_matrix(x.len())?, x)?;
    let time = sparsity(x, rel_tol).count;
    let frequency = sparsity(&spectrum, rel_tol).count;
    Ok(DonohoStark { dim: x.len(), time, frequency, product: time * frequency })
}
