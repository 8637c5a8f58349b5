use std::fmt;

use crate::numerics::{pnorm_pow, CVec, PExponent};

use super::CrossGram;

/// Relative tolerance on the steps that are equalities in exact arithmetic
/// but go through a frame isometry numerically.
pub const CHAIN_EQ_TOL: f64 = 1e-9;
/// Relative slack allowed on the pure inequality steps (rounding only).
pub const CHAIN_LE_TOL: f64 = 1e-12;

/// Numerical value of every line of the argument, for one direction.
///
/// With `S_f = supp θ_f x`, `S_g = supp θ_g x`, `μ = max |f_j(ω_k)|`:
///
/// ```text
/// c0 = ‖x‖^p
/// c1 = Σ_{j∈S_f} |Σ_{k∈S_g} g_k(x) f_j(ω_k)|^p
/// c2 = Σ_{j∈S_f} (Σ_{k∈S_g} |g_k(x) f_j(ω_k)|)^p
/// c3 = μ^p Σ_{j∈S_f} (Σ_{k∈S_g} |g_k(x)|)^p
/// c4 = μ^p ‖θ_f x‖_0 (Σ_{k∈S_g} |g_k(x)|)^p
/// c5 = μ^p ‖θ_f x‖_0 ‖θ_g x‖^p ‖θ_g x‖_0^{p/q}
/// c6 = μ^p ‖θ_f x‖_0 ‖x‖^p ‖θ_g x‖_0^{p/q}
/// ```
///
/// `c3` and `c4` are the same expression regrouped and share one value.
/// For the reverse direction the roles of the frames are exchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofChain {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainViolation {
    pub step: &'static str,
    pub left: f64,
    pub right: f64,
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails: {:.17e} vs {:.17e}", self.step, self.left, self.right)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

impl ProofChain {
    /// `gram` is the cross-Gram of the first frame's functionals against the
    /// second frame's vectors; `coeffs` is the second frame's analysis of `x`.
    pub(crate) fn trace(
        x: &CVec,
        exp: PExponent,
        gram: &CrossGram,
        supp_first: &[usize],
        coeffs: &CVec,
        supp_second: &[usize],
    ) -> ProofChain {
        let (p, q) = (exp.p(), exp.q());
        let g = &gram.gram;
        let c0 = pnorm_pow(x, p);
        let mut c1 = 0.0;
        let mut c2 = 0.0;
        for &j in supp_first {
            let mut synth = num_complex::Complex64::new(0.0, 0.0);
            let mut triangle = 0.0;
            for &k in supp_second {
                let term = coeffs[k] * g[(j, k)];
                synth += term;
                triangle += term.norm();
            }
            c1 += synth.norm().powf(p);
            c2 += triangle.powf(p);
        }
        let s_first = supp_first.len() as f64;
        let s_second = supp_second.len() as f64;
        let mu_p = gram.mu.powf(p);
        let l1: f64 = supp_second.iter().map(|&k| coeffs[k].norm()).sum();
        let c3 = mu_p * s_first * l1.powf(p);
        let holder = s_second.powf(p / q);
        let c5 = mu_p * s_first * pnorm_pow(coeffs, p) * holder;
        let c6 = mu_p * s_first * c0 * holder;
        ProofChain { c0, c1, c2, c3, c4: c3, c5, c6 }
    }

    pub fn steps(&self) -> [(&'static str, f64); 7] {
        [
            ("c0", self.c0),
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
            ("c5", self.c5),
            ("c6", self.c6),
        ]
    }

    pub fn violations(&self) -> Vec<ChainViolation> {
        let checks = [
            ("c0 = c1", close(self.c0, self.c1, CHAIN_EQ_TOL), self.c0, self.c1),
            ("c1 <= c2", self.c1 <= self.c2 * (1.0 + CHAIN_LE_TOL), self.c1, self.c2),
            ("c2 <= c3", self.c2 <= self.c3 * (1.0 + CHAIN_LE_TOL), self.c2, self.c3),
            ("c3 = c4", self.c3 == self.c4, self.c3, self.c4),
            ("c4 <= c5", self.c4 <= self.c5 * (1.0 + CHAIN_LE_TOL), self.c4, self.c5),
            ("c5 = c6", close(self.c5, self.c6, CHAIN_EQ_TOL), self.c5, self.c6),
            ("c0 <= c6", self.c0 <= self.c6 * (1.0 + CHAIN_EQ_TOL), self.c0, self.c6),
        ];
        checks
            .into_iter()
            .filter(|(_, ok, _, _)| !ok)
            .map(|(step, _, left, right)| ChainViolation { step, left, right })
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}
