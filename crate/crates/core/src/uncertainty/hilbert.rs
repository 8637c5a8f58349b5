//! Parseval frames of a real Hilbert space as 2-Schauder frames.
//!
//! A Parseval frame `{τ_j}` induces the functionals `f_j = ⟨·, τ_j⟩`; the
//! pair `({f_j}, {τ_j})` then satisfies both frame axioms at `p = 2` and
//! the cross-Gram entries become inner products, `f_j(ω_k) = ⟨ω_k, τ_j⟩`.
//! Only real scalars are accepted, which keeps the conjugation order of
//! the inner product irrelevant.

use crate::frames::{frame_from_operators, ProbeSet, PSchauderFrame};
use crate::numerics::{matvec, CVec, Mat, Scalar};

use super::UncertaintyError;

/// Relative reconstruction tolerance for the Parseval check.
pub const PARSEVAL_TOL: f64 = 1e-10;

/// `⟨a, b⟩ = Σ a_i conj(b_i)`.
fn inner(a: &CVec, b: &CVec) -> Scalar {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

fn check_family(family: &'static str, vectors: &[CVec]) -> Result<usize, UncertaintyError> {
    let d = vectors.first().map(CVec::len).ok_or_else(|| {
        UncertaintyError::Shape(format!("family `{family}` is empty"))
    })?;
    if let Some(j) = vectors.iter().position(|v| v.len() != d) {
        return Err(UncertaintyError::Shape(format!("family `{family}`: vector {j} has the wrong length")));
    }
    if let Some(j) = vectors.iter().position(|v| !v.is_real()) {
        return Err(UncertaintyError::NotReal(format!("family `{family}`: vector {j} has complex entries")));
    }
    Ok(d)
}

fn induced_frame(
    family: &'static str,
    vectors: &[CVec],
    probes: &ProbeSet,
) -> Result<PSchauderFrame, UncertaintyError> {
    let synthesis = Mat::from_columns(vectors)?;
    let analysis = synthesis.adjoint();
    // Σ_j ⟨x, τ_j⟩ τ_j = x on every probe
    for (probe, x) in probes.vectors().iter().enumerate() {
        let coeffs = matvec(&analysis, x)?;
        let back = matvec(&synthesis, &coeffs)?;
        let residual = back.iter().zip(x.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if residual > PARSEVAL_TOL * x.max_modulus() {
            return Err(UncertaintyError::NotParseval { family, probe, residual });
        }
    }
    let n = vectors.len();
    Ok(frame_from_operators(analysis, synthesis, 2.0, probes)?.with_label(format!("parseval-{family}-n{n}")))
}

/// Turns two real Parseval frames into 2-Schauder frames
/// `(⟨·, τ_j⟩, τ_j)` and `(⟨·, ω_k⟩, ω_k)`.
pub fn hilbert_reduction(
    tau: &[CVec],
    omega: &[CVec],
) -> Result<(PSchauderFrame, PSchauderFrame), UncertaintyError> {
    let d = check_family("tau", tau)?;
    let d2 = check_family("omega", omega)?;
    if d != d2 {
        return Err(UncertaintyError::Shape(format!("tau lives in dimension {d}, omega in {d2}")));
    }
    let probes = ProbeSet::standard(d)?;
    Ok((induced_frame("tau", tau, &probes)?, induced_frame("omega", omega, &probes)?))
}

/// `n×m` matrix of `⟨ω_k, τ_j⟩`, computed directly from the vectors.
pub fn inner_product_gram(tau: &[CVec], omega: &[CVec]) -> Result<Mat, UncertaintyError> {
    let rows = tau
        .iter()
        .map(|t| omega.iter().map(|w| inner(w, t)).collect())
        .collect();
    Ok(Mat::from_rows(rows)?)
}

/// `max_{j,k} | |G[j][k]| − |⟨ω_k, τ_j⟩| |`, also checking that the other
/// conjugation order `⟨τ_j, ω_k⟩` gives the same moduli.
pub fn reduction_residual(gram: &Mat, tau: &[CVec], omega: &[CVec]) -> Result<f64, UncertaintyError> {
    let direct = inner_product_gram(tau, omega)?;
    if direct.rows() != gram.rows() || direct.cols() != gram.cols() {
        return Err(UncertaintyError::Shape("cross-Gram and inner products disagree in shape".into()));
    }
    let mut worst = 0.0f64;
    for j in 0..gram.rows() {
        for k in 0..gram.cols() {
            let a = gram[(j, k)].norm();
            let b = direct[(j, k)].norm();
            let swapped = inner(&tau[j], &omega[k]).norm();
            worst = worst.max((a - b).abs()).max((b - swapped).abs());
        }
    }
    Ok(worst)
}

/// Three unit vectors at 120° in ℝ², scaled by `√(2/3)` to be Parseval.
pub fn mercedes_benz() -> Vec<CVec> {
    let s = (2.0f64 / 3.0).sqrt();
    (0..3)
        .map(|k| {
            let angle = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            CVec::from_real(&[s * angle.cos(), s * angle.sin()]).expect("finite")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random_orthogonal;
    use crate::uncertainty::{check_uncertainty, cross_gram};

    fn standard_basis(d: usize) -> Vec<CVec> {
        (0..d).map(|i| CVec::basis(d, i).unwrap()).collect()
    }

    #[test]
    fn standard_basis_reduces_to_identity() {
        let e = standard_basis(2);
        let (f, g) = hilbert_reduction(&e, &e).unwrap();
        assert_eq!(f.analysis(), &Mat::identity(2).unwrap());
        assert_eq!(cross_gram(&f, &g).unwrap().mu, 1.0);
    }

    #[test]
    fn rotation_by_45_degrees() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let e = standard_basis(2);
        let rot = vec![CVec::from_real(&[s, s]).unwrap(), CVec::from_real(&[-s, s]).unwrap()];
        let (f, g) = hilbert_reduction(&e, &rot).unwrap();
        let cg = cross_gram(&f, &g).unwrap();
        assert!((cg.mu - s).abs() < 1e-15);
        assert!((1.0 / (cg.mu * cg.mu) - 2.0).abs() < 1e-12);
        assert!(reduction_residual(&cg.gram, &e, &rot).unwrap() < 1e-15);
        // (1, 0) is 1-sparse in e but 2-sparse in the rotated basis
        let r = check_uncertainty(&f, &g, &CVec::from_real(&[1.0, 0.0]).unwrap(), 1e-8).unwrap();
        assert_eq!(r.s_f.count * r.s_g.count, 2);
        assert!(r.holds());
    }

    #[test]
    fn mercedes_benz_is_a_parseval_frame() {
        let mb = mercedes_benz();
        let (f, g) = hilbert_reduction(&mb, &standard_basis(2)).unwrap();
        assert_eq!((f.size(), g.size()), (3, 2));
        let cg = cross_gram(&f, &g).unwrap();
        assert!(reduction_residual(&cg.gram, &mb, &standard_basis(2)).unwrap() < 1e-15);
    }

    #[test]
    fn random_orthogonal_columns_reduce() {
        let w = random_orthogonal(5, 3).unwrap();
        // first 3 columns of an orthogonal matrix: rows form a Parseval frame of ℝ^3
        let tau: Vec<CVec> = (0..5).map(|j| CVec::new(w.row(j)[..3].to_vec()).unwrap()).collect();
        let omega = standard_basis(3);
        let (f, g) = hilbert_reduction(&tau, &omega).unwrap();
        let cg = cross_gram(&f, &g).unwrap();
        assert!(reduction_residual(&cg.gram, &tau, &omega).unwrap() < 1e-10);
    }

    #[test]
    fn non_parseval_and_complex_are_rejected() {
        let bad = vec![CVec::from_real(&[1.0, 0.0]).unwrap(), CVec::from_real(&[1.0, 1.0]).unwrap()];
        let err = hilbert_reduction(&bad, &standard_basis(2)).unwrap_err();
        assert!(matches!(err, UncertaintyError::NotParseval { family: "tau", .. }), "{err}");
        let complex = vec![CVec::new(vec![Scalar::new(0.0, 1.0)]).unwrap()];
        assert!(matches!(hilbert_reduction(&complex, &standard_basis(1)), Err(UncertaintyError::NotReal(_))));
        assert!(matches!(hilbert_reduction(&[], &standard_basis(1)), Err(UncertaintyError::Shape(_))));
    }
}
