//! p-Schauder frames on `K^d` with the ℓ^p norm.
//!
//! A frame is a pair of an analysis matrix `F` (n×d, row `j` holds the
//! coefficients of the functional `f_j`) and a synthesis matrix `T`
//! (d×n, column `j` holds the vector `τ_j`). Validity means
//!
//! * reconstruction: `T·F = I_d`, and
//! * isometry: `‖F·x‖_p = ‖x‖_p` for every `x`.
//!
//! Reconstruction is a finite matrix identity and is checked exactly (up to
//! `RECON_TOL`). The isometry axiom quantifies over all of `K^d`; for `p ≠ 2`
//! no finite identity certifies it, so it is falsified against a [`ProbeSet`]
//! instead. The built-in families are isometric by construction.

use std::fmt;

use thiserror::Error;

use crate::numerics::{
    conjugate_exponent, dft_matrix, matmul, matvec, pnorm, seeded_rng, CVec, Mat, NumericsError,
    PExponent, Scalar,
};

/// Absolute tolerance on `max |T·F − I|`.
pub const RECON_TOL: f64 = 1e-10;
/// Relative tolerance on `|‖F·x‖_p − ‖x‖_p|`.
pub const ISOMETRY_TOL: f64 = 1e-9;
/// Random probes in the default probe set (on top of basis and all-ones).
pub const DEFAULT_RANDOM_PROBES: usize = 100;
pub const DEFAULT_PROBE_SEED: u64 = 0x5eed_f4a3;
const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("NotReconstructing: max |T·F - I| = {residual:e} at ({row}, {col}) exceeds {RECON_TOL:e}")]
    NotReconstructing { residual: f64, row: usize, col: usize },
    #[error(
        "NotIsometric: probe {probe} has ‖x‖_p = {expected:.17e} but ‖F·x‖_p = {actual:.17e} (relative error {relative_error:e})"
    )]
    NotIsometric { probe: usize, expected: f64, actual: f64, relative_error: f64 },
    #[error("NotUnitary: max |W^H·W - I| = {residual:e}")]
    NotUnitary { residual: f64 },
    #[error("BadWeights: {0}")]
    BadWeights(String),
    #[error("BadPhase: phase {index} has modulus {modulus}")]
    BadPhase { index: usize, modulus: f64 },
    #[error("BadPermutation: {0}")]
    BadPermutation(String),
    #[error("ParseError at line {line}, field `{field}`: {message}")]
    Parse { line: usize, field: String, message: String },
}

/// Finite witness set for the isometry axiom: the `d` standard basis
/// vectors, the all-ones vector, then seeded complex Gaussian vectors.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    vectors: Vec<CVec>,
    seed: u64,
}

impl ProbeSet {
    pub fn new(d: usize, random: usize, seed: u64) -> Result<Self, FrameError> {
        if d == 0 {
            return Err(FrameError::Shape("probe dimension must be positive".into()));
        }
        let mut vectors = Vec::with_capacity(d + 1 + random);
        for i in 0..d {
            vectors.push(CVec::basis(d, i)?);
        }
        vectors.push(CVec::from_real(&vec![1.0; d])?);
        let mut rng = seeded_rng(seed);
        while vectors.len() < d + 1 + random {
            let v = CVec::random_gaussian(d, &mut rng)?;
            if !v.is_zero() {
                vectors.push(v);
            }
        }
        Ok(ProbeSet { vectors, seed })
    }

    /// Basis, all-ones and [`DEFAULT_RANDOM_PROBES`] random probes.
    pub fn standard(d: usize) -> Result<Self, FrameError> {
        Self::new(d, DEFAULT_RANDOM_PROBES, DEFAULT_PROBE_SEED)
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vectors
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }
}

/// Residuals measured when a frame was validated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation {
    /// `max |T·F − I|`.
    pub reconstruction_residual: f64,
    /// Worst relative isometry defect over the probes.
    pub isometry_error: f64,
    pub probes: usize,
}

/// A validated p-Schauder frame `({f_j}, {τ_j})` for `K^d`.
#[derive(Debug, Clone)]
pub struct PSchauderFrame {
    p: PExponent,
    analysis: Mat,
    synthesis: Mat,
    label: String,
    validation: Validation,
}

impl PartialEq for PSchauderFrame {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.analysis == other.analysis && self.synthesis == other.synthesis
    }
}

impl fmt::Display for PSchauderFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [p={}, d={}, n={}]", self.label, self.p.p(), self.dim(), self.size())
    }
}

impl PSchauderFrame {
    pub fn p(&self) -> PExponent {
        self.p
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.analysis.cols()
    }

    /// Number of frame elements `n`.
    pub fn size(&self) -> usize {
        self.analysis.rows()
    }

    /// `F`, n×d.
    pub fn analysis(&self) -> &Mat {
        &self.analysis
    }

    /// `T`, d×n.
    pub fn synthesis(&self) -> &Mat {
        &self.synthesis
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn validation(&self) -> Validation {
        self.validation
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Coefficients of the functional `f_j`.
    pub fn functional(&self, j: usize) -> CVec {
        self.analysis.row_vec(j)
    }

    /// The vector `τ_j`.
    pub fn vector(&self, j: usize) -> CVec {
        self.synthesis.column(j)
    }

    /// `θ_f x = (f_j(x))_j`.
    pub fn analyze(&self, x: &CVec) -> Result<CVec, FrameError> {
        Ok(matvec(&self.analysis, x)?)
    }

    /// `Σ_j c_j τ_j`.
    pub fn synthesize(&self, coefficients: &CVec) -> Result<CVec, FrameError> {
        Ok(matvec(&self.synthesis, coefficients)?)
    }

    /// Re-runs both axiom checks against an arbitrary probe set.
    pub fn revalidate(&self, probes: &ProbeSet) -> Result<Validation, FrameError> {
        validate(&self.analysis, &self.synthesis, self.p, probes)
    }
}

fn validate(u: &Mat, v: &Mat, p: PExponent, probes: &ProbeSet) -> Result<Validation, FrameError> {
    let (n, d) = (u.rows(), u.cols());
    if v.rows() != d || v.cols() != n {
        return Err(FrameError::Shape(format!(
            "analysis is {n}x{d} so synthesis must be {d}x{n}, got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    if n < d {
        return Err(FrameError::Shape(format!("n = {n} < d = {d}: reconstruction impossible")));
    }
    if probes.dim() != d {
        return Err(FrameError::Shape(format!("probe dimension {} != frame dimension {d}", probes.dim())));
    }
    let (residual, (row, col)) = matmul(v, u)?.identity_residual();
    if residual > RECON_TOL {
        return Err(FrameError::NotReconstructing { residual, row, col });
    }
    let mut worst = 0.0f64;
    for (probe, x) in probes.vectors().iter().enumerate() {
        let expected = pnorm(x, p.p());
        let actual = pnorm(&matvec(u, x)?, p.p());
        let relative_error = (actual - expected).abs() / expected;
        // written negated so that NaN fails too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(relative_error <= ISOMETRY_TOL) {
            return Err(FrameError::NotIsometric { probe, expected, actual, relative_error });
        }
        worst = worst.max(relative_error);
    }
    Ok(Validation { reconstruction_residual: residual, isometry_error: worst, probes: probes.count() })
}

/// Frame from a pair `(U, V)` with `V·U = I` and `U` an isometry into
/// ℓ^p([n]): `f_j` is row `j` of `U` and `τ_j` is column `j` of `V`.
pub fn frame_from_operators(u: Mat, v: Mat, p: f64, probes: &ProbeSet) -> Result<PSchauderFrame, FrameError> {
    let p = conjugate_exponent(p)?;
    let validation = validate(&u, &v, p, probes)?;
    let label = format!("custom-n{}-d{}", u.rows(), u.cols());
    Ok(PSchauderFrame { p, analysis: u, synthesis: v, label, validation })
}

fn build(u: Mat, v: Mat, p: f64, label: String) -> Result<PSchauderFrame, FrameError> {
    let probes = ProbeSet::standard(u.cols())?;
    Ok(frame_from_operators(u, v, p, &probes)?.with_label(label))
}

/// Coordinate functionals against the canonical basis.
pub fn identity_frame(d: usize, p: f64) -> Result<PSchauderFrame, FrameError> {
    let id = Mat::identity(d)?;
    build(id.clone(), id, p, format!("identity-d{d}"))
}

/// `F = DFT(d)`, `T = DFT(d)^H`, at `p = 2`.
pub fn fourier_frame(d: usize) -> Result<PSchauderFrame, FrameError> {
    let f = dft_matrix(d)?;
    let t = f.adjoint();
    build(f, t, 2.0, format!("fourier-d{d}"))
}

/// Parseval frame for `C^d` from the first `d` columns of an n×n unitary,
/// presented as a 2-Schauder frame with `T = F^H`.
pub fn parseval_frame_from_unitary(w: &Mat, d: usize) -> Result<PSchauderFrame, FrameError> {
    let n = w.rows();
    if w.cols() != n {
        return Err(FrameError::Shape(format!("W must be square, got {}x{}", n, w.cols())));
    }
    if d == 0 || d > n {
        return Err(FrameError::Shape(format!("need 1 <= d <= n, got d = {d}, n = {n}")));
    }
    let (residual, _) = matmul(&w.adjoint(), w)?.identity_residual();
    if residual > RECON_TOL {
        return Err(FrameError::NotUnitary { residual });
    }
    let f = w.first_columns(d)?;
    let t = f.adjoint();
    build(f, t, 2.0, format!("parseval-n{n}-d{d}"))
}

/// Splits coordinate `i` of `x` into analysis coefficients `w^{1/p}·x_i`,
/// one per weight `w` of `weights[i]`, with synthesis vectors `w^{1/q}·e_i`.
///
/// Since `Σ_w w = 1`, both axioms hold exactly up to rounding.
pub fn splitting_frame(d: usize, p: f64, weights: &[Vec<f64>]) -> Result<PSchauderFrame, FrameError> {
    let exp = conjugate_exponent(p)?;
    if d == 0 {
        return Err(FrameError::Shape("dimension must be positive".into()));
    }
    if weights.len() != d {
        return Err(FrameError::BadWeights(format!("expected {d} weight lists, got {}", weights.len())));
    }
    for (i, list) in weights.iter().enumerate() {
        if list.is_empty() {
            return Err(FrameError::BadWeights(format!("weight list {i} is empty")));
        }
        if let Some(w) = list.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(FrameError::BadWeights(format!("weight list {i} contains non-positive weight {w}")));
        }
        let sum: f64 = list.iter().sum();
        if (sum - 1.0).abs() > UNIT_TOL {
            return Err(FrameError::BadWeights(format!("weight list {i} sums to {sum}, not 1")));
        }
    }
    let n: usize = weights.iter().map(Vec::len).sum();
    let zero = Scalar::new(0.0, 0.0);
    let mut f = vec![zero; n * d];
    let mut t = vec![zero; d * n];
    let mut j = 0;
    for (i, list) in weights.iter().enumerate() {
        for &w in list {
            f[j * d + i] = Scalar::new(w.powf(1.0 / exp.p()), 0.0);
            t[i * n + j] = Scalar::new(w.powf(1.0 / exp.q()), 0.0);
            j += 1;
        }
    }
    let label = format!("splitting-d{d}-n{n}");
    build(Mat::new(n, d, f)?, Mat::new(d, n, t)?, p, label)
}

/// A permutation with a unimodular phase per position: the matrix with
/// `phases[i]` at `(i, perm[i])`. An isometry of every ℓ^p.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    phases: Vec<Scalar>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, phases: Vec<Scalar>) -> Result<Self, FrameError> {
        let d = perm.len();
        if d == 0 {
            return Err(FrameError::BadPermutation("empty permutation".into()));
        }
        if phases.len() != d {
            return Err(FrameError::BadPermutation(format!("{} phases for {d} positions", phases.len())));
        }
        let mut seen = vec![false; d];
        for &k in &perm {
            if k >= d || seen[k] {
                return Err(FrameError::BadPermutation(format!("{perm:?} is not a bijection on 0..{d}")));
            }
            seen[k] = true;
        }
        for (index, z) in phases.iter().enumerate() {
            let modulus = z.norm();
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !((modulus - 1.0).abs() <= UNIT_TOL) {
                return Err(FrameError::BadPhase { index, modulus });
            }
        }
        Ok(SignedPermutation { perm, phases })
    }

    /// Plain permutation with unit phases.
    pub fn permutation(perm: Vec<usize>) -> Result<Self, FrameError> {
        let d = perm.len();
        Self::new(perm, vec![Scalar::new(1.0, 0.0); d])
    }

    pub fn identity(d: usize) -> Result<Self, FrameError> {
        Self::permutation((0..d).collect())
    }

    /// Seeded random permutation with phases drawn from `{1, -1, i, -i}`.
    pub fn random(d: usize, seed: u64) -> Result<Self, FrameError> {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let mut rng = seeded_rng(seed);
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(&mut rng);
        let units = [Scalar::new(1.0, 0.0), Scalar::new(-1.0, 0.0), Scalar::new(0.0, 1.0), Scalar::new(0.0, -1.0)];
        let phases = (0..d).map(|_| units[rng.random_range(0..4)]).collect();
        Self::new(perm, phases)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[Scalar] {
        &self.phases
    }

    pub fn matrix(&self) -> Mat {
        let d = self.len();
        let mut data = vec![Scalar::new(0.0, 0.0); d * d];
        for (i, (&k, &z)) in self.perm.iter().zip(&self.phases).enumerate() {
            data[i * d + k] = z;
        }
        Mat::new(d, d, data).expect("phases are finite")
    }

    /// Inverse, which is the adjoint since the matrix is unitary.
    pub fn inverse_matrix(&self) -> Mat {
        self.matrix().adjoint()
    }
}

/// `F = P`, `T = P^{-1}` for a signed permutation `P`.
pub fn signed_permutation_frame(
    d: usize,
    p: f64,
    perm: Vec<usize>,
    phases: Vec<Scalar>,
) -> Result<PSchauderFrame, FrameError> {
    if perm.len() != d {
        return Err(FrameError::BadPermutation(format!("permutation of length {} for d = {d}", perm.len())));
    }
    let sp = SignedPermutation::new(perm, phases)?;
    build(sp.matrix(), sp.inverse_matrix(), p, format!("signed-perm-d{d}"))
}

/// `F' = P·F`, `T' = T·P^{-1}`: reorders and rephases the frame elements.
pub fn compose_frame(base: &PSchauderFrame, iso: &SignedPermutation) -> Result<PSchauderFrame, FrameError> {
    if iso.len() != base.size() {
        return Err(FrameError::Shape(format!(
            "signed permutation of length {} cannot act on a frame with n = {}",
            iso.len(),
            base.size()
        )));
    }
    let f = matmul(&iso.matrix(), base.analysis())?;
    let t = matmul(base.synthesis(), &iso.inverse_matrix())?;
    let label = format!("{}+perm", base.label());
    build(f, t, base.p().p(), label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random_unitary;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn probe_set_layout() {
        let probes = ProbeSet::standard(3).unwrap();
        assert_eq!(probes.count(), 3 + 1 + DEFAULT_RANDOM_PROBES);
        assert_eq!(probes.vectors()[1], CVec::basis(3, 1).unwrap());
        assert_eq!(probes.vectors()[3], CVec::from_real(&[1.0; 3]).unwrap());
        assert!(probes.vectors().iter().all(|v| !v.is_zero()));
        let again = ProbeSet::standard(3).unwrap();
        assert_eq!(probes.vectors(), again.vectors());
    }

    #[test]
    fn identity_frames_for_any_p() {
        for p in [1.5, 2.0, 2.5, 7.0] {
            let fr = identity_frame(3, p).unwrap();
            assert_eq!(fr.size(), 3);
            let x = CVec::new(vec![c(1.0, -2.0), c(0.5, 0.0), c(0.0, 3.0)]).unwrap();
            assert_eq!(fr.analyze(&x).unwrap(), x);
        }
        let one = identity_frame(1, 2.0).unwrap();
        assert_eq!(one.analysis(), &Mat::identity(1).unwrap());
        assert_eq!(one.synthesis(), &Mat::identity(1).unwrap());
    }

    #[test]
    fn operators_dft_pair_is_a_frame() {
        let f = dft_matrix(4).unwrap();
        let fr = frame_from_operators(f.clone(), f.adjoint(), 2.0, &ProbeSet::standard(4).unwrap()).unwrap();
        assert_eq!(fr.size(), 4);
        assert!(fr.validation().reconstruction_residual < 1e-12);
    }

    #[test]
    fn rank_deficient_synthesis_is_rejected() {
        let u = Mat::identity(2).unwrap();
        let v = Mat::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let err = frame_from_operators(u, v, 2.0, &ProbeSet::standard(2).unwrap()).unwrap_err();
        assert!(matches!(err, FrameError::NotReconstructing { row: 1, col: 1, .. }), "{err}");
    }

    #[test]
    fn non_isometric_analysis_is_rejected_with_witness() {
        // V·U = I but U = 2I stretches every vector
        let u = Mat::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let v = Mat::from_real_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let err = frame_from_operators(u, v, 3.0, &ProbeSet::standard(2).unwrap()).unwrap_err();
        match err {
            FrameError::NotIsometric { probe, expected, actual, .. } => {
                assert_eq!(probe, 0);
                assert_eq!((expected, actual), (1.0, 2.0));
            }
            other => panic!("unexpected {other}"),
        }
        // a p = 2 isometry is not a p = 3 isometry
        let f = dft_matrix(3).unwrap();
        let err = frame_from_operators(f.clone(), f.adjoint(), 3.0, &ProbeSet::standard(3).unwrap()).unwrap_err();
        assert!(matches!(err, FrameError::NotIsometric { .. }));
    }

    #[test]
    fn fewer_elements_than_dimension_is_rejected() {
        let u = Mat::from_real_rows(&[vec![1.0, 0.0]]).unwrap();
        let v = Mat::from_real_rows(&[vec![1.0], vec![0.0]]).unwrap();
        let err = frame_from_operators(u, v, 2.0, &ProbeSet::standard(2).unwrap()).unwrap_err();
        assert!(matches!(err, FrameError::Shape(_)));
    }

    #[test]
    fn fourier_frames() {
        let f1 = fourier_frame(1).unwrap();
        assert!(f1.analysis().max_abs_diff(&Mat::identity(1).unwrap()).unwrap() < 1e-15);
        let f2 = fourier_frame(2).unwrap();
        assert!(f2.validation().reconstruction_residual <= 1e-12);
        let f4 = fourier_frame(4).unwrap();
        assert!(f4.analysis().as_slice().iter().all(|z| (z.norm() - 0.5).abs() < 1e-15));
    }

    #[test]
    fn parseval_from_unitaries() {
        let fr = parseval_frame_from_unitary(&Mat::identity(3).unwrap(), 3).unwrap();
        assert_eq!(fr, identity_frame(3, 2.0).unwrap());

        let fr = parseval_frame_from_unitary(&dft_matrix(4).unwrap(), 2).unwrap();
        assert_eq!((fr.size(), fr.dim()), (4, 2));
        assert!(fr.validation().reconstruction_residual <= 1e-12);

        let w = random_unitary(6, 11).unwrap();
        let fr = parseval_frame_from_unitary(&w, 3).unwrap();
        assert!(fr.validation().isometry_error <= ISOMETRY_TOL);
        assert_eq!(fr.synthesis(), &fr.analysis().adjoint());
    }

    #[test]
    fn non_unitary_is_rejected() {
        let w = Mat::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(parseval_frame_from_unitary(&w, 1), Err(FrameError::NotUnitary { .. })));
        let w = random_unitary(3, 1).unwrap();
        assert!(matches!(parseval_frame_from_unitary(&w, 4), Err(FrameError::Shape(_))));
    }

    #[test]
    fn splitting_hand_checked_example() {
        let fr = splitting_frame(2, 3.0, &[vec![0.5, 0.5], vec![1.0]]).unwrap();
        assert_eq!(fr.size(), 3);
        let a = 2f64.powf(-1.0 / 3.0);
        let b = 2f64.powf(-2.0 / 3.0);
        let f = Mat::from_real_rows(&[vec![a, 0.0], vec![a, 0.0], vec![0.0, 1.0]]).unwrap();
        let t = Mat::from_real_rows(&[vec![b, b, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(fr.analysis().max_abs_diff(&f).unwrap() < 1e-15);
        assert!(fr.synthesis().max_abs_diff(&t).unwrap() < 1e-15);
        assert!(fr.validation().reconstruction_residual <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn splitting_degenerate_cases() {
        let fr = splitting_frame(3, 1.7, &[vec![1.0], vec![1.0], vec![1.0]]).unwrap();
        assert_eq!(fr, identity_frame(3, 1.7).unwrap());
        let fr = splitting_frame(1, 2.0, &[vec![0.25, 0.75]]).unwrap();
        let col = Mat::from_real_rows(&[vec![0.5], vec![0.75f64.sqrt()]]).unwrap();
        assert!(fr.analysis().max_abs_diff(&col).unwrap() < 1e-15);
    }

    #[test]
    fn splitting_rejects_bad_weights() {
        for w in [
            vec![vec![0.5, 0.4], vec![1.0]],
            vec![vec![1.5, -0.5], vec![1.0]],
            vec![vec![], vec![1.0]],
            vec![vec![1.0]],
            vec![vec![0.0, 1.0], vec![1.0]],
        ] {
            assert!(matches!(splitting_frame(2, 3.0, &w), Err(FrameError::BadWeights(_))), "{w:?}");
        }
    }

    #[test]
    fn signed_permutations() {
        let id = signed_permutation_frame(3, 2.5, vec![0, 1, 2], vec![c(1.0, 0.0); 3]).unwrap();
        assert_eq!(id, identity_frame(3, 2.5).unwrap());

        let swap = signed_permutation_frame(2, 3.0, vec![1, 0], vec![c(1.0, 0.0); 2]).unwrap();
        let x = CVec::from_real(&[2.0, -5.0]).unwrap();
        assert_eq!(swap.analyze(&x).unwrap().as_slice(), &[c(-5.0, 0.0), c(2.0, 0.0)]);

        let ph = signed_permutation_frame(2, 1.5, vec![0, 1], vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let y = ph.analyze(&x).unwrap();
        assert_eq!(y.iter().map(|z| z.norm()).collect::<Vec<_>>(), vec![2.0, 5.0]);

        assert!(matches!(
            signed_permutation_frame(2, 2.0, vec![0, 1], vec![c(1.1, 0.0), c(1.0, 0.0)]),
            Err(FrameError::BadPhase { index: 0, .. })
        ));
        assert!(matches!(
            signed_permutation_frame(2, 2.0, vec![1, 1], vec![c(1.0, 0.0); 2]),
            Err(FrameError::BadPermutation(_))
        ));
    }

    #[test]
    fn composition() {
        let base = splitting_frame(2, 3.0, &[vec![0.5, 0.5], vec![1.0]]).unwrap();
        let same = compose_frame(&base, &SignedPermutation::identity(3).unwrap()).unwrap();
        assert_eq!(same, base);

        let swap = SignedPermutation::permutation(vec![2, 1, 0]).unwrap();
        let once = compose_frame(&base, &swap).unwrap();
        assert_eq!(once.analysis().row(0), base.analysis().row(2));
        let twice = compose_frame(&once, &swap).unwrap();
        assert_eq!(twice.analysis(), base.analysis());

        let err = compose_frame(&base, &SignedPermutation::identity(2).unwrap()).unwrap_err();
        assert!(matches!(err, FrameError::Shape(_)));
    }

    #[test]
    fn validation_is_idempotent() {
        let probes = ProbeSet::standard(3).unwrap();
        let frames = vec![
            identity_frame(3, 1.5).unwrap(),
            fourier_frame(3).unwrap(),
            parseval_frame_from_unitary(&random_unitary(5, 2).unwrap(), 3).unwrap(),
            splitting_frame(3, 3.0, &[vec![0.25, 0.75], vec![1.0], vec![0.5, 0.25, 0.25]]).unwrap(),
        ];
        for fr in frames {
            let again =
                frame_from_operators(fr.analysis().clone(), fr.synthesis().clone(), fr.p().p(), &probes).unwrap();
            assert_eq!(again, fr);
        }
    }

    fn dyadic_weights() -> impl Strategy<Value = Vec<f64>> {
        // random binary splits of 1 stay dyadic
        prop::collection::vec(any::<bool>(), 0..5).prop_map(|splits| {
            let mut w = vec![1.0f64];
            for (i, s) in splits.into_iter().enumerate() {
                let k = i % w.len();
                if s {
                    let half = w[k] / 2.0;
                    w[k] = half;
                    w.push(half);
                }
            }
            w
        })
    }

    proptest! {
        #[test]
        fn dyadic_splitting_is_exact_to_a_few_ulps(
            weights in prop::collection::vec(dyadic_weights(), 1..5),
            p in prop::sample::select(vec![1.5, 2.0, 3.0, 4.0]),
        ) {
            let d = weights.len();
            let fr = splitting_frame(d, p, &weights).unwrap();
            prop_assert!(fr.validation().reconstruction_residual <= 4.0 * f64::EPSILON);
            for i in 0..d {
                let e = CVec::basis(d, i).unwrap();
                let norm = pnorm(&fr.analyze(&e).unwrap(), p);
                prop_assert!((norm - 1.0).abs() <= 4.0 * f64::EPSILON, "{}", norm);
            }
        }

        #[test]
        fn unitary_frames_take_the_adjoint_as_synthesis(n in 1usize..9, seed in any::<u64>()) {
            let w = random_unitary(n, seed).unwrap();
            for d in 1..=n {
                let fr = parseval_frame_from_unitary(&w, d).unwrap();
                prop_assert_eq!(fr.synthesis(), &fr.analysis().adjoint());
                prop_assert!(fr.validation().reconstruction_residual <= RECON_TOL);
                prop_assert!(fr.validation().isometry_error <= ISOMETRY_TOL);
            }
        }
    }
}
