//! Dense complex vectors and matrices with ℓ^p norm machinery.
//!
//! Everything here is immutable after construction. Real data is embedded
//! with a zero imaginary part so that a single code path serves both the
//! real and the complex field.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Field element. Reals are stored with `im == 0`.
pub type Scalar = Complex64;

/// Exponents closer to 1 than this are rejected: the conjugate exponent
/// would exceed 1e6 and the Hölder steps lose all precision.
pub const MIN_P_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

fn all_finite(data: &[Scalar]) -> bool {
    data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// The seeded generator used everywhere in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard complex Gaussian sample (independent N(0,1) parts).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Scalar::new(re, im)
}

/// A Hölder pair `(p, q)` with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
    q: f64,
}

impl PExponent {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The pair with the roles of `p` and `q` exchanged.
    pub fn dual(&self) -> PExponent {
        PExponent { p: self.q, q: self.p }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={})", self.p, self.q)
    }
}

/// Builds the Hölder pair for `p`, with `q = p / (p - 1)`.
pub fn conjugate_exponent(p: f64) -> Result<PExponent, NumericsError> {
    if !p.is_finite() {
        return Err(NumericsError::Domain(format!("exponent p = {p} is not finite")));
    }
    if p <= 1.0 {
        return Err(NumericsError::Domain(format!("exponent p = {p} must exceed 1")));
    }
    if p < 1.0 + MIN_P_MARGIN {
        return Err(NumericsError::Domain(format!(
            "exponent p = {p} is within {MIN_P_MARGIN:e} of 1; its conjugate is unusable"
        )));
    }
    Ok(PExponent { p, q: p / (p - 1.0) })
}

/// Complex vector of fixed length `d >= 1` with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec(Vec<Scalar>);

impl CVec {
    pub fn new(entries: Vec<Scalar>) -> Result<Self, NumericsError> {
        if entries.is_empty() {
            return Err(NumericsError::Shape("vector must have at least one entry".into()));
        }
        if !all_finite(&entries) {
            return Err(NumericsError::NonFinite("vector"));
        }
        Ok(CVec(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self, NumericsError> {
        Self::new(entries.iter().map(|&r| Scalar::new(r, 0.0)).collect())
    }

    pub fn zeros(d: usize) -> Result<Self, NumericsError> {
        Self::new(vec![Scalar::new(0.0, 0.0); d])
    }

    /// Standard basis vector `e_i` in dimension `d`.
    pub fn basis(d: usize, i: usize) -> Result<Self, NumericsError> {
        if i >= d {
            return Err(NumericsError::Shape(format!("basis index {i} out of range for d = {d}")));
        }
        let mut v = vec![Scalar::new(0.0, 0.0); d];
        v[i] = Scalar::new(1.0, 0.0);
        Self::new(v)
    }

    /// Seeded standard complex Gaussian vector.
    pub fn random_gaussian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self, NumericsError> {
        Self::new((0..d).map(|_| complex_gaussian(rng)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Scalar> {
        self.0
    }

    /// Multiplies every entry by `lambda`.
    pub fn scale(&self, lambda: Scalar) -> Result<Self, NumericsError> {
        Self::new(self.0.iter().map(|z| z * lambda).collect())
    }

    pub fn max_modulus(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }
}

impl Index<usize> for CVec {
    type Output = Scalar;

    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

/// ℓ^p norm of `x`. Pass `f64::INFINITY` for the max-modulus norm.
///
/// The sum is evaluated on `x / max|x_i|` and rescaled, which keeps large
/// exponents from overflowing. Panics if `p < 1` or `p` is NaN.
pub fn pnorm(x: &CVec, p: f64) -> f64 {
    assert!(p >= 1.0, "pnorm requires p >= 1, got {p}");
    let scale = x.max_modulus();
    if scale == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return scale;
    }
    if p == 1.0 {
        return x.iter().map(|z| z.norm()).sum();
    }
    if p == 2.0 {
        let s: f64 = x.iter().map(|z| (z.norm() / scale).powi(2)).sum();
        return scale * s.sqrt();
    }
    let s: f64 = x.iter().map(|z| (z.norm() / scale).powf(p)).sum();
    scale * s.powf(1.0 / p)
}

/// `pnorm(x, p)^p`, computed without the final root.
pub fn pnorm_pow(x: &CVec, p: f64) -> f64 {
    assert!(p >= 1.0 && p.is_finite(), "pnorm_pow requires finite p >= 1, got {p}");
    x.iter().map(|z| z.norm().powf(p)).sum()
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, NumericsError> {
        if rows == 0 || cols == 0 {
            return Err(NumericsError::Shape(format!("matrix dimensions {rows}x{cols} must be positive")));
        }
        if rows * cols != data.len() {
            return Err(NumericsError::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if !all_finite(&data) {
            return Err(NumericsError::NonFinite("matrix"));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, NumericsError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(NumericsError::Shape(format!("row {i} has {} entries, expected {c}", row.len())));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, NumericsError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::new(v, 0.0)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[CVec]) -> Result<Self, NumericsError> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, CVec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(NumericsError::Shape("columns have differing lengths".into()));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            data.extend(columns.iter().map(|c| c[i]));
        }
        Self::new(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, NumericsError> {
        Self::new(rows, cols, vec![Scalar::new(0.0, 0.0); rows * cols])
    }

    pub fn identity(d: usize) -> Result<Self, NumericsError> {
        let mut m = Self::zeros(d, d)?;
        for i in 0..d {
            m.data[i * d + i] = Scalar::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> CVec {
        CVec(self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    /// Leading `k` columns.
    pub fn first_columns(&self, k: usize) -> Result<Mat, NumericsError> {
        if k == 0 || k > self.cols {
            return Err(NumericsError::Shape(format!("cannot take {k} of {} columns", self.cols)));
        }
        let data = (0..self.rows)
            .flat_map(|i| self.row(i)[..k].to_vec())
            .collect();
        Mat::new(self.rows, k, data)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat) -> Result<f64, NumericsError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(NumericsError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self - I`, with the position attaining it.
    pub fn identity_residual(&self) -> (f64, (usize, usize)) {
        let mut worst = (0.0, (0, 0));
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                let r = (self[(i, j)] - target).norm();
                if r > worst.0 {
                    worst = (r, (i, j));
                }
            }
        }
        worst
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

pub fn matvec(a: &Mat, x: &CVec) -> Result<CVec, NumericsError> {
    if a.cols != x.len() {
        return Err(NumericsError::Shape(format!(
            "matvec: {}x{} matrix against vector of length {}",
            a.rows,
            a.cols,
            x.len()
        )));
    }
    let out = (0..a.rows)
        .map(|i| a.row(i).iter().zip(x.iter()).map(|(m, v)| m * v).sum())
        .collect();
    CVec::new(out)
}

pub fn matmul(a: &Mat, b: &Mat) -> Result<Mat, NumericsError> {
    if a.cols != b.rows {
        return Err(NumericsError::Shape(format!(
            "matmul: {}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut data = vec![Scalar::new(0.0, 0.0); a.rows * b.cols];
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a[(i, k)];
            let out = &mut data[i * b.cols..(i + 1) * b.cols];
            for (o, bkj) in out.iter_mut().zip(b.row(k)) {
                *o += aik * bkj;
            }
        }
    }
    Mat::new(a.rows, b.cols, data)
}

/// Unitary DFT matrix, entry `(j, k) = d^{-1/2} exp(-2πi jk / d)` with
/// zero-based indices.
pub fn dft_matrix(d: usize) -> Result<Mat, NumericsError> {
    if d == 0 {
        return Err(NumericsError::Shape("DFT dimension must be positive".into()));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut data = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            // reduce jk mod d first so the angle stays in [0, 2π)
            let r = (j * k) % d;
            let angle = -2.0 * PI * r as f64 / d as f64;
            data.push(Scalar::from_polar(norm, angle));
        }
    }
    Mat::new(d, d, data)
}

/// Orthonormalizes the columns of `m` in place (modified Gram-Schmidt,
/// applied twice for stability).
fn orthonormalize_columns(m: &mut [Vec<Scalar>]) -> Result<(), NumericsError> {
    for j in 0..m.len() {
        for _pass in 0..2 {
            for i in 0..j {
                let (done, rest) = m.split_at_mut(j);
                let qi = &done[i];
                let cj = &mut rest[0];
                let proj: Scalar = qi.iter().zip(cj.iter()).map(|(q, c)| q.conj() * c).sum();
                for (c, q) in cj.iter_mut().zip(qi) {
                    *c -= proj * q;
                }
            }
        }
        let norm = m[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(NumericsError::Domain("degenerate random matrix".into()));
        }
        for c in m[j].iter_mut() {
            *c /= norm;
        }
    }
    Ok(())
}

fn random_orthonormal(d: usize, seed: u64, complex: bool) -> Result<Mat, NumericsError> {
    if d == 0 {
        return Err(NumericsError::Shape("dimension must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut columns: Vec<Vec<Scalar>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if complex {
                        complex_gaussian(&mut rng)
                    } else {
                        Scalar::new(rng.sample(StandardNormal), 0.0)
                    }
                })
                .collect()
        })
        .collect();
    orthonormalize_columns(&mut columns)?;
    let cols: Vec<CVec> = columns.into_iter().map(CVec).collect();
    Mat::from_columns(&cols)
}

/// Seeded Haar-like random unitary: Gram-Schmidt of a complex Gaussian matrix.
pub fn random_unitary(d: usize, seed: u64) -> Result<Mat, NumericsError> {
    random_orthonormal(d, seed, true)
}

/// Real counterpart of [`random_unitary`].
pub fn random_orthogonal(d: usize, seed: u64) -> Result<Mat, NumericsError> {
    random_orthonormal(d, seed, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn conjugate_exponent_closed_forms() {
        let e = conjugate_exponent(2.0).unwrap();
        assert_eq!((e.p(), e.q()), (2.0, 2.0));
        let e = conjugate_exponent(3.0).unwrap();
        assert_eq!(e.q(), 1.5);
        let e = conjugate_exponent(1.25).unwrap();
        assert!((e.q() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn conjugate_exponent_rejects_bad_p() {
        for p in [1.0, 0.5, -2.0, f64::INFINITY, f64::NAN, 1.0 + 1e-7] {
            assert!(matches!(conjugate_exponent(p), Err(NumericsError::Domain(_))), "p = {p}");
        }
        assert!(conjugate_exponent(1.0 + 2e-6).is_ok());
    }

    #[test]
    fn pnorm_examples() {
        let x = CVec::from_real(&[3.0, 4.0]).unwrap();
        assert_eq!(pnorm(&x, 2.0), 5.0);
        let x = CVec::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert!((pnorm(&x, 3.0) - 3f64.powf(1.0 / 3.0)).abs() < 1e-15);
        let x = CVec::from_real(&[1.0, -2.0, 0.0]).unwrap();
        assert_eq!(pnorm(&x, 1.0), 3.0);
        assert_eq!(pnorm(&x, f64::INFINITY), 2.0);
        assert_eq!(pnorm(&CVec::zeros(3).unwrap(), 1.5), 0.0);
    }

    #[test]
    fn vectors_reject_non_finite_and_empty() {
        assert!(CVec::new(vec![]).is_err());
        assert_eq!(CVec::new(vec![c(f64::NAN, 0.0)]), Err(NumericsError::NonFinite("vector")));
        assert!(Mat::new(1, 1, vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(Mat::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn matvec_examples() {
        let x = CVec::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(matvec(&Mat::identity(3).unwrap(), &x).unwrap(), x);
        let y = matvec(&Mat::zeros(2, 2).unwrap(), &CVec::from_real(&[5.0, 7.0]).unwrap()).unwrap();
        assert!(y.is_zero());
        let swap = Mat::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let v = CVec::new(vec![c(1.0, 2.0), c(-3.0, 0.5)]).unwrap();
        assert_eq!(matvec(&swap, &v).unwrap().as_slice(), &[c(-3.0, 0.5), c(1.0, 2.0)]);
        assert!(matches!(matvec(&swap, &x), Err(NumericsError::Shape(_))));
    }

    #[test]
    fn matmul_examples() {
        let a = Mat::from_rows(vec![vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(3.0, 2.0)]]).unwrap();
        assert_eq!(matmul(&a, &Mat::identity(2).unwrap()).unwrap(), a);
        let perm = Mat::from_real_rows(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(matmul(&perm, &perm.adjoint()).unwrap(), Mat::identity(3).unwrap());
        // DFT(2) DFT(2)^H by hand: (1/2)[[1,1],[1,-1]]^2 = I
        let f2 = dft_matrix(2).unwrap();
        let prod = matmul(&f2, &f2.adjoint()).unwrap();
        assert!(prod.max_abs_diff(&Mat::identity(2).unwrap()).unwrap() < 1e-15);
        assert!(matmul(&a, &perm).is_err());
    }

    #[test]
    fn dft_examples() {
        assert_eq!(dft_matrix(1).unwrap(), Mat::identity(1).unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f2 = dft_matrix(2).unwrap();
        let expected = Mat::from_real_rows(&[vec![s, s], vec![s, -s]]).unwrap();
        assert!(f2.max_abs_diff(&expected).unwrap() < 1e-15);
        // exp(-2πi/4)/2 = -i/2
        let f4 = dft_matrix(4).unwrap();
        assert!((f4[(1, 1)] - c(0.0, -0.5)).norm() < 1e-15);
        for d in 1..=16 {
            let f = dft_matrix(d).unwrap();
            let (res, _) = matmul(&f, &f.adjoint()).unwrap().identity_residual();
            assert!(res < 1e-12, "d = {d}: {res}");
        }
    }

    #[test]
    fn random_unitary_contract() {
        let u1 = random_unitary(1, 3).unwrap();
        assert!((u1[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert_eq!(random_unitary(5, 9).unwrap(), random_unitary(5, 9).unwrap());
        assert_ne!(random_unitary(5, 9).unwrap(), random_unitary(5, 10).unwrap());
        let u = random_unitary(8, 42).unwrap();
        let (res, _) = matmul(&u.adjoint(), &u).unwrap().identity_residual();
        assert!(res <= 1e-10, "{res}");
        let o = random_orthogonal(6, 1).unwrap();
        assert!(o.is_real());
        assert!(matmul(&o.adjoint(), &o).unwrap().identity_residual().0 <= 1e-10);
    }

    #[test]
    fn dft_twice_reverses() {
        for d in 1..=16 {
            let f = dft_matrix(d).unwrap();
            let mut rng = seeded_rng(d as u64);
            let x = CVec::random_gaussian(d, &mut rng).unwrap();
            let y = matvec(&f, &matvec(&f, &x).unwrap()).unwrap();
            for j in 0..d {
                assert!((y[j] - x[(d - j) % d]).norm() < 1e-10);
            }
        }
    }

    fn arb_vec(max_len: usize) -> impl Strategy<Value = CVec> {
        prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 1..max_len)
            .prop_map(|v| CVec::new(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
    }

    fn arb_mat(r: usize, k: usize) -> impl Strategy<Value = Mat> {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), r * k)
            .prop_map(move |v| Mat::new(r, k, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn pnorm_is_monotone_in_p(x in arb_vec(12), p1 in 1.0..6.0f64, dp in 0.0..6.0f64) {
            let p2 = p1 + dp;
            let (n1, n2) = (pnorm(&x, p1), pnorm(&x, p2));
            prop_assert!(n2 <= n1 * (1.0 + 1e-12), "{} > {}", n2, n1);
            prop_assert!(pnorm(&x, f64::INFINITY) <= n2 * (1.0 + 1e-12));
        }

        #[test]
        fn conjugation_is_an_involution(p in 1.001..50.0f64) {
            let e = conjugate_exponent(p).unwrap();
            prop_assert!((1.0 / e.p() + 1.0 / e.q() - 1.0).abs() < 1e-12);
            let back = conjugate_exponent(e.q()).unwrap();
            prop_assert!((back.q() - p).abs() <= 1e-12 * p);
        }

        #[test]
        fn matmul_is_associative(a in arb_mat(3, 4), b in arb_mat(4, 2), m in arb_mat(2, 5)) {
            let left = matmul(&matmul(&a, &b).unwrap(), &m).unwrap();
            let right = matmul(&a, &matmul(&b, &m).unwrap()).unwrap();
            let scale = left.max_modulus().max(1.0);
            prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-10 * scale);
        }
    }
}
