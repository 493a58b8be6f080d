//! Thin wrappers over the LAPACK-backed primitives plus small matrix helpers
//! shared by every module. All dense work is on `Array2<Complex64>`.

use ndarray::{concatenate, s, Array1, Array2, Axis};
use ndarray_linalg::{Eig, EigVals, Eigh, Inverse, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Array2<C64>;

pub fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn cone() -> C64 {
    C64::new(1.0, 0.0)
}

pub fn identity(n: usize) -> CMat {
    Array2::from_shape_fn((n, n), |(i, j)| if i == j { cone() } else { czero() })
}

pub fn zeros(r: usize, c: usize) -> CMat {
    Array2::from_elem((r, c), czero())
}

/// Conjugate transpose.
pub fn adjoint(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

/// Elementwise conjugate (no transpose).
pub fn conj_mat(a: &CMat) -> CMat {
    a.mapv(|z| z.conj())
}

pub fn transpose(a: &CMat) -> CMat {
    a.t().to_owned()
}

/// Largest absolute entry; the max-norm used by every tolerance check.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
}

pub fn all_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// (A + A†)/2.
pub fn hermitize(a: &CMat) -> CMat {
    let ad = adjoint(a);
    (a + &ad).mapv(|z| z * 0.5)
}

/// (A + Aᵀ)/2.
pub fn symmetrize(a: &CMat) -> CMat {
    let at = transpose(a);
    (a + &at).mapv(|z| z * 0.5)
}

pub fn hermiticity_defect(a: &CMat) -> f64 {
    max_abs_diff(a, &adjoint(a))
}

pub fn symmetry_defect(a: &CMat) -> f64 {
    max_abs_diff(a, &transpose(a))
}

/// ‖S†S − I‖_max; zero for exactly unitary S.
pub fn unitarity_defect(s_mat: &CMat) -> f64 {
    let m = s_mat.nrows();
    let prod = adjoint(s_mat).dot(s_mat);
    max_abs_diff(&prod, &identity(m))
}

pub fn require_square(a: &CMat, what: &str) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

/// Eigenvalues of a general complex matrix (zgeev).
pub fn eigenvalues(a: &CMat) -> Result<Array1<C64>> {
    require_square(a, "eigenvalue input")?;
    if !all_finite(a) {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    Ok(a.eigvals()?)
}

/// Eigenvalues and right eigenvectors (columns) of a general complex matrix.
pub fn eigen_pairs(a: &CMat) -> Result<(Array1<C64>, CMat)> {
    require_square(a, "eigenvalue input")?;
    Ok(a.eig()?)
}

/// Eigenvalues of a Hermitian matrix, ascending (zheev). Input is hermitized
/// first so callers may pass matrices with roundoff-level asymmetry.
pub fn hermitian_eigenvalues(a: &CMat) -> Result<Array1<f64>> {
    require_square(a, "hermitian eigenvalue input")?;
    let h = hermitize(a);
    let (w, _) = h.eigh(UPLO::Lower)?;
    Ok(w)
}

/// Singular values in descending order (zgesvd).
pub fn singular_values(a: &CMat) -> Result<Array1<f64>> {
    if !all_finite(a) {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    let (_, s, _) = a.svd(false, false)?;
    Ok(s)
}

/// Largest singular value.
pub fn spectral_norm(a: &CMat) -> Result<f64> {
    let s = singular_values(a)?;
    Ok(s.iter().copied().fold(0.0f64, f64::max))
}

/// Smallest singular value.
pub fn sigma_min(a: &CMat) -> Result<f64> {
    let s = singular_values(a)?;
    Ok(s.iter().copied().fold(f64::INFINITY, f64::min))
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    require_square(a, "inverse input")?;
    Ok(a.inv()?)
}

/// 2-norm condition number estimate via SVD.
pub fn condition_estimate(a: &CMat) -> Result<f64> {
    let s = singular_values(a)?;
    let smax = s.iter().copied().fold(0.0f64, f64::max);
    let smin = s.iter().copied().fold(f64::INFINITY, f64::min);
    if smin == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(smax / smin)
}

/// Assemble [[a, b], [c, d]] from equally sized blocks.
pub fn block2x2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let top = concatenate![Axis(1), a.view(), b.view()];
    let bot = concatenate![Axis(1), c.view(), d.view()];
    concatenate![Axis(0), top, bot]
}

/// Split a 2m x 2n matrix into its four m x n blocks.
pub fn split_blocks(z: &CMat) -> Result<(CMat, CMat, CMat, CMat)> {
    let (r, c) = z.dim();
    if r % 2 != 0 || c % 2 != 0 || r == 0 || c == 0 {
        return Err(Error::Dimension(format!(
            "doubled matrix must have even positive dimensions, got {r}x{c}"
        )));
    }
    let (m, n) = (r / 2, c / 2);
    Ok((
        z.slice(s![..m, ..n]).to_owned(),
        z.slice(s![..m, n..]).to_owned(),
        z.slice(s![m.., ..n]).to_owned(),
        z.slice(s![m.., n..]).to_owned(),
    ))
}

pub fn scale(a: &CMat, k: C64) -> CMat {
    a.mapv(|z| z * k)
}

pub fn scale_re(a: &CMat, k: f64) -> CMat {
    a.mapv(|z| z * k)
}
