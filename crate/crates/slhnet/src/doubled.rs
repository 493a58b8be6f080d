//! Doubled-up matrices over the stacked mode vector (a; a#).
//!
//! A doubled matrix pairs a "minus" block acting on annihilators with a
//! "plus" block acting on creators; the full 2m x 2n expansion is
//!
//!   [[ E-,        E+       ],
//!    [ conj(E+),  conj(E-) ]]
//!
//! The ♭ (flat) operation is z♭ = J_n z† J_m with J_k = diag(I_k, -I_k).
//! It is an involution and an anti-homomorphism, and maps the doubled class
//! to itself: Δ(E-, E+)♭ = Δ(E-†, -E+ᵀ).

use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, block2x2, conj_mat, identity, max_abs, max_abs_diff, scale_re, split_blocks,
    transpose, zeros, CMat,
};

/// Default absolute tolerance for recognizing the doubled block pattern.
pub const BLOCK_PATTERN_TOL: f64 = 1e-12;

/// z♭ = J z† J. Accepts any matrix with even positive dimensions.
pub fn flat(z: &CMat) -> Result<CMat> {
    let (e11, e12, e21, e22) = split_blocks(&adjoint(z))?;
    Ok(block2x2(&e11, &scale_re(&e12, -1.0), &scale_re(&e21, -1.0), &e22))
}

/// Re♭(x) = (x + x♭)/2 for square doubled-dimension x.
pub fn re_flat(x: &CMat) -> Result<CMat> {
    if x.nrows() != x.ncols() {
        return Err(Error::Dimension(format!(
            "re_flat input must be square, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    let f = flat(x)?;
    Ok(scale_re(&(x + &f), 0.5))
}

/// A matrix stored as its minus/plus blocks with the conjugate bottom row implied.
#[derive(Debug, Clone)]
pub struct DoubledMatrix {
    minus: CMat,
    plus: CMat,
}

impl DoubledMatrix {
    pub fn new(minus: CMat, plus: CMat) -> Result<Self> {
        if minus.dim() != plus.dim() {
            return Err(Error::Dimension(format!(
                "minus block is {}x{} but plus block is {}x{}",
                minus.nrows(),
                minus.ncols(),
                plus.nrows(),
                plus.ncols()
            )));
        }
        if minus.nrows() == 0 || minus.ncols() == 0 {
            return Err(Error::Dimension("doubled matrix blocks must be nonempty".into()));
        }
        Ok(DoubledMatrix { minus, plus })
    }

    pub fn identity(n: usize) -> Self {
        DoubledMatrix { minus: identity(n), plus: zeros(n, n) }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        DoubledMatrix { minus: zeros(m, n), plus: zeros(m, n) }
    }

    pub fn minus(&self) -> &CMat {
        &self.minus
    }

    pub fn plus(&self) -> &CMat {
        &self.plus
    }

    /// Block rows of the stored (top) half: m.
    pub fn rows(&self) -> usize {
        self.minus.nrows()
    }

    /// Block columns of the stored (top) half: n.
    pub fn cols(&self) -> usize {
        self.minus.ncols()
    }

    pub fn to_full(&self) -> CMat {
        block2x2(
            &self.minus,
            &self.plus,
            &conj_mat(&self.plus),
            &conj_mat(&self.minus),
        )
    }

    /// Split a full matrix, verifying the conjugate block pattern within `tol`.
    pub fn from_full_tol(full: &CMat, tol: f64) -> Result<Self> {
        let (e11, e12, e21, e22) = split_blocks(full)?;
        let d1 = max_abs_diff(&e21, &conj_mat(&e12));
        let d2 = max_abs_diff(&e22, &conj_mat(&e11));
        let defect = d1.max(d2);
        if defect > tol {
            return Err(Error::Validation(format!(
                "matrix does not have the doubled block pattern (defect {defect:.3e} > {tol:.1e})"
            )));
        }
        DoubledMatrix::new(e11, e12)
    }

    pub fn from_full(full: &CMat) -> Result<Self> {
        Self::from_full_tol(full, BLOCK_PATTERN_TOL)
    }

    /// Δ(E-, E+)♭ = Δ(E-†, -E+ᵀ).
    pub fn flat(&self) -> Self {
        DoubledMatrix {
            minus: adjoint(&self.minus),
            plus: scale_re(&transpose(&self.plus), -1.0),
        }
    }

    /// Block product; the doubled class is closed under multiplication.
    pub fn mul(&self, rhs: &DoubledMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::Dimension(format!(
                "doubled product shape mismatch: {}x{} times {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        let minus = self.minus.dot(&rhs.minus) + self.plus.dot(&conj_mat(&rhs.plus));
        let plus = self.minus.dot(&rhs.plus) + self.plus.dot(&conj_mat(&rhs.minus));
        DoubledMatrix::new(minus, plus)
    }

    pub fn add(&self, rhs: &DoubledMatrix) -> Result<Self> {
        if self.minus.dim() != rhs.minus.dim() {
            return Err(Error::Dimension("doubled sum shape mismatch".into()));
        }
        DoubledMatrix::new(&self.minus + &rhs.minus, &self.plus + &rhs.plus)
    }

    pub fn sub(&self, rhs: &DoubledMatrix) -> Result<Self> {
        if self.minus.dim() != rhs.minus.dim() {
            return Err(Error::Dimension("doubled difference shape mismatch".into()));
        }
        DoubledMatrix::new(&self.minus - &rhs.minus, &self.plus - &rhs.plus)
    }

    pub fn scale_re(&self, k: f64) -> Self {
        DoubledMatrix {
            minus: scale_re(&self.minus, k),
            plus: scale_re(&self.plus, k),
        }
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.minus).max(max_abs(&self.plus))
    }
}
