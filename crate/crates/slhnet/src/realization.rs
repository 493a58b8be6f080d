//! Quadratic-form state space of an SLH triple over the doubled mode vector.
//!
//! For a triple with doubled coupling C̃ = Δ(C-, C+) and scattering block
//! D̃ = Δ(S, 0):
//!
//!   Ã = -½ C̃♭ C̃ + Δ(-iΩ-, -iΩ+)
//!   B̃ = -C̃♭ D̃
//!   C̃, D̃ as above
//!
//! Mean-square stability of the network is equivalent to Ã being Hurwitz.

use crate::doubled::DoubledMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, require_square, C64, CMat};
use crate::slh::SlhTriple;

/// Structured-realization matrices must match the doubled block pattern this tightly.
pub const REALIZATION_PATTERN_TOL: f64 = 1e-10;

/// Spectral abscissae closer to the imaginary axis than this do not count as stable.
pub const STABILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct StateSpaceRealization {
    a: CMat,
    b: CMat,
    c: CMat,
    d: CMat,
    n_modes: usize,
    n_channels: usize,
}

impl StateSpaceRealization {
    pub fn new(a: CMat, b: CMat, c: CMat, d: CMat) -> Result<Self> {
        let an = DoubledMatrix::from_full_tol(&a, REALIZATION_PATTERN_TOL)
            .map_err(|e| Error::Validation(format!("drift matrix: {e}")))?;
        let bn = DoubledMatrix::from_full_tol(&b, REALIZATION_PATTERN_TOL)
            .map_err(|e| Error::Validation(format!("input matrix: {e}")))?;
        let cn = DoubledMatrix::from_full_tol(&c, REALIZATION_PATTERN_TOL)
            .map_err(|e| Error::Validation(format!("output matrix: {e}")))?;
        let dn = DoubledMatrix::from_full_tol(&d, REALIZATION_PATTERN_TOL)
            .map_err(|e| Error::Validation(format!("feedthrough matrix: {e}")))?;
        let n = an.rows();
        let m = dn.rows();
        if an.cols() != n || bn.rows() != n || bn.cols() != m || cn.rows() != m || cn.cols() != n
            || dn.cols() != m
        {
            return Err(Error::Dimension("state-space block shapes are inconsistent".into()));
        }
        Ok(StateSpaceRealization { a, b, c, d, n_modes: n, n_channels: m })
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn c(&self) -> &CMat {
        &self.c
    }

    pub fn d(&self) -> &CMat {
        &self.d
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }
}

/// Build the doubled state space of a triple. All four matrices are assembled
/// from block operations, so the doubled pattern holds exactly.
pub fn to_state_space(triple: &SlhTriple) -> Result<StateSpaceRealization> {
    let c_dbl = triple.coupling();
    let c_flat = c_dbl.flat();
    let d_dbl = DoubledMatrix::new(
        triple.s().clone(),
        crate::linalg::zeros(triple.n_channels(), triple.n_channels()),
    )?;
    let drift = DoubledMatrix::from_full(&triple.hamiltonian().doubled_drift())?;
    let a_dbl = c_flat.mul(&c_dbl)?.scale_re(-0.5).add(&drift)?;
    let b_dbl = c_flat.mul(&d_dbl)?.scale_re(-1.0);
    StateSpaceRealization::new(
        a_dbl.to_full(),
        b_dbl.to_full(),
        c_dbl.to_full(),
        d_dbl.to_full(),
    )
}

/// Largest real part over the spectrum.
pub fn spectral_abscissa(a: &CMat) -> Result<f64> {
    Ok(abscissa_with_eigenvalue(a)?.0)
}

/// Largest real part together with an eigenvalue achieving it.
pub fn abscissa_with_eigenvalue(a: &CMat) -> Result<(f64, C64)> {
    require_square(a, "spectral abscissa input")?;
    let vals = eigenvalues(a)?;
    let mut best = vals[0];
    for v in vals.iter() {
        if v.re > best.re {
            best = *v;
        }
    }
    Ok((best.re, best))
}

/// Hurwitz test with a strict margin: true iff the abscissa is below -tol.
pub fn is_mean_square_stable_tol(a: &CMat, tol: f64) -> Result<bool> {
    Ok(spectral_abscissa(a)? < -tol)
}

pub fn is_mean_square_stable(a: &CMat) -> Result<bool> {
    is_mean_square_stable_tol(a, STABILITY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs, max_abs_diff, zeros};
    use crate::slh::HamiltonianSpec;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn three_channel_cavity_drift() {
        // Couplings sqrt(k) with k = (1, 1, 1): Ã = -(k1+k2+k3)/2 I = -1.5 I.
        let t = SlhTriple::new(
            identity(3),
            array![[c(1.0, 0.0)], [c(1.0, 0.0)], [c(1.0, 0.0)]],
            zeros(3, 1),
            HamiltonianSpec::zero(1),
        )
        .unwrap();
        let ss = to_state_space(&t).unwrap();
        let expect = ndarray::Array2::from_diag(&ndarray::arr1(&[c(-1.5, 0.0), c(-1.5, 0.0)]));
        assert!(max_abs_diff(ss.a(), &expect) < 1e-15);
        assert!((spectral_abscissa(ss.a()).unwrap() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn unit_coupling_single_mode() {
        let t = SlhTriple::new(
            array![[c(1.0, 0.0)]],
            array![[c(1.0, 0.0)]],
            zeros(1, 1),
            HamiltonianSpec::zero(1),
        )
        .unwrap();
        let ss = to_state_space(&t).unwrap();
        assert!(max_abs_diff(ss.a(), &identity(2).mapv(|z| z * c(-0.5, 0.0))) < 1e-15);
        assert!(max_abs_diff(ss.b(), &identity(2).mapv(|z| -z)) < 1e-15);
        assert!(max_abs_diff(ss.c(), &identity(2)) < 1e-15);
        assert!(max_abs_diff(ss.d(), &identity(2)) < 1e-15);
    }

    #[test]
    fn detuned_lossless_mode_rotates() {
        // No coupling, Ω- = [w]: drift diag(-iw, +iw).
        let w = 0.8;
        let t = SlhTriple::new(
            array![[c(1.0, 0.0)]],
            zeros(1, 1),
            zeros(1, 1),
            HamiltonianSpec::new(array![[c(w, 0.0)]], zeros(1, 1)).unwrap(),
        )
        .unwrap();
        let ss = to_state_space(&t).unwrap();
        let expect = array![[c(0.0, -w), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, w)]];
        assert!(max_abs_diff(ss.a(), &expect) < 1e-15);
        // Marginally stable, not mean-square stable.
        assert!(!is_mean_square_stable(ss.a()).unwrap());
        assert!(spectral_abscissa(ss.a()).unwrap().abs() < 1e-12);
        assert!(max_abs(ss.b()) < 1e-15);
    }

    #[test]
    fn abscissa_examples() {
        let a = array![[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-2.0, 0.0)]];
        assert!((spectral_abscissa(&a).unwrap() + 1.0).abs() < 1e-12);
        let j = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        assert!(spectral_abscissa(&j).unwrap().abs() < 1e-12);
    }

    #[test]
    fn stability_margin_is_strict() {
        let near = identity(2).mapv(|z| z * c(-1e-12, 0.0));
        assert!(!is_mean_square_stable(&near).unwrap());
        let ok = identity(2).mapv(|z| z * c(-1e-9, 0.0));
        assert!(is_mean_square_stable(&ok).unwrap());
    }

    #[test]
    fn realization_rejects_unstructured_drift() {
        let a = array![[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.5, 0.0), c(-1.0, 0.0)]];
        let i2 = identity(2);
        assert!(StateSpaceRealization::new(a, i2.clone(), i2.clone(), i2).is_err());
    }
}
