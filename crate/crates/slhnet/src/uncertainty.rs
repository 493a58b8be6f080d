//! Structured uncertainty for SLH networks and its additive drift form.
//!
//! A sample perturbs the nominal triple multiplicatively in the scattering
//! (S = S_n ΔS) and additively in the coupling and Hamiltonian. The network
//! factors as nominal ◁ Δ-subsystem, and the perturbed drift splits as
//! Ã = Ã_n + ΔÃ with the closed form
//!
//!   ΔÃ = -½ δ̃♭ δ̃ + Δ(-iΔΩ-, -iΔΩ+) - Re♭(C̃_n♭ δ̃)
//!
//! where δ̃ = Δ(δc-, δc+). `decompose` computes ΔÃ a second way, through the
//! realizations of the factors, and cross-checks the two routes.

use ndarray::{concatenate, Axis};

use crate::doubled::DoubledMatrix;
use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, identity, max_abs, max_abs_diff, spectral_norm, unitarity_defect, zeros, CMat,
};
use crate::realization::to_state_space;
use crate::slh::{imag_quadratic, HamiltonianSpec, SlhTriple, STRUCTURE_TOL};

/// Hard cap on how many samples a model may carry.
pub const SAMPLE_CAP: usize = 1_000_000;

/// Cross-check tolerance between the subsystem route and the closed form.
pub const DECOMPOSITION_XCHECK_TOL: f64 = 1e-10;

/// One admissible uncertainty draw: unitary ΔS, coupling offsets, Hamiltonian offset.
#[derive(Debug, Clone)]
pub struct UncertaintySample {
    delta_s: CMat,
    delta_c_minus: CMat,
    delta_c_plus: CMat,
    delta_h: HamiltonianSpec,
}

impl UncertaintySample {
    pub fn new(
        delta_s: CMat,
        delta_c_minus: CMat,
        delta_c_plus: CMat,
        delta_h: HamiltonianSpec,
    ) -> Result<Self> {
        let m = delta_s.nrows();
        if delta_s.ncols() != m || m == 0 {
            return Err(Error::Dimension("delta_s must be square and nonempty".into()));
        }
        let ud = unitarity_defect(&delta_s);
        if ud > STRUCTURE_TOL {
            return Err(Error::Validation(format!(
                "delta_s is not unitary (defect {ud:.3e})"
            )));
        }
        let n = delta_h.n_modes();
        if delta_c_minus.dim() != (m, n) || delta_c_plus.dim() != (m, n) {
            return Err(Error::Dimension(format!(
                "coupling offsets must be {m}x{n}, got {}x{} and {}x{}",
                delta_c_minus.nrows(),
                delta_c_minus.ncols(),
                delta_c_plus.nrows(),
                delta_c_plus.ncols()
            )));
        }
        Ok(UncertaintySample { delta_s, delta_c_minus, delta_c_plus, delta_h })
    }

    /// The trivial sample: ΔS = I, zero offsets.
    pub fn zero(n_modes: usize, n_channels: usize) -> Self {
        UncertaintySample {
            delta_s: identity(n_channels),
            delta_c_minus: zeros(n_channels, n_modes),
            delta_c_plus: zeros(n_channels, n_modes),
            delta_h: HamiltonianSpec::zero(n_modes),
        }
    }

    pub fn delta_s(&self) -> &CMat {
        &self.delta_s
    }

    pub fn delta_c_minus(&self) -> &CMat {
        &self.delta_c_minus
    }

    pub fn delta_c_plus(&self) -> &CMat {
        &self.delta_c_plus
    }

    pub fn delta_h(&self) -> &HamiltonianSpec {
        &self.delta_h
    }

    pub fn n_modes(&self) -> usize {
        self.delta_h.n_modes()
    }

    pub fn n_channels(&self) -> usize {
        self.delta_s.nrows()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        max_abs_diff(&self.delta_s, &identity(self.n_channels())) <= tol
            && max_abs(&self.delta_c_minus) <= tol
            && max_abs(&self.delta_c_plus) <= tol
            && self.delta_h.max_abs() <= tol
    }

    /// Optional strict structural check for scattering perturbations that are
    /// required to be Hermitian as well as unitary.
    pub fn require_hermitian_delta_s(&self, tol: f64) -> Result<()> {
        let d = crate::linalg::hermiticity_defect(&self.delta_s);
        if d > tol {
            return Err(Error::Validation(format!(
                "delta_s is not Hermitian (defect {d:.3e})"
            )));
        }
        Ok(())
    }

    /// Doubled coupling offset Δ(δc-, δc+).
    pub fn coupling_offset(&self) -> DoubledMatrix {
        DoubledMatrix::new(self.delta_c_minus.clone(), self.delta_c_plus.clone())
            .expect("offset blocks validated at construction")
    }

    /// Single-height offset [δc- δc+], m x 2n.
    pub fn coupling_offset_single(&self) -> CMat {
        concatenate![Axis(1), self.delta_c_minus.view(), self.delta_c_plus.view()]
    }
}

/// Nominal triple plus a finite family of uncertainty samples. The trivial
/// sample is always representable; constructing a model without one appends it.
#[derive(Debug, Clone)]
pub struct UncertainModel {
    nominal: SlhTriple,
    samples: Vec<UncertaintySample>,
    declared_eta: Option<f64>,
}

impl UncertainModel {
    pub fn new(
        nominal: SlhTriple,
        mut samples: Vec<UncertaintySample>,
        declared_eta: Option<f64>,
    ) -> Result<Self> {
        if let Some(eta) = declared_eta {
            if !eta.is_finite() || eta < 0.0 {
                return Err(Error::InvalidModel(format!(
                    "declared eta must be a nonnegative real, got {eta}"
                )));
            }
        }
        for (i, s) in samples.iter().enumerate() {
            if s.n_modes() != nominal.n_modes() || s.n_channels() != nominal.n_channels() {
                return Err(Error::Dimension(format!(
                    "sample {i} has shape ({} modes, {} channels), nominal has ({}, {})",
                    s.n_modes(),
                    s.n_channels(),
                    nominal.n_modes(),
                    nominal.n_channels()
                )));
            }
        }
        if !samples.iter().any(|s| s.is_zero(1e-12)) {
            samples.push(UncertaintySample::zero(nominal.n_modes(), nominal.n_channels()));
        }
        if samples.len() > SAMPLE_CAP {
            return Err(Error::InvalidModel(format!(
                "{} samples exceed the cap of {SAMPLE_CAP}",
                samples.len()
            )));
        }
        Ok(UncertainModel { nominal, samples, declared_eta })
    }

    pub fn nominal(&self) -> &SlhTriple {
        &self.nominal
    }

    pub fn samples(&self) -> &[UncertaintySample] {
        &self.samples
    }

    pub fn declared_eta(&self) -> Option<f64> {
        self.declared_eta
    }

    pub fn set_declared_eta(&mut self, eta: Option<f64>) -> Result<()> {
        if let Some(e) = eta {
            if !e.is_finite() || e < 0.0 {
                return Err(Error::InvalidModel(format!(
                    "declared eta must be a nonnegative real, got {e}"
                )));
            }
        }
        self.declared_eta = eta;
        Ok(())
    }
}

/// Everything `decompose` produces: the two series factors and the drift split.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub g_n: SlhTriple,
    pub delta_sub: SlhTriple,
    pub a_n: CMat,
    pub a_delta: CMat,
    pub a_prime: CMat,
    pub delta_a: CMat,
}

/// Apply a sample to the nominal triple: (S_n ΔS, L_n + ΔL, H_n + ΔH).
pub fn perturbed_triple(nominal: &SlhTriple, sample: &UncertaintySample) -> Result<SlhTriple> {
    check_compat(nominal, sample)?;
    let s = nominal.s().dot(sample.delta_s());
    let c_minus = nominal.c_minus() + sample.delta_c_minus();
    let c_plus = nominal.c_plus() + sample.delta_c_plus();
    let h = nominal.hamiltonian().add(sample.delta_h())?;
    SlhTriple::new(s, c_minus, c_plus, h)
}

/// Closed-form additive drift perturbation ΔÃ (see module docs). Assembled
/// from block operations, so the result is exactly doubled-structured.
pub fn additive_perturbation(nominal: &SlhTriple, sample: &UncertaintySample) -> Result<CMat> {
    check_compat(nominal, sample)?;
    let delta = sample.coupling_offset();
    let quad = delta.flat().mul(&delta)?.scale_re(-0.5);
    let drift = DoubledMatrix::from_full(&sample.delta_h().doubled_drift())?;
    let x = nominal.coupling().flat().mul(&delta)?;
    let re_flat_x = x.add(&x.flat())?.scale_re(0.5);
    let delta_a = quad.add(&drift)?.sub(&re_flat_x)?;
    Ok(delta_a.to_full())
}

/// Factor the perturbed network as nominal ◁ Δ-subsystem and split the drift.
///
/// The Δ-subsystem is (ΔS, S_n† ΔL, ΔH - Im(L_n† ΔL)); its drift a_delta plus
/// the cross term a_prime = -C̃_n♭ δ̃ reconstructs ΔÃ. The sum is cross-checked
/// against the closed form; disagreement is an internal bug, not bad input.
pub fn decompose(nominal: &SlhTriple, sample: &UncertaintySample) -> Result<DecompositionResult> {
    check_compat(nominal, sample)?;
    let s_n_adj = adjoint(nominal.s());
    let c_sub_minus = s_n_adj.dot(sample.delta_c_minus());
    let c_sub_plus = s_n_adj.dot(sample.delta_c_plus());
    // Interconnection correction Im(L_n† ΔL) as a quadratic form over (a; a#).
    let m_coef = adjoint(&nominal.coupling_single()).dot(&sample.coupling_offset_single());
    let h_sub = sample.delta_h().sub(&imag_quadratic(&m_coef)?)?;
    let delta_sub = SlhTriple::new(sample.delta_s().clone(), c_sub_minus, c_sub_plus, h_sub)?;

    let a_n = to_state_space(nominal)?.a().clone();
    let a_delta = to_state_space(&delta_sub)?.a().clone();
    let a_prime = nominal
        .coupling()
        .flat()
        .mul(&sample.coupling_offset())?
        .scale_re(-1.0)
        .to_full();
    let delta_a = &a_delta + &a_prime;

    let closed = additive_perturbation(nominal, sample)?;
    let gap = max_abs_diff(&delta_a, &closed);
    if gap > DECOMPOSITION_XCHECK_TOL {
        return Err(Error::Consistency(format!(
            "subsystem route and closed form for the drift perturbation disagree by {gap:.3e}"
        )));
    }
    Ok(DecompositionResult { g_n: nominal.clone(), delta_sub, a_n, a_delta, a_prime, delta_a })
}

/// Largest additive perturbation over the samples, with falsification data
/// for a declared bound.
#[derive(Debug, Clone, Copy)]
pub struct EtaBound {
    /// max(declared, computed); the bound the analysis should use.
    pub eta: f64,
    /// Largest sigma_max(ΔÃ) over the samples.
    pub computed: f64,
    pub worst_sample_index: usize,
    /// True when the samples falsify the declared bound.
    pub declared_exceeded: bool,
}

pub fn eta_bound(model: &UncertainModel) -> Result<EtaBound> {
    if model.samples().is_empty() {
        return Err(Error::InvalidModel("uncertainty model has no samples".into()));
    }
    let mut computed = 0.0f64;
    let mut worst = 0usize;
    for (i, sample) in model.samples().iter().enumerate() {
        let da = additive_perturbation(model.nominal(), sample)?;
        let s = spectral_norm(&da)?;
        if s > computed {
            computed = s;
            worst = i;
        }
    }
    let (eta, declared_exceeded) = match model.declared_eta() {
        Some(d) => (d.max(computed), computed > d),
        None => (computed, false),
    };
    Ok(EtaBound { eta, computed, worst_sample_index: worst, declared_exceeded })
}

/// Scale a sample along the straight-line homotopy: coupling and Hamiltonian
/// offsets are multiplied by theta, the scattering perturbation is kept.
/// ΔÃ(theta) then has a theta² coupling term and a theta-linear remainder.
pub fn theta_scale(sample: &UncertaintySample, theta: f64) -> Result<UncertaintySample> {
    if !theta.is_finite() || !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain(format!(
            "homotopy parameter must lie in [0, 1], got {theta}"
        )));
    }
    UncertaintySample::new(
        sample.delta_s().clone(),
        sample.delta_c_minus().mapv(|z| z * theta),
        sample.delta_c_plus().mapv(|z| z * theta),
        sample.delta_h().scale_re(theta),
    )
}

fn check_compat(nominal: &SlhTriple, sample: &UncertaintySample) -> Result<()> {
    if nominal.n_modes() != sample.n_modes() || nominal.n_channels() != sample.n_channels() {
        return Err(Error::Dimension(format!(
            "sample shape ({} modes, {} channels) does not match nominal ({}, {})",
            sample.n_modes(),
            sample.n_channels(),
            nominal.n_modes(),
            nominal.n_channels()
        )));
    }
    Ok(())
}
