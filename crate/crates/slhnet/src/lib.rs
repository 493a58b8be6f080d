//! Robust mean-square stability analysis for linear quantum networks.
//!
//! Open quantum harmonic systems are described here by a scattering matrix,
//! a coupling operator linear in the mode operators, and a quadratic
//! Hamiltonian. The crate builds the doubled-up state-space realization of
//! such a system, splits an uncertain system into a nominal part in series
//! with a perturbation subsystem, and certifies stability of the whole
//! uncertainty set by two independent routes: a small-gain comparison of
//! the perturbation size against the nominal distance to instability, and
//! an explicit quadratic Lyapunov witness obtained from a Riccati equation.
//!
//! Models can be constructed directly from matrices or loaded from the
//! plain-text network description format in [`netdesc`].

pub mod doubled;
pub mod error;
pub mod linalg;
pub mod netdesc;
pub mod realization;
pub mod report;
pub mod slh;
pub mod stability;
pub mod uncertainty;

pub use doubled::{flat, re_flat, DoubledMatrix};
pub use error::{Error, Result};
pub use linalg::{C64, CMat};
pub use realization::{
    is_mean_square_stable, spectral_abscissa, to_state_space, StateSpaceRealization,
    STABILITY_TOL,
};
pub use report::{
    analyze_model, decomposition_json, frequency_sweep, sweep_csv, RobustStabilityReport,
};
pub use slh::{series_product, HamiltonianSpec, SlhTriple};
pub use stability::{
    instability_distance, lyapunov_verdict, marginal_destabilization, minimize_zeta,
    sigma_min_at, smallgain_verdict, synthesize_witness, verify_lyapunov_condition,
    LyapunovCertificate, MarginResult, DEFAULT_TOL,
};
pub use uncertainty::{
    additive_perturbation, decompose, eta_bound, perturbed_triple, theta_scale,
    DecompositionResult, EtaBound, UncertainModel, UncertaintySample,
};
