//! Robust mean-square stability certificates.
//!
//! Two routes are offered. The small-gain route measures the distance from
//! the nominal drift to the set of unstable matrices,
//! inf over real ω of σ_min(iωI - Ã_n), and compares it with the uncertainty
//! bound η. The Lyapunov route synthesizes a Hermitian witness P with
//!
//!   [[Ã_n†P + PÃ_n + η²I, P], [P, -I]] < 0
//!
//! through the stabilizing Riccati solution, and certifies stability when
//! the optimal ζ = 1/margin² (padded to strict feasibility) satisfies
//! ζ < 1/η². A homotopy search locates the marginal scaling θ̂ at which a
//! destabilizing sample first crosses the stability boundary.

use num_complex::Complex64;

use crate::doubled::DoubledMatrix;
use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, block2x2, condition_estimate, eigen_pairs, eigenvalues, hermitian_eigenvalues,
    hermiticity_defect, hermitize, identity, inverse, max_abs, require_square, singular_values,
    spectral_norm, CMat, C64,
};
use crate::realization::{abscissa_with_eigenvalue, to_state_space, STABILITY_TOL};
use crate::slh::SlhTriple;
use crate::uncertainty::{additive_perturbation, theta_scale, UncertaintySample};

/// Default relative accuracy for the margin bisection and derived routines.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Limit on witness subspace conditioning before synthesis is abandoned.
pub const SUBSPACE_COND_LIMIT: f64 = 1e10;

/// Distance from a drift matrix to the nearest unstable one.
#[derive(Debug, Clone)]
pub struct MarginResult {
    /// inf over ω of σ_min(iωI - A); 0 by convention when A is not stable.
    pub margin: f64,
    /// Frequency achieving the margin; absent when the input is unstable.
    pub minimizing_omega: Option<f64>,
    /// Half-width of the final bisection bracket on the margin.
    pub method_tolerance: f64,
    /// Set when the input drift itself fails mean-square stability.
    pub nominal_unstable: bool,
    pub warnings: Vec<String>,
}

/// Lyapunov certificate: the minimized ζ, its witness, and the verified
/// largest eigenvalue of the certificate block matrix (must be negative).
#[derive(Debug, Clone)]
pub struct LyapunovCertificate {
    pub zeta: f64,
    pub p_witness: CMat,
    pub residual_max_eig: f64,
}

/// Smallest singular value of (iωI - a).
pub fn sigma_min_at(a: &CMat, omega: f64) -> Result<f64> {
    let n = require_square(a, "drift matrix")?;
    let mut m = a.mapv(|z| -z);
    for k in 0..n {
        m[(k, k)] += Complex64::new(0.0, omega);
    }
    let sv = singular_values(&m)?;
    Ok(*sv.last().expect("nonempty singular spectrum"))
}

fn hamiltonian_test_matrix(a: &CMat, sigma: f64) -> CMat {
    let n = a.nrows();
    let si = identity(n).mapv(|z| z * sigma);
    block2x2(a, &si.mapv(|z| -z), &si, &adjoint(a).mapv(|z| -z))
}

/// Golden-section minimization of ω ↦ σ_min(iωI - a) on [lo, hi].
/// Returns the best point evaluated anywhere during the search, so a
/// non-unimodal bracket can only improve on its endpoints, never regress.
fn refine_omega(a: &CMat, lo0: f64, hi0: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (lo0.min(hi0), lo0.max(hi0));
    let mut best = (lo, sigma_min_at(a, lo)?);
    let consider = |w: f64, s: f64, best: &mut (f64, f64)| {
        if s < best.1 {
            *best = (w, s);
        }
    };
    let s_hi = sigma_min_at(a, hi)?;
    consider(hi, s_hi, &mut best);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = sigma_min_at(a, c)?;
    let mut fd = sigma_min_at(a, d)?;
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    let mut iters = 0;
    while hi - lo > 1e-9 * (1.0 + lo.abs().max(hi.abs())) && iters < 200 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = sigma_min_at(a, c)?;
            consider(c, fc, &mut best);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = sigma_min_at(a, d)?;
            consider(d, fd, &mut best);
        }
        iters += 1;
    }
    Ok(best)
}

/// Distance to instability of a stable drift, to relative accuracy `tol`.
///
/// Bisection on σ using the test matrix M(σ) = [[a, -σI], [σI, -a†]]:
/// σ lies at or above the distance exactly when M(σ) has an eigenvalue
/// within 1e-9·‖a‖ of the imaginary axis. The minimizing frequency is read
/// from the near-axis eigenvalues at convergence and polished by direct
/// minimization; an independent coarse frequency sweep must agree within
/// 10·tol or a consistency warning is attached.
pub fn instability_distance(a: &CMat, tol: f64) -> Result<MarginResult> {
    require_square(a, "drift matrix")?;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let (abscissa, _) = abscissa_with_eigenvalue(a)?;
    if abscissa >= -STABILITY_TOL {
        return Ok(MarginResult {
            margin: 0.0,
            minimizing_omega: None,
            method_tolerance: 0.0,
            nominal_unstable: true,
            warnings: vec![
                "input drift is not mean-square stable; margin is 0 by convention".into(),
            ],
        });
    }

    let norm_a = spectral_norm(a)?;
    let axis_eps = 1e-9 * norm_a;
    let mut lower = 0.0f64;
    let mut upper = sigma_min_at(a, 0.0)?;
    let mut omega_candidates: Vec<f64> = vec![0.0];
    let mut iters = 0usize;
    while upper - lower > tol * upper && iters < 2000 {
        let mid = 0.5 * (upper + lower);
        let eigs = eigenvalues(&hamiltonian_test_matrix(a, mid))?;
        let near: Vec<f64> = eigs
            .iter()
            .filter(|l| l.re.abs() <= axis_eps)
            .map(|l| l.im)
            .collect();
        if near.is_empty() {
            lower = mid;
        } else {
            upper = mid;
            omega_candidates = near;
        }
        iters += 1;
    }
    let method_tolerance = 0.5 * (upper - lower);

    // Conjugate-pair spectra make sigma_min even in omega; search omega >= 0.
    let doubled = DoubledMatrix::from_full_tol(a, 1e-10).is_ok();

    let mut best_omega = 0.0f64;
    let mut best_sigma = f64::INFINITY;
    omega_candidates.push(0.0);
    for cand in &omega_candidates {
        let h = 1e-3 * (1.0 + cand.abs());
        let (w, s) = refine_omega(a, cand - h, cand + h)?;
        if s < best_sigma {
            best_sigma = s;
            best_omega = w;
        }
    }
    let margin_bisect = upper.min(best_sigma);

    // Independent coarse sweep: linear plus geometric coverage of |omega|
    // up to 10 ‖a‖, mirrored for inputs without conjugate-pair structure.
    let w_max = 10.0 * norm_a;
    let half = 1024usize;
    let mut grid = vec![0.0f64];
    for i in 1..=half {
        grid.push(w_max * i as f64 / half as f64);
    }
    let w_lo = w_max * 1e-6;
    for i in 0..half {
        grid.push(w_lo * (w_max / w_lo).powf(i as f64 / (half - 1) as f64));
    }
    if !doubled {
        let mirrored: Vec<f64> = grid.iter().map(|w| -w).collect();
        grid.extend(mirrored);
    }
    grid.sort_by(|x, y| x.partial_cmp(y).expect("finite grid"));
    let mut sweep_k = 0usize;
    let mut sweep_val = f64::INFINITY;
    for (k, w) in grid.iter().enumerate() {
        let s = sigma_min_at(a, *w)?;
        if s < sweep_val {
            sweep_val = s;
            sweep_k = k;
        }
    }
    let blo = if sweep_k == 0 { grid[0] } else { grid[sweep_k - 1] };
    let bhi = if sweep_k + 1 == grid.len() { grid[sweep_k] } else { grid[sweep_k + 1] };
    let (sweep_omega, sweep_sigma) = refine_omega(a, blo, bhi)?;

    let mut warnings = Vec::new();
    if (margin_bisect - sweep_sigma).abs() > 10.0 * tol * margin_bisect.max(f64::MIN_POSITIVE) {
        warnings.push(format!(
            "frequency sweep estimate {sweep_sigma:.6e} disagrees with bisection margin \
             {margin_bisect:.6e} beyond 10*tol; reporting the smaller value"
        ));
    }
    let margin;
    let mut omega;
    if sweep_sigma < best_sigma {
        margin = margin_bisect.min(sweep_sigma);
        omega = sweep_omega;
    } else {
        margin = margin_bisect;
        omega = best_omega;
    }
    if doubled {
        omega = omega.abs();
    }
    Ok(MarginResult {
        margin,
        minimizing_omega: Some(omega),
        method_tolerance,
        nominal_unstable: false,
        warnings,
    })
}

/// Small-gain comparison against an already-computed margin.
pub fn smallgain_verdict_from(margin: &MarginResult, eta: f64) -> bool {
    !margin.nominal_unstable && eta < margin.margin - 10.0 * margin.method_tolerance
}

/// Small-gain verdict: true iff eta clears the distance to instability with
/// a guard of ten method tolerances. An unstable drift yields false, never
/// an error.
pub fn smallgain_verdict(a: &CMat, eta: f64) -> Result<bool> {
    let margin = instability_distance(a, DEFAULT_TOL)?;
    Ok(smallgain_verdict_from(&margin, eta))
}

/// Evaluate the certificate block matrix [[a†p + pa + η²I, p], [p, -I]] and
/// return (all eigenvalues negative, largest eigenvalue). `p` must be
/// Hermitian positive definite.
pub fn verify_lyapunov_condition(a: &CMat, eta: f64, p: &CMat) -> Result<(bool, f64)> {
    let n = require_square(a, "drift matrix")?;
    if p.dim() != (n, n) {
        return Err(Error::Dimension(format!(
            "witness must be {n}x{n}, got {}x{}",
            p.nrows(),
            p.ncols()
        )));
    }
    if !eta.is_finite() {
        return Err(Error::Domain(format!("eta must be finite, got {eta}")));
    }
    let defect = hermiticity_defect(p);
    if defect > 1e-10 * max_abs(p).max(1.0) {
        return Err(Error::Validation(format!(
            "witness is not Hermitian (defect {defect:.3e})"
        )));
    }
    let p_eigs = hermitian_eigenvalues(p)?;
    if p_eigs.iter().any(|l| *l <= 0.0) {
        return Err(Error::Validation(
            "witness is not positive definite".into(),
        ));
    }
    let mut top_left = adjoint(a).dot(p) + p.dot(a);
    let n_dim = top_left.nrows();
    for k in 0..n_dim {
        top_left[(k, k)] += Complex64::new(eta * eta, 0.0);
    }
    let block = block2x2(&top_left, p, p, &identity(n).mapv(|z| -z));
    let eigs = hermitian_eigenvalues(&block)?;
    let max_eig = *eigs.last().expect("nonempty spectrum");
    Ok((max_eig < 0.0, max_eig))
}

fn synthesize_with_margin(a: &CMat, eta: f64, margin: f64) -> Result<CMat> {
    let n = require_square(a, "drift matrix")?;
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::Domain(format!(
            "eta must be a nonnegative real, got {eta}"
        )));
    }
    if eta >= margin {
        return Err(Error::Infeasible(format!(
            "no witness exists: eta {eta:.6e} is not below the stability margin {margin:.6e}"
        )));
    }
    // Half the available gap: large enough that the verification residual
    // clears eigensolver rounding noise, small enough that the Hamiltonian
    // below keeps a clear imaginary-axis separation.
    let eps = 0.5 * (margin * margin - eta * eta);
    let c = eta * eta + eps;
    let ham = block2x2(
        a,
        &identity(n),
        &identity(n).mapv(|z| z * (-c)),
        &adjoint(a).mapv(|z| -z),
    );
    let (vals, vecs) = eigen_pairs(&ham)?;
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[i].re.partial_cmp(&vals[j].re).expect("finite eigenvalues"));
    let stable = &order[..n];
    if vals[stable[n - 1]].re >= 0.0 || vals[order[n]].re <= 0.0 {
        return Err(Error::Numerical(
            "could not separate a stable invariant subspace for the witness".into(),
        ));
    }
    let mut u1 = CMat::zeros((n, n));
    let mut u2 = CMat::zeros((n, n));
    for (col, &idx) in stable.iter().enumerate() {
        for row in 0..n {
            u1[(row, col)] = vecs[(row, idx)];
            u2[(row, col)] = vecs[(n + row, idx)];
        }
    }
    let cond = condition_estimate(&u1)?;
    if !cond.is_finite() || cond > SUBSPACE_COND_LIMIT {
        return Err(Error::Numerical(format!(
            "witness subspace is ill-conditioned (condition estimate {cond:.3e})"
        )));
    }
    let p = hermitize(&u2.dot(&inverse(&u1)?));
    let p_eigs = hermitian_eigenvalues(&p)?;
    if p_eigs.iter().any(|l| *l <= 0.0) {
        return Err(Error::Numerical(
            "synthesized witness is not positive definite".into(),
        ));
    }
    let (ok, residual) = verify_lyapunov_condition(a, eta, &p)?;
    if !ok {
        return Err(Error::Numerical(format!(
            "synthesized witness fails verification (residual {residual:.3e})"
        )));
    }
    Ok(p)
}

/// Stabilizing solution P of a†P + Pa + P² + (η² + ε)I = 0 with slack
/// ε = (margin² - η²)/2, extracted from the stable invariant subspace of
/// [[a, I], [-(η²+ε)I, -a†]]. The result is verified before being returned.
pub fn synthesize_witness(a: &CMat, eta: f64) -> Result<CMat> {
    let margin = instability_distance(a, DEFAULT_TOL)?;
    if margin.nominal_unstable {
        return Err(Error::Infeasible(
            "no witness exists: the drift is not mean-square stable".into(),
        ));
    }
    synthesize_with_margin(a, eta, margin.margin)
}

/// Minimize ζ subject to the Lyapunov feasibility condition. The optimum is
/// 1/margin²; the returned ζ carries a (1 + 10·tol) strict-feasibility pad
/// and the witness is synthesized at the padded uncertainty level 1/√ζ.
/// The certificate verdict for a bound η is ζ < 1/η².
pub fn minimize_zeta(a: &CMat, tol: f64) -> Result<LyapunovCertificate> {
    let margin = instability_distance(a, tol)?;
    if margin.nominal_unstable {
        return Err(Error::Infeasible(
            "zeta is unbounded: the drift is not mean-square stable".into(),
        ));
    }
    let m = margin.margin;
    let zeta = (1.0 + 10.0 * tol) / (m * m);
    let eta_padded = 1.0 / zeta.sqrt();
    let p = synthesize_with_margin(a, eta_padded, m)?;
    let (ok, residual) = verify_lyapunov_condition(a, eta_padded, &p)?;
    if !ok {
        return Err(Error::Numerical(format!(
            "certificate failed verification (residual {residual:.3e})"
        )));
    }
    Ok(LyapunovCertificate { zeta, p_witness: p, residual_max_eig: residual })
}

/// Certificate comparison against an uncertainty bound.
pub fn lyapunov_verdict(certificate: &LyapunovCertificate, eta: f64) -> bool {
    if eta == 0.0 {
        return true;
    }
    certificate.zeta < 1.0 / (eta * eta)
}

/// Scale a destabilizing sample down until the perturbed drift is marginally
/// stable: bisects θ in [0, 1] on the spectral abscissa of Ã_n + ΔÃ(θ) and
/// returns θ̂ with |abscissa| ≤ tol together with the critical eigenvalue.
pub fn marginal_destabilization(
    nominal: &SlhTriple,
    sample: &UncertaintySample,
    tol: f64,
) -> Result<(f64, C64)> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let a_n = to_state_space(nominal)?.a().clone();
    let eval = |theta: f64| -> Result<(f64, C64)> {
        let scaled = theta_scale(sample, theta)?;
        let da = additive_perturbation(nominal, &scaled)?;
        abscissa_with_eigenvalue(&(&a_n + &da))
    };
    let (g0, _) = eval(0.0)?;
    if g0 >= -STABILITY_TOL {
        return Err(Error::Domain(
            "nominal drift is not mean-square stable".into(),
        ));
    }
    let (g1, eig1) = eval(1.0)?;
    if g1 <= 0.0 {
        return Err(Error::Domain(
            "no marginal point exists on this homotopy".into(),
        ));
    }
    if g1 <= tol {
        return Ok((1.0, eig1));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (g, eig) = eval(mid)?;
        if g.abs() <= tol {
            return Ok((mid, eig));
        }
        if g > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::Numerical(
        "failed to localize the marginal scaling within the iteration budget".into(),
    ))
}
