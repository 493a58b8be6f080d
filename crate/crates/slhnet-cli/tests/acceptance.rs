//! Acceptance gate: ten end-to-end criteria with pinned tolerances.
//! Each criterion prints exactly one PASS/FAIL line; the process exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slhnet::linalg::{
    adjoint, identity, max_abs, max_abs_diff, scale_re, sigma_min, spectral_norm, transpose,
    zeros, C64, CMat,
};
use slhnet::netdesc::{instantiate, parse, serialize};
use slhnet::realization::{spectral_abscissa, to_state_space};
use slhnet::stability::{instability_distance, marginal_destabilization, minimize_zeta, verify_lyapunov_condition};
use slhnet::uncertainty::{additive_perturbation, perturbed_triple, UncertaintySample};
use slhnet::{DoubledMatrix, HamiltonianSpec, SlhTriple};

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(u32, &str, Criterion); 10] = [
        (1, "cavity margin", c1_cavity_margin),
        (2, "cavity zeta and witness", c2_cavity_zeta),
        (3, "reconstruction identity", c3_reconstruction),
        (4, "margin-zeta duality", c4_duality),
        (5, "bisection vs dense oracle", c5_bisection_oracle),
        (6, "printed perturbation norm", c6_eta_fixture),
        (7, "small-gain soundness", c7_smallgain_soundness),
        (8, "homotopy marginal point", c8_homotopy),
        (9, "parser round-trip and diagnostics", c9_parser),
        (10, "end-to-end analyze", c10_end_to_end),
    ];
    let mut failed = 0u32;
    for (num, name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let dt = start.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(detail)) => println!("PASS criterion {num} ({name}): {detail} [{dt:.2} s]"),
            Ok(Err(reason)) => {
                failed += 1;
                println!("FAIL criterion {num} ({name}): {reason} [{dt:.2} s]");
            }
            Err(payload) => {
                failed += 1;
                let msg = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "opaque panic".to_string());
                println!("FAIL criterion {num} ({name}): panicked: {msg} [{dt:.2} s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}

fn fixture_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/cavity.slhnet")
}

fn fixture_drift() -> Result<CMat, String> {
    let text = std::fs::read_to_string(fixture_path()).map_err(|e| format!("fixture: {e}"))?;
    let doc = parse(&text).map_err(|d| format!("fixture parse: {d:?}"))?;
    let model = instantiate(&doc).map_err(|e| format!("fixture instantiate: {e}"))?;
    Ok(to_state_space(model.nominal())
        .map_err(|e| format!("fixture realization: {e}"))?
        .a()
        .clone())
}

// Shared random generators (seeded, so the gate is deterministic).

fn cnum(r: &mut ChaCha8Rng, scale: f64) -> C64 {
    C64::new(r.random_range(-scale..scale), r.random_range(-scale..scale))
}

fn rmat(r: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> CMat {
    let mut m = zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = cnum(r, scale);
        }
    }
    m
}

fn rherm(r: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat {
    let m = rmat(r, n, n, scale);
    scale_re(&(&m + &adjoint(&m)), 0.5)
}

fn rsym(r: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat {
    let m = rmat(r, n, n, scale);
    scale_re(&(&m + &transpose(&m)), 0.5)
}

fn runitary(r: &mut ChaCha8Rng, n: usize) -> CMat {
    let tau = std::f64::consts::TAU;
    let mut u = identity(n);
    for k in 0..n {
        let ph = r.random_range(0.0..tau);
        let d = C64::new(ph.cos(), ph.sin());
        for row in 0..n {
            u[(row, k)] *= d;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let th = r.random_range(0.0..tau);
            let ph = r.random_range(0.0..tau);
            let (c, s) = (th.cos(), th.sin());
            let e = C64::new(ph.cos(), ph.sin());
            for row in 0..n {
                let a = u[(row, i)];
                let b = u[(row, j)];
                u[(row, i)] = a * c + b * (e * s);
                u[(row, j)] = b * c - a * (e.conj() * s);
            }
        }
    }
    u
}

fn rtriple(r: &mut ChaCha8Rng, n: usize, m: usize, scale: f64, activity: f64) -> SlhTriple {
    let h = HamiltonianSpec::new(rherm(r, n, scale), scale_re(&rsym(r, n, scale), activity))
        .expect("valid Hamiltonian");
    SlhTriple::new(
        runitary(r, m),
        rmat(r, m, n, scale),
        scale_re(&rmat(r, m, n, scale), activity),
        h,
    )
    .expect("valid triple")
}

fn rsample(r: &mut ChaCha8Rng, n: usize, m: usize, scale: f64) -> UncertaintySample {
    UncertaintySample::new(
        runitary(r, m),
        rmat(r, m, n, scale),
        rmat(r, m, n, scale),
        HamiltonianSpec::new(rherm(r, n, scale), rsym(r, n, scale)).expect("valid Hamiltonian"),
    )
    .expect("valid sample")
}

fn rstable_doubled(r: &mut ChaCha8Rng, n_modes: usize, gap: f64) -> CMat {
    let g = rtriple(r, n_modes, n_modes, 1.0, 0.4);
    let mut a = to_state_space(&g).expect("realizable").a().clone();
    let abscissa = spectral_abscissa(&a).expect("spectrum");
    let shift = abscissa + gap;
    if shift > 0.0 {
        for k in 0..a.nrows() {
            a[(k, k)] -= C64::new(shift, 0.0);
        }
    }
    a
}

// Criterion 1: margin of the bundled cavity.

fn c1_cavity_margin() -> Result<String, String> {
    let start = Instant::now();
    let a_n = fixture_drift()?;
    let m = instability_distance(&a_n, 1e-8).map_err(|e| e.to_string())?;
    let dt = start.elapsed().as_secs_f64();
    if (m.margin - 1.5).abs() > 1e-6 {
        return Err(format!("margin {} is not within 1e-6 of 1.5", m.margin));
    }
    let w = m.minimizing_omega.ok_or("no minimizing frequency reported")?;
    if w.abs() > 1e-4 {
        return Err(format!("minimizing omega {w} exceeds 1e-4"));
    }
    if dt >= 1.0 {
        return Err(format!("took {dt:.3} s, budget is 1 s"));
    }
    Ok(format!("margin {:.10}, omega {:.2e}", m.margin, w))
}

// Criterion 2: minimized zeta and the Lyapunov witness on the cavity.

fn c2_cavity_zeta() -> Result<String, String> {
    let a_n = fixture_drift()?;
    let cert = minimize_zeta(&a_n, 1e-8).map_err(|e| e.to_string())?;
    if !(0.4444..=0.4500).contains(&cert.zeta) {
        return Err(format!("zeta {} outside [0.4444, 0.4500]", cert.zeta));
    }
    let bound = 1.0 / cert.zeta.sqrt();
    if !(1.485..=1.500).contains(&bound) {
        return Err(format!("1/sqrt(zeta) {bound} outside [1.485, 1.500]"));
    }
    let (ok, residual) =
        verify_lyapunov_condition(&a_n, 1.4, &cert.p_witness).map_err(|e| e.to_string())?;
    if !ok || residual >= 0.0 {
        return Err(format!("witness failed at eta = 1.4 (residual {residual:.3e})"));
    }
    Ok(format!("zeta {:.6}, bound {:.4}, residual {:.2e}", cert.zeta, bound, residual))
}

// Criterion 3: drift reconstruction over random systems.

fn c3_reconstruction() -> Result<String, String> {
    let start = Instant::now();
    let mut r = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let n = 1 + trial % 3;
        let m = 1 + (trial / 3) % 3;
        let g = rtriple(&mut r, n, m, 1.5, 1.0);
        let s = rsample(&mut r, n, m, 0.9);
        let full = to_state_space(&perturbed_triple(&g, &s).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?
            .a()
            .clone();
        let a_n = to_state_space(&g).map_err(|e| e.to_string())?.a().clone();
        let da = additive_perturbation(&g, &s).map_err(|e| e.to_string())?;
        let residual = max_abs_diff(&full, &(&a_n + &da));
        let allowed = 1e-10 * (1.0 + max_abs(&full));
        if residual > allowed {
            return Err(format!(
                "trial {trial} (n={n}, m={m}): residual {residual:.3e} exceeds {allowed:.3e}"
            ));
        }
        worst = worst.max(residual / allowed);
    }
    let dt = start.elapsed().as_secs_f64();
    if dt >= 30.0 {
        return Err(format!("took {dt:.1} s, budget is 30 s"));
    }
    Ok(format!("1000 pairs, worst residual at {:.1}% of the bound", worst * 100.0))
}

// Criterion 4: the margin and the minimized Lyapunov bound agree.

fn c4_duality() -> Result<String, String> {
    let mut r = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = 1 + trial % 4;
        let a = rstable_doubled(&mut r, n, 0.2 + 0.05 * (trial % 7) as f64);
        let margin = instability_distance(&a, 1e-8).map_err(|e| e.to_string())?.margin;
        if margin <= 0.0 {
            return Err(format!("trial {trial}: nonpositive margin"));
        }
        let cert = minimize_zeta(&a, 1e-8).map_err(|e| format!("trial {trial}: {e}"))?;
        let bound = 1.0 / cert.zeta.sqrt();
        let rel = (bound - margin).abs() / margin;
        if rel > 1e-2 {
            return Err(format!(
                "trial {trial} (n={n}): margin {margin:.6e} vs bound {bound:.6e}, rel {rel:.3e}"
            ));
        }
        worst = worst.max(rel);
    }
    Ok(format!("100 matrices, worst relative gap {:.2e}", worst))
}

// Criterion 5: bisection against a dense-grid oracle with an independent
// eigensolver.

fn jacobi_min_eig(a: &mut CMat) -> f64 {
    let n = a.nrows();
    if n == 1 {
        return a[(0, 0)].re;
    }
    let mut frob = 0.0;
    for p in 0..n {
        for q in 0..n {
            frob += a[(p, q)].norm_sqr();
        }
    }
    let frob = frob.sqrt().max(1e-300);
    for _sweep in 0..30 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 * frob {
                    continue;
                }
                let e = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let es = e * s;
                let ec = e * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * es.conj();
                    a[(k, q)] = akp * s + akq * ec.conj();
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * es;
                    a[(q, k)] = apk * s + aqk * ec;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    (0..n).map(|k| a[(k, k)].re).fold(f64::INFINITY, f64::min)
}

/// sigma_min(i w I - a) through the Jacobi route: the smallest eigenvalue
/// of the Hermitian matrix (i w I - a)^dagger (i w I - a).
fn oracle_sigma(h0: &CMat, k: &CMat, w: f64, scratch: &mut CMat) -> f64 {
    let n = h0.nrows();
    for p in 0..n {
        for q in 0..n {
            scratch[(p, q)] = h0[(p, q)] + k[(p, q)] * w;
        }
        scratch[(p, p)] += w * w;
    }
    jacobi_min_eig(scratch).max(0.0).sqrt()
}

fn oracle_margin(a: &CMat) -> Result<f64, String> {
    let n = a.nrows();
    let norm = spectral_norm(a).map_err(|e| e.to_string())?;
    let h0 = adjoint(a).dot(a);
    // i (a - a^dagger) is Hermitian; the quadratic form in w is then
    // h0 + w k + w^2 I.
    let diff = a - &adjoint(a);
    let mut k = zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            k[(p, q)] = C64::new(0.0, 1.0) * diff[(p, q)];
        }
    }
    let mut scratch = zeros(n, n);

    // The oracle must itself be trustworthy: cross-check the Jacobi
    // eigensolver against the LAPACK singular values at a few points.
    for (idx, w) in [0.0, 0.37 * norm, -1.1 * norm, 2.0 * norm, -0.01].iter().enumerate() {
        let jac = oracle_sigma(&h0, &k, *w, &mut scratch);
        let mut shifted = zeros(n, n);
        for p in 0..n {
            for q in 0..n {
                shifted[(p, q)] = -a[(p, q)];
            }
            shifted[(p, p)] += C64::new(0.0, *w);
        }
        let svd = sigma_min(&shifted).map_err(|e| e.to_string())?;
        if (jac - svd).abs() > 1e-8 * (1.0 + svd) {
            return Err(format!(
                "oracle self-check {idx} failed: jacobi {jac:.12e} vs svd {svd:.12e}"
            ));
        }
    }

    let wmax = 2.0 * norm + 1.0;
    let points = 1_000_000usize;
    let mut best = f64::INFINITY;
    let mut best_w = 0.0;
    for j in 0..points {
        let w = -wmax + 2.0 * wmax * j as f64 / (points - 1) as f64;
        let s = oracle_sigma(&h0, &k, w, &mut scratch);
        if s < best {
            best = s;
            best_w = w;
        }
    }
    // Local golden-section refinement around the grid argmin.
    let h = 2.0 * wmax / (points - 1) as f64;
    let inv_phi = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (best_w - h, best_w + h);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = oracle_sigma(&h0, &k, c, &mut scratch);
    let mut fd = oracle_sigma(&h0, &k, d, &mut scratch);
    for _ in 0..120 {
        if hi - lo <= 1e-12 * (1.0 + best_w.abs()) {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = oracle_sigma(&h0, &k, c, &mut scratch);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = oracle_sigma(&h0, &k, d, &mut scratch);
        }
        best = best.min(fc.min(fd));
    }
    Ok(best)
}

fn fixed_suite() -> Vec<CMat> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let mut suite: Vec<CMat> = Vec::new();
    let from_rows = |rows: &[&[C64]]| {
        let mut m = zeros(rows.len(), rows[0].len());
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    };
    // The required non-normal example.
    suite.push(from_rows(&[&[c(-1.0, 0.0), c(10.0, 0.0)], &[c(0.0, 0.0), c(-1.0, 0.0)]]));
    suite.push(scale_re(&identity(2), -1.0));
    suite.push(scale_re(&identity(2), -1.5));
    suite.push(from_rows(&[&[c(-1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-2.0, 0.0)]]));
    suite.push(from_rows(&[&[c(-0.05, 0.0)]]));
    suite.push(from_rows(&[&[c(-1.0, 0.0), c(0.5, 0.0)], &[c(-0.5, 0.0), c(-1.0, 0.0)]]));
    suite.push(from_rows(&[&[c(-0.5, 0.0), c(2.0, 0.0)], &[c(0.0, 0.0), c(-0.5, 0.0)]]));
    suite.push(from_rows(&[&[c(-2.0, 0.0), c(0.0, 0.0)], &[c(5.0, 0.0), c(-2.0, 0.0)]]));
    // Detuned mode: the minimum sits far from w = 0.
    suite.push(from_rows(&[&[c(-0.1, -5.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-0.1, 5.0)]]));
    // Stable companion form.
    suite.push(from_rows(&[
        &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        &[c(-1.0, 0.0), c(-2.0, 0.0), c(-1.5, 0.0)],
    ]));
    let mut r = ChaCha8Rng::seed_from_u64(303);
    // Six random dense stable matrices of sizes 2..4.
    for n in [2, 2, 3, 3, 4, 4] {
        let mut m = rmat(&mut r, n, n, 1.0);
        let abscissa = spectral_abscissa(&m).expect("spectrum");
        for k in 0..n {
            m[(k, k)] -= C64::new(abscissa + 0.4, 0.0);
        }
        suite.push(m);
    }
    // Four random doubled-form drifts.
    for n in [1, 1, 2, 2] {
        suite.push(rstable_doubled(&mut r, n, 0.3));
    }
    assert_eq!(suite.len(), 20);
    suite
}

fn c5_bisection_oracle() -> Result<String, String> {
    let suite = fixed_suite();
    let mut worst = 0.0f64;
    for (idx, a) in suite.iter().enumerate() {
        let fast = instability_distance(a, 1e-8).map_err(|e| e.to_string())?.margin;
        let slow = oracle_margin(a)?;
        let gap = (fast - slow).abs();
        if gap > 1e-6 {
            return Err(format!(
                "matrix {idx}: bisection {fast:.9e} vs oracle {slow:.9e}, gap {gap:.3e}"
            ));
        }
        worst = worst.max(gap);
    }
    Ok(format!("20 matrices, worst gap {:.2e}", worst))
}

// Criterion 6: the printed perturbation matrix has the advertised norm.

fn c6_eta_fixture() -> Result<String, String> {
    let mut r = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let gamma: f64 = r.random_range(-1.0..1.0);
        let delta: f64 = r.random_range(-1.0..1.0);
        let mut da = zeros(2, 2);
        da[(0, 0)] = C64::new(-gamma / 2.0, -2.0 * delta);
        da[(1, 1)] = C64::new(-gamma / 2.0, 2.0 * delta);
        let sigma = spectral_norm(&da).map_err(|e| e.to_string())?;
        let expect = (gamma * gamma / 4.0 + 4.0 * delta * delta).sqrt();
        let gap = (sigma - expect).abs();
        if gap > 1e-12 {
            return Err(format!(
                "trial {trial}: sigma {sigma:.15e} vs sqrt(gamma^2/4 + 4 delta^2) {expect:.15e}"
            ));
        }
        worst = worst.max(gap);
    }
    Ok(format!("100 draws, worst gap {:.2e}", worst))
}

// Criterion 7: perturbations inside 99% of the margin never destabilize.

fn c7_smallgain_soundness() -> Result<String, String> {
    let mut r = ChaCha8Rng::seed_from_u64(505);
    for trial in 0..500usize {
        let n = 1 + trial % 3;
        let a = rstable_doubled(&mut r, n, 0.15 + 0.05 * (trial % 9) as f64);
        let margin = instability_distance(&a, 1e-8).map_err(|e| e.to_string())?.margin;
        if margin <= 0.0 {
            return Err(format!("trial {trial}: nonpositive margin"));
        }
        let dim = a.nrows();
        // Alternate between unstructured and doubled-form directions.
        let dir = if trial % 2 == 0 {
            rmat(&mut r, dim, dim, 1.0)
        } else {
            DoubledMatrix::new(rmat(&mut r, dim / 2, dim / 2, 1.0), rmat(&mut r, dim / 2, dim / 2, 1.0))
                .map_err(|e| e.to_string())?
                .to_full()
        };
        let norm = spectral_norm(&dir).map_err(|e| e.to_string())?;
        if norm == 0.0 {
            continue;
        }
        let scaled = scale_re(&dir, 0.99 * margin / norm);
        let moved = &a + &scaled;
        let abscissa = spectral_abscissa(&moved).map_err(|e| e.to_string())?;
        if abscissa >= 0.0 {
            return Err(format!(
                "trial {trial}: perturbation at 0.99 margin produced abscissa {abscissa:.3e}"
            ));
        }
    }
    Ok("500 perturbed drifts all stayed stable".to_string())
}

// Criterion 8: the gain homotopy on the unit cavity crosses at 1/2.

fn c8_homotopy() -> Result<String, String> {
    let mut c_minus = zeros(1, 1);
    c_minus[(0, 0)] = C64::new(1.0, 0.0);
    let nominal = SlhTriple::new(identity(1), c_minus, zeros(1, 1), HamiltonianSpec::zero(1))
        .map_err(|e| e.to_string())?;
    let mut gain = zeros(1, 1);
    gain[(0, 0)] = C64::new(2.0, 0.0);
    let sample = UncertaintySample::new(identity(1), zeros(1, 1), gain, HamiltonianSpec::zero(1))
        .map_err(|e| e.to_string())?;
    let (theta, eig) = marginal_destabilization(&nominal, &sample, 1e-10).map_err(|e| e.to_string())?;
    if (theta - 0.5).abs() > 1e-8 {
        return Err(format!("theta-hat {theta:.12} is not within 1e-8 of 0.5"));
    }
    if eig.re.abs() > 1e-8 {
        return Err(format!("critical eigenvalue {eig} is off the axis"));
    }
    Ok(format!("theta-hat {theta:.10}, critical eigenvalue {eig:.3e}"))
}

// Criterion 9: fixture round-trip plus ten malformed inputs.

fn c9_parser() -> Result<String, String> {
    let text = std::fs::read_to_string(fixture_path()).map_err(|e| format!("fixture: {e}"))?;
    let doc = parse(&text).map_err(|d| format!("fixture parse: {d:?}"))?;
    let canon = serialize(&doc);
    let doc2 = parse(&canon).map_err(|d| format!("canonical reparse: {d:?}"))?;
    if !doc.structurally_equal(&doc2) {
        return Err("round trip changed the document".to_string());
    }
    let malformed: [&str; 10] = [
        "",
        "param g nominal 2 in [-1, 1]\ncascade c",
        "param g in [1, -1] nominal 0\ncascade c",
        "component c modes 1 channels 1 { S = I(2) Cminus = [0] }\ncascade c",
        "component c modes 1 channels 1 { S = I(1) Cminus = [0, 1; 2] }\ncascade c",
        "component c modes 1 channels 1 { S = I(1) Cminus = [zeta] }\ncascade c",
        "component c modes 1 channels 1 { S = I(1) Cminus = [0] }\ncascade c\ncascade c",
        "cascade ghost",
        "param @ nominal 0 in [0, 1]",
        "component c modes 1 channels 1 { S = I(1) Cminus = [0]",
    ];
    for (k, bad) in malformed.iter().enumerate() {
        match parse(bad) {
            Ok(_) => return Err(format!("malformed input {k} was accepted")),
            Err(diags) => {
                if diags.is_empty() {
                    return Err(format!("malformed input {k} produced no diagnostics"));
                }
                for d in &diags {
                    if d.line < 1 || d.col < 1 || d.message.is_empty() {
                        return Err(format!("malformed input {k} produced an unpositioned diagnostic"));
                    }
                }
            }
        }
    }
    Ok("round trip stable, 10 malformed inputs all diagnosed".to_string())
}

// Criterion 10: the shipped binary produces a schema-valid report quickly.

fn c10_end_to_end() -> Result<String, String> {
    let start = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_slhnet"))
        .arg("analyze")
        .arg(fixture_path())
        .output()
        .map_err(|e| format!("spawn: {e}"))?;
    let dt = start.elapsed().as_secs_f64();
    if !out.status.success() {
        return Err(format!(
            "exit {:?}, stderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("stdout is not JSON: {e}"))?;
    let obj = v.as_object().ok_or("report is not a JSON object")?;
    let schema: [(&str, fn(&serde_json::Value) -> bool); 12] = [
        ("model_name", |x| x.is_string()),
        ("nominal_stable", |x| x.is_boolean()),
        ("spectral_abscissa", |x| x.is_f64()),
        ("margin", |x| x.is_f64()),
        ("eta", |x| x.is_f64()),
        ("theorem2_verdict", |x| x.is_boolean()),
        ("zeta", |x| x.is_f64() || x.is_null()),
        ("lyapunov_bound", |x| x.is_f64() || x.is_null()),
        ("theorem3_verdict", |x| x.is_boolean()),
        ("witness_residual", |x| x.is_f64() || x.is_null()),
        ("worst_sample_index", |x| x.is_u64()),
        ("warnings", |x| x.is_array()),
    ];
    for (key, check) in schema {
        let val = obj.get(key).ok_or_else(|| format!("missing key {key}"))?;
        if !check(val) {
            return Err(format!("key {key} has the wrong type: {val}"));
        }
    }
    if obj.len() != schema.len() {
        return Err(format!("report has {} keys, expected {}", obj.len(), schema.len()));
    }
    let margin = v["margin"].as_f64().unwrap();
    if (margin - 1.5).abs() > 1e-6 {
        return Err(format!("margin {margin} is not 1.5"));
    }
    if v["theorem2_verdict"] != true {
        return Err("theorem2_verdict is not true".to_string());
    }
    if v["theorem3_verdict"] != true {
        return Err("theorem3_verdict is not true".to_string());
    }
    if dt >= 2.0 {
        return Err(format!("took {dt:.2} s, budget is 2 s"));
    }
    Ok(format!("schema valid, margin {margin:.7}, both verdicts true"))
}
