//! Deterministic random generators shared by the integration suites.
// Each suite compiles this module separately and uses a different subset.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slhnet::linalg::{adjoint, identity, scale_re, transpose, zeros, C64, CMat};
use slhnet::realization::{spectral_abscissa, to_state_space};
use slhnet::{HamiltonianSpec, SlhTriple, UncertaintySample};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cnum(r: &mut ChaCha8Rng, scale: f64) -> C64 {
    C64::new(r.random_range(-scale..scale), r.random_range(-scale..scale))
}

pub fn matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> CMat {
    let mut m = zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = cnum(r, scale);
        }
    }
    m
}

pub fn hermitian(r: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat {
    let m = matrix(r, n, n, scale);
    scale_re(&(&m + &adjoint(&m)), 0.5)
}

pub fn symmetric(r: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat {
    let m = matrix(r, n, n, scale);
    scale_re(&(&m + &transpose(&m)), 0.5)
}

/// Product of random phase scalings and plane rotations; unitary to
/// machine precision without needing a factorization routine.
pub fn unitary(r: &mut ChaCha8Rng, n: usize) -> CMat {
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

pub fn ham(r: &mut ChaCha8Rng, n: usize, scale: f64) -> HamiltonianSpec {
    HamiltonianSpec::new(hermitian(r, n, scale), symmetric(r, n, scale)).expect("valid Hamiltonian")
}

pub fn triple(r: &mut ChaCha8Rng, n_modes: usize, n_channels: usize, scale: f64) -> SlhTriple {
    triple_with_activity(r, n_modes, n_channels, scale, 1.0)
}

/// Like `triple`, but with the active parts (the coupling and Hamiltonian
/// blocks that mix creation with annihilation operators) scaled down by
/// `activity`. Small values make the drift overwhelmingly likely stable.
pub fn triple_with_activity(
    r: &mut ChaCha8Rng,
    n_modes: usize,
    n_channels: usize,
    scale: f64,
    activity: f64,
) -> SlhTriple {
    let omega_minus = hermitian(r, n_modes, scale);
    let omega_plus = scale_re(&symmetric(r, n_modes, scale), activity);
    SlhTriple::new(
        unitary(r, n_channels),
        matrix(r, n_channels, n_modes, scale),
        scale_re(&matrix(r, n_channels, n_modes, scale), activity),
        HamiltonianSpec::new(omega_minus, omega_plus).expect("valid Hamiltonian"),
    )
    .expect("valid triple")
}

pub fn sample(r: &mut ChaCha8Rng, n_modes: usize, n_channels: usize, scale: f64) -> UncertaintySample {
    UncertaintySample::new(
        unitary(r, n_channels),
        matrix(r, n_channels, n_modes, scale),
        matrix(r, n_channels, n_modes, scale),
        ham(r, n_modes, scale),
    )
    .expect("valid sample")
}

/// Random stable drift with the doubled block symmetry: realize a random
/// system, then pull the whole spectrum left with a real diagonal shift
/// (which preserves the symmetry) until the abscissa is below -gap.
pub fn stable_doubled(r: &mut ChaCha8Rng, n_modes: usize, gap: f64) -> CMat {
    let g = triple(r, n_modes, n_modes.max(1), 1.0);
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
