//! Structural algebra of the doubled representation and the series product.

mod common;

use common::{matrix, rng, triple};
use slhnet::linalg::{max_abs, max_abs_diff, spectral_norm};
use slhnet::realization::to_state_space;
use slhnet::{flat, re_flat, series_product, DoubledMatrix, SlhTriple};

#[test]
fn flat_is_an_involution() {
    let mut r = rng(11);
    for _ in 0..50 {
        let x = matrix(&mut r, 4, 4, 2.0);
        assert_eq!(max_abs_diff(&flat(&flat(&x).unwrap()).unwrap(), &x), 0.0);
    }
    // Odd dimension has no block split.
    assert!(flat(&matrix(&mut r, 3, 3, 1.0)).is_err());
}

#[test]
fn flat_reverses_products() {
    let mut r = rng(12);
    for _ in 0..50 {
        let x = matrix(&mut r, 4, 4, 2.0);
        let y = matrix(&mut r, 4, 4, 2.0);
        let lhs = flat(&x.dot(&y)).unwrap();
        let rhs = flat(&y).unwrap().dot(&flat(&x).unwrap());
        assert!(max_abs_diff(&lhs, &rhs) <= 1e-13 * max_abs(&lhs).max(1.0));
    }
}

#[test]
fn re_flat_output_is_flat_hermitian() {
    let mut r = rng(13);
    for _ in 0..50 {
        let x = matrix(&mut r, 6, 6, 3.0);
        let y = re_flat(&x).unwrap();
        assert!(max_abs_diff(&flat(&y).unwrap(), &y) <= 1e-13 * max_abs(&y).max(1.0));
        assert!(max_abs_diff(&re_flat(&y).unwrap(), &y) <= 1e-13 * max_abs(&y).max(1.0));
    }
}

#[test]
fn doubled_products_stay_doubled() {
    let mut r = rng(14);
    for _ in 0..25 {
        let x = DoubledMatrix::new(matrix(&mut r, 3, 3, 1.0), matrix(&mut r, 3, 3, 1.0)).unwrap();
        let y = DoubledMatrix::new(matrix(&mut r, 3, 3, 1.0), matrix(&mut r, 3, 3, 1.0)).unwrap();
        let full = x.mul(&y).unwrap().to_full();
        // The product of two block-patterned matrices must decode again.
        assert!(DoubledMatrix::from_full_tol(&full, 1e-10).is_ok());
        let sum = x.add(&y).unwrap().to_full();
        assert!(DoubledMatrix::from_full_tol(&sum, 1e-10).is_ok());
    }
}

#[test]
fn series_product_has_the_identity_system_as_unit() {
    let mut r = rng(15);
    for _ in 0..20 {
        let g = triple(&mut r, 2, 3, 1.0);
        let id = SlhTriple::identity(2, 3);
        let left = series_product(&id, &g).unwrap();
        let right = series_product(&g, &id).unwrap();
        for h in [&left, &right] {
            assert!(max_abs_diff(h.s(), g.s()) < 1e-12);
            assert!(max_abs_diff(h.c_minus(), g.c_minus()) < 1e-12);
            assert!(max_abs_diff(h.c_plus(), g.c_plus()) < 1e-12);
            assert!(
                max_abs_diff(h.hamiltonian().omega_minus(), g.hamiltonian().omega_minus())
                    < 1e-12
            );
            assert!(
                max_abs_diff(h.hamiltonian().omega_plus(), g.hamiltonian().omega_plus()) < 1e-12
            );
        }
    }
}

#[test]
fn series_product_is_associative() {
    let mut r = rng(16);
    for _ in 0..20 {
        let g1 = triple(&mut r, 2, 2, 1.0);
        let g2 = triple(&mut r, 2, 2, 1.0);
        let g3 = triple(&mut r, 2, 2, 1.0);
        let lhs = series_product(&series_product(&g3, &g2).unwrap(), &g1).unwrap();
        let rhs = series_product(&g3, &series_product(&g2, &g1).unwrap()).unwrap();
        let tol = 1e-11;
        assert!(max_abs_diff(lhs.s(), rhs.s()) < tol);
        assert!(max_abs_diff(lhs.c_minus(), rhs.c_minus()) < tol);
        assert!(max_abs_diff(lhs.c_plus(), rhs.c_plus()) < tol);
        assert!(
            max_abs_diff(lhs.hamiltonian().omega_minus(), rhs.hamiltonian().omega_minus()) < tol
        );
        assert!(
            max_abs_diff(lhs.hamiltonian().omega_plus(), rhs.hamiltonian().omega_plus()) < tol
        );
    }
}

#[test]
fn cascade_drift_spectra_come_in_conjugate_pairs() {
    let mut r = rng(17);
    for _ in 0..20 {
        let g = triple(&mut r, 3, 2, 1.0);
        let a = to_state_space(&g).unwrap().a().clone();
        let eigs = slhnet::linalg::eigenvalues(&a).unwrap();
        let scale = spectral_norm(&a).unwrap().max(1.0);
        for lam in &eigs {
            let has_mate = eigs
                .iter()
                .any(|mu| (mu - lam.conj()).norm() < 1e-8 * scale);
            assert!(has_mate, "eigenvalue {lam} lacks a conjugate partner");
        }
    }
}
