mod common;

use accretive::funcalc::{MonotoneFunction, DEFAULT_ORDER};
use accretive::linalg::{inverse, loewner_leq};
use accretive::means::{
    arithmetic_mean, drury_half, geometric_mean, geometric_neg, geometric_paths, harmonic_mean, sigma_mean,
};
use accretive::sector::{random_invertible, random_sectorial, sample_rng};
use accretive::ComplexMatrix;
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

const LAMBDAS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

fn pair(dim: usize, alpha: f64, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    let s = spec(dim, alpha, 2, seed);
    (random_sectorial(&s, 0).unwrap(), random_sectorial(&s, 1).unwrap())
}

fn scalar_matrix(x: f64) -> ComplexMatrix {
    ComplexMatrix::scalar(Complex64::new(x, 0.0))
}

#[test]
fn scalar_examples() {
    let g = geometric_mean(&scalar_matrix(4.0), &scalar_matrix(9.0), 0.5, DEFAULT_ORDER).unwrap();
    assert!((g[(0, 0)] - 6.0).norm() < 1e-12);
    let h = harmonic_mean(&scalar_matrix(2.0), &scalar_matrix(8.0), 0.5).unwrap();
    assert!((h[(0, 0)] - 3.2).norm() < 1e-14);
    let a = arithmetic_mean(&scalar_matrix(2.0), &scalar_matrix(8.0), 0.25).unwrap();
    assert!((a[(0, 0)] - 3.5).norm() < 1e-14);
}

#[test]
fn three_paths_agree() {
    for dim in DIMS {
        for alpha in ANGLES {
            let s = spec(dim, alpha, 6, 3);
            for i in (0..s.count).step_by(2) {
                let a = random_sectorial(&s, i).unwrap();
                let b = random_sectorial(&s, i + 1).unwrap();
                for l in LAMBDAS {
                    let paths = geometric_paths(&a, &b, l, DEFAULT_ORDER).unwrap();
                    assert!(paths.max_deviation().unwrap() <= 1e-8, "dim {dim} alpha {alpha} lambda {l}");
                }
                let d = drury_half(&a, &b, DEFAULT_ORDER).unwrap();
                assert!(rel_dev(&d, &geometric_mean(&a, &b, 0.5, DEFAULT_ORDER).unwrap()) <= 1e-7);
            }
        }
    }
}

#[test]
fn positive_degeneration() {
    for dim in DIMS {
        let s = spec(dim, 0.0, 6, 9);
        for i in (0..s.count).step_by(2) {
            let a = random_sectorial(&s, i).unwrap();
            let b = random_sectorial(&s, i + 1).unwrap();
            for (name, p) in CATALOG {
                let f = catalog_fn(name, p);
                let t = f.derivative_at_one;
                let mid = sigma_mean(&a, &b, &f, DEFAULT_ORDER).unwrap();
                assert!(loewner_leq(&harmonic_mean(&a, &b, t).unwrap(), &mid).unwrap().holds);
                assert!(loewner_leq(&mid, &arithmetic_mean(&a, &b, t).unwrap()).unwrap().holds);
                assert!(rel_dev(&mid, &kubo_ando(&a, &b, |x| scalar(name, p, x))) <= 1e-12);
            }
            let am = arithmetic_mean(&a, &b, 0.5).unwrap();
            let hm = harmonic_mean(&a, &b, 0.5).unwrap();
            let lhs = geometric_mean(&am, &hm, 0.5, DEFAULT_ORDER).unwrap();
            assert!(rel_dev(&lhs, &geometric_mean(&a, &b, 0.5, DEFAULT_ORDER).unwrap()) <= 1e-8);
        }
    }
}

#[test]
fn geometric_neg_on_scalars() {
    let x = geometric_neg(&scalar_matrix(4.0), &scalar_matrix(9.0), 0.5, DEFAULT_ORDER).unwrap();
    assert!((x[(0, 0)] - 4.0 * (9.0f64 / 4.0).powf(-0.5)).norm() < 1e-10);
}

#[test]
fn parameters_validated() {
    let i = ComplexMatrix::identity(2);
    assert!(harmonic_mean(&i, &i, 1.5).is_err());
    assert!(geometric_mean(&i, &i, 0.0, 40).is_err());
    assert!(geometric_mean(&i, &ComplexMatrix::identity(3), 0.5, 40).is_err());
    let bad = ComplexMatrix::from_real_diag(&[1.0, -2.0]);
    assert!(matches!(
        sigma_mean(&i, &bad, &MonotoneFunction::uniform(), 40),
        Err(accretive::Error::Precondition { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_flips(dim in 1usize..=8, alpha in 0.0..1.2f64, seed: u64, l in prop::sample::select(LAMBDAS.to_vec())) {
        let (a, b) = pair(dim, alpha, seed);
        let g1 = geometric_mean(&a, &b, l, DEFAULT_ORDER).unwrap();
        let g2 = geometric_mean(&b, &a, 1.0 - l, DEFAULT_ORDER).unwrap();
        prop_assert!(rel_dev(&g1, &g2) <= 1e-8);
        prop_assert!(rel_dev(&harmonic_mean(&a, &b, l).unwrap(), &harmonic_mean(&b, &a, 1.0 - l).unwrap()) <= 1e-12);
        prop_assert!(rel_dev(&arithmetic_mean(&a, &b, l).unwrap(), &arithmetic_mean(&b, &a, 1.0 - l).unwrap()) <= 1e-14);
    }

    #[test]
    fn inversion(dim in 1usize..=8, alpha in 0.0..1.2f64, seed: u64, l in prop::sample::select(LAMBDAS.to_vec())) {
        let (a, b) = pair(dim, alpha, seed);
        let lhs = na_inverse(&geometric_mean(&a, &b, l, DEFAULT_ORDER).unwrap());
        let rhs = geometric_mean(&inverse(&a).unwrap(), &inverse(&b).unwrap(), l, DEFAULT_ORDER).unwrap();
        prop_assert!(rel_dev(&lhs, &rhs) <= 1e-8);
    }

    #[test]
    fn transformer(k in 0usize..6, dim in 1usize..=8, alpha in 0.0..1.2f64, seed: u64) {
        let (name, p) = CATALOG[k];
        let f = catalog_fn(name, p);
        let (a, b) = pair(dim, alpha, seed);
        let c = random_invertible(&mut sample_rng(seed, 5), dim);
        let ch = c.adjoint();
        let lhs = &(&ch * &sigma_mean(&a, &b, &f, DEFAULT_ORDER).unwrap()) * &c;
        let rhs = sigma_mean(&(&(&ch * &a) * &c), &(&(&ch * &b) * &c), &f, DEFAULT_ORDER).unwrap();
        prop_assert!(rel_dev(&lhs, &rhs) <= 1e-7);
    }

    #[test]
    fn idempotent(k in 0usize..6, dim in 1usize..=8, alpha in 0.0..1.2f64, seed: u64) {
        let (name, p) = CATALOG[k];
        let f = catalog_fn(name, p);
        let (a, _) = pair(dim, alpha, seed);
        prop_assert!(rel_dev(&sigma_mean(&a, &a, &f, DEFAULT_ORDER).unwrap(), &a) <= 1e-9);
    }

    #[test]
    fn means_stay_in_sector(k in 0usize..6, dim in 1usize..=8, alpha in 0.0..1.2f64, seed: u64) {
        let (name, p) = CATALOG[k];
        let f = catalog_fn(name, p);
        let (a, b) = pair(dim, alpha, seed);
        let m = sigma_mean(&a, &b, &f, DEFAULT_ORDER).unwrap();
        prop_assert!(accretive::sector::sectorial_angle(&m).unwrap() <= alpha + 1e-9);
    }
}
