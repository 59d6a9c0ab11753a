mod common;

use accretive::linalg::inverse;
use accretive::sector::{
    is_accretive, random_pd, random_sectorial, random_unitary, re_bounds, sample_rng, sectorial_angle, EnsembleSpec,
};
use accretive::ComplexMatrix;
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn generator_soundness() {
    for dim in DIMS {
        for alpha in ANGLES {
            let s = spec(dim, alpha, 200, 11);
            for i in 0..s.count {
                let a = random_sectorial(&s, i).unwrap();
                assert!(is_accretive(&a).0);
                assert!(sectorial_angle(&a).unwrap() <= alpha + 1e-10, "dim {dim} alpha {alpha} index {i}");
                let (m, big_m) = re_bounds(&a).unwrap();
                assert!(m >= s.m - 1e-10 && big_m <= s.big_m + 1e-10);
                if alpha == 0.0 {
                    assert_eq!(a.hermitian_defect(), 0.0);
                }
            }
        }
    }
}

#[test]
fn deterministic_per_seed_and_index() {
    let s = spec(5, 0.7, 10, 42);
    for i in 0..10 {
        assert_eq!(random_sectorial(&s, i).unwrap(), random_sectorial(&s, i).unwrap());
    }
    assert_ne!(random_sectorial(&s, 0).unwrap(), random_sectorial(&s, 1).unwrap());
    assert_eq!(random_pd(&s, 3).unwrap(), random_sectorial(&s.positive(), 3).unwrap());
}

#[test]
fn bad_specs_rejected() {
    let good = spec(2, 0.5, 3, 0);
    let bad = [
        EnsembleSpec { dim: 0, ..good },
        EnsembleSpec { count: 0, ..good },
        EnsembleSpec { alpha_max: 1.6, ..good },
        EnsembleSpec { m: 0.0, ..good },
        EnsembleSpec { big_m: 0.5, ..good },
    ];
    for s in bad {
        assert!(random_sectorial(&s, 0).is_err(), "{s:?}");
    }
    assert!(random_sectorial(&good, 3).is_err());
}

#[test]
fn known_angles() {
    let d = ComplexMatrix::from_diag(&[Complex64::new(1.0, 1.0), Complex64::new(1.0, -1.0)]);
    assert!((sectorial_angle(&d).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    assert_eq!(sectorial_angle(&ComplexMatrix::identity(3)).unwrap(), 0.0);
    let i = ComplexMatrix::scalar(Complex64::new(0.0, 1.0));
    assert!(!is_accretive(&i).0);
    assert!(matches!(sectorial_angle(&i), Err(accretive::Error::Precondition { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn angle_matches_bisection(dim in 1usize..=8, alpha in 0.0..1.4f64, seed: u64) {
        let a = random_sectorial(&spec(dim, alpha, 1, seed), 0).unwrap();
        prop_assert!((sectorial_angle(&a).unwrap() - sector_angle_oracle(&a)).abs() <= 1e-9);
    }

    #[test]
    fn angle_unitarily_invariant(dim in 1usize..=8, alpha in 0.0..1.4f64, seed: u64) {
        let a = random_sectorial(&spec(dim, alpha, 1, seed), 0).unwrap();
        let u = random_unitary(&mut sample_rng(seed, 99), dim);
        let b = &(&u * &a) * &u.adjoint();
        prop_assert!((sectorial_angle(&b).unwrap() - sectorial_angle(&a).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn sector_closed_under_sum_and_inverse(dim in 1usize..=8, alpha in 0.0..1.4f64, seed: u64) {
        let s = spec(dim, alpha, 2, seed);
        let a = random_sectorial(&s, 0).unwrap();
        let b = random_sectorial(&s, 1).unwrap();
        prop_assert!(sectorial_angle(&(&a + &b)).unwrap() <= alpha + 1e-9);
        prop_assert!(sectorial_angle(&inverse(&a).unwrap()).unwrap() <= alpha + 1e-9);
    }
}
