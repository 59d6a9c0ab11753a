mod common;

use std::collections::BTreeSet;

use accretive::funcalc::{apply_function, MonotoneFunction, DEFAULT_ORDER};
use accretive::linalg::{loewner_leq, NormKind};
use accretive::maps::MapVariant;
use accretive::means::{arithmetic_mean, harmonic_mean, sigma_mean};
use accretive::sector::{random_sectorial, sectorial_angle};
use accretive::verify::{
    default_suite, kantorovich_constant, run_check, run_suite, CheckId, CheckKind, CheckParams, CheckReport,
    EnsembleKind, MapNeed, MapParams, SuiteEntry,
};
use common::*;
use proptest::prelude::*;

fn params(id: CheckId, f: MonotoneFunction) -> CheckParams {
    let mut p = CheckParams::new(f.clone()).with_order(40);
    if id.needs_second_function() {
        p = p.with_g(accretive::verify::kantorovich_partner(&f).unwrap());
    }
    if id.map_need() != MapNeed::None {
        p = p.with_map(MapParams {
            variant: MapVariant::Kraus,
            dim_out: None,
            seed: 17,
        });
    }
    if id.uses_norm() {
        p = p.with_norm(NormKind::KyFan(2));
    }
    p
}

fn strip_time(mut r: Vec<CheckReport>) -> Vec<CheckReport> {
    r.iter_mut().for_each(|x| x.elapsed_ms = 0.0);
    r
}

#[test]
fn reports_independent_of_thread_count() {
    let entries: Vec<SuiteEntry> = CheckId::ALL
        .iter()
        .map(|&id| {
            let alpha = if id.ensemble() == EnsembleKind::Positive { 0.0 } else { 0.7 };
            SuiteEntry {
                check: id,
                ensemble: spec(3, alpha, 12, 77),
                params: params(id, MonotoneFunction::power(0.5).unwrap()),
            }
        })
        .collect();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        strip_time(pool.install(|| run_suite(&entries)))
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
}

#[test]
fn positive_ensembles_reproduce_classical_checks() {
    let pairs: Vec<(CheckId, CheckId)> = CheckId::ALL
        .iter()
        .filter_map(|&id| id.classical_counterpart().map(|c| (id, c)))
        .collect();
    assert!(pairs.len() >= 10);
    for (sectorial, classical) in pairs {
        for (name, p) in CATALOG {
            let f = catalog_fn(name, p);
            let s = spec(4, 0.0, 20, 5);
            let a = run_check(sectorial, &s, &params(sectorial, f.clone())).unwrap();
            let b = run_check(classical, &s, &params(classical, f)).unwrap();
            assert!(
                (a.min_margin - b.min_margin).abs() <= 1e-12,
                "{sectorial} vs {classical}: {} vs {}",
                a.min_margin,
                b.min_margin
            );
        }
    }
}

#[test]
fn kantorovich_constants() {
    assert_eq!(kantorovich_constant(1.0, 1.0).unwrap(), 1.0);
    assert_eq!(kantorovich_constant(1.0, 4.0).unwrap(), 25.0 / 16.0);
    assert_eq!(kantorovich_constant(1.0, 2.0).unwrap(), 9.0 / 8.0);
    assert!((kantorovich_constant(0.5, 8.0).unwrap() - 72.25 / 16.0).abs() < 1e-15);
    assert!(kantorovich_constant(2.0, 1.0).is_err());
    assert!(kantorovich_constant(0.0, 1.0).is_err());
}

#[test]
fn catalog_names_round_trip() {
    let names: BTreeSet<&str> = CheckId::ALL.iter().map(|c| c.name()).collect();
    assert_eq!(names.len(), CheckId::ALL.len());
    for &id in CheckId::ALL {
        assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
        assert!(!id.statement().is_empty());
        if id.kind() == CheckKind::Identity {
            assert!(id.classical_counterpart().is_none());
        }
    }
    let err = "no_such_check".parse::<CheckId>().unwrap_err();
    assert!(err.to_string().contains("no_such_check"));
}

#[test]
fn default_suite_shape() {
    let suite = default_suite(32);
    let ids: BTreeSet<CheckId> = suite.iter().map(|e| e.check).collect();
    assert_eq!(ids.len(), CheckId::ALL.len());
    for e in &suite {
        assert!(accretive::verify::validate(e.check, &e.ensemble, &e.params).is_ok());
        if e.check.ensemble() == EnsembleKind::Positive {
            assert_eq!(e.ensemble.alpha_max, 0.0);
        }
    }
    let f = MonotoneFunction::power(0.5).unwrap();
    assert!(accretive::verify::validate(CheckId::PosTs, &spec(3, 0.5, 4, 1), &params(CheckId::PosTs, f)).is_err());
}

#[test]
fn reversed_mixed_relation_has_scalar_counterexample() {
    // a = 1, b = 4, s = t = 1/2: 1 ∇ (1 ♯ 4) = 1.5 < 1 ♯ (1 ∇ 4) = √2.5
    let lhs = 0.5 * (1.0 + 2.0);
    let rhs = 2.5f64.sqrt();
    assert!(lhs < rhs);
    let r = run_check(
        CheckId::PosTs,
        &spec(1, 0.0, 50, 3),
        &params(CheckId::PosTs, MonotoneFunction::power(0.5).unwrap()),
    )
    .unwrap();
    assert!(!r.pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn per_sample_angle_is_the_tighter_constant(k in 0usize..6, dim in 1usize..=6, alpha in 0.05..1.3f64, seed: u64) {
        let (name, p) = CATALOG[k];
        let f = catalog_fn(name, p);
        let s = spec(dim, alpha, 2, seed);
        let a = random_sectorial(&s, 0).unwrap();
        let b = random_sectorial(&s, 1).unwrap();
        let own = sectorial_angle(&a).unwrap().max(sectorial_angle(&b).unwrap());
        let sec2 = |x: f64| x.cos().powi(-2);

        let re_f = apply_function(&f, &a, DEFAULT_ORDER).unwrap().hermitian_part();
        let f_re = apply_function(&f, &a.hermitian_part(), DEFAULT_ORDER).unwrap();
        let upper = |x: f64| loewner_leq(&re_f, &f_re.scale(sec2(x))).unwrap().margin;
        prop_assert!(upper(alpha) >= upper(sectorial_angle(&a).unwrap()));

        let t = f.derivative_at_one;
        let mid = sigma_mean(&a, &b, &f, DEFAULT_ORDER).unwrap().hermitian_part();
        let h = harmonic_mean(&a, &b, t).unwrap().hermitian_part();
        let ar = arithmetic_mean(&a, &b, t).unwrap().hermitian_part();
        let lower = |x: f64| loewner_leq(&h.scale(x.cos().powi(2)), &mid).unwrap().margin;
        let top = |x: f64| loewner_leq(&mid, &ar.scale(sec2(x))).unwrap().margin;
        prop_assert!(lower(alpha) >= lower(own));
        prop_assert!(top(alpha) >= top(own));
        prop_assert!(lower(own) >= -1e-7 && top(own) >= -1e-7);
    }
}
