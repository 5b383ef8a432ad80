use cstar_fixpoint::catalog::{catalog_build, catalog_list, CatalogEntry, Expected, ParamValue, Parameters};
use cstar_fixpoint::conditions::{certify, ContractionSpec, SelfMap};
use cstar_fixpoint::metric::{lemma1_check, verify_axioms, Point};
use cstar_fixpoint::solvers::{
    alternating_solve, brute_force_fixed_points, picard_solve, r_interpolative_solve, reich_solve,
    uniqueness_probe, weak_solve, SolveStatus, SolverKind, StopRule,
};
use cstar_fixpoint::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn affine(a: f64, b: f64) -> CatalogEntry {
    catalog_build(
        "affine_scalar",
        &Parameters::new()
            .with("a", ParamValue::Number(a))
            .with("b", ParamValue::Number(b)),
    )
    .unwrap()
}

fn build(name: &str) -> CatalogEntry {
    catalog_build(name, &Parameters::new()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn converged_means_small_residual(
        a in -0.95f64..0.95,
        b in -5f64..5.0,
        x0 in -100f64..100.0,
        eps_exp in 4i32..12,
        max_iter in 1usize..400,
    ) {
        let entry = affine(a, b);
        let stop = StopRule::new(10f64.powi(-eps_exp), max_iter).unwrap();
        let result = picard_solve(&entry.space, &entry.map, &Point::scalar(x0), None, &stop).unwrap();
        prop_assert!(result.trace.len() <= max_iter + 1);
        prop_assert_eq!(result.iterations + 1, result.trace.len());
        if result.converged() {
            prop_assert!(result.residual <= 10.0 * stop.step_norm_epsilon);
        } else {
            prop_assert_eq!(result.status, SolveStatus::MaxIterations);
        }
    }

    #[test]
    fn alternating_with_itself_is_picard(a in -0.9f64..0.9, b in -5f64..5.0, x0 in -100f64..100.0) {
        let entry = affine(a, b);
        let stop = StopRule::default();
        let p = picard_solve(&entry.space, &entry.map, &Point::scalar(x0), None, &stop).unwrap();
        let q = alternating_solve(&entry.space, &entry.map, &entry.map, &Point::scalar(x0), None, &stop).unwrap();
        prop_assert_eq!(p.trace.points(), q.trace.points());
        prop_assert_eq!(p.status, q.status);
    }

    #[test]
    fn rate_estimates_the_slope(a in 0.1f64..0.9, x0 in 1f64..100.0) {
        let entry = affine(a, 0.0);
        let result = picard_solve(&entry.space, &entry.map, &Point::scalar(x0), None, &StopRule::default()).unwrap();
        let rate = result.empirical_rate.unwrap();
        prop_assert!(rate <= a + 0.05, "{rate} vs {a}");
        prop_assert!(rate >= a - 0.05, "{rate} vs {a}");
    }

    #[test]
    fn distance_to_limit_within_tail_bound(a in -0.9f64..0.9, b in -5f64..5.0, x0 in -100f64..100.0) {
        let entry = affine(a, b);
        let stop = StopRule::new(1e-10, 60).unwrap();
        let result = picard_solve(&entry.space, &entry.map, &Point::scalar(x0), None, &stop).unwrap();
        prop_assume!(result.trace.steps().len() >= 2 && result.trace.step_norms()[0] > 1e-6);
        let check = lemma1_check(&result.trace, a.abs() + 1e-9).unwrap();
        prop_assert!(check.consistent);
        let z = b / (1.0 - a);
        for (m, p) in result.trace.points().iter().enumerate() {
            let d = (p.as_scalar().unwrap() - z).abs();
            prop_assert!(d <= check.tail_bound_at(m) * (1.0 + 1e-9) + 1e-9);
        }
    }

    #[test]
    fn finite_runs_land_on_brute_force_fixed_points(seed in 0u64..200, start in 0usize..12) {
        let entry = catalog_build("finite_random_12", &Parameters::new().with("seed", ParamValue::Number(seed as f64))).unwrap();
        let fixed = brute_force_fixed_points(&entry.space, &entry.map).unwrap();
        prop_assert!(!fixed.is_empty());
        let result = picard_solve(&entry.space, &entry.map, &Point::Label(start), None, &StopRule::new(1e-10, 50).unwrap()).unwrap();
        if result.converged() {
            prop_assert!(fixed.contains(result.fixed_point.as_ref().unwrap()));
        }
    }
}

#[test]
fn fixed_point_start_has_trivial_trace() {
    let entry = affine(0.5, 1.0);
    let result = picard_solve(&entry.space, &entry.map, &Point::scalar(2.0), None, &StopRule::default()).unwrap();
    assert!(result.converged());
    assert_eq!(result.trace.len(), 1);
    assert_eq!(result.residual, 0.0);
}

#[test]
fn start_outside_domain_is_an_error() {
    let entry = build("kannan_step");
    let err = picard_solve(&entry.space, &entry.map, &Point::scalar(2.0), None, &StopRule::default());
    assert!(matches!(err, Err(Error::InvalidArgument(_))));
}

#[test]
fn certifying_entries_converge_monotonically() {
    for name in catalog_list() {
        let entry = build(name);
        if entry.expected != Expected::CertifiesAndConverges {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x0 = entry.space.domain().sample(&mut rng).unwrap();
            let result = entry.solve(entry.default_solver, &x0, &StopRule::default()).unwrap();
            assert!(result.converged(), "{name} from {x0}");
            let norms = result.trace.step_norms();
            assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{name} from {x0}: {norms:?}");
        }
    }
}

/// verify_axioms → certify → solve, checked against each entry's tag.
fn pipeline(entry: &CatalogEntry, seed: u64) {
    let name = &entry.name;
    let axioms = verify_axioms(&entry.space, 2000, seed).unwrap();
    let cert = certify(&entry.spec, &entry.map, &entry.space, 2000, seed).unwrap();
    let stop = StopRule::default();
    let run = entry.solve(entry.default_solver, &entry.default_start, &stop);
    match &entry.expected {
        Expected::CertifiesAndConverges => {
            assert!(axioms.all_pass() && cert.all_hold, "{name}");
            assert!(run.unwrap().converged(), "{name}");
        }
        Expected::ViolatesMetricAxiom(what) => {
            assert!(what.contains("d(x,x)"), "{name}: {what}");
            assert!(!axioms.identity.passed(), "{name}");
        }
        Expected::CertifiableDefect(what) if what.contains("domain") => {
            assert!(cert.domain_exits > 0, "{name}");
            assert_eq!(run.unwrap().status, SolveStatus::DomainExit, "{name}");
        }
        Expected::CertifiableDefect(_) => {
            assert!(axioms.all_pass(), "{name}");
            assert!(!cert.all_hold, "{name}");
            assert!(run.unwrap().converged(), "{name}");
        }
        Expected::OracleChecked(_) => {
            let fixed = brute_force_fixed_points(&entry.space, &entry.map).unwrap();
            let result = run.unwrap();
            if result.converged() {
                assert!(fixed.contains(result.fixed_point.as_ref().unwrap()), "{name}");
            }
        }
    }
}

#[test]
fn catalog_entries_reproduce_their_tags() {
    for seed in 0..5 {
        for name in catalog_list() {
            pipeline(&build(name), seed);
        }
        let repaired = catalog_build(
            "paper_example_r_interpolative",
            &Parameters::new().with("variant", ParamValue::Text("repaired".into())),
        )
        .unwrap();
        pipeline(&repaired, seed);
    }
}

#[test]
fn affine_pair_has_common_fixed_point_three() {
    let entry = build("affine_pair");
    let result = entry.solve(SolverKind::Alternating, &Point::scalar(-80.0), &StopRule::default()).unwrap();
    assert!(result.converged());
    assert!((result.fixed_point.unwrap().as_scalar().unwrap() - 3.0).abs() < 1e-8);
    assert!(result.secondary_residual.unwrap() <= 1e-8);
}

#[test]
fn reich_start_outside_unit_ball_is_rejected() {
    let entry = build("reich_halving");
    let err = reich_solve(&entry.space, &entry.map, &Point::scalar(4.0), &entry.spec, &StopRule::default());
    assert!(matches!(err, Err(Error::PreconditionFailed(_))));
    let ok = reich_solve(&entry.space, &entry.map, &Point::scalar(2.0), &entry.spec, &StopRule::default()).unwrap();
    assert!(ok.converged());
}

#[test]
fn solvers_reject_mismatched_specs() {
    let entry = build("affine_scalar");
    let stop = StopRule::default();
    assert!(reich_solve(&entry.space, &entry.map, &Point::scalar(1.0), &entry.spec, &stop).is_err());
    assert!(weak_solve(&entry.space, &entry.map, &Point::scalar(1.0), &entry.spec, &stop).is_err());
}

#[test]
fn weak_steps_never_increase() {
    let entry = build("weak_corollary");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let x0 = Point::scalar(rng.random_range(-1.0..=1.0));
        let result = weak_solve(&entry.space, &entry.map, &x0, &entry.spec, &StopRule::new(1e-300, 50).unwrap()).unwrap();
        assert!(result.bound_checks.iter().all(|c| c.holds()));
    }
}

#[test]
fn uniqueness_detects_two_fixed_points() {
    let entry = affine(0.5, 1.0);
    let two = SelfMap::scalar("attract to ±1", |x| if x >= 0.0 { 0.5 * x + 0.5 } else { 0.5 * x - 0.5 });
    let report = uniqueness_probe(&entry.space, &two, SolverKind::Picard, None, 50, 0, &StopRule::default()).unwrap();
    assert!(!report.unique);
    assert_eq!(report.cluster_count, 2);
    assert!((report.max_spread - 2.0).abs() < 1e-6);
}

#[test]
fn stop_rule_validation() {
    assert!(StopRule::new(0.0, 10).is_err());
    assert!(StopRule::new(1e-10, 0).is_err());
    assert!(StopRule::new(f64::NAN, 10).is_err());
}

#[test]
fn kannan_pair_spec_needs_partner() {
    let entry = build("affine_pair");
    assert!(entry.partner.is_some());
    let spec = ContractionSpec::interpolative_kannan(0.5, 0.5).unwrap();
    let err = uniqueness_probe(&entry.space, &entry.map, SolverKind::Alternating, Some(&spec), 10, 0, &StopRule::default());
    assert!(err.is_err());
}

#[test]
fn identity_map_has_a_cluster_per_start() {
    let entry = affine(0.5, 1.0);
    let report = uniqueness_probe(&entry.space, &SelfMap::identity(), SolverKind::Picard, None, 40, 2, &StopRule::default()).unwrap();
    assert!(!report.unique);
    assert_eq!(report.cluster_count, 40);
}

#[test]
fn pair_without_common_fixed_point_does_not_converge() {
    let entry = affine(0.5, 0.0);
    let t = SelfMap::scalar("x/2", |x| x / 2.0);
    let s = SelfMap::scalar("x/2 + 1", |x| x / 2.0 + 1.0);
    let result = alternating_solve(&entry.space, &t, &s, &Point::scalar(5.0), None, &StopRule::new(1e-10, 5000).unwrap()).unwrap();
    assert_eq!(result.status, SolveStatus::MaxIterations);
}

#[test]
fn identity_r_reduces_to_picard() {
    let entry = affine(0.5, 1.0);
    let stop = StopRule::default();
    let id = SelfMap::identity();
    let r = r_interpolative_solve(&entry.space, &entry.map, &id, &id, &Point::scalar(10.0), None, &stop).unwrap();
    let p = picard_solve(&entry.space, &entry.map, &Point::scalar(10.0), None, &stop).unwrap();
    assert!(r.converged());
    assert_eq!(r.trace.points(), p.trace.points());
}

#[test]
fn wrong_right_inverse_is_rejected() {
    let entry = catalog_build(
        "paper_example_r_interpolative",
        &Parameters::new().with("variant", ParamValue::Text("repaired".into())),
    )
    .unwrap();
    let cube_root = SelfMap::scalar("cbrt", f64::cbrt);
    let err = r_interpolative_solve(
        &entry.space,
        &entry.map,
        entry.r_map.as_ref().unwrap(),
        &cube_root,
        &Point::scalar(3.0),
        None,
        &StopRule::default(),
    );
    assert!(matches!(err, Err(Error::BadInverse { .. })));
}

#[test]
fn fixed_point_starts_converge_immediately() {
    for name in ["reich_halving", "weak_corollary"] {
        let entry = build(name);
        let result = entry.solve(entry.default_solver, &Point::scalar(0.0), &StopRule::default()).unwrap();
        assert!(result.converged(), "{name}");
        assert_eq!(result.trace.len(), 1, "{name}");
    }
}

#[test]
fn reich_envelope_with_tau_six_tenths_is_too_tight() {
    // 2⁻ⁿ outgrows 0.6^{n/0.6} ≈ 0.427ⁿ after a few steps
    let entry = catalog_build("reich_halving", &Parameters::new().with("tau", ParamValue::Number(0.6))).unwrap();
    let result = entry.solve(SolverKind::Reich, &Point::scalar(1.0), &StopRule::default()).unwrap();
    assert!(result.converged());
    assert!(result.bound_failures() > 0);
}
