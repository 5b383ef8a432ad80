use cstar_fixpoint::algebra::AlgebraDescriptor;
use cstar_fixpoint::catalog::{catalog_build, catalog_list, Expected, ParamValue, Parameters};
use cstar_fixpoint::metric::{
    is_cauchy_empirically, lemma1_check, verify_axioms, Axiom, Domain, MetricSpace, Point, Region,
    SequenceRecord,
};
use proptest::prelude::*;

fn valid_entries() -> Vec<(String, Parameters)> {
    let mut out = Vec::new();
    for name in catalog_list() {
        let entry = catalog_build(name, &Parameters::new()).unwrap();
        if !matches!(entry.expected, Expected::ViolatesMetricAxiom(_)) {
            out.push((name.to_string(), Parameters::new()));
        }
    }
    out.retain(|(name, _)| name != "paper_example_r_interpolative");
    out.push((
        "paper_example_r_interpolative".into(),
        Parameters::new().with("variant", ParamValue::Text("repaired".into())),
    ));
    out
}

#[test]
fn catalog_spaces_satisfy_axioms() {
    for (name, params) in valid_entries() {
        for seed in 0..5 {
            let entry = catalog_build(&name, &params).unwrap();
            let report = verify_axioms(&entry.space, 10_000, seed).unwrap();
            assert!(report.all_pass(), "{name} seed {seed}: {report:?}");
        }
    }
}

#[test]
fn finite_random_closure_is_a_metric() {
    for seed in 0..20 {
        let params = Parameters::new().with("seed", ParamValue::Number(seed as f64));
        let entry = catalog_build("finite_random_12", &params).unwrap();
        let report = verify_axioms(&entry.space, 100, 0).unwrap();
        assert!(report.all_pass(), "seed {seed}");
        // exhaustive triangle check, componentwise
        let points = entry.space.domain().finite_points().unwrap();
        for x in &points {
            for y in &points {
                for u in &points {
                    let dxy = entry.space.distance(x, y);
                    let dxu = entry.space.distance(x, u);
                    let duy = entry.space.distance(u, y);
                    let lhs = dxy.diagonal_entries().unwrap();
                    let r1 = dxu.diagonal_entries().unwrap();
                    let r2 = duy.diagonal_entries().unwrap();
                    for c in 0..lhs.len() {
                        assert!(r1[c] + r2[c] - lhs[c] >= -1e-10 * lhs[c].max(1.0));
                    }
                }
            }
        }
    }
}

#[test]
fn sum_squared_space_fails_identity_at_three() {
    let entry = catalog_build("paper_example_kannan", &Parameters::new()).unwrap();
    let report = verify_axioms(&entry.space, 1000, 0).unwrap();
    assert!(!report.identity.passed());
    let found = (0..5).any(|seed| {
        let r = verify_axioms(&entry.space, 1000, seed).unwrap();
        r.identity.witness.as_ref().is_some_and(|w| {
            w.axiom == Axiom::Identity
                && w.points[0] == Point::scalar(3.0)
                && w.values[0].diagonal_entries() == Some(&[36.0, 0.0][..])
        })
    });
    assert!(found, "anchor 3 should be the first identity witness");
}

#[test]
fn asymmetric_metric_is_caught() {
    let alg = AlgebraDescriptor::diagonal(1);
    let region = Region::interval("[0, 1]", 0.0, 1.0, |x| (0.0..=1.0).contains(&x)).unwrap();
    let space = MetricSpace::from_fn("skew", Domain::Region(region), alg, move |x, y| {
        let (a, b) = (x.as_scalar().unwrap(), y.as_scalar().unwrap());
        alg.diag(vec![if a < b { b - a } else { 2.0 * (a - b) }]).unwrap()
    });
    let report = verify_axioms(&space, 500, 1).unwrap();
    assert!(!report.symmetry.passed());
    assert!(report.identity.passed());
}

fn scalar_line() -> MetricSpace {
    let alg = AlgebraDescriptor::diagonal(1);
    let region = Region::interval("ℝ", -1e6, 1e6, f64::is_finite).unwrap();
    MetricSpace::from_fn("line", Domain::Region(region), alg, move |x, y| {
        alg.diag(vec![x.gap(y)]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triangle_residual_is_nonnegative(x in -1e3f64..1e3, y in -1e3f64..1e3, u in -1e3f64..1e3, c in 0.01f64..10.0) {
        let entry = catalog_build(
            "paper_example_r_interpolative",
            &Parameters::new()
                .with("variant", ParamValue::Text("repaired".into()))
                .with("c", ParamValue::Number(c)),
        ).unwrap();
        let (x, y, u) = (Point::scalar(x.abs() + 0.1), Point::scalar(y.abs() + 0.1), Point::scalar(u.abs() + 0.1));
        let sum = entry.space.distance(&x, &u).add(&entry.space.distance(&u, &y)).unwrap();
        let residual = sum.sub(&entry.space.distance(&x, &y)).unwrap();
        for v in residual.diagonal_entries().unwrap() {
            prop_assert!(*v >= -1e-10 * sum.norm().max(1.0));
        }
    }

    #[test]
    fn contracting_sequences_are_cauchy(x0 in -100f64..100.0, delta in 0.05f64..0.9, n in 30usize..200) {
        let space = scalar_line();
        let points: Vec<Point> = (0..n).map(|k| Point::scalar(x0 * delta.powi(k as i32))).collect();
        let record = SequenceRecord::from_points(&space, points);
        prop_assume!(record.step_norms()[0] > 0.0);
        let check = lemma1_check(&record, delta).unwrap();
        prop_assert!(check.consistent);
        if check.tail_bound > 0.0 {
            prop_assert!(is_cauchy_empirically(&space, &record, 2.0 * check.tail_bound));
        }
    }

    #[test]
    fn tail_bound_dominates_tail_distances(x0 in 1f64..100.0, delta in 0.05f64..0.9, n in 10usize..80) {
        let space = scalar_line();
        let points: Vec<Point> = (0..n).map(|k| Point::scalar(x0 * delta.powi(k as i32))).collect();
        let record = SequenceRecord::from_points(&space, points);
        let check = lemma1_check(&record, delta).unwrap();
        let pts = record.points();
        for m in 0..pts.len() {
            let bound = check.tail_bound_at(m);
            for p in pts[m..].iter() {
                let d = space.distance(&pts[m], p).norm();
                prop_assert!(d <= bound * (1.0 + 1e-9) + 1e-12, "m={m}: {d} > {bound}");
            }
        }
    }
}

#[test]
fn expanding_sequence_breaks_lemma() {
    let space = scalar_line();
    let points: Vec<Point> = (0..10).map(|k| Point::scalar(1.1f64.powi(k))).collect();
    let record = SequenceRecord::from_points(&space, points);
    let check = lemma1_check(&record, 0.5).unwrap();
    assert!(!check.consistent);
    assert_eq!(check.first_failure, Some(1));
    assert!(!is_cauchy_empirically(&space, &record, 1e-3));
}
