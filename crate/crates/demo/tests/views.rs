use cstar_fixpoint_demo::{condition_grid, lowner_compare, picard_trace, HEATMAP_SCENARIOS};

#[test]
fn picard_view_converges_to_two() {
    let v = picard_trace(0.5, 1.0, 10.0, 0.5, 0.5).unwrap();
    assert_eq!(v["status"], "converged");
    assert!((v["fixed_point"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    let steps = v["steps"].as_array().unwrap();
    let envelope = v["envelope"].as_array().unwrap();
    assert_eq!(steps.len(), envelope.len());
    assert_eq!(v["points"].as_array().unwrap().len(), steps.len() + 1);
    assert!(v["holds"].as_array().unwrap().iter().all(|h| h == true));
}

#[test]
fn picard_view_flags_a_loose_tau() {
    // steps shrink like 0.8ⁿ, faster than the claimed 0.5ⁿ envelope allows
    let v = picard_trace(0.8, 0.0, 5.0, 0.5, 0.5).unwrap();
    assert!(v["holds"].as_array().unwrap().iter().any(|h| h == false));
}

#[test]
fn picard_view_rejects_expanding_maps() {
    assert!(picard_trace(1.5, 0.0, 1.0, 0.5, 0.5).is_err());
}

#[test]
fn heatmap_shapes() {
    for scenario in HEATMAP_SCENARIOS {
        let v = condition_grid(scenario, 0.75, 0.4, 21).unwrap();
        assert_eq!(v["values"].as_array().unwrap().len(), 21 * 21, "{scenario}");
    }
    assert!(condition_grid("nope", 0.5, 0.5, 10).is_err());
    assert!(condition_grid("affine_scalar", 0.5, 0.5, 1).is_err());
}

#[test]
fn step_map_heatmap_has_no_failures() {
    let v = condition_grid("kannan_step", 0.75, 0.4, 61).unwrap();
    assert_eq!(v["fails"], 0);
    assert!(v["holds"].as_u64().unwrap() > 0);
}

#[test]
fn affine_heatmap_fails_near_the_fixed_point() {
    let v = condition_grid("affine_scalar", 0.5, 0.5, 41).unwrap();
    assert!(v["fails"].as_u64().unwrap() > 0);
}

#[test]
fn square_root_keeps_order_but_square_does_not() {
    let a = [1.0, 1.0, 1.0];
    let b = [2.0, 1.0, 1.0];
    let root = lowner_compare(a, b, 0.5).unwrap();
    assert_eq!(root["order"]["verdict"], "holds");
    assert_eq!(root["powered"]["order"]["verdict"], "holds");
    let square = lowner_compare(a, b, 2.0).unwrap();
    assert_eq!(square["powered"]["order"]["verdict"], "fails");
}

#[test]
fn indefinite_input_has_no_power() {
    let v = lowner_compare([1.0, 2.0, 1.0], [3.0, 0.0, 3.0], 0.5).unwrap();
    assert!(v["powered"].is_null());
}
