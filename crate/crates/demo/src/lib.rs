//! Browser bindings for three interactive views: a Picard trace against its
//! geometric envelope, a slack map of the interpolative Kannan condition over
//! pairs `(x, y)`, and a 2×2 Löwner order explorer for fractional powers.
//!
//! Every view is a plain function returning JSON so it can be tested natively;
//! the `#[wasm_bindgen]` wrappers only convert errors.

use cstar_fixpoint::algebra::{AlgebraDescriptor, AlgebraElement, OrderResult};
use cstar_fixpoint::catalog::{catalog_build, ParamValue, Parameters};
use cstar_fixpoint::conditions::{evaluate_condition, ContractionSpec};
use cstar_fixpoint::metric::Point;
use cstar_fixpoint::solvers::{picard_solve, StopRule};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub const HEATMAP_SCENARIOS: [&str; 3] = ["affine_scalar", "kannan_step", "matrix_scaled_affine"];
const MAX_RESOLUTION: usize = 256;
const TRACE_LIMIT: usize = 200;

fn finite(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

/// Picard iteration of `x ↦ a·x + b` from `x0`, with every step checked
/// against `τⁿ·|x₀ − x₁|`.
pub fn picard_trace(a: f64, b: f64, x0: f64, tau: f64, beta: f64) -> Result<Value, String> {
    let params = Parameters::new()
        .with("a", ParamValue::Number(a))
        .with("b", ParamValue::Number(b))
        .with("tau", ParamValue::Number(tau))
        .with("beta", ParamValue::Number(beta));
    let entry = catalog_build("affine_scalar", &params).map_err(|e| e.to_string())?;
    let stop = StopRule::new(1e-10, TRACE_LIMIT).map_err(|e| e.to_string())?;
    let result = picard_solve(&entry.space, &entry.map, &Point::scalar(x0), Some(&entry.spec), &stop)
        .map_err(|e| e.to_string())?;
    let norms = result.trace.step_norms();
    let first = norms.first().copied().unwrap_or(0.0);
    Ok(json!({
        "status": result.status.as_str(),
        "fixed_point": result.fixed_point.as_ref().and_then(Point::as_scalar).map(finite),
        "exact": finite(b / (1.0 - a)),
        "residual": finite(result.residual),
        "rate": result.empirical_rate.map(finite),
        "points": result.trace.points().iter().map(|p| finite(p.as_scalar().unwrap_or(f64::NAN))).collect::<Vec<_>>(),
        "steps": norms.iter().map(|&s| finite(s)).collect::<Vec<_>>(),
        "envelope": (0..norms.len()).map(|n| finite(tau.powi(n as i32) * first)).collect::<Vec<_>>(),
        "holds": result.bound_checks.iter().map(OrderResult::holds).collect::<Vec<_>>(),
    }))
}

fn heatmap_range(scenario: &str) -> (f64, f64) {
    match scenario {
        "kannan_step" => (0.0, 6.0),
        _ => (-10.0, 10.0),
    }
}

/// Order slack of `d(Tx,Ty) ⪯ τ d(x,Tx)^β d(y,Ty)^{1−β}` on a
/// `resolution × resolution` grid, row-major with `y` along rows. Slack is
/// the smallest eigenvalue of `rhs − lhs`; `null` marks vacuous pairs and
/// points outside the domain.
pub fn condition_grid(scenario: &str, tau: f64, beta: f64, resolution: usize) -> Result<Value, String> {
    if !HEATMAP_SCENARIOS.contains(&scenario) {
        return Err(format!("unknown scenario '{scenario}'"));
    }
    if !(2..=MAX_RESOLUTION).contains(&resolution) {
        return Err(format!("resolution must be in 2..={MAX_RESOLUTION}"));
    }
    let entry = catalog_build(scenario, &Parameters::new()).map_err(|e| e.to_string())?;
    let spec = ContractionSpec::interpolative_kannan(tau, beta).map_err(|e| e.to_string())?;
    let (lo, hi) = heatmap_range(scenario);
    let coord = |k: usize| lo + (hi - lo) * k as f64 / (resolution - 1) as f64;
    let domain = entry.space.domain();
    let mut values = Vec::with_capacity(resolution * resolution);
    let (mut holds, mut fails) = (0, 0);
    for row in 0..resolution {
        let y = Point::scalar(coord(row));
        for col in 0..resolution {
            let x = Point::scalar(coord(col));
            if !domain.contains(&x) || !domain.contains(&y) {
                values.push(Value::Null);
                continue;
            }
            let eval = evaluate_condition(&spec, &entry.map, &x, &y, &entry.space).map_err(|e| e.to_string())?;
            match eval.order {
                Some(order) => {
                    if order.holds() {
                        holds += 1;
                    } else {
                        fails += 1;
                    }
                    values.push(order.witness_eigenvalue.map(finite).unwrap_or(Value::Null));
                }
                None => values.push(Value::Null),
            }
        }
    }
    Ok(json!({
        "scenario": scenario,
        "min": lo,
        "max": hi,
        "resolution": resolution,
        "values": values,
        "holds": holds,
        "fails": fails,
    }))
}

fn symmetric(alg: &AlgebraDescriptor, m: [f64; 3]) -> Result<AlgebraElement, String> {
    alg.real_matrix(&[vec![m[0], m[1]], vec![m[1], m[2]]]).map_err(|e| e.to_string())
}

fn describe(e: &AlgebraElement) -> Value {
    let entries = e.matrix_entries().map(|m| m.iter().map(|z| finite(z.re)).collect::<Vec<_>>());
    json!({
        "entries": entries,
        "spectrum": e.spectrum().ok().map(|s| s.into_iter().map(finite).collect::<Vec<_>>()),
    })
}

fn order(r: OrderResult) -> Value {
    json!({
        "verdict": r.verdict.as_str(),
        "slack": r.witness_eigenvalue.map(finite),
    })
}

/// Compares `a ⪯ b` and `a^β ⪯ b^β` for real symmetric 2×2 matrices given
/// as `[m11, m12, m22]`. Exponents in `(0, 1]` preserve the order; larger
/// ones may not.
pub fn lowner_compare(a: [f64; 3], b: [f64; 3], beta: f64) -> Result<Value, String> {
    let alg = AlgebraDescriptor::hermitian(2);
    let (a, b) = (symmetric(&alg, a)?, symmetric(&alg, b)?);
    let base = a.leq(&b).map_err(|e| e.to_string())?;
    let powered = if a.is_positive() && b.is_positive() {
        let pa = a.frac_power(beta).map_err(|e| e.to_string())?;
        let pb = b.frac_power(beta).map_err(|e| e.to_string())?;
        let cmp = pa.leq(&pb).map_err(|e| e.to_string())?;
        json!({ "a": describe(&pa), "b": describe(&pb), "order": order(cmp) })
    } else {
        Value::Null
    };
    Ok(json!({
        "a": describe(&a),
        "b": describe(&b),
        "order": order(base),
        "beta": beta,
        "powered": powered,
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn picard_explorer(a: f64, b: f64, x0: f64, tau: f64, beta: f64) -> Result<String, JsValue> {
    to_js(picard_trace(a, b, x0, tau, beta))
}

#[wasm_bindgen]
pub fn condition_heatmap(scenario: &str, tau: f64, beta: f64, resolution: usize) -> Result<String, JsValue> {
    to_js(condition_grid(scenario, tau, beta, resolution))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn lowner_explorer(a11: f64, a12: f64, a22: f64, b11: f64, b12: f64, b22: f64, beta: f64) -> Result<String, JsValue> {
    to_js(lowner_compare([a11, a12, a22], [b11, b12, b22], beta))
}
