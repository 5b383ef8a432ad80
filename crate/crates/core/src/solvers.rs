//! Constructive iteration schemes with per-step checks against the
//! theoretical geometric envelopes.
//!
//! All solvers share one trace convention: `x₀` is recorded, and each
//! accepted iterate is pushed together with `d(xₙ, xₙ₊₁)`. Once a step falls
//! below `step_norm_epsilon` the final image is kept if it differs from the
//! current point and its own residual is within ten times epsilon, and the
//! iteration stops. A start at a fixed point therefore yields a trace of
//! length 1. The reported point is always the last recorded one.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{OrderResult, Verdict};
use crate::conditions::{ConditionKind, ContractionSpec, SelfMap, DEFAULT_FIXED_POINT_TOLERANCE};
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Point, SequenceRecord};

const INVERSE_CHECKS: usize = 10;
const INVERSE_TOLERANCE: f64 = 1e-9;
pub const CLUSTER_RADIUS: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopRule {
    pub step_norm_epsilon: f64,
    pub max_iterations: usize,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            step_norm_epsilon: 1e-10,
            max_iterations: 100_000,
        }
    }
}

impl StopRule {
    pub fn new(step_norm_epsilon: f64, max_iterations: usize) -> Result<Self> {
        let rule = Self {
            step_norm_epsilon,
            max_iterations,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_norm_epsilon > 0.0 && self.step_norm_epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "step_norm_epsilon must be positive, got {}",
                self.step_norm_epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    DomainExit,
    /// Did not converge and at least one bound check was ill-posed.
    IllPosedOrder,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "max-iterations",
            SolveStatus::DomainExit => "domain-exit",
            SolveStatus::IllPosedOrder => "ill-posed-order",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Last recorded iterate; a fixed point only when `status` is `Converged`.
    pub fixed_point: Option<Point>,
    pub trace: SequenceRecord,
    /// `‖d(z, Tz)‖` at the reported point (`‖d(Rz, Tz)‖` for the
    /// R-interpolative scheme); infinite after a domain exit.
    pub residual: f64,
    /// `‖d(z, Sz)‖` for the alternating scheme.
    pub secondary_residual: Option<f64>,
    pub empirical_rate: Option<f64>,
    /// `bound_checks[k]` belongs to step `k` of the trace (for the
    /// R-interpolative scheme, to the `k`-th checked image step).
    pub bound_checks: Vec<OrderResult>,
    pub iterations: usize,
    /// Index of the first iterate that left the domain.
    pub exit_iteration: Option<usize>,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn bound_failures(&self) -> usize {
        self.bound_checks.iter().filter(|c| !c.holds()).count()
    }
}

/// `exp` of the least-squares slope of `ln ‖d(xₙ,xₙ₊₁)‖` over the last half
/// of the steps; `None` with fewer than two usable steps.
pub fn empirical_rate(step_norms: &[f64]) -> Option<f64> {
    let start = step_norms.len() / 2;
    let points: Vec<(f64, f64)> = step_norms[start..]
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0.0 && s.is_finite())
        .map(|(i, &s)| ((start + i) as f64, s.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some((sxy / sxx).exp())
}

enum Bound {
    None,
    /// `d(xₙ,xₙ₊₁) ⪯ τⁿ d(x₀,x₁)`
    Envelope(f64),
    /// `d(xₙ,xₙ₊₁) ⪯ τ^{n/(1−η)} I`
    Reich { tau: f64, eta: f64 },
    /// `d(xₙ,xₙ₊₁) ⪯ d(xₙ₋₁,xₙ)`
    Monotone,
}

fn check_bound(
    bound: &Bound,
    space: &MetricSpace,
    n: usize,
    step: &crate::algebra::AlgebraElement,
    previous: &[crate::algebra::AlgebraElement],
) -> Result<Option<OrderResult>> {
    let rhs = match bound {
        Bound::None => return Ok(None),
        Bound::Envelope(tau) => previous.first().unwrap_or(step).scale(tau.powi(n as i32)),
        Bound::Reich { tau, eta } => space.algebra().scalar(tau.powf(n as f64 / (1.0 - eta))),
        Bound::Monotone => match previous.last() {
            Some(p) => p.clone(),
            None => return Ok(None),
        },
    };
    step.leq(&rhs).map(Some)
}

fn require_start(space: &MetricSpace, x0: &Point) -> Result<()> {
    if space.domain().contains(x0) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "start {x0} is not in {}",
            space.domain().describe()
        )))
    }
}

struct Run {
    trace: SequenceRecord,
    checks: Vec<OrderResult>,
    status: SolveStatus,
    residual: f64,
    secondary: Option<f64>,
    exit_iteration: Option<usize>,
}

impl Run {
    fn new(x0: &Point) -> Self {
        Self {
            trace: SequenceRecord::start(x0.clone()),
            checks: Vec::new(),
            status: SolveStatus::MaxIterations,
            residual: f64::INFINITY,
            secondary: None,
            exit_iteration: None,
        }
    }

    fn finish(self) -> SolveResult {
        let ill_posed = self.checks.iter().any(|c| c.verdict == Verdict::IllPosed);
        let status = if self.status == SolveStatus::MaxIterations && ill_posed {
            SolveStatus::IllPosedOrder
        } else {
            self.status
        };
        SolveResult {
            status,
            fixed_point: Some(self.trace.last_point().clone()),
            empirical_rate: empirical_rate(self.trace.step_norms()),
            iterations: self.trace.steps().len(),
            trace: self.trace,
            residual: self.residual,
            secondary_residual: self.secondary,
            bound_checks: self.checks,
            exit_iteration: self.exit_iteration,
        }
    }
}

/// Interleaved iteration `xₙ₊₁ = maps[n mod k](xₙ)`. Convergence requires the
/// current step below epsilon and every other map's residual at most ten
/// times epsilon; with a single map this is plain Picard iteration.
fn iterate(
    space: &MetricSpace,
    maps: &[&SelfMap],
    x0: &Point,
    bound: Bound,
    stop: &StopRule,
) -> Result<SolveResult> {
    stop.validate()?;
    require_start(space, x0)?;
    let eps = stop.step_norm_epsilon;
    let mut run = Run::new(x0);
    let mut x = x0.clone();
    let residual_of = |m: &SelfMap, x: &Point| -> f64 {
        let image = m.apply(x);
        if space.domain().contains(&image) {
            space.distance(x, &image).norm()
        } else {
            f64::INFINITY
        }
    };
    let mut converged = false;
    for n in 0..stop.max_iterations {
        let map = maps[n % maps.len()];
        let image = map.apply(&x);
        if !space.domain().contains(&image) {
            run.status = SolveStatus::DomainExit;
            run.exit_iteration = Some(n + 1);
            return Ok(run.finish());
        }
        let step = space.distance(&x, &image);
        if step.norm() < eps && maps.iter().all(|m| residual_of(m, &x) <= 10.0 * eps) {
            // the final image is one step closer; keep it unless it is x itself
            if step.norm() > 0.0 && maps.iter().all(|m| residual_of(m, &image) <= 10.0 * eps) {
                if let Some(check) = check_bound(&bound, space, n, &step, run.trace.steps())? {
                    run.checks.push(check);
                }
                run.trace.push(image.clone(), step);
                x = image;
            }
            converged = true;
            break;
        }
        if let Some(check) = check_bound(&bound, space, n, &step, run.trace.steps())? {
            run.checks.push(check);
        }
        run.trace.push(image.clone(), step);
        x = image;
    }
    if converged {
        run.status = SolveStatus::Converged;
    }
    run.residual = residual_of(maps[0], &x);
    if maps.len() > 1 {
        run.secondary = Some(residual_of(maps[1], &x));
    }
    Ok(run.finish())
}

fn envelope_for(spec: Option<&ContractionSpec>) -> Result<Bound> {
    if let Some(spec) = spec {
        spec.validate()?;
    }
    Ok(match spec.and_then(|s| s.tau()) {
        Some(tau) => Bound::Envelope(tau),
        None => Bound::None,
    })
}

/// `xₙ₊₁ = T xₙ`; with a τ-bearing spec every step is checked against
/// `τⁿ·d(x₀,x₁)`.
pub fn picard_solve(
    space: &MetricSpace,
    map: &SelfMap,
    x0: &Point,
    spec: Option<&ContractionSpec>,
    stop: &StopRule,
) -> Result<SolveResult> {
    iterate(space, &[map], x0, envelope_for(spec)?, stop)
}

/// `x₂ₙ₊₁ = S x₂ₙ`, `x₂ₙ₊₂ = T x₂ₙ₊₁`. Converged only when both
/// `‖d(z,Tz)‖` (reported as `residual`) and `‖d(z,Sz)‖` (`secondary_residual`)
/// are within ten times epsilon.
pub fn alternating_solve(
    space: &MetricSpace,
    t: &SelfMap,
    s: &SelfMap,
    x0: &Point,
    spec: Option<&ContractionSpec>,
    stop: &StopRule,
) -> Result<SolveResult> {
    let mut result = iterate(space, &[s, t], x0, envelope_for(spec)?, stop)?;
    // iterate reports maps[0] = S first; swap to (T, S)
    if let Some(secondary) = result.secondary_residual {
        result.secondary_residual = Some(result.residual);
        result.residual = secondary;
    }
    Ok(result)
}

/// `xₙ₊₁ = R_solve(T xₙ)`, so that `R xₙ₊₁ = T xₙ`. Stops when
/// `‖d(R xₙ, T xₙ)‖` drops below epsilon. The right-inverse property of
/// `r_solve` is validated on the first ten iterations, and the image steps
/// are checked against `d(Txₙ₊₁,Txₙ) ⪯ τ d(Txₙ,Txₙ₋₁)`.
pub fn r_interpolative_solve(
    space: &MetricSpace,
    t: &SelfMap,
    r: &SelfMap,
    r_solve: &SelfMap,
    x0: &Point,
    spec: Option<&ContractionSpec>,
    stop: &StopRule,
) -> Result<SolveResult> {
    stop.validate()?;
    require_start(space, x0)?;
    let tau = match envelope_for(spec)? {
        Bound::Envelope(tau) => Some(tau),
        _ => None,
    };
    let mut run = Run::new(x0);
    let mut x = x0.clone();
    let mut image_steps = Vec::new();
    let mut previous_image: Option<Point> = None;
    let domain = space.domain();
    for n in 0..stop.max_iterations {
        let tx = t.apply(&x);
        let rx = r.apply(&x);
        if !domain.contains(&tx) || !domain.contains(&rx) {
            run.status = SolveStatus::DomainExit;
            run.exit_iteration = Some(n + 1);
            return Ok(run.finish());
        }
        if let Some(prev) = &previous_image {
            let image_step = space.distance(&tx, prev);
            if let (Some(tau), Some(last)) = (tau, image_steps.last()) {
                let last: &crate::algebra::AlgebraElement = last;
                run.checks.push(image_step.leq(&last.scale(tau))?);
            }
            image_steps.push(image_step);
        }
        let residual = space.distance(&rx, &tx).norm();
        if residual < stop.step_norm_epsilon {
            run.status = SolveStatus::Converged;
            run.residual = residual;
            let next = r_solve.apply(&tx);
            if domain.contains(&next) && next != x {
                let (tn, rn) = (t.apply(&next), r.apply(&next));
                if domain.contains(&tn) && domain.contains(&rn) {
                    let next_residual = space.distance(&rn, &tn).norm();
                    if next_residual <= 10.0 * stop.step_norm_epsilon {
                        let step = space.distance(&x, &next);
                        run.trace.push(next, step);
                        run.residual = next_residual;
                    }
                }
            }
            return Ok(run.finish());
        }
        let next = r_solve.apply(&tx);
        if n < INVERSE_CHECKS {
            let reconstructed = r.apply(&next);
            let scale = tx.coordinates().iter().map(|c| c * c).sum::<f64>().sqrt().max(1.0);
            if !(reconstructed.gap(&tx) <= INVERSE_TOLERANCE * scale) {
                return Err(Error::BadInverse {
                    map: r_solve.name().to_string(),
                    point: tx,
                    reconstructed,
                });
            }
        }
        if !domain.contains(&next) {
            run.status = SolveStatus::DomainExit;
            run.exit_iteration = Some(n + 1);
            return Ok(run.finish());
        }
        let step = space.distance(&x, &next);
        run.trace.push(next.clone(), step);
        previous_image = Some(tx);
        x = next;
    }
    let (tx, rx) = (t.apply(&x), r.apply(&x));
    if domain.contains(&tx) && domain.contains(&rx) {
        run.residual = space.distance(&rx, &tx).norm();
    }
    Ok(run.finish())
}

fn unit_precondition(space: &MetricSpace, map: &SelfMap, x0: &Point) -> Result<Option<SolveResult>> {
    require_start(space, x0)?;
    let image = map.apply(x0);
    if !space.domain().contains(&image) {
        let mut run = Run::new(x0);
        run.status = SolveStatus::DomainExit;
        run.exit_iteration = Some(1);
        return Ok(Some(run.finish()));
    }
    let first = space.distance(x0, &image);
    let order = first.leq(&space.algebra().unit())?;
    if !order.holds() {
        return Err(Error::PreconditionFailed(format!(
            "d(x0, Tx0) ⪯ I does not hold at x0 = {x0} (verdict {}, slack {:?})",
            order.verdict.as_str(),
            order.witness_eigenvalue
        )));
    }
    Ok(None)
}

/// Picard iteration for a Reich-type spec, requiring `d(x₀,Tx₀) ⪯ I` and
/// checking every step against `τ^{n/(1−η)}·I`.
pub fn reich_solve(
    space: &MetricSpace,
    map: &SelfMap,
    x0: &Point,
    spec: &ContractionSpec,
    stop: &StopRule,
) -> Result<SolveResult> {
    spec.validate()?;
    let ConditionKind::ReichType { tau, eta, .. } = spec.kind else {
        return Err(Error::InvalidSpec(format!("reich_solve needs a Reich-type spec, got {}", spec.label())));
    };
    if let Some(exit) = unit_precondition(space, map, x0)? {
        return Ok(exit);
    }
    iterate(space, &[map], x0, Bound::Reich { tau, eta }, stop)
}

/// Picard iteration for a weakly contractive Reich spec, requiring
/// `d(x₀,Tx₀) ⪯ I` and recording `d(xₙ,xₙ₊₁) ⪯ d(xₙ₋₁,xₙ)` for every step.
pub fn weak_solve(
    space: &MetricSpace,
    map: &SelfMap,
    x0: &Point,
    spec: &ContractionSpec,
    stop: &StopRule,
) -> Result<SolveResult> {
    spec.validate()?;
    if !matches!(spec.kind, ConditionKind::WeakReich { .. }) {
        return Err(Error::InvalidSpec(format!("weak_solve needs a weak Reich spec, got {}", spec.label())));
    }
    if let Some(exit) = unit_precondition(space, map, x0)? {
        return Ok(exit);
    }
    iterate(space, &[map], x0, Bound::Monotone, stop)
}

/// All points of a finite space with `T(p) = p`.
pub fn brute_force_fixed_points(space: &MetricSpace, map: &SelfMap) -> Result<Vec<Point>> {
    let points = space.domain().finite_points().ok_or(Error::NotFiniteDomain)?;
    Ok(points
        .into_iter()
        .filter(|p| p.gap(&map.apply(p)) <= DEFAULT_FIXED_POINT_TOLERANCE)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Picard,
    Alternating,
    RInterpolative,
    Reich,
    Weak,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Picard,
        SolverKind::Alternating,
        SolverKind::RInterpolative,
        SolverKind::Reich,
        SolverKind::Weak,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Picard => "picard",
            SolverKind::Alternating => "alternating",
            SolverKind::RInterpolative => "r-interpolative",
            SolverKind::Reich => "reich",
            SolverKind::Weak => "weak",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown solver '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub unique: bool,
    pub cluster_count: usize,
    /// Largest distance norm between two converged results.
    pub max_spread: f64,
    pub converged: Vec<(usize, Point)>,
    pub not_converged: Vec<usize>,
}

/// Runs `solve` from `starts` seeded samples of the domain. Results are
/// grouped greedily into clusters of radius 1e-7; `unique` holds iff at least
/// one run converged and all converged results are within that radius of
/// each other. Starts that violate a solver precondition count as not
/// converged.
pub fn uniqueness_probe_with(
    space: &MetricSpace,
    starts: usize,
    seed: u64,
    solve: impl Fn(&Point) -> Result<SolveResult>,
) -> Result<UniquenessReport> {
    if starts < 2 {
        return Err(Error::InvalidArgument("uniqueness_probe needs at least 2 starts".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut converged = Vec::new();
    let mut not_converged = Vec::new();
    for index in 0..starts {
        let x0 = space.domain().sample(&mut rng)?;
        match solve(&x0) {
            Ok(result) if result.converged() => {
                converged.push((index, result.fixed_point.expect("converged runs report a point")))
            }
            Ok(_) | Err(Error::PreconditionFailed(_)) => not_converged.push(index),
            Err(e) => return Err(e),
        }
    }
    let mut representatives: Vec<&Point> = Vec::new();
    let mut max_spread: f64 = 0.0;
    for (i, (_, p)) in converged.iter().enumerate() {
        for (_, q) in &converged[..i] {
            max_spread = max_spread.max(space.distance(p, q).norm());
        }
        if !representatives
            .iter()
            .any(|r| space.distance(p, r).norm() <= CLUSTER_RADIUS)
        {
            representatives.push(p);
        }
    }
    let cluster_count = representatives.len();
    Ok(UniquenessReport {
        unique: !converged.is_empty() && max_spread <= CLUSTER_RADIUS,
        cluster_count,
        max_spread,
        converged,
        not_converged,
    })
}

/// [`uniqueness_probe_with`] for the solvers that need nothing beyond `T`
/// and the spec: the alternating partner and `R` are taken from pair and
/// R-interpolative specs; the R-interpolative scheme additionally needs a
/// right inverse and is not supported here.
pub fn uniqueness_probe(
    space: &MetricSpace,
    map: &SelfMap,
    kind: SolverKind,
    spec: Option<&ContractionSpec>,
    starts: usize,
    seed: u64,
    stop: &StopRule,
) -> Result<UniquenessReport> {
    let need_spec = || {
        spec.ok_or_else(|| Error::InvalidArgument(format!("solver '{kind}' needs a contraction spec")))
    };
    match kind {
        SolverKind::Picard => {
            uniqueness_probe_with(space, starts, seed, |x| picard_solve(space, map, x, spec, stop))
        }
        SolverKind::Reich => {
            let spec = need_spec()?;
            uniqueness_probe_with(space, starts, seed, |x| reich_solve(space, map, x, spec, stop))
        }
        SolverKind::Weak => {
            let spec = need_spec()?;
            uniqueness_probe_with(space, starts, seed, |x| weak_solve(space, map, x, spec, stop))
        }
        SolverKind::Alternating => {
            let spec = need_spec()?;
            let ConditionKind::KannanPair { partner, .. } = &spec.kind else {
                return Err(Error::InvalidArgument("alternating probe needs a Kannan pair spec".into()));
            };
            uniqueness_probe_with(space, starts, seed, |x| {
                alternating_solve(space, map, partner, x, Some(spec), stop)
            })
        }
        SolverKind::RInterpolative => Err(Error::InvalidArgument(
            "the r-interpolative probe needs a right inverse; use uniqueness_probe_with".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraDescriptor;
    use crate::conditions::ReichVariant;
    use crate::metric::{Domain, Region};

    fn line(lo: f64, hi: f64) -> MetricSpace {
        let region = Region::interval("interval", lo, hi, move |x| (lo..=hi).contains(&x)).unwrap();
        let alg = AlgebraDescriptor::diagonal(1);
        MetricSpace::from_fn("line", Domain::Region(region), alg, move |x, y| {
            alg.diag(vec![(x.as_scalar().unwrap() - y.as_scalar().unwrap()).abs()])
                .unwrap()
        })
    }

    fn affine(a: f64, b: f64) -> SelfMap {
        SelfMap::scalar(format!("{a}x+{b}"), move |x| a * x + b)
    }

    #[test]
    fn picard_on_affine() {
        let space = line(-100.0, 100.0);
        let spec = ContractionSpec::interpolative_kannan(0.5, 0.5).unwrap();
        let r = picard_solve(&space, &affine(0.5, 1.0), &Point::scalar(10.0), Some(&spec), &StopRule::default())
            .unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!((r.fixed_point.unwrap().as_scalar().unwrap() - 2.0).abs() < 1e-10);
        assert!(r.residual <= 1e-9);
        assert!((r.empirical_rate.unwrap() - 0.5).abs() < 1e-6);
        assert!(r.bound_checks.iter().all(|c| c.holds()));
        assert_eq!(r.bound_checks.len(), r.iterations);
    }

    #[test]
    fn start_at_fixed_point() {
        let space = line(-1.0, 1.0);
        let r = picard_solve(&space, &affine(0.5, 0.0), &Point::scalar(0.0), None, &StopRule::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn domain_exit_keeps_partial_trace() {
        let space = line(2.0, 12.0);
        let t = SelfMap::scalar("1/x", |x| 1.0 / x);
        let r = picard_solve(&space, &t, &Point::scalar(3.0), None, &StopRule::default()).unwrap();
        assert_eq!(r.status, SolveStatus::DomainExit);
        assert_eq!(r.exit_iteration, Some(1));
        assert_eq!(r.trace.len(), 1);
        assert!(r.residual.is_infinite());
    }

    #[test]
    fn max_iterations_bounds_trace() {
        let space = line(-10.0, 10.0);
        let stop = StopRule::new(1e-10, 5).unwrap();
        let r = picard_solve(&space, &affine(0.9, 0.0), &Point::scalar(5.0), None, &stop).unwrap();
        assert_eq!(r.status, SolveStatus::MaxIterations);
        assert_eq!(r.trace.len(), 6);
    }

    #[test]
    fn alternating_common_fixed_point() {
        let space = line(-100.0, 100.0);
        let t = affine(1.0 / 3.0, 2.0);
        let s = affine(0.25, 2.25);
        let r = alternating_solve(&space, &t, &s, &Point::scalar(-40.0), None, &StopRule::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!((r.fixed_point.unwrap().as_scalar().unwrap() - 3.0).abs() < 1e-9);
        assert!(r.residual <= 1e-9 && r.secondary_residual.unwrap() <= 1e-9);
    }

    #[test]
    fn alternating_without_common_fixed_point() {
        let space = line(-100.0, 100.0);
        let stop = StopRule::new(1e-10, 2000).unwrap();
        let r = alternating_solve(&space, &affine(0.5, 0.0), &affine(0.5, 1.0), &Point::scalar(5.0), None, &stop)
            .unwrap();
        assert_ne!(r.status, SolveStatus::Converged);
    }

    #[test]
    fn r_interpolative_identity_matches_picard() {
        let space = line(-100.0, 100.0);
        let t = affine(0.5, 1.0);
        let id = SelfMap::identity();
        let stop = StopRule::default();
        let a = r_interpolative_solve(&space, &t, &id, &id, &Point::scalar(10.0), None, &stop).unwrap();
        let b = picard_solve(&space, &t, &Point::scalar(10.0), None, &stop).unwrap();
        assert_eq!(a.status, SolveStatus::Converged);
        assert_eq!(a.trace.points(), b.trace.points());
    }

    #[test]
    fn r_interpolative_bad_inverse() {
        let space = line(-100.0, 100.0);
        let t = affine(0.5, 1.0);
        let r = SelfMap::scalar("x^2", |x| x * x);
        let wrong = SelfMap::identity();
        let err = r_interpolative_solve(&space, &t, &r, &wrong, &Point::scalar(10.0), None, &StopRule::default());
        assert!(matches!(err, Err(Error::BadInverse { .. })));
    }

    #[test]
    fn reich_precondition_and_envelope() {
        let space = line(-10.0, 10.0);
        let t = affine(0.5, 0.0);
        let spec = ContractionSpec::reich_type(0.7, 0.4, 0.4, 0.4, ReichVariant::AsProof).unwrap();
        let stop = StopRule::default();
        let err = reich_solve(&space, &t, &Point::scalar(4.0), &spec, &stop);
        assert!(matches!(err, Err(Error::PreconditionFailed(_))));
        let r = reich_solve(&space, &t, &Point::scalar(2.0), &spec, &stop).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!(r.bound_checks.iter().all(|c| c.holds()));
        let r = reich_solve(&space, &t, &Point::scalar(0.0), &spec, &stop).unwrap();
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn tight_reich_envelope_fails_late() {
        // 0.6^{n/0.6} decays faster than 2^{-n}
        let space = line(-1.0, 1.0);
        let spec = ContractionSpec::reich_type(0.6, 0.4, 0.4, 0.4, ReichVariant::AsProof).unwrap();
        let r = reich_solve(&space, &affine(0.5, 0.0), &Point::scalar(1.0), &spec, &StopRule::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        let first = r.bound_checks.iter().position(|c| !c.holds()).unwrap();
        assert!(first >= 2);
    }

    #[test]
    fn uniqueness_examples() {
        let space = line(-100.0, 100.0);
        let stop = StopRule::default();
        let u = uniqueness_probe(&space, &affine(0.5, 1.0), SolverKind::Picard, None, 100, 1, &stop).unwrap();
        assert!(u.unique && u.max_spread <= 1e-8 && u.cluster_count == 1);
        let u = uniqueness_probe(&space, &SelfMap::identity(), SolverKind::Picard, None, 20, 1, &stop).unwrap();
        assert!(!u.unique);
        assert_eq!(u.cluster_count, 20);
    }

    #[test]
    fn brute_force_examples() {
        let alg = AlgebraDescriptor::diagonal(1);
        let table = (0..9)
            .map(|k| alg.diag(vec![if k / 3 == k % 3 { 0.0 } else { 1.0 }]).unwrap())
            .collect();
        let space = MetricSpace::from_table("three", vec!["a".into(), "b".into(), "c".into()], alg, table).unwrap();
        let constant = SelfMap::table("const", vec![0, 0, 0]);
        assert_eq!(brute_force_fixed_points(&space, &constant).unwrap(), vec![Point::Label(0)]);
        let cycle = SelfMap::table("cycle", vec![1, 2, 0]);
        assert!(brute_force_fixed_points(&space, &cycle).unwrap().is_empty());
        assert!(matches!(
            brute_force_fixed_points(&line(0.0, 1.0), &constant),
            Err(Error::NotFiniteDomain)
        ));
    }

    #[test]
    fn empirical_rate_fit() {
        let norms: Vec<f64> = (0..40).map(|n| 3.0 * 0.25f64.powi(n)).collect();
        assert!((empirical_rate(&norms).unwrap() - 0.25).abs() < 1e-12);
        assert!(empirical_rate(&[1.0]).is_none());
    }
}
