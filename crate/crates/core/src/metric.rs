//! C*-algebra valued metric spaces: domains, metrics, axiom certification
//! and the geometric Cauchy criterion used by every iteration scheme.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraDescriptor, AlgebraElement, OrderResult};
use crate::error::{Error, Result};

/// Threshold below which a metric value counts as θ.
pub const ZERO_DISTANCE: f64 = 1e-12;
/// Points closer than this (Euclidean) are the same point.
pub const SAME_POINT: f64 = 1e-9;
const MAX_FINITE_POINTS: usize = 4096;
const EXHAUSTIVE_LIMIT: usize = 64;
const SAMPLER_ATTEMPTS: usize = 10_000;
const CAUCHY_TAIL_CAP: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Real(Vec<f64>),
    Label(usize),
}

impl Point {
    pub fn scalar(x: f64) -> Self {
        Point::Real(vec![x])
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Point::Real(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    /// Coordinates, or the label index as a one-element vector.
    pub fn coordinates(&self) -> Vec<f64> {
        match self {
            Point::Real(v) => v.clone(),
            Point::Label(i) => vec![*i as f64],
        }
    }

    /// Euclidean distance between real points; labels are either identical
    /// (0) or infinitely apart.
    pub fn gap(&self, other: &Point) -> f64 {
        match (self, other) {
            (Point::Real(a), Point::Real(b)) if a.len() == b.len() => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            (Point::Label(a), Point::Label(b)) if a == b => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Point::Real(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Point::Label(i) => write!(f, "#{i}"),
        }
    }
}

pub type Membership = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A subset of ℝ^dim given by a membership predicate, sampled by rejection
/// from the box `[lower, upper]`. Anchors are deterministic probe points
/// checked before any random sample.
#[derive(Clone)]
pub struct Region {
    description: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    membership: Membership,
    anchors: Vec<Vec<f64>>,
}

impl Region {
    pub fn new(
        description: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        membership: Membership,
    ) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidArgument(
                "sampling box bounds must be non-empty and of equal dimension".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l <= u) || !l.is_finite() || !u.is_finite()) {
            return Err(Error::InvalidArgument("sampling box must be finite and ordered".into()));
        }
        Ok(Self {
            description: description.into(),
            lower,
            upper,
            membership,
            anchors: Vec::new(),
        })
    }

    /// One-dimensional region sampled from `[lo, hi]`.
    pub fn interval(
        description: impl Into<String>,
        lo: f64,
        hi: f64,
        membership: impl Fn(f64) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(
            description,
            vec![lo],
            vec![hi],
            Arc::new(move |x: &[f64]| x.len() == 1 && membership(x[0])),
        )
    }

    pub fn with_anchors(mut self, anchors: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = anchors.iter().find(|a| !(self.membership)(a)) {
            return Err(Error::InvalidArgument(format!(
                "anchor {:?} is not a member of {}",
                bad, self.description
            )));
        }
        self.anchors = anchors;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

#[derive(Clone)]
pub enum Domain {
    Region(Region),
    Finite(Vec<String>),
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Region(r) => write!(f, "Region({})", r.description),
            Domain::Finite(labels) => write!(f, "Finite({} points)", labels.len()),
        }
    }
}

impl Domain {
    pub fn finite(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_FINITE_POINTS {
            return Err(Error::InvalidArgument(format!(
                "finite domains hold 1..={MAX_FINITE_POINTS} points, got {}",
                labels.len()
            )));
        }
        Ok(Domain::Finite(labels))
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Domain::Region(r), Point::Real(v)) => {
                v.len() == r.dimension() && v.iter().all(|x| x.is_finite()) && (r.membership)(v)
            }
            (Domain::Finite(labels), Point::Label(i)) => *i < labels.len(),
            _ => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Domain::Finite(_))
    }

    pub fn finite_points(&self) -> Option<Vec<Point>> {
        match self {
            Domain::Finite(labels) => Some((0..labels.len()).map(Point::Label).collect()),
            Domain::Region(_) => None,
        }
    }

    pub fn anchors(&self) -> Vec<Point> {
        match self {
            Domain::Region(r) => r.anchors.iter().cloned().map(Point::Real).collect(),
            Domain::Finite(_) => Vec::new(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Domain::Region(r) => r.description.clone(),
            Domain::Finite(labels) => format!("finite set of {} points", labels.len()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point> {
        match self {
            Domain::Finite(labels) => Ok(Point::Label(rng.random_range(0..labels.len()))),
            Domain::Region(r) => {
                for _ in 0..SAMPLER_ATTEMPTS {
                    let v: Vec<f64> = r
                        .lower
                        .iter()
                        .zip(&r.upper)
                        .map(|(&lo, &hi)| if lo == hi { lo } else { rng.random_range(lo..=hi) })
                        .collect();
                    if (r.membership)(&v) {
                        return Ok(Point::Real(v));
                    }
                }
                Err(Error::SamplerFailure(format!(
                    "no member of {} found in {SAMPLER_ATTEMPTS} draws",
                    r.description
                )))
            }
        }
    }
}

pub type MetricFn = Arc<dyn Fn(&Point, &Point) -> AlgebraElement + Send + Sync>;

#[derive(Clone)]
enum Metric {
    Function(MetricFn),
    Table { n: usize, values: Vec<AlgebraElement> },
}

/// `(𝒰, 𝔸, d)`. The axiom report is cached once, by the first
/// `verify_axioms` call.
#[derive(Clone)]
pub struct MetricSpace {
    name: String,
    domain: Domain,
    algebra: AlgebraDescriptor,
    metric: Metric,
    certified: OnceLock<AxiomReport>,
}

impl fmt::Debug for MetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricSpace")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("algebra", &self.algebra)
            .finish_non_exhaustive()
    }
}

impl MetricSpace {
    pub fn from_fn(
        name: impl Into<String>,
        domain: Domain,
        algebra: AlgebraDescriptor,
        metric: impl Fn(&Point, &Point) -> AlgebraElement + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            algebra,
            metric: Metric::Function(Arc::new(metric)),
            certified: OnceLock::new(),
        }
    }

    /// Finite space with a row-major `n × n` distance table.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        algebra: AlgebraDescriptor,
        values: Vec<AlgebraElement>,
    ) -> Result<Self> {
        let n = labels.len();
        let domain = Domain::finite(labels)?;
        if values.len() != n * n {
            return Err(Error::ShapeMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| *v.descriptor() != algebra) {
            return Err(Error::DescriptorMismatch {
                left: algebra,
                right: *v.descriptor(),
            });
        }
        Ok(Self {
            name: name.into(),
            domain,
            algebra,
            metric: Metric::Table { n, values },
            certified: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn algebra(&self) -> &AlgebraDescriptor {
        &self.algebra
    }

    /// `d(x, y)`.
    ///
    /// Panics when a tabulated space is queried with a point that is not one
    /// of its labels.
    pub fn distance(&self, x: &Point, y: &Point) -> AlgebraElement {
        match &self.metric {
            Metric::Function(f) => {
                let d = f(x, y);
                debug_assert_eq!(*d.descriptor(), self.algebra);
                d
            }
            Metric::Table { n, values } => match (x, y) {
                (Point::Label(i), Point::Label(j)) if i < n && j < n => values[i * n + j].clone(),
                _ => panic!("tabulated metric queried at non-member points {x}, {y}"),
            },
        }
    }

    pub fn axiom_report(&self) -> Option<&AxiomReport> {
        self.certified.get()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Identity,
    Symmetry,
    Triangle,
    Positivity,
}

impl Axiom {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axiom::Identity => "identity",
            Axiom::Symmetry => "symmetry",
            Axiom::Triangle => "triangle",
            Axiom::Positivity => "positivity",
        }
    }
}

/// The offending points and the metric values evaluated at them, in the
/// order the axiom names them (e.g. `d(x,y), d(x,u), d(u,y)` for the
/// triangle inequality).
#[derive(Clone, Debug)]
pub struct ViolationWitness {
    pub axiom: Axiom,
    pub points: Vec<Point>,
    pub values: Vec<AlgebraElement>,
    pub order: Option<OrderResult>,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomOutcome {
    pub violations: usize,
    pub witness: Option<ViolationWitness>,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, witness: impl FnOnce() -> ViolationWitness) {
        self.violations += 1;
        if self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub samples_tested: usize,
    pub identity: AxiomOutcome,
    pub symmetry: AxiomOutcome,
    pub triangle: AxiomOutcome,
    pub positivity: AxiomOutcome,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes().iter().all(|(_, o)| o.passed())
    }

    pub fn outcomes(&self) -> [(Axiom, &AxiomOutcome); 4] {
        [
            (Axiom::Identity, &self.identity),
            (Axiom::Symmetry, &self.symmetry),
            (Axiom::Triangle, &self.triangle),
            (Axiom::Positivity, &self.positivity),
        ]
    }
}

struct AxiomChecker<'a> {
    space: &'a MetricSpace,
    report: AxiomReport,
}

impl AxiomChecker<'_> {
    fn check_point(&mut self, x: &Point) {
        let d = self.space.distance(x, x);
        if d.norm() > ZERO_DISTANCE {
            self.report.identity.record(|| ViolationWitness {
                axiom: Axiom::Identity,
                points: vec![x.clone(), x.clone()],
                values: vec![d],
                order: None,
            });
        }
    }

    fn check_pair(&mut self, x: &Point, y: &Point) {
        let dxy = self.space.distance(x, y);
        let dyx = self.space.distance(y, x);
        let size = dxy.norm();
        if size <= ZERO_DISTANCE && x.gap(y) > SAME_POINT {
            self.report.identity.record(|| ViolationWitness {
                axiom: Axiom::Identity,
                points: vec![x.clone(), y.clone()],
                values: vec![dxy.clone()],
                order: None,
            });
        }
        let asymmetry = dxy.sub(&dyx).map(|d| d.norm()).unwrap_or(f64::INFINITY);
        if asymmetry > ZERO_DISTANCE * size.max(1.0) {
            self.report.symmetry.record(|| ViolationWitness {
                axiom: Axiom::Symmetry,
                points: vec![x.clone(), y.clone()],
                values: vec![dxy.clone(), dyx],
                order: None,
            });
        }
        if !dxy.is_positive() {
            self.report.positivity.record(|| ViolationWitness {
                axiom: Axiom::Positivity,
                points: vec![x.clone(), y.clone()],
                values: vec![dxy],
                order: None,
            });
        }
    }

    fn check_triangle(&mut self, x: &Point, y: &Point, u: &Point) {
        let dxy = self.space.distance(x, y);
        let dxu = self.space.distance(x, u);
        let duy = self.space.distance(u, y);
        let order = dxu
            .add(&duy)
            .and_then(|sum| dxy.leq(&sum))
            .expect("metric values share the space's algebra");
        if !order.holds() {
            self.report.triangle.record(|| ViolationWitness {
                axiom: Axiom::Triangle,
                points: vec![x.clone(), y.clone(), u.clone()],
                values: vec![dxy, dxu, duy],
                order: Some(order),
            });
        }
    }
}

/// Checks identity (both directions), symmetry, positivity and the triangle
/// inequality. Finite spaces of at most 64 points are checked exhaustively
/// over all pairs and triples; everything else is sampled with `seed`, anchors
/// first. The first report computed for a space is cached on it.
pub fn verify_axioms(space: &MetricSpace, sample_count: usize, seed: u64) -> Result<AxiomReport> {
    if sample_count == 0 {
        return Err(Error::InvalidArgument("sample_count must be at least 1".into()));
    }
    let mut checker = AxiomChecker {
        space,
        report: AxiomReport::default(),
    };
    match space.domain.finite_points() {
        Some(points) if points.len() <= EXHAUSTIVE_LIMIT => {
            for x in &points {
                checker.check_point(x);
                for y in &points {
                    checker.check_pair(x, y);
                    for u in &points {
                        checker.check_triangle(x, y, u);
                    }
                }
            }
            checker.report.samples_tested = points.len().pow(3);
        }
        _ => {
            let anchors = space.domain.anchors();
            for x in &anchors {
                checker.check_point(x);
                for y in &anchors {
                    checker.check_pair(x, y);
                    for u in &anchors {
                        checker.check_triangle(x, y, u);
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..sample_count {
                let x = space.domain.sample(&mut rng)?;
                let y = space.domain.sample(&mut rng)?;
                let u = space.domain.sample(&mut rng)?;
                checker.check_point(&x);
                checker.check_pair(&x, &y);
                checker.check_triangle(&x, &y, &u);
            }
            checker.report.samples_tested = anchors.len().pow(3) + sample_count;
        }
    }
    let report = checker.report;
    let _ = space.certified.set(report.clone());
    Ok(report)
}

/// Points `x₀, x₁, …` of an iteration with the successive distances
/// `d(xₙ, xₙ₊₁)` and their norms.
#[derive(Clone, Debug, Default)]
pub struct SequenceRecord {
    points: Vec<Point>,
    steps: Vec<AlgebraElement>,
    step_norms: Vec<f64>,
}

impl SequenceRecord {
    pub fn start(x0: Point) -> Self {
        Self {
            points: vec![x0],
            steps: Vec::new(),
            step_norms: Vec::new(),
        }
    }

    /// Builds the record of `points` by evaluating the metric on consecutive pairs.
    pub fn from_points(space: &MetricSpace, points: Vec<Point>) -> Self {
        let mut iter = points.into_iter();
        let mut record = match iter.next() {
            Some(x0) => Self::start(x0),
            None => return Self::default(),
        };
        for p in iter {
            let step = space.distance(record.last_point(), &p);
            record.push(p, step);
        }
        record
    }

    /// Appends `xₙ₊₁` together with `d(xₙ, xₙ₊₁)`.
    pub fn push(&mut self, point: Point, step: AlgebraElement) {
        self.step_norms.push(step.norm());
        self.steps.push(step);
        self.points.push(point);
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn steps(&self) -> &[AlgebraElement] {
        &self.steps
    }

    pub fn step_norms(&self) -> &[f64] {
        &self.step_norms
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last_point(&self) -> &Point {
        self.points.last().expect("record holds at least its start point")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaCheck {
    pub consistent: bool,
    pub first_failure: Option<usize>,
    /// `δᵐ/(1−δ)·‖d(x₀,x₁)‖` at the record's midpoint `m = len/2`.
    pub tail_bound: f64,
    pub delta: f64,
    pub first_step_norm: f64,
}

impl LemmaCheck {
    /// Bound on `‖d(xₘ, xₘ₊ₚ)‖` for every `p`.
    pub fn tail_bound_at(&self, m: usize) -> f64 {
        self.delta.powi(m as i32) / (1.0 - self.delta) * self.first_step_norm
    }
}

/// Checks `d(xₙ, xₙ₊₁) ⪯ δ·d(xₙ₋₁, xₙ)` at every step of `record`.
pub fn lemma1_check(record: &SequenceRecord, delta: f64) -> Result<LemmaCheck> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside [0, 1)")));
    }
    let steps = record.steps();
    if steps.len() < 2 {
        return Err(Error::InvalidArgument("need at least two steps".into()));
    }
    let mut first_failure = None;
    for n in 1..steps.len() {
        let bound = steps[n - 1].scale(delta);
        if !steps[n].leq(&bound)?.holds() {
            first_failure = Some(n);
            break;
        }
    }
    let mut check = LemmaCheck {
        consistent: first_failure.is_none(),
        first_failure,
        tail_bound: 0.0,
        delta,
        first_step_norm: record.step_norms()[0],
    };
    check.tail_bound = check.tail_bound_at(record.len() / 2);
    Ok(check)
}

/// True iff every pair of points beyond the last quartile of the record is
/// closer than `epsilon` in norm. Tails longer than 512 points are thinned to
/// 512 evenly spaced indices (first and last included).
pub fn is_cauchy_empirically(space: &MetricSpace, record: &SequenceRecord, epsilon: f64) -> bool {
    let points = record.points();
    let start = 3 * points.len() / 4;
    let tail = &points[start..];
    let indices: Vec<usize> = if tail.len() <= CAUCHY_TAIL_CAP {
        (0..tail.len()).collect()
    } else {
        let last = tail.len() - 1;
        (0..CAUCHY_TAIL_CAP)
            .map(|k| k * last / (CAUCHY_TAIL_CAP - 1))
            .collect()
    };
    let mut worst: f64 = 0.0;
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            worst = worst.max(space.distance(&tail[i], &tail[j]).norm());
        }
    }
    worst < epsilon
}
