//! Interpolative contraction conditions as checkable predicates over pairs
//! of points, with sampled or exhaustive certification.
//!
//! Every condition compares `d(Tx, Ty)` (or a variant of it) against a scaled
//! product of fractional powers of metric values. Products of positive
//! matrices need not be Hermitian: in [`ComparisonMode::Strict`] the raw
//! product is compared and a non-Hermitian result yields an ill-posed order;
//! [`ComparisonMode::Symmetrized`] replaces `p₁p₂…p_k` by the sandwich
//! `p₁^{1/2}…p_{k-1}^{1/2} p_k p_{k-1}^{1/2}…p₁^{1/2}`, which is always positive.
//! On the commutative algebra both modes use the plain product.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{random, AlgebraDescriptor, AlgebraElement, OrderResult, Verdict};
use crate::error::{Error, Result};
use crate::metric::{verify_axioms, MetricSpace, Point, ZERO_DISTANCE};

pub const DEFAULT_FIXED_POINT_TOLERANCE: f64 = 1e-9;
const EXHAUSTIVE_LIMIT: usize = 64;
const EXPONENT_SUM_TOLERANCE: f64 = 1e-12;

pub type PointFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

#[derive(Clone)]
enum MapKind {
    Function(PointFn),
    Table(Vec<usize>),
}

/// A named self-map `T: 𝒰 → 𝒰`. Membership of images is only enforced by
/// [`SelfMap::apply_in`].
#[derive(Clone)]
pub struct SelfMap {
    name: String,
    kind: MapKind,
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SelfMap({})", self.name)
    }
}

impl SelfMap {
    pub fn new(name: impl Into<String>, f: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            kind: MapKind::Function(Arc::new(f)),
        }
    }

    /// Lifts `f: ℝ → ℝ` to one-dimensional real points.
    pub fn scalar(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(name, move |p| match p.as_scalar() {
            Some(x) => Point::scalar(f(x)),
            None => Point::Real(vec![f64::NAN]),
        })
    }

    /// Map on a finite set given by the image label of every label.
    pub fn table(name: impl Into<String>, images: Vec<usize>) -> Self {
        Self {
            name: name.into(),
            kind: MapKind::Table(images),
        }
    }

    pub fn identity() -> Self {
        Self::new("identity", |p| p.clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: &Point) -> Point {
        match &self.kind {
            MapKind::Function(f) => f(x),
            MapKind::Table(images) => match x {
                Point::Label(i) if *i < images.len() => Point::Label(images[*i]),
                _ => Point::Real(vec![f64::NAN]),
            },
        }
    }

    /// `T(x)`, or `DomainExit` if the image leaves the space's domain.
    pub fn apply_in(&self, space: &MetricSpace, x: &Point) -> Result<Point> {
        let image = self.apply(x);
        if space.domain().contains(&image) {
            Ok(image)
        } else {
            Err(Error::DomainExit {
                map: self.name.clone(),
                point: x.clone(),
                image,
            })
        }
    }
}

/// A map on the positive cone: altering distance functions φ and control
/// functions ψ.
#[derive(Clone)]
pub struct ConeFunction {
    name: String,
    f: Arc<dyn Fn(&AlgebraElement) -> AlgebraElement + Send + Sync>,
}

impl fmt::Debug for ConeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConeFunction({})", self.name)
    }
}

impl ConeFunction {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&AlgebraElement) -> AlgebraElement + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn identity() -> Self {
        Self::new("identity", |a| a.clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        (self.f)(a)
    }
}

/// Which middle factor the Reich-type product uses: `d(x,Tx)` as in the
/// iteration argument and the linear corollary, or `d(x,Ty)` as in the
/// displayed inequality.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReichVariant {
    #[default]
    AsProof,
    AsDisplayed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ComparisonMode {
    #[default]
    Strict,
    Symmetrized,
}

/// `Enforce` treats an image outside the domain as an error; `Formal`
/// evaluates the inequality anyway and flags the pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DomainPolicy {
    #[default]
    Enforce,
    Formal,
}

#[derive(Clone, Debug)]
pub enum ConditionKind {
    /// `d(Tx,Ty) ⪯ τ d(x,Tx)^β d(y,Ty)^{1−β}`
    InterpolativeKannan { tau: f64, beta: f64 },
    /// `d(Tx,Ty) ⪯ τ d(x,Tx)^β d(y,Ty)^η`, `β + η < 1`
    TauBetaEtaKannan { tau: f64, beta: f64, eta: f64 },
    /// `d(Tx,Sy) ⪯ τ d(x,Tx)^β d(y,Sy)^η`, `β + η < 1`
    KannanPair {
        tau: f64,
        beta: f64,
        eta: f64,
        partner: SelfMap,
    },
    /// `d(Tx,Ty) ⪯ τ d(Rx,Tx)^β d(Ry,Ty)^{1−β}`
    RInterpolative { tau: f64, beta: f64, r: SelfMap },
    /// `d(Tx,Ty) ⪯ τ d(x,y)^α M^β d(y,Ty)^η`, `α + β + η > 1`
    ReichType {
        tau: f64,
        alpha: f64,
        beta: f64,
        eta: f64,
        variant: ReichVariant,
    },
    /// `φ(d(Tx,Ty)) ⪯ φ(P) − ψ(P)` with `P = d(x,y)^α M^β d(y,Ty)^η`,
    /// `α + β + η = 1`
    WeakReich {
        alpha: f64,
        beta: f64,
        eta: f64,
        phi: ConeFunction,
        psi: ConeFunction,
        variant: ReichVariant,
    },
}

#[derive(Clone, Debug)]
pub struct ContractionSpec {
    pub kind: ConditionKind,
    pub comparison_mode: ComparisonMode,
    pub fixed_point_tolerance: f64,
    pub domain_policy: DomainPolicy,
}

fn open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} = {v} must lie in (0, 1)")))
    }
}

/// `ψ(θ) = θ` and `ψ(s·I) ≠ θ` for a few `s > 0`.
fn check_zero_only_at_zero(f: &ConeFunction, algebra: &AlgebraDescriptor) -> Result<()> {
    if f.apply(&algebra.zero()).norm() > ZERO_DISTANCE {
        return Err(Error::InvalidSpec(format!("{}(θ) ≠ θ", f.name())));
    }
    for s in [1e-3, 1.0, 10.0] {
        if f.apply(&algebra.scalar(s)).norm() <= ZERO_DISTANCE {
            return Err(Error::InvalidSpec(format!(
                "{} vanishes at {s}·I, but may only vanish at θ",
                f.name()
            )));
        }
    }
    Ok(())
}

impl ContractionSpec {
    fn build(kind: ConditionKind) -> Result<Self> {
        let spec = Self {
            kind,
            comparison_mode: ComparisonMode::default(),
            fixed_point_tolerance: DEFAULT_FIXED_POINT_TOLERANCE,
            domain_policy: DomainPolicy::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn interpolative_kannan(tau: f64, beta: f64) -> Result<Self> {
        Self::build(ConditionKind::InterpolativeKannan { tau, beta })
    }

    pub fn tau_beta_eta_kannan(tau: f64, beta: f64, eta: f64) -> Result<Self> {
        Self::build(ConditionKind::TauBetaEtaKannan { tau, beta, eta })
    }

    pub fn kannan_pair(tau: f64, beta: f64, eta: f64, partner: SelfMap) -> Result<Self> {
        Self::build(ConditionKind::KannanPair {
            tau,
            beta,
            eta,
            partner,
        })
    }

    pub fn r_interpolative(tau: f64, beta: f64, r: SelfMap) -> Result<Self> {
        Self::build(ConditionKind::RInterpolative { tau, beta, r })
    }

    pub fn reich_type(tau: f64, alpha: f64, beta: f64, eta: f64, variant: ReichVariant) -> Result<Self> {
        Self::build(ConditionKind::ReichType {
            tau,
            alpha,
            beta,
            eta,
            variant,
        })
    }

    /// Rejects φ or ψ that vanish away from θ (probed on `algebra`).
    pub fn weak_reich(
        alpha: f64,
        beta: f64,
        eta: f64,
        phi: ConeFunction,
        psi: ConeFunction,
        variant: ReichVariant,
        algebra: &AlgebraDescriptor,
    ) -> Result<Self> {
        check_zero_only_at_zero(&phi, algebra)?;
        check_zero_only_at_zero(&psi, algebra)?;
        Self::build(ConditionKind::WeakReich {
            alpha,
            beta,
            eta,
            phi,
            psi,
            variant,
        })
    }

    pub fn with_mode(mut self, mode: ComparisonMode) -> Self {
        self.comparison_mode = mode;
        self
    }

    pub fn with_domain_policy(mut self, policy: DomainPolicy) -> Self {
        self.domain_policy = policy;
        self
    }

    pub fn with_fixed_point_tolerance(mut self, tolerance: f64) -> Self {
        self.fixed_point_tolerance = tolerance;
        self
    }

    /// Switches the Reich variant; no effect on other kinds.
    pub fn with_variant(mut self, v: ReichVariant) -> Self {
        match &mut self.kind {
            ConditionKind::ReichType { variant, .. } | ConditionKind::WeakReich { variant, .. } => {
                *variant = v
            }
            _ => {}
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fixed_point_tolerance >= 0.0 && self.fixed_point_tolerance.is_finite()) {
            return Err(Error::InvalidSpec("fixed_point_tolerance must be finite and ≥ 0".into()));
        }
        match &self.kind {
            ConditionKind::InterpolativeKannan { tau, beta }
            | ConditionKind::RInterpolative { tau, beta, .. } => {
                open_unit("tau", *tau)?;
                open_unit("beta", *beta)
            }
            ConditionKind::TauBetaEtaKannan { tau, beta, eta }
            | ConditionKind::KannanPair { tau, beta, eta, .. } => {
                open_unit("tau", *tau)?;
                open_unit("beta", *beta)?;
                open_unit("eta", *eta)?;
                if beta + eta >= 1.0 {
                    return Err(Error::InvalidSpec(format!("beta + eta = {} must be < 1", beta + eta)));
                }
                Ok(())
            }
            ConditionKind::ReichType {
                tau,
                alpha,
                beta,
                eta,
                ..
            } => {
                open_unit("tau", *tau)?;
                open_unit("alpha", *alpha)?;
                open_unit("beta", *beta)?;
                open_unit("eta", *eta)?;
                if alpha + beta + eta <= 1.0 {
                    return Err(Error::InvalidSpec(format!(
                        "alpha + beta + eta = {} must be > 1",
                        alpha + beta + eta
                    )));
                }
                Ok(())
            }
            ConditionKind::WeakReich {
                alpha, beta, eta, ..
            } => {
                open_unit("alpha", *alpha)?;
                open_unit("beta", *beta)?;
                open_unit("eta", *eta)?;
                if (alpha + beta + eta - 1.0).abs() > EXPONENT_SUM_TOLERANCE {
                    return Err(Error::InvalidSpec(format!(
                        "alpha + beta + eta = {} must equal 1",
                        alpha + beta + eta
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn tau(&self) -> Option<f64> {
        match &self.kind {
            ConditionKind::InterpolativeKannan { tau, .. }
            | ConditionKind::TauBetaEtaKannan { tau, .. }
            | ConditionKind::KannanPair { tau, .. }
            | ConditionKind::RInterpolative { tau, .. }
            | ConditionKind::ReichType { tau, .. } => Some(*tau),
            ConditionKind::WeakReich { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        let variant = |v: &ReichVariant| match v {
            ReichVariant::AsProof => "proof",
            ReichVariant::AsDisplayed => "displayed",
        };
        match &self.kind {
            ConditionKind::InterpolativeKannan { tau, beta } => {
                format!("interpolative-kannan(tau={tau}, beta={beta})")
            }
            ConditionKind::TauBetaEtaKannan { tau, beta, eta } => {
                format!("tau-beta-eta-kannan(tau={tau}, beta={beta}, eta={eta})")
            }
            ConditionKind::KannanPair {
                tau,
                beta,
                eta,
                partner,
            } => format!(
                "kannan-pair(tau={tau}, beta={beta}, eta={eta}, S={})",
                partner.name()
            ),
            ConditionKind::RInterpolative { tau, beta, r } => {
                format!("r-interpolative(tau={tau}, beta={beta}, R={})", r.name())
            }
            ConditionKind::ReichType {
                tau,
                alpha,
                beta,
                eta,
                variant: v,
            } => format!(
                "reich(tau={tau}, alpha={alpha}, beta={beta}, eta={eta}, variant={})",
                variant(v)
            ),
            ConditionKind::WeakReich {
                alpha,
                beta,
                eta,
                phi,
                psi,
                variant: v,
            } => format!(
                "weak-reich(alpha={alpha}, beta={beta}, eta={eta}, phi={}, psi={}, variant={})",
                phi.name(),
                psi.name(),
                variant(v)
            ),
        }
    }
}

/// One pair's evaluation. `lhs`/`rhs` are the two sides actually compared
/// (for weak Reich: `φ(d(Tx,Ty))` and `φ(P) − ψ(P)`); all three are absent
/// on vacuous pairs.
#[derive(Clone, Debug)]
pub struct ConditionEvaluation {
    pub pair_index: usize,
    pub pair: (Point, Point),
    pub lhs: Option<AlgebraElement>,
    pub rhs: Option<AlgebraElement>,
    pub order: Option<OrderResult>,
    pub vacuous: bool,
    pub left_domain: bool,
}

impl ConditionEvaluation {
    pub fn verdict(&self) -> Option<Verdict> {
        self.order.map(|o| o.verdict)
    }
}

fn product(factors: &[AlgebraElement], mode: ComparisonMode) -> Result<AlgebraElement> {
    let (last, rest) = factors.split_last().expect("at least one factor");
    let commutative = last.descriptor().is_commutative();
    if commutative || mode == ComparisonMode::Strict {
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = acc.mul(f)?;
        }
        return Ok(acc);
    }
    let mut acc = last.clone();
    for f in rest.iter().rev() {
        let root = f.sqrt()?;
        acc = root.mul(&acc)?.mul(&root)?;
    }
    Ok(acc.hermitian_part())
}

fn image_of(
    spec: &ContractionSpec,
    map: &SelfMap,
    space: &MetricSpace,
    x: &Point,
    left_domain: &mut bool,
) -> Result<Point> {
    match spec.domain_policy {
        DomainPolicy::Enforce => map.apply_in(space, x),
        DomainPolicy::Formal => {
            let image = map.apply(x);
            if !space.domain().contains(&image) {
                *left_domain = true;
            }
            Ok(image)
        }
    }
}

fn evaluate(
    spec: &ContractionSpec,
    map: &SelfMap,
    x: &Point,
    y: &Point,
    space: &MetricSpace,
    restrict_to_moved: bool,
) -> Result<ConditionEvaluation> {
    spec.validate()?;
    let mut left_domain = false;
    let second = match &spec.kind {
        ConditionKind::KannanPair { partner, .. } => partner,
        _ => map,
    };
    let tx = image_of(spec, map, space, x, &mut left_domain)?;
    let sy = image_of(spec, second, space, y, &mut left_domain)?;

    let vacuous = restrict_to_moved
        && (x.gap(&tx) <= spec.fixed_point_tolerance || y.gap(&sy) <= spec.fixed_point_tolerance);
    if vacuous {
        return Ok(ConditionEvaluation {
            pair_index: 0,
            pair: (x.clone(), y.clone()),
            lhs: None,
            rhs: None,
            order: None,
            vacuous: true,
            left_domain,
        });
    }

    let d = |a: &Point, b: &Point| space.distance(a, b);
    let lhs = d(&tx, &sy);
    let mode = spec.comparison_mode;
    let powered = |pairs: Vec<(AlgebraElement, f64)>| -> Result<Vec<AlgebraElement>> {
        pairs.into_iter().map(|(e, p)| e.frac_power(p)).collect()
    };
    let reich_middle = |variant: &ReichVariant| match variant {
        ReichVariant::AsProof => d(x, &tx),
        ReichVariant::AsDisplayed => d(x, &sy),
    };

    let (lhs, rhs) = match &spec.kind {
        ConditionKind::InterpolativeKannan { tau, beta } => {
            let f = powered(vec![(d(x, &tx), *beta), (d(y, &sy), 1.0 - beta)])?;
            (lhs, product(&f, mode)?.scale(*tau))
        }
        ConditionKind::TauBetaEtaKannan { tau, beta, eta }
        | ConditionKind::KannanPair { tau, beta, eta, .. } => {
            let f = powered(vec![(d(x, &tx), *beta), (d(y, &sy), *eta)])?;
            (lhs, product(&f, mode)?.scale(*tau))
        }
        ConditionKind::RInterpolative { tau, beta, r } => {
            let rx = image_of(spec, r, space, x, &mut left_domain)?;
            let ry = image_of(spec, r, space, y, &mut left_domain)?;
            let f = powered(vec![(d(&rx, &tx), *beta), (d(&ry, &sy), 1.0 - beta)])?;
            (lhs, product(&f, mode)?.scale(*tau))
        }
        ConditionKind::ReichType {
            tau,
            alpha,
            beta,
            eta,
            variant,
        } => {
            let f = powered(vec![
                (d(x, y), *alpha),
                (reich_middle(variant), *beta),
                (d(y, &sy), *eta),
            ])?;
            (lhs, product(&f, mode)?.scale(*tau))
        }
        ConditionKind::WeakReich {
            alpha,
            beta,
            eta,
            phi,
            psi,
            variant,
        } => {
            let f = powered(vec![
                (d(x, y), *alpha),
                (reich_middle(variant), *beta),
                (d(y, &sy), *eta),
            ])?;
            let p = product(&f, mode)?;
            let right = phi.apply(&p).sub(&psi.apply(&p))?;
            (phi.apply(&lhs), right)
        }
    };
    let order = lhs.leq(&rhs)?;
    Ok(ConditionEvaluation {
        pair_index: 0,
        pair: (x.clone(), y.clone()),
        lhs: Some(lhs),
        rhs: Some(rhs),
        order: Some(order),
        vacuous: false,
        left_domain,
    })
}

/// Evaluates the condition at `(x, y)`. Pairs where `x` or `y` is a fixed
/// point of its map (within `fixed_point_tolerance`) are vacuous.
pub fn evaluate_condition(
    spec: &ContractionSpec,
    map: &SelfMap,
    x: &Point,
    y: &Point,
    space: &MetricSpace,
) -> Result<ConditionEvaluation> {
    evaluate(spec, map, x, y, space, true)
}

/// Like [`evaluate_condition`] but without the fixed-point exclusion, so
/// the inequality can be inspected at fixed points (e.g. two distinct fixed
/// points `z ≠ y`, where the right-hand side collapses to θ).
pub fn evaluate_unrestricted(
    spec: &ContractionSpec,
    map: &SelfMap,
    x: &Point,
    y: &Point,
    space: &MetricSpace,
) -> Result<ConditionEvaluation> {
    evaluate(spec, map, x, y, space, false)
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub spec: ContractionSpec,
    pub pairs_tested: usize,
    pub vacuous_pairs: usize,
    pub domain_exits: usize,
    pub all_hold: bool,
    pub axioms_ok: bool,
    pub violations: Vec<ConditionEvaluation>,
    pub ill_posed: Vec<ConditionEvaluation>,
}

fn certification_pairs(space: &MetricSpace, sample_pairs: usize, seed: u64) -> Result<Vec<(Point, Point)>> {
    if let Some(points) = space.domain().finite_points() {
        if points.len() <= EXHAUSTIVE_LIMIT {
            return Ok(points
                .iter()
                .flat_map(|x| points.iter().map(move |y| (x.clone(), y.clone())))
                .collect());
        }
    }
    let anchors = space.domain().anchors();
    let mut pairs: Vec<(Point, Point)> = anchors
        .iter()
        .flat_map(|x| anchors.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_pairs {
        let x = space.domain().sample(&mut rng)?;
        let y = space.domain().sample(&mut rng)?;
        pairs.push((x, y));
    }
    Ok(pairs)
}

/// Certifies the condition over all ordered pairs of a finite space with at
/// most 64 points, otherwise over the domain anchors plus `sample_pairs`
/// seeded random pairs. Runs axiom verification first if the space has no
/// cached report.
pub fn certify(
    spec: &ContractionSpec,
    map: &SelfMap,
    space: &MetricSpace,
    sample_pairs: usize,
    seed: u64,
) -> Result<Certificate> {
    spec.validate()?;
    let axioms_ok = match space.axiom_report() {
        Some(report) => report.all_pass(),
        None => verify_axioms(space, sample_pairs.max(1), seed)?.all_pass(),
    };
    let pairs = certification_pairs(space, sample_pairs, seed)?;
    let mut cert = Certificate {
        spec: spec.clone(),
        pairs_tested: pairs.len(),
        vacuous_pairs: 0,
        domain_exits: 0,
        all_hold: true,
        axioms_ok,
        violations: Vec::new(),
        ill_posed: Vec::new(),
    };
    for (index, (x, y)) in pairs.iter().enumerate() {
        let mut eval = evaluate_condition(spec, map, x, y, space)?;
        eval.pair_index = index;
        if eval.left_domain {
            cert.domain_exits += 1;
        }
        match eval.verdict() {
            None => cert.vacuous_pairs += 1,
            Some(Verdict::Holds) => {}
            Some(Verdict::Fails) => cert.violations.push(eval),
            Some(Verdict::IllPosed) => cert.ill_posed.push(eval),
        }
    }
    cert.all_hold = cert.violations.is_empty() && cert.ill_posed.is_empty();
    Ok(cert)
}

#[derive(Clone, Debug, Default)]
pub struct AlteringReport {
    pub samples: usize,
    pub monotonicity_failures: usize,
    /// First `(a, b)` with `a ⪯ b` but `ψ(a) ⋠ ψ(b)`.
    pub monotonicity_witness: Option<(AlgebraElement, AlgebraElement)>,
    pub zero_at_zero: bool,
    pub vanishing_failures: usize,
    pub continuity_failures: usize,
}

impl AlteringReport {
    pub fn passed(&self) -> bool {
        self.monotonicity_failures == 0
            && self.zero_at_zero
            && self.vanishing_failures == 0
            && self.continuity_failures == 0
    }
}

const HALVINGS: i32 = 10;

/// `‖ψ(a ± h/2ᵏ) − ψ(a)‖` must not increase over ten halvings and must have
/// shrunk at least eightfold by the end (a jump keeps it bounded away from 0).
fn continuity_probe(psi: &ConeFunction, a: &AlgebraElement, h: &AlgebraElement) -> Result<bool> {
    let base = psi.apply(a);
    let mut previous = f64::INFINITY;
    let mut first = 0.0;
    for k in 0..=HALVINGS {
        let shifted = a.add(&h.scale(0.5f64.powi(k)))?;
        let delta = psi.apply(&shifted).sub(&base)?.norm();
        if k == 0 {
            first = delta;
        }
        if delta > previous * (1.0 + 1e-9) + 1e-15 {
            return Ok(false);
        }
        previous = delta;
    }
    Ok(first <= 1e-15 || previous <= first / 8.0)
}

/// Samples the altering-distance axioms for `psi` on `algebra`: nondecreasing
/// along random pairs `a ⪯ a + p`, `ψ(θ) = θ`, `ψ(a) ≠ θ` for `‖a‖ ≥ 1e-6`,
/// and a halving continuity probe from above and below at every sample and at
/// the points with unit coordinates.
pub fn altering_distance_check(
    psi: &ConeFunction,
    algebra: &AlgebraDescriptor,
    samples: usize,
    seed: u64,
) -> Result<AlteringReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AlteringReport {
        samples,
        zero_at_zero: psi.apply(&algebra.zero()).norm() <= ZERO_DISTANCE,
        ..Default::default()
    };
    // spectra spread over [0, 3] so piecewise definitions switching at 1 are crossed
    let scale = 3f64.sqrt();
    let step = algebra.scalar(0.5);
    let mut probes = vec![algebra.unit(), algebra.scalar(0.75)];
    if let Some(m) = algebra.is_commutative().then(|| algebra.dimension()) {
        for i in 0..m {
            let mut v = vec![0.5; m];
            v[i] = 1.0;
            probes.push(algebra.diag(v)?);
        }
    }
    for _ in 0..samples {
        let a = random::positive(algebra, &mut rng, scale, 0.0);
        let p = random::positive(algebra, &mut rng, scale, 0.0);
        let b = a.add(&p)?;
        let order = psi.apply(&a).leq(&psi.apply(&b))?;
        if !order.holds() {
            report.monotonicity_failures += 1;
            if report.monotonicity_witness.is_none() {
                report.monotonicity_witness = Some((a.clone(), b));
            }
        }
        if a.norm() >= 1e-6 && psi.apply(&a).norm() <= ZERO_DISTANCE {
            report.vanishing_failures += 1;
        }
        probes.push(a.add(&step)?);
    }
    for a in &probes {
        let from_above = continuity_probe(psi, a, &step)?;
        let below = a.sub(&step)?;
        let from_below = !below.is_positive() || continuity_probe(psi, a, &step.scale(-1.0))?;
        if !(from_above && from_below) {
            report.continuity_failures += 1;
        }
    }
    Ok(report)
}
