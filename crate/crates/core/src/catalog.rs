//! Named, parameterized scenarios: a space, its maps, a contraction spec and
//! the outcome the pipeline is expected to reproduce.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraDescriptor, AlgebraElement};
use crate::conditions::{ConeFunction, ContractionSpec, DomainPolicy, ReichVariant, SelfMap};
use crate::error::{Error, Result};
use crate::metric::{Domain, MetricSpace, Point, Region};
use crate::solvers::{
    alternating_solve, picard_solve, r_interpolative_solve, reich_solve, weak_solve, SolveResult, SolverKind,
    StopRule,
};

#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Matrix(Vec<Vec<f64>>),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Number(x) => write!(f, "{x}"),
            ParamValue::Matrix(rows) => write!(f, "{}", serde_json::to_string(rows).map_err(|_| fmt::Error)?),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

/// Scenario parameters keyed by name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Parameters(BTreeMap<String, ParamValue>);

impl Parameters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: impl Into<String>, value: ParamValue) -> Self {
        self.0.insert(key.into(), value);
        self
    }

    /// Parses `key=value` pairs. Values are numbers, JSON-style matrices
    /// (`[[2,1],[1,2]]`) or bare text.
    pub fn parse_pairs<S: AsRef<str>>(pairs: &[S]) -> Result<Self> {
        let mut params = Self::new();
        for pair in pairs {
            let pair = pair.as_ref();
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::BadParameters(format!("expected key=value, got '{pair}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(Error::BadParameters(format!("empty key in '{pair}'")));
            }
            let parsed = if let Ok(x) = value.parse::<f64>() {
                ParamValue::Number(x)
            } else if value.starts_with('[') {
                ParamValue::Matrix(
                    serde_json::from_str(value)
                        .map_err(|e| Error::BadParameters(format!("{key}: not a matrix: {e}")))?,
                )
            } else {
                ParamValue::Text(value.to_string())
            };
            if params.0.insert(key.to_string(), parsed).is_some() {
                return Err(Error::BadParameters(format!("'{key}' given twice")));
            }
        }
        Ok(params)
    }

    pub fn from_toml(table: &toml::Table) -> Result<Self> {
        let mut params = Self::new();
        for (key, value) in table {
            let number = |v: &toml::Value| match v {
                toml::Value::Float(x) => Some(*x),
                toml::Value::Integer(i) => Some(*i as f64),
                _ => None,
            };
            let parsed = match value {
                toml::Value::String(s) => ParamValue::Text(s.clone()),
                toml::Value::Array(rows) => ParamValue::Matrix(
                    rows.iter()
                        .map(|row| match row {
                            toml::Value::Array(cells) => cells.iter().map(number).collect::<Option<Vec<_>>>(),
                            _ => None,
                        })
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| Error::BadParameters(format!("{key}: expected an array of numeric rows")))?,
                ),
                v => ParamValue::Number(
                    number(v).ok_or_else(|| Error::BadParameters(format!("{key}: unsupported value {v}")))?,
                ),
            };
            params.0.insert(key.clone(), parsed);
        }
        Ok(params)
    }

    pub fn get(&self, key: &str) -> Option<&ParamValue> {
        self.0.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamValue)> {
        self.0.iter()
    }

    fn check_keys(&self, entry: &str, allowed: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::BadParameters(format!(
                "{entry} does not take '{k}' (accepted: {})",
                if allowed.is_empty() { "none".to_string() } else { allowed.join(", ") }
            ))),
            None => Ok(()),
        }
    }

    fn number(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Number(x)) if x.is_finite() => Ok(*x),
            Some(v) => Err(Error::BadParameters(format!("{key} must be a finite number, got {v}"))),
        }
    }

    fn number_in(&self, key: &str, default: f64, ok: impl Fn(f64) -> bool, range: &str) -> Result<f64> {
        let x = self.number(key, default)?;
        if ok(x) {
            Ok(x)
        } else {
            Err(Error::BadParameters(format!("{key} = {x} outside {range}")))
        }
    }

    fn text<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str> {
        match self.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Text(s)) => Ok(s),
            Some(v) => Err(Error::BadParameters(format!("{key} must be text, got {v}"))),
        }
    }

    fn matrix(&self, key: &str, default: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        match self.0.get(key) {
            None => Ok(default.to_vec()),
            Some(ParamValue::Matrix(m)) => Ok(m.clone()),
            Some(v) => Err(Error::BadParameters(format!("{key} must be a matrix, got {v}"))),
        }
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// What verify_axioms → certify → solve must reproduce for an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    /// Axioms pass, certify holds on every tested pair, Picard converges.
    CertifiesAndConverges,
    /// The entry has the described defect: certify fails on some pairs or the
    /// domain is not invariant under the maps.
    CertifiableDefect(String),
    /// verify_axioms reports the described violation.
    ViolatesMetricAxiom(String),
    /// Outcome depends on the random instance; checked against exhaustive
    /// oracles instead of a fixed tag.
    OracleChecked(String),
}

impl Expected {
    pub fn tag(&self) -> &'static str {
        match self {
            Expected::CertifiesAndConverges => "certifies-and-converges",
            Expected::CertifiableDefect(_) => "certifiable-defect",
            Expected::ViolatesMetricAxiom(_) => "violates-metric-axiom",
            Expected::OracleChecked(_) => "oracle-checked",
        }
    }

    pub fn description(&self) -> &str {
        match self {
            Expected::CertifiesAndConverges => "",
            Expected::CertifiableDefect(d) | Expected::ViolatesMetricAxiom(d) | Expected::OracleChecked(d) => d,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub space: MetricSpace,
    pub map: SelfMap,
    /// `S` of a contraction pair.
    pub partner: Option<SelfMap>,
    pub r_map: Option<SelfMap>,
    /// Right inverse of `r_map` on the range of `map`.
    pub r_solve: Option<SelfMap>,
    pub spec: ContractionSpec,
    pub expected: Expected,
    pub notes: String,
    pub default_start: Point,
    pub default_solver: SolverKind,
}

impl CatalogEntry {
    /// Runs `kind` with the entry's maps and spec.
    pub fn solve(&self, kind: SolverKind, x0: &Point, stop: &StopRule) -> Result<SolveResult> {
        let missing = |what: &str| Error::InvalidArgument(format!("{} has no {what} for solver '{kind}'", self.name));
        match kind {
            SolverKind::Picard => picard_solve(&self.space, &self.map, x0, Some(&self.spec), stop),
            SolverKind::Alternating => {
                let s = self.partner.as_ref().ok_or_else(|| missing("partner map"))?;
                alternating_solve(&self.space, &self.map, s, x0, Some(&self.spec), stop)
            }
            SolverKind::RInterpolative => {
                let r = self.r_map.as_ref().ok_or_else(|| missing("R map"))?;
                let r_solve = self.r_solve.as_ref().ok_or_else(|| missing("right inverse"))?;
                r_interpolative_solve(&self.space, &self.map, r, r_solve, x0, Some(&self.spec), stop)
            }
            SolverKind::Reich => reich_solve(&self.space, &self.map, x0, &self.spec, stop),
            SolverKind::Weak => weak_solve(&self.space, &self.map, x0, &self.spec, stop),
        }
    }
}

const ENTRIES: [&str; 9] = [
    "affine_pair",
    "affine_scalar",
    "finite_random_12",
    "kannan_step",
    "matrix_scaled_affine",
    "paper_example_kannan",
    "paper_example_r_interpolative",
    "reich_halving",
    "weak_corollary",
];

const NEAR_FIXED_POINT: &str = "condition fails near the fixed point; iteration converges";

/// Entry names, sorted.
pub fn catalog_list() -> Vec<&'static str> {
    ENTRIES.to_vec()
}

pub fn catalog_build(name: &str, params: &Parameters) -> Result<CatalogEntry> {
    match name {
        "affine_pair" => affine_pair(params),
        "affine_scalar" => affine_scalar(params),
        "finite_random_12" => finite_random_12(params),
        "kannan_step" => kannan_step(params),
        "matrix_scaled_affine" => matrix_scaled_affine(params),
        "paper_example_kannan" => paper_example_kannan(params),
        "paper_example_r_interpolative" => paper_example_r_interpolative(params),
        "reich_halving" => reich_halving(params),
        "weak_corollary" => weak_corollary(params),
        _ => Err(Error::UnknownEntry(name.to_string())),
    }
}

fn scalar_metric(name: &str, domain: Domain) -> MetricSpace {
    let alg = AlgebraDescriptor::diagonal(1);
    MetricSpace::from_fn(name, domain, alg, move |x, y| {
        alg.diag(vec![x.gap(y)]).expect("finite distance")
    })
}

/// ℝ, sampled from `[-100, 100]`.
fn real_line() -> Domain {
    let region = Region::interval("ℝ (sampled on [-100, 100])", -100.0, 100.0, |x| x.is_finite())
        .and_then(|r| r.with_anchors(vec![vec![-100.0], vec![0.0], vec![100.0]]))
        .expect("valid region");
    Domain::Region(region)
}

fn closed_interval(lo: f64, hi: f64) -> Domain {
    let region = Region::interval(format!("[{lo}, {hi}]"), lo, hi, move |x| (lo..=hi).contains(&x))
        .and_then(|r| r.with_anchors(vec![vec![lo], vec![0.5 * (lo + hi)], vec![hi]]))
        .expect("valid region");
    Domain::Region(region)
}

fn affine_map(a: f64, b: f64) -> SelfMap {
    SelfMap::scalar(format!("{a}·x + {b}"), move |x| a * x + b)
}

fn affine_pair(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("affine_pair", &[])?;
    let t = affine_map(1.0 / 3.0, 2.0);
    let s = affine_map(0.25, 2.25);
    let spec = ContractionSpec::kannan_pair(0.5, 0.4, 0.4, s.clone())?;
    Ok(CatalogEntry {
        name: "affine_pair".into(),
        space: scalar_metric("affine_pair", real_line()),
        map: t,
        partner: Some(s),
        r_map: None,
        r_solve: None,
        spec,
        expected: Expected::CertifiableDefect(NEAR_FIXED_POINT.into()),
        notes: "Tx = x/3 + 2 and Sx = x/4 + 9/4 share the fixed point 3".into(),
        default_start: Point::scalar(10.0),
        default_solver: SolverKind::Alternating,
    })
}

fn affine_scalar(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("affine_scalar", &["a", "b", "tau", "beta"])?;
    let a = params.number_in("a", 0.5, |a| a.abs() < 1.0, "(-1, 1)")?;
    let b = params.number("b", 1.0)?;
    let tau = params.number("tau", 0.5)?;
    let beta = params.number("beta", 0.5)?;
    let spec = ContractionSpec::interpolative_kannan(tau, beta).map_err(|e| Error::BadParameters(e.to_string()))?;
    Ok(CatalogEntry {
        name: "affine_scalar".into(),
        space: scalar_metric("affine_scalar", real_line()),
        map: affine_map(a, b),
        partner: None,
        r_map: None,
        r_solve: None,
        spec,
        expected: Expected::CertifiableDefect(NEAR_FIXED_POINT.into()),
        notes: format!("Tx = {a}x + {b} on ℝ with fixed point {}", b / (1.0 - a)),
        default_start: Point::scalar(10.0),
        default_solver: SolverKind::Picard,
    })
}

/// Metric `d(x,y) = |x−y|·A` for positive `A`; `‖·‖` ordering follows the scalar one.
fn matrix_scaled_affine(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("matrix_scaled_affine", &["A", "a", "b", "tau", "beta"])?;
    let rows = params.matrix("A", &[vec![2.0, 1.0], vec![1.0, 2.0]])?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::BadParameters("A must be a non-empty square matrix".into()));
    }
    let alg = AlgebraDescriptor::hermitian(n);
    let weight = alg.real_matrix(&rows)?;
    if !weight.is_hermitian() || !weight.is_positive() || weight.norm() == 0.0 {
        return Err(Error::BadParameters("A must be symmetric, positive and non-zero".into()));
    }
    let a = params.number_in("a", 0.5, |a| a.abs() < 1.0, "(-1, 1)")?;
    let b = params.number("b", 1.0)?;
    let tau = params.number("tau", 0.5)?;
    let beta = params.number("beta", 0.5)?;
    let spec = ContractionSpec::interpolative_kannan(tau, beta).map_err(|e| Error::BadParameters(e.to_string()))?;
    let w = weight.clone();
    let space = MetricSpace::from_fn("matrix_scaled_affine", real_line(), alg, move |x, y| w.scale(x.gap(y)));
    Ok(CatalogEntry {
        name: "matrix_scaled_affine".into(),
        space,
        map: affine_map(a, b),
        partner: None,
        r_map: None,
        r_solve: None,
        spec,
        expected: Expected::CertifiableDefect(NEAR_FIXED_POINT.into()),
        notes: format!("d(x,y) = |x−y|·A with A = {}; Tx = {a}x + {b}", ParamValue::Matrix(rows)),
        default_start: Point::scalar(10.0),
        default_solver: SolverKind::Picard,
    })
}

fn finite_random_12(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("finite_random_12", &["seed"])?;
    let seed = params.number_in("seed", 7.0, |s| s >= 0.0 && s.fract() == 0.0 && s <= u64::MAX as f64, "non-negative integers")? as u64;
    const N: usize = 12;
    const M: usize = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![[0.0f64; M]; N * N];
    for i in 0..N {
        for j in i + 1..N {
            for c in 0..M {
                let v = rng.random_range(1.0..=10.0);
                w[i * N + j][c] = v;
                w[j * N + i][c] = v;
            }
        }
    }
    // shortest-path closure per component enforces the triangle inequality
    for c in 0..M {
        for k in 0..N {
            for i in 0..N {
                for j in 0..N {
                    let via = w[i * N + k][c] + w[k * N + j][c];
                    if via < w[i * N + j][c] {
                        w[i * N + j][c] = via;
                    }
                }
            }
        }
    }
    let alg = AlgebraDescriptor::diagonal(M);
    let table = w
        .iter()
        .map(|v| alg.diag(v.to_vec()))
        .collect::<Result<Vec<AlgebraElement>>>()?;
    let labels = (0..N).map(|i| format!("p{i}")).collect();
    let space = MetricSpace::from_table("finite_random_12", labels, alg, table)?;
    let root = rng.random_range(0..N);
    let images: Vec<usize> = (0..N)
        .map(|i| if i == root { root } else { rng.random_range(0..N) })
        .collect();
    Ok(CatalogEntry {
        name: "finite_random_12".into(),
        space,
        map: SelfMap::table(format!("random map (seed {seed})"), images),
        partner: None,
        r_map: None,
        r_solve: None,
        spec: ContractionSpec::interpolative_kannan(0.75, 0.5)?,
        expected: Expected::OracleChecked("compared against exhaustive enumeration".into()),
        notes: format!("12 points, ℝ²-valued metric closed under shortest paths, p{root} fixed by construction"),
        default_start: Point::Label(0),
        default_solver: SolverKind::Picard,
    })
}

/// A discontinuous map certified by hand: on `{0} ∪ {1} ∪ [3.5, 4.5] ∪ [5, 6]`,
/// `T(0) = T(1) = 0`, `T = 1` on the first interval and `T = 0` on the second.
/// The tightest non-vacuous pair is `(3.5, 1)` with ratio `0.75·2.5^0.4 ≈ 1.08`.
fn kannan_step(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("kannan_step", &[])?;
    let member = |x: f64| x == 0.0 || x == 1.0 || (3.5..=4.5).contains(&x) || (5.0..=6.0).contains(&x);
    let region = Region::interval("{0} ∪ {1} ∪ [3.5, 4.5] ∪ [5, 6]", 0.0, 6.0, member)?
        .with_anchors([0.0, 1.0, 3.5, 4.5, 5.0, 6.0].iter().map(|&x| vec![x]).collect())?;
    let map = SelfMap::scalar("step map", |x| if (3.5..=4.5).contains(&x) { 1.0 } else { 0.0 });
    Ok(CatalogEntry {
        name: "kannan_step".into(),
        space: scalar_metric("kannan_step", Domain::Region(region)),
        map,
        partner: None,
        r_map: None,
        r_solve: None,
        spec: ContractionSpec::interpolative_kannan(0.75, 0.4)?,
        expected: Expected::CertifiesAndConverges,
        notes: "interpolative Kannan with τ = 3/4, β = 2/5; unique fixed point 0".into(),
        default_start: Point::scalar(4.0),
        default_solver: SolverKind::Picard,
    })
}

/// `]2, ∞[`, sampled from `(2, 12]`.
fn open_half_line() -> Result<Region> {
    Region::interval("]2, ∞[", 2.0, 12.0, |x| x > 2.0 && x.is_finite())?.with_anchors(vec![vec![3.0], vec![4.0]])
}

fn sum_squared_space(name: &str) -> Result<MetricSpace> {
    let alg = AlgebraDescriptor::diagonal(2);
    Ok(MetricSpace::from_fn(name, Domain::Region(open_half_line()?), alg, move |x, y| {
        let s = x.as_scalar().unwrap_or(f64::NAN) + y.as_scalar().unwrap_or(f64::NAN);
        alg.diag(vec![s * s, 0.0]).unwrap_or_else(|_| alg.scalar(f64::INFINITY))
    }))
}

fn reciprocal() -> SelfMap {
    SelfMap::scalar("1/x", |x| 1.0 / x)
}

fn paper_example_kannan(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("paper_example_kannan", &[])?;
    let spec = ContractionSpec::interpolative_kannan(0.75, 0.4)?.with_domain_policy(DomainPolicy::Formal);
    Ok(CatalogEntry {
        name: "paper_example_kannan".into(),
        space: sum_squared_space("paper_example_kannan")?,
        map: reciprocal(),
        partner: None,
        r_map: None,
        r_solve: None,
        spec,
        expected: Expected::ViolatesMetricAxiom("d(x,x)≠0".into()),
        notes: "X = ]2,∞[, d(x,y) = ((x+y)², 0), Tx = 1/x, τ = 3/4, β = 2/5; d(x,x) ≠ θ and T leaves X".into(),
        default_start: Point::scalar(3.0),
        default_solver: SolverKind::Picard,
    })
}

fn paper_example_r_interpolative(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("paper_example_r_interpolative", &["variant", "c"])?;
    let variant = params.text("variant", "paper")?;
    let r = SelfMap::scalar("x²", |x| x * x);
    let r_solve = SelfMap::scalar("√x", f64::sqrt);
    let (space, policy, expected, notes) = match variant {
        "paper" => {
            params.check_keys("paper_example_r_interpolative", &["variant"])?;
            (
                sum_squared_space("paper_example_r_interpolative")?,
                DomainPolicy::Formal,
                Expected::CertifiableDefect("domain not invariant".into()),
                "X = ]2,∞[, d(x,y) = ((x+y)², 0), Tx = 1/x, Rx = x²; T maps X outside X".to_string(),
            )
        }
        "repaired" => {
            let c = params.number_in("c", 0.5, |c| c > 0.0, "(0, ∞)")?;
            let region = Region::interval("]0, ∞[", 0.05, 20.0, |x| x > 0.0 && x.is_finite())?
                .with_anchors(vec![vec![0.5], vec![1.0], vec![2.0], vec![3.0]])?;
            let alg = AlgebraDescriptor::diagonal(2);
            let space = MetricSpace::from_fn(
                "paper_example_r_interpolative (repaired)",
                Domain::Region(region),
                alg,
                move |x, y| {
                    let g = x.gap(y);
                    alg.diag(vec![g, c * g]).unwrap_or_else(|_| alg.scalar(f64::INFINITY))
                },
            );
            (
                space,
                DomainPolicy::Enforce,
                Expected::CertifiableDefect(NEAR_FIXED_POINT.into()),
                format!("X = ]0,∞[, d(x,y) = (|x−y|, {c}|x−y|), Tx = 1/x, Rx = x²; common solution v = 1"),
            )
        }
        other => {
            return Err(Error::BadParameters(format!(
                "variant must be 'paper' or 'repaired', got '{other}'"
            )))
        }
    };
    let spec = ContractionSpec::r_interpolative(0.75, 0.4, r.clone())?.with_domain_policy(policy);
    Ok(CatalogEntry {
        name: "paper_example_r_interpolative".into(),
        space,
        map: reciprocal(),
        partner: None,
        r_map: Some(r),
        r_solve: Some(r_solve),
        spec,
        expected,
        notes,
        default_start: Point::scalar(3.0),
        default_solver: SolverKind::RInterpolative,
    })
}

fn reich_halving(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("reich_halving", &["tau"])?;
    let tau = params.number("tau", 0.7)?;
    let spec = ContractionSpec::reich_type(tau, 0.4, 0.4, 0.4, ReichVariant::AsProof)
        .map_err(|e| Error::BadParameters(e.to_string()))?;
    Ok(CatalogEntry {
        name: "reich_halving".into(),
        space: scalar_metric("reich_halving", closed_interval(-10.0, 10.0)),
        map: affine_map(0.5, 0.0),
        partner: None,
        r_map: None,
        r_solve: None,
        spec,
        expected: Expected::CertifiableDefect(NEAR_FIXED_POINT.into()),
        notes: format!("Tx = x/2 on [-10, 10]; Reich-type τ = {tau}, α = β = η = 0.4"),
        default_start: Point::scalar(1.0),
        default_solver: SolverKind::Reich,
    })
}

fn weak_corollary(params: &Parameters) -> Result<CatalogEntry> {
    params.check_keys("weak_corollary", &["k"])?;
    let k = params.number_in("k", 0.5, |k| k > 0.0 && k < 1.0, "(0, 1)")?;
    let space = scalar_metric("weak_corollary", closed_interval(-1.0, 1.0));
    let spec = ContractionSpec::weak_reich(
        0.4,
        0.3,
        0.3,
        ConeFunction::identity(),
        corollary_linear(k),
        ReichVariant::AsProof,
        space.algebra(),
    )?;
    Ok(CatalogEntry {
        name: "weak_corollary".into(),
        space,
        map: affine_map(0.5, 0.0),
        partner: None,
        r_map: None,
        r_solve: None,
        spec,
        expected: Expected::CertifiableDefect(NEAR_FIXED_POINT.into()),
        notes: format!("φ = identity, ψ(x) = (1 − {k})x, so the condition reads d(Tx,Ty) ⪯ {k}·P"),
        default_start: Point::scalar(1.0),
        default_solver: SolverKind::Weak,
    })
}

const ALTERING: [&str; 3] = ["corollary_linear", "identity", "paper_piecewise"];

pub fn altering_list() -> Vec<&'static str> {
    ALTERING.to_vec()
}

/// `ψ(x) = (1 − k)x`.
pub fn corollary_linear(k: f64) -> ConeFunction {
    ConeFunction::new(format!("({}·I)x", 1.0 - k), move |a: &AlgebraElement| a.scale(1.0 - k))
}

/// `x ↦ x` below 1 and `x²` above, applied to each coordinate of a diagonal
/// element and to the spectrum of a matrix.
pub fn paper_piecewise() -> ConeFunction {
    ConeFunction::new("piecewise x / x²", |a: &AlgebraElement| {
        a.apply_spectral(|x| if x > 1.0 { x * x } else { x })
            .unwrap_or_else(|_| a.clone())
    })
}

pub fn altering_build(name: &str, params: &Parameters) -> Result<ConeFunction> {
    match name {
        "identity" => {
            params.check_keys(name, &[])?;
            Ok(ConeFunction::identity())
        }
        "paper_piecewise" => {
            params.check_keys(name, &[])?;
            Ok(paper_piecewise())
        }
        "corollary_linear" => {
            params.check_keys(name, &["k"])?;
            Ok(corollary_linear(params.number_in("k", 0.5, |k| k > 0.0 && k < 1.0, "(0, 1)")?))
        }
        _ => Err(Error::UnknownEntry(name.to_string())),
    }
}
