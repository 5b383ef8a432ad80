use std::fs::File;
use std::io::{BufWriter, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraElement;
use crate::catalog::{catalog_build, CatalogEntry, ParamValue, Parameters};
use crate::conditions::{certify, Certificate};
use crate::error::{Error, Result};
use crate::harness::config::{Command, RunConfig};
use crate::harness::records::{element_values, point_values, Record, RecordWriter};
use crate::metric::{verify_axioms, Axiom, AxiomReport, Domain, Point, ViolationWitness};
use crate::solvers::{brute_force_fixed_points, uniqueness_probe_with, SolveResult, SolverKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FINDINGS: i32 = 2;

/// Runs one command, writing records to the configured output and a
/// human-readable summary to `summary`. Returns 0 on success, 2 when
/// violations or non-convergence were found; errors map to exit code 1.
pub fn run(config: &RunConfig, summary: &mut dyn Write) -> Result<i32> {
    config.validate()?;
    let mut sink = Sink::open(config)?;
    let code = match config.command {
        Command::VerifyAxioms => verify_command(config, &mut sink, summary)?,
        Command::Certify => certify_command(config, &mut sink, summary)?,
        Command::Solve => solve_command(config, &mut sink, summary)?,
        Command::FixedPoints => fixed_points_command(config, &mut sink, summary)?,
        Command::Demo => demo_command(config, &mut sink, summary)?,
    };
    sink.finish()?;
    Ok(code)
}

struct Sink {
    writer: Option<RecordWriter>,
}

impl Sink {
    fn open(config: &RunConfig) -> Result<Self> {
        let writer = match &config.output_path {
            Some(path) => {
                let file = File::create(path)?;
                Some(RecordWriter::new(Box::new(BufWriter::new(file)), config.format)?)
            }
            None => None,
        };
        Ok(Self { writer })
    }

    fn emit(&mut self, record: Record) -> Result<()> {
        match &mut self.writer {
            Some(w) => w.write(&record),
            None => Ok(()),
        }
    }

    fn finish(self) -> Result<()> {
        match self.writer {
            Some(w) => w.finish(),
            None => Ok(()),
        }
    }
}

fn build_entry(config: &RunConfig) -> Result<CatalogEntry> {
    let name = config
        .scenario
        .as_deref()
        .ok_or_else(|| Error::Config("a scenario is required".into()))?;
    let mut entry = catalog_build(name, &config.parameters)?;
    if let Some(mode) = config.mode {
        entry.spec = entry.spec.with_mode(mode);
    }
    if let Some(variant) = config.variant {
        entry.spec = entry.spec.with_variant(variant);
    }
    Ok(entry)
}

fn parse_start(text: &str, domain: &Domain) -> Result<Point> {
    let bad = || Error::Config(format!("cannot read start point '{text}'"));
    if let Domain::Finite(labels) = domain {
        let index = labels
            .iter()
            .position(|l| l == text)
            .or_else(|| text.trim_start_matches('#').parse().ok())
            .ok_or_else(bad)?;
        return Ok(Point::Label(index));
    }
    let coords = text
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    Ok(Point::Real(coords))
}

fn start_point(config: &RunConfig, entry: &CatalogEntry, seed: u64) -> Result<Point> {
    match &config.x0 {
        Some(text) => parse_start(text, entry.space.domain()),
        None => entry.space.domain().sample(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
}

pub fn format_element(e: &AlgebraElement) -> String {
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    match e.diagonal_entries() {
        Some(d) => format!("({})", join(d)),
        None => match e.spectrum() {
            Ok(s) => format!("σ{{{}}}", join(&s)),
            Err(_) => format!("non-Hermitian, components [{}]", join(&e.components())),
        },
    }
}

fn describe_witness(w: &ViolationWitness) -> String {
    let p = &w.points;
    let v: Vec<String> = w.values.iter().map(format_element).collect();
    match w.axiom {
        Axiom::Identity if p[0] == p[1] => format!("d({}, {}) = {} ≠ θ", p[0], p[1], v[0]),
        Axiom::Identity => format!("d({}, {}) = {} = θ for distinct points", p[0], p[1], v[0]),
        Axiom::Positivity => format!("d({}, {}) = {} is not positive", p[0], p[1], v[0]),
        Axiom::Symmetry => format!("d({0}, {1}) = {2} but d({1}, {0}) = {3}", p[0], p[1], v[0], v[1]),
        Axiom::Triangle => format!(
            "d({0}, {1}) = {3} ⋠ d({0}, {2}) + d({2}, {1}) = {4} + {5}",
            p[0], p[1], p[2], v[0], v[1], v[2]
        ),
    }
}

fn emit_axioms(
    sink: &mut Sink,
    summary: &mut dyn Write,
    scenario: &str,
    seed: u64,
    report: &AxiomReport,
) -> Result<()> {
    writeln!(
        summary,
        "verify-axioms {scenario} (seed {seed}, {} checks): {}",
        report.samples_tested,
        if report.all_pass() { "all axioms hold" } else { "VIOLATED" }
    )?;
    for (i, (axiom, outcome)) in report.outcomes().iter().enumerate() {
        let mut r = Record::new("axiom", scenario);
        r.seed = Some(seed);
        r.index = Some(i as u64);
        r.verdict = Some(if outcome.passed() { "pass" } else { "fail" }.into());
        r.detail = Some(format!("{} ({} violations)", axiom.as_str(), outcome.violations));
        if let Some(w) = &outcome.witness {
            r.points = Some(point_values(&w.points.iter().collect::<Vec<_>>()));
            r.values = Some(w.values.iter().flat_map(element_values).collect());
            writeln!(
                summary,
                "  {}: FAIL ({} violations), witness {}",
                axiom.as_str(),
                outcome.violations,
                describe_witness(w)
            )?;
        } else {
            writeln!(summary, "  {}: pass", axiom.as_str())?;
        }
        sink.emit(r)?;
    }
    let mut r = Record::new("axioms-summary", scenario);
    r.seed = Some(seed);
    r.verdict = Some(if report.all_pass() { "pass" } else { "fail" }.into());
    r.values = Some(vec![report.samples_tested as f64]);
    sink.emit(r)
}

fn verify_command(config: &RunConfig, sink: &mut Sink, summary: &mut dyn Write) -> Result<i32> {
    let entry = build_entry(config)?;
    let mut failed = false;
    for &seed in &config.seeds {
        let report = verify_axioms(&entry.space, config.samples, seed)?;
        emit_axioms(sink, summary, &entry.name, seed, &report)?;
        failed |= !report.all_pass();
    }
    Ok(if failed { EXIT_FINDINGS } else { EXIT_OK })
}

fn emit_certificate(
    sink: &mut Sink,
    summary: &mut dyn Write,
    scenario: &str,
    seed: u64,
    cert: &Certificate,
) -> Result<()> {
    for (kind, evals) in [("violation", &cert.violations), ("ill-posed", &cert.ill_posed)] {
        for e in evals {
            let mut r = Record::new(kind, scenario);
            r.seed = Some(seed);
            r.index = Some(e.pair_index as u64);
            r.points = Some(point_values(&[&e.pair.0, &e.pair.1]));
            r.lhs = e.lhs.as_ref().map(element_values);
            r.rhs = e.rhs.as_ref().map(element_values);
            r.verdict = e.order.map(|o| o.verdict.as_str().to_string());
            r.values = e.order.map(|o| {
                [o.witness_eigenvalue, o.hermitian_defect].into_iter().flatten().collect()
            });
            if e.left_domain {
                r.detail = Some("image outside the domain".into());
            }
            sink.emit(r)?;
        }
    }
    if !cert.axioms_ok {
        let mut r = Record::new("axiom", scenario);
        r.seed = Some(seed);
        r.verdict = Some("fail".into());
        r.detail = Some("metric axioms fail; the certificate is void".into());
        sink.emit(r)?;
    }
    let mut r = Record::new("certificate", scenario);
    r.seed = Some(seed);
    r.verdict = Some(if cert.all_hold { "holds" } else { "fails" }.into());
    r.values = Some(
        [
            cert.pairs_tested,
            cert.vacuous_pairs,
            cert.domain_exits,
            cert.violations.len(),
            cert.ill_posed.len(),
        ]
        .map(|v| v as f64)
        .to_vec(),
    );
    r.detail = Some(cert.spec.label());
    sink.emit(r)?;
    writeln!(
        summary,
        "certify {scenario} (seed {seed}) {}: {} — {} pairs, {} vacuous, {} violations, {} ill-posed, {} images outside the domain{}",
        cert.spec.label(),
        if cert.all_hold { "holds" } else { "FAILS" },
        cert.pairs_tested,
        cert.vacuous_pairs,
        cert.violations.len(),
        cert.ill_posed.len(),
        cert.domain_exits,
        if cert.axioms_ok { "" } else { "; metric axioms fail, certificate void" }
    )?;
    if let Some(v) = cert.violations.first() {
        writeln!(
            summary,
            "  first violation at ({}, {}): lhs {} ⋠ rhs {}",
            v.pair.0,
            v.pair.1,
            v.lhs.as_ref().map(format_element).unwrap_or_default(),
            v.rhs.as_ref().map(format_element).unwrap_or_default()
        )?;
    }
    Ok(())
}

fn certify_command(config: &RunConfig, sink: &mut Sink, summary: &mut dyn Write) -> Result<i32> {
    let entry = build_entry(config)?;
    let mut failed = false;
    for &seed in &config.seeds {
        let cert = certify(&entry.spec, &entry.map, &entry.space, config.samples, seed)?;
        emit_certificate(sink, summary, &entry.name, seed, &cert)?;
        failed |= !cert.all_hold || !cert.axioms_ok;
    }
    Ok(if failed { EXIT_FINDINGS } else { EXIT_OK })
}

fn emit_solve(
    sink: &mut Sink,
    summary: &mut dyn Write,
    scenario: &str,
    seed: u64,
    kind: SolverKind,
    x0: &Point,
    result: &SolveResult,
) -> Result<()> {
    let points = result.trace.points();
    for (k, &norm) in result.trace.step_norms().iter().enumerate() {
        let mut r = Record::new("step", scenario);
        r.seed = Some(seed);
        r.index = Some(k as u64);
        r.points = Some(point_values(&[&points[k + 1]]));
        r.step_norm = Some(norm);
        if let Some(check) = result.bound_checks.get(k) {
            r.bound_check = Some(check.verdict.as_str().into());
            r.values = check.witness_eigenvalue.map(|w| vec![w]);
        }
        sink.emit(r)?;
    }
    let mut r = Record::new("solve-summary", scenario);
    r.seed = Some(seed);
    r.index = Some(result.iterations as u64);
    r.points = result.fixed_point.as_ref().map(|p| point_values(&[p]));
    r.verdict = Some(result.status.as_str().into());
    r.residual = Some(result.residual);
    r.rate = result.empirical_rate;
    r.values = result.secondary_residual.map(|s| vec![s]);
    let mut detail = format!("solver={kind} x0={x0} bound_failures={}", result.bound_failures());
    if let Some(exit) = result.exit_iteration {
        detail.push_str(&format!(" exit_iteration={exit}"));
    }
    r.detail = Some(detail);
    sink.emit(r)?;

    write!(summary, "solve {scenario} (seed {seed}, {kind}, x0 = {x0}): ")?;
    match result.exit_iteration {
        Some(exit) => writeln!(
            summary,
            "domain-exit at iteration {exit}: the next iterate from {} is outside the domain",
            result.trace.last_point()
        )?,
        None => {
            write!(summary, "{} after {} iterations", result.status.as_str(), result.iterations)?;
            let z = result.fixed_point.as_ref().map(|p| p.to_string()).unwrap_or_default();
            write!(summary, ", point {z}, residual {:e}", result.residual)?;
            if let Some(s) = result.secondary_residual {
                write!(summary, ", secondary residual {s:e}")?;
            }
            if let Some(rate) = result.empirical_rate {
                write!(summary, ", rate {rate:.4}")?;
            }
            writeln!(
                summary,
                ", {}/{} bound checks hold",
                result.bound_checks.len() - result.bound_failures(),
                result.bound_checks.len()
            )?;
        }
    }
    Ok(())
}

fn solve_command(config: &RunConfig, sink: &mut Sink, summary: &mut dyn Write) -> Result<i32> {
    let entry = build_entry(config)?;
    let kind = config.solver.unwrap_or(entry.default_solver);
    let mut failed = false;
    for &seed in &config.seeds {
        let x0 = start_point(config, &entry, seed)?;
        match entry.solve(kind, &x0, &config.stop) {
            Ok(result) => {
                emit_solve(sink, summary, &entry.name, seed, kind, &x0, &result)?;
                failed |= !result.converged();
            }
            Err(e @ (Error::PreconditionFailed(_) | Error::BadInverse { .. })) => {
                let mut r = Record::new("solver-error", &entry.name);
                r.seed = Some(seed);
                r.points = Some(point_values(&[&x0]));
                r.verdict = Some("error".into());
                r.detail = Some(e.to_string());
                sink.emit(r)?;
                writeln!(summary, "solve {} (seed {seed}, {kind}, x0 = {x0}): {e}", entry.name)?;
                failed = true;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(if failed { EXIT_FINDINGS } else { EXIT_OK })
}

fn fixed_points_command(config: &RunConfig, sink: &mut Sink, summary: &mut dyn Write) -> Result<i32> {
    let entry = build_entry(config)?;
    if entry.space.domain().is_finite() {
        let points = brute_force_fixed_points(&entry.space, &entry.map)?;
        for (i, p) in points.iter().enumerate() {
            let mut r = Record::new("fixed-point", &entry.name);
            r.index = Some(i as u64);
            r.points = Some(point_values(&[p]));
            sink.emit(r)?;
        }
        let mut r = Record::new("fixed-points", &entry.name);
        r.values = Some(vec![points.len() as f64]);
        r.verdict = Some("exhaustive".into());
        sink.emit(r)?;
        let listed: Vec<String> = points.iter().map(|p| p.to_string()).collect();
        writeln!(
            summary,
            "fixed-points {} (exhaustive): {} found [{}]",
            entry.name,
            points.len(),
            listed.join(", ")
        )?;
        return Ok(EXIT_OK);
    }
    let kind = config.solver.unwrap_or(entry.default_solver);
    let starts = config.samples.max(2);
    for &seed in &config.seeds {
        let report = uniqueness_probe_with(&entry.space, starts, seed, |x| entry.solve(kind, x, &config.stop))?;
        for (start, p) in &report.converged {
            let mut r = Record::new("probe-result", &entry.name);
            r.seed = Some(seed);
            r.index = Some(*start as u64);
            r.points = Some(point_values(&[p]));
            sink.emit(r)?;
        }
        let mut r = Record::new("uniqueness", &entry.name);
        r.seed = Some(seed);
        r.verdict = Some(if report.unique { "unique" } else { "not-unique" }.into());
        r.values = Some(vec![
            report.cluster_count as f64,
            report.max_spread,
            report.converged.len() as f64,
            report.not_converged.len() as f64,
        ]);
        r.detail = Some(format!("solver={kind} starts={starts}"));
        sink.emit(r)?;
        writeln!(
            summary,
            "fixed-points {} (seed {seed}, {kind}, {starts} starts): {} converged, {} clusters, spread {:e}, {}",
            entry.name,
            report.converged.len(),
            report.cluster_count,
            report.max_spread,
            if report.unique { "unique" } else { "not unique" }
        )?;
    }
    Ok(EXIT_OK)
}

fn demo_command(config: &RunConfig, sink: &mut Sink, summary: &mut dyn Write) -> Result<i32> {
    let seed = config.seeds[0];
    let stop = config.stop;

    let kannan = catalog_build("paper_example_kannan", &Parameters::new())?;
    writeln!(summary, "== {} ==\n{}", kannan.name, kannan.notes)?;
    let report = verify_axioms(&kannan.space, config.samples, seed)?;
    emit_axioms(sink, summary, &kannan.name, seed, &report)?;
    let cert = certify(&kannan.spec, &kannan.map, &kannan.space, config.samples, seed)?;
    emit_certificate(sink, summary, &kannan.name, seed, &cert)?;
    let x0 = kannan.default_start.clone();
    let result = kannan.solve(SolverKind::Picard, &x0, &stop)?;
    emit_solve(sink, summary, &kannan.name, seed, SolverKind::Picard, &x0, &result)?;

    let r_paper = catalog_build("paper_example_r_interpolative", &Parameters::new())?;
    writeln!(summary, "\n== {} ==\n{}", r_paper.name, r_paper.notes)?;
    let report = verify_axioms(&r_paper.space, config.samples, seed)?;
    emit_axioms(sink, summary, &r_paper.name, seed, &report)?;
    let x0 = r_paper.default_start.clone();
    let result = r_paper.solve(SolverKind::RInterpolative, &x0, &stop)?;
    emit_solve(sink, summary, &r_paper.name, seed, SolverKind::RInterpolative, &x0, &result)?;

    let repaired = catalog_build(
        "paper_example_r_interpolative",
        &Parameters::new().with("variant", ParamValue::Text("repaired".into())),
    )?;
    writeln!(summary, "\n== {} (repaired) ==\n{}", repaired.name, repaired.notes)?;
    let report = verify_axioms(&repaired.space, config.samples, seed)?;
    emit_axioms(sink, summary, &repaired.name, seed, &report)?;
    let result = repaired.solve(SolverKind::RInterpolative, &x0, &stop)?;
    emit_solve(sink, summary, &repaired.name, seed, SolverKind::RInterpolative, &x0, &result)?;
    Ok(EXIT_OK)
}
