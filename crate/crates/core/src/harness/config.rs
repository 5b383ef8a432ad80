use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::catalog::Parameters;
use crate::conditions::{ComparisonMode, ReichVariant};
use crate::error::{Error, Result};
use crate::solvers::{SolverKind, StopRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyAxioms,
    Certify,
    Solve,
    FixedPoints,
    Demo,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::VerifyAxioms,
        Command::Certify,
        Command::Solve,
        Command::FixedPoints,
        Command::Demo,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::VerifyAxioms => "verify-axioms",
            Command::Certify => "certify",
            Command::Solve => "solve",
            Command::FixedPoints => "fixed-points",
            Command::Demo => "demo",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown command '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format '{s}' (jsonl or csv)"))),
        }
    }
}

pub fn parse_mode(s: &str) -> Result<ComparisonMode> {
    match s {
        "strict" => Ok(ComparisonMode::Strict),
        "symmetrized" => Ok(ComparisonMode::Symmetrized),
        _ => Err(Error::Config(format!("unknown mode '{s}' (strict or symmetrized)"))),
    }
}

pub fn parse_variant(s: &str) -> Result<ReichVariant> {
    match s {
        "proof" => Ok(ReichVariant::AsProof),
        "displayed" => Ok(ReichVariant::AsDisplayed),
        _ => Err(Error::Config(format!("unknown variant '{s}' (proof or displayed)"))),
    }
}

/// Everything one invocation needs. `x0` is kept as text (`"10"`, `"1,2"` or
/// a point label such as `"p3"`) and resolved against the scenario's domain.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: Option<String>,
    pub parameters: Parameters,
    pub solver: Option<SolverKind>,
    pub stop: StopRule,
    pub seeds: Vec<u64>,
    pub samples: usize,
    pub mode: Option<ComparisonMode>,
    pub variant: Option<ReichVariant>,
    pub x0: Option<String>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

pub const DEFAULT_SAMPLES: usize = 1000;

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            scenario: None,
            parameters: Parameters::new(),
            solver: None,
            stop: StopRule::default(),
            seeds: vec![0],
            samples: DEFAULT_SAMPLES,
            mode: None,
            variant: None,
            x0: None,
            output_path: None,
            format: Format::Jsonl,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.command != Command::Demo && self.scenario.is_none() {
            return Err(Error::Config(format!("'{}' needs a scenario", self.command)));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        self.stop.validate().map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Parses the TOML schema documented in the README. Unknown keys are
    /// rejected with their position.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: FileConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut config = Self::new(file.command.parse()?);
        config.scenario = file.scenario;
        if let Some(table) = &file.parameters {
            config.parameters = Parameters::from_toml(table)?;
        }
        config.solver = file.solver.as_deref().map(str::parse).transpose()?;
        if let Some(eps) = file.epsilon {
            config.stop.step_norm_epsilon = eps;
        }
        if let Some(max) = file.max_iterations {
            config.stop.max_iterations = max;
        }
        if let Some(seeds) = file.seeds {
            config.seeds = seeds;
        }
        if let Some(samples) = file.samples {
            config.samples = samples;
        }
        config.mode = file.mode.as_deref().map(parse_mode).transpose()?;
        config.variant = file.variant.as_deref().map(parse_variant).transpose()?;
        config.x0 = file.x0.map(|x| match x {
            StartValue::Number(v) => v.to_string(),
            StartValue::Coordinates(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
            StartValue::Text(s) => s,
        });
        config.output_path = file.output;
        if let Some(format) = file.format.as_deref() {
            config.format = format.parse()?;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StartValue {
    Number(f64),
    Coordinates(Vec<f64>),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: String,
    scenario: Option<String>,
    parameters: Option<toml::Table>,
    solver: Option<String>,
    seeds: Option<Vec<u64>>,
    samples: Option<usize>,
    epsilon: Option<f64>,
    max_iterations: Option<usize>,
    mode: Option<String>,
    variant: Option<String>,
    x0: Option<StartValue>,
    output: Option<PathBuf>,
    format: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ParamValue;

    #[test]
    fn parses_full_config() {
        let text = r#"
command = "solve"
scenario = "affine_scalar"
solver = "picard"
seeds = [1, 2]
epsilon = 1e-12
max_iterations = 500
x0 = 10
format = "csv"
output = "trace.csv"

[parameters]
a = 0.5
b = 1
"#;
        let config = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(config.command, Command::Solve);
        assert_eq!(config.seeds, vec![1, 2]);
        assert_eq!(config.stop.max_iterations, 500);
        assert_eq!(config.x0.as_deref(), Some("10"));
        assert_eq!(config.format, Format::Csv);
        assert_eq!(config.parameters.get("b"), Some(&ParamValue::Number(1.0)));
    }

    #[test]
    fn rejects_unknown_keys_with_position() {
        let err = RunConfig::from_toml_str("command = \"solve\"\nscenario = \"affine_scalar\"\nsolvr = \"picard\"\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("solvr"), "{err}");
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn requires_scenario() {
        assert!(RunConfig::from_toml_str("command = \"certify\"").is_err());
        assert!(RunConfig::from_toml_str("command = \"demo\"").is_ok());
    }
}
