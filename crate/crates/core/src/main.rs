use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;

use cstar_fixpoint::catalog::Parameters;
use cstar_fixpoint::harness::config::{parse_mode, parse_variant};
use cstar_fixpoint::harness::{run, Command, RunConfig};

/// Fixed points of interpolative Kannan and Reich contractions on
/// C*-algebra valued metric spaces.
#[derive(Parser, Debug)]
#[command(name = "cstar-fixpoint", version, allow_negative_numbers = true)]
struct Cli {
    /// verify-axioms, certify, solve, fixed-points or demo
    command: Option<String>,
    /// Catalog entry name
    #[arg(long)]
    scenario: Option<String>,
    /// Scenario parameter, repeatable (e.g. --param a=0.5 --param "A=[[2,1],[1,2]]")
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// picard, alternating, r-interpolative, reich or weak
    #[arg(long)]
    solver: Option<String>,
    /// Seed, repeatable; one run per seed
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Sample count for axiom checks, certification pairs and probe starts
    #[arg(long)]
    samples: Option<usize>,
    /// Step-norm threshold of the stop rule
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// strict or symmetrized
    #[arg(long)]
    mode: Option<String>,
    /// proof or displayed
    #[arg(long)]
    variant: Option<String>,
    /// Start point: "10", "1,2" or a point label; sampled per seed when absent
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// Record output file
    #[arg(long)]
    out: Option<PathBuf>,
    /// jsonl or csv
    #[arg(long)]
    format: Option<String>,
    /// TOML run configuration; cannot be combined with other options
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn has_run_options(&self) -> bool {
        self.command.is_some()
            || self.scenario.is_some()
            || !self.params.is_empty()
            || self.solver.is_some()
            || !self.seeds.is_empty()
            || self.samples.is_some()
            || self.epsilon.is_some()
            || self.max_iter.is_some()
            || self.mode.is_some()
            || self.variant.is_some()
            || self.x0.is_some()
            || self.out.is_some()
            || self.format.is_some()
    }

    fn into_config(self) -> anyhow::Result<RunConfig> {
        if let Some(path) = &self.config {
            if self.has_run_options() {
                bail!("--config cannot be combined with other options");
            }
            return Ok(RunConfig::load(path)?);
        }
        let Some(command) = &self.command else {
            bail!("a command is required (verify-axioms, certify, solve, fixed-points, demo)");
        };
        let mut config = RunConfig::new(command.parse::<Command>()?);
        config.scenario = self.scenario;
        config.parameters = Parameters::parse_pairs(&self.params)?;
        config.solver = self.solver.as_deref().map(str::parse).transpose()?;
        if !self.seeds.is_empty() {
            config.seeds = self.seeds;
        }
        if let Some(samples) = self.samples {
            config.samples = samples;
        }
        if let Some(eps) = self.epsilon {
            config.stop.step_norm_epsilon = eps;
        }
        if let Some(max) = self.max_iter {
            config.stop.max_iterations = max;
        }
        config.mode = self.mode.as_deref().map(parse_mode).transpose()?;
        config.variant = self.variant.as_deref().map(parse_variant).transpose()?;
        config.x0 = self.x0;
        config.output_path = self.out;
        if let Some(format) = &self.format {
            config.format = format.parse()?;
        }
        config.validate()?;
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let outcome = cli.into_config().and_then(|config| {
        let mut stdout = std::io::stdout().lock();
        run(&config, &mut stdout).context("run failed")
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
