//! `wmhd` command-line driver.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use wmhd::experiments::{run_experiment, Experiment, RunConfig};

#[derive(Parser)]
#[command(name = "wmhd", version, about = "Navier-Stokes-Maxwell experiments in Wiener-algebra norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-step the full system and record diagnostics.
    Run(Overrides),
    /// Picard iteration on the admissible interval.
    Picard(Overrides),
    /// Decay exponent of B driven by a rough electric field.
    Loss(Overrides),
    /// Empirical constant of the convolution inequality.
    Lemma(Overrides),
    /// Invariant suite with a pass/fail table.
    Selfcheck(Overrides),
}

#[derive(Args)]
struct Overrides {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write SVG plots where available.
    #[arg(long)]
    svg: bool,
}

impl Overrides {
    fn config(&self, experiment: Experiment) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
            None => RunConfig::default(),
        };
        cfg.experiment = experiment;
        if let Some(v) = &self.out {
            cfg.out_dir = v.clone();
        }
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(n, nu, sigma, dt, t_final, delta, seed);
        cfg.svg |= self.svg;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, overrides) = match &cli.command {
        Command::Run(o) => (Experiment::LocalExistence, o),
        Command::Picard(o) => (Experiment::PicardContraction, o),
        Command::Loss(o) => (Experiment::LossOfSmoothness, o),
        Command::Lemma(o) => (Experiment::LemmaCheck, o),
        Command::Selfcheck(o) => (Experiment::Selfcheck, o),
    };
    let result = overrides.config(experiment).and_then(|cfg| {
        let summary = run_experiment(&cfg).with_context(|| format!("{} failed", experiment.name()))?;
        Ok((cfg, summary))
    });
    match result {
        Ok((cfg, summary)) => {
            print!("{}", summary.table());
            for (k, v) in &summary.values {
                println!("      {k} = {v:e}");
            }
            println!("outputs in {}", cfg.out_dir.display());
            if summary.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
