use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use specidx::potential::BuiltinPotential;

use crate::config::{LamWindow, RunConfig, Spacing};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "specidx", version, about = "Spectral-shift index, Birman-Schwinger operators and spectral flow")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ξ(λ) on a grid, with located jumps.
    XiCurve(RunArgs),
    /// Eigenphases of S(λ) from lam-min upwards and μ(-1; lam-min).
    Flow(RunArgs),
    /// Eigenvalues of A0(λ) and B0(λ).
    BsSpectrum(RunArgs),
    /// Krein's example: numerical against closed-form T0(λ + i0).
    KreinDemo(RunArgs),
    /// Runs the acceptance checks and writes a JSON report.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    SquareWell,
    Gaussian,
    PoschlTeller,
    Exponential,
    CustomTable,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub strength: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// CSV file with header `x,v` for the custom-table potential.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub lam_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lam_max: Option<f64>,
    #[arg(long)]
    pub npoints: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<SpacingArg>,
    #[arg(long)]
    pub nquad: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub ode_tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phase_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV output path; the JSON sidecar replaces the extension with `.json`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Corrupts the lattice resolvent so that the resolvent check must fail.
    #[arg(long)]
    pub negative_control: bool,
    #[arg(long)]
    pub mc_samples: Option<u64>,
    /// Comma-separated subset of criteria to run.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u32>,
}

fn kind_of(p: &BuiltinPotential) -> PotentialKind {
    match p {
        BuiltinPotential::SquareWell { .. } => PotentialKind::SquareWell,
        BuiltinPotential::Gaussian { .. } => PotentialKind::Gaussian,
        BuiltinPotential::PoschlTeller { .. } => PotentialKind::PoschlTeller,
        BuiltinPotential::Exponential { .. } => PotentialKind::Exponential,
        BuiltinPotential::CustomTable { .. } => PotentialKind::CustomTable,
        BuiltinPotential::Zero => PotentialKind::Zero,
    }
}

fn default_potential(kind: PotentialKind) -> BuiltinPotential {
    match kind {
        PotentialKind::SquareWell => BuiltinPotential::SquareWell { depth: 4.0, half_width: 1.5 },
        PotentialKind::Gaussian => BuiltinPotential::Gaussian { depth: 8.0, width: 1.0 },
        PotentialKind::PoschlTeller => BuiltinPotential::PoschlTeller { strength: 2.0 },
        PotentialKind::Exponential => BuiltinPotential::Exponential { depth: 3.0, gamma: 1.0 },
        PotentialKind::CustomTable => BuiltinPotential::CustomTable { points: Vec::new() },
        PotentialKind::Zero => BuiltinPotential::Zero,
    }
}

fn read_table(path: &PathBuf) -> Result<Vec<(f64, f64)>, CliError> {
    let err = |e: String| CliError::Config(format!("{}: {e}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| err(e.to_string()))?;
    rdr.deserialize::<(f64, f64)>()
        .map(|r| r.map_err(|e| err(e.to_string())))
        .collect()
}

impl RunArgs {
    fn potential(&self, current: &BuiltinPotential) -> Result<BuiltinPotential, CliError> {
        let kind = self.potential.unwrap_or_else(|| kind_of(current));
        let mut p = if kind == kind_of(current) {
            current.clone()
        } else {
            default_potential(kind)
        };
        let mut unused = Vec::new();
        let mut take = |flag: &'static str, given: Option<f64>, slot: Option<&mut f64>| match (given, slot) {
            (Some(v), Some(s)) => *s = v,
            (Some(_), None) => unused.push(flag),
            _ => {}
        };
        match &mut p {
            BuiltinPotential::SquareWell { depth, half_width } => {
                take("--depth", self.depth, Some(depth));
                take("--half-width", self.half_width, Some(half_width));
                take("--width", self.width, None);
                take("--strength", self.strength, None);
                take("--gamma", self.gamma, None);
            }
            BuiltinPotential::Gaussian { depth, width } => {
                take("--depth", self.depth, Some(depth));
                take("--width", self.width, Some(width));
                take("--half-width", self.half_width, None);
                take("--strength", self.strength, None);
                take("--gamma", self.gamma, None);
            }
            BuiltinPotential::PoschlTeller { strength } => {
                take("--strength", self.strength, Some(strength));
                take("--depth", self.depth, None);
                take("--width", self.width, None);
                take("--half-width", self.half_width, None);
                take("--gamma", self.gamma, None);
            }
            BuiltinPotential::Exponential { depth, gamma } => {
                take("--depth", self.depth, Some(depth));
                take("--gamma", self.gamma, Some(gamma));
                take("--width", self.width, None);
                take("--half-width", self.half_width, None);
                take("--strength", self.strength, None);
            }
            BuiltinPotential::CustomTable { .. } | BuiltinPotential::Zero => {
                take("--depth", self.depth, None);
                take("--width", self.width, None);
                take("--half-width", self.half_width, None);
                take("--strength", self.strength, None);
                take("--gamma", self.gamma, None);
            }
        }
        if let Some(path) = &self.table {
            match &mut p {
                BuiltinPotential::CustomTable { points } => *points = read_table(path)?,
                _ => unused.push("--table"),
            }
        }
        if !unused.is_empty() {
            return Err(CliError::Config(format!(
                "{} not applicable to the {:?} potential",
                unused.join(", "),
                kind
            )));
        }
        Ok(p)
    }

    /// Layers the config file and then the flags over `base`.
    pub fn resolve(&self, base: RunConfig) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => base,
        };
        cfg.potential = self.potential(&cfg.potential)?;
        let w: &mut LamWindow = &mut cfg.lam_window;
        if let Some(v) = self.lam_min {
            w.min = v;
        }
        if let Some(v) = self.lam_max {
            w.max = v;
        }
        if let Some(v) = self.npoints {
            w.npoints = v;
        }
        if let Some(s) = self.spacing {
            w.spacing = match s {
                SpacingArg::Geometric => Spacing::Geometric,
                SpacingArg::Linear => Spacing::Linear,
            };
        }
        if let Some(v) = self.nquad {
            cfg.nquad = v;
        }
        if let Some(v) = self.ode_tol {
            cfg.ode_tol = v;
        }
        if let Some(v) = self.phase_tol {
            cfg.tolerances.phase_tol = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.output {
            cfg.output_path = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
