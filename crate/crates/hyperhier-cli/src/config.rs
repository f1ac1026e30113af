//! Command-line arguments and the resolved run configuration.

use crate::catalog::parse_rational;
use crate::error::CliError;
use clap::{Args, Parser, Subcommand};
use hyperhier_core::{BigRational, Mode};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Heavenly residual and Lax commutator of a catalog background.
    VerifySolution,
    /// Ricci, Weyl spinor and Riemann components.
    CurvatureReport,
    /// Flat phi-chain or Sparling-Tod psi-chain, Killing chains and gauge modes.
    RecursionChain,
    /// Lax annihilation of a twistor lambda-series, order by order.
    TwistorSeries,
    /// Residue transform of lambda^-n / (mu0 mu1) against the phi-chain.
    Penrose,
    /// Compatibility, summed-Lax and flow identities of the hierarchy.
    HierarchyCheck,
    /// Symplectic pairing on flat linearised solutions.
    SymplecticCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifySolution => "verify-solution",
            Command::CurvatureReport => "curvature-report",
            Command::RecursionChain => "recursion-chain",
            Command::TwistorSeries => "twistor-series",
            Command::Penrose => "penrose",
            Command::HierarchyCheck => "hierarchy-check",
            Command::SymplecticCheck => "symplectic-check",
        }
    }

    pub const ALL: [Command; 7] = [
        Command::VerifySolution,
        Command::CurvatureReport,
        Command::RecursionChain,
        Command::TwistorSeries,
        Command::Penrose,
        Command::HierarchyCheck,
        Command::SymplecticCheck,
    ];
}

#[derive(Debug, Parser)]
#[command(
    name = "hyperhier",
    version,
    about = "Exact checks for heavenly equations and the hyper-Kahler hierarchy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Args)]
pub struct Opts {
    /// Catalog entry name.
    #[arg(long, global = true)]
    pub background: Option<String>,
    /// Value of sigma, e.g. 1/2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Plane-wave profile, or a replacement potential.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Chain length, hierarchy level or residue power.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Top lambda-order of a twistor series.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// exact or float.
    #[arg(long, global = true, default_value = "exact")]
    pub mode: String,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Number of sample points.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Float-mode tolerance on residual magnitudes.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Pole location for the residue transform.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub pole: Option<String>,
    /// Maximal degree of sampled polynomial solutions.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Number of sampled solution pairs.
    #[arg(long, global = true)]
    pub pairs: Option<usize>,
    /// Catalog file replacing the shipped one.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub background: Option<String>,
    pub sigma: Option<BigRational>,
    pub f: Option<String>,
    pub n: Option<usize>,
    pub order: Option<usize>,
    pub mode: Mode,
    pub seed: u64,
    pub points: Option<usize>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub pole: Option<String>,
    pub degree: Option<u32>,
    pub pairs: Option<usize>,
    pub catalog: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            background: None,
            sigma: None,
            f: None,
            n: None,
            order: None,
            mode: Mode::Exact,
            seed: 1,
            points: None,
            tol: 1e-9,
            out: None,
            pole: None,
            degree: None,
            pairs: None,
            catalog: None,
        }
    }

    pub fn with_background(mut self, name: &str) -> RunConfig {
        self.background = Some(name.to_string());
        self
    }

    pub fn from_cli(cli: Cli) -> Result<RunConfig, CliError> {
        let o = cli.opts;
        let mode = o.mode.parse::<Mode>().map_err(CliError::Config)?;
        if !(o.tol > 0.0) {
            return Err(CliError::Config("--tol must be positive".into()));
        }
        Ok(RunConfig {
            command: cli.command,
            background: o.background,
            sigma: o.sigma.as_deref().map(parse_rational).transpose()?,
            f: o.f,
            n: o.n,
            order: o.order,
            mode,
            seed: o.seed,
            points: o.points,
            tol: o.tol,
            out: o.out,
            pole: o.pole,
            degree: o.degree,
            pairs: o.pairs,
            catalog: o.catalog,
        })
    }
}
