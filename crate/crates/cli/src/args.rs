use crate::config::{
    default_output, sibling, DensityConfig, DensityLaw, GridSpec, RunConfig, SimulateConfig, VerifyConfig,
};
use crate::error::{CliError, CliResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracmotion_core::motion::InstantLaw;
use fracmotion_core::verify::SuiteOverrides;
use fracmotion_core::{
    CheckKind, CountLaw, FlightCountSpec, FracPoissonSpec, RateFunction, StateDependentSpec, SuiteConfig,
};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "fracmotion",
    version,
    about = "Simulate constant-speed particles with fractional Poisson direction changes, dump their densities, verify both"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample endpoints and write them as CSV with a JSON manifest.
    Simulate(SimulateArgs),
    /// Evaluate a density on a grid and write CSV with a JSON sidecar.
    Density(DensityArgs),
    /// Run the verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Run a saved configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    Fractional,
    StateDependent,
    Flight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Instants {
    Uniform,
    RateProportional,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "fractional")]
    pub law: CountKind,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Orders for the state-dependent law, comma separated; the last one continues.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    /// Dimension of the flight-adapted count.
    #[arg(long, default_value_t = 4)]
    pub d: u32,
    /// `const:<l>`, `power:<a>,<b>` or `piecewise:<t0>:<v0>,<t1>:<v1>,...`.
    #[arg(long, default_value = "const:1")]
    pub rate: String,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    pub instants: Instants,
    #[arg(long)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// CSV path; defaults to `endpoints.csv` in the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Print the resolved configuration as JSON instead of running it.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityKind {
    Planar,
    PlanarConstRate,
    Conditional,
    Line,
    Sonine,
    Flight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridKind {
    Radial,
    Cartesian,
    Line,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_enum, default_value = "planar")]
    pub law: DensityKind,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value = "const:1")]
    pub rate: String,
    /// Constant rate for the `planar-const-rate` and `sonine` laws.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Change count for the conditional law.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub d: u32,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Defaults to `line` for line laws and `radial` otherwise.
    #[arg(long, value_enum)]
    pub grid: Option<GridKind>,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Half side of the square for cartesian grids; defaults to `ct`.
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Restrict to these checks (repeatable); all checks by default.
    #[arg(long = "check")]
    pub checks: Vec<String>,
    /// Run every selected check against a deliberately wrong law.
    #[arg(long)]
    pub negative_control: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Endpoints per Monte-Carlo run.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub aux_samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub print_config: bool,
}

fn parse_rate(field: &str, s: &str) -> CliResult<RateFunction> {
    s.parse().map_err(|e| CliError::from_core(field, e))
}

impl SimulateArgs {
    pub fn to_config(&self) -> CliResult<RunConfig> {
        let rate = parse_rate("simulate.rate", &self.rate)?;
        let core = |e| CliError::from_core("simulate.count", e);
        let count = match self.law {
            CountKind::Fractional => CountLaw::Fractional(FracPoissonSpec::new(self.alpha, rate).map_err(core)?),
            CountKind::StateDependent => {
                if self.alphas.is_empty() {
                    return Err(CliError::usage("simulate.alphas", "the state-dependent law needs --alphas"));
                }
                CountLaw::StateDependent(StateDependentSpec::new(self.alphas.clone(), rate).map_err(core)?)
            }
            CountKind::Flight => CountLaw::Flight(FlightCountSpec::new(self.d, rate).map_err(core)?),
        };
        let output = self.out.clone().unwrap_or_else(|| default_output("endpoints.csv"));
        let manifest = self.manifest.clone().unwrap_or_else(|| sibling(&output, "manifest.json"));
        Ok(RunConfig::Simulate(SimulateConfig {
            count,
            c: self.c,
            t: self.t,
            instants: match self.instants {
                Instants::Uniform => InstantLaw::Uniform,
                Instants::RateProportional => InstantLaw::RateProportional,
            },
            samples: self.samples,
            seed: self.seed,
            workers: self.workers,
            output,
            manifest,
        }))
    }
}

impl DensityArgs {
    pub fn to_config(&self) -> CliResult<RunConfig> {
        let (alpha, c, t) = (self.alpha, self.c, self.t);
        let rate = || parse_rate("density.rate", &self.rate);
        let law = match self.law {
            DensityKind::Planar => DensityLaw::Planar { alpha, rate: rate()?, c, t },
            DensityKind::PlanarConstRate => DensityLaw::PlanarConstRate { alpha, lambda: self.lambda, c, t },
            DensityKind::Conditional => DensityLaw::Conditional { n: self.n, c, t },
            DensityKind::Line => DensityLaw::Line { alpha, rate: rate()?, c, t },
            DensityKind::Sonine => DensityLaw::Sonine { lambda: self.lambda, c, t },
            DensityKind::Flight => DensityLaw::Flight { d: self.d, rate: rate()?, c, t },
        };
        let kind = self.grid.unwrap_or(if law.is_line() { GridKind::Line } else { GridKind::Radial });
        let grid = match kind {
            GridKind::Radial => GridSpec::Radial { points: self.points, from: self.from, to: self.to },
            GridKind::Line => GridSpec::Line { points: self.points, from: self.from, to: self.to },
            GridKind::Cartesian => {
                GridSpec::Cartesian { points: self.points, half_width: self.half_width.unwrap_or(law.ct()) }
            }
        };
        let output = self.out.clone().unwrap_or_else(|| default_output("density.csv"));
        let sidecar = self.sidecar.clone().unwrap_or_else(|| sibling(&output, "json"));
        Ok(RunConfig::Density(DensityConfig { law, grid, output, sidecar }))
    }
}

impl VerifyArgs {
    pub fn to_config(&self) -> CliResult<RunConfig> {
        let checks = self
            .checks
            .iter()
            .map(|s| s.parse::<CheckKind>().map_err(|e| CliError::from_core("verify.check", e)))
            .collect::<CliResult<Vec<_>>>()?;
        let defaults = SuiteConfig::default();
        let suite = SuiteConfig {
            seed: self.seed.unwrap_or(defaults.seed),
            mc_samples: self.samples.unwrap_or(defaults.mc_samples),
            aux_samples: self.aux_samples.unwrap_or(defaults.aux_samples),
            workers: self.workers,
            checks,
            overrides: SuiteOverrides { alpha: self.alpha, lambda: self.lambda, c: self.c, t: self.t, h: self.h },
            negative_control: self.negative_control,
        };
        let output = self.out.clone().unwrap_or_else(|| default_output("report.json"));
        Ok(RunConfig::Verify(VerifyConfig { suite, output }))
    }
}
