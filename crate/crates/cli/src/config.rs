use crate::error::{CliError, CliResult};
use fracmotion_core::motion::InstantLaw;
use fracmotion_core::{CountLaw, RateFunction, SuiteConfig};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming the directory for outputs given without a path.
pub const OUT_DIR_ENV: &str = "FRACMOTION_OUT_DIR";

/// Everything one invocation needs; the JSON form is what `--config` reads
/// and `--print-config` writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum RunConfig {
    Simulate(SimulateConfig),
    Density(DensityConfig),
    Verify(VerifyConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub count: CountLaw,
    pub c: f64,
    pub t: f64,
    #[serde(default)]
    pub instants: InstantLaw,
    pub samples: usize,
    pub seed: u64,
    #[serde(default = "one")]
    pub workers: usize,
    pub output: PathBuf,
    pub manifest: PathBuf,
}

fn one() -> usize {
    1
}

/// Which density a grid dump evaluates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum DensityLaw {
    /// Absolutely continuous part of the planar endpoint law.
    Planar { alpha: f64, rate: RateFunction, c: f64, t: f64 },
    /// Constant-rate form written with `E_{alpha,1}`.
    PlanarConstRate { alpha: f64, lambda: f64, c: f64, t: f64 },
    /// Law conditional on exactly `n` changes.
    Conditional { n: usize, c: f64, t: f64 },
    /// One-dimensional projection.
    Line { alpha: f64, rate: RateFunction, c: f64, t: f64 },
    /// `alpha = 1` projection in Sonine form.
    Sonine { lambda: f64, c: f64, t: f64 },
    /// Projected `d`-dimensional flight.
    Flight { d: u32, rate: RateFunction, c: f64, t: f64 },
}

impl DensityLaw {
    pub fn ct(&self) -> f64 {
        match self {
            DensityLaw::Planar { c, t, .. }
            | DensityLaw::PlanarConstRate { c, t, .. }
            | DensityLaw::Conditional { c, t, .. }
            | DensityLaw::Line { c, t, .. }
            | DensityLaw::Sonine { c, t, .. }
            | DensityLaw::Flight { c, t, .. } => c * t,
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, DensityLaw::Line { .. } | DensityLaw::Sonine { .. })
    }
}

/// Evaluation points. Radial and line grids default to `[0, ct)` and
/// `(-ct, ct)` when the bounds are omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "grid", rename_all = "snake_case")]
pub enum GridSpec {
    Radial {
        points: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        to: Option<f64>,
    },
    Cartesian {
        points: usize,
        half_width: f64,
    },
    Line {
        points: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        to: Option<f64>,
    },
}

impl GridSpec {
    pub fn points(&self) -> usize {
        match *self {
            GridSpec::Radial { points, .. } | GridSpec::Cartesian { points, .. } | GridSpec::Line { points, .. } => {
                points
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig {
    pub law: DensityLaw,
    pub grid: GridSpec,
    pub output: PathBuf,
    pub sidecar: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub suite: SuiteConfig,
    pub output: PathBuf,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::usage("config", e))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs hold only serializable rates")
    }

    /// Checks every block, naming the offending field.
    pub fn validate(&self) -> CliResult<()> {
        match self {
            RunConfig::Simulate(s) => {
                if s.samples == 0 {
                    return Err(CliError::usage("simulate.samples", "must be at least 1"));
                }
                if s.workers == 0 {
                    return Err(CliError::usage("simulate.workers", "must be at least 1"));
                }
                check_positive("simulate.c", s.c)?;
                check_positive("simulate.t", s.t)?;
                s.count.validate().map_err(|e| CliError::from_core("simulate.count", e))
            }
            RunConfig::Density(d) => {
                if d.grid.points() == 0 {
                    return Err(CliError::usage("density.grid.points", "must be at least 1"));
                }
                let ct = d.law.ct();
                if !(ct > 0.0 && ct.is_finite()) {
                    return Err(CliError::usage("density.c,t", "speed and time must be positive"));
                }
                match (&d.grid, d.law.is_line()) {
                    (GridSpec::Line { .. }, false) => {
                        Err(CliError::usage("density.grid", "a line grid needs a line or sonine law"))
                    }
                    (GridSpec::Radial { .. } | GridSpec::Cartesian { .. }, true) => {
                        Err(CliError::usage("density.grid", "line laws need a line grid"))
                    }
                    (GridSpec::Cartesian { half_width, .. }, _) if *half_width <= 0.0 || half_width.is_nan() => {
                        Err(CliError::usage("density.grid.half_width", "must be positive"))
                    }
                    _ => Ok(()),
                }
            }
            RunConfig::Verify(v) => {
                if v.suite.workers == 0 {
                    return Err(CliError::usage("verify.suite.workers", "must be at least 1"));
                }
                if v.suite.mc_samples == 0 || v.suite.aux_samples == 0 {
                    return Err(CliError::usage("verify.suite.samples", "must be at least 1"));
                }
                Ok(())
            }
        }
    }
}

fn check_positive(field: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(field, format!("must be positive and finite, got {v}")))
    }
}

/// `name` inside [`OUT_DIR_ENV`] if set, else inside the current directory.
pub fn default_output(name: &str) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(name),
        _ => PathBuf::from(name),
    }
}

/// `endpoints.csv` -> `endpoints.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "output".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracmotion_core::FracPoissonSpec;

    fn simulate() -> RunConfig {
        let spec = FracPoissonSpec::new(0.7, "piecewise:0:1,0.5:2".parse().unwrap()).unwrap();
        RunConfig::Simulate(SimulateConfig {
            count: CountLaw::Fractional(spec),
            c: 1.0,
            t: 1.0,
            instants: InstantLaw::Uniform,
            samples: 10,
            seed: 7,
            workers: 2,
            output: "a.csv".into(),
            manifest: "a.manifest.json".into(),
        })
    }

    #[test]
    fn round_trips() {
        let configs = vec![
            simulate(),
            RunConfig::Density(DensityConfig {
                law: DensityLaw::Planar { alpha: 0.5, rate: RateFunction::power(2.0, 0.5).unwrap(), c: 1.0, t: 2.0 },
                grid: GridSpec::Radial { points: 100, from: None, to: Some(1.5) },
                output: "d.csv".into(),
                sidecar: "d.json".into(),
            }),
            RunConfig::Verify(VerifyConfig { suite: SuiteConfig::default(), output: "r.json".into() }),
        ];
        for cfg in configs {
            let back = RunConfig::from_json(&cfg.to_json_pretty()).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn zero_samples_names_the_field() {
        let mut cfg = simulate();
        if let RunConfig::Simulate(s) = &mut cfg {
            s.samples = 0;
        }
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("simulate.samples"));
        assert_eq!(err.exit_code(), crate::error::EXIT_USAGE);
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling(Path::new("out/e.csv"), "manifest.json"), PathBuf::from("out/e.manifest.json"));
    }
}
