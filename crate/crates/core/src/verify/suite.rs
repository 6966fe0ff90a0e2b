use super::caputo::CaputoGrid;
use super::checks::{self, Mode};
use super::report::{CheckEntry, VerificationReport};
use super::{GOF_BINS, NEGATIVE_ALPHA_SHIFT};
use crate::counting::{CountLaw, FracPoissonSpec, RateFunction};
use crate::densities::{classical_density, DensityRadialLaw, PlanarLaw, RadialLaw};
use crate::error::{domain, Error, Result};
use crate::motion::{
    endpoints_par, sample_conditional, sample_flight_radius, FlightVariant, MotionConfig, MotionSampler,
};
use crate::stream::substream;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Counting,
    Mixture,
    DiskMass,
    MonteCarlo,
    CharacteristicFunction,
    ConditionalLaw,
    Projection,
    Sonine,
    FlightD4,
    FlightMixture,
    FlightSampler,
    Telegraph,
    Eigenfunction,
    PgfOde,
}

impl CheckKind {
    pub const ALL: [CheckKind; 14] = [
        CheckKind::Counting,
        CheckKind::Mixture,
        CheckKind::DiskMass,
        CheckKind::MonteCarlo,
        CheckKind::CharacteristicFunction,
        CheckKind::ConditionalLaw,
        CheckKind::Projection,
        CheckKind::Sonine,
        CheckKind::FlightD4,
        CheckKind::FlightMixture,
        CheckKind::FlightSampler,
        CheckKind::Telegraph,
        CheckKind::Eigenfunction,
        CheckKind::PgfOde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Counting => "counting",
            CheckKind::Mixture => "mixture",
            CheckKind::DiskMass => "disk_mass",
            CheckKind::MonteCarlo => "monte_carlo",
            CheckKind::CharacteristicFunction => "characteristic_function",
            CheckKind::ConditionalLaw => "conditional_law",
            CheckKind::Projection => "projection",
            CheckKind::Sonine => "sonine",
            CheckKind::FlightD4 => "flight_d4",
            CheckKind::FlightMixture => "flight_mixture",
            CheckKind::FlightSampler => "flight_sampler",
            CheckKind::Telegraph => "telegraph",
            CheckKind::Eigenfunction => "eigenfunction",
            CheckKind::PgfOde => "pgf_ode",
        }
    }

    fn seed_offset(self) -> u64 {
        CheckKind::ALL.iter().position(|&k| k == self).unwrap() as u64 + 1
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = CheckKind::ALL.iter().map(|k| k.name()).collect();
            Error::Domain(format!("unknown check `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

/// Parameters that replace the built-in fixtures of the selected checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Constant rate `lambda`; `Lambda = lambda t`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Finite-difference or Caputo grid step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
}

impl SuiteOverrides {
    fn is_empty(&self) -> bool {
        self == &SuiteOverrides::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Endpoints per Monte-Carlo goodness-of-fit run.
    pub mc_samples: usize,
    /// Samples for the conditional, characteristic-function and flight checks.
    pub aux_samples: usize,
    pub workers: usize,
    /// Empty selects every check.
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub overrides: SuiteOverrides,
    #[serde(default)]
    pub negative_control: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20240601,
            mc_samples: 1_000_000,
            aux_samples: 100_000,
            workers: 1,
            checks: Vec::new(),
            overrides: SuiteOverrides::default(),
            negative_control: false,
        }
    }
}

type Job = Box<dyn Fn() -> Result<Vec<CheckEntry>> + Send + Sync>;

struct Planner<'a> {
    cfg: &'a SuiteConfig,
    mode: Mode,
    jobs: Vec<Job>,
}

fn one(e: Result<CheckEntry>) -> Result<Vec<CheckEntry>> {
    e.map(|e| vec![e])
}

impl Planner<'_> {
    fn ov(&self) -> &SuiteOverrides {
        &self.cfg.overrides
    }

    fn alphas(&self, fixture: &[f64]) -> Vec<f64> {
        self.ov().alpha.map_or_else(|| fixture.to_vec(), |a| vec![a])
    }

    /// `(Lambda, c, t)` values: fixtures use `c = t = 1` so `Lambda = lambda`.
    fn lambdas(&self, fixture: &[f64]) -> Vec<(f64, f64, f64)> {
        let c = self.ov().c.unwrap_or(1.0);
        let t = self.ov().t.unwrap_or(1.0);
        match self.ov().lambda {
            Some(l) => vec![(l * t, c, t)],
            None => fixture.iter().map(|&b| (b, c, t)).collect(),
        }
    }

    fn seed(&self, kind: CheckKind, sub: u64) -> u64 {
        self.cfg
            .seed
            .wrapping_add(kind.seed_offset().wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .wrapping_add(sub.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }

    fn push(&mut self, job: impl Fn() -> Result<Vec<CheckEntry>> + Send + Sync + 'static) {
        self.jobs.push(Box::new(job));
    }

    fn plan(&mut self, kind: CheckKind) -> Result<()> {
        let mode = self.mode;
        match kind {
            CheckKind::Counting => self.push(move || checks::count_normalization(mode)),
            CheckKind::Mixture | CheckKind::DiskMass => {
                for alpha in self.alphas(&[0.5, 1.0]) {
                    for (big, c, t) in self.lambdas(&[0.5, 2.0]) {
                        if kind == CheckKind::Mixture {
                            self.push(move || one(checks::mixture_identity(alpha, big, c, t, mode)));
                        } else {
                            self.push(move || one(checks::disk_mass(alpha, big, c, t, mode)));
                        }
                    }
                }
            }
            CheckKind::MonteCarlo => {
                let cases: Vec<(f64, f64, f64, f64)> = if self.ov().is_empty() {
                    vec![(1.0, 1.0, 1.0, 1.0), (0.5, 1.0, 1.0, 1.0)]
                } else {
                    let o = self.ov();
                    vec![(o.alpha.unwrap_or(1.0), o.lambda.unwrap_or(1.0), o.c.unwrap_or(1.0), o.t.unwrap_or(1.0))]
                };
                for (i, (alpha, lambda, c, t)) in cases.into_iter().enumerate() {
                    let seed = self.seed(kind, i as u64);
                    let samples = self.cfg.mc_samples;
                    self.push(move || monte_carlo(alpha, lambda, c, t, samples, seed, mode));
                }
            }
            CheckKind::CharacteristicFunction => {
                let c = self.ov().c.unwrap_or(1.0);
                let t = self.ov().t.unwrap_or(1.0);
                for (i, (n, freq)) in [(2usize, (1.0, 0.0)), (3, (1.2, -1.6))].into_iter().enumerate() {
                    let seed = self.seed(kind, i as u64);
                    let samples = self.cfg.aux_samples;
                    self.push(move || {
                        let pts = conditional_points(n, c, t, samples, seed)?;
                        one(checks::empirical_cf(&pts, n, freq, c, t, mode))
                    });
                }
            }
            CheckKind::ConditionalLaw => {
                let c = self.ov().c.unwrap_or(1.0);
                let t = self.ov().t.unwrap_or(1.0);
                for n in 1..=3usize {
                    let seed = self.seed(kind, n as u64);
                    let samples = self.cfg.aux_samples;
                    self.push(move || {
                        let pts = conditional_points(n, c, t, samples, seed)?;
                        let radii: Vec<f64> = pts.iter().map(|p| p.0.hypot(p.1)).collect();
                        one(checks::conditional_law(n, &radii, c, t, mode))
                    });
                }
            }
            CheckKind::Projection => {
                let cases: Vec<(f64, f64)> = if self.ov().alpha.is_none() && self.ov().lambda.is_none() {
                    vec![(0.5, 1.0), (0.7, 1.0), (1.0, 2.0)]
                } else {
                    let t = self.ov().t.unwrap_or(1.0);
                    vec![(self.ov().alpha.unwrap_or(0.7), self.ov().lambda.unwrap_or(1.0) * t)]
                };
                let c = self.ov().c.unwrap_or(1.0);
                let t = self.ov().t.unwrap_or(1.0);
                for (alpha, big) in cases {
                    self.push(move || one(checks::projection_identity(alpha, big, c, t, mode)));
                }
            }
            CheckKind::Sonine => {
                for (big, c, t) in self.lambdas(&[1.0, 2.0]) {
                    self.push(move || one(checks::sonine_reduction(big, c, t, mode)));
                }
            }
            CheckKind::FlightD4 => {
                for (big, c, t) in self.lambdas(&[0.5, 1.0, 2.0]) {
                    self.push(move || one(checks::flight_d4(big, c, t, mode)));
                }
            }
            CheckKind::FlightMixture => {
                for d in [3u32, 4, 5] {
                    for (big, c, t) in self.lambdas(&[1.0]) {
                        self.push(move || one(checks::flight_mixture(d, big, c, t, mode)));
                    }
                }
            }
            CheckKind::FlightSampler => {
                let c = self.ov().c.unwrap_or(1.0);
                let t = self.ov().t.unwrap_or(1.0);
                let cases = [(3u32, 1usize, FlightVariant::Y), (4, 2, FlightVariant::X), (5, 2, FlightVariant::Y)];
                for (i, (d, n, variant)) in cases.into_iter().enumerate() {
                    let seed = self.seed(kind, i as u64);
                    let samples = self.cfg.aux_samples;
                    self.push(move || {
                        let radii = (0..samples)
                            .into_par_iter()
                            .map(|j| {
                                sample_flight_radius(d, n, c, t, variant, &mut substream(seed, j as u64))
                                    .map(|s| s.radius)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        one(checks::flight_sampler(d, n, variant, &radii, c * t, mode))
                    });
                }
            }
            CheckKind::Telegraph => {
                let lambda = self.ov().lambda.unwrap_or(1.0);
                let c = self.ov().c.unwrap_or(1.0);
                let t = self.ov().t.unwrap_or(2.0);
                let h = self.ov().h.unwrap_or(1.0 / 256.0);
                self.push(move || one(checks::telegraph_residual(lambda, c, t, h, mode)));
            }
            CheckKind::Eigenfunction | CheckKind::PgfOde => {
                let grid = match self.ov().h {
                    Some(h) => CaputoGrid::covering(1.0, (1.0 / h).round().max(1.0) as usize)?,
                    None => CaputoGrid::covering(1.0, 512)?,
                };
                let lambda = self.ov().lambda.unwrap_or(1.0);
                let c = self.ov().c.unwrap_or(1.0);
                let t = self.ov().t.unwrap_or(1.0);
                for alpha in self.alphas(&[0.5, 0.8, 1.0]) {
                    if kind == CheckKind::Eigenfunction {
                        self.push(move || one(checks::eigenfunction_residual(alpha, lambda, c, &grid, mode)));
                    } else {
                        self.push(move || {
                            let spec = FracPoissonSpec::new(alpha, RateFunction::constant(lambda)?)?;
                            one(checks::pgf_ode_residual(&spec, t, &grid, mode))
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn conditional_points(n: usize, c: f64, t: f64, samples: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    (0..samples)
        .into_par_iter()
        .map(|i| sample_conditional(c, t, n, &mut substream(seed, i as u64)).map(|tr| tr.endpoint))
        .collect()
}

/// Simulated endpoints at `(alpha, lambda)` against the classical law when
/// `alpha = 1` and the count-mixture series otherwise. The negative control
/// keeps the samples and lowers `alpha` in the reference law.
fn monte_carlo(
    alpha: f64,
    lambda: f64,
    c: f64,
    t: f64,
    samples: usize,
    seed: u64,
    mode: Mode,
) -> Result<Vec<CheckEntry>> {
    let spec = FracPoissonSpec::new(alpha, RateFunction::constant(lambda)?)?;
    let sampler = MotionSampler::new(MotionConfig::new(c, t, CountLaw::Fractional(spec))?)?;
    let pts = endpoints_par(&sampler, samples, seed)?;
    let big = lambda * t;
    let ref_alpha = if mode == Mode::NegativeControl { alpha - NEGATIVE_ALPHA_SHIFT } else { alpha };
    let label = format!("alpha={alpha},lambda={lambda},c={c},t={t}");
    let mut entries = if ref_alpha == 1.0 {
        let law = DensityRadialLaw {
            ct: c * t,
            singular_weight: (-big).exp(),
            density: move |r: f64| classical_density(lambda, c, t, r, 0.0),
        };
        checks::mc_gof(&pts, &law as &dyn RadialLaw, GOF_BINS, &label)?
    } else {
        let planar = PlanarLaw::new(ref_alpha, big, c, t)?;
        let law = DensityRadialLaw {
            ct: c * t,
            singular_weight: planar.singular_weight(),
            density: |r: f64| planar.mixture_density_radial(r),
        };
        checks::mc_gof(&pts, &law as &dyn RadialLaw, GOF_BINS, &label)?
    };
    if mode == Mode::NegativeControl {
        for e in &mut entries {
            e.details.insert("negative_control".into(), Value::from(true));
            e.details.insert("reference_alpha".into(), Value::from(ref_alpha));
        }
    }
    Ok(entries)
}

/// Runs the selected checks as independent jobs on a pool of `workers`
/// threads and assembles them in plan order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    if cfg.workers == 0 {
        return domain("worker count must be at least 1");
    }
    if cfg.mc_samples == 0 || cfg.aux_samples == 0 {
        return domain("sample counts must be positive");
    }
    let kinds: Vec<CheckKind> = if cfg.checks.is_empty() { CheckKind::ALL.to_vec() } else { cfg.checks.clone() };
    let mode = if cfg.negative_control { Mode::NegativeControl } else { Mode::Nominal };
    let mut planner = Planner { cfg, mode, jobs: Vec::new() };
    for kind in &kinds {
        planner.plan(*kind)?;
    }
    let jobs = planner.jobs;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    let results: Vec<Vec<CheckEntry>> = pool.install(|| jobs.par_iter().map(|j| j()).collect::<Result<_>>())?;

    let mut manifest = BTreeMap::new();
    manifest.insert("seed".into(), Value::from(cfg.seed));
    manifest.insert("mc_samples".into(), Value::from(cfg.mc_samples));
    manifest.insert("aux_samples".into(), Value::from(cfg.aux_samples));
    manifest.insert("negative_control".into(), Value::from(cfg.negative_control));
    manifest.insert("checks".into(), Value::from(kinds.iter().map(|k| k.name()).collect::<Vec<_>>()));
    if !cfg.overrides.is_empty() {
        manifest.insert("overrides".into(), serde_json::to_value(&cfg.overrides).expect("plain struct"));
    }
    manifest.insert("core_version".into(), Value::from(crate::VERSION));
    Ok(VerificationReport { manifest, checks: results.into_iter().flatten().collect() })
}
