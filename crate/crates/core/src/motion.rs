//! Samplers for the constant-speed planar motion and for the radial law of
//! the projected random flights.
//!
//! A particle leaves the origin at speed `c` with a uniform direction and, at
//! each of its `n` change instants, picks a fresh uniform direction. The
//! endpoint at time `t` is
//!
//! ```text
//! X(t) = c sum_{j=1}^{n+1} (s_j - s_{j-1}) cos(theta_j)
//! Y(t) = c sum_{j=1}^{n+1} (s_j - s_{j-1}) sin(theta_j)
//! ```
//!
//! with `s_0 = 0`, `s_{n+1} = t`.

use crate::counting::{CountDistribution, CountLaw};
use crate::error::{domain, Result};
use crate::stream::{substream, UniformStream};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Law of the change instants given their number.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstantLaw {
    /// Uniform order statistics on `(0, t)`. This is the law under which the
    /// conditional densities and the unconditional mixture hold.
    #[default]
    Uniform,
    /// I.i.d. instants with density `lambda(s) / Lambda(t)`, sorted.
    /// Exploratory only: the resulting endpoint law is not the mixture law.
    RateProportional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionConfig {
    pub c: f64,
    pub t: f64,
    pub count: CountLaw,
    #[serde(default)]
    pub instants: InstantLaw,
}

impl MotionConfig {
    pub fn new(c: f64, t: f64, count: CountLaw) -> Result<Self> {
        let cfg = Self { c, t, count, instants: InstantLaw::Uniform };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_speed_time(self.c, self.t)?;
        self.count.validate()
    }

    pub fn radius(&self) -> f64 {
        self.c * self.t
    }
}

pub(crate) fn check_speed_time(c: f64, t: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("speed must be finite and > 0, got {c}"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("time horizon must be finite and > 0, got {t}"));
    }
    Ok(())
}

/// Change instants, headings and endpoint of one path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `s_1 < ... < s_n` in `(0, t)`.
    pub change_times: Vec<f64>,
    /// `theta_1 .. theta_{n+1}` in `[0, 2 pi)`.
    pub angles: Vec<f64>,
    pub endpoint: (f64, f64),
}

impl Trajectory {
    /// Builds a trajectory from explicit instants and headings.
    pub fn from_parts(c: f64, t: f64, change_times: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        check_speed_time(c, t)?;
        if angles.len() != change_times.len() + 1 {
            return domain(format!(
                "{} change instants need {} headings, got {}",
                change_times.len(),
                change_times.len() + 1,
                angles.len()
            ));
        }
        let mut prev = 0.0;
        for &s in &change_times {
            if !(s >= prev && s <= t) {
                return domain(format!("change instants must be sorted inside (0, t), got {s}"));
            }
            prev = s;
        }
        let endpoint = endpoint_of(c, t, &change_times, &angles);
        Ok(Self { change_times, angles, endpoint })
    }

    pub fn changes(&self) -> usize {
        self.change_times.len()
    }

    /// Re-evaluates the endpoint from the stored instants and headings.
    pub fn recompute_endpoint(&self, c: f64, t: f64) -> (f64, f64) {
        endpoint_of(c, t, &self.change_times, &self.angles)
    }
}

fn endpoint_of(c: f64, t: f64, times: &[f64], angles: &[f64]) -> (f64, f64) {
    let mut x = 0.0;
    let mut y = 0.0;
    let mut prev = 0.0;
    for (j, &theta) in angles.iter().enumerate() {
        let next = times.get(j).copied().unwrap_or(t);
        let len = next - prev;
        let (s, co) = theta.sin_cos();
        x += len * co;
        y += len * s;
        prev = next;
    }
    (c * x, c * y)
}

/// Endpoint record of a batch run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarSample {
    pub x: f64,
    pub y: f64,
    pub n: usize,
    pub is_singular: bool,
}

impl PlanarSample {
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }
}

/// Trajectory sampler with the count table precomputed.
#[derive(Debug, Clone)]
pub struct MotionSampler {
    cfg: MotionConfig,
    counts: CountDistribution,
    big_lambda: f64,
}

impl MotionSampler {
    pub fn new(cfg: MotionConfig) -> Result<Self> {
        cfg.validate()?;
        let counts = cfg.count.distribution(cfg.t)?;
        let big_lambda = cfg.count.rate().cumulative(cfg.t)?;
        Ok(Self { cfg, counts, big_lambda })
    }

    pub fn config(&self) -> &MotionConfig {
        &self.cfg
    }

    pub fn counts(&self) -> &CountDistribution {
        &self.counts
    }

    /// Draws `n`, then `n` instants, then `n + 1` headings:
    /// `1 + n + (n + 1)` uniforms in total.
    pub fn sample(&self, uniforms: &mut impl UniformStream) -> Result<Trajectory> {
        let n = crate::counting::sample_count(&self.counts, uniforms)?;
        self.sample_given_count(n, uniforms)
    }

    /// Path conditioned on exactly `n` changes; consumes `2n + 1` uniforms.
    pub fn sample_given_count(&self, n: usize, uniforms: &mut impl UniformStream) -> Result<Trajectory> {
        let t = self.cfg.t;
        let mut times: Vec<f64> = match self.cfg.instants {
            InstantLaw::Uniform => (0..n).map(|_| t * uniforms.next_uniform()).collect(),
            InstantLaw::RateProportional => (0..n)
                .map(|_| {
                    let u = uniforms.next_uniform();
                    self.cfg.count.rate().inverse_cumulative(u * self.big_lambda, t)
                })
                .collect::<Result<_>>()?,
        };
        times.sort_by(f64::total_cmp);
        let angles: Vec<f64> = (0..=n).map(|_| TAU * uniforms.next_uniform()).collect();
        let endpoint = endpoint_of(self.cfg.c, t, &times, &angles);
        Ok(Trajectory { change_times: times, angles, endpoint })
    }
}

/// One path of the motion described by `cfg`.
///
/// Builds the count table on every call; use [`MotionSampler`] for repeated draws.
pub fn sample_trajectory(cfg: &MotionConfig, uniforms: &mut impl UniformStream) -> Result<Trajectory> {
    MotionSampler::new(cfg.clone())?.sample(uniforms)
}

/// Conditional path with `n` changes and uniform instants, no count law needed.
pub fn sample_conditional(c: f64, t: f64, n: usize, uniforms: &mut impl UniformStream) -> Result<Trajectory> {
    check_speed_time(c, t)?;
    let mut times: Vec<f64> = (0..n).map(|_| t * uniforms.next_uniform()).collect();
    times.sort_by(f64::total_cmp);
    let angles: Vec<f64> = (0..=n).map(|_| TAU * uniforms.next_uniform()).collect();
    let endpoint = endpoint_of(c, t, &times, &angles);
    Ok(Trajectory { change_times: times, angles, endpoint })
}

/// `n_samples` endpoints; sample `i` uses substream `(seed, i)` so the output
/// is identical for every `workers >= 1`.
pub fn batch_endpoints(cfg: &MotionConfig, n_samples: usize, seed: u64, workers: usize) -> Result<Vec<PlanarSample>> {
    if n_samples == 0 {
        return domain("batch needs at least one sample");
    }
    if workers == 0 {
        return domain("worker count must be at least 1");
    }
    let sampler = MotionSampler::new(cfg.clone())?;
    if workers == 1 {
        return (0..n_samples).map(|i| sampler.endpoint(seed, i)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::error::Error::Numeric(format!("thread pool: {e}")))?;
    pool.install(|| endpoints_par(&sampler, n_samples, seed))
}

/// Same draws as [`batch_endpoints`], on whatever rayon pool is current.
pub(crate) fn endpoints_par(sampler: &MotionSampler, n_samples: usize, seed: u64) -> Result<Vec<PlanarSample>> {
    (0..n_samples).into_par_iter().map(|i| sampler.endpoint(seed, i)).collect()
}

impl MotionSampler {
    fn endpoint(&self, seed: u64, i: usize) -> Result<PlanarSample> {
        let mut s = substream(seed, i as u64);
        let tr = self.sample(&mut s)?;
        let n = tr.changes();
        Ok(PlanarSample { x: tr.endpoint.0, y: tr.endpoint.1, n, is_singular: n == 0 })
    }
}

/// Which projected flight a radial sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlightVariant {
    X,
    Y,
}

/// Exponent `a` of the radial law `a (c²t² - r²)^(a-1) / (pi (ct)^(2a))`.
///
/// Y-projection: `a = (n+1)(d/2 - 1)`; X-projection: `a = ((n+1)(d-1) - 1)/2`.
pub fn flight_exponent(d: u32, n: usize, variant: FlightVariant) -> Result<f64> {
    if d < 3 {
        return domain(format!("flight dimension must be >= 3, got {d}"));
    }
    let n1 = n as f64 + 1.0;
    let d = d as f64;
    Ok(match variant {
        FlightVariant::Y => n1 * (d / 2.0 - 1.0),
        FlightVariant::X => (n1 * (d - 1.0) - 1.0) / 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlightSample {
    pub radius: f64,
    pub angle: f64,
    pub n: usize,
    pub d: u32,
    pub variant: FlightVariant,
}

/// Inverse cdf of the radial law: `r = ct sqrt(1 - v^(1/a))`, `v` in `[0, 1]`.
pub fn flight_radius_from_uniform(a: f64, ct: f64, v: f64) -> f64 {
    ct * (1.0 - v.powf(1.0 / a)).max(0.0).sqrt()
}

/// Radius and angle of a projected flight with `n` changes; two uniforms.
pub fn sample_flight_radius(
    d: u32,
    n: usize,
    c: f64,
    t: f64,
    variant: FlightVariant,
    uniforms: &mut impl UniformStream,
) -> Result<FlightSample> {
    check_speed_time(c, t)?;
    let a = flight_exponent(d, n, variant)?;
    let radius = flight_radius_from_uniform(a, c * t, uniforms.next_uniform());
    let angle = TAU * uniforms.next_uniform();
    Ok(FlightSample { radius, angle, n, d, variant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{FracPoissonSpec, RateFunction};
    use crate::stream::FixedStream;
    use std::f64::consts::PI;

    fn cfg(alpha: f64, lambda: f64) -> MotionConfig {
        let spec = FracPoissonSpec::new(alpha, RateFunction::constant(lambda).unwrap()).unwrap();
        MotionConfig::new(1.0, 1.0, CountLaw::Fractional(spec)).unwrap()
    }

    #[test]
    fn no_change_lands_on_circle() {
        let tr = Trajectory::from_parts(2.0, 1.5, vec![], vec![1.1]).unwrap();
        let r2 = tr.endpoint.0.powi(2) + tr.endpoint.1.powi(2);
        assert!((r2 - 9.0).abs() < 1e-12 * 9.0);
    }

    #[test]
    fn out_and_back() {
        let tr = Trajectory::from_parts(1.0, 2.0, vec![1.0], vec![0.0, PI]).unwrap();
        assert!(tr.endpoint.0.abs() < 1e-15 && tr.endpoint.1.abs() < 1e-15);
    }

    #[test]
    fn from_parts_validates() {
        assert!(Trajectory::from_parts(1.0, 1.0, vec![0.5], vec![0.0]).is_err());
        assert!(Trajectory::from_parts(1.0, 1.0, vec![0.6, 0.5], vec![0.0, 0.0, 0.0]).is_err());
        assert!(Trajectory::from_parts(0.0, 1.0, vec![], vec![0.0]).is_err());
    }

    #[test]
    fn uniform_consumption() {
        let s = MotionSampler::new(cfg(1.0, 1.0)).unwrap();
        let p0 = s.counts().pmf(0);
        let p1 = s.counts().pmf(1);
        // first uniform selects n = 1, then 1 instant and 2 headings
        let mut u = FixedStream::new(vec![p0 + 0.5 * p1, 0.5, 0.0001, 0.5]);
        let tr = s.sample(&mut u).unwrap();
        assert_eq!(tr.changes(), 1);
        assert_eq!(u.consumed(), 4);
        assert!((tr.change_times[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_rate_is_all_singular() {
        let out = batch_endpoints(&cfg(0.7, 0.0), 200, 3, 2).unwrap();
        assert!(out.iter().all(|s| s.is_singular && s.n == 0));
    }

    #[test]
    fn batch_is_worker_invariant() {
        let c = cfg(0.5, 2.0);
        let a = batch_endpoints(&c, 3000, 99, 1).unwrap();
        let b = batch_endpoints(&c, 3000, 99, 4).unwrap();
        let again = batch_endpoints(&c, 3000, 99, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, again);
        assert!(batch_endpoints(&c, 0, 1, 1).is_err());
    }

    #[test]
    fn flight_radius_endpoints() {
        assert_eq!(flight_radius_from_uniform(2.0, 3.0, 1.0), 0.0);
        assert_eq!(flight_radius_from_uniform(2.0, 3.0, 0.0), 3.0);
        assert_eq!(flight_exponent(4, 0, FlightVariant::Y).unwrap(), 1.0);
        assert_eq!(flight_exponent(3, 1, FlightVariant::X).unwrap(), 1.5);
        assert!(flight_exponent(2, 0, FlightVariant::Y).is_err());
    }

    #[test]
    fn rate_proportional_instants_follow_rate() {
        let spec = FracPoissonSpec::new(1.0, RateFunction::power(3.0, 2.0).unwrap()).unwrap();
        let mut c = MotionConfig::new(1.0, 1.0, CountLaw::Fractional(spec)).unwrap();
        c.instants = InstantLaw::RateProportional;
        let s = MotionSampler::new(c).unwrap();
        // Lambda(s) = s^3: the median instant sits at 0.5^(1/3)
        let mut u = FixedStream::new(vec![0.5, 0.5, 0.5]);
        let tr = s.sample_given_count(1, &mut u).unwrap();
        assert!((tr.change_times[0] - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }
}
