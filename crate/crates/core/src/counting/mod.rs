//! Fractional Poisson counting laws with time-dependent rate.
//!
//! All three families share the shape `P{N = n} ∝ Lambda(t)^n / Gamma(.)`:
//!
//! * [`FracPoissonSpec`]: `Lambda^n / (Gamma(alpha n + 1) E_{alpha,1}(Lambda))`
//! * [`StateDependentSpec`]: the same with a state-dependent order `alpha_j`,
//!   renormalized by the sum over states
//! * [`FlightCountSpec`]: `Lambda^n / (Gamma((n+1)(d/2-1)+1) E_{d/2-1,d/2}(Lambda))`
//!
//! Probabilities are computed from log-terms so that normalizers far beyond
//! the `f64` range (e.g. `E_{0.3,1}(20)`) stay harmless.

mod rate;

pub use rate::{cumulative_rate, CustomRate, RateFunction, CUMULATIVE_ABS_TOL};

use crate::error::{domain, Error, Result};
use crate::specfun::{ln_gamma, ln_mittag_leffler, LogSum, MLParams, SeriesControl};
use crate::stream::UniformStream;
use serde::{Deserialize, Serialize};

/// Tail mass allowed beyond the last tabulated state.
pub const TABLE_TAIL_TOL: f64 = 1e-16;
/// Hard cap on the number of tabulated states.
pub const MAX_STATES: usize = 10_000_000;

/// Order `alpha` in (0, 1] together with a rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FracPoissonSpec {
    pub alpha: f64,
    pub rate: RateFunction,
}

impl FracPoissonSpec {
    pub fn new(alpha: f64, rate: RateFunction) -> Result<Self> {
        let s = Self { alpha, rate };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.alpha)?;
        self.rate.validate()
    }

    fn ml(&self) -> MLParams {
        MLParams { alpha: self.alpha, beta: 1.0 }
    }

    fn log_term(&self, ln_big_lambda: f64, n: usize) -> f64 {
        let nf = n as f64;
        nf * ln_big_lambda - ln_gamma(self.alpha * nf + 1.0)
    }

    /// Table of the law at time `t`.
    pub fn distribution(&self, t: f64) -> Result<CountDistribution> {
        self.validate()?;
        let big = self.rate.cumulative(t)?;
        if big == 0.0 {
            return Ok(CountDistribution::degenerate());
        }
        let ln_norm = ln_mittag_leffler(self.ml(), big, &SeriesControl::default())?;
        let ln_l = big.ln();
        CountDistribution::from_log_terms(|n| self.log_term(ln_l, n), Some(ln_norm), 0, big)
    }
}

/// Orders `alpha_j` per state; states beyond the list reuse the last order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDependentSpec {
    pub alphas: Vec<f64>,
    pub rate: RateFunction,
}

impl StateDependentSpec {
    pub fn new(alphas: Vec<f64>, rate: RateFunction) -> Result<Self> {
        let s = Self { alphas, rate };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return domain("state-dependent spec needs at least one order");
        }
        for &a in &self.alphas {
            check_order(a)?;
        }
        self.rate.validate()
    }

    pub fn alpha_at(&self, j: usize) -> f64 {
        self.alphas[j.min(self.alphas.len() - 1)]
    }

    pub fn distribution(&self, t: f64) -> Result<CountDistribution> {
        self.validate()?;
        let big = self.rate.cumulative(t)?;
        if big == 0.0 {
            return Ok(CountDistribution::degenerate());
        }
        let ctl = SeriesControl::default();
        let ln_ml = self
            .alphas
            .iter()
            .map(|&a| ln_mittag_leffler(MLParams { alpha: a, beta: 1.0 }, big, &ctl))
            .collect::<Result<Vec<_>>>()?;
        let ln_l = big.ln();
        let last = self.alphas.len() - 1;
        CountDistribution::from_log_terms(
            |j| {
                let a = self.alpha_at(j);
                let jf = j as f64;
                jf * ln_l - ln_gamma(a * jf + 1.0) - ln_ml[j.min(last)]
            },
            None,
            last,
            big,
        )
    }
}

/// Count law adapted to the projected random flights of dimension `d >= 3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlightCountSpec {
    pub d: u32,
    pub rate: RateFunction,
}

impl FlightCountSpec {
    pub fn new(d: u32, rate: RateFunction) -> Result<Self> {
        let s = Self { d, rate };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return domain(format!("flight dimension must be >= 3, got {}", self.d));
        }
        self.rate.validate()
    }

    /// `d/2 - 1`.
    pub fn half_dim_minus_one(&self) -> f64 {
        self.d as f64 / 2.0 - 1.0
    }

    fn ml(&self) -> MLParams {
        MLParams { alpha: self.half_dim_minus_one(), beta: self.d as f64 / 2.0 }
    }

    fn log_term(&self, ln_big_lambda: f64, n: usize) -> f64 {
        let nf = n as f64;
        nf * ln_big_lambda - ln_gamma((nf + 1.0) * self.half_dim_minus_one() + 1.0)
    }

    pub fn distribution(&self, t: f64) -> Result<CountDistribution> {
        self.validate()?;
        let big = self.rate.cumulative(t)?;
        if big == 0.0 {
            return Ok(CountDistribution::degenerate());
        }
        let ln_norm = ln_mittag_leffler(self.ml(), big, &SeriesControl::default())?;
        let ln_l = big.ln();
        CountDistribution::from_log_terms(|n| self.log_term(ln_l, n), Some(ln_norm), 0, big)
    }
}

/// Any of the three count laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CountLaw {
    Fractional(FracPoissonSpec),
    StateDependent(StateDependentSpec),
    Flight(FlightCountSpec),
}

impl CountLaw {
    pub fn distribution(&self, t: f64) -> Result<CountDistribution> {
        match self {
            CountLaw::Fractional(s) => s.distribution(t),
            CountLaw::StateDependent(s) => s.distribution(t),
            CountLaw::Flight(s) => s.distribution(t),
        }
    }

    pub fn rate(&self) -> &RateFunction {
        match self {
            CountLaw::Fractional(s) => &s.rate,
            CountLaw::StateDependent(s) => &s.rate,
            CountLaw::Flight(s) => &s.rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CountLaw::Fractional(s) => s.validate(),
            CountLaw::StateDependent(s) => s.validate(),
            CountLaw::Flight(s) => s.validate(),
        }
    }
}

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("order alpha must lie in (0, 1], got {alpha}"));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("time must be finite and > 0, got {t}"));
    }
    Ok(())
}

/// Tabulated pmf and cdf of a count law at a fixed time.
///
/// States run from 0 to the first index after which the (geometric) tail
/// bound drops below [`TABLE_TAIL_TOL`] of the mass.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    big_lambda: f64,
}

impl CountDistribution {
    fn degenerate() -> Self {
        Self { pmf: vec![1.0], cdf: vec![1.0], big_lambda: 0.0 }
    }

    /// `log_term(n)` must have nonincreasing ratios for `n > monotone_from`.
    /// With `ln_norm = None` the table is normalized by its own sum.
    fn from_log_terms(
        log_term: impl Fn(usize) -> f64,
        ln_norm: Option<f64>,
        monotone_from: usize,
        big_lambda: f64,
    ) -> Result<Self> {
        let mut logs: Vec<f64> = Vec::new();
        let mut acc = LogSum::new();
        let ln_tol = TABLE_TAIL_TOL.ln();
        loop {
            let n = logs.len();
            if n >= MAX_STATES {
                return Err(Error::Numeric(format!(
                    "count table exceeded {MAX_STATES} states before its tail became negligible"
                )));
            }
            let lt = log_term(n);
            if !lt.is_finite() {
                return Err(Error::Numeric(format!("log-term of state {n} is {lt}")));
            }
            acc.push(lt);
            logs.push(lt);
            if n > monotone_from + 1 {
                let prev = logs[n - 1];
                if lt < prev {
                    let ratio = (lt - prev).exp();
                    let tail = lt + (ratio / (1.0 - ratio)).ln();
                    if tail - acc.ln() < ln_tol {
                        break;
                    }
                }
            }
        }
        let ln_norm = ln_norm.unwrap_or_else(|| acc.ln());
        let pmf: Vec<f64> = logs.iter().map(|&l| (l - ln_norm).exp()).collect();
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut run = 0.0;
        for &p in &pmf {
            run += p;
            cdf.push(run);
        }
        Ok(Self { pmf, cdf, big_lambda })
    }

    /// `P{N = n}`; zero beyond the table.
    pub fn pmf(&self, n: usize) -> f64 {
        self.pmf.get(n).copied().unwrap_or(0.0)
    }

    pub fn pmf_table(&self) -> &[f64] {
        &self.pmf
    }

    pub fn cdf_table(&self) -> &[f64] {
        &self.cdf
    }

    /// Cumulative rate `Lambda(t)` the table was built for.
    pub fn big_lambda(&self) -> f64 {
        self.big_lambda
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    /// Inverse-cdf draw: smallest `n` with `cdf(n) >= u`.
    pub fn quantile(&self, u: f64) -> Result<usize> {
        if !(u > 0.0 && u < 1.0) {
            return domain(format!("uniform must lie in (0,1), got {u}"));
        }
        let n = self.cdf.partition_point(|&c| c < u);
        if n < self.cdf.len() {
            return Ok(n);
        }
        // u beyond the last cumulative value: allowed only inside the
        // truncated tail plus rounding
        let missing = 1.0 - self.cdf[self.cdf.len() - 1];
        if missing <= 1e-12 {
            Ok(self.cdf.len() - 1)
        } else {
            Err(Error::Numeric(format!("uniform {u} not covered by the count table (missing mass {missing:e})")))
        }
    }
}

/// `P{N_alpha(t) = n} = Lambda^n / (Gamma(alpha n + 1) E_{alpha,1}(Lambda))`.
pub fn pmf(spec: &FracPoissonSpec, t: f64, n: usize) -> Result<f64> {
    spec.validate()?;
    check_time(t)?;
    let big = spec.rate.cumulative(t)?;
    if big == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let ln_norm = ln_mittag_leffler(spec.ml(), big, &SeriesControl::default())?;
    Ok((spec.log_term(big.ln(), n) - ln_norm).exp())
}

/// Weighted Poisson pmf `w(n) p(n) / E[w(N)]` for `N ~ Poisson(lambda_t)`.
pub fn weighted_pmf(weight: impl Fn(usize) -> f64, lambda_t: f64, n: usize) -> Result<f64> {
    weighted_pmf_ln(
        |k| {
            let w = weight(k);
            if w < 0.0 || w.is_nan() {
                f64::NAN
            } else {
                w.ln()
            }
        },
        lambda_t,
        n,
    )
}

/// As [`weighted_pmf`] with the weight supplied as `ln w(n)` (`-inf` for
/// zero weight), which keeps rapidly growing weights such as
/// `n!/Gamma(alpha n + 1)` finite.
///
/// The normalizer is summed until `n > lambda_t` and sixteen consecutive
/// terms have each decreased below 1e-17 of the partial sum.
pub fn weighted_pmf_ln(ln_weight: impl Fn(usize) -> f64, lambda_t: f64, n: usize) -> Result<f64> {
    if !(lambda_t >= 0.0) || !lambda_t.is_finite() {
        return domain(format!("Poisson mean must be finite and >= 0, got {lambda_t}"));
    }
    let ln_l = lambda_t.ln();
    let log_term = |k: usize| -> Result<f64> {
        let lw = ln_weight(k);
        if lw.is_nan() || lw == f64::INFINITY {
            return domain(format!("weight at {k} is not a finite nonnegative number"));
        }
        let lp = if lambda_t == 0.0 {
            if k == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            k as f64 * ln_l - lambda_t - ln_gamma(k as f64 + 1.0)
        };
        Ok(lw + lp)
    };
    let mut acc = LogSum::new();
    let mut prev = f64::INFINITY;
    let mut quiet = 0usize;
    let ln_tol = 1e-17f64.ln();
    let mut converged = false;
    for k in 0..MAX_STATES {
        let lt = log_term(k)?;
        acc.push(lt);
        let small = lt == f64::NEG_INFINITY || lt - acc.ln() < ln_tol;
        if k as f64 > lambda_t && lt <= prev && small {
            quiet += 1;
            if quiet >= 16 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
        prev = lt;
    }
    let ln_norm = acc.ln();
    if !converged || !ln_norm.is_finite() {
        return domain("weighted Poisson normalizer is zero or divergent");
    }
    Ok((log_term(n)? - ln_norm).exp())
}

/// Log-weight `ln(n! / Gamma(alpha n + 1))` turning the weighted Poisson law
/// into the fractional one.
pub fn fractional_log_weight(alpha: f64) -> impl Fn(usize) -> f64 {
    move |n| {
        let nf = n as f64;
        ln_gamma(nf + 1.0) - ln_gamma(alpha * nf + 1.0)
    }
}

/// State-dependent pmf at state `j`.
pub fn state_dependent_pmf(spec: &StateDependentSpec, t: f64, j: usize) -> Result<f64> {
    check_time(t)?;
    Ok(spec.distribution(t)?.pmf(j))
}

/// `Lambda^n / (Gamma((n+1)(d/2-1)+1) E_{d/2-1,d/2}(Lambda))`.
pub fn flight_count_pmf(spec: &FlightCountSpec, t: f64, n: usize) -> Result<f64> {
    spec.validate()?;
    check_time(t)?;
    let big = spec.rate.cumulative(t)?;
    if big == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let ln_norm = ln_mittag_leffler(spec.ml(), big, &SeriesControl::default())?;
    Ok((spec.log_term(big.ln(), n) - ln_norm).exp())
}

/// Probability generating function `E_{alpha,1}(u Lambda) / E_{alpha,1}(Lambda)`.
pub fn pgf(spec: &FracPoissonSpec, t: f64, u: f64) -> Result<f64> {
    spec.validate()?;
    check_time(t)?;
    if !(0.0..=1.0).contains(&u) {
        return domain(format!("pgf argument must lie in [0,1], got {u}"));
    }
    let big = spec.rate.cumulative(t)?;
    pgf_from_cumulative(spec.alpha, big, u)
}

/// The pgf expressed through `Lambda` directly.
pub fn pgf_from_cumulative(alpha: f64, big_lambda: f64, u: f64) -> Result<f64> {
    let ctl = SeriesControl::default();
    let p = MLParams::new(alpha, 1.0)?;
    let num = ln_mittag_leffler(p, u * big_lambda, &ctl)?;
    let den = ln_mittag_leffler(p, big_lambda, &ctl)?;
    Ok((num - den).exp())
}

/// One inverse-cdf draw; consumes exactly one uniform.
pub fn sample_count(dist: &CountDistribution, uniforms: &mut impl UniformStream) -> Result<usize> {
    dist.quantile(uniforms.next_uniform())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{substream, FixedStream};

    fn frac(alpha: f64, big: f64) -> FracPoissonSpec {
        FracPoissonSpec::new(alpha, RateFunction::constant(big).unwrap()).unwrap()
    }

    #[test]
    fn poisson_case() {
        let p = pmf(&frac(1.0, 2.0), 1.0, 0).unwrap();
        assert!((p - (-2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn zero_state_is_reciprocal_ml() {
        let s = frac(0.5, 1.0);
        assert!((pmf(&s, 1.0, 0).unwrap() - 1.0 / 5.008_980_080_762_283).abs() < 1e-14);
    }

    #[test]
    fn half_order_first_state() {
        let gamma_15 = std::f64::consts::PI.sqrt() / 2.0;
        let expected = 1.0 / (gamma_15 * 5.008_980_080_762_283);
        assert!((pmf(&frac(0.5, 1.0), 1.0, 1).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.2253).abs() < 1e-4);
    }

    #[test]
    fn weighted_unit_and_indicator() {
        let p = weighted_pmf(|_| 1.0, 1.5, 3).unwrap();
        let poisson = (-1.5f64).exp() * 1.5f64.powi(3) / 6.0;
        assert!((p - poisson).abs() < 1e-15);
        let p = weighted_pmf(|n| if n <= 1 { 1.0 } else { 0.0 }, 1.0, 0).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weighted_reproduces_fractional() {
        let w = fractional_log_weight(0.5);
        let a = weighted_pmf_ln(&w, 1.0, 2).unwrap();
        let b = pmf(&frac(0.5, 1.0), 1.0, 2).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn weighted_rejects_degenerate_weights() {
        assert!(weighted_pmf(|_| 0.0, 1.0, 0).is_err());
        assert!(weighted_pmf(|_| -1.0, 1.0, 0).is_err());
        // n!^2 weights make the normalizer diverge
        assert!(weighted_pmf_ln(|n| 2.0 * ln_gamma(n as f64 + 1.0), 1.0, 0).is_err());
    }

    #[test]
    fn state_dependent_reductions() {
        let rate = RateFunction::constant(1.3).unwrap();
        let sd = StateDependentSpec::new(vec![0.6], rate.clone()).unwrap();
        let fr = FracPoissonSpec::new(0.6, rate.clone()).unwrap();
        for j in 0..6 {
            let a = state_dependent_pmf(&sd, 1.0, j).unwrap();
            let b = pmf(&fr, 1.0, j).unwrap();
            assert!((a - b).abs() < 1e-14, "j={j}");
        }
        let sd1 = StateDependentSpec::new(vec![1.0, 1.0, 1.0], rate).unwrap();
        for j in 0..6 {
            let a = state_dependent_pmf(&sd1, 1.0, j).unwrap();
            let b = (-1.3f64).exp() * 1.3f64.powi(j as i32) / crate::specfun::gamma_pos(j as f64 + 1.0).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn state_dependent_brute_force() {
        // alpha_0 = 1, alpha_j = 0.5 otherwise, Lambda = 1: 200-term direct sum
        let e1 = std::f64::consts::E;
        let e05 = 5.008_980_080_762_283;
        let term = |j: usize| -> f64 {
            if j == 0 {
                1.0 / e1
            } else {
                1.0 / crate::specfun::gamma_pos(0.5 * j as f64 + 1.0).unwrap() / e05
            }
        };
        let norm: f64 = (0..200).map(term).sum();
        let spec = StateDependentSpec::new(vec![1.0, 0.5], RateFunction::constant(1.0).unwrap()).unwrap();
        let p0 = state_dependent_pmf(&spec, 1.0, 0).unwrap();
        assert!((p0 - term(0) / norm).abs() < 1e-14);
    }

    #[test]
    fn flight_counts() {
        let s = FlightCountSpec::new(4, RateFunction::constant(1.0).unwrap()).unwrap();
        let p0 = flight_count_pmf(&s, 1.0, 0).unwrap();
        assert!((p0 - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-14);
        let total: f64 = s.distribution(1.0).unwrap().pmf_table().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!(FlightCountSpec::new(2, RateFunction::constant(1.0).unwrap()).is_err());
    }

    #[test]
    fn pgf_values() {
        let s = frac(0.7, 1.8);
        assert!((pgf(&s, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((pgf(&s, 1.0, 0.0).unwrap() - pmf(&s, 1.0, 0).unwrap()).abs() < 1e-15);
        assert!((pgf(&frac(1.0, 2.0), 1.0, 0.5).unwrap() - (-1f64).exp()).abs() < 1e-14);
        assert!(pgf(&s, 1.0, 1.5).is_err());
    }

    #[test]
    fn quantile_edges() {
        let d = frac(0.5, 1.0).distribution(1.0).unwrap();
        let p0 = d.pmf(0);
        let mut s = FixedStream::new(vec![0.5 * p0, p0 * 1.0001, 1.0 - 1e-16]);
        assert_eq!(sample_count(&d, &mut s).unwrap(), 0);
        assert_eq!(sample_count(&d, &mut s).unwrap(), 1);
        assert!(sample_count(&d, &mut s).is_ok());
        assert_eq!(s.consumed(), 3);
        assert!(d.quantile(0.0).is_err());
    }

    #[test]
    fn empty_rate_is_degenerate() {
        let d = frac(0.5, 0.0).distribution(1.0).unwrap();
        assert_eq!(d.pmf_table(), &[1.0]);
        assert_eq!(d.quantile(0.999).unwrap(), 0);
    }

    #[test]
    fn poisson_sample_mean() {
        let d = frac(1.0, 2.0).distribution(1.0).unwrap();
        let mut rng = substream(11, 0);
        let n = 1_000_000;
        let total: usize = (0..n).map(|_| sample_count(&d, &mut rng).unwrap()).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 2.0).abs() < 3.0 * 2f64.sqrt() / 1e3, "mean={mean}");
    }

    #[test]
    fn huge_normalizer_is_handled() {
        let d = frac(0.3, 20.0).distribution(1.0).unwrap();
        let total: f64 = d.pmf_table().iter().sum();
        assert!((total - 1.0).abs() < 1e-10, "total={total}");
        assert!(d.pmf_table().len() > 70_000);
    }
}
