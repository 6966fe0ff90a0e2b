//! Closed-form densities of the planar motion, its line projection and the
//! projected random flights.
//!
//! Notation: `C = c²t²`, `w = sqrt(C - r²)` on the open disk `r < ct`,
//! `Lambda = Lambda(t)`, `E = E_{alpha,1}(Lambda)`.

use crate::counting::{CountDistribution, FlightCountSpec, FracPoissonSpec};
use crate::error::{domain, Result};
use crate::motion::{check_speed_time, flight_exponent, FlightVariant};
use crate::quadrature::integrate;
use crate::specfun::{
    ln_gamma, ln_mittag_leffler, ln_wright_series, sum_log_series, MLParams, SeriesControl, WrightSeriesSpec,
};
use std::f64::consts::{FRAC_PI_2, PI};

/// Relative cutoff of the mixture-series evaluators.
pub const MIXTURE_REL_TOL: f64 = 1e-14;
/// Term cap of the mixture-series evaluators.
pub const MIXTURE_MAX_TERMS: usize = 500;

fn check_radius(r: f64, ct: f64) -> Result<()> {
    if !(r >= 0.0 && r < ct) {
        return domain(format!("radius {r} outside the open disk of radius {ct}"));
    }
    Ok(())
}

/// Density of the endpoint given `n >= 1` changes:
/// `n (C - r²)^(n/2 - 1) / (2 pi (ct)^n)`.
pub fn conditional_density(n: usize, c: f64, t: f64, r: f64) -> Result<f64> {
    check_speed_time(c, t)?;
    if n == 0 {
        return domain("no change of direction: the law is singular on the circle");
    }
    let ct = c * t;
    check_radius(r, ct)?;
    let nf = n as f64;
    let w2 = (ct - r) * (ct + r);
    Ok(nf * (w2 / (ct * ct)).powf(0.5 * nf - 1.0) / (2.0 * PI * ct * ct))
}

/// Radial cdf of the conditional law: `1 - (1 - r²/C)^(n/2)`.
pub fn conditional_radial_cdf(n: usize, c: f64, t: f64, r: f64) -> Result<f64> {
    check_speed_time(c, t)?;
    if n == 0 {
        return domain("no change of direction: the law is singular on the circle");
    }
    let ct = c * t;
    if r <= 0.0 {
        return Ok(0.0);
    }
    if r >= ct {
        return Ok(1.0);
    }
    let q = (ct - r) * (ct + r) / (ct * ct);
    Ok(-(0.5 * n as f64 * q.ln()).exp_m1())
}

/// Characteristic function of the endpoint given `n` changes at frequency
/// `(a, b)`: `2^(n/2) Gamma(n/2 + 1) J_{n/2}(ct rho) / (ct rho)^(n/2)`,
/// `rho = |(a, b)|`. Requires `ct rho <= 50`.
pub fn conditional_characteristic_function(n: usize, c: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    check_speed_time(c, t)?;
    let x = c * t * a.hypot(b);
    if x == 0.0 {
        return Ok(1.0);
    }
    let nu = 0.5 * n as f64;
    let j = crate::specfun::bessel_j(nu, x, &SeriesControl::default())?;
    Ok((nu * 2f64.ln() + ln_gamma(nu + 1.0) - nu * x.ln()).exp() * j)
}

/// A radially symmetric law on the closed disk of radius `ct`:
/// absolutely continuous part inside plus an atom spread on the circle.
pub trait RadialLaw {
    fn ct(&self) -> f64;
    fn singular_weight(&self) -> f64;
    /// Mass of the absolutely continuous part in the annulus `r0 <= r < r1`.
    fn annulus_mass(&self, r0: f64, r1: f64) -> Result<f64>;
}

/// Annulus mass `int 2 pi r f(r) dr` with `r = ct sin(phi)`, which removes
/// the `1/w` endpoint singularity of every density here.
pub fn radial_mass_by_quadrature(density: impl Fn(f64) -> Result<f64>, ct: f64, r0: f64, r1: f64) -> Result<f64> {
    let p0 = (r0 / ct).clamp(0.0, 1.0).asin();
    let p1 = (r1 / ct).clamp(0.0, 1.0).asin();
    let integrand = |phi: f64| {
        let (s, co) = phi.sin_cos();
        let r = ct * s;
        if r >= ct || co <= 0.0 {
            return 0.0;
        }
        match density(r) {
            Ok(f) => 2.0 * PI * r * f * ct * co,
            Err(_) => f64::NAN,
        }
    };
    Ok(integrate(integrand, p0, p1.min(FRAC_PI_2), 1e-14, 1e-12, 4096)?.value)
}

/// Radial law from an arbitrary density evaluator, masses by quadrature.
pub struct DensityRadialLaw<F> {
    pub ct: f64,
    pub singular_weight: f64,
    pub density: F,
}

impl<F: Fn(f64) -> Result<f64>> RadialLaw for DensityRadialLaw<F> {
    fn ct(&self) -> f64 {
        self.ct
    }

    fn singular_weight(&self) -> f64 {
        self.singular_weight
    }

    fn annulus_mass(&self, r0: f64, r1: f64) -> Result<f64> {
        radial_mass_by_quadrature(&self.density, self.ct, r0, r1)
    }
}

/// Unconditional endpoint law for a fractional count.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarLaw {
    pub alpha: f64,
    pub big_lambda: f64,
    pub c: f64,
    pub t: f64,
    ln_norm: f64,
}

/// Builds the endpoint law of `spec` at `(c, t)`.
pub fn planar_law(spec: &FracPoissonSpec, c: f64, t: f64) -> Result<PlanarLaw> {
    spec.validate()?;
    check_speed_time(c, t)?;
    let big_lambda = spec.rate.cumulative(t)?;
    PlanarLaw::new(spec.alpha, big_lambda, c, t)
}

impl PlanarLaw {
    pub fn new(alpha: f64, big_lambda: f64, c: f64, t: f64) -> Result<Self> {
        check_speed_time(c, t)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return domain(format!("alpha must lie in (0,1], got {alpha}"));
        }
        if !(big_lambda >= 0.0 && big_lambda.is_finite()) {
            return domain(format!("Lambda(t) must be finite and >= 0, got {big_lambda}"));
        }
        let ln_norm = ln_mittag_leffler(MLParams::new(alpha, 1.0)?, big_lambda, &SeriesControl::default())?;
        Ok(Self { alpha, big_lambda, c, t, ln_norm })
    }

    /// `1 / E_{alpha,1}(Lambda)`: the probability of no change at all.
    pub fn singular_weight(&self) -> f64 {
        (-self.ln_norm).exp()
    }

    /// Radius of the support disk.
    pub fn ct(&self) -> f64 {
        self.c * self.t
    }

    /// Closed form
    /// `Lambda E_{alpha,alpha}(Lambda w / ct) / (2 pi alpha ct w E)`.
    pub fn ac_density_radial(&self, r: f64) -> Result<f64> {
        let ct = self.ct();
        check_radius(r, ct)?;
        if self.big_lambda == 0.0 {
            return Ok(0.0);
        }
        let w = ((ct - r) * (ct + r)).sqrt();
        let ln_ml = ln_mittag_leffler(
            MLParams { alpha: self.alpha, beta: self.alpha },
            self.big_lambda * w / ct,
            &SeriesControl::default(),
        )?;
        Ok((self.big_lambda.ln() + ln_ml - self.ln_norm).exp() / (2.0 * PI * self.alpha * ct * w))
    }

    pub fn ac_density(&self, x: f64, y: f64) -> Result<f64> {
        self.ac_density_radial((x * x + y * y).sqrt())
    }

    /// The same density as the count-weighted sum of conditional laws,
    /// `sum_{n>=1} P{N=n} n (C-r²)^(n/2-1) / (2 pi (ct)^n)`, cut at
    /// relative term size [`MIXTURE_REL_TOL`] (at most [`MIXTURE_MAX_TERMS`] terms).
    pub fn mixture_density_radial(&self, r: f64) -> Result<f64> {
        let ct = self.ct();
        check_radius(r, ct)?;
        if self.big_lambda == 0.0 {
            return Ok(0.0);
        }
        let ln_q = ((ct - r) * (ct + r) / (ct * ct)).ln();
        let ln_l = self.big_lambda.ln();
        // log of P{N=n} * n * q^(n/2-1), q = w²/C
        let ln_term = |n: usize| {
            let nf = n as f64;
            nf * ln_l - ln_gamma(self.alpha * nf + 1.0) - self.ln_norm + nf.ln() + (0.5 * nf - 1.0) * ln_q
        };
        mixture_sum(ln_term).map(|s| s / (2.0 * PI * ct * ct))
    }

    /// Mass of the absolutely continuous part over the whole disk.
    pub fn disk_mass(&self) -> Result<f64> {
        self.annulus_mass(0.0, self.ct())
    }
}

impl RadialLaw for PlanarLaw {
    fn ct(&self) -> f64 {
        PlanarLaw::ct(self)
    }

    fn singular_weight(&self) -> f64 {
        PlanarLaw::singular_weight(self)
    }

    fn annulus_mass(&self, r0: f64, r1: f64) -> Result<f64> {
        radial_mass_by_quadrature(|r| self.ac_density_radial(r), self.ct(), r0, r1)
    }
}

/// Sums `exp(ln_term(n))` for `n = 1, 2, ...` until a term falls below
/// `MIXTURE_REL_TOL` of the partial sum once terms decrease.
fn mixture_sum(ln_term: impl Fn(usize) -> f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in 1..=MIXTURE_MAX_TERMS {
        let term = ln_term(n).exp();
        sum += term;
        if n > 2 && term <= prev && term < MIXTURE_REL_TOL * sum {
            return Ok(sum);
        }
        prev = term;
    }
    Err(crate::error::Error::NonConvergence { partial: sum, terms: MIXTURE_MAX_TERMS })
}

/// Radial law given directly by a count table: mixture of the conditional laws.
#[derive(Debug, Clone)]
pub struct MixtureRadialLaw {
    pub counts: CountDistribution,
    pub c: f64,
    pub t: f64,
}

impl RadialLaw for MixtureRadialLaw {
    fn ct(&self) -> f64 {
        self.c * self.t
    }

    fn singular_weight(&self) -> f64 {
        self.counts.pmf(0)
    }

    fn annulus_mass(&self, r0: f64, r1: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (n, &p) in self.counts.pmf_table().iter().enumerate().skip(1) {
            acc +=
                p * (conditional_radial_cdf(n, self.c, self.t, r1)? - conditional_radial_cdf(n, self.c, self.t, r0)?);
        }
        Ok(acc)
    }
}

/// Constant-rate density written with `E_{alpha,1}`:
/// `lambda E_{alpha,1}((lambda/c) w) / (2 pi c w E_{alpha,1}(lambda t))`.
///
/// For `alpha = 1` this is the classical law; for `alpha < 1` it differs
/// from [`PlanarLaw::ac_density`], which carries `E_{alpha,alpha}/alpha`.
pub fn planar_density_const_rate(alpha: f64, lambda: f64, c: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_speed_time(c, t)?;
    let ct = c * t;
    let r = (x * x + y * y).sqrt();
    check_radius(r, ct)?;
    let w = ((ct - r) * (ct + r)).sqrt();
    let profile = planar_profile_const_rate(alpha, lambda, c, w)?;
    if profile == 0.0 {
        return Ok(0.0);
    }
    let ln_den = ln_mittag_leffler(MLParams::new(alpha, 1.0)?, lambda * t, &SeriesControl::default())?;
    Ok(profile * (-ln_den).exp())
}

/// Unnormalized profile `f(w) = lambda E_{alpha,1}((lambda/c) w) / (2 pi c w)`
/// of [`planar_density_const_rate`] as a function of `w = sqrt(c²t² - r²) > 0`.
pub fn planar_profile_const_rate(alpha: f64, lambda: f64, c: f64, w: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha must lie in (0,1], got {alpha}"));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return domain(format!("rate must be finite and >= 0, got {lambda}"));
    }
    if !(c > 0.0) || !(w > 0.0) {
        return domain(format!("profile needs c > 0 and w > 0, got c={c}, w={w}"));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let ln_num = ln_mittag_leffler(MLParams::new(alpha, 1.0)?, lambda * w / c, &SeriesControl::default())?;
    Ok(lambda * ln_num.exp() / (2.0 * PI * c * w))
}

/// Classical constant-rate law
/// `lambda exp(-lambda t + (lambda/c) w) / (2 pi c w)`.
pub fn classical_density(lambda: f64, c: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_speed_time(c, t)?;
    let ct = c * t;
    let r = (x * x + y * y).sqrt();
    check_radius(r, ct)?;
    let w = ((ct - r) * (ct + r)).sqrt();
    Ok(lambda * (-lambda * t + lambda * w / c).exp() / (2.0 * PI * c * w))
}

/// Law of the first coordinate of the planar endpoint (the projection of
/// both the continuous part and the circle atom).
#[derive(Debug, Clone, PartialEq)]
pub struct LineLaw {
    pub alpha: f64,
    pub big_lambda: f64,
    pub c: f64,
    pub t: f64,
    ln_norm: f64,
}

impl LineLaw {
    pub fn new(spec: &FracPoissonSpec, c: f64, t: f64) -> Result<Self> {
        spec.validate()?;
        check_speed_time(c, t)?;
        let big_lambda = spec.rate.cumulative(t)?;
        let ln_norm = ln_mittag_leffler(MLParams::new(spec.alpha, 1.0)?, big_lambda, &SeriesControl::default())?;
        Ok(Self { alpha: spec.alpha, big_lambda, c, t, ln_norm })
    }

    fn chord(&self, x: f64) -> Result<f64> {
        let ct = self.c * self.t;
        if !(x.abs() < ct) {
            return domain(format!("|x| = {} outside (-{ct}, {ct})", x.abs()));
        }
        Ok(((ct - x.abs()) * (ct + x.abs())).sqrt())
    }

    /// Explicit series
    /// `1/(sqrt(pi) E) sum_k (Lambda/ct)^k Gamma(k/2+1)/Gamma((k+1)/2) s^(k-1) / Gamma(alpha k + 1)`
    /// with `s = sqrt(C - x²)`. The `k = 0` term is the projected circle atom.
    pub fn density(&self, x: f64) -> Result<f64> {
        let s = self.chord(x)?;
        let ct = self.c * self.t;
        let z = self.big_lambda * s / ct;
        let ln_sum = if z == 0.0 {
            -ln_gamma(0.5)
        } else {
            let ln_z = z.ln();
            sum_log_series(
                |k| {
                    let k = k as f64;
                    k * ln_z + ln_gamma(0.5 * k + 1.0) - ln_gamma(0.5 * (k + 1.0)) - ln_gamma(self.alpha * k + 1.0)
                },
                &SeriesControl::default(),
            )?
        };
        Ok((ln_sum - self.ln_norm).exp() / (PI.sqrt() * s))
    }

    /// Compact form `2Psi2[(Lambda/ct) s] / (sqrt(pi) E s)`.
    pub fn density_wright(&self, x: f64) -> Result<f64> {
        let s = self.chord(x)?;
        let spec = WrightSeriesSpec::line_projection(self.alpha)?;
        let z = self.big_lambda * s / (self.c * self.t);
        let ln_psi = ln_wright_series(&spec, z, &SeriesControl::default())?;
        Ok((ln_psi - self.ln_norm).exp() / (PI.sqrt() * s))
    }

    /// Projected circle atom `1 / (pi E s)`.
    pub fn singular_part(&self, x: f64) -> Result<f64> {
        let s = self.chord(x)?;
        Ok((-self.ln_norm).exp() / (PI * s))
    }

    /// Total mass over `(-ct, ct)` by quadrature with `x = ct sin(phi)`.
    pub fn total_mass(&self) -> Result<f64> {
        let ct = self.c * self.t;
        let f = |phi: f64| {
            let co = phi.cos();
            if co <= 0.0 {
                return 0.0;
            }
            self.density(ct * phi.sin()).map(|d| d * ct * co).unwrap_or(f64::NAN)
        };
        Ok(integrate(f, -FRAC_PI_2, FRAC_PI_2, 1e-13, 1e-12, 4096)?.value)
    }
}

pub fn line_density(spec: &FracPoissonSpec, c: f64, t: f64, x: f64) -> Result<f64> {
    LineLaw::new(spec, c, t)?.density(x)
}

/// The `alpha = 1` line density for constant rate in its Sonine form
/// `e^(-Lambda) sum_k (Lambda/(2ct))^k s^(k-1) / Gamma((k+1)/2)²`.
pub fn sonine_density(big_lambda: f64, c: f64, t: f64, x: f64) -> Result<f64> {
    check_speed_time(c, t)?;
    let ct = c * t;
    if !(x.abs() < ct) {
        return domain(format!("|x| = {} outside (-{ct}, {ct})", x.abs()));
    }
    let s = ((ct - x.abs()) * (ct + x.abs())).sqrt();
    let z = big_lambda * s / (2.0 * ct);
    let ln_sum = if z == 0.0 {
        -2.0 * ln_gamma(0.5)
    } else {
        let ln_z = z.ln();
        sum_log_series(
            |k| {
                let k = k as f64;
                k * ln_z - 2.0 * ln_gamma(0.5 * (k + 1.0))
            },
            &SeriesControl::default(),
        )?
    };
    Ok((ln_sum - big_lambda).exp() / s)
}

/// Radial density of the two-dimensional projection of a `d`-dimensional
/// random flight with `n` changes:
/// `Gamma(a+1)/Gamma(a) (C - r²)^(a-1) / (pi (ct)^(2a))`.
pub fn flight_marginal(d: u32, n: usize, c: f64, t: f64, r: f64, variant: FlightVariant) -> Result<f64> {
    check_speed_time(c, t)?;
    let a = flight_exponent(d, n, variant)?;
    let ct = c * t;
    check_radius(r, ct)?;
    let q = (ct - r) * (ct + r) / (ct * ct);
    Ok(a * q.powf(a - 1.0) / (PI * ct * ct))
}

/// Unconditional radial density of the projected Y-flight driven by
/// [`FlightCountSpec`]:
/// `(C-r²)^(d/2-2) / (pi (ct)^(d-2)) E_{b,b}(Lambda ((C-r²)/C)^b) / E_{b,b+1}(Lambda)`,
/// `b = d/2 - 1`.
pub fn flight_unconditional(spec: &FlightCountSpec, c: f64, t: f64, r: f64) -> Result<f64> {
    spec.validate()?;
    check_speed_time(c, t)?;
    let ct = c * t;
    check_radius(r, ct)?;
    let big = spec.rate.cumulative(t)?;
    let b = spec.half_dim_minus_one();
    let q = (ct - r) * (ct + r) / (ct * ct);
    let ctl = SeriesControl::default();
    let ln_num = ln_mittag_leffler(MLParams::new(b, b)?, big * q.powf(b), &ctl)?;
    let ln_den = ln_mittag_leffler(MLParams::new(b, b + 1.0)?, big, &ctl)?;
    Ok(((b - 1.0) * q.ln() + ln_num - ln_den).exp() / (PI * ct * ct))
}

/// `d = 4` closed form `Lambda exp(Lambda (C - r²)/C) / (pi C (e^Lambda - 1))`,
/// evaluated as `Lambda e^(-Lambda r²/C) / (pi C (1 - e^-Lambda))`.
pub fn flight_density_d4(big_lambda: f64, c: f64, t: f64, r: f64) -> Result<f64> {
    check_speed_time(c, t)?;
    let ct = c * t;
    check_radius(r, ct)?;
    let cc = ct * ct;
    if big_lambda == 0.0 {
        return Ok(1.0 / (PI * cc));
    }
    Ok(big_lambda * (-big_lambda * r * r / cc).exp() / (PI * cc * -(-big_lambda).exp_m1()))
}

/// `sum_n P{N=n} f^d(r; n)` for any count table and either projection.
pub fn flight_mixture_density(
    counts: &CountDistribution,
    d: u32,
    c: f64,
    t: f64,
    r: f64,
    variant: FlightVariant,
) -> Result<f64> {
    let mut acc = 0.0;
    for (n, &p) in counts.pmf_table().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        acc += p * flight_marginal(d, n, c, t, r, variant)?;
    }
    Ok(acc)
}
