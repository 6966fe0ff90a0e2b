use super::caputo::{fractional_derivative, CaputoGrid};
use super::report::CheckEntry;
use super::stats::{binomial_z, chi_square, ks_test};
use super::*;
use crate::counting::{
    fractional_log_weight, pgf_from_cumulative, pmf, weighted_pmf, weighted_pmf_ln, FlightCountSpec, FracPoissonSpec,
    RateFunction, StateDependentSpec,
};
use crate::densities::{
    classical_density, conditional_characteristic_function, conditional_density, conditional_radial_cdf,
    flight_density_d4, flight_mixture_density, flight_unconditional, planar_profile_const_rate, sonine_density,
    LineLaw, PlanarLaw, RadialLaw,
};
use crate::error::{domain, Result};
use crate::motion::{flight_exponent, FlightVariant, PlanarSample};
use crate::quadrature::integrate_default;
use crate::specfun::{ln_gamma, ln_mittag_leffler, MLParams, SeriesControl};
use std::f64::consts::{E, PI, TAU};

/// Whether a check runs as specified or against a deliberately wrong law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Nominal,
    NegativeControl,
}

impl Mode {
    fn is_negative(self) -> bool {
        self == Mode::NegativeControl
    }

    fn tag(self, e: CheckEntry) -> CheckEntry {
        if self.is_negative() {
            e.detail("negative_control", true)
        } else {
            e
        }
    }
}

fn sup_residual(lhs: &[f64], rhs: &[f64], grid: &CaputoGrid, from: f64) -> f64 {
    (1..=grid.steps).filter(|&j| grid.node(j) >= from - 1e-12).map(|j| (lhs[j] - rhs[j]).abs()).fold(0.0, f64::max)
}

fn caputo_tolerance(alpha: f64, h: f64) -> f64 {
    if alpha == 1.0 {
        CLASSICAL_LIMIT_TOL_FACTOR * h
    } else {
        CAPUTO_TOL_FACTOR * h.powf(2.0 - alpha)
    }
}

/// `d^alpha g = (lambda/c) g` for `g(w) = (2 pi c / lambda) w^alpha f(w^alpha)`,
/// `f` the constant-rate profile, on `w` in `[CAPUTO_BURN_IN * W, W]`.
///
/// `g` is scaled to `g(0) = 1`; for `lambda = 0` it is identically 1.
pub fn eigenfunction_residual(alpha: f64, lambda: f64, c: f64, grid: &CaputoGrid, mode: Mode) -> Result<CheckEntry> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return domain(format!("alpha must lie in (0,1], got {alpha}"));
    }
    let scale = 2.0 * PI * c / lambda;
    let g_at = |w: f64| -> Result<f64> {
        if lambda == 0.0 || w == 0.0 {
            return Ok(1.0);
        }
        let v = w.powf(alpha);
        Ok(scale * v * planar_profile_const_rate(alpha, lambda, c, v)?)
    };
    let g = (0..=grid.steps).map(|j| g_at(grid.node(j))).collect::<Result<Vec<_>>>()?;
    let d = fractional_derivative(&g, grid, alpha)?;
    let mut eig = lambda / c;
    if mode.is_negative() {
        eig *= NEGATIVE_SCALE;
    }
    let rhs: Vec<f64> = g.iter().map(|v| eig * v).collect();
    let from = CAPUTO_BURN_IN * grid.node(grid.steps);
    let res = sup_residual(&d, &rhs, grid, from);
    let tol = caputo_tolerance(alpha, grid.h);
    Ok(mode.tag(
        CheckEntry::at_most(format!("eigenfunction(alpha={alpha},lambda={lambda},c={c})"), res, tol)
            .detail("alpha", alpha)
            .detail("lambda", lambda)
            .detail("c", c)
            .detail("h", grid.h)
            .detail("w_from", from)
            .detail("w_to", grid.node(grid.steps)),
    ))
}

/// `d^alpha/du^alpha G(u^alpha) = Lambda G(u^alpha)` on `u` in
/// `[CAPUTO_BURN_IN, 1]`, with `G` the pgf at cumulative rate `Lambda(t)`.
pub fn pgf_ode_residual(spec: &FracPoissonSpec, t: f64, grid: &CaputoGrid, mode: Mode) -> Result<CheckEntry> {
    spec.validate()?;
    let alpha = spec.alpha;
    let big = spec.rate.cumulative(t)?;
    let g = (0..=grid.steps)
        .map(|j| pgf_from_cumulative(alpha, big, grid.node(j).powf(alpha)))
        .collect::<Result<Vec<_>>>()?;
    let d = fractional_derivative(&g, grid, alpha)?;
    let factor = if mode.is_negative() { NEGATIVE_SCALE * big } else { big };
    let rhs: Vec<f64> = g.iter().map(|v| factor * v).collect();
    let from = CAPUTO_BURN_IN * grid.node(grid.steps);
    let res = sup_residual(&d, &rhs, grid, from);
    let tol = caputo_tolerance(alpha, grid.h);
    Ok(mode.tag(
        CheckEntry::at_most(format!("pgf_ode(alpha={alpha},Lambda={big})"), res, tol)
            .detail("alpha", alpha)
            .detail("big_lambda", big)
            .detail("t", t)
            .detail("h", grid.h)
            .detail("u_from", from),
    ))
}

/// `p_tt + 2 lambda p_t - c² (p_xx + p_yy)` on the classical density by
/// central differences of step `h`, at lattice points with
/// `r <= TELEGRAPH_CONE_FRACTION * ct`, relative to `max |c² Δp|`.
pub fn telegraph_residual(lambda: f64, c: f64, t: f64, h: f64, mode: Mode) -> Result<CheckEntry> {
    let tol = TELEGRAPH_TOL_FACTOR * h * h;
    let name = format!("telegraph(lambda={lambda},c={c},t={t})");
    if lambda == 0.0 {
        return Ok(mode.tag(CheckEntry::not_applicable(name, tol, "lambda = 0 leaves no absolutely continuous part")));
    }
    if !(h > 0.0) || !(t > 2.0 * h) {
        return domain(format!("need 0 < 2h < t, got h={h}, t={t}"));
    }
    let p = |x: f64, y: f64, s: f64| -> Result<f64> {
        let v = classical_density(lambda, c, s, x, y)?;
        Ok(if mode.is_negative() { v * v } else { v })
    };
    let r_max = TELEGRAPH_CONE_FRACTION * c * t;
    let k = TELEGRAPH_LATTICE;
    let spacing = 2.0 * r_max / k as f64;
    let (mut max_res, mut max_lap) = (0.0f64, 0.0f64);
    let (mut used, mut excluded) = (0usize, 0usize);
    for i in 0..=k {
        for j in 0..=k {
            let x = -r_max + i as f64 * spacing;
            let y = -r_max + j as f64 * spacing;
            let r = x.hypot(y);
            if r > r_max {
                continue;
            }
            // every stencil point must stay strictly inside the cone at time t - h
            if r + h >= c * (t - h) - 5.0 * h {
                excluded += 1;
                continue;
            }
            let p0 = p(x, y, t)?;
            let pt_plus = p(x, y, t + h)?;
            let pt_minus = p(x, y, t - h)?;
            let p_tt = (pt_plus - 2.0 * p0 + pt_minus) / (h * h);
            let p_t = (pt_plus - pt_minus) / (2.0 * h);
            let p_xx = (p(x + h, y, t)? - 2.0 * p0 + p(x - h, y, t)?) / (h * h);
            let p_yy = (p(x, y + h, t)? - 2.0 * p0 + p(x, y - h, t)?) / (h * h);
            let lap = c * c * (p_xx + p_yy);
            max_res = max_res.max((p_tt + 2.0 * lambda * p_t - lap).abs());
            max_lap = max_lap.max(lap.abs());
            used += 1;
        }
    }
    if used == 0 {
        return domain("no admissible telegraph grid points");
    }
    let rel = max_res / max_lap;
    Ok(mode.tag(
        CheckEntry::at_most(name, rel, tol)
            .detail("lambda", lambda)
            .detail("c", c)
            .detail("t", t)
            .detail("h", h)
            .detail("r_max", r_max)
            .detail("points_used", used)
            .detail("points_excluded", excluded)
            .detail_f64("max_abs_residual", max_res)
            .detail_f64("max_abs_laplacian", max_lap),
    ))
}

/// Singular-mass z-test, radial chi-square of the nonsingular samples and
/// KS test of the angle against uniform. `label` names the law.
pub fn mc_gof(samples: &[PlanarSample], law: &dyn RadialLaw, bins: usize, label: &str) -> Result<Vec<CheckEntry>> {
    if samples.len() < MIN_MC_SAMPLES {
        return domain(format!("goodness of fit needs >= {MIN_MC_SAMPLES} samples, got {}", samples.len()));
    }
    if bins < 2 {
        return domain("need at least two radial bins");
    }
    let n = samples.len();
    let hits = samples.iter().filter(|s| s.is_singular).count();
    let p0 = law.singular_weight();
    let (z, _) = binomial_z(hits, n, p0);
    let singular = CheckEntry::at_most(format!("mc_singular_mass({label})"), z.abs(), SIGMA_BOUND)
        .detail("samples", n)
        .detail("singular_hits", hits)
        .detail("expected_fraction", p0)
        .detail("observed_fraction", hits as f64 / n as f64);

    let ct = law.ct();
    let width = ct / bins as f64;
    let mut observed = vec![0.0; bins];
    for s in samples.iter().filter(|s| !s.is_singular) {
        let b = ((s.radius() / width) as usize).min(bins - 1);
        observed[b] += 1.0;
    }
    let masses = (0..bins)
        .map(|b| law.annulus_mass(b as f64 * width, if b + 1 == bins { ct } else { (b + 1) as f64 * width }))
        .collect::<Result<Vec<_>>>()?;
    let total_mass: f64 = masses.iter().sum();
    let n_ac = (n - hits) as f64;
    let radial = if n_ac == 0.0 || total_mass <= 0.0 {
        CheckEntry::not_applicable(format!("mc_radial_chi2({label})"), P_VALUE_FLOOR, "no absolutely continuous mass")
    } else {
        let expected: Vec<f64> = masses.iter().map(|m| n_ac * m / total_mass).collect();
        let cs = chi_square(&observed, &expected, 0)?;
        CheckEntry::above(format!("mc_radial_chi2({label})"), cs.p_value, P_VALUE_FLOOR)
            .detail_f64("chi2", cs.statistic)
            .detail("dof", cs.dof)
            .detail("bins_requested", bins)
            .detail("bins_used", cs.bins_used)
            .detail("bins_merged", cs.bins_merged)
            .detail("ac_mass_quadrature", total_mass)
            .detail("ac_mass_expected", 1.0 - p0)
    };

    let angles: Vec<f64> = samples.iter().map(|s| s.angle()).collect();
    let ks = ks_test(&angles, |a| (a / TAU).clamp(0.0, 1.0))?;
    let angle = CheckEntry::above(format!("mc_angle_ks({label})"), ks.p_value, P_VALUE_FLOOR)
        .detail_f64("ks_statistic", ks.statistic);
    Ok(vec![singular, radial, angle])
}

/// Sample mean of `exp(i(a X + b Y))` over endpoints with exactly `n`
/// changes against the conditional characteristic function.
pub fn empirical_cf(
    points: &[(f64, f64)],
    n: usize,
    freq: (f64, f64),
    c: f64,
    t: f64,
    mode: Mode,
) -> Result<CheckEntry> {
    if points.len() < MIN_MC_SAMPLES {
        return domain(format!("characteristic function check needs >= {MIN_MC_SAMPLES} samples"));
    }
    if n == 0 {
        return domain("characteristic function check needs n >= 1");
    }
    let (a, b) = freq;
    let (mut re, mut im) = (0.0, 0.0);
    for &(x, y) in points {
        let (s, co) = (a * x + b * y).sin_cos();
        re += co;
        im += s;
    }
    let m = points.len() as f64;
    let (re, im) = (re / m, im / m);
    let n_ref = if mode.is_negative() { n + NEGATIVE_COUNT_SHIFT } else { n };
    let exact = conditional_characteristic_function(n_ref, c, t, a, b)?;
    let dev = (re - exact).hypot(im);
    let tol = CF_SIGMA / m.sqrt();
    Ok(mode.tag(
        CheckEntry::at_most(format!("empirical_cf(n={n},freq=({a},{b}))"), dev, tol)
            .detail("samples", points.len())
            .detail("empirical_re", re)
            .detail("empirical_im", im)
            .detail("exact", exact),
    ))
}

fn interior_radii(ct: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |i| ct * (i as f64 + 0.5) / k as f64)
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// Count-weighted sum of conditional densities against the closed-form
/// absolutely continuous density, at `MIXTURE_RADII` interior radii.
///
/// Also records how far the `E_{alpha,1}` constant-rate form is from both.
pub fn mixture_identity(alpha: f64, big_lambda: f64, c: f64, t: f64, mode: Mode) -> Result<CheckEntry> {
    let law = PlanarLaw::new(alpha, big_lambda, c, t)?;
    let mix_big = if mode.is_negative() { NEGATIVE_SCALE * big_lambda } else { big_lambda };
    let counts = FracPoissonSpec::new(alpha, RateFunction::constant(mix_big / t)?)?.distribution(t)?;
    let lambda = big_lambda / t;
    let (mut worst, mut printed_gap) = (0.0f64, 0.0f64);
    for r in interior_radii(law.ct(), MIXTURE_RADII) {
        let closed = law.ac_density_radial(r)?;
        let mut mix = 0.0;
        for (n, &p) in counts.pmf_table().iter().enumerate().skip(1) {
            if p > 0.0 {
                mix += p * conditional_density(n, c, t, r)?;
            }
        }
        worst = worst.max(rel_err(mix, closed));
        let printed = crate::densities::planar_density_const_rate(alpha, lambda, c, t, r, 0.0)?;
        printed_gap = printed_gap.max(rel_err(printed, closed));
    }
    Ok(mode.tag(
        CheckEntry::at_most(format!("mixture_identity(alpha={alpha},Lambda={big_lambda})"), worst, MIXTURE_TOL)
            .detail("radii", MIXTURE_RADII)
            .detail_f64("e_alpha_1_form_max_rel_gap", printed_gap),
    ))
}

/// Quadrature mass of the absolutely continuous part against `1 - 1/E_{alpha,1}(Lambda)`.
pub fn disk_mass(alpha: f64, big_lambda: f64, c: f64, t: f64, mode: Mode) -> Result<CheckEntry> {
    let law = PlanarLaw::new(alpha, big_lambda, c, t)?;
    let target = 1.0 - law.singular_weight();
    let mass = if mode.is_negative() {
        let wrong = PlanarLaw::new(alpha, NEGATIVE_SCALE * big_lambda, c, t)?;
        wrong.disk_mass()? * NEGATIVE_SCALE
    } else {
        law.disk_mass()?
    };
    Ok(mode.tag(
        CheckEntry::at_most(format!("disk_mass(alpha={alpha},Lambda={big_lambda})"), (mass - target).abs(), MASS_TOL)
            .detail("mass", mass)
            .detail("expected", target),
    ))
}

/// Line density against the numeric `y`-integral of the planar law plus
/// the projected circle atom, at `PROJECTION_ABSCISSAE` points.
pub fn projection_identity(alpha: f64, big_lambda: f64, c: f64, t: f64, mode: Mode) -> Result<CheckEntry> {
    let spec = FracPoissonSpec::new(alpha, RateFunction::constant(big_lambda / t)?)?;
    let line = LineLaw::new(&spec, c, t)?;
    let plane_big = if mode.is_negative() { NEGATIVE_SCALE * big_lambda } else { big_lambda };
    let plane = PlanarLaw::new(alpha, plane_big, c, t)?;
    let ct = c * t;
    let k = PROJECTION_ABSCISSAE;
    let (mut worst, mut wright_gap) = (0.0f64, 0.0f64);
    for i in 0..k {
        let x = ct * (2.0 * (i as f64 + 0.5) / k as f64 - 1.0);
        let s = ((ct - x.abs()) * (ct + x.abs())).sqrt();
        // y = s sin(phi) removes the inverse square-root edge of the chord
        let integral = integrate_default(
            |phi| {
                let y = s * phi.sin();
                plane.ac_density(x, y).map_or(f64::NAN, |v| v * s * phi.cos())
            },
            -PI / 2.0,
            PI / 2.0,
        )?;
        let reference = integral + line.singular_part(x)?;
        let series = line.density(x)?;
        worst = worst.max(rel_err(series, reference));
        wright_gap = wright_gap.max(rel_err(line.density_wright(x)?, series));
    }
    Ok(mode.tag(
        CheckEntry::at_most(format!("projection(alpha={alpha},Lambda={big_lambda})"), worst, PROJECTION_TOL)
            .detail("abscissae", k)
            .detail_f64("wright_form_max_rel_gap", wright_gap),
    ))
}

/// Line density at `alpha = 1` against the Sonine form.
pub fn sonine_reduction(big_lambda: f64, c: f64, t: f64, mode: Mode) -> Result<CheckEntry> {
    let spec = FracPoissonSpec::new(1.0, RateFunction::constant(big_lambda / t)?)?;
    let line = LineLaw::new(&spec, c, t)?;
    let son_big = if mode.is_negative() { NEGATIVE_SCALE * big_lambda } else { big_lambda };
    let ct = c * t;
    let k = PROJECTION_ABSCISSAE;
    let mut worst = 0.0f64;
    for i in 0..k {
        let x = ct * (2.0 * (i as f64 + 0.5) / k as f64 - 1.0);
        worst = worst.max(rel_err(line.density(x)?, sonine_density(son_big, c, t, x)?));
    }
    Ok(mode.tag(CheckEntry::at_most(format!("sonine(Lambda={big_lambda})"), worst, SONINE_TOL).detail("abscissae", k)))
}

/// `d = 4` unconditional flight density against its exponential closed form
/// on `FLIGHT_RADII` radii, plus the pinned origin value at `Lambda = ct = 1`.
pub fn flight_d4(big_lambda: f64, c: f64, t: f64, mode: Mode) -> Result<CheckEntry> {
    let spec = FlightCountSpec::new(4, RateFunction::constant(big_lambda / t)?)?;
    let closed_big = if mode.is_negative() { NEGATIVE_SCALE * big_lambda } else { big_lambda };
    let mut worst = 0.0f64;
    for r in interior_radii(c * t, FLIGHT_RADII) {
        worst = worst.max(rel_err(flight_unconditional(&spec, c, t, r)?, flight_density_d4(closed_big, c, t, r)?));
    }
    let origin = flight_density_d4(1.0, 1.0, 1.0, 0.0)?;
    let origin_exact = E / (PI * (E - 1.0));
    Ok(mode.tag(
        CheckEntry::at_most(format!("flight_d4(Lambda={big_lambda})"), worst, FLIGHT_CLOSED_TOL)
            .detail("radii", FLIGHT_RADII)
            .detail("origin_value_unit", origin)
            .detail_f64("origin_value_rel_err", rel_err(origin, origin_exact)),
    ))
}

/// Flight count table mixed over the projected marginals against the
/// unconditional Mittag-Leffler form, dimension `d`.
pub fn flight_mixture(d: u32, big_lambda: f64, c: f64, t: f64, mode: Mode) -> Result<CheckEntry> {
    let spec = FlightCountSpec::new(d, RateFunction::constant(big_lambda / t)?)?;
    let mix_spec = if mode.is_negative() {
        FlightCountSpec::new(d, RateFunction::constant(NEGATIVE_SCALE * big_lambda / t)?)?
    } else {
        spec.clone()
    };
    let counts = mix_spec.distribution(t)?;
    let mut worst = 0.0f64;
    for r in interior_radii(c * t, FLIGHT_RADII) {
        let mix = flight_mixture_density(&counts, d, c, t, r, FlightVariant::Y)?;
        worst = worst.max(rel_err(mix, flight_unconditional(&spec, c, t, r)?));
    }
    Ok(mode.tag(
        CheckEntry::at_most(format!("flight_mixture(d={d},Lambda={big_lambda})"), worst, FLIGHT_MIXTURE_TOL)
            .detail("radii", FLIGHT_RADII),
    ))
}

/// Chi-square of sampled radii against a radial cdf on `[0, ct]`.
fn radial_chi2(name: String, radii: &[f64], ct: f64, bins: usize, cdf: impl Fn(f64) -> f64) -> Result<CheckEntry> {
    let width = ct / bins as f64;
    let mut observed = vec![0.0; bins];
    for &r in radii {
        observed[((r / width) as usize).min(bins - 1)] += 1.0;
    }
    let m = radii.len() as f64;
    let expected: Vec<f64> = (0..bins)
        .map(|b| {
            let hi = if b + 1 == bins { 1.0 } else { cdf((b + 1) as f64 * width) };
            m * (hi - cdf(b as f64 * width))
        })
        .collect();
    let cs = chi_square(&observed, &expected, 0)?;
    Ok(CheckEntry::above(name, cs.p_value, P_VALUE_FLOOR)
        .detail("samples", radii.len())
        .detail_f64("chi2", cs.statistic)
        .detail("dof", cs.dof)
        .detail("bins_used", cs.bins_used)
        .detail("bins_merged", cs.bins_merged))
}

/// Sampled projected-flight radii against the `f^d` marginal cdf
/// `1 - (1 - r²/C)^a`.
pub fn flight_sampler(
    d: u32,
    n: usize,
    variant: FlightVariant,
    radii: &[f64],
    ct: f64,
    mode: Mode,
) -> Result<CheckEntry> {
    let other = match variant {
        FlightVariant::X => FlightVariant::Y,
        FlightVariant::Y => FlightVariant::X,
    };
    let a = flight_exponent(d, n, if mode.is_negative() { other } else { variant })?;
    let cdf = |r: f64| 1.0 - (1.0 - (r / ct).powi(2)).max(0.0).powf(a);
    let e = radial_chi2(format!("flight_sampler(d={d},n={n},{variant:?})"), radii, ct, GOF_BINS, cdf)?;
    Ok(mode.tag(e.detail("exponent", a)))
}

/// Radii of endpoints sampled with exactly `n` changes against the
/// conditional radial cdf.
pub fn conditional_law(n: usize, radii: &[f64], c: f64, t: f64, mode: Mode) -> Result<CheckEntry> {
    let n_ref = if mode.is_negative() { n + NEGATIVE_COUNT_SHIFT } else { n };
    if n_ref == 0 {
        return domain("conditional law check needs n >= 1");
    }
    let cdf = |r: f64| conditional_radial_cdf(n_ref, c, t, r.min(c * t)).unwrap_or(f64::NAN);
    Ok(mode.tag(radial_chi2(format!("conditional_law(n={n})"), radii, c * t, GOF_BINS, cdf)?))
}

/// Order moved by `shift`, upward unless that leaves `(0, 1]`.
fn moved_order(alpha: f64, shift: f64) -> f64 {
    if alpha + shift <= 1.0 {
        alpha + shift
    } else {
        alpha - shift
    }
}

/// `E_{alpha,1}(Lambda) / E_{alpha',1}(Lambda)` with `alpha'` the moved order:
/// the factor a table carries when normalized with the wrong order.
fn wrong_normalizer_factor(alpha: f64, big: f64, shift: f64) -> Result<f64> {
    let ctl = SeriesControl::default();
    let right = ln_mittag_leffler(MLParams::new(alpha, 1.0)?, big, &ctl)?;
    let wrong = ln_mittag_leffler(MLParams::new(moved_order(alpha, shift), 1.0)?, big, &ctl)?;
    Ok((right - wrong).exp())
}

/// Table normalization on the `(alpha, Lambda)` grid, the `alpha = 1`
/// Poisson reduction and the weighted-Poisson route to the pmf.
pub fn count_normalization(mode: Mode) -> Result<Vec<CheckEntry>> {
    let shift = if mode.is_negative() { NEGATIVE_ALPHA_SHIFT } else { 0.0 };
    let mut norm_worst = 0.0f64;
    for &alpha in &NORMALIZATION_ALPHAS {
        for &big in &NORMALIZATION_LAMBDAS {
            let dist = FracPoissonSpec::new(alpha, RateFunction::constant(big)?)?.distribution(1.0)?;
            let factor = if shift == 0.0 { 1.0 } else { wrong_normalizer_factor(alpha, big, shift)? };
            let sum: f64 = dist.pmf_table().iter().sum::<f64>() * factor;
            norm_worst = norm_worst.max((sum - 1.0).abs());
        }
    }
    let normalization = CheckEntry::at_most("count_normalization", norm_worst, NORMALIZATION_TOL)
        .detail("alphas", NORMALIZATION_ALPHAS.to_vec())
        .detail("big_lambdas", NORMALIZATION_LAMBDAS.to_vec());

    let mut poisson_worst = 0.0f64;
    for &big in &NORMALIZATION_LAMBDAS {
        let spec = FracPoissonSpec::new(1.0 - shift, RateFunction::constant(big)?)?;
        for n in 0..=POISSON_MAX_N {
            let exact = (n as f64 * big.ln() - big - ln_gamma(n as f64 + 1.0)).exp();
            poisson_worst = poisson_worst.max(rel_err(pmf(&spec, 1.0, n)?, exact));
        }
    }
    let poisson =
        CheckEntry::at_most("count_poisson_reduction", poisson_worst, POISSON_TOL).detail("max_n", POISSON_MAX_N);

    let mut weighted_worst = 0.0f64;
    for &alpha in &NORMALIZATION_ALPHAS {
        let wa = moved_order(alpha, shift);
        for &big in &NORMALIZATION_LAMBDAS {
            let spec = FracPoissonSpec::new(alpha, RateFunction::constant(big)?)?;
            for n in 0..=POISSON_MAX_N {
                let direct = pmf(&spec, 1.0, n)?;
                let via_weights = if big <= WEIGHTED_DIRECT_MAX_LAMBDA {
                    let w = |k: usize| {
                        let k = k as f64;
                        (ln_gamma(k + 1.0) - ln_gamma(wa * k + 1.0)).exp()
                    };
                    weighted_pmf(w, big, n)?
                } else {
                    weighted_pmf_ln(fractional_log_weight(wa), big, n)?
                };
                weighted_worst = weighted_worst.max(rel_err(via_weights, direct));
            }
        }
    }
    let weighted =
        CheckEntry::at_most("count_weighted_poisson", weighted_worst, WEIGHTED_TOL).detail("max_n", POISSON_MAX_N);

    let sd = StateDependentSpec::new(vec![0.5, 0.7, 0.9], RateFunction::constant(2.0)?)?;
    let sd_sum: f64 = sd.distribution(1.0)?.pmf_table().iter().sum();
    let fl_sum: f64 =
        FlightCountSpec::new(5, RateFunction::constant(2.0)?)?.distribution(1.0)?.pmf_table().iter().sum();
    let factor = if shift == 0.0 { 1.0 } else { wrong_normalizer_factor(0.9, 2.0, shift)? };
    let variant_worst = (sd_sum * factor - 1.0).abs().max((fl_sum * factor - 1.0).abs());
    let variants = CheckEntry::at_most("count_variant_normalization", variant_worst, NORMALIZATION_TOL);
    Ok([normalization, poisson, weighted, variants].into_iter().map(|e| mode.tag(e)).collect())
}

/// Endpoint radii of a batch.
pub fn radii(samples: &[PlanarSample]) -> Vec<f64> {
    samples.iter().map(|s| s.radius()).collect()
}
