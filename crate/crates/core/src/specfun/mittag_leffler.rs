use super::{exp_checked, ln_gamma, sum_log_series, SeriesControl};
use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// Orders (alpha, beta) of the two-parameter Mittag-Leffler function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
            return domain(format!("Mittag-Leffler orders must be positive, got alpha={alpha}, beta={beta}"));
        }
        Ok(Self { alpha, beta })
    }
}

/// `ln E_{alpha,beta}(z)` for `z >= 0`.
///
/// Never overflows: the series is accumulated in log space.
pub fn ln_mittag_leffler(p: MLParams, z: f64, ctl: &SeriesControl) -> Result<f64> {
    let p = MLParams::new(p.alpha, p.beta)?;
    if !(z >= 0.0) || !z.is_finite() {
        return domain(format!("Mittag-Leffler argument must be finite and >= 0, got {z}"));
    }
    if z == 0.0 {
        return Ok(-ln_gamma(p.beta));
    }
    let ln_z = z.ln();
    sum_log_series(
        |k| {
            let k = k as f64;
            k * ln_z - ln_gamma(p.alpha * k + p.beta)
        },
        ctl,
    )
}

/// `E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta)` for `z >= 0`.
pub fn mittag_leffler(p: MLParams, z: f64, ctl: &SeriesControl) -> Result<f64> {
    if z == 0.0 {
        MLParams::new(p.alpha, p.beta)?;
        return Ok(1.0 / super::gamma_pos(p.beta)?);
    }
    exp_checked(ln_mittag_leffler(p, z, ctl)?, "Mittag-Leffler value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::f64::consts::E;

    fn ml(alpha: f64, beta: f64, z: f64) -> f64 {
        mittag_leffler(MLParams::new(alpha, beta).unwrap(), z, &SeriesControl::default()).unwrap()
    }

    #[test]
    fn exponential_cases() {
        assert!((ml(1.0, 1.0, 1.0) - E).abs() < 1e-14);
        assert!((ml(1.0, 2.0, 2.0) - (E * E - 1.0) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn half_order_at_one() {
        // e * (1 + erf(1))
        assert!((ml(0.5, 1.0, 1.0) - 5.008_980_080_762_283).abs() < 1e-12);
    }

    #[test]
    fn zero_argument_is_reciprocal_gamma() {
        for &(a, b) in &[(0.3, 1.0), (0.7, 0.7), (1.0, 2.5), (2.0, 0.4)] {
            let g = crate::specfun::gamma_pos(b).unwrap();
            assert!((ml(a, b, 0.0) - 1.0 / g).abs() < 1e-15 / g);
        }
    }

    #[test]
    fn exp_reduction_on_desk_range() {
        let mut z = 0.0;
        while z <= 30.0 {
            assert!((ml(1.0, 1.0, z) - z.exp()).abs() <= 1e-10 * z.exp(), "z={z}");
            z += 0.37;
        }
    }

    #[test]
    fn huge_values_need_log_variant() {
        let p = MLParams::new(0.3, 1.0).unwrap();
        let ctl = SeriesControl::default();
        assert!(matches!(mittag_leffler(p, 20.0, &ctl), Err(Error::Overflow(_))));
        let ln = ln_mittag_leffler(p, 20.0, &ctl).unwrap();
        // leading asymptotics: E_a(z) ~ exp(z^(1/a)) / a
        let lead = 20f64.powf(1.0 / 0.3) - 0.3f64.ln();
        assert!((ln - lead).abs() < 1e-6 * lead);
    }

    #[test]
    fn rejects_bad_arguments() {
        let ctl = SeriesControl::default();
        assert!(MLParams::new(0.0, 1.0).is_err());
        assert!(MLParams::new(1.0, -1.0).is_err());
        let p = MLParams { alpha: 0.5, beta: 1.0 };
        assert!(mittag_leffler(p, -1.0, &ctl).is_err());
        assert!(mittag_leffler(p, f64::NAN, &ctl).is_err());
    }

    #[test]
    fn term_cap_is_reported() {
        let p = MLParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::new(1e-15, 5).unwrap();
        assert!(matches!(mittag_leffler(p, 3.0, &ctl), Err(Error::NonConvergence { terms: 5, .. })));
    }
}
