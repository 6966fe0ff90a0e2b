use super::{exp_checked, ln_gamma, sum_log_series, SeriesControl};
use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// Parameters `(a_j, A_j)` / `(b_j, B_j)` of the generalized Wright function
///
/// ```text
/// pPsi_q(z) = sum_k  prod_j Gamma(a_j + A_j k) / prod_j Gamma(b_j + B_j k) * z^k / k!
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrightSeriesSpec {
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

impl WrightSeriesSpec {
    /// Builds a spec after checking that every Gamma argument along the series
    /// stays positive (scales `A_j, B_j > 0` and offsets `a_j, b_j > 0`), which
    /// rules out Gamma poles and sign changes.
    pub fn new(upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        let spec = Self { upper, lower };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for &(a, s) in &self.upper {
            if !(s > 0.0 && s.is_finite()) {
                return domain(format!("upper scale must be positive, got {s}"));
            }
            if !(a > 0.0 && a.is_finite()) {
                return domain(format!("upper offset {a} lets a Gamma argument reach a pole"));
            }
        }
        for &(b, s) in &self.lower {
            if !(s > 0.0 && s.is_finite()) {
                return domain(format!("lower scale must be positive, got {s}"));
            }
            if !(b > 0.0 && b.is_finite()) {
                return domain(format!("lower offset {b} lets a Gamma argument reach a pole"));
            }
        }
        Ok(())
    }

    /// The `2Psi2` with parameters `((1,1),(1,1/2); (1/2,1/2),(1,alpha))` whose
    /// value gives the line projection of the planar law.
    pub fn line_projection(alpha: f64) -> Result<Self> {
        Self::new(vec![(1.0, 1.0), (1.0, 0.5)], vec![(0.5, 0.5), (1.0, alpha)])
    }

    fn log_coefficient(&self, k: f64) -> f64 {
        let up: f64 = self.upper.iter().map(|&(a, s)| ln_gamma(a + s * k)).sum();
        let down: f64 = self.lower.iter().map(|&(b, s)| ln_gamma(b + s * k)).sum();
        up - down - ln_gamma(k + 1.0)
    }
}

/// Logarithm of the generalized Wright series at `z >= 0`.
pub fn ln_wright_series(spec: &WrightSeriesSpec, z: f64, ctl: &SeriesControl) -> Result<f64> {
    spec.validate()?;
    if !(z >= 0.0) || !z.is_finite() {
        return domain(format!("Wright series argument must be finite and >= 0, got {z}"));
    }
    if z == 0.0 {
        return Ok(spec.log_coefficient(0.0));
    }
    let ln_z = z.ln();
    sum_log_series(
        |k| {
            let k = k as f64;
            k * ln_z + spec.log_coefficient(k)
        },
        ctl,
    )
}

pub fn wright_series(spec: &WrightSeriesSpec, z: f64, ctl: &SeriesControl) -> Result<f64> {
    exp_checked(ln_wright_series(spec, z, ctl)?, "Wright series value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{mittag_leffler, MLParams};
    use std::f64::consts::{E, PI};

    #[test]
    fn exponential_reduction() {
        let spec = WrightSeriesSpec::new(vec![(1.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        let v = wright_series(&spec, 1.0, &SeriesControl::default()).unwrap();
        assert!((v - E).abs() < 1e-14);
    }

    #[test]
    fn line_projection_at_zero() {
        let spec = WrightSeriesSpec::line_projection(1.0).unwrap();
        let v = wright_series(&spec, 0.0, &SeriesControl::default()).unwrap();
        assert!((v - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mittag_leffler_reduction() {
        let ctl = SeriesControl::default();
        for &alpha in &[0.3, 0.5, 0.9, 1.0] {
            let spec = WrightSeriesSpec::new(vec![(1.0, 1.0)], vec![(1.0, alpha)]).unwrap();
            for &z in &[0.1, 1.0, 2.5, 4.0] {
                let w = wright_series(&spec, z, &ctl).unwrap();
                let m = mittag_leffler(MLParams::new(alpha, 1.0).unwrap(), z, &ctl).unwrap();
                assert!(((w - m) / m).abs() < 1e-10, "alpha={alpha} z={z}");
            }
        }
    }

    #[test]
    fn rejects_poles() {
        assert!(WrightSeriesSpec::new(vec![], vec![(0.0, 1.0)]).is_err());
        assert!(WrightSeriesSpec::new(vec![], vec![(-1.0, 0.5)]).is_err());
        assert!(WrightSeriesSpec::new(vec![(1.0, 0.0)], vec![]).is_err());
        let bad = WrightSeriesSpec { upper: vec![], lower: vec![(-2.0, 1.0)] };
        assert!(wright_series(&bad, 1.0, &SeriesControl::default()).is_err());
    }
}
