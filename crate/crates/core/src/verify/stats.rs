//! Goodness-of-fit statistics.

use crate::error::{domain, Result};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Smallest expected count a chi-square bin may carry after merging.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins_used: usize,
    pub bins_merged: usize,
}

/// Pearson chi-square of `observed` against `expected` counts.
///
/// Adjacent bins are merged left to right until each carries at least
/// [`MIN_EXPECTED`] expected counts; a short remainder joins the last bin.
/// Degrees of freedom are `bins_used - 1 - fitted`.
pub fn chi_square(observed: &[f64], expected: &[f64], fitted: usize) -> Result<ChiSquare> {
    if observed.len() != expected.len() || observed.is_empty() {
        return domain("observed and expected counts must be nonempty and equally long");
    }
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut cur = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        cur.0 += o;
        cur.1 += e;
        if cur.1 >= MIN_EXPECTED {
            merged.push(cur);
            cur = (0.0, 0.0);
        }
    }
    if cur.1 > 0.0 || cur.0 > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += cur.0;
                last.1 += cur.1;
            }
            None => merged.push(cur),
        }
    }
    if merged.len() < 2 + fitted {
        return domain(format!("only {} bins with expected count >= {MIN_EXPECTED}; need more samples", merged.len()));
    }
    let statistic: f64 = merged.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = merged.len() - 1 - fitted;
    let p_value = ChiSquared::new(dof as f64).map_err(|e| crate::error::Error::Numeric(e.to_string()))?.sf(statistic);
    Ok(ChiSquare { statistic, dof, p_value, bins_used: merged.len(), bins_merged: observed.len() - merged.len() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KolmogorovSmirnov {
    pub statistic: f64,
    pub p_value: f64,
}

/// One-sample KS test of `samples` against the cdf `cdf`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KolmogorovSmirnov> {
    if samples.is_empty() {
        return domain("KS test needs samples");
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let sqrt_n = n.sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    Ok(KolmogorovSmirnov { statistic: d, p_value: kolmogorov_sf(lambda) })
}

/// Survival function of the Kolmogorov distribution,
/// `2 sum_{k>=1} (-1)^(k-1) exp(-2 k² x²)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Binomial z-score of `hits` successes in `trials` against probability `p`,
/// with its two-sided normal p-value.
pub fn binomial_z(hits: usize, trials: usize, p: f64) -> (f64, f64) {
    let n = trials as f64;
    let sd = (n * p * (1.0 - p)).sqrt();
    if sd == 0.0 {
        let z = if (hits as f64 - n * p).abs() < 0.5 { 0.0 } else { f64::INFINITY };
        return (z, if z == 0.0 { 1.0 } else { 0.0 });
    }
    let z = (hits as f64 - n * p) / sd;
    let normal = Normal::standard();
    (z, 2.0 * normal.sf(z.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fit_has_zero_statistic() {
        let obs = [10.0, 20.0, 30.0];
        let c = chi_square(&obs, &obs, 0).unwrap();
        assert_eq!(c.statistic, 0.0);
        assert_eq!(c.dof, 2);
        assert!((c.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sparse_bins_merge() {
        let obs = [1.0, 2.0, 3.0, 40.0, 50.0, 1.0];
        let exp = [1.5, 2.0, 2.5, 40.0, 50.0, 2.0];
        let c = chi_square(&obs, &exp, 0).unwrap();
        assert_eq!(c.bins_used, 3);
        assert_eq!(c.bins_merged, 3);
    }

    #[test]
    fn known_chi_square_tail() {
        // chi2 with 1 dof: P(X > 3.841459) = 0.05
        let d = (3.841459f64 * 24.0).sqrt();
        let c = chi_square(&[60.0 + d, 40.0 - d], &[60.0, 40.0], 0).unwrap();
        assert!((c.p_value - 0.05).abs() < 1e-6, "{c:?}");
    }

    #[test]
    fn kolmogorov_tail_values() {
        // standard critical value: P(K > 1.3581) = 0.05
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_sf(1.9495) - 0.001).abs() < 1e-4);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn ks_detects_shift() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_test(&xs, |x| x).unwrap().p_value > 0.99);
        assert!(ks_test(&xs, |x| (x * x).min(1.0)).unwrap().p_value < 1e-6);
    }

    #[test]
    fn binomial_z_basic() {
        let (z, p) = binomial_z(500, 1000, 0.5);
        assert_eq!(z, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        let (z, _) = binomial_z(530, 1000, 0.5);
        assert!((z - 30.0 / 250f64.sqrt()).abs() < 1e-12);
    }
}
