//! Special functions used throughout the crate: Gamma, two-parameter
//! Mittag-Leffler, generalized Wright series and Bessel J of real order.
//!
//! Every evaluator works on nonnegative real arguments with plain ascending
//! series. Series are summed in log space so that very large values (the
//! normalizers of the counting laws can exceed `f64::MAX`) stay usable through
//! the `ln_*` variants.

mod bessel;
mod gamma;
mod mittag_leffler;
mod wright;

pub use bessel::bessel_j;
pub use gamma::{gamma_pos, ln_gamma};
pub use mittag_leffler::{ln_mittag_leffler, mittag_leffler, MLParams};
pub use wright::{ln_wright_series, wright_series, WrightSeriesSpec};

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};

/// Stopping rule shared by the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return domain(format!("rel_tol must lie in (0,1), got {rel_tol}"));
        }
        if max_terms == 0 {
            return domain("max_terms must be at least 1");
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-16, max_terms: 2_000_000 }
    }
}

/// Running sum of positive terms given by their logarithms,
/// stored as `exp(shift) * scaled`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSum {
    shift: f64,
    scaled: f64,
}

impl LogSum {
    pub(crate) fn new() -> Self {
        Self { shift: f64::NEG_INFINITY, scaled: 0.0 }
    }

    pub(crate) fn push(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.shift {
            self.scaled = self.scaled * (self.shift - log_term).exp() + 1.0;
            self.shift = log_term;
        } else {
            self.scaled += (log_term - self.shift).exp();
        }
    }

    pub(crate) fn ln(&self) -> f64 {
        self.shift + self.scaled.ln()
    }
}

/// Sums a series of positive terms whose logarithms are produced by
/// `log_term(k)`, k = 0, 1, 2, ...  Returns the logarithm of the sum.
///
/// Terms must be log-concave in k (the term ratio is nonincreasing), which
/// holds for every Gamma-ratio series built here. Summation stops once the
/// terms decrease and the geometric tail bound drops below
/// `rel_tol * partial sum`.
pub(crate) fn sum_log_series(mut log_term: impl FnMut(usize) -> f64, ctl: &SeriesControl) -> Result<f64> {
    let ln_tol = ctl.rel_tol.ln();
    let mut acc = LogSum::new();
    let mut prev = f64::NAN;
    for k in 0..ctl.max_terms {
        let lt = log_term(k);
        if lt.is_nan() || lt == f64::INFINITY {
            return Err(Error::Numeric(format!("series term {k} is not finite")));
        }
        acc.push(lt);
        if lt == f64::NEG_INFINITY {
            // Zero terms only appear for a zero argument past k = 0.
            if k > 0 {
                return Ok(acc.ln());
            }
            prev = lt;
            continue;
        }
        if k > 0 && lt < prev {
            let ratio = (lt - prev).exp();
            let tail_factor = (ratio / (1.0 - ratio)).max(1.0);
            if lt + tail_factor.ln() - acc.ln() < ln_tol {
                return Ok(acc.ln());
            }
        }
        prev = lt;
    }
    Err(Error::NonConvergence { partial: acc.ln().exp(), terms: ctl.max_terms })
}

/// Converts a log-value to `f64`, reporting overflow instead of returning `inf`.
pub(crate) fn exp_checked(ln_value: f64, what: &str) -> Result<f64> {
    let v = ln_value.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} = exp({ln_value}) exceeds the f64 range")))
    }
}
