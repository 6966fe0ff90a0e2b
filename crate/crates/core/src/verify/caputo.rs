use crate::error::{domain, Result};
use crate::specfun::gamma_pos;
use serde::{Deserialize, Serialize};

/// Uniform grid `w_j = j h`, `j = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaputoGrid {
    pub h: f64,
    pub steps: usize,
}

impl CaputoGrid {
    pub fn new(h: f64, steps: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return domain(format!("grid step must be positive, got {h}"));
        }
        if steps == 0 {
            return domain("grid needs at least one step");
        }
        Ok(Self { h, steps })
    }

    /// Grid of `steps` equal steps over `[0, end]`.
    pub fn covering(end: f64, steps: usize) -> Result<Self> {
        Self::new(end / steps as f64, steps)
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(|j| self.node(j))
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes().map(f).collect()
    }
}

/// L1 discretization of the Caputo derivative
/// `(1/Gamma(1-alpha)) int_0^w (w-s)^(-alpha) f'(s) ds`:
///
/// ```text
/// D f(w_n) ≈ h^(-alpha) / Gamma(2-alpha) * sum_{k=0}^{n-1} b_k (f_{n-k} - f_{n-k-1}),
/// b_k = (k+1)^(1-alpha) - k^(1-alpha)
/// ```
///
/// Entry 0 of the output is set to 0 (no history).
pub fn caputo_l1(values: &[f64], grid: &CaputoGrid, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("L1 scheme needs 0 < alpha < 1, got {alpha}"));
    }
    if values.len() != grid.steps + 1 {
        return domain(format!("expected {} samples on the grid, got {}", grid.steps + 1, values.len()));
    }
    let m = grid.steps;
    let one_minus = 1.0 - alpha;
    let weights: Vec<f64> = (0..m).map(|k| ((k + 1) as f64).powf(one_minus) - (k as f64).powf(one_minus)).collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = grid.h.powf(-alpha) / gamma_pos(2.0 - alpha)?;
    let mut out = vec![0.0; m + 1];
    for n in 1..=m {
        // diffs[n-k-1] = f_{n-k} - f_{n-k-1}
        let s: f64 = (0..n).map(|k| weights[k] * diffs[n - k - 1]).sum();
        out[n] = scale * s;
    }
    Ok(out)
}

/// Order-`alpha` derivative on the grid for `alpha` in `(0, 1]`: the L1
/// scheme below 1 and the backward difference at 1.
pub fn fractional_derivative(values: &[f64], grid: &CaputoGrid, alpha: f64) -> Result<Vec<f64>> {
    if alpha == 1.0 {
        if values.len() != grid.steps + 1 {
            return domain("sample count does not match the grid");
        }
        let mut out = vec![0.0; values.len()];
        for n in 1..values.len() {
            out[n] = (values[n] - values[n - 1]) / grid.h;
        }
        return Ok(out);
    }
    caputo_l1(values, grid, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constants_vanish() {
        let g = CaputoGrid::covering(1.0, 64).unwrap();
        let d = caputo_l1(&vec![3.5; 65], &g, 0.4).unwrap();
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn linear_function_half_order() {
        let g = CaputoGrid::covering(1.0, 256).unwrap();
        let d = caputo_l1(&g.sample(|w| w), &g, 0.5).unwrap();
        let tol = 10.0 * g.h.powf(1.5);
        for (j, w) in g.nodes().enumerate().skip(1) {
            let exact = 2.0 * (w / PI).sqrt();
            assert!((d[j] - exact).abs() <= tol, "w={w}");
        }
    }

    #[test]
    fn quadratic_rate_of_convergence() {
        // D^a w^2 = 2 w^(2-a) / Gamma(3-a); error O(h^(2-a))
        let alpha = 0.5;
        let err = |steps: usize| {
            let g = CaputoGrid::covering(1.0, steps).unwrap();
            let d = caputo_l1(&g.sample(|w| w * w), &g, alpha).unwrap();
            (d[steps] - 2.0 / gamma_pos(3.0 - alpha).unwrap()).abs()
        };
        let ratio = err(128) / err(256);
        assert!(ratio > 2f64.powf(1.5 - alpha), "ratio={ratio}");
    }

    #[test]
    fn rejects_bad_order_and_length() {
        let g = CaputoGrid::covering(1.0, 4).unwrap();
        assert!(caputo_l1(&[0.0; 5], &g, 1.0).is_err());
        assert!(caputo_l1(&[0.0; 5], &g, 0.0).is_err());
        assert!(caputo_l1(&[0.0; 4], &g, 0.5).is_err());
        assert!(CaputoGrid::new(0.0, 3).is_err());
        assert!(fractional_derivative(&[0.0; 5], &g, 1.0).is_ok());
    }
}
