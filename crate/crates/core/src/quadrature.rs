//! One-dimensional quadrature: global adaptive Gauss-Kronrod (7/15) and
//! adaptive Simpson.

use crate::error::{domain, Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an integration: value and error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate { value: kron * half, error: ((kron - gauss) * half).abs() }
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Global adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the piece with the largest error estimate until the summed error is
/// below `max(abs_tol, rel_tol * |I|)`, or fails after `max_pieces`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_pieces: usize,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return domain("integration limits must be finite");
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod15(&f, a, b);
    let mut total = first;
    heap.push(Piece { a, b, est: first });
    loop {
        if !total.value.is_finite() {
            return Err(Error::Numeric("integrand produced a non-finite value".into()));
        }
        if total.error <= abs_tol.max(rel_tol * total.value.abs()) {
            return Ok(total);
        }
        if heap.len() >= max_pieces {
            return Err(Error::Numeric(format!(
                "quadrature did not reach tolerance with {max_pieces} pieces (error {:e})",
                total.error
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        heap.push(Piece { a: worst.a, b: mid, est: left });
        heap.push(Piece { a: mid, b: worst.b, est: right });
        // refresh the running sums to keep cancellation from drifting
        if heap.len() % 64 == 0 {
            total = heap.iter().fold(Estimate { value: 0.0, error: 0.0 }, |acc, p| Estimate {
                value: acc.value + p.est.value,
                error: acc.error + p.est.error,
            });
        }
    }
}

/// Integration with the defaults used across the crate (abs 1e-13, rel 1e-13).
pub fn integrate_default<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    integrate(f, a, b, 1e-13, 1e-13, 4096).map(|e| e.value)
}

/// Adaptive Simpson with Richardson correction.
///
/// The tolerance is split between halves at each level; `max_intervals` caps
/// the number of leaf intervals.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, max_intervals: usize) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return domain("integration limits must be finite");
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut leaves = 1usize;
    let v = simpson_step(&f, a, b, fa, fm, fb, whole, abs_tol, 0, &mut leaves, max_intervals)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numeric("integrand produced a non-finite value".into()))
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    leaves: &mut usize,
    max_intervals: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth > 4 && delta.abs() <= 15.0 * tol || depth >= 60 {
        return Ok(left + right + delta / 15.0);
    }
    *leaves += 1;
    if *leaves > max_intervals {
        return Err(Error::Numeric(format!("adaptive Simpson exceeded {max_intervals} intervals")));
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, leaves, max_intervals)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, leaves, max_intervals)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate_default(|x| 3.0 * x * x - x + 1.0, -1.0, 2.0).unwrap();
        assert!((v - (8.0 + 1.0 - 1.5 + 3.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate_default(|x| (20.0 * x).cos(), 0.0, PI).unwrap();
        assert!(v.abs() < 1e-12);
        let v = integrate_default(|x| x.sin(), 0.0, PI).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_exp() {
        let v = adaptive_simpson(f64::exp, 0.0, 1.0, 1e-10, 1 << 20).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn simpson_interval_cap() {
        let err = adaptive_simpson(|x: f64| (1.0 / x.max(1e-300)).sin(), 1e-8, 1.0, 1e-14, 16);
        assert!(err.is_err());
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate_default(|x| x, 1.0, 1.0).unwrap(), 0.0);
    }
}
