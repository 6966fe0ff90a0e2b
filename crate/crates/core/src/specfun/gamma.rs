use crate::error::{domain, Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument with a finite Gamma value.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn lanczos_sum(xm1: f64) -> f64 {
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (xm1 + i as f64);
    }
    a
}

/// Gamma function for positive real arguments.
///
/// Positive integers are returned as exact running products; other
/// arguments use a Lanczos approximation (g = 7, nine coefficients) with the
/// power split in two halves so that `t^(x-1/2)` never overflows early.
pub fn gamma_pos(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return domain(format!("gamma_pos requires x > 0, got {x}"));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("Gamma({x}) exceeds the f64 range")));
    }
    if x.fract() == 0.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    if x < 0.5 {
        return Ok(gamma_pos(x + 1.0)? / x);
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (xm1 + 0.5));
    Ok((2.0 * PI).sqrt() * half * (-t).exp() * half * lanczos_sum(xm1))
}

/// Natural logarithm of Gamma for positive real arguments.
///
/// Stirling's series (five correction terms) for x >= 10, Lanczos below.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x >= 10.0 {
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let corr =
            inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
        return (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + corr;
    }
    if x < 0.5 {
        return ln_gamma(x + 1.0) - x.ln();
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (xm1 + 0.5) * t.ln() - t + lanczos_sum(xm1).ln()
}
