use super::{gamma_pos, SeriesControl};
use crate::error::{domain, Error, Result};

/// Double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let r = Dd::quick_two_sum(s.hi, s.lo + t.hi);
        Dd::quick_two_sum(r.hi, r.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        Dd::quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        Dd::quick_two_sum(q1, q2).add(Dd::from_f64(q3))
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

/// Bessel function of the first kind `J_nu(x)` for `nu >= 0`, `0 <= x <= 50`.
///
/// Ascending series `(x/2)^nu / Gamma(nu+1) * sum_k (-x^2/4)^k / (k! (nu+1)_k)`.
/// The alternating sum cancels heavily for large `x` (peak terms near 1e20 at
/// x = 50), so it is carried in double-double arithmetic.
pub fn bessel_j(nu: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return domain(format!("bessel_j requires nu >= 0, got {nu}"));
    }
    if !(x >= 0.0) || !(x <= 50.0) {
        return domain(format!("bessel_j requires 0 <= x <= 50, got {x}"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let q = Dd::two_prod(0.5 * x, 0.5 * x).neg();
    let mut term = Dd::from_f64(1.0);
    let mut sum = Dd::from_f64(1.0);
    let mut peak = 1.0f64;
    let past_peak = (0.5 * x).ceil() as usize;
    let mut converged = false;
    for k in 1..ctl.max_terms {
        let kf = k as f64;
        let denom = Dd::two_sum(kf, nu).mul(Dd::from_f64(kf));
        term = term.mul(q).div(denom);
        sum = sum.add(term);
        let mag = term.hi.abs();
        peak = peak.max(mag);
        if k > past_peak && (mag <= 1e-17 * sum.hi.abs() || mag <= 1e-32 * peak) {
            converged = true;
            break;
        }
    }
    let prefactor =
        if nu.fract() == 0.0 { (0.5 * x).powi(nu as i32) } else { (0.5 * x).powf(nu) } / gamma_pos(nu + 1.0)?;
    if !converged {
        return Err(Error::NonConvergence { partial: prefactor * sum.hi, terms: ctl.max_terms });
    }
    Ok(prefactor * (sum.hi + sum.lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn j(nu: f64, x: f64) -> f64 {
        bessel_j(nu, x, &SeriesControl::default()).unwrap()
    }

    #[test]
    fn origin() {
        assert_eq!(j(0.0, 0.0), 1.0);
        assert_eq!(j(1.5, 0.0), 0.0);
    }

    #[test]
    fn half_order_closed_form() {
        for &x in &[0.3, 1.0, PI, 7.5, 20.0, 44.0] {
            let expected = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((j(0.5, x) - expected).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn j1_at_one() {
        assert!((j(1.0, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    #[test]
    fn large_argument_keeps_precision() {
        // J_0(50) = 0.055812327669251...
        assert!((j(0.0, 50.0) - 0.055_812_327_669_251_86).abs() < 1e-13);
    }

    #[test]
    fn domain_checks() {
        let ctl = SeriesControl::default();
        assert!(bessel_j(-0.5, 1.0, &ctl).is_err());
        assert!(bessel_j(1.0, -1.0, &ctl).is_err());
        assert!(bessel_j(1.0, 51.0, &ctl).is_err());
    }
}
