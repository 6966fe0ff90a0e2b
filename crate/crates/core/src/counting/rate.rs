use crate::error::{domain, Error, Result};
use crate::quadrature::adaptive_simpson;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Absolute tolerance of the quadrature used for user-supplied rates.
pub const CUMULATIVE_ABS_TOL: f64 = 1e-10;
/// Interval cap of that quadrature.
pub const CUMULATIVE_MAX_INTERVALS: usize = 1 << 20;

/// A user-supplied intensity `s -> lambda(s)`.
#[derive(Clone)]
pub struct CustomRate(pub Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl fmt::Debug for CustomRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomRate(..)")
    }
}

/// Time-dependent intensity `lambda(s)`, `s >= 0`.
///
/// Serializes as `{"kind": ..., "params": {...}}`. Custom callables cannot be
/// serialized.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum RateFunction {
    /// `lambda(s) = lambda`
    Constant { lambda: f64 },
    /// `lambda(s) = a * s^b`, `b > -1`
    Power { a: f64, b: f64 },
    /// `lambda(s) = values[i]` for `starts[i] <= s < starts[i+1]`; the last
    /// value continues forever. `starts[0]` must be 0.
    Piecewise { starts: Vec<f64>, values: Vec<f64> },
    #[serde(skip)]
    Custom(CustomRate),
}

impl PartialEq for RateFunction {
    fn eq(&self, other: &Self) -> bool {
        use RateFunction::*;
        match (self, other) {
            (Constant { lambda: a }, Constant { lambda: b }) => a == b,
            (Power { a, b }, Power { a: c, b: d }) => a == c && b == d,
            (Piecewise { starts: s1, values: v1 }, Piecewise { starts: s2, values: v2 }) => s1 == s2 && v1 == v2,
            (Custom(a), Custom(b)) => Arc::ptr_eq(&a.0, &b.0),
            _ => false,
        }
    }
}

impl RateFunction {
    pub fn constant(lambda: f64) -> Result<Self> {
        let r = RateFunction::Constant { lambda };
        r.validate()?;
        Ok(r)
    }

    pub fn power(a: f64, b: f64) -> Result<Self> {
        let r = RateFunction::Power { a, b };
        r.validate()?;
        Ok(r)
    }

    pub fn piecewise(starts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let r = RateFunction::Piecewise { starts, values };
        r.validate()?;
        Ok(r)
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RateFunction::Custom(CustomRate(Arc::new(f)))
    }

    /// Checks the parameter constraints of the analytic kinds.
    pub fn validate(&self) -> Result<()> {
        match self {
            RateFunction::Constant { lambda } => {
                if !(*lambda >= 0.0 && lambda.is_finite()) {
                    return domain(format!("constant rate must be finite and >= 0, got {lambda}"));
                }
            }
            RateFunction::Power { a, b } => {
                if !(*a >= 0.0 && a.is_finite()) {
                    return domain(format!("power rate coefficient must be >= 0, got {a}"));
                }
                if !(*b > -1.0 && b.is_finite()) {
                    return domain(format!("power rate exponent must exceed -1, got {b}"));
                }
            }
            RateFunction::Piecewise { starts, values } => {
                if starts.is_empty() || starts.len() != values.len() {
                    return domain("piecewise rate needs matching, nonempty starts and values");
                }
                if starts[0] != 0.0 {
                    return domain("piecewise rate must start at time 0");
                }
                if starts.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
                    return domain("piecewise starts must be strictly increasing and finite");
                }
                if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                    return domain("piecewise values must be finite and >= 0");
                }
            }
            RateFunction::Custom(_) => {}
        }
        Ok(())
    }

    /// `lambda(s)`.
    pub fn rate(&self, s: f64) -> f64 {
        match self {
            RateFunction::Constant { lambda } => *lambda,
            RateFunction::Power { a, b } => a * s.powf(*b),
            RateFunction::Piecewise { starts, values } => {
                let i = starts.partition_point(|&st| st <= s).saturating_sub(1);
                values[i]
            }
            RateFunction::Custom(f) => (f.0)(s),
        }
    }

    /// `Lambda(t) = int_0^t lambda(s) ds`.
    pub fn cumulative(&self, t: f64) -> Result<f64> {
        cumulative_rate(self, t)
    }

    /// Smallest `s` in `[0, t]` with `Lambda(s) = target`, by bisection.
    /// Requires `0 <= target <= Lambda(t)`.
    pub fn inverse_cumulative(&self, target: f64, t: f64) -> Result<f64> {
        let total = self.cumulative(t)?;
        if !(target >= 0.0 && target <= total) {
            return domain(format!("target {target} outside [0, {total}]"));
        }
        if let RateFunction::Constant { lambda } = self {
            return Ok(if *lambda > 0.0 { target / lambda } else { 0.0 });
        }
        if let RateFunction::Power { a, b } = self {
            if *a > 0.0 {
                return Ok((target * (b + 1.0) / a).powf(1.0 / (b + 1.0)).min(t));
            }
        }
        let (mut lo, mut hi) = (0.0, t);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cumulative(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * t.max(1.0) {
                break;
            }
        }
        Ok(hi)
    }
}

/// `Lambda(t)`: closed forms for the analytic kinds, adaptive Simpson
/// (abs tol 1e-10, at most 2^20 intervals) for custom callables.
pub fn cumulative_rate(rate: &RateFunction, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("time must be finite and >= 0, got {t}"));
    }
    rate.validate()?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let v = match rate {
        RateFunction::Constant { lambda } => lambda * t,
        RateFunction::Power { a, b } => a * t.powf(b + 1.0) / (b + 1.0),
        RateFunction::Piecewise { starts, values } => {
            let mut acc = 0.0;
            for (i, (&st, &v)) in starts.iter().zip(values).enumerate() {
                if st >= t {
                    break;
                }
                let end = starts.get(i + 1).copied().unwrap_or(f64::INFINITY).min(t);
                acc += v * (end - st);
            }
            acc
        }
        RateFunction::Custom(f) => {
            let v = adaptive_simpson(|s| (f.0)(s), 0.0, t, CUMULATIVE_ABS_TOL, CUMULATIVE_MAX_INTERVALS)?;
            if v < 0.0 {
                return Err(Error::Domain(format!("custom rate integrates to a negative value {v}")));
            }
            v
        }
    };
    Ok(v)
}

/// Parses the mini-grammar `const:<l>`, `power:<a>,<b>`,
/// `piecewise:<t0>:<v0>,<t1>:<v1>,...` (each `ti:vi` starts a segment).
impl FromStr for RateFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').ok_or_else(|| Error::Domain(format!("rate `{s}` is missing `kind:`")))?;
        let num = |x: &str| -> Result<f64> {
            x.trim().parse::<f64>().map_err(|_| Error::Domain(format!("`{x}` is not a number in rate `{s}`")))
        };
        match kind {
            "const" | "constant" => RateFunction::constant(num(body)?),
            "power" => {
                let (a, b) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Domain(format!("power rate needs `a,b`, got `{body}`")))?;
                RateFunction::power(num(a)?, num(b)?)
            }
            "piecewise" => {
                let mut starts = Vec::new();
                let mut values = Vec::new();
                for seg in body.split(',') {
                    let (t, v) = seg
                        .split_once(':')
                        .ok_or_else(|| Error::Domain(format!("piecewise segment `{seg}` needs `t:v`")))?;
                    starts.push(num(t)?);
                    values.push(num(v)?);
                }
                RateFunction::piecewise(starts, values)
            }
            other => domain(format!("unknown rate kind `{other}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn closed_forms() {
        assert_eq!(RateFunction::constant(3.0).unwrap().cumulative(2.0).unwrap(), 6.0);
        let p = RateFunction::power(2.0, 1.0).unwrap();
        assert!((p.cumulative(3.0).unwrap() - 9.0).abs() < 1e-14);
        let pw = RateFunction::piecewise(vec![0.0, 1.0, 2.5], vec![1.0, 3.0, 0.5]).unwrap();
        assert!((pw.cumulative(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((pw.cumulative(2.0).unwrap() - 4.0).abs() < 1e-15);
        assert!((pw.cumulative(3.5).unwrap() - (1.0 + 4.5 + 0.5)).abs() < 1e-15);
        assert_eq!(pw.rate(1.0), 3.0);
        assert_eq!(pw.rate(10.0), 0.5);
    }

    #[test]
    fn custom_rate_quadrature() {
        let r = RateFunction::custom(f64::exp);
        assert!((r.cumulative(1.0).unwrap() - (E - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn zero_time_and_negative_time() {
        let r = RateFunction::constant(2.0).unwrap();
        assert_eq!(r.cumulative(0.0).unwrap(), 0.0);
        assert!(matches!(r.cumulative(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_parameters() {
        assert!(RateFunction::constant(-1.0).is_err());
        assert!(RateFunction::power(1.0, -1.0).is_err());
        assert!(RateFunction::piecewise(vec![0.5], vec![1.0]).is_err());
        assert!(RateFunction::piecewise(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(RateFunction::piecewise(vec![0.0], vec![-1.0]).is_err());
    }

    #[test]
    fn parse_grammar() {
        assert_eq!("const:1.5".parse::<RateFunction>().unwrap(), RateFunction::Constant { lambda: 1.5 });
        assert_eq!("power:2,0.5".parse::<RateFunction>().unwrap(), RateFunction::Power { a: 2.0, b: 0.5 });
        assert_eq!(
            "piecewise:0:1,2:3".parse::<RateFunction>().unwrap(),
            RateFunction::Piecewise { starts: vec![0.0, 2.0], values: vec![1.0, 3.0] }
        );
        assert!("linear:1".parse::<RateFunction>().is_err());
        assert!("const:x".parse::<RateFunction>().is_err());
        assert!("power:1".parse::<RateFunction>().is_err());
    }

    #[test]
    fn json_form() {
        let r = RateFunction::power(2.0, 1.0).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, r#"{"kind":"power","params":{"a":2.0,"b":1.0}}"#);
        assert_eq!(serde_json::from_str::<RateFunction>(&js).unwrap(), r);
        assert!(serde_json::to_string(&RateFunction::custom(|s| s)).is_err());
    }

    #[test]
    fn inverse_cumulative_roundtrip() {
        let rates = [
            RateFunction::constant(2.0).unwrap(),
            RateFunction::power(3.0, 0.5).unwrap(),
            RateFunction::piecewise(vec![0.0, 0.4], vec![1.0, 5.0]).unwrap(),
        ];
        for r in &rates {
            let total = r.cumulative(1.0).unwrap();
            for &frac in &[0.0, 0.1, 0.5, 0.9] {
                let s = r.inverse_cumulative(frac * total, 1.0).unwrap();
                assert!((r.cumulative(s).unwrap() - frac * total).abs() < 1e-12);
            }
        }
    }
}
