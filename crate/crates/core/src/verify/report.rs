use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// One verdict: `{check, statistic, tolerance, pass, details}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub statistic: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub details: BTreeMap<String, Value>,
}

impl CheckEntry {
    /// Passes when `statistic <= tolerance`; NaN fails.
    pub fn at_most(check: impl Into<String>, statistic: f64, tolerance: f64) -> Self {
        Self::with_verdict(check, statistic, tolerance, statistic <= tolerance)
    }

    /// Passes when `statistic > tolerance`; used for p-values.
    pub fn above(check: impl Into<String>, statistic: f64, tolerance: f64) -> Self {
        Self::with_verdict(check, statistic, tolerance, statistic > tolerance)
    }

    pub fn not_applicable(check: impl Into<String>, tolerance: f64, reason: &str) -> Self {
        let mut e = Self { check: check.into(), statistic: None, tolerance, pass: true, details: BTreeMap::new() };
        e.details.insert("not_applicable".into(), Value::from(reason));
        e
    }

    fn with_verdict(check: impl Into<String>, statistic: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            check: check.into(),
            statistic: statistic.is_finite().then_some(statistic),
            tolerance,
            pass: pass && statistic.is_finite(),
            details: BTreeMap::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    /// Non-finite floats become strings so the JSON stays valid.
    pub fn detail_f64(self, key: &str, value: f64) -> Self {
        if value.is_finite() {
            self.detail(key, value)
        } else {
            self.detail(key, value.to_string())
        }
    }

    pub fn summary_line(&self) -> String {
        let stat = self.statistic.map_or_else(|| "n/a".to_string(), |s| format!("{s:.6e}"));
        format!(
            "{} {} statistic={} tolerance={:.6e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            stat,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub manifest: BTreeMap<String, Value>,
    pub checks: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite or stringified")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert!(CheckEntry::at_most("a", 1.0, 1.0).pass);
        assert!(!CheckEntry::at_most("a", f64::NAN, 1.0).pass);
        assert!(!CheckEntry::above("p", 0.001, 0.001).pass);
        let na = CheckEntry::not_applicable("t", 1.0, "degenerate");
        assert!(na.pass && na.statistic.is_none());
    }

    #[test]
    fn json_round_trip_keeps_key_order() {
        let e =
            CheckEntry::at_most("x", 0.5, 1.0).detail("zeta", 1).detail("alpha", 2).detail_f64("inf", f64::INFINITY);
        let r = VerificationReport { manifest: BTreeMap::new(), checks: vec![e] };
        let js = r.to_json_pretty();
        assert!(js.find("\"alpha\"").unwrap() < js.find("\"zeta\"").unwrap());
        let back: VerificationReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
    }
}
