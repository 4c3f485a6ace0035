//! Machine-readable verification outcomes.

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "crprime-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A finding that is reported but has nothing to be asserted against.
    Recorded,
}

/// Where the expected value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A printed formula or value.
    Printed,
    Trivial,
    /// An independent computation.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Residual {
    Exact(String),
    Float(f64),
}

/// A named sub-result of a check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub label: String,
    pub value: String,
    /// `None` for purely informational entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub residual: Residual,
    pub provenance: Provenance,
    /// The formula or statement being checked.
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<Detail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl Check {
    pub fn new(id: &str, provenance: Provenance, anchor: &str) -> Self {
        Check {
            id: id.to_string(),
            status: Status::Pass,
            residual: Residual::Exact("0".into()),
            provenance,
            anchor: anchor.to_string(),
            details: Vec::new(),
            runtime_ms: None,
        }
    }

    /// Adds an asserted sub-result; a failing one fails the check.
    pub fn expect(&mut self, label: &str, value: impl ToString, ok: bool) -> &mut Self {
        let value = value.to_string();
        if !ok {
            self.status = Status::Fail;
            if self.residual == Residual::Exact("0".into()) {
                self.residual = Residual::Exact(format!("{label}: {value}"));
            }
        }
        self.details.push(Detail { label: label.to_string(), value, pass: Some(ok) });
        self
    }

    /// Adds an informational sub-result.
    pub fn note(&mut self, label: &str, value: impl ToString) -> &mut Self {
        self.details.push(Detail { label: label.to_string(), value: value.to_string(), pass: None });
        self
    }

    pub fn residual(&mut self, r: Residual) -> &mut Self {
        self.residual = r;
        self
    }

    pub fn recorded(mut self) -> Self {
        if self.status == Status::Pass {
            self.status = Status::Recorded;
        }
        self
    }

    pub fn failed(id: &str, provenance: Provenance, anchor: &str, error: impl ToString) -> Self {
        let mut c = Check::new(id, provenance, anchor);
        c.status = Status::Fail;
        c.residual = Residual::Exact(format!("error: {}", error.to_string()));
        c
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    /// Effective configuration, including the seed.
    pub config: std::collections::BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: &str, config: std::collections::BTreeMap<String, String>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        VerificationReport { schema: REPORT_SCHEMA.to_string(), suite: suite.to_string(), config, checks }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let n = |s| self.checks.iter().filter(|c| c.status == s).count();
        (n(Status::Pass), n(Status::Fail), n(Status::Recorded))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Recorded => "RECORDED",
            };
            out.push_str(&format!("{status:<9} {}  [{}]\n", c.id, c.anchor));
            for d in &c.details {
                let mark = match d.pass {
                    Some(true) => "ok ",
                    Some(false) => "BAD",
                    None => "   ",
                };
                out.push_str(&format!("          {mark} {}: {}\n", d.label, d.value));
            }
            if c.status == Status::Fail {
                let r = match &c.residual {
                    Residual::Exact(s) => s.clone(),
                    Residual::Float(x) => format!("{x:e}"),
                };
                out.push_str(&format!("          residual: {r}\n"));
            }
        }
        let (p, f, r) = self.counts();
        out.push_str(&format!("{p} passed, {f} failed, {r} recorded\n"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_sorting() {
        let mut a = Check::new("b.second", Provenance::Derived, "x = 0");
        a.expect("value", "0", true).note("closed form", "1/s");
        let mut b = Check::new("a.first", Provenance::Printed, "y = 1");
        b.expect("value", "2", false).residual(Residual::Float(0.5));
        let r = VerificationReport::new("test", Default::default(), vec![a, b]);
        assert_eq!(r.checks[0].id, "a.first");
        assert!(!r.all_passed());
        let text = r.to_json();
        let back = VerificationReport::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
        assert_eq!(r.counts(), (1, 1, 0));
    }

    #[test]
    fn recorded_does_not_fail() {
        let c = Check::new("x", Provenance::Derived, "").recorded();
        assert_eq!(c.status, Status::Recorded);
        assert!(c.passed());
    }
}
