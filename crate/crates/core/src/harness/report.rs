use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    /// The claim the check stands for, in a few words.
    pub anchor: String,
    pub verdict: Verdict,
    pub witness: Value,
    /// Optional checks are reported but never gate a run.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub optional: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            checks: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn push(&mut self, id: &str, anchor: &str, verdict: Verdict, witness: Value) {
        self.checks.push(Check {
            id: id.to_string(),
            anchor: anchor.to_string(),
            verdict,
            witness,
            optional: false,
        });
    }

    pub fn record(&mut self, id: &str, anchor: &str, ok: bool, witness: Value) {
        self.push(id, anchor, Verdict::from_bool(ok), witness);
    }

    /// Records `Ok((ok, witness))`, or a failure carrying the error text.
    pub fn record_result(&mut self, id: &str, anchor: &str, r: Result<(bool, Value)>) {
        match r {
            Ok((ok, w)) => self.record(id, anchor, ok, w),
            Err(e) => self.push(id, anchor, Verdict::Fail, json!({ "error": e.to_string() })),
        }
    }

    pub fn optional(&mut self, id: &str, anchor: &str, verdict: Verdict, witness: Value) {
        self.push(id, anchor, verdict, witness);
        self.checks.last_mut().expect("just pushed").optional = true;
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
    }

    /// True when every required check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.optional || c.verdict == Verdict::Pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| !c.optional && c.verdict != Verdict::Pass)
            .collect()
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// JSON without timing, identical across runs with the same inputs.
    pub fn stable_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = None;
        r.to_json()
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        for c in &self.checks {
            let tag = if c.optional { " [optional]" } else { "" };
            out.push_str(&format!("  {:<12} {}{}  {}\n", c.verdict.label(), c.id, tag, c.anchor));
        }
        let required = self.checks.iter().filter(|c| !c.optional).count();
        let failed = self.failures().len();
        out.push_str(&format!("  {} of {} required checks passed", required - failed, required));
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!(" in {ms} ms"));
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optional_checks_do_not_gate() {
        let mut r = SuiteReport::new("demo", 7);
        r.record("a", "first", true, json!(1));
        r.optional("b", "second", Verdict::Inconclusive, json!(null));
        assert!(r.passed());
        r.record_result("c", "third", Err(crate::error::Error::Invalid("boom".into())));
        assert!(!r.passed());
        assert_eq!(r.failures().len(), 1);
        let j: Value = serde_json::from_str(&r.stable_json()).unwrap();
        assert_eq!(j["checks"][1]["optional"], json!(true));
        assert!(j["checks"][0].get("optional").is_none());
        assert!(j.get("elapsed_ms").is_none());
        assert_eq!(j["checks"][2]["verdict"], json!("fail"));
    }
}
