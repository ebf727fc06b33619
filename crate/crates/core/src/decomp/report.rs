use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub square: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckResult {
    pub fn pass(square: impl Into<String>) -> Self {
        Self { square: square.into(), verdict: Verdict::Pass, witness: None }
    }

    pub fn fail(square: impl Into<String>, witness: impl Serialize) -> Self {
        Self {
            square: square.into(),
            verdict: Verdict::Fail,
            witness: Some(serde_json::to_value(witness).expect("witness serializes")),
        }
    }

    pub fn skipped(square: impl Into<String>, reason: &str) -> Self {
        Self { square: square.into(), verdict: Verdict::Skipped, witness: Some(Value::String(reason.into())) }
    }

    pub fn from_outcome<W: Serialize>(square: impl Into<String>, outcome: Result<(), W>) -> Self {
        match outcome {
            Ok(()) => Self::pass(square),
            Err(w) => Self::fail(square, w),
        }
    }
}

/// Per-square verdicts of one check, in a fixed order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub check: String,
    pub results: Vec<CheckResult>,
}

impl AxiomReport {
    pub fn new(check: impl Into<String>, results: Vec<CheckResult>) -> Self {
        Self { check: check.into(), results }
    }

    /// No failures; skipped squares do not count either way.
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.results.iter().filter(|r| r.verdict == verdict).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.failures().next()
    }

    pub fn merge(check: impl Into<String>, parts: Vec<AxiomReport>) -> Self {
        let results = parts
            .into_iter()
            .flat_map(|p| {
                let prefix = p.check;
                p.results.into_iter().map(move |mut r| {
                    r.square = format!("{prefix}/{}", r.square);
                    r
                })
            })
            .collect();
        Self { check: check.into(), results }
    }
}
