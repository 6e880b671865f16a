use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

pub const REPORT_SCHEMA: &str = "iwacoh-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One verified identity with the number of instances tried and, on
/// failure, the first witness found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub identity: String,
    pub cases: usize,
    pub verdict: Verdict,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(identity: impl Into<String>) -> Self {
        Check { identity: identity.into(), cases: 0, verdict: Verdict::Pass, witness: None }
    }

    /// Records one instance; the first failure is kept as the witness.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.verdict != Verdict::Fail {
            self.verdict = Verdict::Fail;
            self.witness = Some(witness());
        }
    }

    pub fn inconclusive(&mut self, witness: impl Into<String>) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Inconclusive;
            self.witness = Some(witness.into());
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub label: String,
    pub value: String,
}

impl Entry {
    pub fn new(label: impl Into<String>, value: impl ToString) -> Self {
        Entry { label: label.into(), value: value.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub kind: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<Entry>,
    pub witnesses: Vec<Entry>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub error: Option<String>,
}

impl TaskReport {
    pub fn new(name: impl Into<String>, kind: impl Into<String>) -> Self {
        TaskReport {
            name: name.into(),
            kind: kind.into(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            witnesses: Vec::new(),
            checks: Vec::new(),
            verdict: Verdict::Pass,
            error: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn result(&mut self, label: impl Into<String>, value: impl ToString) {
        self.results.push(Entry::new(label, value));
    }

    pub fn witness(&mut self, label: impl Into<String>, value: impl ToString) {
        self.witnesses.push(Entry::new(label, value));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn failed(mut self, message: impl ToString) -> Self {
        self.error = Some(message.to_string());
        self.verdict = Verdict::Fail;
        self
    }

    /// Sets the verdict to the worst verdict among the checks.
    pub fn finish(mut self) -> Self {
        if self.error.is_none() {
            self.verdict = self.checks.iter().map(|c| c.verdict).max().unwrap_or(Verdict::Pass);
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub seed: u64,
    pub verdict: Verdict,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn new(seed: u64, tasks: Vec<TaskReport>) -> Self {
        let verdict = tasks.iter().map(|t| t.verdict).max().unwrap_or(Verdict::Pass);
        Report { schema: REPORT_SCHEMA, seed, verdict, tasks }
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict == Verdict::Pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, t) in self.tasks.iter().enumerate() {
            let _ = writeln!(out, "[{}] {} {}: {}", k + 1, t.kind, t.name, t.verdict.as_str());
            for (key, v) in &t.inputs {
                let _ = writeln!(out, "    {key} = {v}");
            }
            for e in &t.results {
                let _ = writeln!(out, "  {} = {}", e.label, e.value);
            }
            for e in &t.witnesses {
                let _ = writeln!(out, "  witness {}: {}", e.label, e.value);
            }
            for c in &t.checks {
                let _ = writeln!(out, "  [{}] {} ({} cases)", c.verdict.as_str(), c.identity, c.cases);
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "      witness: {w}");
                }
            }
            if let Some(e) = &t.error {
                let _ = writeln!(out, "  error: {e}");
            }
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        out
    }
}
