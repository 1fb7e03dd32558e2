//! One row per check, serialized identically to CSV and JSON.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::rng::StreamInfo;

/// A reported quantity: exact values travel as strings, floats as numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Exact(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x:e}"),
            Value::Exact(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Number(x)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Exact(s)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Exact(s.to_owned())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub test_id: String,
    pub citation: String,
    pub theory: Value,
    pub estimate: Value,
    /// Standard error, or `"exact"`.
    pub uncertainty: Value,
    pub tolerance: Value,
    pub verdict: Verdict,
    pub runtime_ms: u64,
    pub seed: Option<StreamInfo>,
}

impl ComparisonReport {
    /// `pass` iff `|estimate - theory| <= tolerance`.
    pub fn numeric(
        test_id: impl Into<String>,
        citation: impl Into<String>,
        theory: f64,
        estimate: f64,
        uncertainty: Option<f64>,
        tolerance: f64,
    ) -> Self {
        let ok = (estimate - theory).abs() <= tolerance;
        Self {
            test_id: test_id.into(),
            citation: citation.into(),
            theory: theory.into(),
            estimate: estimate.into(),
            uncertainty: uncertainty.map_or_else(|| "exact".into(), Value::Number),
            tolerance: tolerance.into(),
            verdict: Verdict::from_bool(ok),
            runtime_ms: 0,
            seed: None,
        }
    }

    /// `pass` iff the two exact strings agree.
    pub fn exact(
        test_id: impl Into<String>,
        citation: impl Into<String>,
        theory: impl Into<String>,
        estimate: impl Into<String>,
    ) -> Self {
        let (theory, estimate) = (theory.into(), estimate.into());
        Self {
            test_id: test_id.into(),
            citation: citation.into(),
            verdict: Verdict::from_bool(theory == estimate),
            theory: Value::Exact(theory),
            estimate: Value::Exact(estimate),
            uncertainty: "exact".into(),
            tolerance: Value::Number(0.0),
            runtime_ms: 0,
            seed: None,
        }
    }

    /// `pass` iff `estimate <= bound` (KS-style one-sided gates; theory is 0).
    pub fn upper_bound(
        test_id: impl Into<String>,
        citation: impl Into<String>,
        estimate: f64,
        bound: f64,
    ) -> Self {
        Self::numeric(test_id, citation, 0.0, estimate, None, bound)
            .with_verdict(estimate >= 0.0 && estimate <= bound)
    }

    pub fn with_seed(mut self, seed: StreamInfo) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_runtime_ms(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }

    pub fn with_uncertainty(mut self, u: f64) -> Self {
        self.uncertainty = Value::Number(u);
        self
    }

    fn with_verdict(mut self, ok: bool) -> Self {
        self.verdict = Verdict::from_bool(ok);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    fn fields(&self, with_runtime: bool) -> Vec<String> {
        vec![
            self.test_id.clone(),
            self.citation.clone(),
            self.theory.to_string(),
            self.estimate.to_string(),
            self.uncertainty.to_string(),
            self.tolerance.to_string(),
            self.verdict.to_string(),
            if with_runtime {
                self.runtime_ms.to_string()
            } else {
                String::new()
            },
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "test_id",
    "citation",
    "theory",
    "estimate",
    "uncertainty",
    "tolerance",
    "verdict",
    "runtime_ms",
    "seed",
];

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

pub fn to_csv(reports: &[ComparisonReport]) -> String {
    let header: Vec<String> = CSV_HEADER.iter().map(|s| s.to_string()).collect();
    let mut out = csv_line(&header);
    for r in reports {
        out.push_str(&csv_line(&r.fields(true)));
    }
    out
}

pub fn to_json(reports: &[ComparisonReport]) -> Result<String> {
    Ok(serde_json::to_string_pretty(reports)? + "\n")
}

/// SHA-256 over the CSV rendering with `runtime_ms` blanked, so identical
/// configurations hash identically regardless of timing.
pub fn digest(reports: &[ComparisonReport]) -> String {
    let mut h = Sha256::new();
    for r in reports {
        h.update(csv_line(&r.fields(false)).as_bytes());
    }
    hex::encode(h.finalize())
}

/// Writes `<stem>.csv`, `<stem>.json` and `<stem>.sha256` into `dir`.
pub fn write_reports(dir: &Path, stem: &str, reports: &[ComparisonReport]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{stem}.csv")), to_csv(reports))?;
    std::fs::write(dir.join(format!("{stem}.json")), to_json(reports)?)?;
    let mut f = std::fs::File::create(dir.join(format!("{stem}.sha256")))?;
    writeln!(f, "{}", digest(reports))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert!(ComparisonReport::numeric("a", "c", 1.0, 1.05, Some(0.01), 0.1).passed());
        assert!(!ComparisonReport::numeric("a", "c", 1.0, 1.2, Some(0.01), 0.1).passed());
        assert!(ComparisonReport::exact("a", "c", "1/2", "1/2").passed());
        assert!(!ComparisonReport::exact("a", "c", "1/2", "1/3").passed());
        assert!(ComparisonReport::upper_bound("ks", "c", 0.01, 0.03).passed());
        assert!(!ComparisonReport::upper_bound("ks", "c", 0.04, 0.03).passed());
    }

    #[test]
    fn csv_quotes_and_digest_ignores_runtime() {
        let r = ComparisonReport::exact("id", "a, \"b\"", "0/1 + 4/9*sqrt2", "0/1 + 4/9*sqrt2");
        let csv = to_csv(std::slice::from_ref(&r));
        assert!(csv.starts_with("test_id,citation,theory,estimate,uncertainty,tolerance,verdict,runtime_ms,seed\n"));
        assert!(csv.contains("\"a, \"\"b\"\"\""));
        let d1 = digest(std::slice::from_ref(&r));
        let d2 = digest(&[r.clone().with_runtime_ms(99)]);
        assert_eq!(d1, d2);
        assert_ne!(d1, digest(&[r.with_seed(StreamInfo { seed: 1, stream_index: 0 })]));
    }

    #[test]
    fn json_round_trip() {
        let rs = vec![
            ComparisonReport::numeric("n", "c", 0.5, 0.49, Some(0.003), 0.012),
            ComparisonReport::exact("e", "c", "-2/9", "-2/9"),
        ];
        let back: Vec<ComparisonReport> = serde_json::from_str(&to_json(&rs).unwrap()).unwrap();
        assert_eq!(back, rs);
    }
}
