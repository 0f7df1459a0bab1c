//! Experiment report structure and its text/CSV renderings.
//!
//! Reports are bit-reproducible functions of (parameters, seed): every
//! float renders through `{:e}` (shortest round-trip form), row order is
//! insertion order, and the measured runtime appears only in the text
//! rendering, never in the CSV.

use std::fmt::Write as _;

/// Outcome of one named comparison inside a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Documented discrepancy that does not fail the suite.
    Flag,
    /// Bound exceeds 1 or otherwise says nothing.
    Vacuous,
    /// Informational row, no comparison intended.
    Info,
    /// Too little convergent data to decide.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Flag => "flag",
            Verdict::Vacuous => "vacuous",
            Verdict::Info => "info",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Fails the suite? Flags and vacuous bounds deliberately do not.
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Inconclusive)
    }
}

/// One (parameter, statistic) row. `bound` names the theoretical value the
/// statistic is compared against; `comparison` spells the comparison and its
/// tolerance out for the text report.
#[derive(Debug, Clone)]
pub struct Row {
    pub param: String,
    pub statistic: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub bound: Option<f64>,
    pub verdict: Option<Verdict>,
    pub comparison: Option<String>,
}

impl Row {
    pub fn stat(param: impl Into<String>, statistic: impl Into<String>, value: f64) -> Self {
        Row {
            param: param.into(),
            statistic: statistic.into(),
            value,
            stderr: None,
            bound: None,
            verdict: None,
            comparison: None,
        }
    }

    pub fn with_stderr(mut self, se: f64) -> Self {
        self.stderr = Some(se);
        self
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_verdict(mut self, verdict: Verdict, comparison: impl Into<String>) -> Self {
        self.verdict = Some(verdict);
        self.comparison = Some(comparison.into());
        self
    }
}

/// Aggregated outcome of one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub name: String,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub seed: u64,
    pub stream: u64,
    /// Remaining parameters as ordered key/value pairs.
    pub params: Vec<(String, String)>,
    pub rows: Vec<Row>,
    pub runtime_seconds: f64,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, seed: u64, stream: u64) -> Self {
        ExperimentReport {
            name: name.into(),
            n: None,
            m: None,
            seed,
            stream,
            params: Vec::new(),
            rows: Vec::new(),
            runtime_seconds: 0.0,
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    /// True when no verdict row failed.
    pub fn passed(&self) -> bool {
        !self
            .rows
            .iter()
            .any(|r| r.verdict.map_or(false, Verdict::is_failure))
    }

    fn n_str(&self) -> String {
        self.n.map(|v| v.to_string()).unwrap_or_default()
    }

    fn m_str(&self) -> String {
        self.m.map(|v| v.to_string()).unwrap_or_default()
    }

    /// CSV header shared by all experiments.
    pub const CSV_HEADER: &'static str =
        "experiment,n,m,param,statistic,value,stderr,bound,verdict";

    /// CSV rows (no header), deterministic given (params, seed).
    pub fn to_csv_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let stderr = r.stderr.map(|v| format!("{v:e}")).unwrap_or_default();
            let bound = r.bound.map(|v| format!("{v:e}")).unwrap_or_default();
            let verdict = r.verdict.map(|v| v.as_str()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:e},{},{},{}",
                self.name,
                self.n_str(),
                self.m_str(),
                r.param,
                r.statistic,
                r.value,
                stderr,
                bound,
                verdict
            );
        }
        out
    }

    /// Human-readable rendering; mirrors the CSV fields and adds provenance
    /// and runtime.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# experiment: {}", self.name);
        let _ = writeln!(out, "# version: {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# seed: {} stream: {}", self.seed, self.stream);
        let mut paramline = String::new();
        if let Some(n) = self.n {
            let _ = write!(paramline, "n={n} ");
        }
        if let Some(m) = self.m {
            let _ = write!(paramline, "m={m} ");
        }
        for (k, v) in &self.params {
            let _ = write!(paramline, "{k}={v} ");
        }
        let _ = writeln!(out, "# params: {}", paramline.trim_end());
        for r in &self.rows {
            let mut line = format!("{:<12} {:<36} {:e}", r.param, r.statistic, r.value);
            if let Some(se) = r.stderr {
                let _ = write!(line, "  stderr={se:e}");
            }
            if let Some(b) = r.bound {
                let _ = write!(line, "  bound={b:e}");
            }
            if let Some(v) = r.verdict {
                let _ = write!(line, "  [{}]", v.as_str());
            }
            if let Some(c) = &r.comparison {
                let _ = write!(line, "  ({c})");
            }
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out, "# runtime_seconds: {:.3}", self.runtime_seconds);
        let _ = writeln!(
            out,
            "# overall: {}",
            if self.passed() { "pass" } else { "fail" }
        );
        out
    }
}

/// Renders several reports into one CSV document with a single header.
pub fn render_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::from(ExperimentReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.to_csv_rows());
    }
    out
}

/// Renders several reports as text sections.
pub fn render_text(reports: &[ExperimentReport]) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&r.to_text());
    }
    out
}
