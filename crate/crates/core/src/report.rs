//! Verification verdicts, summaries and their three output formats.

use std::fmt::Write as _;

use serde::Serialize;

use crate::fixture::TableId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Discrepancy {
        expected: String,
        recomputed: String,
        note: String,
    },
    BeyondPaper {
        note: String,
    },
    PaperOnly {
        note: String,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Discrepancy { .. } => "discrepancy",
            Verdict::BeyondPaper { .. } => "beyond-paper",
            Verdict::PaperOnly { .. } => "paper-only",
        }
    }

    pub fn note(&self) -> String {
        match self {
            Verdict::Verified => String::new(),
            Verdict::Discrepancy {
                expected,
                recomputed,
                note,
            } => {
                let mut s = format!("expected {expected}, recomputed {recomputed}");
                if !note.is_empty() {
                    let _ = write!(s, "; {note}");
                }
                s
            }
            Verdict::BeyondPaper { note } | Verdict::PaperOnly { note } => note.clone(),
        }
    }
}

/// How a verdict counts towards the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Ok,
    /// Flagged by the fixture as an expected discrepancy.
    Whitelisted,
    /// Reported but not fatal (beyond-paper candidates at small degree).
    Warning,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowVerdict {
    pub key: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub severity: Severity,
}

impl RowVerdict {
    pub fn new(key: impl Into<String>, verdict: Verdict, severity: Severity) -> Self {
        Self {
            key: key.into(),
            verdict,
            severity,
        }
    }

    pub fn verified(key: impl Into<String>) -> Self {
        Self::new(key, Verdict::Verified, Severity::Ok)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub verified: usize,
    pub discrepancy: usize,
    pub beyond_paper: usize,
    pub paper_only: usize,
    pub whitelisted: usize,
    pub warnings: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub table: TableId,
    pub verdicts: Vec<RowVerdict>,
    pub summary: Summary,
    pub exit_status: i32,
}

impl VerificationReport {
    pub fn new(table: TableId, verdicts: Vec<RowVerdict>) -> Self {
        let mut summary = Summary {
            rows: verdicts.len(),
            ..Summary::default()
        };
        for v in &verdicts {
            match v.verdict {
                Verdict::Verified => summary.verified += 1,
                Verdict::Discrepancy { .. } => summary.discrepancy += 1,
                Verdict::BeyondPaper { .. } => summary.beyond_paper += 1,
                Verdict::PaperOnly { .. } => summary.paper_only += 1,
            }
            match v.severity {
                Severity::Ok => {}
                Severity::Whitelisted => summary.whitelisted += 1,
                Severity::Warning => summary.warnings += 1,
                Severity::Failure => summary.failures += 1,
            }
        }
        let exit_status = i32::from(summary.failures > 0);
        Self {
            table,
            verdicts,
            summary,
            exit_status,
        }
    }

    pub fn passed(&self) -> bool {
        self.exit_status == 0
    }

    pub fn find(&self, key: &str) -> Option<&RowVerdict> {
        self.verdicts.iter().find(|v| v.key == key)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.to_human(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    fn to_human(&self) -> String {
        let width = self
            .verdicts
            .iter()
            .map(|v| v.key.chars().count())
            .max()
            .unwrap_or(0)
            .max(3);
        let mut out = format!("table {}: {} rows\n", self.table, self.summary.rows);
        let _ = writeln!(
            out,
            "{:<width$}  {:<12}  {:<11}  NOTE",
            "KEY", "VERDICT", "SEVERITY"
        );
        for v in &self.verdicts {
            let line = format!(
                "{:<width$}  {:<12}  {:<11}  {}",
                v.key,
                v.verdict.label(),
                severity_label(v.severity),
                v.verdict.note()
            );
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} verified, {} discrepancy, {} beyond-paper, {} paper-only \
             ({} whitelisted, {} warnings, {} failures)",
            s.verified,
            s.discrepancy,
            s.beyond_paper,
            s.paper_only,
            s.whitelisted,
            s.warnings,
            s.failures
        );
        let _ = writeln!(
            out,
            "status: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["table", "key", "verdict", "severity", "note"])
            .expect("in-memory write");
        let table = self.table.to_string();
        for v in &self.verdicts {
            w.write_record([
                table.as_str(),
                v.key.as_str(),
                v.verdict.label(),
                severity_label(v.severity),
                v.verdict.note().as_str(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

fn severity_label(s: Severity) -> &'static str {
    match s {
        Severity::Ok => "ok",
        Severity::Whitelisted => "whitelisted",
        Severity::Warning => "warning",
        Severity::Failure => "failure",
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}
