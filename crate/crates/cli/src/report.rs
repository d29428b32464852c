//! Per-formula run reports and the benchmark table built from them.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use atlsat_core::formula::{format_formula, Formula};
use atlsat_core::solver::{SolverResult, Stats};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub decisions: u64,
    pub conflicts: u64,
    pub theory_conflicts: u64,
    pub theory_checks: u64,
    pub propagations: u64,
    pub learned: u64,
}

impl From<&Stats> for StatsReport {
    fn from(s: &Stats) -> Self {
        StatsReport {
            decisions: s.decisions,
            conflicts: s.conflicts,
            theory_conflicts: s.theory_conflicts,
            theory_checks: s.theory_checks,
            propagations: s.propagations,
            learned: s.learned,
        }
    }
}

/// A candidate formula skipped while selecting a sweep row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejected {
    pub seed: u64,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub id: usize,
    pub formula: String,
    pub depth: usize,
    pub connectives: usize,
    pub verdict: String,
    /// Absent when timing is omitted for reproducible output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_seconds: Option<f64>,
    pub stats: StatsReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected: Vec<Rejected>,
}

impl RunReport {
    /// Depth and connective count come from `f` itself.
    pub fn new(id: usize, f: &Formula, result: &SolverResult, timing: bool) -> Self {
        RunReport {
            id,
            formula: format_formula(f),
            depth: f.strategic_depth(),
            connectives: f.connective_count(),
            verdict: result.verdict().to_string(),
            time_seconds: timing.then(|| result.stats().wall_time.as_secs_f64()),
            stats: result.stats().into(),
            seed: None,
            rejected: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub locals: Vec<usize>,
    pub props: usize,
    pub rows: Vec<RunReport>,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Fixed-width table with one row per formula: Id, Depth, Con., time
    /// (`-` when omitted) and the verdict.
    pub fn table(&self) -> String {
        let mut out = format!("{:>3} {:>6} {:>5} {:>10}  {}\n", "Id", "Depth", "Con.", "time[s]", "verdict");
        for r in &self.rows {
            let time = r.time_seconds.map_or_else(|| "-".to_string(), |t| format!("{t:.3}"));
            let _ = writeln!(out, "{:>3} {:>6} {:>5} {:>10}  {}", r.id, r.depth, r.connectives, time, r.verdict);
        }
        out
    }
}
