//! JSON reports. Everything that varies between identical invocations sits
//! in `header`; the rest is a function of the configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::Flags;
use crate::error::{HarnessError, Result};
use crate::run::RunRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Header {
    pub fn now() -> Header {
        Header {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphInfo {
    pub n: usize,
    pub edges: usize,
    pub triangles: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub runs: usize,
    pub found: usize,
    pub success_frequency: f64,
    /// Runs that disagree with the oracle.
    pub mismatches: usize,
    pub max_rounds: u32,
    pub mean_rounds: f64,
    /// Sampling runs only: share of runs that succeeded by the critical
    /// iteration for the graph's triangle count.
    pub success_by_m_threshold: Option<f64>,
    pub m_threshold: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub header: Header,
    pub config: Flags,
    pub graph: GraphInfo,
    pub runs: Vec<RunRecord>,
    pub aggregate: Aggregate,
}

impl Aggregate {
    pub fn of(runs: &[RunRecord], mismatches: usize, m_threshold: Option<usize>) -> Aggregate {
        let count = runs.len();
        let found = runs.iter().filter(|r| r.found).count();
        let total: u64 = runs.iter().map(|r| u64::from(r.rounds)).sum();
        let by_m = m_threshold.map(|m| {
            let hit = runs
                .iter()
                .filter(|r| r.success_iteration.is_some_and(|i| i as usize <= m))
                .count();
            hit as f64 / count.max(1) as f64
        });
        Aggregate {
            runs: count,
            found,
            success_frequency: found as f64 / count.max(1) as f64,
            mismatches,
            max_rounds: runs.iter().map(|r| r.rounds).max().unwrap_or(0),
            mean_rounds: total as f64 / count.max(1) as f64,
            success_by_m_threshold: by_m,
            m_threshold,
        }
    }
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(HarnessError::io(path))
}

pub fn read_report(path: &Path) -> Result<Report> {
    let text = fs::read_to_string(path).map_err(HarnessError::io(path))?;
    Ok(serde_json::from_str(&text)?)
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: String,
    pub n: usize,
    pub runs: usize,
    pub mean_rounds: f64,
    pub max_rounds: u32,
    pub mean_iterations: Option<f64>,
    pub success_frequency: f64,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub header: Header,
    pub axis: String,
    pub table: Vec<SweepRow>,
    pub reports: Vec<Report>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("value,n,runs,mean_rounds,max_rounds,mean_iterations,success_frequency,mismatches\n");
    for r in rows {
        let iterations = r.mean_iterations.map(|x| format!("{x:.3}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{:.3},{},{},{:.4},{}",
            r.value, r.n, r.runs, r.mean_rounds, r.max_rounds, iterations, r.success_frequency, r.mismatches
        )
        .unwrap();
    }
    out
}
