//! Files written by the CLI: `summary.txt`, `checkpoints.csv`, `trace.csv`,
//! `compare.csv` and `sweep.csv`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::HarnessError;
use crate::experiment::{CompareRow, RunOutcome, SweepRow};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn write_rows<S: Serialize>(
    path: &Path,
    rows: impl IntoIterator<Item = S>,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(io_err(path))
}

/// Writes `summary.txt`, `checkpoints.csv` and, if any replication kept
/// one, `trace.csv`. Returns the paths written.
pub fn write_run(dir: &Path, outcome: &RunOutcome) -> Result<Vec<PathBuf>, HarnessError> {
    ensure_dir(dir)?;
    let mut written = Vec::new();

    let summary = dir.join("summary.txt");
    write_text(&summary, &outcome.summary.to_text())?;
    written.push(summary);

    let checkpoints = dir.join("checkpoints.csv");
    write_rows(&checkpoints, &outcome.summary.checkpoints)?;
    written.push(checkpoints);

    if outcome.replications.iter().any(|r| !r.trace.is_empty()) {
        let trace = dir.join("trace.csv");
        write_rows(&trace, outcome.replications.iter().flat_map(|r| &r.trace))?;
        written.push(trace);
    }
    Ok(written)
}

/// One row per policy, then one `pct_vs_<other>` column per policy.
pub fn write_compare(path: &Path, rows: &[CompareRow]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = [
        "policy",
        "mean_payoff",
        "stderr_payoff",
        "mean_pseudo_regret",
        "mean_cost",
        "mean_queries",
        "later_prior_valid_rate",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(rows.iter().map(|r| format!("pct_vs_{}", r.policy)));
    w.write_record(&header)?;
    for r in rows {
        let s = &r.summary;
        let mut record = vec![
            r.policy.to_string(),
            s.payoff.mean.to_string(),
            s.payoff.stderr.to_string(),
            s.pseudo_regret.mean.to_string(),
            s.cost.mean.to_string(),
            s.queries.mean.to_string(),
            s.priors.later_rate().to_string(),
        ];
        record.extend(r.pct_vs.iter().map(|p| p.to_string()));
        w.write_record(&record)?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> Result<(), HarnessError> {
    write_rows(path, rows)
}
