use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::run::TrialRecord;
use super::summary::ExperimentSummary;
use crate::element::ElementId;
use crate::error::{Error, Result};

/// Column order of `trials.csv`. Id lists are space separated.
/// `wall_time_us` is only present when timing was requested.
pub const CSV_COLUMNS: [&str; 20] = [
    "trial",
    "seed",
    "algorithm",
    "order",
    "w",
    "sample",
    "strategy",
    "case",
    "selected",
    "value",
    "opt_ground",
    "bound",
    "holds",
    "independent",
    "discipline_violations",
    "queries",
    "valuable",
    "lower",
    "upper",
    "wall_time_us",
];

fn ids(list: &[ElementId]) -> String {
    list.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_trials_csv<W: Write>(out: W, records: &[TrialRecord], timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let columns = if timing { &CSV_COLUMNS[..] } else { &CSV_COLUMNS[..19] };
    w.write_record(columns)?;
    for r in records {
        let mut row = vec![
            r.trial.to_string(),
            r.seed.to_string(),
            r.algorithm.as_str().to_string(),
            r.order.clone(),
            r.w.to_string(),
            ids(&r.sample),
            r.strategy.clone(),
            r.case.clone(),
            ids(&r.selected),
            r.value.to_string(),
            r.opt_ground.to_string(),
            r.bound.to_string(),
            r.holds.to_string(),
            r.independent.to_string(),
            r.discipline_violations.to_string(),
            r.queries.to_string(),
            r.valuable.to_string(),
            r.lower.to_string(),
            r.upper.to_string(),
        ];
        if timing {
            row.push(r.wall_time_us.map(|t| t.to_string()).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("trials.csv", e))?;
    Ok(())
}

/// One JSON object per line, including the per-step decisions.
pub fn write_trials_jsonl<W: Write>(mut out: W, records: &[TrialRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io("trials.jsonl", e))?;
    }
    Ok(())
}

pub fn write_summary<W: Write>(mut out: W, summary: &ExperimentSummary) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, summary)?;
    out.write_all(b"\n").map_err(|e| Error::io("summary.json", e))?;
    Ok(())
}

/// Writes `summary.json` and `trials.csv` into `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, summary: &ExperimentSummary, records: &[TrialRecord], timing: bool) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let create = |name: &str| {
        let path = dir.join(name);
        File::create(&path).map(BufWriter::new).map_err(|e| Error::io(path, e))
    };
    write_summary(create("summary.json")?, summary)?;
    write_trials_csv(create("trials.csv")?, records, timing)?;
    Ok(())
}
