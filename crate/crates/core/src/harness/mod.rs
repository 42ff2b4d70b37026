//! Monte-Carlo experiments: trial execution, auditing, statistics and
//! output files.

mod output;
mod run;
mod scenarios;
mod spec;
mod summary;

pub use output::{write_outputs, write_summary, write_trials_csv, write_trials_jsonl, CSV_COLUMNS};
pub use run::{run_trials, Execution, RunOptions, TrialRecord};
pub use scenarios::{generate_scenarios, ScenarioKind};
pub use spec::{AlgorithmKind, ConstantsRef, Experiment, ExperimentSpec, ValuationSpec};
pub use summary::{
    Accumulator, AlgorithmSummary, ConsistencyCheck, ExperimentSummary, Moments, SizeStats,
};

use crate::bucketing::BucketedValuation;
use crate::error::Result;
use crate::oracle::{RankAccess, RankOracle};
use crate::stage2::{max_value_assumption_holds, super_buckets};

pub struct ExperimentResult {
    pub summary: ExperimentSummary,
    pub records: Vec<TrialRecord>,
}

/// Runs every trial of `experiment` and aggregates the records.
pub fn run_experiment(experiment: &Experiment, options: &RunOptions) -> Result<ExperimentResult> {
    let records = run_trials(experiment, options)?;
    let oracle = RankOracle::new(experiment.instance.clone());
    let n = experiment.instance.n();
    let val = BucketedValuation::new(experiment.values.clone(), &oracle, n)?;
    let ground = crate::element::ElementSet::full(n);
    let ctx = summary::SummaryContext {
        rank: oracle.rank(&ground)?,
        opt_ground: val.opt_of(&oracle, &ground)?,
        max_value_assumption: max_value_assumption_holds(&oracle, &val, &experiment.constants)?,
        super_buckets: super_buckets(&oracle, &val, &experiment.constants)?.into_iter().collect(),
    };
    let summary = summary::summarize(experiment, ctx, &records);
    Ok(ExperimentResult { summary, records })
}
