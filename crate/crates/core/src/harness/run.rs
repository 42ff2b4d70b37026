use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::spec::{AlgorithmKind, Experiment};
use crate::arrival::{split, trial_rng, trial_seed, AdversarialOrder, GuardedOracle};
use crate::bucketing::{BucketedValuation, IndexSet, BUCKET_MAX, BUCKET_MIN};
use crate::element::{ElementId, ElementSet};
use crate::error::{Error, Result};
use crate::oracle::{RankAccess, RankOracle};
use crate::selection::{
    audit_gap_locality, check_simple_post_state, check_threshold_choice, gap_algorithm, simple_algorithm,
    threshold_algorithm, verify_gapa_guarantee, verify_sa_guarantee, SelectionOutcome, StepDecision,
};
use crate::stage2::{
    check_tuple_structure, stage2_decide, SampleContext, Stage2Choice, StructureConstants,
};

/// How trials are scheduled. Records come back in trial order either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool with `jobs` threads, or the global pool when `None`.
    /// Runs sequentially when the `parallel` feature is off.
    Parallel { jobs: Option<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub execution: Execution,
    /// Record wall time per trial. Off by default because it breaks
    /// byte-identical output.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            execution: Execution::Parallel { jobs: None },
            timing: false,
        }
    }
}

/// One algorithm run on one arrival sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub algorithm: AlgorithmKind,
    /// `random`, or the adversarial order applied to the remainder.
    pub order: String,
    pub w: usize,
    pub sample: Vec<ElementId>,
    pub strategy: String,
    /// Stage-two case for the full algorithm, empty for baselines.
    pub case: String,
    pub selected: Vec<ElementId>,
    /// Rounded value of the selection.
    pub value: f64,
    /// Rounded optimum of the whole ground set.
    pub opt_ground: f64,
    pub bound: f64,
    /// The guarantee and every audit attached to the strategy passed.
    pub holds: bool,
    pub independent: bool,
    pub discipline_violations: u64,
    pub queries: u64,
    pub valuable: usize,
    pub lower: usize,
    pub upper: usize,
    pub wall_time_us: Option<u64>,
    pub steps: Vec<StepDecision>,
    /// Which audit failed, if any.
    pub failure: Option<String>,
}

impl TrialRecord {
    pub fn failed(&self) -> bool {
        !self.holds || !self.independent || self.discipline_violations > 0
    }
}

pub(crate) struct Prepared<'a> {
    pub experiment: &'a Experiment,
    pub val: BucketedValuation,
    pub opt_ground: f64,
    pub ids: Vec<ElementId>,
}

impl<'a> Prepared<'a> {
    pub fn new(experiment: &'a Experiment) -> Result<Self> {
        let oracle = RankOracle::new(experiment.instance.clone());
        let n = experiment.instance.n();
        let val = BucketedValuation::new(experiment.values.clone(), &oracle, n)?;
        let opt_ground = val.opt_of(&oracle, &ElementSet::full(n))?;
        Ok(Prepared {
            experiment,
            val,
            opt_ground,
            ids: (0..n).map(ElementId::from).collect(),
        })
    }
}

struct Audit {
    bound: f64,
    holds: bool,
    failure: Option<String>,
}

impl Audit {
    fn pass(bound: f64) -> Self {
        Audit {
            bound,
            holds: true,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: &str) {
        if !ok && self.holds {
            self.holds = false;
            self.failure = Some(what.to_string());
        }
    }
}

fn all_buckets() -> IndexSet {
    (BUCKET_MIN..=BUCKET_MAX).collect()
}

fn audit_simple(
    oracle: &RankOracle,
    val: &BucketedValuation,
    rest: &ElementSet,
    chosen: &IndexSet,
    out: &SelectionOutcome,
) -> Result<Audit> {
    let selected = out.selected_set();
    let g = verify_sa_guarantee(oracle, val, rest, chosen, &selected)?;
    let mut audit = Audit::pass(g.bound);
    audit.check(g.holds, "simple guarantee");
    audit.check(check_simple_post_state(oracle, val, rest, chosen, &selected)?, "simple post-state");
    Ok(audit)
}

/// Runs `algorithm` on trial `trial`. A discipline violation ends the trial
/// and is recorded, not returned.
pub(crate) fn run_trial(prep: &Prepared<'_>, algorithm: AlgorithmKind, trial: u64, timing: bool) -> Result<TrialRecord> {
    let started = timing.then(Instant::now);
    let exp = prep.experiment;
    let val = &prep.val;
    let constants: &StructureConstants = &exp.constants;
    let seed = trial_seed(exp.seed, trial);
    let mut rng = trial_rng(seed);
    let seq = split(&prep.ids, &mut rng);
    let sample = seq.sample_set();
    let rest = seq.rest_set();
    let (order, stream) = if exp.adversarial_order {
        let o = AdversarialOrder::ALL[(trial % 3) as usize];
        (o.as_str().to_string(), o.apply(seq.rest(), val))
    } else {
        ("random".to_string(), seq.rest().to_vec())
    };

    let oracle = RankOracle::new(exp.instance.clone());
    let mut guard = GuardedOracle::new(&oracle);
    guard.reveal_all(seq.sample());

    let mut case = String::new();
    let mut sizes = (0, 0, 0);
    let result: Result<(SelectionOutcome, Audit)> = (|| {
        Ok(match algorithm {
            AlgorithmKind::Ma => {
                let decision = stage2_decide(&guard, val, &sample, &mut rng, constants)?;
                case = decision.case.as_str().to_string();
                let sets = &decision.diagnostics.sets;
                sizes = (sets.valuable.len(), sets.lower.len(), sets.upper.len());
                match &decision.choice {
                    Stage2Choice::Threshold(tau) => {
                        let out = threshold_algorithm(&mut guard, val, &stream, *tau);
                        let mut audit = Audit::pass(0.0);
                        audit.check(check_threshold_choice(val, &stream, *tau, &out.selected), "threshold choice");
                        (out, audit)
                    }
                    Stage2Choice::Simple(chosen) => {
                        let out = simple_algorithm(&mut guard, val, &stream, chosen)?;
                        let audit = audit_simple(&oracle, val, &rest, chosen, &out)?;
                        (out, audit)
                    }
                    Stage2Choice::Gap(tuple) => {
                        let out = gap_algorithm(&mut guard, val, &sample, &stream, tuple)?;
                        let g = verify_gapa_guarantee(&oracle, val, &sample, &rest, tuple, &out.selected_set())?;
                        let mut audit = Audit::pass(g.bound);
                        audit.check(g.holds, "gap guarantee");
                        let locality = audit_gap_locality(&oracle, val, &sample, &stream, tuple, &out)?;
                        audit.check(locality.passed(), "gap locality");
                        let ctx = SampleContext::new(&oracle, val, &sample, constants)?;
                        let structure = check_tuple_structure(&ctx, tuple, &decision.diagnostics.sets.lower)?;
                        audit.check(structure.contained && structure.dominant, "tuple structure");
                        (out, audit)
                    }
                }
            }
            AlgorithmKind::SaExhaustive => {
                let chosen = all_buckets();
                let out = simple_algorithm(&mut guard, val, &stream, &chosen)?;
                let audit = audit_simple(&oracle, val, &rest, &chosen, &out)?;
                (out, audit)
            }
            AlgorithmKind::TaOnly => {
                let tau = val.max_value(&sample);
                let out = threshold_algorithm(&mut guard, val, &stream, tau);
                let mut audit = Audit::pass(0.0);
                audit.check(check_threshold_choice(val, &stream, tau, &out.selected), "threshold choice");
                (out, audit)
            }
            AlgorithmKind::BucketThreshold => {
                let present: Vec<i32> = val.buckets_in(&sample).into_iter().collect();
                let chosen: IndexSet = if present.is_empty() {
                    IndexSet::new()
                } else {
                    let k = present[rng.random_range(0..present.len())];
                    (k..=BUCKET_MAX).collect()
                };
                let out = simple_algorithm(&mut guard, val, &stream, &chosen)?;
                let audit = audit_simple(&oracle, val, &rest, &chosen, &out)?;
                (out, audit)
            }
        })
    })();

    let (outcome, audit) = match result {
        Ok(v) => v,
        Err(Error::DisciplineViolation { id }) => {
            let out = SelectionOutcome::new(crate::selection::Strategy::Threshold);
            let audit = Audit {
                bound: 0.0,
                holds: false,
                failure: Some(format!("oracle queried unrevealed element {id}")),
            };
            (out, audit)
        }
        Err(e) => return Err(e),
    };
    let selected = outcome.selected_set();
    let independent = oracle.is_independent(&selected)?;
    let value = val.opt_of(&oracle, &selected)?;
    Ok(TrialRecord {
        trial,
        seed,
        algorithm,
        order,
        w: seq.w,
        sample: seq.sample().to_vec(),
        strategy: outcome.strategy.as_str().to_string(),
        case,
        selected: outcome.selected,
        value,
        opt_ground: prep.opt_ground,
        bound: audit.bound,
        holds: audit.holds,
        independent,
        discipline_violations: guard.violation_count(),
        queries: guard.query_count(),
        valuable: sizes.0,
        lower: sizes.1,
        upper: sizes.2,
        wall_time_us: started.map(|t| t.elapsed().as_micros() as u64),
        steps: outcome.steps,
        failure: audit.failure,
    })
}

/// Every record of an experiment, trial-major and algorithm-minor.
pub fn run_trials(experiment: &Experiment, options: &RunOptions) -> Result<Vec<TrialRecord>> {
    let prep = Prepared::new(experiment)?;
    let one = |trial: u64| -> Result<Vec<TrialRecord>> {
        experiment
            .algorithms
            .iter()
            .map(|&a| run_trial(&prep, a, trial, options.timing))
            .collect()
    };
    let per_trial: Vec<Vec<TrialRecord>> = match options.execution {
        Execution::Sequential => (0..experiment.trials).map(one).collect::<Result<_>>()?,
        Execution::Parallel { jobs } => parallel_map(experiment.trials, jobs, &one)?,
    };
    Ok(per_trial.into_iter().flatten().collect())
}

#[cfg(feature = "parallel")]
fn parallel_map<T: Send>(
    count: u64,
    jobs: Option<usize>,
    f: &(dyn Fn(u64) -> Result<T> + Sync),
) -> Result<Vec<T>> {
    use rayon::prelude::*;
    let work = || (0..count).into_par_iter().map(f).collect::<Result<Vec<T>>>();
    match jobs {
        None => work(),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidExperiment(format!("thread pool: {e}")))?
            .install(work),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T: Send>(
    count: u64,
    _jobs: Option<usize>,
    f: &(dyn Fn(u64) -> Result<T> + Sync),
) -> Result<Vec<T>> {
    (0..count).map(f).collect()
}
