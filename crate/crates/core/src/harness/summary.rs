use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::run::TrialRecord;
use super::spec::{AlgorithmKind, Experiment};
use crate::stage2::StructureConstants;

/// Streaming mean and variance. `merge` combines two disjoint streams.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    /// Sample variance (n − 1 denominator), 0 below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stddev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.stddev() / (self.count as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Aggregate over the records of one algorithm.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Accumulator {
    pub value: Moments,
    pub violations: u64,
    pub guarantee_failures: u64,
    pub dependent_selections: u64,
    pub discipline_violations: u64,
    pub cases: BTreeMap<String, u64>,
    pub strategies: BTreeMap<String, u64>,
    pub valuable: Moments,
    pub lower: Moments,
    pub upper: Moments,
    pub queries: Moments,
}

impl Accumulator {
    pub fn push(&mut self, r: &TrialRecord) {
        self.value.push(r.value);
        self.violations += u64::from(r.failed());
        self.guarantee_failures += u64::from(!r.holds);
        self.dependent_selections += u64::from(!r.independent);
        self.discipline_violations += r.discipline_violations;
        if !r.case.is_empty() {
            *self.cases.entry(r.case.clone()).or_default() += 1;
        }
        *self.strategies.entry(r.strategy.clone()).or_default() += 1;
        if r.algorithm == AlgorithmKind::Ma {
            self.valuable.push(r.valuable as f64);
            self.lower.push(r.lower as f64);
            self.upper.push(r.upper as f64);
        }
        self.queries.push(r.queries as f64);
    }

    pub fn merge(&self, other: &Accumulator) -> Accumulator {
        let add = |a: &BTreeMap<String, u64>, b: &BTreeMap<String, u64>| {
            let mut out = a.clone();
            for (k, v) in b {
                *out.entry(k.clone()).or_default() += v;
            }
            out
        };
        Accumulator {
            value: self.value.merge(&other.value),
            violations: self.violations + other.violations,
            guarantee_failures: self.guarantee_failures + other.guarantee_failures,
            dependent_selections: self.dependent_selections + other.dependent_selections,
            discipline_violations: self.discipline_violations + other.discipline_violations,
            cases: add(&self.cases, &other.cases),
            strategies: add(&self.strategies, &other.strategies),
            valuable: self.valuable.merge(&other.valuable),
            lower: self.lower.merge(&other.lower),
            upper: self.upper.merge(&other.upper),
            queries: self.queries.merge(&other.queries),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeStats {
    pub mean: f64,
    pub stddev: f64,
}

impl From<&Moments> for SizeStats {
    fn from(m: &Moments) -> Self {
        SizeStats {
            mean: m.mean,
            stddev: m.stddev(),
        }
    }
}

/// The ratio after half the trials against the ratio after all of them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub half_trials: u64,
    pub half_ratio: Option<f64>,
    pub full_ratio: Option<f64>,
    /// Standard error of the full ratio by the delta method.
    pub ratio_std_error: Option<f64>,
    /// Whether the two ratios differ by more than three standard errors.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: AlgorithmKind,
    pub trials: u64,
    pub mean_value: f64,
    pub stddev_value: f64,
    pub std_error: f64,
    /// `OPT(U) / mean value`, absent when the mean value is zero.
    pub ratio: Option<f64>,
    pub violations: u64,
    pub guarantee_failures: u64,
    pub dependent_selections: u64,
    pub discipline_violations: u64,
    pub cases: BTreeMap<String, u64>,
    pub strategies: BTreeMap<String, u64>,
    pub valuable: SizeStats,
    pub lower: SizeStats,
    pub upper: SizeStats,
    pub mean_queries: f64,
    pub consistency: ConsistencyCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub name: String,
    pub n: usize,
    pub rank: usize,
    pub trials: u64,
    pub seed: u64,
    pub adversarial_order: bool,
    /// Rounded optimum of the whole ground set.
    pub opt_ground: f64,
    pub max_value_assumption: bool,
    pub super_buckets: Vec<i32>,
    pub constants: StructureConstants,
    pub algorithms: Vec<AlgorithmSummary>,
    pub violations: u64,
}

fn ratio(opt: f64, mean: f64) -> Option<f64> {
    (mean > 0.0).then(|| opt / mean)
}

fn consistency(opt: f64, half: &Moments, full: &Moments) -> ConsistencyCheck {
    let half_ratio = ratio(opt, half.mean);
    let full_ratio = ratio(opt, full.mean);
    let ratio_std_error = full_ratio.map(|_| opt * full.std_error() / (full.mean * full.mean));
    let flagged = match (half_ratio, full_ratio, ratio_std_error) {
        (Some(h), Some(f), Some(se)) => (h - f).abs() > 3.0 * se,
        (None, None, _) => false,
        _ => true,
    };
    ConsistencyCheck {
        half_trials: half.count,
        half_ratio,
        full_ratio,
        ratio_std_error,
        flagged,
    }
}

pub(crate) struct SummaryContext {
    pub rank: usize,
    pub opt_ground: f64,
    pub max_value_assumption: bool,
    pub super_buckets: Vec<i32>,
}

pub(crate) fn summarize(experiment: &Experiment, ctx: SummaryContext, records: &[TrialRecord]) -> ExperimentSummary {
    let half = experiment.trials.div_ceil(2);
    let algorithms: Vec<AlgorithmSummary> = experiment
        .algorithms
        .iter()
        .map(|&a| {
            let mut first = Accumulator::default();
            let mut second = Accumulator::default();
            for r in records.iter().filter(|r| r.algorithm == a) {
                if r.trial < half {
                    first.push(r);
                } else {
                    second.push(r);
                }
            }
            let all = first.merge(&second);
            AlgorithmSummary {
                algorithm: a,
                trials: all.value.count,
                mean_value: all.value.mean,
                stddev_value: all.value.stddev(),
                std_error: all.value.std_error(),
                ratio: ratio(ctx.opt_ground, all.value.mean),
                violations: all.violations,
                guarantee_failures: all.guarantee_failures,
                dependent_selections: all.dependent_selections,
                discipline_violations: all.discipline_violations,
                consistency: consistency(ctx.opt_ground, &first.value, &all.value),
                cases: all.cases,
                strategies: all.strategies,
                valuable: SizeStats::from(&all.valuable),
                lower: SizeStats::from(&all.lower),
                upper: SizeStats::from(&all.upper),
                mean_queries: all.queries.mean,
            }
        })
        .collect();
    ExperimentSummary {
        name: experiment.name.clone(),
        n: experiment.instance.n(),
        rank: ctx.rank,
        trials: experiment.trials,
        seed: experiment.seed,
        adversarial_order: experiment.adversarial_order,
        opt_ground: ctx.opt_ground,
        max_value_assumption: ctx.max_value_assumption,
        super_buckets: ctx.super_buckets,
        constants: experiment.constants.clone(),
        violations: algorithms.iter().map(|a| a.violations).sum(),
        algorithms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_stream() {
        let xs: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64 * 0.5).collect();
        let whole: Moments = xs.iter().copied().collect();
        let a: Moments = xs[..17].iter().copied().collect();
        let b: Moments = xs[17..].iter().copied().collect();
        for m in [a.merge(&b), b.merge(&a)] {
            assert_eq!(m.count, whole.count);
            assert!((m.mean - whole.mean).abs() < 1e-12);
            assert!((m.variance() - whole.variance()).abs() < 1e-12);
        }
    }

    #[test]
    fn variance_of_known_sample() {
        let m: Moments = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0].into_iter().collect();
        assert_eq!(m.mean, 5.0);
        assert!((m.variance() - 32.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn empty_side_is_identity() {
        let m: Moments = [1.0, 3.0].into_iter().collect();
        assert_eq!(m.merge(&Moments::default()), m);
        assert_eq!(Moments::default().merge(&m), m);
    }

    #[test]
    fn zero_mean_has_no_ratio() {
        assert_eq!(ratio(4.0, 0.0), None);
        assert_eq!(ratio(4.0, 2.0), Some(2.0));
        let zero: Moments = [0.0, 0.0].into_iter().collect();
        assert!(!consistency(4.0, &zero, &zero).flagged);
    }
}
