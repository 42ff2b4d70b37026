//! Random arrival: permutation, binomial sample size, sample/remainder
//! split, and an oracle guard that only answers queries about revealed
//! elements.

use std::cell::Cell;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bucketing::BucketedValuation;
use crate::element::{ElementId, ElementSet};
use crate::error::{Error, Result};
use crate::oracle::RankAccess;

/// The generator used for every trial.
pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-trial seed derived from the master seed and the trial index.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    splitmix64(master ^ splitmix64(trial.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Number of successes in `n` fair coin flips.
pub fn draw_w<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    (0..n).filter(|_| rng.random_bool(0.5)).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrivalSequence {
    pub perm: Vec<ElementId>,
    pub w: usize,
}

impl ArrivalSequence {
    pub fn from_parts(perm: Vec<ElementId>, w: usize) -> Self {
        assert!(w <= perm.len(), "sample size {w} exceeds {} elements", perm.len());
        ArrivalSequence { perm, w }
    }

    /// The first `w` arrivals.
    pub fn sample(&self) -> &[ElementId] {
        &self.perm[..self.w]
    }

    /// The remaining arrivals, in order.
    pub fn rest(&self) -> &[ElementId] {
        &self.perm[self.w..]
    }

    pub fn sample_set(&self) -> ElementSet {
        self.sample().iter().collect()
    }

    pub fn rest_set(&self) -> ElementSet {
        self.rest().iter().collect()
    }
}

/// Uniform random permutation of `elements`, then a `draw_w` sample size.
pub fn split<R: Rng + ?Sized>(elements: &[ElementId], rng: &mut R) -> ArrivalSequence {
    let mut perm = elements.to_vec();
    perm.shuffle(rng);
    let w = draw_w(perm.len(), rng);
    ArrivalSequence::from_parts(perm, w)
}

/// Orders used to re-run an algorithm on the same remainder set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversarialOrder {
    ValueAscending,
    ValueDescending,
    ReverseArrival,
}

impl AdversarialOrder {
    pub const ALL: [AdversarialOrder; 3] = [
        AdversarialOrder::ValueAscending,
        AdversarialOrder::ValueDescending,
        AdversarialOrder::ReverseArrival,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AdversarialOrder::ValueAscending => "value_ascending",
            AdversarialOrder::ValueDescending => "value_descending",
            AdversarialOrder::ReverseArrival => "reverse_arrival",
        }
    }

    /// Reorders `rest`; equal values keep ascending id order.
    pub fn apply(self, rest: &[ElementId], val: &BucketedValuation) -> Vec<ElementId> {
        let mut out = rest.to_vec();
        match self {
            AdversarialOrder::ValueAscending => {
                out.sort_by(|a, b| val.raw()[a.index()].total_cmp(&val.raw()[b.index()]).then(a.cmp(b)))
            }
            AdversarialOrder::ValueDescending => {
                out.sort_by(|a, b| val.raw()[b.index()].total_cmp(&val.raw()[a.index()]).then(a.cmp(b)))
            }
            AdversarialOrder::ReverseArrival => out.reverse(),
        }
        out
    }
}

/// Rank oracle restricted to the elements revealed so far.
pub struct GuardedOracle<'a, R: RankAccess + ?Sized> {
    inner: &'a R,
    revealed: ElementSet,
    queries: Cell<u64>,
    violations: Cell<u64>,
}

impl<'a, R: RankAccess + ?Sized> GuardedOracle<'a, R> {
    pub fn new(inner: &'a R) -> Self {
        GuardedOracle {
            inner,
            revealed: ElementSet::new(),
            queries: Cell::new(0),
            violations: Cell::new(0),
        }
    }

    pub fn reveal(&mut self, e: ElementId) {
        self.revealed.insert(e);
    }

    pub fn reveal_all<'b>(&mut self, elements: impl IntoIterator<Item = &'b ElementId>) {
        for &e in elements {
            self.revealed.insert(e);
        }
    }

    pub fn revealed(&self) -> &ElementSet {
        &self.revealed
    }

    pub fn query_count(&self) -> u64 {
        self.queries.get()
    }

    pub fn violation_count(&self) -> u64 {
        self.violations.get()
    }
}

impl<R: RankAccess + ?Sized> RankAccess for GuardedOracle<'_, R> {
    fn rank(&self, set: &ElementSet) -> Result<usize> {
        self.queries.set(self.queries.get() + 1);
        if let Some(id) = set.first_outside(&self.revealed) {
            self.violations.set(self.violations.get() + 1);
            return Err(Error::DisciplineViolation { id });
        }
        self.inner.rank(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{MatroidInstance, MatroidSpec};
    use crate::oracle::RankOracle;
    use std::sync::Arc;

    fn ids(n: usize) -> Vec<ElementId> {
        (0..n).map(ElementId::from).collect()
    }

    #[test]
    fn empty_ground_set_splits_empty() {
        let seq = split(&[], &mut trial_rng(1));
        assert!(seq.sample().is_empty() && seq.rest().is_empty());
        assert_eq!(draw_w(0, &mut trial_rng(1)), 0);
    }

    #[test]
    fn split_partitions_ground_set() {
        let mut rng = trial_rng(7);
        for n in 0..20 {
            let seq = split(&ids(n), &mut rng);
            let f = seq.sample_set();
            let l = seq.rest_set();
            assert!(f.is_disjoint(&l));
            assert_eq!(f.union(&l), ElementSet::full(n));
            assert_eq!(f.len(), seq.w);
        }
    }

    #[test]
    fn single_element_coin_is_fair() {
        let mut rng = trial_rng(3);
        let ones = (0..20_000).filter(|_| draw_w(1, &mut rng) == 1).count();
        assert!((ones as f64 / 20_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| trial_seed(42, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(trial_seed(42, 5), trial_seed(42, 5));
        assert_ne!(trial_seed(42, 5), trial_seed(43, 5));
    }

    #[test]
    fn guard_blocks_unrevealed_elements() {
        let oracle = RankOracle::new(Arc::new(MatroidInstance::new(MatroidSpec::Uniform { n: 4, k: 2 }).unwrap()));
        let mut guard = GuardedOracle::new(&oracle);
        assert_eq!(guard.rank(&ElementSet::new()).unwrap(), 0);
        guard.reveal(ElementId(0));
        guard.reveal(ElementId(1));
        assert_eq!(guard.rank(&[ElementId(0), ElementId(1)].iter().collect()).unwrap(), 2);
        match guard.rank(&[ElementId(0), ElementId(3)].iter().collect()) {
            Err(Error::DisciplineViolation { id }) => assert_eq!(id, ElementId(3)),
            other => panic!("{other:?}"),
        }
        assert_eq!(guard.violation_count(), 1);
        assert_eq!(guard.query_count(), 3);
    }

    #[test]
    fn adversarial_orders_keep_the_set() {
        let oracle = RankOracle::new(Arc::new(MatroidInstance::new(MatroidSpec::Uniform { n: 4, k: 4 }).unwrap()));
        let val = BucketedValuation::new(vec![3.0, 1.0, 4.0, 1.5], &oracle, 4).unwrap();
        let rest = vec![ElementId(2), ElementId(0), ElementId(3)];
        assert_eq!(
            AdversarialOrder::ValueAscending.apply(&rest, &val),
            vec![ElementId(3), ElementId(0), ElementId(2)]
        );
        assert_eq!(
            AdversarialOrder::ValueDescending.apply(&rest, &val),
            vec![ElementId(2), ElementId(0), ElementId(3)]
        );
        assert_eq!(
            AdversarialOrder::ReverseArrival.apply(&rest, &val),
            vec![ElementId(3), ElementId(0), ElementId(2)]
        );
    }
}
