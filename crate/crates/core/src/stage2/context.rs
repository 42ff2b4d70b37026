use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use super::StructureConstants;
use crate::bucketing::{pow2, BucketedValuation, IndexSet};
use crate::element::ElementSet;
use crate::error::Result;
use crate::oracle::RankAccess;

/// The revealed sample with per-bucket ranks `N(j) = rank(B_F(j))` and a
/// cache of ranks of bucket unions.
pub struct SampleContext<'a, R: RankAccess + ?Sized> {
    pub oracle: &'a R,
    pub val: &'a BucketedValuation,
    pub sample: &'a ElementSet,
    pub constants: &'a StructureConstants,
    ranks: BTreeMap<i32, usize>,
    rank_f: usize,
    lopt_f: f64,
    unions: RefCell<HashMap<IndexSet, usize>>,
}

impl<'a, R: RankAccess + ?Sized> SampleContext<'a, R> {
    pub fn new(
        oracle: &'a R,
        val: &'a BucketedValuation,
        sample: &'a ElementSet,
        constants: &'a StructureConstants,
    ) -> Result<Self> {
        let mut ranks = BTreeMap::new();
        let mut lopt_f = 0.0;
        for j in val.buckets_in(sample) {
            let r = oracle.rank(&val.bucket_of(sample, j))?;
            lopt_f += pow2(j) * r as f64;
            ranks.insert(j, r);
        }
        let rank_f = oracle.rank(sample)?;
        Ok(SampleContext {
            oracle,
            val,
            sample,
            constants,
            ranks,
            rank_f,
            lopt_f,
            unions: RefCell::new(HashMap::new()),
        })
    }

    /// `N(j)`; zero for buckets absent from the sample.
    pub fn n(&self, j: i32) -> usize {
        self.ranks.get(&j).copied().unwrap_or(0)
    }

    /// Buckets present in the sample with their ranks.
    pub fn ranks(&self) -> &BTreeMap<i32, usize> {
        &self.ranks
    }

    pub fn rank_f(&self) -> usize {
        self.rank_f
    }

    pub fn lopt_f(&self) -> f64 {
        self.lopt_f
    }

    /// `log2 log2 rank(F)`, floored at 1 so that it can divide.
    pub fn loglog(&self) -> f64 {
        loglog(self.rank_f)
    }

    /// `log2 rank(F)`, floored at 1.
    pub fn log_rank(&self) -> f64 {
        (self.rank_f.max(2) as f64).log2()
    }

    /// `rank(B_F(K))`.
    pub fn rank_of(&self, k: &IndexSet) -> Result<usize> {
        match k.len() {
            0 => return Ok(0),
            1 => return Ok(self.n(*k.first().unwrap())),
            _ => {}
        }
        if let Some(&r) = self.unions.borrow().get(k) {
            return Ok(r);
        }
        let r = self.oracle.rank(&self.val.bucket_subset(self.sample, k))?;
        self.unions.borrow_mut().insert(k.clone(), r);
        Ok(r)
    }

    /// `LOPT(B_F(K)) = Σ_{j∈K} 2^j · N(j)`.
    pub fn lopt_of(&self, k: &IndexSet) -> f64 {
        k.iter().map(|&j| pow2(j) * self.n(j) as f64).sum()
    }

    /// `Σ_{j∈K} N(j)`.
    pub fn rank_sum(&self, k: &IndexSet) -> usize {
        k.iter().map(|&j| self.n(j)).sum()
    }

    /// `uncov(B_F(R), B_F(j))`.
    pub fn uncov_bucket(&self, r: &IndexSet, j: i32) -> Result<usize> {
        if self.n(j) == 0 {
            return Ok(0);
        }
        let mut with = r.clone();
        with.insert(j);
        Ok(self.rank_of(&with)? - self.rank_of(r)?)
    }

    /// `Σ_{j∈K} 2^j · uncov(B_F(base ∪ K∖{j}), B_F(j))`.
    pub fn spread(&self, base: &IndexSet, k: &IndexSet) -> Result<f64> {
        let mut total = 0.0;
        for &j in k {
            let mut others: IndexSet = base.union(k).copied().collect();
            others.remove(&j);
            total += pow2(j) * self.uncov_bucket(&others, j)? as f64;
        }
        Ok(total)
    }
}

pub(crate) fn loglog(rank: usize) -> f64 {
    (rank.max(4) as f64).log2().log2().max(1.0)
}

/// `GT_H(K) = {i ∈ H : i > max K}`; all of `H` when `K` is empty.
pub fn greater_than(h: &IndexSet, k: &IndexSet) -> IndexSet {
    match k.last() {
        Some(&m) => h.range(m + 1..).copied().collect(),
        None => h.clone(),
    }
}
