//! Power-of-two value rounding and bucket bookkeeping.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::element::{ElementId, ElementSet};
use crate::error::{Error, Result};
use crate::oracle::RankAccess;

pub const BUCKET_MIN: i32 = -1024;
pub const BUCKET_MAX: i32 = 1024;

/// A finite set of bucket indices.
pub type IndexSet = BTreeSet<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Bucket {
    Index(i32),
    Loop,
}

impl Bucket {
    pub fn index(self) -> Option<i32> {
        match self {
            Bucket::Index(i) => Some(i),
            Bucket::Loop => None,
        }
    }
}

/// `2^i` as a float.
#[inline]
pub fn pow2(i: i32) -> f64 {
    (i as f64).exp2()
}

/// Rounds a raw value down to its power-of-two bucket.
pub fn round_value(raw: f64, is_loop: bool) -> Result<Bucket> {
    if is_loop {
        return Ok(Bucket::Loop);
    }
    if !raw.is_finite() || raw < 0.0 {
        return Err(Error::InvalidValuation(format!("value {raw} is not a finite nonnegative number")));
    }
    if raw == 0.0 {
        return Err(Error::ZeroValue {
            id: ElementId(u32::MAX),
            raw,
        });
    }
    // log2 can be off by one ulp near exact powers; correct against the
    // defining inequality 2^i <= raw < 2^(i+1).
    let mut i = raw.log2().floor() as i64;
    while i > BUCKET_MIN as i64 - 2 && (i as f64).exp2() > raw {
        i -= 1;
    }
    while i < BUCKET_MAX as i64 + 2 && ((i + 1) as f64).exp2() <= raw {
        i += 1;
    }
    if i < BUCKET_MIN as i64 || i > BUCKET_MAX as i64 {
        return Err(Error::BucketOutOfRange {
            raw,
            bucket: i,
            min: BUCKET_MIN,
            max: BUCKET_MAX,
        });
    }
    Ok(Bucket::Index(i as i32))
}

/// Raw values, their buckets, and the per-bucket element sets of the
/// ground set. Immutable after construction.
#[derive(Clone, Debug)]
pub struct BucketedValuation {
    raw: Vec<f64>,
    bucket: Vec<Bucket>,
    members: BTreeMap<i32, ElementSet>,
}

impl BucketedValuation {
    /// Rounds `raw` against the loops of the matroid behind `oracle`.
    pub fn new<R: RankAccess + ?Sized>(raw: Vec<f64>, oracle: &R, n: usize) -> Result<Self> {
        if raw.len() != n {
            return Err(Error::InvalidValuation(format!("{} values for a ground set of size {n}", raw.len())));
        }
        let loops = (0..n)
            .map(|i| Ok(oracle.rank(&ElementSet::singleton(ElementId::from(i)))? == 0))
            .collect::<Result<Vec<_>>>()?;
        Self::with_loops(raw, &loops)
    }

    pub fn with_loops(raw: Vec<f64>, loops: &[bool]) -> Result<Self> {
        let mut bucket = Vec::with_capacity(raw.len());
        let mut members: BTreeMap<i32, ElementSet> = BTreeMap::new();
        for (i, (&v, &is_loop)) in raw.iter().zip(loops).enumerate() {
            let id = ElementId::from(i);
            let b = round_value(v, is_loop).map_err(|err| match err {
                Error::ZeroValue { raw, .. } => Error::ZeroValue { id, raw },
                other => other,
            })?;
            if let Bucket::Index(j) = b {
                members.entry(j).or_default().insert(id);
            }
            bucket.push(b);
        }
        Ok(BucketedValuation { raw, bucket, members })
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn bucket(&self, e: ElementId) -> Bucket {
        self.bucket[e.index()]
    }

    /// Rounded value `2^bucket`, 0 for loops.
    pub fn value(&self, e: ElementId) -> f64 {
        match self.bucket[e.index()] {
            Bucket::Index(i) => pow2(i),
            Bucket::Loop => 0.0,
        }
    }

    /// Rounded values of the whole ground set.
    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(ElementId::from(i))).collect()
    }

    pub fn total(&self, set: &ElementSet) -> f64 {
        set.iter().map(|e| self.value(e)).sum()
    }

    /// Bucket indices that occur in `set` (loops excluded).
    pub fn buckets_in(&self, set: &ElementSet) -> IndexSet {
        set.iter().filter_map(|e| self.bucket(e).index()).collect()
    }

    /// `B_S(i)`.
    pub fn bucket_of(&self, set: &ElementSet, i: i32) -> ElementSet {
        self.members.get(&i).map(|m| m.intersection(set)).unwrap_or_default()
    }

    /// `B_S(J)`: elements of `set` whose bucket lies in `indices`.
    pub fn bucket_subset(&self, set: &ElementSet, indices: &IndexSet) -> ElementSet {
        let mut out = ElementSet::new();
        if indices.len() <= self.members.len() {
            for i in indices {
                if let Some(m) = self.members.get(i) {
                    out.union_with(&m.intersection(set));
                }
            }
        } else {
            for (i, m) in &self.members {
                if indices.contains(i) {
                    out.union_with(&m.intersection(set));
                }
            }
        }
        out
    }

    /// `Σ_i 2^i · rank(B_S(i))`.
    pub fn lopt<R: RankAccess + ?Sized>(&self, oracle: &R, set: &ElementSet) -> Result<f64> {
        let mut total = 0.0;
        for (&i, m) in &self.members {
            let part = m.intersection(set);
            if !part.is_empty() {
                total += pow2(i) * oracle.rank(&part)? as f64;
            }
        }
        Ok(total)
    }

    /// Maximum rounded value of an independent subset of `set`, with the
    /// chosen subset. Greedy by bucket, ties towards the smaller id.
    pub fn opt_with_set<R: RankAccess + ?Sized>(&self, oracle: &R, set: &ElementSet) -> Result<(ElementSet, f64)> {
        let mut chosen = ElementSet::new();
        let mut total = 0.0;
        for (&i, m) in self.members.iter().rev() {
            for e in &m.intersection(set) {
                let candidate = chosen.with(e);
                if oracle.rank(&candidate)? == candidate.len() {
                    chosen = candidate;
                    total += pow2(i);
                }
            }
        }
        Ok((chosen, total))
    }

    pub fn opt_of<R: RankAccess + ?Sized>(&self, oracle: &R, set: &ElementSet) -> Result<f64> {
        Ok(self.opt_with_set(oracle, set)?.1)
    }

    pub fn max_value(&self, set: &ElementSet) -> f64 {
        set.iter().map(|e| self.value(e)).fold(0.0, f64::max)
    }
}
