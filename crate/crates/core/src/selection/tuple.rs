use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bucketing::IndexSet;

/// Three maps from bucket index to index sets.
///
/// * `block(i)`: the group of buckets selected together with bucket `i`;
///   an element of bucket `i` is only considered when `block(i)` is nonempty.
/// * `good(i)`: a candidate must lie in the span of the sample's elements
///   from these buckets.
/// * `bad(i)`: the sample's elements from these buckets join the current
///   selection in the independence test.
///
/// Indices absent from a map map to the empty set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalTuple {
    pub block: BTreeMap<i32, IndexSet>,
    pub good: BTreeMap<i32, IndexSet>,
    pub bad: BTreeMap<i32, IndexSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleRule {
    /// `i ∈ block(i)`.
    BlockContainsIndex,
    /// Distinct blocks are separated: `min block(i) > max block(j)` for `i > j`.
    BlocksOrdered,
    /// Equal blocks carry equal good and bad sets.
    SharedBlockSharedSets,
    /// `block(i) ∪ bad(i) ⊆ good(i)`.
    GoodCoversBlockAndBad,
    /// Higher blocks nest inside lower ones: `bad(i) ⊆ good(i) ⊆ bad(j) ⊆ good(j)`.
    Nested,
    /// `max block(i) < min bad(i)` when `bad(i)` is nonempty.
    BadAboveBlock,
    BlocksDisjoint,
    BlockBadDisjoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleViolation {
    pub rule: TupleRule,
    pub i: i32,
    pub j: Option<i32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleReport {
    pub violations: Vec<TupleViolation>,
}

impl TupleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, rule: TupleRule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for TupleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v.j {
                Some(j) => format!("{:?}({}, {})", v.rule, v.i, j),
                None => format!("{:?}({})", v.rule, v.i),
            })
            .collect();
        f.write_str(&parts.join(", "))
    }
}

fn empty() -> &'static IndexSet {
    static EMPTY: IndexSet = IndexSet::new();
    &EMPTY
}

impl CriticalTuple {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn block(&self, i: i32) -> &IndexSet {
        self.block.get(&i).unwrap_or(empty())
    }

    pub fn good(&self, i: i32) -> &IndexSet {
        self.good.get(&i).unwrap_or(empty())
    }

    pub fn bad(&self, i: i32) -> &IndexSet {
        self.bad.get(&i).unwrap_or(empty())
    }

    /// Indices with a nonempty block.
    pub fn block_indices(&self) -> IndexSet {
        self.block.iter().filter(|(_, b)| !b.is_empty()).map(|(&i, _)| i).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.block_indices().is_empty()
    }

    /// Assigns `block(i) = block`, `good(i) = good`, `bad(i) = bad` for every
    /// `i` in `block`.
    pub fn assign(&mut self, block: &IndexSet, good: &IndexSet, bad: &IndexSet) {
        for &i in block {
            self.block.insert(i, block.clone());
            self.good.insert(i, good.clone());
            self.bad.insert(i, bad.clone());
        }
    }

    /// Checks every structural rule; an empty tuple is valid.
    pub fn validate(&self) -> TupleReport {
        let idx: Vec<i32> = self.block_indices().into_iter().collect();
        let mut out = Vec::new();
        let mut push = |rule, i, j| out.push(TupleViolation { rule, i, j });

        for &i in &idx {
            let (b, g, d) = (self.block(i), self.good(i), self.bad(i));
            if !b.contains(&i) {
                push(TupleRule::BlockContainsIndex, i, None);
            }
            if !b.is_subset(g) || !d.is_subset(g) {
                push(TupleRule::GoodCoversBlockAndBad, i, None);
            }
            if let (Some(&bmax), Some(&dmin)) = (b.last(), d.first()) {
                if bmax >= dmin {
                    push(TupleRule::BadAboveBlock, i, None);
                }
            }
            if !b.is_disjoint(d) {
                push(TupleRule::BlockBadDisjoint, i, None);
            }
        }

        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[..a] {
                // i > j, both blocks nonempty
                let (bi, bj) = (self.block(i), self.block(j));
                let (bi_min, bj_max) = (*bi.first().unwrap(), *bj.last().unwrap());
                if bi == bj {
                    if self.good(i) != self.good(j) || self.bad(i) != self.bad(j) {
                        push(TupleRule::SharedBlockSharedSets, i, Some(j));
                    }
                    continue;
                }
                if bi_min <= bj_max {
                    push(TupleRule::BlocksOrdered, i, Some(j));
                }
                if !bi.is_disjoint(bj) {
                    push(TupleRule::BlocksDisjoint, i, Some(j));
                }
                if bi_min > bj_max {
                    let nested = self.bad(i).is_subset(self.good(i))
                        && self.good(i).is_subset(self.bad(j))
                        && self.bad(j).is_subset(self.good(j));
                    if !nested {
                        push(TupleRule::Nested, i, Some(j));
                    }
                }
            }
        }
        TupleReport { violations: out }
    }
}
