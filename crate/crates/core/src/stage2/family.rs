use serde::{Deserialize, Serialize};

use super::context::{greater_than, SampleContext};
use crate::bucketing::{pow2, IndexSet};
use crate::error::Result;
use crate::oracle::RankAccess;

/// Valuable buckets of the sample and their split into a lower and an
/// upper part.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValuableSets {
    pub valuable: IndexSet,
    pub lower: IndexSet,
    pub upper: IndexSet,
}

pub fn compute_valuable<R: RankAccess + ?Sized>(ctx: &SampleContext<'_, R>) -> ValuableSets {
    let c = ctx.constants;
    let lopt = ctx.lopt_f();
    if ctx.rank_f() == 0 || lopt <= 0.0 {
        return ValuableSets::default();
    }
    let cut = lopt.log2() - c.valuable_rank_split_mult * ctx.loglog();
    let mut out = ValuableSets::default();
    for (&j, &n) in ctx.ranks() {
        let bar = (pow2(-j) * 2f64.powf(-c.valuable_shift) * lopt).powf(c.valuable_exponent);
        if n as f64 > bar {
            out.valuable.insert(j);
            if (j as f64) < cut {
                out.lower.insert(j);
            } else {
                out.upper.insert(j);
            }
        }
    }
    out
}

/// Every bucket of `k` has rank at least `(mult · Σ_K N)^γ`.
pub fn is_manageable<R: RankAccess + ?Sized>(ctx: &SampleContext<'_, R>, k: &IndexSet) -> bool {
    let c = ctx.constants;
    let bar = (c.manageable_mult * ctx.rank_sum(k) as f64).powf(c.manageable_exponent);
    k.iter().all(|&j| ctx.n(j) as f64 >= bar)
}

/// Disjoint, ordered index sets; `members[0]` holds the highest indices.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IndexPartitionFamily {
    pub members: Vec<IndexSet>,
    /// Indices reached by repeated rank doubling, highest first.
    pub doubling: Vec<i32>,
    /// Residue class (of positions in `doubling`) the family was built from.
    pub residue: usize,
}

impl IndexPartitionFamily {
    pub fn union(&self) -> IndexSet {
        self.members.iter().flatten().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Builds the family over `lset`: follow rank doubling down from the top
/// nonempty bucket, keep the heaviest residue class of that sequence, and
/// cut it into runs whose lightest bucket dominates the heaviest to the
/// power γ.
pub fn build_critical_family<R: RankAccess + ?Sized>(
    ctx: &SampleContext<'_, R>,
    lset: &IndexSet,
) -> IndexPartitionFamily {
    let c = ctx.constants;
    let mut doubling = Vec::new();
    let mut last: Option<(i32, usize)> = None;
    for &j in lset.iter().rev() {
        let n = ctx.n(j);
        let take = match last {
            None => n > 0,
            Some((_, prev)) => n >= c.doubling_factor * prev,
        };
        if take {
            doubling.push(j);
            last = Some((j, n));
        }
    }
    if doubling.is_empty() {
        return IndexPartitionFamily::default();
    }

    let m = c.residue_modulus;
    let weight = |q: usize| -> f64 {
        doubling
            .iter()
            .enumerate()
            .filter(|(pos, _)| pos % m == q)
            .map(|(_, &j)| pow2(j) * ctx.n(j) as f64)
            .sum()
    };
    let mut residue = 0;
    let mut best = weight(0);
    for q in 1..m {
        let w = weight(q);
        if w > best {
            best = w;
            residue = q;
        }
    }
    let class: Vec<i32> = doubling
        .iter()
        .enumerate()
        .filter(|(pos, _)| pos % m == residue)
        .map(|(_, &j)| j)
        .collect();

    let gamma = c.manageable_exponent;
    let mut members = Vec::new();
    let mut start = 0;
    while start < class.len() {
        let top = ctx.n(class[start]) as f64;
        let mut end = start;
        while end + 1 < class.len() && top >= (ctx.n(class[end + 1]) as f64).powf(gamma) {
            end += 1;
        }
        members.push(class[start..=end].iter().copied().collect());
        start = end + 1;
    }
    IndexPartitionFamily {
        members,
        doubling,
        residue,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyViolation {
    /// 1: LOPT share, 2: ordering, 3: uncovered rank, 4: manageable,
    /// 5: rank above an index, 6: cardinality.
    pub item: u8,
    pub detail: String,
}

/// Checks a family built for `lset` against the configured constants.
pub fn validate_critical_family<R: RankAccess + ?Sized>(
    ctx: &SampleContext<'_, R>,
    lset: &IndexSet,
    family: &IndexPartitionFamily,
) -> Result<Vec<FamilyViolation>> {
    let c = ctx.constants;
    let mut out = Vec::new();
    let mut push = |item, detail: String| out.push(FamilyViolation { item, detail });
    let h = family.union();

    if !h.is_subset(lset) {
        push(1, format!("{h:?} is not inside {lset:?}"));
    }
    let (lopt_h, lopt_l) = (ctx.lopt_of(&h), ctx.lopt_of(lset));
    if lopt_h < lopt_l / c.family_lopt_div {
        push(1, format!("LOPT(H) = {lopt_h} below LOPT(L) / {} = {}", c.family_lopt_div, lopt_l / c.family_lopt_div));
    }
    for (a, x) in family.members.iter().enumerate() {
        if x.is_empty() {
            push(2, format!("member {a} is empty"));
            continue;
        }
        for y in &family.members[..a] {
            if !y.is_empty() && !(x.last() < y.first() || y.last() < x.first()) {
                push(2, format!("{x:?} and {y:?} interleave"));
            }
        }
        let above = greater_than(&h, x);
        for &j in x {
            let u = ctx.uncov_bucket(&above, j)? as f64;
            if u < c.family_uncov_frac * ctx.n(j) as f64 {
                push(3, format!("bucket {j}: uncov {u} below {} · {}", c.family_uncov_frac, ctx.n(j)));
            }
        }
        if !is_manageable(ctx, x) {
            push(4, format!("{x:?} is not manageable"));
        }
    }
    for &i in &h {
        let single: IndexSet = [i].into();
        let mut upto = greater_than(&h, &single);
        upto.insert(i);
        let r = ctx.rank_of(&upto)?;
        if 2 * ctx.n(i) < r {
            push(5, format!("bucket {i}: 2 · {} < {r}", ctx.n(i)));
        }
    }
    let cap = c.family_card_mult * ctx.loglog();
    if family.members.len() as f64 > cap {
        push(6, format!("{} members exceed {cap}", family.members.len()));
    }
    Ok(out)
}
