use serde::{Deserialize, Serialize};

use super::context::{greater_than, SampleContext};
use super::family::IndexPartitionFamily;
use crate::bucketing::IndexSet;
use crate::error::{Error, Result};
use crate::oracle::RankAccess;
use crate::selection::CriticalTuple;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Negligible,
    /// Carries the chosen useful subset.
    Useful(IndexSet),
    Burned,
    /// `upper` lies entirely above `lower`.
    Splittable { upper: IndexSet, lower: IndexSet },
    None,
}

impl Classification {
    pub fn is_leaf_label(&self) -> bool {
        matches!(self, Classification::Negligible | Classification::Useful(_) | Classification::Burned)
    }
}

/// Candidate useful subsets: singletons, then every run touching the top or
/// the bottom of `k`, in a fixed order.
fn useful_candidates(k: &IndexSet) -> Vec<IndexSet> {
    let idx: Vec<i32> = k.iter().copied().collect();
    let mut out: Vec<IndexSet> = idx.iter().map(|&j| [j].into()).collect();
    for len in 2..=idx.len() {
        out.push(idx[idx.len() - len..].iter().copied().collect());
        if len < idx.len() {
            out.push(idx[..len].iter().copied().collect());
        }
    }
    out
}

pub fn is_negligible<R: RankAccess + ?Sized>(ctx: &SampleContext<'_, R>, k: &IndexSet, h: &IndexSet) -> bool {
    ctx.lopt_of(k) < ctx.lopt_of(h) / (ctx.constants.negligible_div * ctx.log_rank())
}

/// Whether `star ⊆ k` is useful for `k` inside `h`.
pub fn is_useful_for<R: RankAccess + ?Sized>(
    ctx: &SampleContext<'_, R>,
    star: &IndexSet,
    k: &IndexSet,
    h: &IndexSet,
) -> Result<bool> {
    let c = ctx.constants;
    let lopt_k = ctx.lopt_of(k);
    if star.is_empty() || ctx.lopt_of(star) <= c.useful_frac * lopt_k {
        return Ok(false);
    }
    let gain = useful_gain(ctx, star, k, h)?;
    Ok(gain >= lopt_k / (c.useful_denom * ctx.loglog()))
}

/// `Σ_{j∈K*} 2^j (uncov(GT(K*) ∪ K*∖j, j) − uncov(GT(K) ∪ K∖j, j))`.
fn useful_gain<R: RankAccess + ?Sized>(
    ctx: &SampleContext<'_, R>,
    star: &IndexSet,
    k: &IndexSet,
    h: &IndexSet,
) -> Result<f64> {
    let mut total = 0.0;
    let star_gt = greater_than(h, star);
    let k_gt = greater_than(h, k);
    for &j in star {
        let mut a: IndexSet = star_gt.union(star).copied().collect();
        a.remove(&j);
        let mut b: IndexSet = k_gt.union(k).copied().collect();
        b.remove(&j);
        let diff = ctx.uncov_bucket(&a, j)? as f64 - ctx.uncov_bucket(&b, j)? as f64;
        total += crate::bucketing::pow2(j) * diff;
    }
    Ok(total)
}

pub fn is_burned<R: RankAccess + ?Sized>(ctx: &SampleContext<'_, R>, k: &IndexSet, h: &IndexSet) -> Result<bool> {
    Ok(ctx.spread(&greater_than(h, k), k)? > ctx.constants.burned_mult * ctx.lopt_of(k))
}

/// The lowest index cut leaving both sides above `split_frac · LOPT(K)`.
pub fn find_split<R: RankAccess + ?Sized>(ctx: &SampleContext<'_, R>, k: &IndexSet) -> Option<(IndexSet, IndexSet)> {
    let bar = ctx.constants.split_frac * ctx.lopt_of(k);
    let idx: Vec<i32> = k.iter().copied().collect();
    for cut in 1..idx.len() {
        let lower: IndexSet = idx[..cut].iter().copied().collect();
        let upper: IndexSet = idx[cut..].iter().copied().collect();
        if ctx.lopt_of(&lower) > bar && ctx.lopt_of(&upper) > bar {
            return Some((upper, lower));
        }
    }
    None
}

/// Labels `k ⊆ h`, trying negligible, useful, burned and splittable in
/// that order.
pub fn classify_subset<R: RankAccess + ?Sized>(
    ctx: &SampleContext<'_, R>,
    k: &IndexSet,
    h: &IndexSet,
) -> Result<Classification> {
    if is_negligible(ctx, k, h) {
        return Ok(Classification::Negligible);
    }
    for star in useful_candidates(k) {
        if is_useful_for(ctx, &star, k, h)? {
            return Ok(Classification::Useful(star));
        }
    }
    if is_burned(ctx, k, h)? {
        return Ok(Classification::Burned);
    }
    Ok(match find_split(ctx, k) {
        Some((upper, lower)) => Classification::Splittable { upper, lower },
        None => Classification::None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeVertex {
    pub set: IndexSet,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
    /// `None` on the root.
    pub label: Option<Classification>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalTree {
    /// `vertices[0]` is the root.
    pub vertices: Vec<TreeVertex>,
}

impl CriticalTree {
    pub fn root(&self) -> &TreeVertex {
        &self.vertices[0]
    }

    pub fn depth(&self) -> usize {
        self.vertices.iter().map(|v| v.depth).max().unwrap_or(0)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeVertex> {
        self.vertices.iter().skip(1).filter(|v| v.children.is_empty())
    }

    /// Useful leaves with their chosen subsets, highest indices first.
    pub fn useful_leaves(&self) -> Vec<(&IndexSet, &IndexSet)> {
        let mut out: Vec<_> = self
            .leaves()
            .filter_map(|v| match &v.label {
                Some(Classification::Useful(star)) => Some((&v.set, star)),
                _ => None,
            })
            .collect();
        out.sort_by(|a, b| b.0.last().cmp(&a.0.last()));
        out
    }
}

/// Root `H`, the family as its children, and splittable vertices split until
/// every leaf is negligible, useful or burned.
pub fn build_critical_tree<R: RankAccess + ?Sized>(
    ctx: &SampleContext<'_, R>,
    family: &IndexPartitionFamily,
) -> Result<CriticalTree> {
    let h = family.union();
    let mut vertices = vec![TreeVertex {
        set: h.clone(),
        parent: None,
        children: Vec::new(),
        depth: 0,
        label: None,
    }];
    let mut pending: Vec<usize> = Vec::new();
    for member in &family.members {
        let id = vertices.len();
        vertices.push(TreeVertex {
            set: member.clone(),
            parent: Some(0),
            children: Vec::new(),
            depth: 1,
            label: None,
        });
        vertices[0].children.push(id);
        pending.push(id);
    }
    pending.reverse();
    while let Some(id) = pending.pop() {
        let set = vertices[id].set.clone();
        let label = classify_subset(ctx, &set, &h)?;
        match &label {
            Classification::None => {
                return Err(Error::TreeConstruction {
                    set: set.into_iter().collect(),
                })
            }
            Classification::Splittable { upper, lower } => {
                let depth = vertices[id].depth + 1;
                for part in [upper, lower] {
                    let child = vertices.len();
                    vertices.push(TreeVertex {
                        set: part.clone(),
                        parent: Some(id),
                        children: Vec::new(),
                        depth,
                        label: None,
                    });
                    vertices[id].children.push(child);
                }
                let kids = vertices[id].children.clone();
                pending.extend(kids.into_iter().rev());
            }
            _ => {}
        }
        vertices[id].label = Some(label);
    }
    Ok(CriticalTree { vertices })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeViolation {
    /// 1: root, 2: root children, 3: leaf label, 4: internal vertex, 5: depth.
    pub item: u8,
    pub detail: String,
}

/// Re-derives every label from scratch and checks the tree shape.
pub fn validate_critical_tree<R: RankAccess + ?Sized>(
    ctx: &SampleContext<'_, R>,
    family: &IndexPartitionFamily,
    tree: &CriticalTree,
) -> Result<Vec<TreeViolation>> {
    let mut out = Vec::new();
    let mut push = |item, detail: String| out.push(TreeViolation { item, detail });
    let h = family.union();
    if tree.vertices.is_empty() || tree.root().set != h {
        push(1, "root is not the union of the family".into());
        return Ok(out);
    }
    let kids: Vec<&IndexSet> = tree.root().children.iter().map(|&c| &tree.vertices[c].set).collect();
    if kids != family.members.iter().collect::<Vec<_>>() {
        push(2, "root children differ from the family".into());
    }
    for v in tree.vertices.iter().skip(1) {
        if v.children.is_empty() {
            let ok = match &v.label {
                Some(Classification::Negligible) => is_negligible(ctx, &v.set, &h),
                Some(Classification::Useful(star)) => star.is_subset(&v.set) && is_useful_for(ctx, star, &v.set, &h)?,
                Some(Classification::Burned) => is_burned(ctx, &v.set, &h)?,
                _ => false,
            };
            if !ok {
                push(3, format!("leaf {:?} labelled {:?}", v.set, v.label));
            }
            continue;
        }
        let leafish = is_negligible(ctx, &v.set, &h)
            || is_burned(ctx, &v.set, &h)?
            || useful_candidates(&v.set)
                .iter()
                .map(|s| is_useful_for(ctx, s, &v.set, &h))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .any(|u| u);
        let split_ok = match v.children.as_slice() {
            [a, b] => {
                let (upper, lower) = (&tree.vertices[*a].set, &tree.vertices[*b].set);
                let bar = ctx.constants.split_frac * ctx.lopt_of(&v.set);
                !upper.is_empty()
                    && !lower.is_empty()
                    && upper.first() > lower.last()
                    && upper.union(lower).copied().collect::<IndexSet>() == v.set
                    && ctx.lopt_of(upper) > bar
                    && ctx.lopt_of(lower) > bar
            }
            _ => false,
        };
        if leafish || !split_ok {
            push(4, format!("internal vertex {:?}", v.set));
        }
    }
    let cap = ctx.constants.tree_depth_mult * ctx.loglog();
    if tree.depth() as f64 > cap {
        push(5, format!("depth {} exceeds {cap}", tree.depth()));
    }
    Ok(out)
}

/// For each useful leaf `K` with chosen `K*`, every `i ∈ K*` gets block
/// `K*`, bad set `GT_H(K)` and good set `K ∪ GT_H(K)`.
pub fn derive_critical_tuple(tree: &CriticalTree) -> CriticalTuple {
    let h = &tree.root().set;
    let mut tuple = CriticalTuple::new();
    for (k, star) in tree.useful_leaves() {
        let bad = greater_than(h, k);
        let good: IndexSet = k.union(&bad).copied().collect();
        tuple.assign(star, &good, &bad);
    }
    tuple
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleStructure {
    /// Every set of the tuple lies inside the lower valuable part.
    pub contained: bool,
    /// `N(j) > (mult · Σ_{D(i) ∪ B(i)} N)^γ` for every block bucket.
    pub dominant: bool,
    /// `Σ_j 2^j (uncov(B_F(D(j) ∪ B(j)∖j), B_F(j)) − uncov(B_F(G(j)∖j), B_F(j)))`.
    pub sample_value: f64,
}

pub fn check_tuple_structure<R: RankAccess + ?Sized>(
    ctx: &SampleContext<'_, R>,
    tuple: &CriticalTuple,
    lower: &IndexSet,
) -> Result<TupleStructure> {
    let c = ctx.constants;
    let mut contained = true;
    let mut dominant = true;
    let mut sample_value = 0.0;
    for i in tuple.block_indices() {
        let (b, g, d) = (tuple.block(i), tuple.good(i), tuple.bad(i));
        contained &= b.is_subset(lower) && g.is_subset(lower) && d.is_subset(lower);
        let both: IndexSet = b.union(d).copied().collect();
        let bar = (c.tuple_manageable_mult * ctx.rank_sum(&both) as f64).powf(c.manageable_exponent);
        dominant &= b.iter().all(|&j| ctx.n(j) as f64 > bar);

        let mut base = both.clone();
        base.remove(&i);
        let mut good = g.clone();
        good.remove(&i);
        let diff = ctx.uncov_bucket(&base, i)? as f64 - ctx.uncov_bucket(&good, i)? as f64;
        sample_value += crate::bucketing::pow2(i) * diff;
    }
    Ok(TupleStructure {
        contained,
        dominant,
        sample_value,
    })
}
