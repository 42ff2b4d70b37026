//! Brute-force reference oracles written straight from the definitions of
//! each family. Sets are bitmasks over at most 16 elements.
#![allow(dead_code)]

use msl_core::{ElementId, ElementSet, MatroidSpec};

pub fn to_set(mask: u32) -> ElementSet {
    ElementSet::from_mask(mask as u64)
}

pub fn to_mask(set: &ElementSet) -> u32 {
    set.iter().fold(0, |m, e| m | 1 << e.index())
}

pub fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

pub fn id(i: usize) -> ElementId {
    ElementId::from(i)
}

/// All submasks of `mask`, including 0 and `mask`.
pub fn submasks(mask: u32) -> Vec<u32> {
    let mut out = vec![0];
    let mut s = mask;
    while s != 0 {
        out.push(s);
        s = (s - 1) & mask;
    }
    out
}

fn graph_is_forest(vertices: usize, edges: &[[usize; 2]], mask: u32) -> bool {
    // A graph is a forest iff |E| = |V| - #components.
    let mut adj = vec![Vec::new(); vertices];
    let mut count = 0;
    for i in members(mask) {
        let [a, b] = edges[i];
        if a == b {
            return false;
        }
        adj[a].push(b);
        adj[b].push(a);
        count += 1;
    }
    let mut seen = vec![false; vertices];
    let mut components = 0;
    for s in 0..vertices {
        if seen[s] {
            continue;
        }
        components += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count == vertices - components
}

fn hall_condition(adjacency: &[Vec<usize>], mask: u32) -> bool {
    submasks(mask).into_iter().all(|t| {
        let mut nbrs = 0u64;
        for i in members(t) {
            for &r in &adjacency[i] {
                nbrs |= 1 << r;
            }
        }
        nbrs.count_ones() >= t.count_ones()
    })
}

fn column_bits(col: &str) -> u64 {
    col.bytes().enumerate().fold(0, |m, (r, c)| if c == b'1' { m | 1 << r } else { m })
}

fn no_dependent_subset(columns: &[String], mask: u32) -> bool {
    submasks(mask)
        .into_iter()
        .filter(|&t| t != 0)
        .all(|t| members(t).fold(0u64, |acc, i| acc ^ column_bits(&columns[i])) != 0)
}

/// Independence of `mask` straight from the family definition.
pub fn brute_independent(spec: &MatroidSpec, mask: u32) -> bool {
    match spec {
        MatroidSpec::Uniform { k, .. } => mask.count_ones() as usize <= *k,
        MatroidSpec::Partition { block_sizes, caps } => {
            let mut start = 0;
            block_sizes.iter().zip(caps).all(|(&size, &cap)| {
                let block = ((1u64 << size) - 1) << start;
                start += size;
                ((mask as u64) & block).count_ones() as usize <= cap
            })
        }
        MatroidSpec::Graphic { vertices, edges } => graph_is_forest(*vertices, edges, mask),
        MatroidSpec::Laminar { sets, caps, .. } => sets
            .iter()
            .zip(caps)
            .all(|(set, &cap)| set.iter().filter(|&&i| mask >> i & 1 == 1).count() <= cap),
        MatroidSpec::Transversal { adjacency, .. } => hall_condition(adjacency, mask),
        MatroidSpec::BinaryLinear { columns, .. } => no_dependent_subset(columns, mask),
    }
}

/// Independence table for every subset of an `n`-element ground set.
pub fn independence_table(spec: &MatroidSpec, n: usize) -> Vec<bool> {
    (0..1u32 << n).map(|m| brute_independent(spec, m)).collect()
}

/// Rank of every subset as the largest independent submask.
pub fn rank_table(indep: &[bool]) -> Vec<usize> {
    let mut rank = vec![0usize; indep.len()];
    for m in 0..indep.len() {
        rank[m] = if indep[m] {
            m.count_ones() as usize
        } else {
            members(m as u32).map(|i| rank[m & !(1 << i)]).max().unwrap_or(0)
        };
    }
    rank
}

/// Closure of `mask` under the rank table.
pub fn brute_span(rank: &[usize], n: usize, mask: u32) -> u32 {
    (0..n).filter(|&i| rank[(mask | 1 << i) as usize] == rank[mask as usize]).fold(0, |m, i| m | 1 << i)
}

/// Best total weight of an independent subset of `within`, by enumeration.
pub fn brute_opt(indep: &[bool], values: &[f64], within: u32) -> f64 {
    submasks(within)
        .into_iter()
        .filter(|&m| indep[m as usize])
        .map(|m| members(m).map(|i| values[i]).sum::<f64>())
        .fold(0.0, f64::max)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Every ordering of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Probability that the threshold rule picks the maximum of `n` distinct
/// values: a uniform arrival order, a Bin(n, 1/2) sample prefix, and the
/// first later arrival at least the sample maximum is taken.
pub fn exact_threshold_success(n: usize) -> f64 {
    let perms = permutations(n);
    let mut total = 0.0;
    for w in 0..=n {
        let mut wins = 0usize;
        for p in &perms {
            let tau = p[..w].iter().copied().max();
            let pick = p[w..].iter().copied().find(|&v| tau.is_none_or(|t| v >= t));
            wins += usize::from(pick == Some(n - 1));
        }
        total += binomial(n, w) / 2f64.powi(n as i32) * wins as f64 / perms.len() as f64;
    }
    total
}
