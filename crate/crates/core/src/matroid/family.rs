use crate::element::ElementId;
use crate::error::{Error, Result};

use super::spec::MatroidSpec;

#[derive(Clone, Debug)]
pub(super) enum Kind {
    Uniform {
        k: usize,
    },
    Partition {
        block_of: Vec<usize>,
        caps: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    Laminar {
        /// Indices of the sets containing each element.
        member_of: Vec<Vec<usize>>,
        caps: Vec<usize>,
    },
    Transversal {
        right: usize,
        adjacency: Vec<Vec<usize>>,
    },
    BinaryLinear {
        columns: Vec<Vec<u64>>,
    },
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInstance(msg.into()))
}

impl Kind {
    pub(super) fn build(spec: &MatroidSpec) -> Result<(usize, Kind)> {
        match spec {
            MatroidSpec::Uniform { n, k } => Ok((*n, Kind::Uniform { k: *k })),
            MatroidSpec::Partition { block_sizes, caps } => {
                if block_sizes.len() != caps.len() {
                    return invalid("partition: block_sizes and caps differ in length");
                }
                let block_of = block_sizes
                    .iter()
                    .enumerate()
                    .flat_map(|(b, &size)| std::iter::repeat_n(b, size))
                    .collect::<Vec<_>>();
                Ok((block_of.len(), Kind::Partition { block_of, caps: caps.clone() }))
            }
            MatroidSpec::Graphic { vertices, edges } => {
                if let Some(e) = edges.iter().find(|e| e[0] >= *vertices || e[1] >= *vertices) {
                    return invalid(format!("graphic: edge {e:?} leaves 0..{vertices}"));
                }
                Ok((
                    edges.len(),
                    Kind::Graphic {
                        vertices: *vertices,
                        edges: edges.clone(),
                    },
                ))
            }
            MatroidSpec::Laminar { n, sets, caps } => {
                if sets.len() != caps.len() {
                    return invalid("laminar: sets and caps differ in length");
                }
                let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); *n];
                let mut members = Vec::with_capacity(sets.len());
                for (i, s) in sets.iter().enumerate() {
                    let mut m = s.clone();
                    m.sort_unstable();
                    m.dedup();
                    if let Some(&e) = m.iter().find(|&&e| e >= *n) {
                        return invalid(format!("laminar: element {e} outside 0..{n}"));
                    }
                    for &e in &m {
                        member_of[e].push(i);
                    }
                    members.push(m);
                }
                // Larger sets first: every earlier set must contain the
                // current one or miss it, so its elements all share the same
                // innermost earlier set.
                let mut order: Vec<usize> = (0..members.len()).collect();
                order.sort_by_key(|&i| std::cmp::Reverse(members[i].len()));
                let mut innermost: Vec<Option<usize>> = vec![None; *n];
                for &i in &order {
                    let m = &members[i];
                    if let Some(&first) = m.first() {
                        if let Some(&e) = m.iter().find(|&&e| innermost[e] != innermost[first]) {
                            let other = innermost[e].or(innermost[first]).unwrap_or(i);
                            return invalid(format!("laminar: sets {} and {} cross", other.min(i), other.max(i)));
                        }
                    }
                    for &e in m {
                        innermost[e] = Some(i);
                    }
                }
                Ok((*n, Kind::Laminar { member_of, caps: caps.clone() }))
            }
            MatroidSpec::Transversal { right, adjacency } => {
                for (e, adj) in adjacency.iter().enumerate() {
                    if let Some(r) = adj.iter().find(|&&r| r >= *right) {
                        return invalid(format!("transversal: element {e} adjacent to {r} >= {right}"));
                    }
                }
                Ok((
                    adjacency.len(),
                    Kind::Transversal {
                        right: *right,
                        adjacency: adjacency.clone(),
                    },
                ))
            }
            MatroidSpec::BinaryLinear { rows, columns } => {
                let words = rows.div_ceil(64).max(1);
                let mut cols = Vec::with_capacity(columns.len());
                for (e, c) in columns.iter().enumerate() {
                    if c.len() != *rows {
                        return invalid(format!("binary_linear: column {e} has {} bits, expected {rows}", c.len()));
                    }
                    let mut v = vec![0u64; words];
                    for (r, ch) in c.chars().enumerate() {
                        match ch {
                            '0' => {}
                            '1' => v[r / 64] |= 1 << (r % 64),
                            _ => return invalid(format!("binary_linear: column {e} has non-bit {ch:?}")),
                        }
                    }
                    cols.push(v);
                }
                Ok((columns.len(), Kind::BinaryLinear { columns: cols }))
            }
        }
    }
}

/// Incremental independence test: `try_add` accepts an element iff the
/// accepted set plus the element is independent.
pub struct GreedyState<'a> {
    kind: &'a Kind,
    accepted: usize,
    inner: Inner,
}

enum Inner {
    Counting,
    Blocks(Vec<usize>),
    Forest(Vec<usize>),
    Matching {
        owner: Vec<Option<usize>>,
        /// Accepted left vertices, kept for augmenting-path search.
        seen: Vec<u32>,
        stamp: u32,
    },
    Basis(Vec<(usize, Vec<u64>)>),
}

impl<'a> GreedyState<'a> {
    pub(super) fn new(kind: &'a Kind) -> Self {
        let inner = match kind {
            Kind::Uniform { .. } => Inner::Counting,
            Kind::Partition { caps, .. } | Kind::Laminar { caps, .. } => Inner::Blocks(vec![0; caps.len()]),
            Kind::Graphic { vertices, .. } => Inner::Forest((0..*vertices).collect()),
            Kind::Transversal { right, adjacency } => Inner::Matching {
                owner: vec![None; *right],
                seen: vec![0; adjacency.len()],
                stamp: 0,
            },
            Kind::BinaryLinear { .. } => Inner::Basis(Vec::new()),
        };
        GreedyState {
            kind,
            accepted: 0,
            inner,
        }
    }

    /// Number of elements accepted so far.
    pub fn accepted(&self) -> usize {
        self.accepted
    }

    pub fn try_add(&mut self, e: ElementId) -> bool {
        let ok = self.admit(e.index());
        if ok {
            self.accepted += 1;
        }
        ok
    }

    fn admit(&mut self, e: usize) -> bool {
        match (self.kind, &mut self.inner) {
            (Kind::Uniform { k }, Inner::Counting) => self.accepted < *k,
            (Kind::Partition { block_of, caps }, Inner::Blocks(count)) => {
                let b = block_of[e];
                if count[b] < caps[b] {
                    count[b] += 1;
                    true
                } else {
                    false
                }
            }
            (Kind::Laminar { member_of, caps }, Inner::Blocks(count)) => {
                if member_of[e].iter().all(|&s| count[s] < caps[s]) {
                    for &s in &member_of[e] {
                        count[s] += 1;
                    }
                    true
                } else {
                    false
                }
            }
            (Kind::Graphic { edges, .. }, Inner::Forest(parent)) => {
                let [u, v] = edges[e];
                let (ru, rv) = (find(parent, u), find(parent, v));
                if ru == rv {
                    false
                } else {
                    parent[ru] = rv;
                    true
                }
            }
            (Kind::Transversal { adjacency, .. }, Inner::Matching { owner, seen, stamp }) => {
                *stamp += 1;
                augment(e, adjacency, owner, seen, *stamp)
            }
            (Kind::BinaryLinear { columns }, Inner::Basis(basis)) => {
                let mut v = columns[e].clone();
                for (pivot, row) in basis.iter() {
                    if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                        for (a, b) in v.iter_mut().zip(row) {
                            *a ^= b;
                        }
                    }
                }
                match v.iter().position(|&w| w != 0) {
                    None => false,
                    Some(w) => {
                        let pivot = w * 64 + v[w].trailing_zeros() as usize;
                        basis.push((pivot, v));
                        true
                    }
                }
            }
            _ => unreachable!("greedy state does not match matroid kind"),
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Kuhn-style augmenting path from left vertex `e`.
fn augment(e: usize, adjacency: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [u32], stamp: u32) -> bool {
    if seen[e] == stamp {
        return false;
    }
    seen[e] = stamp;
    for &r in &adjacency[e] {
        let free = match owner[r] {
            None => true,
            Some(other) => augment(other, adjacency, owner, seen, stamp),
        };
        if free {
            owner[r] = Some(e);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidInstance;

    fn rank(spec: MatroidSpec, ids: &[u32]) -> usize {
        let m = MatroidInstance::new(spec).unwrap();
        m.rank_uncached(&ids.iter().map(|&i| ElementId(i)).collect()).unwrap()
    }

    #[test]
    fn transversal_needs_augmenting_paths() {
        // 0 -> {0,1}, 1 -> {0}: greedy must re-route 0 to right vertex 1.
        let spec = MatroidSpec::Transversal {
            right: 2,
            adjacency: vec![vec![0, 1], vec![0], vec![0]],
        };
        assert_eq!(rank(spec.clone(), &[0, 1]), 2);
        assert_eq!(rank(spec, &[0, 1, 2]), 2);
    }

    #[test]
    fn binary_linear_detects_xor_dependency() {
        let spec = MatroidSpec::BinaryLinear {
            rows: 3,
            columns: vec!["110".into(), "011".into(), "101".into(), "001".into()],
        };
        assert_eq!(rank(spec.clone(), &[0, 1, 2]), 2);
        assert_eq!(rank(spec, &[0, 1, 3]), 3);
    }

    #[test]
    fn laminar_caps_nest() {
        let spec = MatroidSpec::Laminar {
            n: 4,
            sets: vec![vec![0, 1], vec![0, 1, 2, 3]],
            caps: vec![1, 2],
        };
        assert_eq!(rank(spec.clone(), &[0, 1]), 1);
        assert_eq!(rank(spec.clone(), &[0, 2, 3]), 2);
        assert_eq!(rank(spec, &[2, 3]), 2);
    }

    #[test]
    fn crossing_laminar_sets_are_rejected() {
        let spec = MatroidSpec::Laminar {
            n: 3,
            sets: vec![vec![0, 1], vec![1, 2]],
            caps: vec![1, 1],
        };
        assert!(matches!(MatroidInstance::new(spec), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn laminar_check_matches_pairwise_definition() {
        use rand::Rng;
        let mut rng = crate::arrival::trial_rng(5);
        for _ in 0..2000 {
            let n = rng.random_range(1..=6);
            let sets: Vec<Vec<usize>> = (0..rng.random_range(1..=4))
                .map(|_| (0..n).filter(|_| rng.random_bool(0.5)).collect())
                .collect();
            let laminar = sets.iter().all(|a| {
                sets.iter().all(|b| {
                    let inter = a.iter().any(|e| b.contains(e));
                    !inter || a.iter().all(|e| b.contains(e)) || b.iter().all(|e| a.contains(e))
                })
            });
            let caps = vec![1; sets.len()];
            let built = MatroidInstance::new(MatroidSpec::Laminar { n, sets: sets.clone(), caps });
            assert_eq!(built.is_ok(), laminar, "{sets:?}");
        }
    }

    #[test]
    fn malformed_instances_are_rejected() {
        let bad = [
            MatroidSpec::Partition { block_sizes: vec![2], caps: vec![] },
            MatroidSpec::Graphic { vertices: 2, edges: vec![[0, 2]] },
            MatroidSpec::Transversal { right: 1, adjacency: vec![vec![1]] },
            MatroidSpec::BinaryLinear { rows: 2, columns: vec!["1".into()] },
            MatroidSpec::BinaryLinear { rows: 2, columns: vec!["1x".into()] },
        ];
        for spec in bad {
            assert!(MatroidInstance::new(spec).is_err());
        }
    }
}
