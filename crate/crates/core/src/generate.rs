//! Random matroid instances and valuations.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp, LogNormal, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::MatroidSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Uniform,
    Partition,
    Graphic,
    Laminar,
    Transversal,
    BinaryLinear,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Uniform,
        Family::Partition,
        Family::Graphic,
        Family::Laminar,
        Family::Transversal,
        Family::BinaryLinear,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Partition => "partition",
            Family::Graphic => "graphic",
            Family::Laminar => "laminar",
            Family::Transversal => "transversal",
            Family::BinaryLinear => "binary_linear",
        }
    }
}

/// A random instance of `family` on exactly `n` elements. Loops and
/// parallel elements are allowed.
pub fn random_spec<R: Rng + ?Sized>(family: Family, n: usize, rng: &mut R) -> MatroidSpec {
    match family {
        Family::Uniform => MatroidSpec::Uniform {
            n,
            k: rng.random_range(0..=n),
        },
        Family::Partition => {
            let mut block_sizes = Vec::new();
            let mut left = n;
            while left > 0 {
                let size = rng.random_range(1..=left.min(4));
                block_sizes.push(size);
                left -= size;
            }
            let caps = block_sizes.iter().map(|&s| rng.random_range(0..=s)).collect();
            MatroidSpec::Partition { block_sizes, caps }
        }
        Family::Graphic => {
            let vertices = rng.random_range(1..=6);
            let edges = (0..n)
                .map(|_| [rng.random_range(0..vertices), rng.random_range(0..vertices)])
                .collect();
            MatroidSpec::Graphic { vertices, edges }
        }
        Family::Laminar => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut sets = Vec::new();
            laminar_split(&order, rng, &mut sets);
            let caps = sets.iter().map(|s: &Vec<usize>| rng.random_range(0..=s.len())).collect();
            MatroidSpec::Laminar { n, sets, caps }
        }
        Family::Transversal => {
            let right = rng.random_range(1..=5);
            let adjacency = (0..n)
                .map(|_| (0..right).filter(|_| rng.random_bool(0.4)).collect())
                .collect();
            MatroidSpec::Transversal { right, adjacency }
        }
        Family::BinaryLinear => {
            let rows = rng.random_range(1..=5);
            let columns = (0..n)
                .map(|_| (0..rows).map(|_| if rng.random_bool(0.5) { '1' } else { '0' }).collect())
                .collect();
            MatroidSpec::BinaryLinear { rows, columns }
        }
    }
}

fn laminar_split<R: Rng + ?Sized>(part: &[usize], rng: &mut R, sets: &mut Vec<Vec<usize>>) {
    if part.is_empty() {
        return;
    }
    if rng.random_bool(0.6) {
        let mut s = part.to_vec();
        s.sort_unstable();
        sets.push(s);
    }
    if part.len() > 1 {
        let cut = rng.random_range(1..part.len());
        laminar_split(&part[..cut], rng, sets);
        laminar_split(&part[cut..], rng, sets);
    }
}

/// Consecutive blocks of the given sizes where each block has rank one,
/// rendered in `family`. Uniform only supports a single block.
pub fn rank_one_blocks(family: Family, block_sizes: &[usize]) -> Result<MatroidSpec> {
    let n: usize = block_sizes.iter().sum();
    let block_of: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    let blocks = block_sizes.len();
    Ok(match family {
        Family::Uniform if blocks <= 1 => MatroidSpec::Uniform { n, k: n.min(1) },
        Family::Uniform => {
            return Err(Error::InvalidInstance("a uniform matroid has a single block".into()));
        }
        Family::Partition => MatroidSpec::Partition {
            block_sizes: block_sizes.to_vec(),
            caps: vec![1; blocks],
        },
        Family::Graphic => MatroidSpec::Graphic {
            vertices: 2 * blocks,
            edges: block_of.iter().map(|&b| [2 * b, 2 * b + 1]).collect(),
        },
        Family::Laminar => {
            let mut sets = Vec::new();
            let mut start = 0;
            for &s in block_sizes {
                sets.push((start..start + s).collect());
                start += s;
            }
            MatroidSpec::Laminar {
                n,
                sets,
                caps: vec![1; blocks],
            }
        }
        Family::Transversal => MatroidSpec::Transversal {
            right: blocks,
            adjacency: block_of.iter().map(|&b| vec![b]).collect(),
        },
        Family::BinaryLinear => MatroidSpec::BinaryLinear {
            rows: blocks,
            columns: block_of
                .iter()
                .map(|&b| (0..blocks).map(|r| if r == b { '1' } else { '0' }).collect())
                .collect(),
        },
    })
}

/// Distribution of raw element values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ValueDistribution {
    Uniform { low: f64, high: f64 },
    Exponential { rate: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Pareto { scale: f64, shape: f64 },
    /// `2^i` with `i` uniform in `min..=max`.
    Powers { min: i32, max: i32 },
}

impl ValueDistribution {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ValueDistribution::Uniform { low, high } => low > 0.0 && high >= low && high.is_finite(),
            ValueDistribution::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            ValueDistribution::LogNormal { mu, sigma } => mu.is_finite() && sigma >= 0.0 && sigma.is_finite(),
            ValueDistribution::Pareto { scale, shape } => scale > 0.0 && shape > 0.0,
            ValueDistribution::Powers { min, max } => {
                min <= max && min >= crate::bucketing::BUCKET_MIN && max <= crate::bucketing::BUCKET_MAX
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidValuation(format!("bad distribution parameters {self:?}")))
        }
    }

    /// `n` strictly positive values.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        let bad = |e: String| Error::InvalidValuation(e);
        let draw: Vec<f64> = match *self {
            ValueDistribution::Uniform { low, high } => (0..n).map(|_| rng.random_range(low..=high)).collect(),
            ValueDistribution::Exponential { rate } => {
                let d = Exp::new(rate).map_err(|e| bad(e.to_string()))?;
                (0..n).map(|_| d.sample(rng)).collect()
            }
            ValueDistribution::LogNormal { mu, sigma } => {
                let d = LogNormal::new(mu, sigma).map_err(|e| bad(e.to_string()))?;
                (0..n).map(|_| d.sample(rng)).collect()
            }
            ValueDistribution::Pareto { scale, shape } => {
                let d = Pareto::new(scale, shape).map_err(|e| bad(e.to_string()))?;
                (0..n).map(|_| d.sample(rng)).collect()
            }
            ValueDistribution::Powers { min, max } => {
                (0..n).map(|_| crate::bucketing::pow2(rng.random_range(min..=max))).collect()
            }
        };
        // an exponential draw can underflow to zero
        Ok(draw.into_iter().map(|v| v.max(f64::MIN_POSITIVE)).collect())
    }
}

/// An instance on which the critical tuple is often nonempty under
/// [`gap_constants`].
///
/// A heavy bucket `q + gap` and a ladder of buckets `q + 4, …, q + 1` whose
/// counts triple at each rung, so that sample ranks keep doubling down the
/// ladder and bucket `q` lands five doubling steps below the heavy bucket.
/// Every heavy and ladder element shares a rank-one block with one element
/// of bucket `q`; bucket `q` has enough extra elements to double the last
/// rung.
pub fn gap_friendly<R: Rng + ?Sized>(family: Family, rng: &mut R) -> Result<(MatroidSpec, Vec<f64>)> {
    let q: i32 = rng.random_range(-3..=3);
    let gap: i32 = rng.random_range(9..=12);
    let heavy: usize = rng.random_range(4..=6);
    let mut tiers: Vec<(i32, usize)> = vec![(q + gap, heavy)];
    for step in 1..=4 {
        tiers.push((q + 5 - step, heavy * 3usize.pow(step as u32)));
    }
    let jitter = |rng: &mut R, bucket: i32| crate::bucketing::pow2(bucket) * rng.random_range(1.0..1.9);
    let mut block_sizes = Vec::new();
    let mut values = Vec::new();
    for &(bucket, count) in &tiers {
        for _ in 0..count {
            block_sizes.push(2);
            values.push(jitter(rng, bucket));
            values.push(jitter(rng, q));
        }
    }
    let paired = block_sizes.len();
    let light = (tiers[4].1 * 13).div_ceil(5).max(paired);
    for _ in paired..light {
        block_sizes.push(1);
        values.push(jitter(rng, q));
    }
    Ok((rank_one_blocks(family, &block_sizes)?, values))
}

/// Structure constants under which [`gap_friendly`] instances reach the
/// critical tuple: a low manageable exponent, a low valuable exponent, no
/// upper valuable part, and case thresholds that cannot be met.
pub fn gap_constants() -> crate::stage2::StructureConstants {
    crate::stage2::StructureConstants {
        manageable_exponent: 0.1,
        valuable_exponent: 0.25,
        valuable_rank_split_mult: 0.0,
        case_denom: 1e-6,
        ..Default::default()
    }
}
