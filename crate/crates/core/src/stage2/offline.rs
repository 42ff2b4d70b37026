use crate::bucketing::{pow2, BucketedValuation, IndexSet};
use crate::error::Result;
use crate::oracle::RankAccess;

use super::StructureConstants;

/// Buckets of the whole ground set with rank above
/// `(2^(-i-shift) · LOPT(U))^exponent`. Needs the full ground set, so it is
/// only an offline diagnostic.
pub fn super_buckets<R: RankAccess + ?Sized>(
    oracle: &R,
    val: &BucketedValuation,
    constants: &StructureConstants,
) -> Result<IndexSet> {
    let ground = crate::element::ElementSet::full(val.len());
    let lopt = val.lopt(oracle, &ground)?;
    let mut out = IndexSet::new();
    for i in val.buckets_in(&ground) {
        let r = oracle.rank(&val.bucket_of(&ground, i))? as f64;
        let bar = (pow2(-i) * 2f64.powf(-constants.super_shift) * lopt).powf(constants.super_exponent);
        if r > bar {
            out.insert(i);
        }
    }
    Ok(out)
}

/// No single element carries more than a `2^-p` share of `OPT(U)`.
pub fn max_value_assumption_holds<R: RankAccess + ?Sized>(
    oracle: &R,
    val: &BucketedValuation,
    constants: &StructureConstants,
) -> Result<bool> {
    let ground = crate::element::ElementSet::full(val.len());
    let opt = val.opt_of(oracle, &ground)?;
    Ok(val.max_value(&ground) < 2f64.powf(-constants.max_weight_power) * opt)
}
