use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every tunable constant of the structural decision. Fields missing from a
/// JSON config take the default listed here.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StructureConstants {
    /// Offline check: the largest value is below `2^-p · OPT(U)`.
    pub max_weight_power: f64,
    pub super_shift: f64,
    pub super_exponent: f64,
    /// Bucket `j` is valuable when `N(j) > (2^(-j-shift) · LOPT(F))^exponent`.
    pub valuable_shift: f64,
    pub valuable_exponent: f64,
    /// Valuable buckets below `log LOPT(F) − mult · loglog rank(F)` form the
    /// lower part, the rest the upper part.
    pub valuable_rank_split_mult: f64,
    pub manageable_mult: f64,
    /// Exponent γ of the manageable test.
    pub manageable_exponent: f64,
    pub useful_frac: f64,
    pub useful_denom: f64,
    pub split_frac: f64,
    pub negligible_div: f64,
    pub burned_mult: f64,
    pub case_denom: f64,
    pub residue_modulus: usize,
    pub doubling_factor: usize,
    /// Family check: `LOPT(H) ≥ LOPT(L) / div`.
    pub family_lopt_div: f64,
    /// Family check: `uncov(B_F(GT(H')), B_F(j)) ≥ frac · N(j)`.
    pub family_uncov_frac: f64,
    /// Family check: `|family| ≤ mult · loglog rank(F)`.
    pub family_card_mult: f64,
    /// Tree check: `depth ≤ mult · loglog rank(F)`.
    pub tree_depth_mult: f64,
    /// Tuple check: `N(j) > (mult · Σ_{D(i) ∪ B(i)} N)^γ` on every block.
    pub tuple_manageable_mult: f64,
    /// Smallest sample rank for which the critical tuple is attempted.
    pub rank_floor: usize,
    /// Largest lower part for which every subset is tried as a manageable set.
    pub subset_search_limit: usize,
}

impl Default for StructureConstants {
    fn default() -> Self {
        StructureConstants {
            max_weight_power: 1.0,
            super_shift: 0.0,
            super_exponent: 0.75,
            valuable_shift: 0.0,
            valuable_exponent: 0.75,
            valuable_rank_split_mult: 1.0,
            manageable_mult: 0.5,
            manageable_exponent: 0.75,
            useful_frac: 0.25,
            useful_denom: 8.0,
            split_frac: 0.25,
            negligible_div: 8.0,
            burned_mult: 0.25,
            case_denom: 8.0,
            residue_modulus: 5,
            doubling_factor: 2,
            family_lopt_div: 15.0,
            family_uncov_frac: 30.0 / 31.0,
            family_card_mult: 5.0,
            tree_depth_mult: 12.0,
            tuple_manageable_mult: 0.5,
            rank_floor: 4,
            subset_search_limit: 12,
        }
    }
}

impl StructureConstants {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConstants(msg));
        let nonneg = [
            ("max_weight_power", self.max_weight_power),
            ("super_exponent", self.super_exponent),
            ("valuable_exponent", self.valuable_exponent),
            ("valuable_rank_split_mult", self.valuable_rank_split_mult),
            ("manageable_mult", self.manageable_mult),
            ("useful_frac", self.useful_frac),
            ("family_uncov_frac", self.family_uncov_frac),
            ("tuple_manageable_mult", self.tuple_manageable_mult),
        ];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be a nonnegative number, got {v}"));
            }
        }
        for (name, v) in [("super_shift", self.super_shift), ("valuable_shift", self.valuable_shift)] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite, got {v}"));
            }
        }
        let positive = [
            ("useful_denom", self.useful_denom),
            ("negligible_div", self.negligible_div),
            ("case_denom", self.case_denom),
            ("family_lopt_div", self.family_lopt_div),
            ("family_card_mult", self.family_card_mult),
            ("tree_depth_mult", self.tree_depth_mult),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.manageable_exponent > 0.0 && self.manageable_exponent < 1.0) {
            return bad(format!("manageable_exponent must lie in (0, 1), got {}", self.manageable_exponent));
        }
        if !(self.split_frac > 0.0 && self.split_frac <= 0.5) {
            return bad(format!("split_frac must lie in (0, 1/2], got {}", self.split_frac));
        }
        if !(self.burned_mult > 0.0 && self.burned_mult < 1.0) {
            return bad(format!("burned_mult must lie in (0, 1), got {}", self.burned_mult));
        }
        if self.residue_modulus != 5 {
            return bad(format!("residue_modulus is fixed at 5, got {}", self.residue_modulus));
        }
        if self.doubling_factor != 2 {
            return bad(format!("doubling_factor is fixed at 2, got {}", self.doubling_factor));
        }
        if self.subset_search_limit > 20 {
            return bad(format!("subset_search_limit above 20 is not supported, got {}", self.subset_search_limit));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: StructureConstants = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        StructureConstants::default().validate().unwrap();
    }

    #[test]
    fn partial_config_fills_defaults() {
        let c = StructureConstants::from_json(r#"{"manageable_exponent": 0.5, "case_denom": 2}"#).unwrap();
        assert_eq!(c.manageable_exponent, 0.5);
        assert_eq!(c.case_denom, 2.0);
        assert_eq!(c.split_frac, 0.25);
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        for doc in [
            r#"{"manageable_exponent": 1.0}"#,
            r#"{"split_frac": 0.6}"#,
            r#"{"burned_mult": 0}"#,
            r#"{"residue_modulus": 4}"#,
            r#"{"case_denom": -1}"#,
            r#"{"no_such_field": 1}"#,
        ] {
            assert!(StructureConstants::from_json(doc).is_err(), "{doc}");
        }
    }
}
