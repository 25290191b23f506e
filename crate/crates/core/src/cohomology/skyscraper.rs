use num::rational::Ratio;
use serde::{Deserialize, Serialize};

use super::global::{CohomologyReport, Normalization, StalkModel};

/// Point-supported summand: a vector space `H_p` at each listed point.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SkyscraperDatum {
    pub dims: Vec<usize>,
    /// Optional Hodge bigrading labels, carried through unchanged.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

/// Only degree 0 survives, and each `l2(G) ⊗ H_p` has G-dimension `dim H_p`.
pub fn skyscraper_summand(datum: &SkyscraperDatum) -> CohomologyReport {
    let total = Ratio::from_integer(datum.dims.iter().sum::<usize>() as i64);
    let zero = Ratio::from_integer(0);
    CohomologyReport {
        h0: total,
        h1: zero,
        h2: zero,
        chi: total,
        normalization: Normalization::VonNeumann,
        model: StalkModel::Base,
    }
}
