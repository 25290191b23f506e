//! Cohomology of `j_* V` on the compact surface, of its direct images along covers, and of twisted families.

mod cover;
mod family;
mod global;
mod local_system;
mod parabolic;
mod skyscraper;

pub use cover::{
    compare_stalk_models, induced_cover_system, l2_cohomology_finite, riemann_hurwitz_check,
    CoverComparison, RiemannHurwitz,
};
pub use family::{character_family, CharacterSample, FamilyReport};
pub use global::{
    common_invariants, global_chi, global_h, stalk_dim, CohomologyReport, Normalization, StalkModel,
};
pub use local_system::LocalSystem;
pub use parabolic::{parabolic_constraints, parabolic_h1, principal_cocycle};
pub use skyscraper::{skyscraper_summand, SkyscraperDatum};
