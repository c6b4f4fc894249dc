//! Recursive constructions, explicit fixtures, and family builders.

pub mod families;
pub mod fixtures;
pub mod recursive;

pub use families::{construct_family, family_2_385, family_2_3x5, family_3_3x2, filler_97, FamilyError, FAMILIES};
pub use fixtures::{
    candelabra_1m1, example_151, example_151_design, lemma_cs_8_2_0, lemma_cs_8_2_2, splitting_3_10_3x2,
};
pub use recursive::{
    complete_transversal_gdd, fc3, fill_groups_2, fill_groups_3, fundamental_construction, multiply_by_c,
    trivial_splitting_gdd, CombinatorError,
};
