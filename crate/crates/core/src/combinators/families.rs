//! The three family builders, chaining ingredients and constructions.

use std::collections::BTreeMap;

use crate::design::{divisibility_ok, AnyDesign, GroupType, SplittingDesign};
use crate::ingredients::cache::{CacheError, IngredientRequest};
use crate::ingredients::gdd::{gdd_provider, GddError, ProviderOptions};
use crate::ingredients::search::{search_splitting_design, SearchError};
use crate::ingredients::td::{td, TdError};
use crate::trace::ConstructionTrace;

use super::fixtures::{candelabra_1m1, example_151_design, lemma_cs_8_2_2, lemma_trace, splitting_3_10_3x2};
use super::recursive::{complete_transversal_gdd, fc3, fill_groups_2, fill_groups_3, multiply_by_c, CombinatorError};

/// Family names accepted by [`construct_family`].
pub const FAMILIES: [&str; 3] = ["2-3x5", "2-385", "3-3x2"];

#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error("v = {v} is not admissible for family {family}: {reason}")]
    NotAdmissible { family: String, v: usize, reason: String },
    #[error("unknown family {0:?}; expected one of 2-3x5, 2-385, 3-3x2")]
    UnknownFamily(String),
    #[error("GDD ingredient: {0}")]
    Gdd(#[from] GddError),
    #[error("transversal design ingredient: {0}")]
    Td(#[from] TdError),
    #[error("search ingredient: {0}")]
    Search(#[from] SearchError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Combinator(#[from] CombinatorError),
}

fn not_admissible(family: &str, v: usize, reason: impl Into<String>) -> FamilyError {
    FamilyError::NotAdmissible { family: family.into(), v, reason: reason.into() }
}

/// Dispatches on a family name. `v` is ignored for `2-385`.
pub fn construct_family(
    family: &str,
    v: Option<usize>,
    opts: &ProviderOptions,
) -> Result<(SplittingDesign, ConstructionTrace), FamilyError> {
    let need_v = || v.ok_or_else(|| not_admissible(family, 0, "this family needs --v"));
    match family {
        "2-3x5" => family_2_3x5(need_v()?, opts),
        "2-385" => match v {
            Some(v) if v != 385 => Err(not_admissible(family, v, "this family has the single order 385")),
            _ => family_2_385(opts),
        },
        "3-3x2" => family_3_3x2(need_v()?),
        other => Err(FamilyError::UnknownFamily(other.to_string())),
    }
}

/// Splitting 2-(v, 3x5, 1) designs for `v ≡ 1 mod 150`, `v != 301`.
pub fn family_2_3x5(v: usize, opts: &ProviderOptions) -> Result<(SplittingDesign, ConstructionTrace), FamilyError> {
    const NAME: &str = "2-3x5";
    if v % 150 != 1 {
        return Err(not_admissible(NAME, v, "the family covers v ≡ 1 mod 150"));
    }
    if v == 301 {
        return Err(not_admissible(
            NAME,
            v,
            "open case: no GDD of type 30^2 exists, so the construction does not reach v = 301",
        ));
    }
    let (filler, filler_trace) = example_151_design();
    if v == 151 {
        return Ok((filler, ConstructionTrace::new("family 2-(v,3x5,1)").param("v", v).child(filler_trace)));
    }
    let m = (v - 1) / 150;
    let (gdd, gdd_trace) = gdd_provider(2, 3, &GroupType::uniform(30, m), opts)?;
    let (sg, blow_trace) = multiply_by_c(&gdd, 5);
    let (design, fill_trace) = fill_groups_2(&sg, &BTreeMap::from([(150, filler)]))?;
    let trace = ConstructionTrace::new("family 2-(v,3x5,1)")
        .param("v", v)
        .child(gdd_trace)
        .child(blow_trace)
        .child(fill_trace.child(filler_trace));
    Ok((design, trace))
}

/// Loads the splitting 2-(97, 4x2, 1) filler from the cache, or searches
/// for it with the given seed and caches the result.
pub fn filler_97(opts: &ProviderOptions) -> Result<(SplittingDesign, ConstructionTrace), FamilyError> {
    let req = IngredientRequest::splitting_design(2, 97, 4, 2);
    if let Some(cache) = &opts.cache {
        if let Some((AnyDesign::SplittingDesign(d), provenance)) = cache.get(&req)? {
            let trace = ConstructionTrace::new("cached ingredient").param("key", req.key()).param("provenance", provenance);
            return Ok((d, trace));
        }
    }
    let (design, sys, stats) = search_splitting_design(2, 97, 4, 2, opts.seed, opts.budget)?;
    let trace = ConstructionTrace::new("searched ingredient")
        .param("parameters", "2-(97,4x2,1)")
        .param("seed", opts.seed)
        .param("budget", opts.budget)
        .param("stats", &stats)
        .param("modulus", sys.modulus)
        .param("base_blocks", sys.base_blocks.iter().map(|b| b.rows().to_vec()).collect::<Vec<_>>());
    if let Some(cache) = &opts.cache {
        cache.put(&req, &AnyDesign::SplittingDesign(design.clone()), trace.to_value())?;
    }
    Ok((design, trace))
}

/// The splitting 2-(385, 4x2, 1) design.
pub fn family_2_385(opts: &ProviderOptions) -> Result<(SplittingDesign, ConstructionTrace), FamilyError> {
    let (master, ladder) = td(4, 48)?;
    let (sg, blow_trace) = multiply_by_c(&master, 2);
    let (filler, filler_trace) = filler_97(opts)?;
    let (design, fill_trace) = fill_groups_2(&sg, &BTreeMap::from([(96, filler)]))?;
    let trace = ConstructionTrace::new("family 2-(385,4x2,1)")
        .child(ConstructionTrace::new("transversal design").param("k", 4).param("n", 48).param("mols_ladder", ladder))
        .child(blow_trace)
        .child(fill_trace.child(filler_trace));
    Ok((design, trace))
}

/// Splitting 3-(v, 3x2, 1) designs for every `v ≡ 2 mod 8`.
pub fn family_3_3x2(v: usize) -> Result<(SplittingDesign, ConstructionTrace), FamilyError> {
    const NAME: &str = "3-3x2";
    if v < 10 || divisibility_ok(3, v as u64, 3, 2, 1).is_err() {
        return Err(not_admissible(NAME, v, "a splitting 3-(v,3x2,1) design exists if and only if v ≡ 2 mod 8"));
    }
    let (filler, filler_trace) = splitting_3_10_3x2();
    if v == 10 {
        return Ok((filler, ConstructionTrace::new("family 3-(v,3x2,1)").param("v", v).child(filler_trace)));
    }
    let m = (v - 2) / 8;
    let master = candelabra_1m1(m);
    let (sgdd, sgdd_trace) = multiply_by_c(&complete_transversal_gdd(3, 4), 2);
    let (scs, fc_trace) = fc3(&master, &lemma_cs_8_2_2(), &sgdd)?;
    let (design, fill_trace) = fill_groups_3(&scs, &BTreeMap::from([(8, filler)]))?;
    let trace = ConstructionTrace::new("family 3-(v,3x2,1)")
        .param("v", v)
        .child(
            fc_trace
                .child(ConstructionTrace::new("all-triples candelabra system").param("m", m))
                .child(lemma_trace(2))
                .child(sgdd_trace.child(ConstructionTrace::new("complete transversal GDD").param("k", 3).param("g", 4))),
        )
        .child(fill_trace.child(filler_trace));
    Ok((design, trace))
}
