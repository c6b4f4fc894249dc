//! Recursive constructions: weighting, blow-up, filling in groups, and the
//! candelabra weighting construction.
//!
//! Every construction relabels ingredient points through an explicit map
//! into the output point set and records that map in the returned trace.

use std::collections::BTreeMap;

use crate::design::{
    verify_splitting_candelabra, verify_splitting_design, verify_splitting_gdd, CandelabraSystem, Gdd, GroupType,
    Point, SplitBlock, SplittingCandelabra, SplittingDesign, SplittingGdd, Witness,
};
use crate::trace::ConstructionTrace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CombinatorError {
    #[error("ingredient shape mismatch: {0}")]
    IngredientShapeMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("master candelabra system has an empty stem")]
    EmptyStem,
    #[error("stem of size {0} is too large to fill (at most 2)")]
    StemTooLarge(usize),
    #[error("no filler for groups of size {0}")]
    MissingFiller(usize),
    #[error("constructed object failed verification: {0:?}")]
    InvalidOutput(Option<Witness>),
}

fn check(valid: bool, witness: Option<Witness>) -> Result<(), CombinatorError> {
    if valid {
        Ok(())
    } else {
        Err(CombinatorError::InvalidOutput(witness))
    }
}

/// The one-block splitting GDD(t, k x c, kc) of type `c^k`: row `j` is the
/// group `j*c..(j+1)*c`.
pub fn trivial_splitting_gdd(t: usize, k: usize, c: usize) -> SplittingGdd {
    let groups = GroupType::uniform(c, k).layout();
    let block = SplitBlock::from_rows_unchecked(groups.clone());
    SplittingGdd::new(t, k, c, groups, vec![block])
}

/// GDD(k, k, kg) of type `g^k` whose blocks are all `g^k` transversals.
pub fn complete_transversal_gdd(k: usize, g: usize) -> Gdd {
    let groups = GroupType::uniform(g, k).layout();
    let mut blocks = vec![vec![]];
    for group in &groups {
        blocks = blocks
            .into_iter()
            .flat_map(|b: Vec<Point>| group.iter().map(move |&p| [b.clone(), vec![p]].concat()))
            .collect();
    }
    Gdd::new(k, k, groups, blocks)
}

/// Weighting of a GDD by splitting GDDs of type `c^k`.
///
/// `supplier` receives each master block (sorted) and returns an
/// ingredient on points `0..k*c` with groups `j*c..(j+1)*c`. Ingredient
/// point `j*c + i` is sent to `A[j]*c + i`, so the output lives on
/// `X x Z_c` with point `(x, i)` labelled `x*c + i`.
pub fn fundamental_construction<F>(
    master: &Gdd,
    c: usize,
    mut supplier: F,
) -> Result<(SplittingGdd, ConstructionTrace), CombinatorError>
where
    F: FnMut(&[Point]) -> Result<SplittingGdd, CombinatorError>,
{
    let k = master.k;
    let expected_groups = GroupType::uniform(c, k).layout();
    let cp = c as Point;
    let mut blocks = Vec::new();
    let mut shapes = BTreeMap::new();
    let mut kprime = None;
    for a in &master.blocks {
        let ing = supplier(a)?;
        if ing.t != master.t || ing.c != c || ing.groups != expected_groups || ing.v != k * c {
            return Err(CombinatorError::IngredientShapeMismatch(format!(
                "block {a:?} needs a splitting GDD({}, k' x {c}, {}) of type {c}^{k} on 0..{}",
                master.t,
                k * c,
                k * c
            )));
        }
        if *kprime.get_or_insert(ing.k) != ing.k {
            return Err(CombinatorError::IngredientShapeMismatch("ingredients disagree on row count".into()));
        }
        *shapes.entry(ing.blocks.len()).or_insert(0usize) += 1;
        blocks.extend(ing.blocks.iter().map(|b| b.map_points(|p| a[(p / cp) as usize] * cp + p % cp)));
    }
    let groups: Vec<Vec<Point>> =
        master.groups.iter().map(|g| g.iter().flat_map(|&x| (0..cp).map(move |i| x * cp + i)).collect()).collect();
    let mut out = SplittingGdd::new(master.t, kprime.unwrap_or(k), c, groups, blocks);
    out.v = master.v * c;
    let report = verify_splitting_gdd(&out);
    check(report.valid, report.witness)?;
    let trace = ConstructionTrace::new("fundamental construction")
        .param("c", c)
        .param("master_type", master.group_type().to_string())
        .param("master_blocks", master.blocks.len())
        .param("ingredient_block_counts", shapes)
        .param("label_map", "ingredient point j*c+i on master block A -> A[j]*c+i; output (x,i) -> x*c+i");
    Ok((out, trace))
}

/// Blow-up by `c` using the trivial one-block ingredient on every block.
pub fn multiply_by_c(master: &Gdd, c: usize) -> (SplittingGdd, ConstructionTrace) {
    let ingredient = trivial_splitting_gdd(master.t, master.k, c);
    let (out, trace) = fundamental_construction(master, c, |_| Ok(ingredient.clone()))
        .expect("the trivial ingredient always fits a valid master");
    let trace = ConstructionTrace::new("multiply by c")
        .param("c", c)
        .child(trace.child(ConstructionTrace::new("trivial splitting GDD").param("t", master.t).param("k", master.k).param("c", c)));
    (out, trace)
}

/// Completes a splitting GDD(2, k x c, v) to a splitting 2-(v+1) design by
/// adding the point `inf = v` and a filler on each `G ∪ {inf}`. Filler
/// point `j < |G|` goes to the `j`-th smallest point of `G`; the filler's
/// last point goes to `inf`.
pub fn fill_groups_2(
    sg: &SplittingGdd,
    fillers: &BTreeMap<usize, SplittingDesign>,
) -> Result<(SplittingDesign, ConstructionTrace), CombinatorError> {
    if sg.t != 2 {
        return Err(CombinatorError::ShapeMismatch(format!("filling with 2-designs needs t = 2, got {}", sg.t)));
    }
    let inf = sg.v as Point;
    let mut blocks = sg.blocks.clone();
    let mut maps = Vec::new();
    for g in &sg.groups {
        let filler = fillers.get(&g.len()).ok_or(CombinatorError::MissingFiller(g.len()))?;
        if filler.t != 2 || filler.v != g.len() + 1 || (filler.k, filler.c) != (sg.k, sg.c) {
            return Err(CombinatorError::ShapeMismatch(format!(
                "filler for size {} must be a splitting 2-({}, {}x{}, 1) design",
                g.len(),
                g.len() + 1,
                sg.k,
                sg.c
            )));
        }
        let map: Vec<Point> = g.iter().copied().chain([inf]).collect();
        blocks.extend(filler.blocks.iter().map(|b| b.map_points(|p| map[p as usize])));
        maps.push(map);
    }
    let out = SplittingDesign::new(2, sg.v + 1, sg.k, sg.c, blocks);
    let report = verify_splitting_design(&out);
    check(report.valid, report.witness)?;
    let trace = ConstructionTrace::new("fill in groups (t = 2)")
        .param("new_point", inf)
        .param("filler_copies", maps.len())
        .param("label_maps", maps);
    Ok((out, trace))
}

/// Weighting of a (3, k) candelabra system by `m`.
///
/// With `inf` the least stem point, a master point `x != inf` becomes
/// `{x} x Z_m` and `inf` becomes `{inf} x Z_a`. Output labels: the `r`-th
/// non-`inf` master point gives `r*m .. r*m+m`, and `inf` gives the last
/// `a` labels. Blocks through `inf` receive a copy of `scs`, whose `j`-th
/// group goes to the `j`-th remaining block point and whose stem goes to
/// `{inf} x Z_a`; other blocks receive a copy of `sgdd`, group `j` to block
/// point `j`.
pub fn fc3(
    master: &CandelabraSystem,
    scs: &SplittingCandelabra,
    sgdd: &SplittingGdd,
) -> Result<(SplittingCandelabra, ConstructionTrace), CombinatorError> {
    let k = master.k;
    let &inf = master.stem.first().ok_or(CombinatorError::EmptyStem)?;
    let Some((m, _)) = sgdd.group_type().as_uniform() else {
        return Err(CombinatorError::ShapeMismatch("splitting GDD ingredient must have uniform type".into()));
    };
    let a = scs.stem.len();
    if master.t != 3 || scs.t != 3 || sgdd.t != 3 {
        return Err(CombinatorError::ShapeMismatch("all three inputs must have t = 3".into()));
    }
    if sgdd.groups.len() != k {
        return Err(CombinatorError::ShapeMismatch(format!("splitting GDD must have type {m}^{k}")));
    }
    if scs.groups.len() != k - 1 || scs.groups.iter().any(|g| g.len() != m) {
        return Err(CombinatorError::ShapeMismatch(format!("candelabra ingredient must have type {m}^{}", k - 1)));
    }
    if (scs.k, scs.c) != (sgdd.k, sgdd.c) {
        return Err(CombinatorError::ShapeMismatch("ingredients disagree on block shape".into()));
    }
    let others: Vec<Point> = (0..master.v as Point).filter(|&x| x != inf).collect();
    let rank: BTreeMap<Point, usize> = others.iter().enumerate().map(|(r, &x)| (x, r)).collect();
    let mp = m as Point;
    let inf_base = (others.len() * m) as Point;
    let lift = |x: Point, i: usize| -> Point { rank[&x] as Point * mp + i as Point };
    let inf_copy: Vec<Point> = (0..a as Point).map(|i| inf_base + i).collect();

    let mut blocks = Vec::new();
    let mut maps = Vec::new();
    for block in &master.blocks {
        let mut map = BTreeMap::new();
        let copies = if block.contains(&inf) {
            let rest: Vec<Point> = block.iter().copied().filter(|&x| x != inf).collect();
            for (j, g) in scs.groups.iter().enumerate() {
                for (i, &p) in g.iter().enumerate() {
                    map.insert(p, lift(rest[j], i));
                }
            }
            for (i, &p) in scs.stem.iter().enumerate() {
                map.insert(p, inf_copy[i]);
            }
            &scs.blocks
        } else {
            for (j, g) in sgdd.groups.iter().enumerate() {
                for (i, &p) in g.iter().enumerate() {
                    map.insert(p, lift(block[j], i));
                }
            }
            &sgdd.blocks
        };
        blocks.extend(copies.iter().map(|b| b.map_points(|p| map[&p])));
        maps.push(map);
    }
    let stem: Vec<Point> = master
        .stem
        .iter()
        .filter(|&&x| x != inf)
        .flat_map(|&x| (0..m).map(move |i| (x, i)))
        .map(|(x, i)| lift(x, i))
        .chain(inf_copy.iter().copied())
        .collect();
    let groups: Vec<Vec<Point>> =
        master.groups.iter().map(|g| g.iter().flat_map(|&x| (0..m).map(move |i| (x, i))).map(|(x, i)| lift(x, i)).collect()).collect();
    let out = SplittingCandelabra::new(3, scs.k, scs.c, stem, groups, blocks);
    let report = verify_splitting_candelabra(&out);
    check(report.valid, report.witness)?;
    let trace = ConstructionTrace::new("candelabra weighting")
        .param("m", m)
        .param("a", a)
        .param("master_stem", master.stem.len())
        .param("distinguished_point", inf)
        .param("output_stem", out.stem.len())
        .param("label_maps", maps);
    Ok((out, trace))
}

/// Completes a splitting (3, k x c) candelabra system with stem size at
/// most 2 to a splitting 3-design by a filler on each `G ∪ S`. Filler
/// point `j < |G|` goes to the `j`-th point of `G`, point `|G| + i` to the
/// `i`-th stem point.
pub fn fill_groups_3(
    scs: &SplittingCandelabra,
    fillers: &BTreeMap<usize, SplittingDesign>,
) -> Result<(SplittingDesign, ConstructionTrace), CombinatorError> {
    let s = scs.stem.len();
    if s > 2 {
        return Err(CombinatorError::StemTooLarge(s));
    }
    if scs.t != 3 {
        return Err(CombinatorError::ShapeMismatch(format!("filling with 3-designs needs t = 3, got {}", scs.t)));
    }
    let mut blocks = scs.blocks.clone();
    let mut maps = Vec::new();
    for g in &scs.groups {
        let filler = fillers.get(&g.len()).ok_or(CombinatorError::MissingFiller(g.len()))?;
        if filler.t != 3 || filler.v != g.len() + s || (filler.k, filler.c) != (scs.k, scs.c) {
            return Err(CombinatorError::ShapeMismatch(format!(
                "filler for size {} must be a splitting 3-({}, {}x{}, 1) design",
                g.len(),
                g.len() + s,
                scs.k,
                scs.c
            )));
        }
        let map: Vec<Point> = g.iter().chain(&scs.stem).copied().collect();
        blocks.extend(filler.blocks.iter().map(|b| b.map_points(|p| map[p as usize])));
        maps.push(map);
    }
    let out = SplittingDesign::new(3, scs.v, scs.k, scs.c, blocks);
    let report = verify_splitting_design(&out);
    check(report.valid, report.witness)?;
    let trace = ConstructionTrace::new("fill in groups (t = 3)")
        .param("stem", &scs.stem)
        .param("filler_copies", maps.len())
        .param("label_maps", maps);
    Ok((out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_gdd;
    use crate::ingredients::td::td;

    #[test]
    fn trivial_ingredients() {
        let g = trivial_splitting_gdd(2, 3, 5);
        assert_eq!((g.blocks.len(), g.v), (1, 15));
        let g = trivial_splitting_gdd(3, 3, 2);
        let report = verify_splitting_gdd(&g);
        assert!(report.valid);
        assert_eq!(report.qualifying_subsets, 8);
        let g = trivial_splitting_gdd(1, 1, 4);
        assert_eq!(g.blocks[0].rows(), &[vec![0, 1, 2, 3]]);
        let t = complete_transversal_gdd(3, 4);
        assert_eq!(t.blocks.len(), 64);
        assert!(verify_gdd(&t).valid);
    }

    #[test]
    fn blow_up_of_transversals() {
        let (sg, _) = multiply_by_c(&complete_transversal_gdd(3, 4), 2);
        assert_eq!((sg.v, sg.blocks.len()), (24, 64));
        assert_eq!(sg.group_type(), GroupType::uniform(8, 3));
        let (td30, _) = td(3, 30).unwrap();
        let (sg, _) = multiply_by_c(&td30, 5);
        assert_eq!((sg.v, sg.blocks.len()), (450, 900));
        assert_eq!(sg.group_type(), GroupType::uniform(150, 3));
    }

    #[test]
    fn c1_collapse() {
        let master = Gdd::new(2, 3, vec![vec![0], vec![1], vec![2]], vec![vec![0, 1, 2]]);
        let (sg, _) = multiply_by_c(&master, 1);
        assert_eq!(sg, master.to_splitting());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let (td3, _) = td(3, 3).unwrap();
        let wrong = trivial_splitting_gdd(2, 3, 3);
        assert!(matches!(
            fundamental_construction(&td3, 2, |_| Ok(wrong.clone())),
            Err(CombinatorError::IngredientShapeMismatch(_))
        ));
    }

    #[test]
    fn fill_single_group_returns_filler() {
        // a 2-(7, 3x1, 1) design as filler for one group of size 6
        let (fano, _, _) = crate::ingredients::search::search_splitting_design(2, 7, 3, 1, 0, Default::default()).unwrap();
        let sg = SplittingGdd::new(2, 3, 1, vec![(0..6).collect()], vec![]);
        let (out, _) = fill_groups_2(&sg, &BTreeMap::from([(6, fano.clone())])).unwrap();
        assert_eq!(out, fano);
        assert_eq!(fill_groups_2(&sg, &BTreeMap::new()).unwrap_err(), CombinatorError::MissingFiller(6));
    }

    #[test]
    fn stem_limit() {
        let scs = SplittingCandelabra::new(3, 3, 2, vec![0, 1, 2], vec![(3..11).collect()], vec![]);
        assert_eq!(fill_groups_3(&scs, &BTreeMap::new()).unwrap_err(), CombinatorError::StemTooLarge(3));
    }
}
