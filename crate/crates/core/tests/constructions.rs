use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitcode_core::combinators::*;
use splitcode_core::design::*;
use splitcode_core::ingredients::gdd::ProviderOptions;
use splitcode_core::ingredients::search::{search_splitting_design, Budget};
use splitcode_core::ingredients::sts::sts;
use splitcode_core::ingredients::td::td;

/// Classical (3,3) candelabra system whose blocks are all qualifying triples.
fn all_triples_cs(sizes: &[usize], stem: usize) -> CandelabraSystem {
    let mut next = 0;
    let mut groups = Vec::new();
    for &s in sizes {
        groups.push((next..next + s as Point).collect::<Vec<_>>());
        next += s as Point;
    }
    let stem_pts: Vec<Point> = (next..next + stem as Point).collect();
    let v = next + stem as Point;
    let confined = |t: &[Point]| {
        groups.iter().any(|g| t.iter().all(|p| g.contains(p) || stem_pts.contains(p)))
    };
    let mut blocks = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                if !confined(&[a, b, c]) {
                    blocks.push(vec![a, b, c]);
                }
            }
        }
    }
    CandelabraSystem::new(3, 3, stem_pts, groups, blocks)
}

#[test]
fn fc3_stem_arithmetic() {
    let mut checked = 0;
    for m in 1..=3 {
        let sgdd = complete_transversal_gdd(3, m).to_splitting();
        for a in 0..=2 {
            let scs = all_triples_cs(&[m, m], a).to_splitting();
            assert!(verify_splitting_candelabra(&scs).valid);
            for s in 1..=3 {
                let master = all_triples_cs(&[1, 1, 1], s);
                assert!(verify_candelabra(&master).valid);
                let (out, _) = fc3(&master, &scs, &sgdd).unwrap();
                assert_eq!(out.stem.len(), m * (s - 1) + a, "m={m} s={s} a={a}");
                assert_eq!(out.group_type(), GroupType::uniform(m, 3));
                checked += 1;
            }
        }
    }
    // the lemma ingredients with the all-triples master
    let (sgdd, _) = multiply_by_c(&complete_transversal_gdd(3, 4), 2);
    for (scs, a) in [(lemma_cs_8_2_0(), 0), (lemma_cs_8_2_2(), 2)] {
        for n in 2..=4 {
            let (out, _) = fc3(&candelabra_1m1(n), &scs, &sgdd).unwrap();
            assert_eq!(out.stem.len(), a);
            assert_eq!(out.v, 8 * n + a);
            checked += 1;
        }
    }
    assert_eq!(checked, 33);
}

#[test]
fn fc3_examples() {
    let (sgdd, _) = multiply_by_c(&complete_transversal_gdd(3, 4), 2);
    let (out, trace) = fc3(&candelabra_1m1(3), &lemma_cs_8_2_2(), &sgdd).unwrap();
    assert_eq!((out.v, out.stem.len(), out.group_type()), (26, 2, GroupType::uniform(8, 3)));
    assert_eq!(trace.params["distinguished_point"], 0);
    let (one, _) = fc3(&candelabra_1m1(2), &lemma_cs_8_2_2(), &sgdd).unwrap();
    assert_eq!(one.blocks.len(), 72);
    let (five, _) = fc3(&candelabra_1m1(5), &lemma_cs_8_2_2(), &sgdd).unwrap();
    assert_eq!(five.v, 42);
    assert!(verify_splitting_candelabra(&five).valid);

    let empty = CandelabraSystem::new(3, 3, vec![], vec![vec![0], vec![1], vec![2]], vec![vec![0, 1, 2]]);
    assert_eq!(fc3(&empty, &lemma_cs_8_2_2(), &sgdd).unwrap_err(), CombinatorError::EmptyStem);
    let wrong = complete_transversal_gdd(3, 3).to_splitting();
    assert!(matches!(fc3(&candelabra_1m1(3), &lemma_cs_8_2_2(), &wrong), Err(CombinatorError::ShapeMismatch(_))));
}

#[test]
fn fill_groups_3_examples() {
    let (filler, _) = splitting_3_10_3x2();
    let fillers = BTreeMap::from([(8, filler.clone())]);
    let (d, _) = fill_groups_3(&lemma_cs_8_2_2(), &fillers).unwrap();
    assert_eq!((d.v, d.blocks.len()), (18, 102));
    let lone = SplittingCandelabra::new(3, 3, 2, vec![8, 9], vec![(0..8).collect()], vec![]);
    assert_eq!(fill_groups_3(&lone, &fillers).unwrap().0, filler);
    assert_eq!(fill_groups_3(&lone, &BTreeMap::new()).unwrap_err(), CombinatorError::MissingFiller(8));
}

/// Desk-scale GDD(2, k) masters of several shapes.
fn random_master(rng: &mut ChaCha8Rng) -> Gdd {
    match rng.gen_range(0..4) {
        0 => td(3, rng.gen_range(2..=7)).unwrap().0,
        1 => td(4, [3, 4, 5, 7][rng.gen_range(0..4)]).unwrap().0,
        2 => sts([7, 9, 13, 15][rng.gen_range(0..4)]).unwrap(),
        _ => td(5, [4, 5][rng.gen_range(0..2)]).unwrap().0,
    }
}

/// Splitting GDD(2, 2 x 1, k) of type 1^k: every pair as a two-row block.
fn pair_ingredient(k: usize) -> SplittingGdd {
    let mut blocks = Vec::new();
    for a in 0..k as Point {
        for b in a + 1..k as Point {
            blocks.push(SplitBlock::new(vec![vec![a], vec![b]]).unwrap());
        }
    }
    SplittingGdd::new(2, 2, 1, (0..k as Point).map(|x| vec![x]).collect(), blocks)
}

#[test]
fn block_count_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let master = random_master(&mut rng);
        assert!(verify_gdd(&master).valid);
        let c = rng.gen_range(1..=4);
        let (sg, _) = multiply_by_c(&master, c);
        assert_eq!(sg.blocks.len(), master.blocks.len());
        assert_eq!(sg.v, master.v * c);
        assert_eq!(sg.group_type(), GroupType::from_pairs(master.group_type().pairs().map(|(s, m)| (s * c, m))));

        let ingredient = pair_ingredient(master.k);
        let (sg, _) = fundamental_construction(&master, 1, |_| Ok(ingredient.clone())).unwrap();
        assert_eq!(sg.blocks.len(), master.blocks.len() * ingredient.blocks.len());
    }
}

#[test]
fn fill_groups_2_examples() {
    let (td30, _) = td(3, 30).unwrap();
    let (sg, _) = multiply_by_c(&td30, 5);
    let (filler, _) = example_151_design();
    let (d, trace) = fill_groups_2(&sg, &BTreeMap::from([(150, filler)])).unwrap();
    assert_eq!((d.v, d.blocks.len()), (451, 1353));
    assert_eq!(trace.params["filler_copies"], 3);
}

#[test]
fn family_3_3x2_members() {
    for (v, blocks) in [(10, 15), (18, 102), (26, 325), (34, 748), (42, 1435), (50, 2450)] {
        let (d, _) = family_3_3x2(v).unwrap();
        assert_eq!(d.blocks.len(), blocks);
        assert!(verify_splitting_design(&d).valid);
        assert_eq!(expected_block_count(3, v as u64, 3, 2), Some(blocks as u128));
    }
}

#[test]
fn family_2_3x5_members() {
    let opts = ProviderOptions::default();
    for (v, blocks) in [(151, 151), (451, 1353), (601, 2404), (751, 3755)] {
        let (d, trace) = family_2_3x5(v, &opts).unwrap();
        assert_eq!(d.blocks.len(), blocks);
        assert!(verify_edge_partition(&d).valid);
        if v == 601 {
            let climb = trace.find("hill-climb").expect("type 30^4 comes from the hill-climb");
            assert_eq!(climb.params["seed"], 0);
        }
    }
}

#[test]
fn family_2_385_member() {
    let (d, trace) = family_2_385(&ProviderOptions::default()).unwrap();
    assert_eq!(d.blocks.len(), 3080);
    assert!(verify_edge_partition(&d).valid);
    assert!(verify_splitting_design(&d).valid);
    assert_eq!(trace.find("fill in groups (t = 2)").unwrap().params["filler_copies"], 4);
}

#[test]
fn searched_filler_97() {
    let (d, sys, stats) = search_splitting_design(2, 97, 4, 2, 1, Budget::default()).unwrap();
    assert_eq!(d.blocks.len(), 194);
    assert_eq!((sys.modulus, sys.base_blocks.len()), (97, 2));
    assert!(stats.winner.is_some());
}

#[test]
fn cached_filler_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let opts = ProviderOptions {
        cache: Some(splitcode_core::ingredients::cache::IngredientCache::new(dir.path())),
        ..Default::default()
    };
    let (first, t1) = filler_97(&opts).unwrap();
    assert_eq!(t1.step, "searched ingredient");
    let (second, t2) = filler_97(&opts).unwrap();
    assert_eq!(t2.step, "cached ingredient");
    assert_eq!(first, second);
}

#[test]
fn construction_is_deterministic() {
    let opts = ProviderOptions::default();
    let render = |d: SplittingDesign, t: splitcode_core::trace::ConstructionTrace| {
        AnyDesign::SplittingDesign(d).to_canonical_json(t.to_value())
    };
    let a = family_2_3x5(601, &opts).map(|(d, t)| render(d, t)).unwrap();
    let b = family_2_3x5(601, &opts).map(|(d, t)| render(d, t)).unwrap();
    assert_eq!(a, b);
    let a = family_3_3x2(34).map(|(d, t)| render(d, t)).unwrap();
    let b = family_3_3x2(34).map(|(d, t)| render(d, t)).unwrap();
    assert_eq!(a, b);
}
