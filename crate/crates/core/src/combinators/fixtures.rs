//! Explicit small objects the families start from.

use crate::design::{
    develop_base_blocks, BaseBlockSystem, CandelabraSystem, Point, SplitBlock, SplittingCandelabra, SplittingDesign,
};
use crate::trace::ConstructionTrace;

const BASE_151: [[Point; 5]; 3] = [[0, 1, 2, 3, 4], [5, 13, 59, 105, 118], [28, 67, 73, 112, 134]];

const CS_8_2_BASE: [[[Point; 2]; 3]; 7] = [
    [[0, 4], [6, 9], [7, 11]],
    [[0, 14], [1, 4], [11, 13]],
    [[0, 5], [8, 10], [13, 15]],
    [[0, 2], [4, 1], [7, 15]],
    [[0, 13], [1, 15], [2, 12]],
    [[0, 13], [1, 9], [4, 6]],
    [[0, 6], [9, 7], [14, 15]],
];

/// Splitting 3-(10, 3x2, 1) design found by exact-cover search with seed 7.
const SD_10_3X2: [[[Point; 2]; 3]; 15] = [
    [[0, 1], [2, 8], [6, 9]],
    [[0, 2], [4, 9], [5, 6]],
    [[0, 4], [1, 8], [3, 5]],
    [[0, 5], [1, 4], [7, 9]],
    [[0, 5], [1, 7], [2, 6]],
    [[0, 6], [3, 8], [4, 7]],
    [[0, 7], [1, 2], [4, 8]],
    [[0, 8], [2, 6], [3, 5]],
    [[0, 8], [3, 7], [5, 9]],
    [[1, 5], [3, 9], [6, 7]],
    [[1, 7], [3, 4], [8, 9]],
    [[1, 9], [2, 5], [3, 8]],
    [[1, 9], [2, 6], [4, 7]],
    [[2, 4], [3, 6], [5, 7]],
    [[2, 9], [3, 8], [4, 6]],
];

fn block<const C: usize>(rows: &[[Point; C]]) -> SplitBlock {
    SplitBlock::new(rows.iter().map(|r| r.to_vec()).collect()).expect("fixture blocks are well formed")
}

/// The single 3x5 base block over `Z_151`, developed by `+1`.
pub fn example_151() -> BaseBlockSystem {
    BaseBlockSystem { modulus: 151, increment: 1, base_blocks: vec![block(&BASE_151)] }
}

/// The developed example: a splitting 2-(151, 3x5, 1) design.
pub fn example_151_design() -> (SplittingDesign, ConstructionTrace) {
    let sys = example_151();
    let blocks = develop_base_blocks(&sys).expect("example base block develops");
    let trace = ConstructionTrace::new("explicit base block")
        .param("modulus", 151)
        .param("increment", 1)
        .param("base_blocks", sys.base_blocks.iter().map(|b| b.rows().to_vec()).collect::<Vec<_>>());
    (SplittingDesign::new(2, 151, 3, 5, blocks), trace)
}

fn z16_groups() -> Vec<Vec<Point>> {
    (0..2).map(|j| (0..8).map(|i| 2 * i + j).collect()).collect()
}

fn cs_8_2_0_blocks() -> Vec<SplitBlock> {
    let sys = BaseBlockSystem { modulus: 16, increment: 2, base_blocks: CS_8_2_BASE.iter().map(|b| block(b)).collect() };
    develop_base_blocks(&sys).expect("lemma base blocks develop")
}

/// Splitting (3, 3x2)-CS(8^2:0) on `Z_16`, groups evens and odds.
pub fn lemma_cs_8_2_0() -> SplittingCandelabra {
    SplittingCandelabra::new(3, 3, 2, vec![], z16_groups(), cs_8_2_0_blocks())
}

/// Splitting (3, 3x2)-CS(8^2:2): the stem `{16, 17}` joined to the 16
/// arrays `[{16,17}, {2i,2i+2}, {2j+1,2j+3}]`, `i, j in {0,2,4,6}`.
pub fn lemma_cs_8_2_2() -> SplittingCandelabra {
    let mut blocks = cs_8_2_0_blocks();
    for i in [0, 2, 4, 6] {
        for j in [0, 2, 4, 6] {
            let rows = vec![vec![16, 17], vec![2 * i, (2 * i + 2) % 16], vec![2 * j + 1, (2 * j + 3) % 16]];
            blocks.push(SplitBlock::new(rows).expect("stem blocks are well formed"));
        }
    }
    SplittingCandelabra::new(3, 3, 2, vec![16, 17], z16_groups(), blocks)
}

pub fn lemma_trace(stem: usize) -> ConstructionTrace {
    ConstructionTrace::new("explicit candelabra system")
        .param("type", "8^2")
        .param("stem", stem)
        .param("modulus", 16)
        .param("increment", 2)
        .param("base_blocks", CS_8_2_BASE)
}

/// (3, 3)-CS(1^m:1) on `0..=m`: stem `{0}`, singleton groups, all triples.
pub fn candelabra_1m1(m: usize) -> CandelabraSystem {
    assert!(m >= 2, "candelabra_1m1 needs m >= 2");
    let n = m as Point + 1;
    let mut blocks = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                blocks.push(vec![a, b, c]);
            }
        }
    }
    CandelabraSystem::new(3, 3, vec![0], (1..n).map(|x| vec![x]).collect(), blocks)
}

/// The searched splitting 3-(10, 3x2, 1) design shipped with the crate.
pub fn splitting_3_10_3x2() -> (SplittingDesign, ConstructionTrace) {
    let blocks = SD_10_3X2.iter().map(|b| block(b)).collect();
    let trace = ConstructionTrace::new("searched fixture")
        .param("parameters", "3-(10,3x2,1)")
        .param("method", "exact cover")
        .param("seed", 7);
    (SplittingDesign::new(3, 10, 3, 2, blocks), trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{verify_candelabra, verify_splitting_candelabra, verify_splitting_design};
    use crate::ingredients::search::{search_splitting_design, Budget};

    #[test]
    fn example_rows() {
        let sys = example_151();
        assert_eq!(sys.base_blocks[0].rows()[0], vec![0, 1, 2, 3, 4]);
        let (d, _) = example_151_design();
        assert_eq!(d.blocks.len(), 151);
        assert!(verify_splitting_design(&d).valid);
    }

    #[test]
    fn lemma_objects() {
        let r = verify_splitting_candelabra(&lemma_cs_8_2_0());
        assert!(r.valid);
        assert_eq!((r.blocks, r.qualifying_subsets), (56, 448));
        let r = verify_splitting_candelabra(&lemma_cs_8_2_2());
        assert!(r.valid);
        assert_eq!((r.blocks, r.qualifying_subsets), (72, 576));
    }

    #[test]
    fn small_candelabra() {
        assert_eq!(candelabra_1m1(2).blocks.len(), 1);
        assert_eq!(candelabra_1m1(3).blocks.len(), 4);
        let cs = candelabra_1m1(4);
        assert_eq!(cs.blocks.len(), 10);
        assert!(verify_candelabra(&cs).valid);
    }

    #[test]
    fn fixture_matches_its_search() {
        let (fixture, _) = splitting_3_10_3x2();
        assert!(verify_splitting_design(&fixture).valid);
        let (found, _, _) = search_splitting_design(3, 10, 3, 2, 7, Budget::default()).unwrap();
        assert_eq!(found, fixture);
    }
}
