use std::collections::BTreeSet;

use super::block::{Point, SplitBlock};
use super::types::BaseBlockSystem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DevelopError {
    #[error("increment {increment} does not divide modulus {modulus}")]
    BadIncrement { modulus: usize, increment: usize },
    #[error("base block #{0} is malformed: {1}")]
    BadBaseBlock(usize, String),
}

/// Develops every base block `B` into `B + j*d mod v` for `j = 0 .. v/d`.
///
/// Entries are reduced mod `v` first. Short orbits collapse: the result is
/// the sorted set of distinct canonical blocks.
pub fn develop_base_blocks(sys: &BaseBlockSystem) -> Result<Vec<SplitBlock>, DevelopError> {
    let (v, d) = (sys.modulus, sys.increment);
    if v == 0 || d == 0 || v % d != 0 {
        return Err(DevelopError::BadIncrement { modulus: v, increment: d });
    }
    let mut out = BTreeSet::new();
    for (i, base) in sys.base_blocks.iter().enumerate() {
        let base = base.map_points(|p| p % v as Point);
        base.check_shape().map_err(|e| DevelopError::BadBaseBlock(i, e.to_string()))?;
        for j in 0..v / d {
            let shift = (j * d) as Point;
            out.insert(base.map_points(|p| (p + shift) % v as Point));
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(rows: &[&[Point]]) -> SplitBlock {
        SplitBlock::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn identity_orbit() {
        let b = block(&[&[0, 3], &[5, 7]]);
        let sys = BaseBlockSystem { modulus: 11, increment: 11, base_blocks: vec![b.clone()] };
        assert_eq!(develop_base_blocks(&sys).unwrap(), vec![b]);
    }

    #[test]
    fn short_orbit_is_deduplicated() {
        // {0,2},{1,3} over Z_4 is fixed by +2
        let sys = BaseBlockSystem { modulus: 4, increment: 1, base_blocks: vec![block(&[&[0, 2], &[1, 3]])] };
        assert_eq!(develop_base_blocks(&sys).unwrap().len(), 1);
        let sys = BaseBlockSystem { modulus: 8, increment: 1, base_blocks: vec![block(&[&[0, 4], &[1, 5]])] };
        assert_eq!(develop_base_blocks(&sys).unwrap().len(), 4);
    }

    #[test]
    fn entries_reduced_and_increment_checked() {
        let sys = BaseBlockSystem { modulus: 5, increment: 1, base_blocks: vec![block(&[&[7], &[1]])] };
        let dev = develop_base_blocks(&sys).unwrap();
        assert_eq!(dev.len(), 5);
        assert!(dev.contains(&block(&[&[1], &[2]])));
        let bad = BaseBlockSystem { modulus: 10, increment: 3, base_blocks: vec![] };
        assert!(develop_base_blocks(&bad).is_err());
        let collide = BaseBlockSystem { modulus: 5, increment: 1, base_blocks: vec![block(&[&[6], &[1]])] };
        assert!(matches!(develop_base_blocks(&collide), Err(DevelopError::BadBaseBlock(0, _))));
    }
}
