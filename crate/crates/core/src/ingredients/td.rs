use crate::design::{verify_gdd, Gdd, Point};

use super::mols::{supply_mols, LadderStep, MolsError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TdError {
    #[error("transversal designs need k >= 2 and n >= 1, got TD({k},{n})")]
    BadParameters { k: usize, n: usize },
    #[error(transparent)]
    Mols(#[from] MolsError),
}

/// `TD(k, n)` as a GDD(2, k, kn) of type `n^k` with `n^2` blocks.
///
/// Group `i` is `i*n .. (i+1)*n`. The block for cell `(x, y)` is
/// `{x, n + y, 2n + L_1(x, y), ...}` over `k - 2` MOLS of order `n`.
pub fn td(k: usize, n: usize) -> Result<(Gdd, Vec<LadderStep>), TdError> {
    if k < 2 || n == 0 {
        return Err(TdError::BadParameters { k, n });
    }
    let (mols, trace) = supply_mols(n, k - 2)?;
    let groups: Vec<Vec<Point>> = (0..k).map(|i| ((i * n) as Point..((i + 1) * n) as Point).collect()).collect();
    let mut blocks = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut b = vec![x as Point, (n + y) as Point];
            b.extend(mols.squares.iter().enumerate().map(|(i, sq)| ((i + 2) * n + sq.get(x, y)) as Point));
            blocks.push(b);
        }
    }
    let g = Gdd::new(2, k, groups, blocks);
    let report = verify_gdd(&g);
    assert!(report.valid, "TD({k},{n}) failed verification: {:?}", report.witness);
    Ok((g, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn td_3_30() {
        let (g, _) = td(3, 30).unwrap();
        assert_eq!(g.blocks.len(), 900);
        assert_eq!(g.v, 90);
        assert!(verify_gdd(&g).valid);
    }

    #[test]
    fn td_2_is_all_pairs() {
        for n in 1..6 {
            let (g, _) = td(2, n).unwrap();
            assert_eq!(g.blocks.len(), n * n);
            assert!(verify_gdd(&g).valid);
        }
    }

    #[test]
    fn td_without_mols() {
        assert!(matches!(td(4, 6), Err(TdError::Mols(MolsError::CannotSupplyMols { .. }))));
        assert!(td(1, 3).is_err());
    }
}
