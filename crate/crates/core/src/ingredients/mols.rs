//! Mutually orthogonal Latin squares from finite fields and direct products.

use serde::Serialize;

use super::field::{factor_prime_powers, prime_power, FiniteField, FieldError, MAX_ORDER};

/// `n x n` array over `0..n`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    pub n: usize,
    cells: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolsSet {
    pub n: usize,
    pub squares: Vec<LatinSquare>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MolsError {
    #[error("unsupported order {0}: {1}")]
    UnsupportedOrder(usize, FieldError),
    #[error("cannot supply {needed} MOLS of order {n}; ladder: {trace:?}")]
    CannotSupplyMols { n: usize, needed: usize, trace: Vec<LadderStep> },
    #[error("square {0} is not Latin")]
    NotLatin(usize),
    #[error("squares {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
}

/// One rung of the MOLS ladder, as recorded in error traces and provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderStep {
    pub order: usize,
    pub source: String,
    pub squares: usize,
}

impl LatinSquare {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let cells = (0..n * n).map(|i| f(i / n, i % n) as u32).collect();
        Self { n, cells }
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.n + col] as usize
    }

    pub fn is_latin(&self) -> bool {
        let n = self.n;
        (0..n).all(|r| {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            (0..n).all(|c| {
                let (a, b) = (self.get(r, c), self.get(c, r));
                a < n && b < n && !std::mem::replace(&mut row_seen[a], true) && !std::mem::replace(&mut col_seen[b], true)
            })
        })
    }

    /// All `n^2` superimposed ordered pairs distinct.
    pub fn is_orthogonal_to(&self, other: &LatinSquare) -> bool {
        let n = self.n;
        if other.n != n {
            return false;
        }
        let mut seen = vec![false; n * n];
        self.cells
            .iter()
            .zip(&other.cells)
            .all(|(&a, &b)| !std::mem::replace(&mut seen[a as usize * n + b as usize], true))
    }
}

impl MolsSet {
    /// Exhaustive check: each square Latin, every pair orthogonal.
    pub fn check(&self) -> Result<(), MolsError> {
        for (i, s) in self.squares.iter().enumerate() {
            if s.n != self.n || !s.is_latin() {
                return Err(MolsError::NotLatin(i));
            }
        }
        for i in 0..self.squares.len() {
            for j in i + 1..self.squares.len() {
                if !self.squares[i].is_orthogonal_to(&self.squares[j]) {
                    return Err(MolsError::NotOrthogonal(i, j));
                }
            }
        }
        Ok(())
    }

    /// The single set of order 1 (one trivial square); unit for [`mols_product`].
    pub fn unit(squares: usize) -> Self {
        Self { n: 1, squares: vec![LatinSquare::from_fn(1, |_, _| 0); squares] }
    }
}

/// `q - 1` squares `L_a(x, y) = a*x + y` over `GF(q)`, `a != 0`.
pub fn mols_from_field(q: usize) -> Result<MolsSet, MolsError> {
    let field = FiniteField::of_order(q).map_err(|e| MolsError::UnsupportedOrder(q, e))?;
    let squares = (1..q)
        .map(|a| LatinSquare::from_fn(q, |x, y| field.add(field.mul(a, x), y)))
        .collect();
    let set = MolsSet { n: q, squares };
    set.check()?;
    Ok(set)
}

/// Direct (MacNeish) product: `min(|A|, |B|)` squares of order `m * n`.
pub fn mols_product(a: &MolsSet, b: &MolsSet) -> Result<MolsSet, MolsError> {
    let (m, n) = (a.n, b.n);
    let squares = a
        .squares
        .iter()
        .zip(&b.squares)
        .map(|(sa, sb)| {
            LatinSquare::from_fn(m * n, |r, c| sa.get(r / n, c / n) * n + sb.get(r % n, c % n))
        })
        .collect();
    let set = MolsSet { n: m * n, squares };
    set.check()?;
    Ok(set)
}

/// Cyclic square `x + y mod n`: one Latin square for any order.
pub fn cyclic_square(n: usize) -> MolsSet {
    MolsSet { n, squares: vec![LatinSquare::from_fn(n, |x, y| (x + y) % n)] }
}

/// `needed` MOLS of order `n` via the ladder: the cyclic square when one
/// suffices, else field sets for each prime-power factor combined by
/// direct product.
pub fn supply_mols(n: usize, needed: usize) -> Result<(MolsSet, Vec<LadderStep>), MolsError> {
    let mut trace = Vec::new();
    if needed == 0 {
        return Ok((MolsSet { n, squares: vec![] }, trace));
    }
    if needed == 1 {
        trace.push(LadderStep { order: n, source: "cyclic group table".into(), squares: 1 });
        return Ok((cyclic_square(n), trace));
    }
    let mut acc = MolsSet::unit(needed);
    for q in factor_prime_powers(n) {
        if q > MAX_ORDER || prime_power(q).is_none() {
            trace.push(LadderStep { order: q, source: "no field construction".into(), squares: 0 });
            return Err(MolsError::CannotSupplyMols { n, needed, trace });
        }
        let field_set = mols_from_field(q)?;
        trace.push(LadderStep { order: q, source: format!("GF({q}) linear squares"), squares: field_set.squares.len() });
        acc = mols_product(&acc, &field_set)?;
    }
    if acc.squares.len() < needed {
        trace.push(LadderStep { order: n, source: "direct product".into(), squares: acc.squares.len() });
        return Err(MolsError::CannotSupplyMols { n, needed, trace });
    }
    acc.squares.truncate(needed);
    trace.push(LadderStep { order: n, source: "direct product".into(), squares: needed });
    Ok((acc, trace))
}
