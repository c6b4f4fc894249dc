use std::fmt;

use serde::{Deserialize, Serialize};

/// Point label. Storage always uses dense labels `0..v`.
pub type Point = u32;

/// A `k x c` block: `k` pairwise-disjoint rows of `c` points each.
///
/// Only the row partition matters for coverage, so blocks are kept in
/// canonical form: every row sorted ascending and rows ordered
/// lexicographically. Two blocks are equal iff their canonical forms are.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplitBlock {
    rows: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlockError {
    #[error("block has no rows")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("row {0} is empty")]
    EmptyRow(usize),
    #[error("point {0} occurs more than once")]
    DuplicatePoint(Point),
    #[error("point {point} is outside 0..{v}")]
    OutOfRange { point: Point, v: usize },
}

impl SplitBlock {
    /// Builds a canonical block, rejecting ragged rows and repeated points.
    pub fn new(rows: Vec<Vec<Point>>) -> Result<Self, BlockError> {
        let block = Self::from_rows_unchecked(rows);
        block.check_shape()?;
        Ok(block)
    }

    /// Canonicalizes without validating. Verifiers use this to report
    /// malformed input as a witness rather than refusing to load it.
    pub fn from_rows_unchecked(mut rows: Vec<Vec<Point>>) -> Self {
        for row in rows.iter_mut() {
            row.sort_unstable();
        }
        rows.sort();
        Self { rows }
    }

    /// Block whose rows are single points: the classical `k`-subset view.
    pub fn from_subset(points: &[Point]) -> Self {
        Self::from_rows_unchecked(points.iter().map(|&p| vec![p]).collect())
    }

    pub fn rows(&self) -> &[Vec<Point>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Point>> {
        self.rows
    }

    /// Number of rows (`k`).
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Row length (`c`), taken from the first row.
    pub fn c(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.rows.iter().flatten().copied()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.rows.iter().any(|r| r.binary_search(&p).is_ok())
    }

    /// Index of the row holding `p`, if any.
    pub fn row_of(&self, p: Point) -> Option<usize> {
        self.rows.iter().position(|r| r.binary_search(&p).is_ok())
    }

    pub fn check_shape(&self) -> Result<(), BlockError> {
        let c = self.c();
        if self.rows.is_empty() {
            return Err(BlockError::Empty);
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                return Err(BlockError::EmptyRow(i));
            }
            if row.len() != c {
                return Err(BlockError::RaggedRow { row: i, len: row.len(), expected: c });
            }
        }
        let mut all: Vec<Point> = self.points().collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(BlockError::DuplicatePoint(w[0]));
        }
        Ok(())
    }

    pub fn check_range(&self, v: usize) -> Result<(), BlockError> {
        match self.points().find(|&p| p as usize >= v) {
            Some(point) => Err(BlockError::OutOfRange { point, v }),
            None => Ok(()),
        }
    }

    /// Applies a point map and re-canonicalizes.
    pub fn map_points(&self, mut f: impl FnMut(Point) -> Point) -> Self {
        Self::from_rows_unchecked(
            self.rows.iter().map(|r| r.iter().map(|&p| f(p)).collect()).collect(),
        )
    }

    /// Visits every `t`-subset whose points lie in `t` distinct rows.
    /// The subset is passed sorted ascending. There are `c^t * C(k, t)` of them.
    pub fn for_each_split_subset(&self, t: usize, mut f: impl FnMut(&[Point])) {
        if t == 0 || t > self.rows.len() {
            if t == 0 {
                f(&[]);
            }
            return;
        }
        let mut chosen_rows = Vec::with_capacity(t);
        let mut picked = Vec::with_capacity(t);
        let mut sorted = Vec::with_capacity(t);
        self.rows_rec(t, 0, &mut chosen_rows, &mut picked, &mut sorted, &mut f);
    }

    fn rows_rec(
        &self,
        t: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        picked: &mut Vec<Point>,
        sorted: &mut Vec<Point>,
        f: &mut impl FnMut(&[Point]),
    ) {
        if chosen.len() == t {
            self.entries_rec(chosen, 0, picked, sorted, f);
            return;
        }
        let remaining = t - chosen.len();
        for r in start..=self.rows.len() - remaining {
            chosen.push(r);
            self.rows_rec(t, r + 1, chosen, picked, sorted, f);
            chosen.pop();
        }
    }

    fn entries_rec(
        &self,
        chosen: &[usize],
        depth: usize,
        picked: &mut Vec<Point>,
        sorted: &mut Vec<Point>,
        f: &mut impl FnMut(&[Point]),
    ) {
        if depth == chosen.len() {
            sorted.clear();
            sorted.extend_from_slice(picked);
            sorted.sort_unstable();
            f(sorted);
            return;
        }
        for &p in &self.rows[chosen[depth]] {
            picked.push(p);
            self.entries_rec(chosen, depth + 1, picked, sorted, f);
            picked.pop();
        }
    }
}

impl fmt::Debug for SplitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_sorts_rows_and_entries() {
        let b = SplitBlock::new(vec![vec![9, 7], vec![4, 1], vec![6, 0]]).unwrap();
        assert_eq!(b.rows(), &[vec![0, 6], vec![1, 4], vec![7, 9]]);
    }

    #[test]
    fn rejects_duplicates_and_ragged_rows() {
        assert_eq!(
            SplitBlock::new(vec![vec![1, 2], vec![2, 3]]),
            Err(BlockError::DuplicatePoint(2))
        );
        assert!(matches!(
            SplitBlock::new(vec![vec![1, 2], vec![3]]),
            Err(BlockError::RaggedRow { .. })
        ));
        assert_eq!(SplitBlock::new(vec![]), Err(BlockError::Empty));
    }

    #[test]
    fn split_subset_count() {
        let b = SplitBlock::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let mut seen = Vec::new();
        b.for_each_split_subset(3, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 8);
        let mut pairs = 0;
        b.for_each_split_subset(2, |s| {
            assert_ne!(b.row_of(s[0]), b.row_of(s[1]));
            pairs += 1;
        });
        assert_eq!(pairs, 12);
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(mut pts in proptest::sample::subsequence((0u32..40).collect::<Vec<_>>(), 12), k in 1usize..4) {
            pts.truncate(k * (12 / k));
            let c = pts.len() / k;
            let rows: Vec<Vec<Point>> = pts.chunks(c).map(|r| r.iter().rev().copied().collect()).collect();
            let once = SplitBlock::new(rows.clone()).unwrap();
            let twice = SplitBlock::new(once.rows().to_vec()).unwrap();
            prop_assert_eq!(&once, &twice);
            let mut shuffled = rows;
            shuffled.reverse();
            prop_assert_eq!(once, SplitBlock::new(shuffled).unwrap());
        }
    }
}
