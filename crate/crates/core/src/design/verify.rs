//! Exhaustive verifiers.
//!
//! Every verifier tallies, in one pass over the blocks, how often each
//! `t`-subset occurs with its points in `t` distinct rows, then scans all
//! `C(v, t)` subsets. A qualifying subset must be covered exactly `lambda`
//! times and a non-qualifying one never.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::arith::{binomial, colex_rank};
use super::block::{Point, SplitBlock};
use super::types::{
    CandelabraSystem, Gdd, SplittingCandelabra, SplittingDesign, SplittingGdd,
};

/// Largest `C(v, t)` the dense tally accepts.
pub const MAX_TALLY: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// A `t`-subset covered the wrong number of times.
    Coverage { subset: Vec<Point>, count: u32, expected: u32 },
    /// Block with wrong shape, repeated point, or out-of-range label.
    MalformedBlock { index: usize, reason: String },
    /// Groups and stem do not partition the point set.
    MalformedPartition { reason: String },
    /// Classical block meeting one group twice.
    GroupCollision { index: usize, group: usize },
    /// Parameters outside the verifier's reach.
    Unsupported { reason: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Coverage { subset, count, expected } => {
                write!(f, "subset {subset:?} covered {count} times (expected {expected})")
            }
            Witness::MalformedBlock { index, reason } => {
                write!(f, "malformed block #{index}: {reason}")
            }
            Witness::MalformedPartition { reason } => write!(f, "malformed partition: {reason}"),
            Witness::GroupCollision { index, group } => {
                write!(f, "block #{index} meets group #{group} more than once")
            }
            Witness::Unsupported { reason } => write!(f, "unsupported: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub witness: Option<Witness>,
    /// Number of `t`-subsets the coverage rule applies to.
    pub qualifying_subsets: u64,
    pub blocks: usize,
}

impl VerifyReport {
    fn fail(witness: Witness, blocks: usize) -> Self {
        Self { valid: false, witness: Some(witness), qualifying_subsets: 0, blocks }
    }
}

/// Which `t`-subsets must be covered.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    All,
    Transversal,
    Candelabra,
}

struct Frame<'a> {
    t: usize,
    v: usize,
    k: usize,
    c: usize,
    lambda: u32,
    blocks: &'a [SplitBlock],
    /// `None` for stem points, otherwise the group index.
    group_of: Vec<Option<usize>>,
    n_groups: usize,
    rule: Rule,
}

pub fn verify_splitting_design(d: &SplittingDesign) -> VerifyReport {
    let frame = Frame {
        t: d.t,
        v: d.v,
        k: d.k,
        c: d.c,
        lambda: d.lambda,
        blocks: &d.blocks,
        group_of: vec![Some(0); d.v],
        n_groups: 1,
        rule: Rule::All,
    };
    if d.t == 0 || d.t > d.k || d.c * d.k > d.v {
        return VerifyReport::fail(
            Witness::Unsupported { reason: format!("need 1 <= t <= k and ck <= v, got t={} k={} c={} v={}", d.t, d.k, d.c, d.v) },
            d.blocks.len(),
        );
    }
    frame.run()
}

pub fn verify_splitting_gdd(g: &SplittingGdd) -> VerifyReport {
    match partition(g.v, &[], &g.groups) {
        Ok(group_of) => Frame {
            t: g.t,
            v: g.v,
            k: g.k,
            c: g.c,
            lambda: 1,
            blocks: &g.blocks,
            group_of,
            n_groups: g.groups.len(),
            rule: Rule::Transversal,
        }
        .run(),
        Err(reason) => VerifyReport::fail(Witness::MalformedPartition { reason }, g.blocks.len()),
    }
}

pub fn verify_gdd(g: &Gdd) -> VerifyReport {
    if let Some(w) = classical_collision(&g.blocks, &[], &g.groups, g.v) {
        return VerifyReport::fail(w, g.blocks.len());
    }
    verify_splitting_gdd(&g.to_splitting())
}

pub fn verify_splitting_candelabra(cs: &SplittingCandelabra) -> VerifyReport {
    match partition(cs.v, &cs.stem, &cs.groups) {
        Ok(group_of) => Frame {
            t: cs.t,
            v: cs.v,
            k: cs.k,
            c: cs.c,
            lambda: 1,
            blocks: &cs.blocks,
            group_of,
            n_groups: cs.groups.len(),
            rule: Rule::Candelabra,
        }
        .run(),
        Err(reason) => VerifyReport::fail(Witness::MalformedPartition { reason }, cs.blocks.len()),
    }
}

pub fn verify_candelabra(cs: &CandelabraSystem) -> VerifyReport {
    if let Some(w) = classical_collision(&cs.blocks, &cs.stem, &cs.groups, cs.v) {
        return VerifyReport::fail(w, cs.blocks.len());
    }
    verify_splitting_candelabra(&cs.to_splitting())
}

/// Graph-decomposition check for `t = 2, lambda = 1`: the complete
/// `k`-partite graphs spanned by the blocks must use every edge of `K_v`
/// exactly once. Shares no code with the `t`-subset tally.
pub fn verify_edge_partition(d: &SplittingDesign) -> VerifyReport {
    let v = d.v;
    if d.t != 2 || d.lambda != 1 {
        return VerifyReport::fail(
            Witness::Unsupported { reason: "edge partition needs t = 2, lambda = 1".into() },
            d.blocks.len(),
        );
    }
    let mut mult = vec![0u16; v * v];
    for (index, block) in d.blocks.iter().enumerate() {
        let rows = block.rows();
        let mut seen = vec![false; v];
        for row in rows {
            for &p in row {
                if p as usize >= v || std::mem::replace(&mut seen[p as usize], true) {
                    return VerifyReport::fail(
                        Witness::MalformedBlock { index, reason: format!("bad or repeated point {p}") },
                        d.blocks.len(),
                    );
                }
            }
        }
        for (i, ri) in rows.iter().enumerate() {
            for rj in &rows[i + 1..] {
                for &a in ri {
                    for &b in rj {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        let cell = &mut mult[lo as usize * v + hi as usize];
                        *cell = cell.saturating_add(1);
                    }
                }
            }
        }
    }
    for hi in 1..v {
        for lo in 0..hi {
            let m = mult[lo * v + hi];
            if m != 1 {
                return VerifyReport {
                    valid: false,
                    witness: Some(Witness::Coverage {
                        subset: vec![lo as Point, hi as Point],
                        count: m as u32,
                        expected: 1,
                    }),
                    qualifying_subsets: (v * (v - 1) / 2) as u64,
                    blocks: d.blocks.len(),
                };
            }
        }
    }
    VerifyReport {
        valid: true,
        witness: None,
        qualifying_subsets: (v * (v.saturating_sub(1)) / 2) as u64,
        blocks: d.blocks.len(),
    }
}

fn partition(v: usize, stem: &[Point], groups: &[Vec<Point>]) -> Result<Vec<Option<usize>>, String> {
    let mut owner: Vec<Option<Option<usize>>> = vec![None; v];
    let parts = std::iter::once((None, stem)).chain(groups.iter().enumerate().map(|(i, g)| (Some(i), g.as_slice())));
    for (id, part) in parts {
        if id.is_some() && part.is_empty() {
            return Err(format!("group #{} is empty", id.unwrap()));
        }
        for &p in part {
            let slot = owner.get_mut(p as usize).ok_or_else(|| format!("point {p} outside 0..{v}"))?;
            if slot.is_some() {
                return Err(format!("point {p} appears in two parts"));
            }
            *slot = Some(id);
        }
    }
    owner
        .into_iter()
        .enumerate()
        .map(|(p, o)| o.ok_or_else(|| format!("point {p} is in no group")))
        .collect()
}

fn classical_collision(
    blocks: &[Vec<Point>],
    stem: &[Point],
    groups: &[Vec<Point>],
    v: usize,
) -> Option<Witness> {
    let group_of = partition(v, stem, groups).ok()?;
    for (index, b) in blocks.iter().enumerate() {
        let mut hit = vec![false; groups.len()];
        for &p in b {
            if let Some(Some(g)) = group_of.get(p as usize) {
                if std::mem::replace(&mut hit[*g], true) {
                    return Some(Witness::GroupCollision { index, group: *g });
                }
            }
        }
    }
    None
}

impl Frame<'_> {
    fn qualifies(&self, subset: &[Point]) -> bool {
        match self.rule {
            Rule::All => true,
            Rule::Transversal => {
                for (i, &a) in subset.iter().enumerate() {
                    for &b in &subset[i + 1..] {
                        if self.group_of[a as usize] == self.group_of[b as usize] {
                            return false;
                        }
                    }
                }
                true
            }
            Rule::Candelabra => {
                // |T ∩ (S ∪ G_i)| < t for every group i; vacuous without groups
                if self.n_groups == 0 {
                    return true;
                }
                let in_stem = subset.iter().filter(|&&p| self.group_of[p as usize].is_none()).count();
                let max_in_group = subset
                    .iter()
                    .filter_map(|&p| self.group_of[p as usize])
                    .map(|g| subset.iter().filter(|&&q| self.group_of[q as usize] == Some(g)).count())
                    .max()
                    .unwrap_or(0);
                in_stem + max_in_group < self.t
            }
        }
    }

    fn run(&self) -> VerifyReport {
        let n = self.blocks.len();
        for (index, b) in self.blocks.iter().enumerate() {
            let shape = b.check_shape().and_then(|_| b.check_range(self.v));
            let reason = match shape {
                Err(e) => Some(e.to_string()),
                Ok(()) if b.k() != self.k || b.c() != self.c => {
                    Some(format!("shape {}x{}, expected {}x{}", b.k(), b.c(), self.k, self.c))
                }
                Ok(()) => None,
            };
            if let Some(reason) = reason {
                return VerifyReport::fail(Witness::MalformedBlock { index, reason }, n);
            }
        }
        let total = binomial(self.v as u64, self.t as u64);
        if total > MAX_TALLY {
            return VerifyReport::fail(
                Witness::Unsupported { reason: format!("C({}, {}) = {total} subsets exceeds the tally limit", self.v, self.t) },
                n,
            );
        }
        let tally: Vec<AtomicU32> = (0..total).map(|_| AtomicU32::new(0)).collect();
        self.blocks.par_iter().for_each(|b| {
            b.for_each_split_subset(self.t, |s| {
                tally[colex_rank(s) as usize].fetch_add(1, Ordering::Relaxed);
            });
        });

        let mut qualifying = 0u64;
        let mut witness = None;
        let mut subset: Vec<Point> = (0..self.t as Point).collect();
        for cell in &tally {
            let count = cell.load(Ordering::Relaxed);
            let q = self.qualifies(&subset);
            qualifying += q as u64;
            let expected = if q { self.lambda } else { 0 };
            if count != expected && witness.is_none() {
                witness = Some(Witness::Coverage { subset: subset.clone(), count, expected });
            }
            next_colex(&mut subset);
        }
        VerifyReport { valid: witness.is_none(), witness, qualifying_subsets: qualifying, blocks: n }
    }
}

/// Advances a sorted subset to its colex successor.
fn next_colex(s: &mut [Point]) {
    let t = s.len();
    for i in 0..t {
        let limit = if i + 1 < t { s[i + 1] } else { Point::MAX };
        if s[i] + 1 < limit {
            s[i] += 1;
            for (j, x) in s.iter_mut().enumerate().take(i) {
                *x = j as Point;
            }
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::arith::colex_unrank;

    fn rows(r: &[&[Point]]) -> SplitBlock {
        SplitBlock::new(r.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn colex_successor_matches_unrank() {
        let mut s: Vec<Point> = (0..3).collect();
        for r in 0..binomial(9, 3) as u64 {
            assert_eq!(s, colex_unrank(r, 3));
            next_colex(&mut s);
        }
    }

    #[test]
    fn single_block_one_design() {
        for (k, c) in [(1, 1), (3, 2), (2, 5)] {
            let block = SplitBlock::new(
                (0..k).map(|r| (r * c..(r + 1) * c).map(|p| p as Point).collect()).collect(),
            )
            .unwrap();
            let d = SplittingDesign::new(1, k * c, k, c, vec![block]);
            assert!(verify_splitting_design(&d).valid);
        }
    }

    #[test]
    fn malformed_block_is_not_a_coverage_failure() {
        let bad = SplitBlock::from_rows_unchecked(vec![vec![0, 1], vec![1, 2], vec![3, 4]]);
        let d = SplittingDesign::new(1, 6, 3, 2, vec![bad]);
        let r = verify_splitting_design(&d);
        assert!(!r.valid);
        assert!(matches!(r.witness, Some(Witness::MalformedBlock { index: 0, .. })));

        let out_of_range = SplitBlock::new(vec![vec![0, 9], vec![2, 3], vec![4, 5]]).unwrap();
        let d = SplittingDesign::new(1, 6, 3, 2, vec![out_of_range]);
        assert!(matches!(verify_splitting_design(&d).witness, Some(Witness::MalformedBlock { .. })));
    }

    #[test]
    fn within_row_pairs_stay_uncovered() {
        // one block on 6 points: pairs {0,1}, {2,3}, {4,5} sit inside rows
        let d = SplittingDesign::new(2, 6, 3, 2, vec![rows(&[&[0, 1], &[2, 3], &[4, 5]])]);
        let r = verify_splitting_design(&d);
        assert!(!r.valid);
        assert_eq!(
            r.witness,
            Some(Witness::Coverage { subset: vec![0, 1], count: 0, expected: 1 })
        );
        assert!(!verify_edge_partition(&d).valid);
    }

    #[test]
    fn gdd_type_v1_is_vacuous() {
        let g = Gdd::new(2, 3, vec![(0..7).collect()], vec![]);
        let r = verify_gdd(&g);
        assert!(r.valid);
        assert_eq!(r.qualifying_subsets, 0);
    }

    #[test]
    fn gdd_partition_errors() {
        let overlapping = Gdd::new(2, 2, vec![vec![0, 1], vec![1, 2]], vec![]);
        assert!(matches!(verify_gdd(&overlapping).witness, Some(Witness::MalformedPartition { .. })));
        let mut missing = Gdd::new(2, 2, vec![vec![0], vec![1]], vec![vec![0, 1]]);
        missing.v = 3;
        assert!(matches!(verify_gdd(&missing).witness, Some(Witness::MalformedPartition { .. })));
    }

    #[test]
    fn gdd_block_meeting_group_twice() {
        let g = Gdd::new(2, 2, vec![vec![0, 1], vec![2]], vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(verify_gdd(&g).witness, Some(Witness::GroupCollision { index: 0, group: 0 }));
    }

    #[test]
    fn candelabra_all_triples() {
        // stem {0}, singleton groups: every triple qualifies
        for m in 2..=5u32 {
            let pts: Vec<Point> = (0..=m).collect();
            let mut blocks = Vec::new();
            for a in 0..=m {
                for b in a + 1..=m {
                    for c in b + 1..=m {
                        blocks.push(vec![a, b, c]);
                    }
                }
            }
            let cs = CandelabraSystem::new(3, 3, vec![0], pts[1..].iter().map(|&p| vec![p]).collect(), blocks);
            let r = verify_candelabra(&cs);
            assert!(r.valid, "m = {m}");
            assert_eq!(r.qualifying_subsets as u128, binomial(m as u64 + 1, 3));
        }
    }
}
