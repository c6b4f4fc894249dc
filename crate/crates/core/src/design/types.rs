use std::collections::BTreeMap;
use std::fmt;

use super::block::{Point, SplitBlock};

/// Splitting `t-(v, k x c, lambda)` design on points `0..v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingDesign {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub c: usize,
    pub lambda: u32,
    pub blocks: Vec<SplitBlock>,
}

/// Classical group divisible `t`-design with `k`-subset blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gdd {
    pub t: usize,
    pub k: usize,
    pub v: usize,
    pub groups: Vec<Vec<Point>>,
    pub blocks: Vec<Vec<Point>>,
}

/// Splitting group divisible `t`-design with `k x c` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingGdd {
    pub t: usize,
    pub k: usize,
    pub c: usize,
    pub v: usize,
    pub groups: Vec<Vec<Point>>,
    pub blocks: Vec<SplitBlock>,
}

/// Classical `(t, k)` candelabra system. Groups partition the non-stem points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandelabraSystem {
    pub t: usize,
    pub k: usize,
    pub v: usize,
    pub stem: Vec<Point>,
    pub groups: Vec<Vec<Point>>,
    pub blocks: Vec<Vec<Point>>,
}

/// Splitting `(t, k x c)` candelabra system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingCandelabra {
    pub t: usize,
    pub k: usize,
    pub c: usize,
    pub v: usize,
    pub stem: Vec<Point>,
    pub groups: Vec<Vec<Point>>,
    pub blocks: Vec<SplitBlock>,
}

/// Base blocks over `Z_v` developed by the subgroup generated by `increment`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBlockSystem {
    pub modulus: usize,
    pub increment: usize,
    pub base_blocks: Vec<SplitBlock>,
}

/// Group sizes in exponential notation, `g1^n1 g2^n2 ...`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupType(BTreeMap<usize, usize>);

impl GroupType {
    pub fn uniform(size: usize, count: usize) -> Self {
        Self::from_pairs([(size, count)])
    }

    /// Pairs with zero size or zero multiplicity are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut map = BTreeMap::new();
        for (size, mult) in pairs {
            if size > 0 && mult > 0 {
                *map.entry(size).or_insert(0) += mult;
            }
        }
        Self(map)
    }

    pub fn of_groups(groups: &[Vec<Point>]) -> Self {
        Self::from_pairs(groups.iter().map(|g| (g.len(), 1)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&s, &m)| (s, m))
    }

    pub fn total(&self) -> usize {
        self.pairs().map(|(s, m)| s * m).sum()
    }

    pub fn group_count(&self) -> usize {
        self.0.values().sum()
    }

    /// Single size if the type is `g^n`.
    pub fn as_uniform(&self) -> Option<(usize, usize)> {
        (self.0.len() == 1).then(|| self.pairs().next().unwrap())
    }

    /// Consecutive groups `0..g1`, `g1..2g1`, ... in ascending size order.
    pub fn layout(&self) -> Vec<Vec<Point>> {
        let mut next = 0 as Point;
        let mut out = Vec::with_capacity(self.group_count());
        for (size, mult) in self.pairs() {
            for _ in 0..mult {
                out.push((next..next + size as Point).collect());
                next += size as Point;
            }
        }
        out
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().map(|(s, m)| format!("{s}^{m}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Sorts each group and orders groups by their least element.
pub(crate) fn normalize_groups(groups: &mut [Vec<Point>]) {
    for g in groups.iter_mut() {
        g.sort_unstable();
    }
    groups.sort();
}

impl SplittingDesign {
    pub fn new(t: usize, v: usize, k: usize, c: usize, mut blocks: Vec<SplitBlock>) -> Self {
        blocks.sort();
        Self { t, v, k, c, lambda: 1, blocks }
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

impl Gdd {
    pub fn new(t: usize, k: usize, mut groups: Vec<Vec<Point>>, mut blocks: Vec<Vec<Point>>) -> Self {
        normalize_groups(&mut groups);
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        let v = groups.iter().map(Vec::len).sum();
        Self { t, k, v, groups, blocks }
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::of_groups(&self.groups)
    }

    /// Splitting view with single-point rows.
    pub fn to_splitting(&self) -> SplittingGdd {
        let mut s = SplittingGdd::new(
            self.t,
            self.k,
            1,
            self.groups.clone(),
            self.blocks.iter().map(|b| SplitBlock::from_subset(b)).collect(),
        );
        s.v = self.v;
        s
    }
}

impl SplittingGdd {
    pub fn new(
        t: usize,
        k: usize,
        c: usize,
        mut groups: Vec<Vec<Point>>,
        mut blocks: Vec<SplitBlock>,
    ) -> Self {
        normalize_groups(&mut groups);
        blocks.sort();
        let v = groups.iter().map(Vec::len).sum();
        Self { t, k, c, v, groups, blocks }
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::of_groups(&self.groups)
    }
}

impl CandelabraSystem {
    pub fn new(
        t: usize,
        k: usize,
        mut stem: Vec<Point>,
        mut groups: Vec<Vec<Point>>,
        mut blocks: Vec<Vec<Point>>,
    ) -> Self {
        stem.sort_unstable();
        normalize_groups(&mut groups);
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        let v = stem.len() + groups.iter().map(Vec::len).sum::<usize>();
        Self { t, k, v, stem, groups, blocks }
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::of_groups(&self.groups)
    }

    pub fn to_splitting(&self) -> SplittingCandelabra {
        let mut s = SplittingCandelabra::new(
            self.t,
            self.k,
            1,
            self.stem.clone(),
            self.groups.clone(),
            self.blocks.iter().map(|b| SplitBlock::from_subset(b)).collect(),
        );
        s.v = self.v;
        s
    }
}

impl SplittingCandelabra {
    pub fn new(
        t: usize,
        k: usize,
        c: usize,
        mut stem: Vec<Point>,
        mut groups: Vec<Vec<Point>>,
        mut blocks: Vec<SplitBlock>,
    ) -> Self {
        stem.sort_unstable();
        normalize_groups(&mut groups);
        blocks.sort();
        let v = stem.len() + groups.iter().map(Vec::len).sum::<usize>();
        Self { t, k, c, v, stem, groups, blocks }
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::of_groups(&self.groups)
    }
}
