//! Classical GDDs: the provider ladder and the hill-climbing fallback.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::design::{verify_gdd, Gdd, GroupType, Point};
use crate::trace::ConstructionTrace;

use super::cache::{CacheError, IngredientCache, IngredientRequest};
use super::search::{first_success, rng_for, Budget, SearchError, SearchStats};
use super::sts::sts;
use super::td::td;
use crate::design::AnyDesign;

#[derive(Debug, thiserror::Error)]
pub enum GddError {
    #[error("inadmissible GDD request: {0}")]
    Inadmissible(String),
    #[error("admissible GDD({t},{k}) of type {group_type} not found; tried {tried:?}")]
    AdmissibleButNotFound { t: usize, k: usize, group_type: String, tried: Vec<String>, stats: Option<SearchStats> },
    #[error(transparent)]
    Cache(#[from] CacheError),
}

/// Seed, budget, and optional cache for ingredient requests.
#[derive(Debug, Clone, Default)]
pub struct ProviderOptions {
    pub seed: u64,
    pub budget: Budget,
    pub cache: Option<IngredientCache>,
}

/// Necessary conditions for a GDD(2, k) of the given type, for the classes
/// the ladder serves. For uniform `k = 3, 4` these are the known
/// existence criteria; for other types only the local counting conditions.
pub fn gdd_admissible(t: usize, k: usize, gt: &GroupType) -> Result<(), String> {
    if t != 2 {
        return Ok(());
    }
    let v = gt.total();
    if let Some((g, n)) = gt.as_uniform() {
        let (g, n) = (g as u64, n as u64);
        match k {
            3 => {
                if n < 3 || (n - 1) * g % 2 != 0 || n * (n - 1) * g * g % 6 != 0 {
                    return Err(format!("type {g}^{n} needs n >= 3, (n-1)g even, n(n-1)g^2 ≡ 0 mod 6"));
                }
            }
            4 => {
                if n < 4 || (n - 1) * g % 3 != 0 || n * (n - 1) * g * g % 12 != 0 {
                    return Err(format!("type {g}^{n} needs n >= 4, (n-1)g ≡ 0 mod 3, n(n-1)g^2 ≡ 0 mod 12"));
                }
                if (g, n) == (2, 4) || (g, n) == (6, 4) {
                    return Err(format!("no GDD(2,4) of type {g}^4 exists"));
                }
            }
            _ => {}
        }
        return Ok(());
    }
    let cross: usize = gt.pairs().map(|(s, m)| s * m * (v - s)).sum::<usize>() / 2;
    if k >= 2 && (gt.pairs().any(|(s, _)| (v - s) % (k - 1) != 0) || cross % (k * (k - 1) / 2) != 0) {
        return Err(format!("type {gt} fails the local divisibility conditions for block size {k}"));
    }
    Ok(())
}

/// Provides a verified GDD(t, k) of type `gt` by the ladder: (a) a
/// transversal design when there are `k` groups; (b) for `k = 3` and
/// `n ≡ 1, 3 mod 6` groups of size `g`, an STS(n) weighted by TD(3, g);
/// (c) the cache; (d) hill-climbing.
pub fn gdd_provider(
    t: usize,
    k: usize,
    gt: &GroupType,
    opts: &ProviderOptions,
) -> Result<(Gdd, ConstructionTrace), GddError> {
    gdd_admissible(t, k, gt).map_err(GddError::Inadmissible)?;
    let mut tried = Vec::new();
    let uniform = gt.as_uniform();

    if let (2, Some((g, n))) = (t, uniform) {
        if n == k {
            tried.push("transversal design".to_string());
            if let Ok((gdd, ladder)) = td(k, g) {
                let trace = ConstructionTrace::new("transversal design")
                    .param("k", k)
                    .param("n", g)
                    .param("mols_ladder", ladder);
                return Ok((gdd, trace));
            }
        }
        if k == 3 && n > 3 && (n % 6 == 1 || n % 6 == 3) {
            tried.push("weighted Steiner triple system".to_string());
            if let Some(gdd) = weighted_sts(n, g) {
                let trace = ConstructionTrace::new("weighted Steiner triple system")
                    .param("sts_order", n)
                    .param("weight", g)
                    .child(ConstructionTrace::new("transversal design").param("k", 3).param("n", g));
                return Ok((gdd, trace));
            }
        }
    }

    let request = IngredientRequest::gdd(t, k, gt.clone());
    if let Some(cache) = &opts.cache {
        tried.push("cache".to_string());
        if let Some((AnyDesign::Gdd(gdd), provenance)) = cache.get(&request)? {
            let trace = ConstructionTrace::new("cached ingredient")
                .param("key", request.key())
                .param("provenance", provenance);
            return Ok((gdd, trace));
        }
    }

    tried.push("hill-climb".to_string());
    match hill_climb_gdd(t, k, gt, opts.seed, opts.budget) {
        Ok((gdd, stats)) => {
            let trace = ConstructionTrace::new("hill-climb")
                .param("seed", opts.seed)
                .param("budget", opts.budget)
                .param("stats", &stats);
            if let Some(cache) = &opts.cache {
                cache.put(&request, &AnyDesign::Gdd(gdd.clone()), trace.to_value())?;
            }
            Ok((gdd, trace))
        }
        Err(HillClimbError::Unsupported { .. }) => Err(GddError::AdmissibleButNotFound {
            t,
            k,
            group_type: gt.to_string(),
            tried,
            stats: None,
        }),
        Err(HillClimbError::Search(SearchError::BudgetExhausted(stats))) => {
            Err(GddError::AdmissibleButNotFound { t, k, group_type: gt.to_string(), tried, stats: Some(stats) })
        }
        Err(HillClimbError::Search(e)) => Err(GddError::Inadmissible(e.to_string())),
        Err(HillClimbError::Inadmissible(e)) => Err(GddError::Inadmissible(e)),
    }
}

/// STS(n) with every point blown up to `g` copies; each triple carries a
/// TD(3, g). Degenerate Wilson weighting with constant weight.
fn weighted_sts(n: usize, g: usize) -> Option<Gdd> {
    let base = sts(n).ok()?;
    let (ingredient, _) = td(3, g).ok()?;
    let gp = g as Point;
    let mut blocks = Vec::with_capacity(base.blocks.len() * g * g);
    for triple in &base.blocks {
        for b in &ingredient.blocks {
            // TD point i*g + r sits in group i, copy r
            blocks.push(b.iter().map(|&p| triple[(p / gp) as usize] * gp + p % gp).collect());
        }
    }
    let groups = (0..n as Point).map(|x| (x * gp..(x + 1) * gp).collect()).collect();
    let gdd = Gdd::new(2, 3, groups, blocks);
    verify_gdd(&gdd).valid.then_some(gdd)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HillClimbError {
    #[error("hill-climbing supports only t = 2, k = 3 (got t = {t}, k = {k})")]
    Unsupported { t: usize, k: usize },
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Stinson-style hill-climbing for a GDD(2, 3) of any admissible type.
///
/// Each move picks a point `x` with an uncovered cross pair `xy` and a
/// point `z` in a third group, preferring `xz` uncovered. Blocks through
/// `xz` or `yz` are removed and `{x, y, z}` is added. A restart begins
/// after `10 * b` moves without a new best block count, where `b` is the
/// target block count. Deterministic for fixed `(seed, budget)`.
pub fn hill_climb_gdd(
    t: usize,
    k: usize,
    gt: &GroupType,
    seed: u64,
    budget: Budget,
) -> Result<(Gdd, SearchStats), HillClimbError> {
    if t != 2 || k != 3 {
        return Err(HillClimbError::Unsupported { t, k });
    }
    gdd_admissible(t, k, gt).map_err(HillClimbError::Inadmissible)?;
    let groups = gt.layout();
    let v = gt.total();
    let mut group_of = vec![0usize; v];
    for (i, g) in groups.iter().enumerate() {
        for &p in g {
            group_of[p as usize] = i;
        }
    }
    let cross_pairs: usize = (0..v).map(|x| (0..x).filter(|&y| group_of[x] != group_of[y]).count()).sum();
    let target = cross_pairs / 3;
    let (triples, stats) = first_success(budget, "gdd hill-climb", |r, limit, superseded| {
        let mut rng = rng_for(seed, r);
        let mut state = Climber::new(v, &group_of);
        let moves = state.run(&mut rng, target, limit, 10 * target as u64 + 10, superseded);
        ((state.blocks == target).then(|| state.triples()), moves)
    })?;
    let gdd = Gdd::new(2, 3, groups, triples);
    let report = verify_gdd(&gdd);
    assert!(report.valid, "hill-climb emitted an invalid GDD: {:?}", report.witness);
    Ok((gdd, stats))
}

struct Climber<'a> {
    v: usize,
    group_of: &'a [usize],
    /// `third[x * v + y]` = third point of the block on `{x, y}`, plus one.
    third: Vec<u32>,
    /// Uncovered cross pairs at each point.
    deficit: Vec<usize>,
    blocks: usize,
}

impl<'a> Climber<'a> {
    fn new(v: usize, group_of: &'a [usize]) -> Self {
        let deficit = (0..v).map(|x| group_of.iter().filter(|&&g| g != group_of[x]).count()).collect();
        Self { v, group_of, third: vec![0; v * v], deficit, blocks: 0 }
    }

    fn covered(&self, x: usize, y: usize) -> Option<usize> {
        self.third[x * self.v + y].checked_sub(1).map(|z| z as usize)
    }

    fn set(&mut self, [a, b, c]: [usize; 3], present: bool) {
        for (x, y, z) in [(a, b, c), (b, a, c), (a, c, b), (c, a, b), (b, c, a), (c, b, a)] {
            self.third[x * self.v + y] = if present { z as u32 + 1 } else { 0 };
        }
        for p in [a, b, c] {
            if present {
                self.deficit[p] -= 2;
            } else {
                self.deficit[p] += 2;
            }
        }
        if present {
            self.blocks += 1;
        } else {
            self.blocks -= 1;
        }
    }

    fn remove_through(&mut self, x: usize, y: usize) {
        if let Some(z) = self.covered(x, y) {
            self.set([x, y, z], false);
        }
    }

    fn uncovered_partners(&self, x: usize) -> Vec<usize> {
        (0..self.v).filter(|&y| self.group_of[y] != self.group_of[x] && self.covered(x, y).is_none()).collect()
    }

    fn run(
        &mut self,
        rng: &mut impl Rng,
        target: usize,
        limit: u64,
        stagnation: u64,
        superseded: &dyn Fn() -> bool,
    ) -> u64 {
        let mut moves = 0;
        let mut best = 0;
        let mut since_best = 0;
        let points: Vec<usize> = (0..self.v).collect();
        while self.blocks < target && moves < limit && since_best < stagnation {
            if moves % 256 == 0 && superseded() {
                break;
            }
            moves += 1;
            let live: Vec<usize> = points.iter().copied().filter(|&x| self.deficit[x] > 0).collect();
            let Some(&x) = live.choose(rng) else { break };
            let partners = self.uncovered_partners(x);
            let &y = partners.choose(rng).unwrap();
            let (gx, gy) = (self.group_of[x], self.group_of[y]);
            let free: Vec<usize> = partners.iter().copied().filter(|&z| self.group_of[z] != gy).collect();
            let z = match free.choose(rng) {
                Some(&z) => z,
                None if !self.uncovered_partners(y).iter().all(|&z| self.group_of[z] == gx) => {
                    let from_y: Vec<usize> =
                        self.uncovered_partners(y).into_iter().filter(|&z| self.group_of[z] != gx).collect();
                    *from_y.choose(rng).unwrap()
                }
                None => {
                    let third: Vec<usize> =
                        points.iter().copied().filter(|&z| self.group_of[z] != gx && self.group_of[z] != gy).collect();
                    match third.choose(rng) {
                        Some(&z) => z,
                        None => continue,
                    }
                }
            };
            self.remove_through(x, z);
            self.remove_through(y, z);
            self.set([x, y, z], true);
            if self.blocks > best {
                best = self.blocks;
                since_best = 0;
            } else {
                since_best += 1;
            }
        }
        moves
    }

    fn triples(&self) -> Vec<Vec<Point>> {
        let mut out = Vec::with_capacity(self.blocks);
        for x in 0..self.v {
            for y in x + 1..self.v {
                if let Some(z) = self.covered(x, y) {
                    if z > y {
                        out.push(vec![x as Point, y as Point, z as Point]);
                    }
                }
            }
        }
        out
    }
}

/// Counts blocks through each point pair class, for diagnostics in tests.
pub fn pair_coverage(g: &Gdd) -> BTreeMap<(Point, Point), usize> {
    let mut m = BTreeMap::new();
    for b in &g.blocks {
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                *m.entry((b[i], b[j])).or_insert(0) += 1;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hill_climb_6_4() {
        let (g, _) = hill_climb_gdd(2, 3, &GroupType::uniform(6, 4), 1, Budget::default()).unwrap();
        assert_eq!(g.blocks.len(), 72);
        assert!(verify_gdd(&g).valid);
    }

    #[test]
    fn hill_climb_matches_td_on_2_3() {
        let (climbed, _) = hill_climb_gdd(2, 3, &GroupType::uniform(2, 3), 0, Budget::default()).unwrap();
        let (direct, _) = td(3, 2).unwrap();
        assert_eq!(climbed.blocks.len(), 4);
        assert!(verify_gdd(&climbed).valid && verify_gdd(&direct).valid);
        assert!(pair_coverage(&climbed).values().all(|&n| n == 1));
    }

    #[test]
    fn inadmissible_before_search() {
        assert!(matches!(
            hill_climb_gdd(2, 3, &GroupType::uniform(2, 5), 0, Budget::default()),
            Err(HillClimbError::Inadmissible(_))
        ));
        assert!(matches!(
            hill_climb_gdd(2, 4, &GroupType::uniform(3, 4), 0, Budget::default()),
            Err(HillClimbError::Unsupported { .. })
        ));
    }

    #[test]
    fn hill_climb_is_deterministic() {
        let gt = GroupType::uniform(4, 4);
        let a = hill_climb_gdd(2, 3, &gt, 5, Budget::default()).unwrap();
        let b = hill_climb_gdd(2, 3, &gt, 5, Budget::default()).unwrap();
        assert_eq!(a.0, b.0);
    }

    #[test]
    fn ladder_branches() {
        let opts = ProviderOptions::default();
        let (g, tr) = gdd_provider(2, 3, &GroupType::uniform(30, 3), &opts).unwrap();
        assert_eq!((tr.step.as_str(), g.blocks.len()), ("transversal design", 900));
        let (g, tr) = gdd_provider(2, 3, &GroupType::uniform(30, 7), &opts).unwrap();
        assert_eq!(tr.step, "weighted Steiner triple system");
        assert_eq!(g.blocks.len(), 7 * 900);
        assert!(verify_gdd(&g).valid);
        let (g, tr) = gdd_provider(2, 3, &GroupType::uniform(30, 4), &opts).unwrap();
        assert_eq!(tr.step, "hill-climb");
        assert_eq!(g.blocks.len(), 1800);
        assert!(matches!(gdd_provider(2, 4, &GroupType::uniform(6, 4), &opts), Err(GddError::Inadmissible(_))));
        assert!(matches!(gdd_provider(2, 3, &GroupType::uniform(2, 5), &opts), Err(GddError::Inadmissible(_))));
    }

    #[test]
    fn admissibility_arithmetic() {
        assert!(gdd_admissible(2, 3, &GroupType::uniform(30, 4)).is_ok());
        assert!(gdd_admissible(2, 3, &GroupType::uniform(30, 5)).is_ok());
        assert!(gdd_admissible(2, 4, &GroupType::uniform(48, 4)).is_ok());
        assert!(gdd_admissible(2, 3, &GroupType::uniform(1, 8)).is_err());
    }
}
