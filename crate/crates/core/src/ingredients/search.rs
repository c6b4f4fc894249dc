//! Seeded searches for small splitting designs.
//!
//! `t = 2` with full orbits: min-conflicts hill-climbing over base blocks in
//! `Z_v`, aiming for every nonzero difference to arise exactly once from
//! cross-row pairs. Anything else small enough: randomized exact cover over
//! all `k x c` arrays. Every success is developed and verified.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::design::arith::{binomial, colex_rank};
use crate::design::{
    develop_base_blocks, divisibility_ok, known_nonexistent, verify_splitting_design, BaseBlockSystem, Point,
    SplitBlock, SplittingDesign,
};

/// Work limits for a search: total moves (or exact-cover nodes) and the
/// number of independent restarts sharing them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub moves: u64,
    pub restarts: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Self { moves: 10_000_000, restarts: 32 }
    }
}

impl Budget {
    fn per_restart(&self) -> u64 {
        (self.moves / self.restarts.max(1) as u64).max(1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub method: String,
    pub restarts: u32,
    pub moves: u64,
    /// Restart index that succeeded.
    pub winner: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("parameters fail the divisibility conditions at s = {0}")]
    Inadmissible(u32),
    #[error("{0}")]
    KnownNonexistent(String),
    #[error("search budget exhausted after {} moves over {} restarts", .0.moves, .0.restarts)]
    BudgetExhausted(SearchStats),
    #[error("unsupported search: {0}")]
    Unsupported(String),
}

/// Largest candidate pool the exact-cover search will enumerate.
const MAX_CANDIDATES: u128 = 2_000_000;

pub fn rng_for(seed: u64, restart: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Searches for a splitting `t-(v, k x c, 1)` design. The result is a
/// base-block system: cyclic (`increment = 1`) when the difference search
/// applies, otherwise every block as its own trivial orbit (`increment = v`).
pub fn search_cyclic_splitting_design(
    t: usize,
    v: usize,
    k: usize,
    c: usize,
    seed: u64,
    budget: Budget,
) -> Result<(BaseBlockSystem, SearchStats), SearchError> {
    if t == 0 || t > k || c * k > v {
        return Err(SearchError::Unsupported(format!("need 1 <= t <= k and ck <= v (t={t} k={k} c={c} v={v})")));
    }
    divisibility_ok(t as u32, v as u64, k as u32, c as u32, 1).map_err(SearchError::Inadmissible)?;
    if let Some(n) = known_nonexistent(t as u32, v as u64, k as u32, c as u32, 1) {
        return Err(SearchError::KnownNonexistent(n.reason));
    }
    let orbit_size = c * c * k * (k - 1);
    let result = if t == 2 && (v - 1) % orbit_size == 0 {
        difference_search(v, k, c, (v - 1) / orbit_size, seed, budget)?
    } else {
        exact_cover_search(t, v, k, c, seed, budget)?
    };
    let blocks = develop_base_blocks(&result.0).expect("search emits well-formed base blocks");
    let design = SplittingDesign::new(t, v, k, c, blocks);
    assert!(verify_splitting_design(&design).valid, "search produced an invalid design");
    Ok(result)
}

/// Convenience wrapper returning the developed, verified design.
pub fn search_splitting_design(
    t: usize,
    v: usize,
    k: usize,
    c: usize,
    seed: u64,
    budget: Budget,
) -> Result<(SplittingDesign, BaseBlockSystem, SearchStats), SearchError> {
    let (sys, stats) = search_cyclic_splitting_design(t, v, k, c, seed, budget)?;
    let blocks = develop_base_blocks(&sys).expect("verified above");
    Ok((SplittingDesign::new(t, v, k, c, blocks), sys, stats))
}

pub(crate) fn first_success<T: Send>(
    budget: Budget,
    method: &str,
    run: impl Fn(u32, u64, &dyn Fn() -> bool) -> (Option<T>, u64) + Sync,
) -> Result<(T, SearchStats), SearchError> {
    let per = budget.per_restart();
    // Restarts run in parallel and the lowest successful index wins. A
    // restart may stop early once a lower index has succeeded, which never
    // changes the winner.
    let winner = AtomicU32::new(u32::MAX);
    let mut outcomes: Vec<(u32, Option<T>, u64)> = (0..budget.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let superseded = || winner.load(Ordering::Relaxed) < r;
            let (hit, moves) = run(r, per, &superseded);
            if hit.is_some() {
                winner.fetch_min(r, Ordering::Relaxed);
            }
            (r, hit, moves)
        })
        .collect();
    outcomes.sort_by_key(|(r, _, _)| *r);
    let mut stats = SearchStats { method: method.into(), ..Default::default() };
    for (r, hit, moves) in outcomes {
        stats.restarts += 1;
        stats.moves += moves;
        if let Some(hit) = hit {
            stats.winner = Some(r);
            return Ok((hit, stats));
        }
    }
    Err(SearchError::BudgetExhausted(stats))
}

fn difference_search(
    v: usize,
    k: usize,
    c: usize,
    n_base: usize,
    seed: u64,
    budget: Budget,
) -> Result<(BaseBlockSystem, SearchStats), SearchError> {
    // With v prime and 2*n_base | v-1, take mu of order 2*n_base: the base
    // blocks mu^j B (j < n_base) of a single free block B then only need the
    // cross-row differences of B to meet each coset of <mu> in one +-pair.
    let multipliers = match multiplier_of_order(v, 2 * n_base) {
        Some(mu) if n_base > 1 => (0..n_base as u32).map(|j| mod_pow(mu, j, v as u32)).collect(),
        _ => vec![1],
    };
    let n_free = if multipliers.len() > 1 { 1 } else { n_base };
    let method = if n_free == 1 && n_base > 1 { "difference tabu search (multiplier orbit)" } else { "difference tabu search" };
    let (sys, stats) = first_success(budget, method, |r, limit, superseded| {
        let mut rng = rng_for(seed, r);
        let mut state = DiffState::random(v, k, c, n_free, multipliers.clone(), &mut rng);
        let stagnation = 200 * (v * n_base) as u64;
        let moves = state.climb(&mut rng, limit, stagnation, superseded);
        let sys = (state.cost == 0).then(|| state.to_system());
        (sys, moves)
    })?;
    Ok((sys, stats))
}

fn mod_pow(base: u32, mut exp: u32, m: u32) -> u32 {
    let (mut b, mut acc) = (base as u64 % m as u64, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u64;
        }
        b = b * b % m as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Least element of multiplicative order exactly `order` in `Z_v^*`, `v` prime.
fn multiplier_of_order(v: usize, order: usize) -> Option<u32> {
    let is_prime = v >= 2 && (2..).take_while(|d| d * d <= v).all(|d| v % d != 0);
    if !is_prime || order == 0 || (v - 1) % order != 0 {
        return None;
    }
    (2..v as u32).find(|&x| {
        mod_pow(x, order as u32, v as u32) == 1
            && (1..order as u32).all(|d| order as u32 % d != 0 || mod_pow(x, d, v as u32) != 1)
    })
}

struct DiffState {
    v: usize,
    k: usize,
    c: usize,
    /// Free blocks, `k * c` entries each, row-major.
    blocks: Vec<Vec<u32>>,
    /// Each free block contributes `mu * B` for every multiplier.
    multipliers: Vec<u32>,
    counts: Vec<u32>,
    cost: u64,
}

impl DiffState {
    fn random(v: usize, k: usize, c: usize, n_free: usize, multipliers: Vec<u32>, rng: &mut ChaCha8Rng) -> Self {
        let all: Vec<u32> = (0..v as u32).collect();
        let blocks = (0..n_free).map(|_| all.choose_multiple(rng, k * c).copied().collect()).collect();
        let mut s = Self { v, k, c, blocks, multipliers, counts: vec![0; v], cost: 0 };
        for b in 0..n_free {
            for pos in 0..k * c {
                s.apply(b, pos, 1);
            }
        }
        // each cross-row difference was added from both endpoints
        for x in s.counts.iter_mut() {
            *x /= 2;
        }
        s.cost = s.counts[1..].iter().map(|&n| n.saturating_sub(1) as u64).sum();
        s
    }

    /// Adds (`sign = 1`) or removes (`-1`) the differences of entry `pos`
    /// in every multiplier copy. Returns the change in cost.
    fn apply(&mut self, b: usize, pos: usize, sign: i32) -> i64 {
        let v = self.v as u64;
        let x = self.blocks[b][pos] as u64;
        let row = pos / self.c;
        let mut delta = 0i64;
        for q in 0..self.k * self.c {
            if q / self.c == row {
                continue;
            }
            let y = self.blocks[b][q] as u64;
            let base = (x + v - y) % v;
            for &mu in &self.multipliers {
                let d = base * mu as u64 % v;
                for d in [d, (v - d) % v] {
                    let cell = &mut self.counts[d as usize];
                    if sign > 0 {
                        delta += (*cell >= 1) as i64;
                        *cell += 1;
                    } else {
                        *cell -= 1;
                        delta -= (*cell >= 1) as i64;
                    }
                }
            }
        }
        delta
    }

    /// Tabu search: every move takes the best value change over all
    /// non-tabu positions; a changed position stays frozen for `tenure`
    /// moves unless the move would beat the best cost seen.
    fn climb(&mut self, rng: &mut ChaCha8Rng, limit: u64, stagnation: u64, superseded: &dyn Fn() -> bool) -> u64 {
        let positions: Vec<(usize, usize)> =
            (0..self.blocks.len()).flat_map(|b| (0..self.k * self.c).map(move |p| (b, p))).collect();
        let tenure = (positions.len() / 3).max(2) as u64;
        let mut frozen_until = vec![0u64; positions.len()];
        let mut best = self.cost;
        let mut since_best = 0u64;
        let mut moves = 0u64;
        while self.cost > 0 && moves < limit && since_best < stagnation {
            if moves % 64 == 0 && superseded() {
                break;
            }
            moves += 1;
            let mut choices: Vec<(usize, u32)> = Vec::new();
            let mut best_delta = i64::MAX;
            for (i, &(b, pos)) in positions.iter().enumerate() {
                let old = self.blocks[b][pos];
                let removed = self.apply(b, pos, -1);
                for x in 0..self.v as u32 {
                    if x == old || self.blocks[b].contains(&x) {
                        continue;
                    }
                    self.blocks[b][pos] = x;
                    let delta = removed + self.apply(b, pos, 1);
                    self.apply(b, pos, -1);
                    let tabu = frozen_until[i] > moves;
                    if tabu && (self.cost as i64 + delta) >= best as i64 {
                        continue;
                    }
                    match delta.cmp(&best_delta) {
                        std::cmp::Ordering::Less => {
                            best_delta = delta;
                            choices.clear();
                            choices.push((i, x));
                        }
                        std::cmp::Ordering::Equal => choices.push((i, x)),
                        _ => {}
                    }
                }
                self.blocks[b][pos] = old;
                self.apply(b, pos, 1);
            }
            let Some(&(i, x)) = choices.choose(rng) else { break };
            let (b, pos) = positions[i];
            let removed = self.apply(b, pos, -1);
            self.blocks[b][pos] = x;
            let added = self.apply(b, pos, 1);
            self.cost = (self.cost as i64 + removed + added) as u64;
            frozen_until[i] = moves + tenure + rng.gen_range(0..=tenure);
            if self.cost < best {
                best = self.cost;
                since_best = 0;
            } else {
                since_best += 1;
            }
        }
        moves
    }

    fn to_system(&self) -> BaseBlockSystem {
        let v = self.v as u64;
        let base_blocks = self
            .blocks
            .iter()
            .flat_map(|b| {
                self.multipliers.iter().map(move |&mu| {
                    let rows = b.chunks(self.c).map(|r| r.iter().map(|&x| (x as u64 * mu as u64 % v) as u32).collect());
                    SplitBlock::new(rows.collect()).unwrap()
                })
            })
            .collect();
        BaseBlockSystem { modulus: self.v, increment: 1, base_blocks }
    }
}

/// Every `k x c` array on `0..v` in canonical form.
fn all_split_blocks(v: usize, k: usize, c: usize) -> Vec<SplitBlock> {
    fn partitions(points: &[Point], c: usize, acc: &mut Vec<Vec<Point>>, out: &mut Vec<SplitBlock>) {
        if points.is_empty() {
            out.push(SplitBlock::new(acc.clone()).unwrap());
            return;
        }
        // the least remaining point anchors the next row
        let (first, rest) = (points[0], &points[1..]);
        let mut combo = Vec::with_capacity(c - 1);
        choose(rest, c - 1, 0, &mut combo, &mut |chosen| {
            let mut row = vec![first];
            row.extend_from_slice(chosen);
            let remaining: Vec<Point> = rest.iter().copied().filter(|p| !chosen.contains(p)).collect();
            acc.push(row);
            partitions(&remaining, c, acc, out);
            acc.pop();
        });
    }
    fn choose(pool: &[Point], r: usize, start: usize, cur: &mut Vec<Point>, f: &mut dyn FnMut(&[Point])) {
        if cur.len() == r {
            f(cur);
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < r - cur.len() {
                break;
            }
            cur.push(pool[i]);
            choose(pool, r, i + 1, cur, f);
            cur.pop();
        }
    }
    let all: Vec<Point> = (0..v as Point).collect();
    let mut out = Vec::new();
    let mut support = Vec::new();
    choose(&all, k * c, 0, &mut support, &mut |s| {
        let mut acc = Vec::new();
        partitions(s, c, &mut acc, &mut out);
    });
    out
}

fn exact_cover_search(
    t: usize,
    v: usize,
    k: usize,
    c: usize,
    seed: u64,
    budget: Budget,
) -> Result<(BaseBlockSystem, SearchStats), SearchError> {
    let mut pool = binomial(v as u64, (k * c) as u64);
    for row in 0..k {
        pool *= binomial(((k - row) * c - 1) as u64, (c - 1) as u64);
    }
    if pool > MAX_CANDIDATES {
        return Err(SearchError::Unsupported(format!("{pool} candidate blocks is too many for exact cover")));
    }
    let candidates = all_split_blocks(v, k, c);
    let n_subsets = binomial(v as u64, t as u64) as usize;
    let covers: Vec<Vec<u32>> = candidates
        .iter()
        .map(|b| {
            let mut s = Vec::new();
            b.for_each_split_subset(t, |x| s.push(colex_rank(x) as u32));
            s
        })
        .collect();
    let mut by_subset: Vec<Vec<u32>> = vec![Vec::new(); n_subsets];
    for (i, cov) in covers.iter().enumerate() {
        for &s in cov {
            by_subset[s as usize].push(i as u32);
        }
    }
    let (chosen, stats) = first_success(budget, "exact cover", |r, limit, superseded| {
        let mut rng = rng_for(seed, r);
        let mut order = by_subset.clone();
        for list in order.iter_mut() {
            list.shuffle(&mut rng);
        }
        let mut dfs = Cover { covers: &covers, by_subset: &order, covered: vec![false; n_subsets], nodes: 0, limit, superseded };
        let mut chosen = Vec::new();
        let hit = dfs.solve(&mut chosen).then_some(chosen);
        (hit, dfs.nodes)
    })?;
    Ok((
        BaseBlockSystem {
            modulus: v,
            increment: v,
            base_blocks: chosen.into_iter().map(|i| candidates[i as usize].clone()).collect(),
        },
        stats,
    ))
}

struct Cover<'a> {
    covers: &'a [Vec<u32>],
    by_subset: &'a [Vec<u32>],
    covered: Vec<bool>,
    nodes: u64,
    limit: u64,
    superseded: &'a dyn Fn() -> bool,
}

impl Cover<'_> {
    fn fits(&self, cand: u32) -> bool {
        self.covers[cand as usize].iter().all(|&s| !self.covered[s as usize])
    }

    fn solve(&mut self, chosen: &mut Vec<u32>) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit || (self.nodes % 256 == 0 && (self.superseded)()) {
            self.limit = 0;
            return false;
        }
        // most constrained uncovered subset
        let mut best: Option<(usize, usize)> = None;
        for (s, cands) in self.by_subset.iter().enumerate() {
            if self.covered[s] {
                continue;
            }
            let n = cands.iter().filter(|&&c| self.fits(c)).count();
            if best.is_none_or(|(_, m)| n < m) {
                best = Some((s, n));
                if n <= 1 {
                    break;
                }
            }
        }
        let Some((s, n)) = best else { return true };
        if n == 0 {
            return false;
        }
        for &cand in &self.by_subset[s] {
            if !self.fits(cand) {
                continue;
            }
            for &x in &self.covers[cand as usize] {
                self.covered[x as usize] = true;
            }
            chosen.push(cand);
            if self.solve(chosen) {
                return true;
            }
            chosen.pop();
            for &x in &self.covers[cand as usize] {
                self.covered[x as usize] = false;
            }
            if self.nodes > self.limit {
                return false;
            }
        }
        false
    }
}
