//! Parameter-level arithmetic: binomials, the necessary divisibility
//! conditions, and the known nonexistence family.

/// `C(n, r)`, exact in `u128`. Panics on overflow, which needs `n` far
/// beyond anything constructed here.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow")
            / (i + 1) as u128;
    }
    acc
}

/// Outcome of [`divisibility_ok`]: `Err(s)` names the first failing `s`.
pub type Divisibility = Result<(), u32>;

/// Checks `lambda * C(v-s, t-s) ≡ 0 (mod c^(t-s) * C(k-s, t-s))` for every
/// `0 <= s <= t`.
pub fn divisibility_ok(t: u32, v: u64, k: u32, c: u32, lambda: u64) -> Divisibility {
    for s in 0..=t {
        let (ts, vs, ks) = ((t - s) as u64, v.saturating_sub(s as u64), (k - s.min(k)) as u64);
        let lhs = lambda as u128 * binomial(vs, ts);
        let modulus = (c as u128).pow(t - s) * binomial(ks, ts);
        if modulus == 0 || lhs % modulus != 0 {
            return Err(s);
        }
    }
    Ok(())
}

/// Why a parameter set is known not to admit a design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nonexistence {
    pub reason: String,
}

/// Flags the family `2-((k-1)c^2 + 1, k x c, 1)` with `k, c >= 2`: a design
/// there would partition `K_v` into fewer complete `k`-partite graphs than
/// Huang's lower bound `ceil((v-1)/(k-1)) = c^2` allows.
pub fn known_nonexistent(t: u32, v: u64, k: u32, c: u32, lambda: u64) -> Option<Nonexistence> {
    if t != 2 || lambda != 1 || k < 2 || c < 2 {
        return None;
    }
    let critical = (k as u64 - 1) * (c as u64).pow(2) + 1;
    (v == critical).then(|| Nonexistence {
        reason: format!(
            "no splitting 2-({v},{k}x{c},1) design: v = (k-1)c^2+1 and K_{v} cannot be \
             partitioned into {v}/{k} complete {k}-partite graphs (Huang's bound needs at least {})",
            (c as u64).pow(2)
        ),
    })
}

/// Number of blocks of a splitting `t-(v, k x c, 1)` design, if integral.
pub fn expected_block_count(t: u32, v: u64, k: u32, c: u32) -> Option<u128> {
    let num = binomial(v, t as u64);
    let den = (c as u128).pow(t) * binomial(k as u64, t as u64);
    (den != 0 && num % den == 0).then(|| num / den)
}

/// Rank of a sorted `t`-subset of `0..v` in colexicographic order
/// (combinatorial number system). Dense in `0..C(v, t)`.
pub fn colex_rank(sorted: &[u32]) -> u64 {
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| binomial(x as u64, i as u64 + 1) as u64)
        .sum()
}

/// Inverse of [`colex_rank`].
pub fn colex_unrank(mut rank: u64, t: usize) -> Vec<u32> {
    let mut out = vec![0; t];
    for i in (0..t).rev() {
        let r = i as u64 + 1;
        let mut x = r - 1;
        while binomial(x + 1, r) as u64 <= rank {
            x += 1;
        }
        rank -= binomial(x, r) as u64;
        out[i] = x as u32;
    }
    out
}
