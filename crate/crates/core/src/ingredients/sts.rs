//! Steiner triple systems by the Bose (`n ≡ 3 mod 6`) and Skolem
//! (`n ≡ 1 mod 6`) constructions.

use crate::design::{verify_gdd, Gdd, Point};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no STS({0}): order must be 1 or 3 mod 6")]
pub struct InadmissibleOrder(pub usize);

/// `STS(n)` viewed as a GDD(2, 3, n) of type `1^n`.
pub fn sts(n: usize) -> Result<Gdd, InadmissibleOrder> {
    let triples = match n % 6 {
        3 => bose(n / 3),
        1 if n > 1 => skolem((n - 1) / 6),
        1 => vec![],
        _ => return Err(InadmissibleOrder(n)),
    };
    let g = Gdd::new(2, 3, (0..n as Point).map(|p| vec![p]).collect(), triples);
    let report = verify_gdd(&g);
    assert!(report.valid, "STS({n}) failed verification: {:?}", report.witness);
    Ok(g)
}

/// Points `(x, i)` of `Z_m x Z_3`, `m` odd, encoded as `3x + i`; quasigroup
/// `x ∘ y = (x + y)/2 mod m`.
fn bose(m: usize) -> Vec<Vec<Point>> {
    let p = |x: usize, i: usize| (3 * x + i % 3) as Point;
    let half = (m + 1) / 2;
    let op = |x: usize, y: usize| (x + y) * half % m;
    let mut out = Vec::new();
    for x in 0..m {
        out.push(vec![p(x, 0), p(x, 1), p(x, 2)]);
    }
    for x in 0..m {
        for y in x + 1..m {
            for i in 0..3 {
                out.push(vec![p(x, i), p(y, i), p(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Points `∞` (label `6m`) and `(x, i)` of `Z_2m x Z_3` as `3x + i`, with
/// the half-idempotent commutative quasigroup of order `2m`.
fn skolem(m: usize) -> Vec<Vec<Point>> {
    let inf = (6 * m) as Point;
    let p = |x: usize, i: usize| (3 * x + i % 3) as Point;
    let op = |x: usize, y: usize| {
        let s = (x + y) % (2 * m);
        if s % 2 == 0 { s / 2 } else { s / 2 + m }
    };
    let mut out = Vec::new();
    for x in 0..m {
        out.push(vec![p(x, 0), p(x, 1), p(x, 2)]);
        for i in 0..3 {
            out.push(vec![inf, p(x + m, i), p(x, i + 1)]);
        }
    }
    for x in 0..2 * m {
        for y in x + 1..2 * m {
            for i in 0..3 {
                out.push(vec![p(x, i), p(y, i), p(op(x, y), i + 1)]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        for (n, b) in [(7, 7), (9, 12), (13, 26), (3, 1), (1, 0), (15, 35), (19, 57)] {
            let g = sts(n).unwrap();
            assert_eq!(g.blocks.len(), b, "STS({n})");
        }
    }

    #[test]
    fn inadmissible() {
        assert_eq!(sts(8), Err(InadmissibleOrder(8)));
        assert_eq!(sts(5), Err(InadmissibleOrder(5)));
    }
}
