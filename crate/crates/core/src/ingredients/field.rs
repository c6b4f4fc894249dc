//! Small finite fields `GF(p^e)` with table arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest supported field order.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("order {p}^{e} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge { p: usize, e: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("no irreducible polynomial of degree {e} over Z_{p} found")]
    NoIrreducibleFound { p: usize, e: u32 },
    #[error("field axiom check failed: {0}")]
    AxiomFailure(String),
}

/// `GF(p^e)`. Elements are `0..q`, read as base-`p` coefficient vectors
/// (least significant digit = constant term).
#[derive(Debug, Clone)]
pub struct FiniteField {
    pub p: usize,
    pub e: u32,
    /// Monic modulus, coefficients low to high, length `e + 1`.
    pub modulus: Vec<usize>,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `Some((p, e))` with `n = p^e`.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let (mut m, mut e) = (n, 0);
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// Prime-power factorization in ascending prime order.
pub fn factor_prime_powers(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while n > 1 {
        if n % d == 0 {
            let mut q = 1;
            while n % d == 0 {
                n /= d;
                q *= d;
            }
            out.push(q);
        }
        d += 1;
    }
    out
}

fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    // m monic
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * mi) % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn monic_polys(p: usize, degree: u32) -> impl Iterator<Item = Vec<usize>> {
    let count = p.pow(degree);
    (0..count).map(move |mut code| {
        let mut coeffs = Vec::with_capacity(degree as usize + 1);
        for _ in 0..degree {
            coeffs.push(code % p);
            code /= p;
        }
        coeffs.push(1);
        coeffs
    })
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most `deg / 2`.
pub fn is_irreducible(f: &[usize], p: usize) -> bool {
    let deg = f.len() as u32 - 1;
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|g| !poly_rem(f, &g, p).is_empty()))
}

impl FiniteField {
    pub fn new(p: usize, e: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 || p.checked_pow(e).is_none_or(|q| q > MAX_ORDER) {
            return Err(FieldError::TooLarge { p, e });
        }
        // lexicographically first irreducible monic polynomial
        let modulus = monic_polys(p, e)
            .find(|f| is_irreducible(f, p))
            .ok_or(FieldError::NoIrreducibleFound { p, e })?;
        let q = p.pow(e);
        let digits = |x: usize| -> Vec<usize> { (0..e).scan(x, |r, _| { let d = *r % p; *r /= p; Some(d) }).collect() };
        let encode = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum) as u8;
                let mut prod = vec![0usize; 2 * e as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(e as usize, 0);
                mul[a * q + b] = encode(&r) as u8;
            }
        }
        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).ok_or_else(|| {
                FieldError::AxiomFailure(format!("{a} has no inverse"))
            })? as u8;
        }
        let field = Self { p, e, modulus, add, mul, inv };
        field.spot_check()?;
        Ok(field)
    }

    /// Field of prime-power order `q`.
    pub fn of_order(q: usize) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, e)
    }

    pub fn order(&self) -> usize {
        self.p.pow(self.e)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order() + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.inv[a] as usize)
    }

    pub fn pow(&self, a: usize, mut n: u64) -> usize {
        let (mut base, mut acc) = (a, 1);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Associativity and distributivity on sampled triples.
    fn spot_check(&self) -> Result<(), FieldError> {
        let q = self.order();
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        for _ in 0..256 {
            let (a, b, c) = (rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q));
            let ok = self.add(self.add(a, b), c) == self.add(a, self.add(b, c))
                && self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                && self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c));
            if !ok {
                return Err(FieldError::AxiomFailure(format!("triple ({a}, {b}, {c})")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_and_gf3() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.add(1, 1), 0);
        let f = FiniteField::new(3, 1).unwrap();
        assert_eq!(f.inv(1), Some(1));
        assert_eq!(f.inv(2), Some(2));
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn gf16_frobenius() {
        let f = FiniteField::new(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let x = rng.gen_range(0..16);
            assert_eq!(f.pow(x, 16), x);
        }
        assert!(is_irreducible(&f.modulus, 2));
    }

    #[test]
    fn every_supported_order_builds() {
        for q in 2..=MAX_ORDER {
            if let Some((p, e)) = prime_power(q) {
                let f = FiniteField::new(p, e).unwrap();
                // multiplicative group has order q - 1
                for x in 1..q {
                    assert_eq!(f.pow(x, q as u64 - 1), 1, "q = {q}, x = {x}");
                }
            }
        }
    }

    #[test]
    fn errors() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(FiniteField::new(2, 7), Err(FieldError::TooLarge { .. })));
        assert_eq!(FiniteField::of_order(12).unwrap_err(), FieldError::NotPrimePower(12));
    }

    #[test]
    fn factorization() {
        assert_eq!(factor_prime_powers(48), vec![16, 3]);
        assert_eq!(factor_prime_powers(30), vec![2, 3, 5]);
        assert_eq!(prime_power(49), Some((7, 2)));
        assert!(!is_irreducible(&[1, 0, 1], 2)); // x^2 + 1 = (x + 1)^2
    }
}
