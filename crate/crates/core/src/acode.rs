//! Splitting authentication codes: combinatorial lower bounds, the design/code
//! correspondence, and an exact evaluator for uniform spoofing attacks.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{binomial, verify_splitting_design, Point, SplitBlock, SplittingDesign, Witness};

/// Lower bound on `P_di` for a `c`-splitting code with `k` sources and `v`
/// messages: `c(k - i)/(v - i)`, zero once `i >= k`.
pub fn huber_pd_bound(i: usize, k: usize, c: usize, v: usize) -> BigRational {
    if i >= k {
        return BigRational::zero();
    }
    assert!(i < v, "order {i} needs more than {v} messages");
    BigRational::new(BigInt::from(c * (k - i)), BigInt::from(v - i))
}

/// Lower bound on the number of encoding rules of a code that reaches the
/// `P_di` bounds for all `i < t`: `C(v, t) / (c^t C(k, t))`.
pub fn huber_rule_bound(t: usize, v: usize, k: usize, c: usize) -> BigRational {
    let num = BigInt::from(binomial(v as u64, t as u64));
    let den = BigInt::from(c).pow(t as u32) * BigInt::from(binomial(k as u64, t as u64));
    BigRational::new(num, den)
}

/// A `c`-splitting code: sources `0..sources`, messages `0..messages`, and
/// each rule maps source `s` to the sorted message set `rules[e][s]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ACode {
    pub sources: usize,
    pub messages: usize,
    pub c: usize,
    pub rules: Vec<Vec<Vec<Point>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ACodeError {
    #[error("design is not valid: {0:?}")]
    InvalidDesign(Option<Witness>),
    #[error("rule {rule} maps source {source_state} to {size} messages, expected {c}")]
    NonUniformSplitting { rule: usize, source_state: usize, size: usize, c: usize },
    #[error("rule {rule} maps two sources to overlapping message sets")]
    OverlappingImages { rule: usize },
    #[error("rule {rule} has {found} sources, expected {expected}")]
    WrongSourceCount { rule: usize, found: usize, expected: usize },
    #[error("message {message} in rule {rule} is outside 0..{messages}")]
    MessageOutOfRange { rule: usize, message: Point, messages: usize },
    #[error("order {i} must be below the number of sources {k}")]
    OrderTooLarge { i: usize, k: usize },
    #[error("code with {v} messages is too large for exact evaluation at order {i} (limit {limit})")]
    TooLargeForExact { v: usize, i: usize, limit: usize },
    #[error("cannot read A-code: {0}")]
    Parse(String),
}

/// One rule per block; source `j` is row `j` of the canonical block.
pub fn design_to_acode(d: &SplittingDesign) -> Result<ACode, ACodeError> {
    let report = verify_splitting_design(d);
    if !report.valid {
        return Err(ACodeError::InvalidDesign(report.witness));
    }
    Ok(ACode { sources: d.k, messages: d.v, c: d.c, rules: d.blocks.iter().map(|b| b.rows().to_vec()).collect() })
}

/// Inverse of [`design_to_acode`]. The result is not verified; use the
/// design verifier for that.
pub fn acode_to_design(ac: &ACode, t: usize) -> Result<SplittingDesign, ACodeError> {
    ac.check()?;
    let blocks = ac.rules.iter().map(|r| SplitBlock::from_rows_unchecked(r.clone())).collect();
    Ok(SplittingDesign::new(t, ac.messages, ac.sources, ac.c, blocks))
}

impl ACode {
    /// Shape checks: source count, image sizes, disjointness, range.
    pub fn check(&self) -> Result<(), ACodeError> {
        for (e, rule) in self.rules.iter().enumerate() {
            if rule.len() != self.sources {
                return Err(ACodeError::WrongSourceCount { rule: e, found: rule.len(), expected: self.sources });
            }
            let mut seen = vec![false; self.messages];
            for (s, image) in rule.iter().enumerate() {
                if image.len() != self.c {
                    return Err(ACodeError::NonUniformSplitting { rule: e, source_state: s, size: image.len(), c: self.c });
                }
                for &m in image {
                    let slot = seen
                        .get_mut(m as usize)
                        .ok_or(ACodeError::MessageOutOfRange { rule: e, message: m, messages: self.messages })?;
                    if std::mem::replace(slot, true) {
                        return Err(ACodeError::OverlappingImages { rule: e });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&serde_json::to_value(self).expect("codes serialize")).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ACodeError> {
        let code: ACode = serde_json::from_str(text).map_err(|e| ACodeError::Parse(e.to_string()))?;
        code.check()?;
        Ok(code)
    }

    /// The `|E| x |S|` matrix: one line per rule, one comma-separated cell
    /// per source, cell entries separated by spaces. No header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            let cells: Vec<String> =
                rule.iter().map(|img| img.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// When a substituted message counts as accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptanceRule {
    /// The message encodes a source not among those already observed.
    #[default]
    NewSource,
    /// The message is any valid message of the rule.
    AnyValid,
}

/// Limits on `v` for exact enumeration, by attack order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactGuard {
    pub max_v_order_le_1: usize,
    pub max_v_order_2: usize,
    pub max_v_higher: usize,
}

impl Default for ExactGuard {
    fn default() -> Self {
        Self { max_v_order_le_1: 160, max_v_order_2: 32, max_v_higher: 16 }
    }
}

impl ExactGuard {
    pub fn limit(&self, i: usize) -> usize {
        match i {
            0 | 1 => self.max_v_order_le_1,
            2 => self.max_v_order_2,
            _ => self.max_v_higher,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeceptionReport {
    pub order: usize,
    pub probability: BigRational,
    pub bound: BigRational,
    pub tight: bool,
}

impl fmt::Display for DeceptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P_d{} = {}  bound = {}  {}",
            self.order,
            render(&self.probability),
            render(&self.bound),
            if self.tight { "tight" } else { "not tight" }
        )
    }
}

/// Exact success probability of the best order-`i` spoofing attack.
///
/// Sources form a uniform `i`-subset, the rule is uniform, and each sent
/// message is uniform over its source's image. The opponent sees the
/// unordered set `O` of sent messages and substitutes the `m ∉ O` that is
/// accepted by the most rules consistent with `O`:
///
/// `P_di = sum_O max_m #{e : O consistent with e, m accepted by e} / (|E| C(k,i) c^i)`.
pub fn evaluate_deception(
    ac: &ACode,
    i: usize,
    guard: &ExactGuard,
    acceptance: AcceptanceRule,
) -> Result<DeceptionReport, ACodeError> {
    let (k, v, c) = (ac.sources, ac.messages, ac.c);
    if i >= k {
        return Err(ACodeError::OrderTooLarge { i, k });
    }
    let limit = guard.limit(i);
    if v > limit {
        return Err(ACodeError::TooLargeForExact { v, i, limit });
    }
    ac.check()?;

    // observation -> rules consistent with it, each with the observed sources
    let mut consistent: HashMap<Vec<Point>, Vec<(usize, u64)>> = HashMap::new();
    for (e, rule) in ac.rules.iter().enumerate() {
        for_each_observation(rule, i, |obs, mask| consistent.entry(obs.to_vec()).or_default().push((e, mask)));
    }
    let mut observations: Vec<(Vec<Point>, Vec<(usize, u64)>)> = consistent.into_iter().collect();
    observations.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let total: u64 = observations
        .par_iter()
        .map(|(obs, rules)| {
            let mut tally = vec![0u64; v];
            for &(e, mask) in rules {
                for (s, image) in ac.rules[e].iter().enumerate() {
                    if acceptance == AcceptanceRule::NewSource && mask >> s & 1 == 1 {
                        continue;
                    }
                    for &m in image {
                        tally[m as usize] += 1;
                    }
                }
            }
            for &m in obs {
                tally[m as usize] = 0;
            }
            tally.into_iter().max().unwrap_or(0)
        })
        .sum();
    let den = BigInt::from(ac.rules.len()) * BigInt::from(binomial(k as u64, i as u64)) * BigInt::from(c).pow(i as u32);
    let probability = BigRational::new(BigInt::from(total), den);
    let bound = huber_pd_bound(i, k, c, v);
    let tight = probability == bound;
    Ok(DeceptionReport { order: i, probability, bound, tight })
}

/// Every sorted message set drawn from `i` distinct sources of `rule`, with
/// the bitmask of those sources.
fn for_each_observation(rule: &[Vec<Point>], i: usize, mut f: impl FnMut(&[Point], u64)) {
    fn rec(
        rule: &[Vec<Point>],
        start: usize,
        left: usize,
        mask: u64,
        buf: &mut Vec<Point>,
        f: &mut dyn FnMut(&[Point], u64),
    ) {
        if left == 0 {
            let mut sorted = buf.clone();
            sorted.sort_unstable();
            f(&sorted, mask);
            return;
        }
        for s in start..rule.len() {
            for &m in &rule[s] {
                buf.push(m);
                rec(rule, s + 1, left - 1, mask | 1 << s, buf, f);
                buf.pop();
            }
        }
    }
    rec(rule, 0, i, 0, &mut Vec::with_capacity(i), &mut f);
}

/// Whether a design meets the rule bound with equality, after verifying it.
pub fn is_optimal(d: &SplittingDesign) -> Result<bool, ACodeError> {
    let report = verify_splitting_design(d);
    if !report.valid {
        return Err(ACodeError::InvalidDesign(report.witness));
    }
    Ok(meets_rule_bound(d))
}

/// Block count equals the rule bound; no verification.
pub fn meets_rule_bound(d: &SplittingDesign) -> bool {
    d.lambda == 1 && BigRational::from_integer(BigInt::from(d.blocks.len())) == huber_rule_bound(d.t, d.v, d.k, d.c)
}

/// `p/q` text for a rational, or `p` when integral.
pub fn render(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Approximate value for display only.
pub fn approx(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bounds() {
        assert_eq!(huber_pd_bound(0, 3, 2, 10), q(3, 5));
        assert_eq!(huber_pd_bound(1, 3, 2, 10), q(4, 9));
        assert_eq!(huber_pd_bound(2, 3, 2, 10), q(1, 4));
        assert_eq!(huber_pd_bound(3, 3, 2, 10), q(0, 1));
        assert_eq!(huber_rule_bound(3, 10, 3, 2), q(15, 1));
        assert_eq!(huber_rule_bound(2, 151, 3, 5), q(151, 1));
        assert_eq!(huber_rule_bound(1, 12, 3, 4), q(1, 1));
    }

    #[test]
    fn trivial_code() {
        let ac = ACode { sources: 3, messages: 6, c: 2, rules: vec![vec![vec![0, 1], vec![2, 3], vec![4, 5]]] };
        let r = evaluate_deception(&ac, 0, &ExactGuard::default(), AcceptanceRule::NewSource).unwrap();
        assert_eq!(r.probability, q(1, 1));
        assert!(r.tight);
        let d = acode_to_design(&ac, 1).unwrap();
        assert_eq!(design_to_acode(&d).unwrap(), ac);
        assert_eq!(ac.to_csv(), "0 1,2 3,4 5\n");
    }

    #[test]
    fn malformed_codes() {
        let overlapping = ACode { sources: 2, messages: 4, c: 2, rules: vec![vec![vec![0, 1], vec![1, 2]]] };
        assert_eq!(acode_to_design(&overlapping, 1), Err(ACodeError::OverlappingImages { rule: 0 }));
        let ragged = ACode { sources: 2, messages: 4, c: 2, rules: vec![vec![vec![0, 1], vec![2]]] };
        assert!(matches!(acode_to_design(&ragged, 1), Err(ACodeError::NonUniformSplitting { .. })));
        assert!(matches!(
            evaluate_deception(&ragged, 2, &ExactGuard::default(), AcceptanceRule::NewSource),
            Err(ACodeError::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn rendering() {
        assert_eq!(render(&q(4, 9)), "4/9");
        assert_eq!(render(&q(15, 1)), "15");
        assert_eq!(render(&q(2, 4)), "1/2");
    }
}
