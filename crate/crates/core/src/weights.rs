//! Highest weights of Spin(m), the Spin(n+1) ↓ Spin(n) branching rule, and
//! the weights labelling the isotypic summands of the spinor-form bundles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{ExactError, HalfInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid K-type: {0}")]
    InvalidKType(String),
}

impl From<ExactError> for WeightError {
    fn from(e: ExactError) -> Self {
        WeightError::InvalidWeight(e.to_string())
    }
}

/// Candidate highest weight: a nonempty list of half-integers that are all
/// integral or all half-odd. Dominance is checked separately by
/// [`is_dominant`], since it depends on the parity of the group dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    entries: Vec<HalfInt>,
    integral: bool,
}

impl Weight {
    pub fn new(entries: Vec<HalfInt>) -> Result<Self, WeightError> {
        let first = entries
            .first()
            .ok_or_else(|| WeightError::InvalidWeight("empty entry list".into()))?;
        let integral = first.is_integral();
        if entries.iter().any(|e| e.is_integral() != integral) {
            return Err(WeightError::InvalidWeight(format!(
                "mixed parity entries {}",
                fmt_entries(&entries)
            )));
        }
        Ok(Self { entries, integral })
    }

    /// Build from twice the entries, e.g. `[3, 1]` for `(3/2, 1/2)`.
    pub fn from_twice(twice: &[i64]) -> Result<Self, WeightError> {
        Self::new(twice.iter().map(|&t| HalfInt::from_twice(t)).collect())
    }

    pub fn entries(&self) -> &[HalfInt] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// True when every entry is an integer (the weight factors through SO).
    pub fn is_integral(&self) -> bool {
        self.integral
    }
}

fn fmt_entries(entries: &[HalfInt]) -> String {
    let parts: Vec<String> = entries.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_entries(&self.entries))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a comma separated list such as `3/2,1/2,-1/2`.
impl FromStr for Weight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split(',')
            .map(|p| p.parse::<HalfInt>())
            .collect::<Result<Vec<_>, _>>()?;
        Weight::new(entries)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let entries = raw
            .iter()
            .map(|s| s.parse::<HalfInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Weight::new(entries).map_err(serde::de::Error::custom)
    }
}

/// Dominance for Spin(m): `λ_1 ≥ ⋯ ≥ λ_l ≥ 0` when m is odd, and
/// `λ_1 ≥ ⋯ ≥ λ_{l−1} ≥ |λ_l|` when m is even.
pub fn is_dominant(w: &Weight, group_is_odd_spin: bool) -> bool {
    let e = w.entries();
    let ordered = e.windows(2).all(|p| p[0] >= p[1]);
    let last = e.last().expect("weights are nonempty");
    if group_is_odd_spin {
        ordered && *last >= HalfInt::from_int(0)
    } else {
        let head = &e[..e.len() - 1];
        let head_ordered = head.windows(2).all(|p| p[0] >= p[1]);
        let tail_ok = head.last().is_none_or(|h| *h >= last.abs());
        head_ordered && tail_ok
    }
}

/// Rank of Spin(m).
pub fn spin_rank(m: u32) -> usize {
    (m / 2) as usize
}

/// Whether the Spin(n+1) representation `alpha` contains the Spin(n)
/// representation `lambda` on restriction.
pub fn branches(alpha: &Weight, lambda: &Weight, n: u32) -> Result<bool, WeightError> {
    if n < 2 {
        return Err(WeightError::InvalidInput(format!(
            "n = {n} has no branching rule here"
        )));
    }
    if alpha.rank() != spin_rank(n + 1) || lambda.rank() != spin_rank(n) {
        return Err(WeightError::InvalidInput(format!(
            "rank mismatch for n = {n}: alpha has rank {}, lambda has rank {} (expected {} and {})",
            alpha.rank(),
            lambda.rank(),
            spin_rank(n + 1),
            spin_rank(n)
        )));
    }
    if alpha.is_integral() != lambda.is_integral() {
        return Ok(false);
    }
    let a = alpha.entries();
    let l = lambda.entries();
    // Interleave α_1, λ_1, α_2, λ_2, ...; the final entry is compared by
    // absolute value.
    let mut chain: Vec<HalfInt> = Vec::with_capacity(a.len() + l.len());
    for i in 0..a.len().max(l.len()) {
        if let Some(x) = a.get(i) {
            chain.push(x.clone());
        }
        if let Some(x) = l.get(i) {
            chain.push(x.clone());
        }
    }
    let last = chain.pop().expect("nonempty").abs();
    chain.push(last);
    Ok(chain.windows(2).all(|p| p[0] >= p[1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Sign::from_value(v)
            .ok_or_else(|| serde::de::Error::custom(format!("eps must be ±1, got {v}")))
    }
}

/// Checks that `n` is odd and at least 3 and that `0 ≤ k ≤ (n−1)/2`.
pub fn check_bundle(n: u32, k: u32) -> Result<(), WeightError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(WeightError::InvalidInput(format!(
            "n must be odd and ≥ 3, got {n}"
        )));
    }
    if k > (n - 1) / 2 {
        return Err(WeightError::InvalidInput(format!(
            "k must satisfy 0 ≤ k ≤ (n-1)/2 = {}, got {k}",
            (n - 1) / 2
        )));
    }
    Ok(())
}

/// Label of an isotypic summand: `V_ε(j)` when `k = 0`, `V_ε(j, q)` when
/// `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KTypeId {
    pub n: u32,
    pub k: u32,
    pub j: u32,
    pub q: Option<u8>,
    pub eps: Sign,
}

impl KTypeId {
    pub fn new(n: u32, k: u32, j: u32, q: Option<u8>, eps: Sign) -> Result<Self, WeightError> {
        check_bundle(n, k)?;
        match (k, q) {
            (0, None) => {}
            (0, Some(_)) => {
                return Err(WeightError::InvalidKType(
                    "q is only defined for k ≥ 1".into(),
                ))
            }
            (_, Some(0 | 1)) => {}
            (_, other) => {
                return Err(WeightError::InvalidKType(format!(
                    "k ≥ 1 needs q ∈ {{0,1}}, got {other:?}"
                )))
            }
        }
        Ok(Self { n, k, j, q, eps })
    }

    /// `V_ε(j)` on the spinor bundle.
    pub fn spinor(n: u32, j: u32, eps: Sign) -> Result<Self, WeightError> {
        Self::new(n, 0, j, None, eps)
    }

    /// `V_ε(j, q)` on `𝕋^k`, `k ≥ 1`.
    pub fn form(n: u32, k: u32, j: u32, q: u8, eps: Sign) -> Result<Self, WeightError> {
        if k == 0 {
            return Err(WeightError::InvalidKType(
                "k ≥ 1 required for V(j,q)".into(),
            ));
        }
        Self::new(n, k, j, Some(q), eps)
    }

    pub fn with_eps(self, eps: Sign) -> Self {
        Self { eps, ..self }
    }

    pub fn with_j(self, j: u32) -> Self {
        Self { j, ..self }
    }

    pub fn with_q(self, q: u8) -> Self {
        debug_assert!(self.k >= 1);
        Self { q: Some(q), ..self }
    }
}

impl fmt::Display for KTypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.eps {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        match self.q {
            None => write!(f, "V{s}({})", self.j),
            Some(q) => write!(f, "V{s}({},{q})", self.j),
        }
    }
}

/// Spin(n) weight of `𝕋^k`: `(3/2, …, 3/2, 1/2, …, 1/2)` with `k` entries
/// equal to 3/2. For `k = 0` this is the spinor weight.
pub fn bundle_weight(n: u32, k: u32) -> Result<Weight, WeightError> {
    check_bundle(n, k)?;
    let rank = spin_rank(n);
    let twice: Vec<i64> = (0..rank)
        .map(|i| if i < k as usize { 3 } else { 1 })
        .collect();
    Weight::from_twice(&twice)
}

/// The Spin(n+1) highest weight of the summand `id`.
pub fn make_ktype_weight(id: &KTypeId) -> Result<Weight, WeightError> {
    let id = KTypeId::new(id.n, id.k, id.j, id.q, id.eps)?;
    let rank = spin_rank(id.n + 1);
    let eps = id.eps.value();
    let j = i64::from(id.j);
    let mut twice = vec![1i64; rank];
    match id.q {
        None => {
            twice[0] = 1 + 2 * j;
            twice[rank - 1] = eps;
        }
        Some(q) => {
            let k = id.k as usize;
            let q = i64::from(q);
            twice[0] = 3 + 2 * j;
            for t in twice.iter_mut().take(k).skip(1) {
                *t = 3;
            }
            if k < (id.n as usize - 1) / 2 {
                twice[k] = 1 + 2 * q;
                twice[rank - 1] = eps;
            } else {
                twice[rank - 1] = eps * (1 + 2 * q);
            }
        }
    }
    Weight::from_twice(&twice)
}
