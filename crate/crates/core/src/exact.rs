//! Exact scalars, half-integers, and rational functions of the order
//! parameter `r` kept as products of linear factors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),
    #[error("{0} is not a half-integer")]
    NotHalfInteger(ExactScalar),
}

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ExactError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    /// `p/q` for literals; panics when `q == 0`.
    pub fn frac(p: i64, q: i64) -> Self {
        Self::new(p, q).expect("zero denominator in ExactScalar::frac")
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn half() -> Self {
        Self::frac(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The integer value, if this scalar is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|v| v.to_i64())
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(v: BigRational) -> Self {
        Self(v)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let parse_int = |p: &str| {
            let p = p.trim();
            let p = p.strip_prefix('+').unwrap_or(p);
            BigInt::from_str(p).map_err(|_| ExactError::Parse(s.to_string()))
        };
        match t.split_once('/') {
            Some((p, q)) => Self::new(parse_int(p)?, parse_int(q)?),
            None => Ok(Self::from_int(parse_int(t)?)),
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-&self.0)
    }
}

impl std::iter::Product for ExactScalar {
    fn product<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::one(), |acc, v| acc * v)
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, v| acc + v)
    }
}

/// A value in `ℤ ∪ (1/2 + ℤ)`, stored as twice its value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HalfInt {
    twice: BigInt,
}

impl HalfInt {
    pub fn from_twice(twice: impl Into<BigInt>) -> Self {
        Self {
            twice: twice.into(),
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self {
            twice: v.into() * 2,
        }
    }

    pub fn twice_value(&self) -> &BigInt {
        &self.twice
    }

    /// True for integers, false for half-odd values.
    pub fn is_integral(&self) -> bool {
        self.twice.is_even()
    }

    pub fn abs(&self) -> Self {
        Self {
            twice: self.twice.abs(),
        }
    }

    pub fn to_scalar(&self) -> ExactScalar {
        ExactScalar::new(self.twice.clone(), 2).expect("nonzero denominator")
    }
}

impl TryFrom<&ExactScalar> for HalfInt {
    type Error = ExactError;

    fn try_from(v: &ExactScalar) -> Result<Self, Self::Error> {
        let twice = v * ExactScalar::from_int(2);
        twice
            .to_integer()
            .map(HalfInt::from_twice)
            .ok_or_else(|| ExactError::NotHalfInteger(v.clone()))
    }
}

impl FromStr for HalfInt {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HalfInt::try_from(&s.parse::<ExactScalar>()?)
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice.cmp(&other.twice)
    }
}

impl Add for &HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: &HalfInt) -> HalfInt {
        HalfInt {
            twice: &self.twice + &rhs.twice,
        }
    }
}

impl Sub for &HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: &HalfInt) -> HalfInt {
        HalfInt {
            twice: &self.twice - &rhs.twice,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_scalar(), f)
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Root key ordered by `(numerator, denominator)` so that serialized factor
/// lists come out in a fixed order.
#[derive(Clone, PartialEq, Eq, Debug)]
struct RootKey(ExactScalar);

impl PartialOrd for RootKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .numer()
            .cmp(other.0.numer())
            .then_with(|| self.0.denom().cmp(other.0.denom()))
    }
}

/// `scale · ∏ (r − root)^mult` with no zero multiplicities.
///
/// A zero `scale` always carries an empty factor map, so structural equality
/// is equality of rational functions.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearFactorForm {
    scale: ExactScalar,
    factors: BTreeMap<RootKey, i64>,
}

/// Result of substituting a concrete `r` into a [`LinearFactorForm`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Value(ExactScalar),
    Zero { root: ExactScalar, mult: i64 },
    Pole { root: ExactScalar, mult: i64 },
}

impl Evaluation {
    pub fn value(self) -> Option<ExactScalar> {
        match self {
            Evaluation::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl LinearFactorForm {
    pub fn constant(c: ExactScalar) -> Self {
        Self {
            scale: c,
            factors: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    /// `scale · ∏ (r − root)^mult`, merging repeated roots.
    pub fn from_factors<I>(scale: ExactScalar, factors: I) -> Self
    where
        I: IntoIterator<Item = (ExactScalar, i64)>,
    {
        let mut out = Self::constant(scale);
        if out.scale.is_zero() {
            return out;
        }
        for (root, mult) in factors {
            out.push_factor(root, mult);
        }
        out
    }

    /// The transition quantity `(x + r)/(x − r) = −(r + x)/(r − x)`.
    pub fn transition(x: &ExactScalar) -> Self {
        Self::from_factors(-ExactScalar::one(), [(-x, 1), (x.clone(), -1)])
    }

    fn push_factor(&mut self, root: ExactScalar, mult: i64) {
        if mult == 0 {
            return;
        }
        let key = RootKey(root);
        let m = self.factors.get(&key).copied().unwrap_or(0) + mult;
        if m == 0 {
            self.factors.remove(&key);
        } else {
            self.factors.insert(key, m);
        }
    }

    pub fn scale(&self) -> &ExactScalar {
        &self.scale
    }

    pub fn factors(&self) -> impl Iterator<Item = (&ExactScalar, i64)> {
        self.factors.iter().map(|(k, m)| (&k.0, *m))
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let scale = &self.scale * &other.scale;
        if scale.is_zero() {
            return Self::constant(scale);
        }
        let mut out = Self {
            scale,
            factors: self.factors.clone(),
        };
        for (k, m) in &other.factors {
            out.push_factor(k.0.clone(), *m);
        }
        out
    }

    pub fn reciprocal(&self) -> Result<Self, ExactError> {
        Ok(Self {
            scale: self.scale.recip()?,
            factors: self.factors.iter().map(|(k, m)| (k.clone(), -m)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            scale: -&self.scale,
            factors: self.factors.clone(),
        }
    }

    pub fn eval(&self, r: &ExactScalar) -> Evaluation {
        if let Some(m) = self.factors.get(&RootKey(r.clone())) {
            return if *m > 0 {
                Evaluation::Zero {
                    root: r.clone(),
                    mult: *m,
                }
            } else {
                Evaluation::Pole {
                    root: r.clone(),
                    mult: *m,
                }
            };
        }
        let mut num = self.scale.clone();
        let mut den = ExactScalar::one();
        for (k, m) in &self.factors {
            let base = (r - &k.0).pow(m.unsigned_abs() as u32);
            if *m > 0 {
                num = num * base;
            } else {
                den = den * base;
            }
        }
        Evaluation::Value(num.checked_div(&den).expect("roots excluded above"))
    }
}

impl fmt::Display for LinearFactorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scale)?;
        for (root, m) in self.factors() {
            let lin = if root.is_zero() {
                "r".to_string()
            } else if root.is_negative() {
                format!("(r+{})", root.abs())
            } else {
                format!("(r-{root})")
            };
            if m == 1 {
                write!(f, "·{lin}")?;
            } else {
                write!(f, "·{lin}^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinearFactorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    root: ExactScalar,
    mult: i64,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    scale: ExactScalar,
    factors: Vec<FactorRepr>,
}

impl Serialize for LinearFactorForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FormRepr {
            scale: self.scale.clone(),
            factors: self
                .factors()
                .map(|(root, mult)| FactorRepr {
                    root: root.clone(),
                    mult,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearFactorForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FormRepr::deserialize(deserializer)?;
        Ok(Self::from_factors(
            repr.scale,
            repr.factors.into_iter().map(|f| (f.root, f.mult)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExactScalar {
        ExactScalar::frac(p, d)
    }

    #[test]
    fn lowest_terms_and_sign() {
        let a = ExactScalar::new(6, -4).unwrap();
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!(ExactScalar::from_int(7).to_string(), "7");
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(ExactScalar::new(1, 0), Err(ExactError::DivisionByZero));
        assert_eq!(
            q(1, 2).checked_div(&ExactScalar::zero()),
            Err(ExactError::DivisionByZero)
        );
        assert!(ExactScalar::zero().recip().is_err());
        assert!("3/0".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/2".parse::<ExactScalar>().unwrap(), q(3, 2));
        assert_eq!("-1/2".parse::<ExactScalar>().unwrap(), q(-1, 2));
        assert_eq!(" 4 ".parse::<ExactScalar>().unwrap(), q(4, 1));
        assert_eq!("+5/10".parse::<ExactScalar>().unwrap(), q(1, 2));
        assert!("1.5".parse::<ExactScalar>().is_err());
        assert!("a/b".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn halfint_parity() {
        let h: HalfInt = "3/2".parse().unwrap();
        assert!(!h.is_integral());
        assert_eq!(h.twice_value(), &BigInt::from(3));
        let s = &h + &h;
        assert!(s.is_integral());
        assert_eq!(s.to_scalar(), q(3, 1));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(
            "-1/2".parse::<HalfInt>().unwrap().abs(),
            "1/2".parse().unwrap()
        );
    }

    #[test]
    fn mul_cancels_and_merges() {
        let a = LinearFactorForm::from_factors(ExactScalar::one(), [(q(2, 1), 1)]);
        let b = LinearFactorForm::from_factors(ExactScalar::one(), [(q(2, 1), -1)]);
        assert_eq!(a.mul(&b), LinearFactorForm::one());

        let c = LinearFactorForm::from_factors(q(3, 1), [(q(1, 1), 1)]);
        let d = LinearFactorForm::from_factors(q(2, 1), [(q(-1, 1), 1)]);
        let cd = c.mul(&d);
        assert_eq!(cd.scale(), &q(6, 1));
        let fs: Vec<_> = cd.factors().map(|(r, m)| (r.clone(), m)).collect();
        assert_eq!(fs, vec![(q(-1, 1), 1), (q(1, 1), 1)]);
    }

    #[test]
    fn transition_reciprocal() {
        let t = LinearFactorForm::transition(&q(2, 1));
        let expected =
            LinearFactorForm::from_factors(-ExactScalar::one(), [(q(-2, 1), 1), (q(2, 1), -1)]);
        assert_eq!(t, expected);
        let inv = t.reciprocal().unwrap();
        let expected_inv =
            LinearFactorForm::from_factors(-ExactScalar::one(), [(q(2, 1), 1), (q(-2, 1), -1)]);
        assert_eq!(inv, expected_inv);
        // brute multiplication at a few points
        for r in [q(1, 2), q(-7, 3), q(5, 1)] {
            let a = t.eval(&r).value().unwrap();
            let b = inv.eval(&r).value().unwrap();
            assert_eq!(a * b, ExactScalar::one());
        }
        assert_eq!(t.mul(&inv), LinearFactorForm::one());
    }

    #[test]
    fn eval_values_and_tags() {
        let f = LinearFactorForm::from_factors(ExactScalar::one(), [(q(2, 1), -1)]);
        assert_eq!(f.eval(&q(1, 2)), Evaluation::Value(q(-2, 3)));
        assert_eq!(
            f.eval(&q(2, 1)),
            Evaluation::Pole {
                root: q(2, 1),
                mult: -1
            }
        );
        let g = LinearFactorForm::from_factors(q(5, 1), [(q(1, 3), 2)]);
        assert_eq!(
            g.eval(&q(1, 3)),
            Evaluation::Zero {
                root: q(1, 3),
                mult: 2
            }
        );
        assert_eq!(g.eval(&q(4, 3)), Evaluation::Value(q(5, 1)));
    }

    #[test]
    fn eps_flip_quantity_is_minus_one() {
        let flip = LinearFactorForm::transition(&ExactScalar::zero());
        assert!(flip.is_constant());
        for r in [q(1, 2), q(-3, 1), q(11, 7)] {
            assert_eq!(flip.eval(&r), Evaluation::Value(q(-1, 1)));
        }
    }

    #[test]
    fn zero_form_is_canonical() {
        let z = LinearFactorForm::from_factors(ExactScalar::zero(), [(q(1, 1), 3)]);
        assert!(z.is_constant());
        assert_eq!(z.eval(&q(1, 1)), Evaluation::Value(ExactScalar::zero()));
        assert!(z.reciprocal().is_err());
    }

    #[test]
    fn root_order_is_numerator_then_denominator() {
        let f = LinearFactorForm::from_factors(
            ExactScalar::one(),
            [(q(2, 3), 1), (q(1, 2), 1), (q(-1, 3), 1), (q(-1, 2), -1)],
        );
        let roots: Vec<String> = f.factors().map(|(r, _)| r.to_string()).collect();
        assert_eq!(roots, vec!["-1/2", "-1/3", "1/2", "2/3"]);
    }
}
