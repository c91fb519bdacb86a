//! Eigenvalue models of the intertwinors on `𝕋^k` and of their building
//! blocks, each acting by a scalar on every K-type.
//!
//! Where an operator has both a defining combination and a closed scalar,
//! both are computed and compared exactly; a disagreement is an
//! [`OperatorError::InternalMismatch`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::closedform::{z_case1, z_case2, ClosedFormError};
use crate::exact::ExactScalar;
use crate::ktype_graph::{enumerate_ktypes, level, GraphError};
use crate::weights::{check_bundle, KTypeId, Sign, WeightError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Range(#[from] WeightError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("{operator}: defining combination gives {defining}, closed form gives {closed}")]
    InternalMismatch {
        operator: String,
        defining: String,
        closed: String,
    },
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
}

impl From<GraphError> for OperatorError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Range(w) => OperatorError::Range(w),
            other => OperatorError::InvalidParameter(other.to_string()),
        }
    }
}

fn int(v: i64) -> ExactScalar {
    ExactScalar::from_int(v)
}

fn sign(eps: Sign) -> ExactScalar {
    int(eps.value())
}

fn ensure_equal(
    operator: String,
    defining: ExactScalar,
    closed: ExactScalar,
) -> Result<ExactScalar, OperatorError> {
    if defining == closed {
        Ok(closed)
    } else {
        Err(OperatorError::InternalMismatch {
            operator,
            defining: defining.to_string(),
            closed: closed.to_string(),
        })
    }
}

fn big_l(n: u32, k: u32, j: u32, q: u8) -> Result<ExactScalar, OperatorError> {
    Ok(level(&KTypeId::form(n, k, j, q, Sign::Plus)?))
}

/// `n − 2k`, the integer that recurs in every Case II scalar.
fn gap(n: u32, k: u32) -> i64 {
    i64::from(n) - 2 * i64::from(k)
}

/// Dirac operator on `V_ε(j)`: `ε J` with `J = n/2 + j`.
pub fn dirac_eig(n: u32, j: u32, eps: Sign) -> Result<ExactScalar, OperatorError> {
    let id = KTypeId::spinor(n, j, eps)?;
    Ok(sign(eps) * level(&id))
}

/// `D(D² − 1²)⋯(D² − l²)` on `V_ε(j)`.
pub fn d_odd_eig(n: u32, l: u32, j: u32, eps: Sign) -> Result<ExactScalar, OperatorError> {
    let d = dirac_eig(n, j, eps)?;
    let d2 = &d * &d;
    let tail: ExactScalar = (1..=i64::from(l)).map(|a| &d2 - int(a * a)).product();
    Ok(d * tail)
}

/// Restriction of `P_k` to `𝕋^k`: `ε · 2 · L · (q + n/2 − k)`.
pub fn p_k_eig(n: u32, k: u32, j: u32, q: u8, eps: Sign) -> Result<ExactScalar, OperatorError> {
    let l = big_l(n, k, j, q)?;
    let shift = int(i64::from(q)) + ExactScalar::frac(i64::from(n), 2) - int(i64::from(k));
    Ok(sign(eps) * int(2) * l * shift)
}

/// `A_{k,0} = P_k / (n − 2k + 2)`: `ε L` on `q = 1` and
/// `ε (n − 2k)/(n − 2k + 2) · L` on `q = 0`.
pub fn a_k0_eig(n: u32, k: u32, j: u32, q: u8, eps: Sign) -> Result<ExactScalar, OperatorError> {
    let l = big_l(n, k, j, q)?;
    let norm = int(gap(n, k) + 2);
    let closed = if q == 1 {
        sign(eps) * l
    } else {
        sign(eps) * ExactScalar::frac(gap(n, k), gap(n, k) + 2) * l
    };
    let defining = p_k_eig(n, k, j, q, eps)?
        .checked_div(&norm)
        .map_err(|_| OperatorError::ZeroDenominator("A_{k,0} normalization"))?;
    ensure_equal(format!("A_{{{k},0}}"), defining, closed)
}

/// `L² − (n/2 − k + 1)²`, shared by the second-order scalars.
fn gradient_core(n: u32, k: u32, j: u32) -> Result<ExactScalar, OperatorError> {
    let l = big_l(n, k, j, 0)?;
    let c = ExactScalar::frac(gap(n, k) + 2, 2);
    Ok(&l * &l - &c * &c)
}

/// `T_{k−1} T*_{k−1}` on `𝕋^k`: zero on `q = 1`,
/// `(n−2k+1)(L² − (n/2−k+1)²) / (k(n−2k+2))` on `q = 0`.
pub fn tt_star_eig(n: u32, k: u32, j: u32, q: u8) -> Result<ExactScalar, OperatorError> {
    KTypeId::form(n, k, j, q, Sign::Plus)?;
    if q == 1 {
        return Ok(ExactScalar::zero());
    }
    let num = int(gap(n, k) + 1) * gradient_core(n, k, j)?;
    num.checked_div(&int(i64::from(k) * (gap(n, k) + 2)))
        .map_err(|_| OperatorError::ZeroDenominator("T T*"))
}

/// `T*_{k−1} T_{k−1}` over `𝕋^{k−1}`: the same scalar `λ` as
/// [`tt_star_eig`] on `q = 0`, but carried by the `q = 1` label; zero on
/// `q = 0`.
pub fn t_star_t_eig(n: u32, k: u32, j: u32, q: u8) -> Result<ExactScalar, OperatorError> {
    KTypeId::form(n, k, j, q, Sign::Plus)?;
    if q == 0 {
        return Ok(ExactScalar::zero());
    }
    let num = int(gap(n, k) + 1) * gradient_core(n, k, j)?;
    num.checked_div(&int(i64::from(k) * (gap(n, k) + 2)))
        .map_err(|_| OperatorError::ZeroDenominator("T* T"))
}

/// `G* G` for the gradient `𝕋^k → 𝕋^{k−1}`: zero on `q = 1`,
/// `(n−2k+3)(L² − (n/2−k+1)²) / ((n−k+2)(n−2k+2))` on `q = 0`.
pub fn gstar_g_eig(n: u32, k: u32, j: u32, q: u8) -> Result<ExactScalar, OperatorError> {
    KTypeId::form(n, k, j, q, Sign::Plus)?;
    if q == 1 {
        return Ok(ExactScalar::zero());
    }
    let num = int(gap(n, k) + 3) * gradient_core(n, k, j)?;
    let den = int((i64::from(n) - i64::from(k) + 2) * (gap(n, k) + 2));
    num.checked_div(&den)
        .map_err(|_| OperatorError::ZeroDenominator("G* G"))
}

/// `a_l = −16 k l² / ((n−2k+2)(n−2k+2−2l)(n−2k+2+2l))`.
pub fn a_l_coeff(n: u32, k: u32, l: u32) -> Result<ExactScalar, OperatorError> {
    check_bundle(n, k)?;
    if k == 0 {
        return Err(OperatorError::InvalidParameter("a_l needs k ≥ 1".into()));
    }
    if l == 0 {
        return Err(OperatorError::InvalidParameter("a_l needs l ≥ 1".into()));
    }
    let (k, l) = (i64::from(k), i64::from(l));
    let m = gap(n, k as u32) + 2;
    let den = m * (m - 2 * l) * (m + 2 * l);
    ExactScalar::new(-16 * k * l * l, den).map_err(|_| OperatorError::ZeroDenominator("a_l"))
}

/// `A_{k,l} = A²_{k,0} − l² + a_l T_{k−1} T*_{k−1}` for `l ≥ 1`.
///
/// The defining combination is checked against the closed scalars
/// `L² − l²` on `q = 1` and
/// `(n−2k−2l)(n−2k+2l)/((n−2k+2−2l)(n−2k+2+2l)) · (L² − l²)` on `q = 0`.
pub fn a_kl_eig(n: u32, k: u32, l: u32, j: u32, q: u8) -> Result<ExactScalar, OperatorError> {
    if l == 0 {
        return Err(OperatorError::InvalidParameter(
            "A_{k,l} is defined for l ≥ 1; use A_{k,0}".into(),
        ));
    }
    let a0 = a_k0_eig(n, k, j, q, Sign::Plus)?;
    let li = int(i64::from(l));
    let defining = &a0 * &a0 - &li * &li + a_l_coeff(n, k, l)? * tt_star_eig(n, k, j, q)?;

    let big = big_l(n, k, j, q)?;
    let core = &big * &big - &li * &li;
    let closed = if q == 1 {
        core
    } else {
        let (m, l2) = (gap(n, k), 2 * i64::from(l));
        let ratio = ExactScalar::new((m - l2) * (m + l2), (m + 2 - l2) * (m + 2 + l2))
            .map_err(|_| OperatorError::ZeroDenominator("A_{k,l} scalar"))?;
        ratio * core
    };
    ensure_equal(format!("A_{{{k},{l}}}"), defining, closed)
}

/// `∏_{a=0}^{l} A_{k,a}`, computed as the literal product and checked
/// against `ε L (L² − 1²)⋯(L² − l²)` on `q = 1` and the same times
/// `(n−2k−2l)/(n−2k+2+2l)` on `q = 0`.
pub fn product_eig(
    n: u32,
    k: u32,
    l: u32,
    j: u32,
    q: u8,
    eps: Sign,
) -> Result<ExactScalar, OperatorError> {
    let mut defining = a_k0_eig(n, k, j, q, eps)?;
    for a in 1..=l {
        defining = defining * a_kl_eig(n, k, a, j, q)?;
    }
    let big = big_l(n, k, j, q)?;
    let big2 = &big * &big;
    let tail: ExactScalar = (1..=i64::from(l)).map(|a| &big2 - int(a * a)).product();
    let mut closed = sign(eps) * big * tail;
    if q == 0 {
        let (m, l2) = (gap(n, k), 2 * i64::from(l));
        closed = closed
            * ExactScalar::new(m - l2, m + 2 + l2)
                .map_err(|_| OperatorError::ZeroDenominator("product prefactor"))?;
    }
    ensure_equal(format!("prod A_{{{k},a}}, a <= {l}"), defining, closed)
}

/// Named operator together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum OperatorSpec {
    Dirac { n: u32 },
    DOdd { n: u32, l: u32 },
    PK { n: u32, k: u32 },
    AK0 { n: u32, k: u32 },
    TTStar { n: u32, k: u32 },
    TStarT { n: u32, k: u32 },
    GStarG { n: u32, k: u32 },
    AKl { n: u32, k: u32, l: u32 },
    Product { n: u32, k: u32, l: u32 },
}

impl OperatorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorSpec::Dirac { .. } => "dirac",
            OperatorSpec::DOdd { .. } => "d_odd",
            OperatorSpec::PK { .. } => "p_k",
            OperatorSpec::AK0 { .. } => "a_k0",
            OperatorSpec::TTStar { .. } => "tt_star",
            OperatorSpec::TStarT { .. } => "t_star_t",
            OperatorSpec::GStarG { .. } => "gstar_g",
            OperatorSpec::AKl { .. } => "a_kl",
            OperatorSpec::Product { .. } => "product",
        }
    }

    /// `(n, k)` of the bundle the operator acts on.
    pub fn bundle(&self) -> (u32, u32) {
        match *self {
            OperatorSpec::Dirac { n } | OperatorSpec::DOdd { n, .. } => (n, 0),
            OperatorSpec::PK { n, k }
            | OperatorSpec::AK0 { n, k }
            | OperatorSpec::TTStar { n, k }
            | OperatorSpec::TStarT { n, k }
            | OperatorSpec::GStarG { n, k }
            | OperatorSpec::AKl { n, k, .. }
            | OperatorSpec::Product { n, k, .. } => (n, k),
        }
    }

    /// Whether the scalar changes sign with `ε`.
    pub fn eps_odd(&self) -> bool {
        matches!(
            self,
            OperatorSpec::Dirac { .. }
                | OperatorSpec::DOdd { .. }
                | OperatorSpec::PK { .. }
                | OperatorSpec::AK0 { .. }
                | OperatorSpec::Product { .. }
        )
    }

    fn validate(&self) -> Result<(), OperatorError> {
        let (n, k) = self.bundle();
        check_bundle(n, k)?;
        match self {
            OperatorSpec::Dirac { .. } | OperatorSpec::DOdd { .. } => Ok(()),
            _ if k == 0 => {
                Err(WeightError::InvalidInput(format!("{} requires k ≥ 1", self.name())).into())
            }
            OperatorSpec::AKl { l: 0, .. } => Err(OperatorError::InvalidParameter(
                "a_kl requires l ≥ 1".into(),
            )),
            _ => Ok(()),
        }
    }

    fn eval(&self, id: &KTypeId) -> Result<ExactScalar, OperatorError> {
        let (n, k) = self.bundle();
        if id.n != n || id.k != k {
            return Err(OperatorError::InvalidParameter(format!(
                "{id} is not a K-type of the bundle (n = {n}, k = {k})"
            )));
        }
        let q = || id.q.expect("k ≥ 1 labels carry q");
        match *self {
            OperatorSpec::Dirac { n } => dirac_eig(n, id.j, id.eps),
            OperatorSpec::DOdd { n, l } => d_odd_eig(n, l, id.j, id.eps),
            OperatorSpec::PK { n, k } => p_k_eig(n, k, id.j, q(), id.eps),
            OperatorSpec::AK0 { n, k } => a_k0_eig(n, k, id.j, q(), id.eps),
            OperatorSpec::TTStar { n, k } => tt_star_eig(n, k, id.j, q()),
            OperatorSpec::TStarT { n, k } => t_star_t_eig(n, k, id.j, q()),
            OperatorSpec::GStarG { n, k } => gstar_g_eig(n, k, id.j, q()),
            OperatorSpec::AKl { n, k, l } => a_kl_eig(n, k, l, id.j, q()),
            OperatorSpec::Product { n, k, l } => product_eig(n, k, l, id.j, q(), id.eps),
        }
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OperatorSpec::Dirac { n } => write!(f, "dirac(n={n})"),
            OperatorSpec::DOdd { n, l } => write!(f, "d_odd(n={n},l={l})"),
            OperatorSpec::AKl { n, k, l } | OperatorSpec::Product { n, k, l } => {
                write!(f, "{}(n={n},k={k},l={l})", self.name())
            }
            _ => {
                let (n, k) = self.bundle();
                write!(f, "{}(n={n},k={k})", self.name())
            }
        }
    }
}

/// An operator acting by a scalar on each K-type of its bundle.
pub trait EigenvalueModel: Send + Sync {
    fn spec(&self) -> OperatorSpec;

    fn eigenvalue(&self, id: &KTypeId) -> Result<ExactScalar, OperatorError>;

    fn eps_odd(&self) -> bool {
        self.spec().eps_odd()
    }

    /// Eigenvalues over every K-type with `j ≤ jmax`, in enumeration order.
    fn spectrum(&self, jmax: u32) -> Result<Vec<(KTypeId, ExactScalar)>, OperatorError> {
        let (n, k) = self.spec().bundle();
        enumerate_ktypes(n, k, jmax)?
            .into_iter()
            .map(|id| Ok((id, self.eigenvalue(&id)?)))
            .collect()
    }
}

/// The built-in models: each is just its validated [`OperatorSpec`].
#[derive(Debug, Clone, Copy)]
pub struct ScalarOperator(OperatorSpec);

impl ScalarOperator {
    pub fn new(spec: OperatorSpec) -> Result<Self, OperatorError> {
        spec.validate()?;
        Ok(Self(spec))
    }
}

impl EigenvalueModel for ScalarOperator {
    fn spec(&self) -> OperatorSpec {
        self.0
    }

    fn eigenvalue(&self, id: &KTypeId) -> Result<ExactScalar, OperatorError> {
        self.0.eval(id)
    }
}

/// Parameters handed to an operator factory; `l` is ignored by operators
/// that do not take it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorParams {
    pub n: u32,
    pub k: u32,
    pub l: u32,
}

pub type OperatorFactory =
    Arc<dyn Fn(OperatorParams) -> Result<Box<dyn EigenvalueModel>, OperatorError> + Send + Sync>;

/// Operators registered by name, selected at runtime.
#[derive(Clone, Default)]
pub struct OperatorRegistry {
    factories: BTreeMap<String, OperatorFactory>,
}

impl OperatorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str, factory: OperatorFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    /// Registry holding every built-in operator.
    pub fn builtin() -> Self {
        let mut reg = Self::new();
        type Make = fn(OperatorParams) -> OperatorSpec;
        let entries: [(&str, Make); 9] = [
            ("dirac", |p| OperatorSpec::Dirac { n: p.n }),
            ("d_odd", |p| OperatorSpec::DOdd { n: p.n, l: p.l }),
            ("p_k", |p| OperatorSpec::PK { n: p.n, k: p.k }),
            ("a_k0", |p| OperatorSpec::AK0 { n: p.n, k: p.k }),
            ("tt_star", |p| OperatorSpec::TTStar { n: p.n, k: p.k }),
            ("t_star_t", |p| OperatorSpec::TStarT { n: p.n, k: p.k }),
            ("gstar_g", |p| OperatorSpec::GStarG { n: p.n, k: p.k }),
            ("a_kl", |p| OperatorSpec::AKl {
                n: p.n,
                k: p.k,
                l: p.l,
            }),
            ("product", |p| OperatorSpec::Product {
                n: p.n,
                k: p.k,
                l: p.l,
            }),
        ];
        for (name, make) in entries {
            reg.register(
                name,
                Arc::new(move |p| {
                    Ok(Box::new(ScalarOperator::new(make(p))?) as Box<dyn EigenvalueModel>)
                }),
            );
        }
        reg
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn create(
        &self,
        name: &str,
        params: OperatorParams,
    ) -> Result<Box<dyn EigenvalueModel>, OperatorError> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| OperatorError::UnknownOperator(name.to_string()))?;
        factory(params)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationParams {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub jmax: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationFailure {
    pub node: KTypeId,
    pub eigenvalue: ExactScalar,
    pub spectral: ExactScalar,
    /// `None` when the spectral value vanishes.
    pub ratio: Option<ExactScalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub params: VerificationParams,
    pub operator: OperatorSpec,
    pub r: ExactScalar,
    pub constant: Option<ExactScalar>,
    pub grid_size: usize,
    pub failures: Vec<VerificationFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.constant.as_ref().is_some_and(|c| !c.is_zero())
    }
}

/// Ratio of `model`'s eigenvalues to the spectral function at `r` over the
/// K-types with `j ≤ jmax`. The reported constant is the ratio on the first
/// K-type; every node whose ratio differs is a failure row.
pub fn compare_with_spectrum(
    model: &dyn EigenvalueModel,
    r: &ExactScalar,
    jmax: u32,
    l: u32,
) -> Result<VerificationReport, OperatorError> {
    let spec = model.spec();
    let (n, k) = spec.bundle();
    let ids = enumerate_ktypes(n, k, jmax)?;
    let mut constant: Option<ExactScalar> = None;
    let mut failures = Vec::new();
    for id in &ids {
        let eigenvalue = model.eigenvalue(id)?;
        let spectral = match id.q {
            None => z_case1(n, r, id.j, id.eps)?,
            Some(q) => z_case2(n, k, r, id.j, q, id.eps)?,
        };
        let ratio = eigenvalue.checked_div(&spectral).ok();
        let consistent = match (&ratio, &constant) {
            (Some(c), Some(c0)) => c == c0,
            (Some(c), None) => {
                constant = Some(c.clone());
                true
            }
            (None, _) => false,
        };
        if !consistent {
            failures.push(VerificationFailure {
                node: *id,
                eigenvalue,
                spectral,
                ratio,
            });
        }
    }
    Ok(VerificationReport {
        params: VerificationParams { n, k, l, jmax },
        operator: spec,
        r: r.clone(),
        constant,
        grid_size: ids.len(),
        failures,
    })
}

/// Checks that the order-`2l+1` operator (`D_{2l+1}` for `k = 0`,
/// `∏_{a≤l} A_{k,a}` for `k ≥ 1`) is one constant multiple of the spectral
/// function at `r = (2l+1)/2` on every K-type with `j ≤ jmax`.
pub fn verify_intertwinor(
    n: u32,
    k: u32,
    l: u32,
    jmax: u32,
) -> Result<VerificationReport, OperatorError> {
    check_bundle(n, k)?;
    let spec = if k == 0 {
        OperatorSpec::DOdd { n, l }
    } else {
        OperatorSpec::Product { n, k, l }
    };
    let model = ScalarOperator::new(spec)?;
    let r = ExactScalar::frac(2 * i64::from(l) + 1, 2);
    compare_with_spectrum(&model, &r, jmax, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExactScalar {
        ExactScalar::frac(p, d)
    }

    #[test]
    fn dirac_and_odd_powers() {
        assert_eq!(dirac_eig(3, 0, Sign::Plus).unwrap(), q(3, 2));
        assert_eq!(dirac_eig(3, 1, Sign::Minus).unwrap(), q(-5, 2));
        assert_eq!(
            d_odd_eig(3, 0, 4, Sign::Minus).unwrap(),
            dirac_eig(3, 4, Sign::Minus).unwrap()
        );
        assert_eq!(d_odd_eig(3, 1, 1, Sign::Minus).unwrap(), q(-105, 8));
        assert!(dirac_eig(4, 0, Sign::Plus).is_err());
    }

    #[test]
    fn first_order_on_forms() {
        assert_eq!(p_k_eig(5, 1, 0, 1, Sign::Plus).unwrap(), q(35, 2));
        assert_eq!(p_k_eig(5, 1, 0, 0, Sign::Plus).unwrap(), q(21, 2));
        assert_eq!(a_k0_eig(5, 1, 0, 1, Sign::Plus).unwrap(), q(7, 2));
        assert_eq!(a_k0_eig(5, 1, 0, 0, Sign::Plus).unwrap(), q(21, 10));
        assert_eq!(a_k0_eig(5, 1, 0, 0, Sign::Minus).unwrap(), q(-21, 10));
        assert!(a_k0_eig(5, 0, 0, 0, Sign::Plus).is_err());
    }

    #[test]
    fn second_order_scalars() {
        for j in 0..4 {
            assert_eq!(tt_star_eig(7, 2, j, 1).unwrap(), ExactScalar::zero());
            assert_eq!(gstar_g_eig(7, 2, j, 1).unwrap(), ExactScalar::zero());
            assert_eq!(t_star_t_eig(7, 2, j, 0).unwrap(), ExactScalar::zero());
        }
        assert_eq!(tt_star_eig(5, 1, 0, 0).unwrap(), q(24, 5));
        assert_eq!(tt_star_eig(7, 2, 1, 0).unwrap(), q(48, 5));
        assert_eq!(gstar_g_eig(5, 1, 0, 0).unwrap(), q(6, 5));
        assert_eq!(t_star_t_eig(5, 1, 0, 1).unwrap(), q(24, 5));
        assert!(tt_star_eig(5, 0, 0, 0).is_err());
    }

    #[test]
    fn a_l_examples() {
        assert_eq!(a_l_coeff(5, 1, 1).unwrap(), q(-16, 105));
        assert_eq!(a_l_coeff(7, 1, 1).unwrap(), q(-16, 315));
        assert_eq!(a_l_coeff(5, 2, 1).unwrap(), q(-32, 15));
        assert!(a_l_coeff(5, 1, 0).is_err());
        assert!(a_l_coeff(5, 0, 1).is_err());
    }

    #[test]
    fn a_kl_examples() {
        assert_eq!(a_kl_eig(5, 1, 1, 0, 1).unwrap(), q(45, 4));
        assert_eq!(a_kl_eig(5, 1, 1, 0, 0).unwrap(), q(75, 28));
        assert!(a_kl_eig(5, 1, 0, 0, 0).is_err());
    }

    #[test]
    fn product_examples() {
        assert_eq!(product_eig(5, 1, 1, 0, 1, Sign::Plus).unwrap(), q(315, 8));
        assert_eq!(product_eig(5, 1, 1, 0, 0, Sign::Plus).unwrap(), q(45, 8));
        assert_eq!(
            product_eig(5, 1, 0, 3, 0, Sign::Minus).unwrap(),
            a_k0_eig(5, 1, 3, 0, Sign::Minus).unwrap()
        );
    }

    #[test]
    fn verification_constants() {
        let rep = verify_intertwinor(3, 0, 1, 20).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.constant, Some(q(15, 8)));
        assert_eq!(rep.grid_size, 42);
        let rep = verify_intertwinor(5, 1, 1, 20).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.constant, Some(q(315, 8)));
        assert_eq!(rep.grid_size, 84);
        assert!(verify_intertwinor(5, 2, 1, 10).unwrap().passed());
        assert!(verify_intertwinor(4, 0, 1, 10).is_err());
    }

    #[test]
    fn mismatched_model_is_reported() {
        // the Dirac operator is not proportional to the order-3 spectral function
        let model = ScalarOperator::new(OperatorSpec::Dirac { n: 3 }).unwrap();
        let rep = compare_with_spectrum(&model, &q(3, 2), 5, 0).unwrap();
        assert!(!rep.passed());
        assert!(!rep.failures.is_empty());
    }

    #[test]
    fn registry_lookup() {
        let reg = OperatorRegistry::builtin();
        assert_eq!(reg.names().count(), 9);
        let op = reg
            .create("a_kl", OperatorParams { n: 5, k: 1, l: 1 })
            .unwrap();
        assert_eq!(op.spec(), OperatorSpec::AKl { n: 5, k: 1, l: 1 });
        let id = KTypeId::form(5, 1, 0, 0, Sign::Plus).unwrap();
        assert_eq!(op.eigenvalue(&id).unwrap(), q(75, 28));
        assert!(matches!(
            reg.create("nope", OperatorParams { n: 5, k: 1, l: 1 }),
            Err(OperatorError::UnknownOperator(_))
        ));
        assert!(reg
            .create("tt_star", OperatorParams { n: 5, k: 0, l: 0 })
            .is_err());
        let wrong = KTypeId::form(7, 1, 0, 0, Sign::Plus).unwrap();
        assert!(op.eigenvalue(&wrong).is_err());
    }
}
