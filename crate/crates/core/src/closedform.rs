//! Closed-form spectral functions as telescoped Gamma ratios, with a
//! log-Gamma floating-point route for cross-checks and non-telescoping `r`.

use thiserror::Error;

use crate::exact::ExactScalar;
use crate::ktype_graph::level;
use crate::weights::{check_bundle, KTypeId, Sign, WeightError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error(transparent)]
    Range(#[from] WeightError),
    #[error("Gamma ratio does not telescope for r = {0} (2r is not an integer)")]
    NotTelescoping(ExactScalar),
    #[error("Gamma pole at argument {argument}")]
    GammaPole { argument: ExactScalar },
    #[error("numeric Gamma evaluated at a pole or non-finite argument {0}")]
    NumericDomain(f64),
    #[error("zero denominator in spectral prefactor")]
    ZeroDenominator,
}

fn is_gamma_pole(v: &ExactScalar) -> bool {
    v.is_integer() && (v.is_zero() || v.is_negative())
}

/// `Γ(a + r) / Γ(a − r)` for `2r ∈ ℤ`, as the Pochhammer product
/// `(a − r)(a − r + 1)⋯(a + r − 1)`. Negative `r` uses the reciprocal.
pub fn gamma_ratio(a: &ExactScalar, r: &ExactScalar) -> Result<ExactScalar, ClosedFormError> {
    let two_r = (r * ExactScalar::from_int(2))
        .to_i64()
        .ok_or_else(|| ClosedFormError::NotTelescoping(r.clone()))?;
    for argument in [a + r, a - r] {
        if is_gamma_pole(&argument) {
            return Err(ClosedFormError::GammaPole { argument });
        }
    }
    let low = a - r.abs();
    let product: ExactScalar = (0..two_r.unsigned_abs())
        .map(|i| &low + ExactScalar::from_int(i))
        .product();
    if two_r >= 0 {
        Ok(product)
    } else {
        product
            .recip()
            .map_err(|_| ClosedFormError::GammaPole { argument: low })
    }
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`.
fn ln_gamma_signed(x: f64) -> Result<(f64, f64), ClosedFormError> {
    if !x.is_finite() || (x <= 0.0 && x.fract() == 0.0) {
        return Err(ClosedFormError::NumericDomain(x));
    }
    let (lg, sign) = libm::lgamma_r(x);
    Ok((lg, f64::from(sign)))
}

/// `ln|Γ(a + r) / Γ(a − r)|` and the sign of the ratio.
fn ln_gamma_ratio(a: f64, r: f64) -> Result<(f64, f64), ClosedFormError> {
    let (num, s_num) = ln_gamma_signed(a + r)?;
    let (den, s_den) = ln_gamma_signed(a - r)?;
    Ok((num - den, s_num * s_den))
}

/// Floating-point `Γ(a + r) / Γ(a − r)` through log-Gamma; valid for any
/// real `r` away from Gamma poles.
pub fn gamma_ratio_numeric(a: f64, r: f64) -> Result<f64, ClosedFormError> {
    let (ln, sign) = ln_gamma_ratio(a, r)?;
    Ok(sign * ln.exp())
}

/// `Γ(top + r) Γ(bottom − r) / (Γ(top − r) Γ(bottom + r))`, combined in log
/// space so that large factors cancel before exponentiation.
fn gamma_quotient_numeric(top: f64, bottom: f64, r: f64) -> Result<f64, ClosedFormError> {
    let (ln_top, s_top) = ln_gamma_ratio(top, r)?;
    let (ln_bottom, s_bottom) = ln_gamma_ratio(bottom, r)?;
    Ok(s_top * s_bottom * (ln_top - ln_bottom).exp())
}

fn half_n(n: u32) -> ExactScalar {
    ExactScalar::frac(i64::from(n), 2)
}

fn check_odd_n(n: u32) -> Result<(), ClosedFormError> {
    check_bundle(n, 0)?;
    Ok(())
}

/// Spectral function on `V_ε(j)` of the spinor bundle:
/// `ε Γ(J+1/2+r) Γ(n/2+1/2−r) / (Γ(J+1/2−r) Γ(n/2+1/2+r))`, `J = n/2 + j`.
pub fn z_case1(n: u32, r: &ExactScalar, j: u32, eps: Sign) -> Result<ExactScalar, ClosedFormError> {
    check_odd_n(n)?;
    let half = ExactScalar::half();
    let big_j = half_n(n) + ExactScalar::from_int(j);
    let top = gamma_ratio(&(big_j + &half), r)?;
    let bottom = gamma_ratio(&(half_n(n) + &half), r)?;
    let ratio = top
        .checked_div(&bottom)
        .map_err(|_| ClosedFormError::ZeroDenominator)?;
    Ok(ExactScalar::from_int(eps.value()) * ratio)
}

/// Spectral functions on `V_ε(j, q)` of `𝕋^k`, `L = n/2 + 1 + j`; the
/// `q = 0` function carries the extra factor `(n−2k+1−2r)/(n−2k+1+2r)`.
pub fn z_case2(
    n: u32,
    k: u32,
    r: &ExactScalar,
    j: u32,
    q: u8,
    eps: Sign,
) -> Result<ExactScalar, ClosedFormError> {
    KTypeId::form(n, k, j, q, eps)?;
    let half = ExactScalar::half();
    let big_l = half_n(n) + ExactScalar::from_int(i64::from(j) + 1);
    let top = gamma_ratio(&(big_l + &half), r)?;
    let bottom = gamma_ratio(&(half_n(n) + ExactScalar::frac(3, 2)), r)?;
    let mut value = top
        .checked_div(&bottom)
        .map_err(|_| ClosedFormError::ZeroDenominator)?;
    if q == 0 {
        value = value * q0_prefactor(n, k, r)?;
    }
    Ok(ExactScalar::from_int(eps.value()) * value)
}

/// `(n − 2k + 1 − 2r) / (n − 2k + 1 + 2r)`.
pub fn q0_prefactor(n: u32, k: u32, r: &ExactScalar) -> Result<ExactScalar, ClosedFormError> {
    let m = ExactScalar::from_int(i64::from(n) - 2 * i64::from(k) + 1);
    let two_r = r * ExactScalar::from_int(2);
    (&m - &two_r)
        .checked_div(&(&m + &two_r))
        .map_err(|_| ClosedFormError::ZeroDenominator)
}

/// Float evaluation of [`z_case1`] through log-Gamma.
pub fn z_case1_numeric(n: u32, r: f64, j: u32, eps: Sign) -> Result<f64, ClosedFormError> {
    check_odd_n(n)?;
    let big_j = f64::from(n) / 2.0 + f64::from(j);
    let value = gamma_quotient_numeric(big_j + 0.5, f64::from(n) / 2.0 + 0.5, r)?;
    Ok(eps.value() as f64 * value)
}

/// Float evaluation of [`z_case2`] through log-Gamma.
pub fn z_case2_numeric(
    n: u32,
    k: u32,
    r: f64,
    j: u32,
    q: u8,
    eps: Sign,
) -> Result<f64, ClosedFormError> {
    KTypeId::form(n, k, j, q, eps)?;
    let big_l = f64::from(n) / 2.0 + 1.0 + f64::from(j);
    let mut value = gamma_quotient_numeric(big_l + 0.5, f64::from(n) / 2.0 + 1.5, r)?;
    if q == 0 {
        let m = f64::from(n) - 2.0 * f64::from(k) + 1.0;
        if m + 2.0 * r == 0.0 {
            return Err(ClosedFormError::ZeroDenominator);
        }
        value *= (m - 2.0 * r) / (m + 2.0 * r);
    }
    Ok(eps.value() as f64 * value)
}

/// Bundle data `(n, k)` with an order parameter `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralParams {
    pub n: u32,
    pub k: u32,
    pub r: ExactScalar,
}

impl SpectralParams {
    pub fn new(n: u32, k: u32, r: ExactScalar) -> Result<Self, ClosedFormError> {
        check_bundle(n, k)?;
        Ok(Self { n, k, r })
    }

    /// Whether the exact Gamma-ratio route applies (`2r ∈ ℤ`).
    pub fn telescopes(&self) -> bool {
        (&self.r * ExactScalar::from_int(2)).is_integer()
    }

    /// Exact spectral value on the summand `id`.
    pub fn z(&self, id: &KTypeId) -> Result<ExactScalar, ClosedFormError> {
        match id.q {
            None => z_case1(self.n, &self.r, id.j, id.eps),
            Some(q) => z_case2(self.n, self.k, &self.r, id.j, q, id.eps),
        }
    }

    pub fn z_numeric(&self, id: &KTypeId) -> Result<f64, ClosedFormError> {
        let r = self.r.to_f64();
        match id.q {
            None => z_case1_numeric(self.n, r, id.j, id.eps),
            Some(q) => z_case2_numeric(self.n, self.k, r, id.j, q, id.eps),
        }
    }

    /// `J` for `k = 0`, `L` otherwise, recomputed for each `j`.
    pub fn level(&self, j: u32) -> ExactScalar {
        let q = if self.k == 0 { None } else { Some(1) };
        level(&KTypeId {
            n: self.n,
            k: self.k,
            j,
            q,
            eps: Sign::Plus,
        })
    }
}
