//! Reference values computed from first principles, sharing no code with
//! the library beyond rational arithmetic.

#![allow(dead_code)]

use intertwinor_core::exact::ExactScalar;
use intertwinor_core::weights::Sign;

pub fn q(p: i64, d: i64) -> ExactScalar {
    ExactScalar::frac(p, d)
}

pub fn int(v: i64) -> ExactScalar {
    ExactScalar::from_int(v)
}

/// `Γ(h)/√π` for `h = twice/2`, `twice` odd, by stepping
/// `Γ(x+1) = xΓ(x)` away from `Γ(1/2) = √π`.
pub fn gamma_half_over_sqrt_pi(twice: i64) -> ExactScalar {
    assert!(twice % 2 != 0, "argument must be a half-odd integer");
    let mut value = ExactScalar::one();
    let mut t = 1;
    while t < twice {
        value = value * q(t, 2);
        t += 2;
    }
    while t > twice {
        t -= 2;
        value = value.checked_div(&q(t, 2)).unwrap();
    }
    value
}

/// `Γ(A)Γ(B)/(Γ(C)Γ(D))` with every argument given as twice its value
/// and half-odd; the `√π` factors cancel.
fn gamma_quotient(a: i64, b: i64, c: i64, d: i64) -> ExactScalar {
    let num = gamma_half_over_sqrt_pi(a) * gamma_half_over_sqrt_pi(b);
    let den = gamma_half_over_sqrt_pi(c) * gamma_half_over_sqrt_pi(d);
    num.checked_div(&den).unwrap()
}

/// Spinor spectral function at `r = two_r/2`, `two_r` odd, read off the
/// Gamma-quotient formula with `J = n/2 + j`.
pub fn z1(n: u32, two_r: i64, j: u32, eps: Sign) -> ExactScalar {
    let (n, j) = (i64::from(n), i64::from(j));
    let two_j = n + 2 * j;
    let v = gamma_quotient(
        two_j + 1 + two_r,
        n + 1 - two_r,
        two_j + 1 - two_r,
        n + 1 + two_r,
    );
    int(eps.value()) * v
}

/// Form-bundle spectral function at `r = two_r/2` with `L = n/2 + 1 + j`.
pub fn z2(n: u32, k: u32, two_r: i64, j: u32, q_: u8, eps: Sign) -> ExactScalar {
    let (n, k, j) = (i64::from(n), i64::from(k), i64::from(j));
    let two_l = n + 2 + 2 * j;
    let base = gamma_quotient(
        two_l + 1 + two_r,
        n + 3 - two_r,
        two_l + 1 - two_r,
        n + 3 + two_r,
    );
    let pref = if q_ == 0 {
        q(n - 2 * k + 1 - two_r, n - 2 * k + 1 + two_r)
    } else {
        ExactScalar::one()
    };
    int(eps.value()) * pref * base
}

/// `J = n/2 + j`.
pub fn big_j(n: u32, j: u32) -> ExactScalar {
    q(i64::from(n) + 2 * i64::from(j), 2)
}

/// `L = n/2 + 1 + j`.
pub fn big_l(n: u32, j: u32) -> ExactScalar {
    q(i64::from(n) + 2 + 2 * i64::from(j), 2)
}

/// `x ∏_{a=1}^{l} (x² − a²)`.
pub fn odd_poly(x: &ExactScalar, l: u32) -> ExactScalar {
    let x2 = x * x;
    (1..=i64::from(l)).fold(x.clone(), |acc, a| acc * (&x2 - &int(a * a)))
}

/// Every `(n, k)` with odd `n` in `3..=nmax`.
pub fn bundles(nmax: u32) -> Vec<(u32, u32)> {
    (3..=nmax)
        .step_by(2)
        .flat_map(|n| (0..=(n - 1) / 2).map(move |k| (n, k)))
        .collect()
}

#[test]
fn half_gamma_values() {
    assert_eq!(gamma_half_over_sqrt_pi(1), int(1));
    assert_eq!(gamma_half_over_sqrt_pi(3), q(1, 2));
    assert_eq!(gamma_half_over_sqrt_pi(7), q(15, 8));
    assert_eq!(gamma_half_over_sqrt_pi(-1), int(-2));
    assert_eq!(gamma_half_over_sqrt_pi(-3), q(4, 3));
}
