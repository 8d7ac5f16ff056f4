//! Double factorials, normalized associated Legendre functions, and their
//! values at the origin, all overflow-free far past `l = 8192`.
//!
//! Everything here works in the log domain: factorial ratios come from
//! `lgamma`, and the upward Legendre recurrence carries a separate scale
//! exponent so the tiny diagonal seed `barP_m^m` never underflows.

use crate::{Error, Result};
use core::f64::consts::{LN_2, PI};

/// Degree/order pair `(l, m)` identifying a spherical harmonic `Y_l^m`.
///
/// Construction enforces `|m| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicIndex {
    degree: u32,
    order: i32,
}

impl HarmonicIndex {
    pub fn new(degree: u32, order: i32) -> Result<Self> {
        if order.unsigned_abs() > degree {
            return Err(Error::Domain("harmonic order |m| exceeds degree l"));
        }
        Ok(HarmonicIndex { degree, order })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    /// Eigenfrequency of `Y_l^m` as an eigenfunction of `-Delta`, i.e.
    /// `sqrt(l(l+1))`.
    pub fn eigenfrequency(&self) -> f64 {
        let l = self.degree as f64;
        libm::sqrt(l * (l + 1.0))
    }
}

/// `ln(n!!)` via log-gamma identities.
///
/// Even `n = 2k`: `n!! = 2^k k!`. Odd `n = 2k+1`: `n!! = (2k+2)! / (2^{k+1} (k+1)!)`.
/// Total on `n >= 0` with `0!! = (-1)!! = 1` by the empty-product convention.
pub fn log_double_factorial(n: u64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    if n % 2 == 0 {
        let k = (n / 2) as f64;
        k * LN_2 + libm::lgamma(k + 1.0)
    } else {
        let k = ((n - 1) / 2) as f64;
        libm::lgamma(n as f64 + 2.0) - (k + 1.0) * LN_2 - libm::lgamma(k + 2.0)
    }
}

/// `ln` of the orthonormalization factor
/// `barN_l^m = sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!)`.
pub fn ln_norm_factor(degree: u32, order: u32) -> Result<f64> {
    if order > degree {
        return Err(Error::Domain("order m exceeds degree l"));
    }
    let l = degree as f64;
    let m = order as f64;
    Ok(0.5
        * (libm::log(2.0 * l + 1.0) - libm::log(4.0 * PI) + libm::lgamma(l - m + 1.0)
            - libm::lgamma(l + m + 1.0)))
}

/// `ln |P_l^m(0)|` for `l + m` even; `None` encodes the exact zero of the
/// odd-parity case.
pub(crate) fn ln_pmn_zero(degree: u32, order: u32) -> Result<Option<f64>> {
    if order > degree {
        return Err(Error::Domain("order m exceeds degree l"));
    }
    if (degree + order) % 2 == 1 {
        return Ok(None);
    }
    let (l, m) = (degree as u64, order as u64);
    // |P_l^m(0)| = (l+m-1)!! / (l-m)!!
    Ok(Some(
        log_double_factorial((l + m).saturating_sub(1)) - log_double_factorial(l - m),
    ))
}

/// Exact `|P_l^m(0)|` from the classical closed form
/// `(l+m-1)!!/(l-m)!!` for `l+m` even, and exactly `0` for `l+m` odd.
///
/// The value itself outgrows `f64` around `l + m ~ 300`; use
/// [`ln_pmn_zero_abs`] past that.
pub fn pmn_zero_abs(degree: u32, order: u32) -> Result<f64> {
    Ok(match ln_pmn_zero(degree, order)? {
        Some(ln) => libm::exp(ln),
        None => 0.0,
    })
}

/// `ln |P_l^m(0)|`; negative infinity encodes the exact zero at odd `l + m`.
pub fn ln_pmn_zero_abs(degree: u32, order: u32) -> Result<f64> {
    Ok(ln_pmn_zero(degree, order)?.unwrap_or(f64::NEG_INFINITY))
}

/// The induction formula for `P_l^m(0)` as printed in the source analysis:
/// `(l-1)!!/l!! * (l+m)!!/(l-m)!!`, evaluated verbatim in the log domain.
///
/// This deviates from the exact `|P_l^m(0)|` by a bounded factor
/// (about `sqrt((l+m)/l)`), so it is kept as a separate operation and never
/// substituted for [`pmn_zero_abs`].
pub fn paper_pmn_zero_surrogate(degree: u32, order: u32) -> Result<f64> {
    Ok(libm::exp(ln_paper_pmn_zero_surrogate(degree, order)?))
}

/// `ln` of [`paper_pmn_zero_surrogate`], for degrees past `f64` range.
pub fn ln_paper_pmn_zero_surrogate(degree: u32, order: u32) -> Result<f64> {
    if order > degree {
        return Err(Error::Domain("order m exceeds degree l"));
    }
    if degree % 2 == 1 || order % 2 == 1 {
        return Err(Error::Domain("surrogate requires even degree and order"));
    }
    let (l, m) = (degree as u64, order as u64);
    Ok(
        log_double_factorial(l.saturating_sub(1)) - log_double_factorial(l)
            + log_double_factorial(l + m)
            - log_double_factorial(l - m),
    )
}

/// Fully normalized associated Legendre function
/// `barP_l^m(x) = (-1)^m sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(x)`,
/// so that `barP_l^m(cos theta) e^{i m phi}` is an orthonormal `Y_l^m`.
///
/// Negative orders follow `barP_l^{-m} = (-1)^m barP_l^m`.
///
/// The diagonal seed is taken in the log domain and the upward three-term
/// recurrence in `l` runs on mantissas with a separate scale exponent, so
/// there is no intermediate overflow or underflow even at `l = 8192` with
/// `x` near the poles.
pub fn normalized_assoc_legendre(idx: HarmonicIndex, x: f64) -> f64 {
    debug_assert!(
        (-1.0 - 1e-12..=1.0 + 1e-12).contains(&x),
        "argument outside [-1, 1]: {x}"
    );
    let x = x.clamp(-1.0, 1.0);
    let l = idx.degree();
    let m = idx.order().unsigned_abs();
    let mut value = normalized_assoc_legendre_nonneg(l, m, x);
    if idx.order() < 0 && m % 2 == 1 {
        value = -value;
    }
    value
}

fn normalized_assoc_legendre_nonneg(l: u32, m: u32, x: f64) -> f64 {
    let one_minus_x2 = (1.0 - x * x).max(0.0);
    if m > 0 && one_minus_x2 == 0.0 {
        return 0.0; // barP_l^m(+-1) = 0 for every m >= 1
    }

    // log-domain seed: ln |barP_m^m(x)|
    let mut scale = if m == 0 {
        -0.5 * libm::log(4.0 * PI)
    } else {
        0.5 * (libm::log(2.0 * m as f64 + 1.0) - libm::log(4.0 * PI)
            + log_double_factorial(2 * m as u64 - 1)
            - log_double_factorial(2 * m as u64))
            + 0.5 * m as f64 * libm::log(one_minus_x2)
    };
    let seed_sign = if m % 2 == 1 { -1.0 } else { 1.0 };

    let mut prev = seed_sign; // barP_m^m     / e^scale
    if l == m {
        return rescaled(prev, scale);
    }
    let mut curr = x * libm::sqrt(2.0 * m as f64 + 3.0) * prev; // barP_{m+1}^m / e^scale
    let mf = m as f64;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let a = libm::sqrt((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf));
        let b = libm::sqrt(
            (2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0)
                / ((2.0 * lf - 3.0) * (lf * lf - mf * mf)),
        );
        let next = a * x * curr - b * prev;
        prev = curr;
        curr = next;
        if libm::fabs(prev).max(libm::fabs(curr)) > 1e250 {
            // shift 831 bits (~1e250) of magnitude into the scale exponent
            prev = libm::scalbn(prev, -831);
            curr = libm::scalbn(curr, -831);
            scale += 831.0 * LN_2;
        }
    }
    rescaled(curr, scale)
}

fn rescaled(mantissa: f64, scale: f64) -> f64 {
    if mantissa == 0.0 {
        return 0.0;
    }
    let ln = scale + libm::log(libm::fabs(mantissa));
    libm::copysign(libm::exp(ln), mantissa)
}
