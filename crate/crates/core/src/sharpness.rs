//! Exact closed forms for the equator computations: the mixed inner product
//! `|int Y_l^m conj(Y_m^m) dphi|`, the telescoping factorial product behind
//! it, and the two-sided bounds that control the product when `m < c l`.
//!
//! Everything is evaluated in the log domain so the forms stay finite to
//! `l = 8192` and beyond. The exact `|P_l^m(0)|` is used throughout; the
//! looser induction-formula surrogate is recorded alongside for the audit
//! but never substituted.

use crate::special::{
    ln_norm_factor, ln_paper_pmn_zero_surrogate, ln_pmn_zero, log_double_factorial,
};
use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;

fn require_even_pair(degree: u32, order: u32) -> Result<()> {
    if order > degree {
        return Err(Error::Domain("order m exceeds degree l"));
    }
    if degree % 2 == 1 || order % 2 == 1 {
        return Err(Error::Domain("degree and order must both be even"));
    }
    Ok(())
}

/// `ln` of the equator restriction modulus of `Y_l^m` for `l + m` even:
/// `ln(barN_l^m |P_l^m(0)|)`.
fn ln_equator_amplitude(degree: u32, order: u32) -> Result<f64> {
    let ln_p0 = ln_pmn_zero(degree, order)?
        .ok_or(Error::Domain("equator amplitude vanishes for odd l + m"))?;
    Ok(ln_norm_factor(degree, order)? + ln_p0)
}

/// `|int_gamma Y_l^m conj(Y_m^m) dphi|` over the equator, exactly:
/// `2 pi * barN_l^m |P_l^m(0)| * barN_m^m |P_m^m(0)|`, in the log domain.
///
/// Both degrees must be even so neither Legendre value at the origin
/// vanishes. With `l = m` this is the squared `L^2`(equator) norm of the
/// highest-weight harmonic, which grows like `l^{1/2}`.
pub fn equator_mixed_inner_product_exact(degree: u32, order: u32) -> Result<f64> {
    require_even_pair(degree, order)?;
    let ln = libm::log(2.0 * PI)
        + ln_equator_amplitude(degree, order)?
        + ln_equator_amplitude(order, order)?;
    Ok(libm::exp(ln))
}

/// `prod_{k=1}^{m} (l - m + 2k) / (l - m + 2k - 1)` as a direct product.
///
/// Exceeds `1` for `m >= 1` and telescopes to
/// `[(l-m)!/(l+m)!] [(l+m)!!]^2 / [(l-m)!!]^2`; see
/// [`telescoping_product_log_form`] for that route.
pub fn telescoping_product(degree: u32, order: u32) -> Result<f64> {
    require_even_pair(degree, order)?;
    let (l, m) = (degree as f64, order as f64);
    let mut product = 1.0;
    let mut k = 1.0;
    while k <= m {
        product *= (l - m + 2.0 * k) / (l - m + 2.0 * k - 1.0);
        k += 1.0;
    }
    Ok(product)
}

/// The telescoped closed form
/// `[(l-m)!/(l+m)!] [(l+m)!!]^2 / [(l-m)!!]^2` via log-factorials;
/// the independent route against [`telescoping_product`].
pub fn telescoping_product_log_form(degree: u32, order: u32) -> Result<f64> {
    require_even_pair(degree, order)?;
    let (l, m) = (degree as u64, order as u64);
    let ln = libm::lgamma((l - m) as f64 + 1.0) - libm::lgamma((l + m) as f64 + 1.0)
        + 2.0 * (log_double_factorial(l + m) - log_double_factorial(l - m));
    Ok(libm::exp(ln))
}

/// Outcome of the bound chain `Pi < (l+m)/(l-m+1) < 2/(1-c)` for `m < c l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub value: f64,
    /// `(l + m) / (l - m + 1)`
    pub upper: f64,
    /// `2 / (1 - c)`
    pub cap: f64,
    pub holds: bool,
}

/// Check the chain `1 < Pi < (l+m)/(l-m+1) < 2/(1-c)`.
///
/// The chain needs `m >= 1` (the first factor is pulled out of the product);
/// at `m = 0` the product is the empty one and only `Pi = 1 < cap` is
/// meaningful, which is what `holds` reports there.
pub fn telescoping_bound_check(degree: u32, order: u32, ratio: f64) -> Result<BoundCheck> {
    if !(0.0 < ratio && ratio < 1.0) {
        return Err(Error::Domain("ratio c must lie in (0, 1)"));
    }
    if (order as f64) >= ratio * degree as f64 {
        return Err(Error::Domain("bound chain requires m < c l"));
    }
    let value = telescoping_product(degree, order)?;
    let (l, m) = (degree as f64, order as f64);
    let upper = (l + m) / (l - m + 1.0);
    let cap = 2.0 / (1.0 - ratio);
    let holds = if order == 0 {
        value == 1.0 && value < cap
    } else {
        1.0 < value && value < upper && upper < cap
    };
    Ok(BoundCheck {
        value,
        upper,
        cap,
        holds,
    })
}

/// Audit record pairing the exact mixed inner product with the surrogate
/// route and the telescoping control quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessRecord {
    pub degree: u32,
    pub order: u32,
    /// `2 pi` times the product of exact equator amplitudes.
    pub exact_value: f64,
    /// Same quantity with the induction-formula surrogate in place of the
    /// exact `|P_l^m(0)|`.
    pub surrogate_value: f64,
    pub telescoping: f64,
    /// `2 / (1 - m/l)`; infinite on the diagonal `m = l`.
    pub ratio_bound: f64,
}

pub fn sharpness_record(degree: u32, order: u32) -> Result<SharpnessRecord> {
    require_even_pair(degree, order)?;
    let exact_value = equator_mixed_inner_product_exact(degree, order)?;
    let surrogate_value = libm::exp(
        libm::log(2.0 * PI)
            + ln_norm_factor(degree, order)?
            + ln_paper_pmn_zero_surrogate(degree, order)?
            + ln_equator_amplitude(order, order)?,
    );
    let telescoping = telescoping_product(degree, order)?;
    let ratio_bound = if degree == order {
        f64::INFINITY
    } else {
        2.0 / (1.0 - order as f64 / degree as f64)
    };
    Ok(SharpnessRecord {
        degree,
        order,
        exact_value,
        surrogate_value,
        telescoping,
        ratio_bound,
    })
}

/// Records over even degrees and orders, for the audit sweeps.
pub fn sharpness_sweep(max_degree: u32) -> Result<Vec<SharpnessRecord>> {
    let mut out = Vec::new();
    let mut l = 0;
    while l <= max_degree {
        let mut m = 0;
        while m <= l {
            out.push(sharpness_record(l, m)?);
            m += 2;
        }
        l += 2;
    }
    Ok(out)
}
