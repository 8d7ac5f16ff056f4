//! Spectrally accurate integration of smooth periodic integrands over closed
//! curves, with adaptive node doubling, plus the smooth compactly supported
//! window used by the local (windowed) functionals.
//!
//! For smooth `L`-periodic integrands the equispaced trapezoid rule converges
//! super-algebraically, and it is exact on trigonometric polynomials of
//! degree below `N/2`; windowed integrands reuse the same rule over the
//! window support because they vanish to infinite order at its boundary.

use crate::{Complex64, Error, Result};

/// Node cap for [`adaptive_periodic`].
pub const MAX_NODES: usize = 1 << 24;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// `|value_N - value_{N/2}|` from the final doubling step.
    pub error_estimate: f64,
    pub nodes_used: usize,
}

/// Neumaier-compensated accumulator; keeps the rule's error at the rounding
/// level even for `2^24` nodes.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, term: f64) {
        let t = self.sum + term;
        self.carry += if libm::fabs(self.sum) >= libm::fabs(term) {
            (self.sum - t) + term
        } else {
            (term - t) + self.sum
        };
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `(L/N) sum_{j=0}^{N-1} f(jL/N)`: the periodic trapezoid rule.
pub fn periodic_trapezoid<F: Fn(f64) -> Complex64>(f: F, period: f64, n: usize) -> Complex64 {
    assert!(n >= 2, "periodic trapezoid needs at least two nodes");
    assert!(period > 0.0);
    let h = period / n as f64;
    let (mut re, mut im) = (Compensated::default(), Compensated::default());
    for j in 0..n {
        let v = f(j as f64 * h);
        re.add(v.re);
        im.add(v.im);
    }
    Complex64::new(re.total(), im.total()) * h
}

fn next_power_of_two_at_least(x: f64) -> usize {
    let mut n = 1usize;
    while (n as f64) < x && n < MAX_NODES {
        n *= 2;
    }
    n
}

/// Trapezoid rule with node doubling until
/// `|value_N - value_{N/2}| <= tol * max(1, |value_N|)`.
///
/// `frequency_hint` is the largest frequency content expected, in cycles over
/// the domain (for a pairing on a curve of length `L`, that is
/// `(lambda + mu + |nu|) L / (2 pi)`); the start `N_0 >= 8 * hint` resolves
/// the oscillation before the convergence test is trusted. Failure to
/// converge by `2^24` nodes reports the last two values.
pub fn adaptive_periodic<F: Fn(f64) -> Complex64>(
    f: F,
    period: f64,
    frequency_hint: f64,
    tol: f64,
) -> Result<QuadResult> {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(frequency_hint >= 0.0);
    let n0 = next_power_of_two_at_least((8.0 * frequency_hint).max(64.0));

    // value at N/2, then refine by summing the odd nodes only:
    // T_{2N} = T_N / 2 + (L / 2N) * sum_{j odd} f(jL / 2N)
    let mut n = n0 / 2;
    let mut value = periodic_trapezoid(&f, period, n);
    loop {
        let doubled = 2 * n;
        let h = period / doubled as f64;
        let (mut re, mut im) = (Compensated::default(), Compensated::default());
        for j in (1..doubled).step_by(2) {
            let v = f(j as f64 * h);
            re.add(v.re);
            im.add(v.im);
        }
        let refined = value * 0.5 + Complex64::new(re.total(), im.total()) * h;
        let err = (refined - value).norm();
        n = doubled;
        if err <= tol * refined.norm().max(1.0) {
            return Ok(QuadResult {
                value: refined,
                error_estimate: err,
                nodes_used: n,
            });
        }
        if n >= MAX_NODES {
            return Err(Error::Convergence {
                nodes: n,
                last: refined,
                previous: value,
            });
        }
        value = refined;
    }
}

/// `C^inf` bump: `exp(1 - 1/(1 - t^2))` for `t = (s - center)/halfwidth`
/// inside `|t| < 1`, zero outside; equals `1` at the center.
pub fn bump_window(s: f64, center: f64, halfwidth: f64) -> f64 {
    debug_assert!(halfwidth > 0.0);
    let t = (s - center) / halfwidth;
    let t2 = t * t;
    if t2 >= 1.0 {
        return 0.0;
    }
    libm::exp(1.0 - 1.0 / (1.0 - t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use core::f64::consts::PI;

    const TWO_PI: f64 = 2.0 * PI;

    fn cis(t: f64) -> Complex64 {
        Complex64::new(libm::cos(t), libm::sin(t))
    }

    #[test]
    fn constant_integrates_to_period() {
        let v = periodic_trapezoid(|_| Complex64::new(1.0, 0.0), TWO_PI, 16);
        assert_relative_eq!(v.re, TWO_PI, max_relative = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0);
    }

    #[test]
    fn spectral_exactness_inside_half_bandwidth() {
        // e^{iks} integrates to exactly zero for 0 < |k| < N/2, to L for k = 0
        let n = 64;
        for k in 1..(n / 2) {
            let v = periodic_trapezoid(|s| cis(k as f64 * s), TWO_PI, n);
            assert!(v.norm() <= 1e-13, "k = {k}: |v| = {}", v.norm());
        }
        let v = periodic_trapezoid(|s| cis(0.0 * s), TWO_PI, n);
        assert_relative_eq!(v.re, TWO_PI, max_relative = 1e-14);
    }

    #[test]
    fn oscillatory_product_matches_dense_reference() {
        let f = |s: f64| cis(40.0 * s) * (2.0 + libm::sin(s));
        let coarse = periodic_trapezoid(f, TWO_PI, 512);
        let dense = periodic_trapezoid(f, TWO_PI, 4096);
        assert!((coarse - dense).norm() <= 1e-12);
    }

    #[test]
    fn adaptive_constant() {
        let r = adaptive_periodic(|_| Complex64::new(1.0, 0.0), TWO_PI, 0.0, 1e-10).unwrap();
        assert_relative_eq!(r.value.re, TWO_PI, max_relative = 1e-12);
        assert!(r.error_estimate <= 1e-10);
        assert_eq!(r.nodes_used, 64);
    }

    #[test]
    fn adaptive_annihilates_pure_mode() {
        let r = adaptive_periodic(|s| cis(100.0 * s), TWO_PI, 100.0, 1e-10).unwrap();
        assert!(r.value.norm() <= 1e-12, "|v| = {}", r.value.norm());
        assert!(r.nodes_used >= 1024); // N0 = 2^ceil(log2(800))
    }

    #[test]
    fn refinement_error_drops_fast_once_resolved() {
        // degree-256 trigonometric polynomial with decaying coefficients
        let f = |s: f64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in [1usize, 17, 99, 256] {
                acc += cis(k as f64 * s) / k as f64;
            }
            acc
        };
        let reference = periodic_trapezoid(f, TWO_PI, 1 << 14);
        let mut errors = alloc::vec::Vec::new();
        let mut n = 640; // just above 2 * bandwidth, off the exactness lattice
        while n <= 5120 {
            errors.push((periodic_trapezoid(f, TWO_PI, n) - reference).norm());
            n *= 2;
        }
        for w in errors.windows(2) {
            if w[0] > 1e-13 {
                assert!(
                    w[1] <= w[0] / 10.0,
                    "refinement only went {} -> {}",
                    w[0],
                    w[1]
                );
            }
        }
    }

    #[test]
    fn bump_peak_support_and_integral() {
        assert_eq!(bump_window(0.4, 0.4, 0.3), 1.0);
        assert_eq!(bump_window(0.7, 0.4, 0.3), 0.0);
        assert_eq!(bump_window(0.1, 0.4, 0.3), 0.0);
        assert_eq!(bump_window(5.0, 0.4, 0.3), 0.0);
        // integral over the support for halfwidth 1; 40-digit reference
        let r = adaptive_periodic(
            |u| Complex64::new(bump_window(u - 1.0, 0.0, 1.0), 0.0),
            2.0,
            1.0,
            1e-12,
        )
        .unwrap();
        assert_relative_eq!(r.value.re, 1.2069003224378762, max_relative = 1e-10);
    }

    #[test]
    fn bump_flat_to_high_order_at_support_boundary() {
        // centered finite differences of orders 1..4 at the boundary shrink
        // toward zero with the step; at step 1e-3 they are all below 1e-4
        let h = 1e-3;
        let f = |s: f64| bump_window(s, 0.0, 1.0);
        let at = 1.0;
        let d1 = (f(at + h) - f(at - h)) / (2.0 * h);
        let d2 = (f(at + h) - 2.0 * f(at) + f(at - h)) / (h * h);
        let d3 = (f(at + 2.0 * h) - 2.0 * f(at + h) + 2.0 * f(at - h) - f(at - 2.0 * h))
            / (2.0 * h * h * h);
        let d4 = (f(at + 2.0 * h) - 4.0 * f(at + h) + 6.0 * f(at) - 4.0 * f(at - h)
            + f(at - 2.0 * h))
            / (h * h * h * h);
        for (order, d) in [(1, d1), (2, d2), (3, d3), (4, d4)] {
            assert!(libm::fabs(d) < 1e-4, "order {order}: {d}");
        }
    }

    #[test]
    fn convergence_failure_carries_last_values() {
        // white-noise integrand never converges; deterministic hash noise
        let noisy = |s: f64| {
            let bits = s.to_bits().wrapping_mul(0x9e37_79b9_7f4a_7c15);
            Complex64::new((bits >> 11) as f64 / (1u64 << 53) as f64, 0.0)
        };
        match adaptive_periodic(noisy, 1.0, 0.0, 1e-14) {
            Err(Error::Convergence {
                nodes,
                last,
                previous,
            }) => {
                assert_eq!(nodes, MAX_NODES);
                assert!(last.is_finite() && previous.is_finite());
            }
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }
}
