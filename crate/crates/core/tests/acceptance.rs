//! Acceptance suite: one test per criterion, each printing a single
//! `acceptance NN <name>: PASS/FAIL (...)` line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use eigencurve_core::functionals::{generalized_inner_product, FunctionalRequest, PairFunction};
use eigencurve_core::geometry::{sum_two_squares, CurveSpec, Eigenfunction};
use eigencurve_core::harness::{run_experiment, ExperimentConfig, ExperimentId};
use eigencurve_core::sharpness::{
    equator_mixed_inner_product_exact, telescoping_bound_check, telescoping_product,
    telescoping_product_log_form,
};
use eigencurve_core::special::{
    ln_paper_pmn_zero_surrogate, ln_pmn_zero_abs, normalized_assoc_legendre, HarmonicIndex,
};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::f64::consts::PI;
use std::time::Instant;

const SEED: u64 = 0x5eed_cafe;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn report(number: u32, name: &str, pass: bool, detail: &str, started: Instant, limit_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "acceptance {number:02} {name}: {} ({detail}, {elapsed:.2} s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} failed: {detail}");
    assert!(
        elapsed < limit_s,
        "criterion {number} exceeded its {limit_s} s budget: {elapsed:.2} s"
    );
}

#[test]
fn criterion_01_addition_theorem() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = 2.0 * uniform(&mut rng) - 1.0; // cos(theta), uniform on the sphere
        for l in 0..=64u32 {
            let mut total = normalized_assoc_legendre(HarmonicIndex::new(l, 0).unwrap(), x).powi(2);
            for m in 1..=l {
                total += 2.0
                    * normalized_assoc_legendre(HarmonicIndex::new(l, m as i32).unwrap(), x)
                        .powi(2);
            }
            let expected = (2.0 * l as f64 + 1.0) / (4.0 * PI);
            worst = worst.max(((total - expected) / expected).abs());
        }
    }
    report(
        1,
        "addition-theorem",
        worst <= 1e-10,
        &format!("max rel err {worst:.2e} over 100 points, l <= 64"),
        start,
        5.0,
    );
}

#[test]
fn criterion_02_telescoping_identity_and_bounds() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut l = 0u32;
    while l <= 120 {
        let mut m = 0u32;
        while m <= l {
            let direct = telescoping_product(l, m).unwrap();
            let logform = telescoping_product_log_form(l, m).unwrap();
            worst = worst.max(((direct - logform) / logform).abs());
            m += 2;
        }
        l += 2;
    }
    let identity_ok = worst <= 1e-12;

    let mut chain_ok = true;
    for c in [0.3, 0.5, 0.8] {
        let mut l = 2u32;
        while l <= 1024 {
            let mut m = 0u32;
            while (m as f64) < c * l as f64 {
                let b = telescoping_bound_check(l, m, c).unwrap();
                chain_ok &= b.holds;
                m += 2;
            }
            l += 2;
        }
    }
    report(
        2,
        "telescoping-identity-and-bound-chain",
        identity_ok && chain_ok,
        &format!("identity max rel err {worst:.2e}; chain holds: {chain_ok}"),
        start,
        5.0,
    );
}

#[test]
fn criterion_03_closed_form_vs_quadrature() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut l = 0u32;
    while l <= 128 {
        let mut m = 0u32;
        while m <= l {
            let closed = equator_mixed_inner_product_exact(l, m).unwrap();
            let req = FunctionalRequest {
                f: Eigenfunction::sphere_harmonic(l, m as i32).unwrap(),
                g: PairFunction::Function(Eigenfunction::sphere_harmonic(m, m as i32).unwrap()),
                curve: CurveSpec::Equator,
                frequency: 0.0,
                window: None,
                tol: 1e-10,
            };
            let quad = generalized_inner_product(&req).unwrap().value.norm();
            worst = worst.max(((quad - closed) / closed).abs());
            m += 2;
        }
        l += 2;
    }
    report(
        3,
        "closed-form-vs-quadrature",
        worst <= 1e-8,
        &format!("max rel deviation {worst:.2e} over even l <= 128"),
        start,
        30.0,
    );
}

#[test]
fn criterion_04_mixed_inner_product_exponent() {
    let start = Instant::now();
    let out = run_experiment(&ExperimentConfig::defaults(ExperimentId::E1)).unwrap();
    let fit = out.fit.as_ref().unwrap();
    let pass = (0.20..=0.30).contains(&fit.exponent) && fit.r_squared >= 0.99 && out.pass;
    report(
        4,
        "mixed-inner-product-exponent",
        pass,
        &format!(
            "exponent {:.4} (want 0.25 +- 0.05), r^2 {:.6}",
            fit.exponent, fit.r_squared
        ),
        start,
        10.0,
    );
}

#[test]
fn criterion_05_diagonal_saturation_exponent() {
    let start = Instant::now();
    let out = run_experiment(&ExperimentConfig::defaults(ExperimentId::E2)).unwrap();
    let fit = out.fit.as_ref().unwrap();
    let pass = (0.45..=0.55).contains(&fit.exponent) && out.pass;
    report(
        5,
        "diagonal-saturation-exponent",
        pass,
        &format!("exponent {:.4} (want 0.5 +- 0.05)", fit.exponent),
        start,
        10.0,
    );
}

#[test]
fn criterion_06_bounded_generalized_periods() {
    let start = Instant::now();
    let out = run_experiment(&ExperimentConfig::defaults(ExperimentId::E3)).unwrap();
    let fit = out.fit.as_ref().unwrap();
    // the tested bound is one-sided: the envelope must not grow
    let pass = fit.exponent <= 0.1 && out.pass;
    report(
        6,
        "bounded-periods-envelope",
        pass,
        &format!("envelope exponent {:.4} (want <= 0.1)", fit.exponent),
        start,
        60.0,
    );
}

#[test]
fn criterion_07_rapid_decay_periods() {
    let start = Instant::now();
    let out = run_experiment(&ExperimentConfig::defaults(ExperimentId::E4)).unwrap();
    let exponent = out.fit.as_ref().map(|f| f.exponent);
    let tail_small = out
        .envelope
        .iter()
        .filter(|(x, _)| *x >= 256.0)
        .all(|(_, v)| *v < 1e-8);
    let pass = exponent.map(|e| e <= -4.0).unwrap_or(false) || tail_small;
    report(
        7,
        "rapid-decay-envelope",
        pass && out.pass,
        &format!(
            "envelope exponent {exponent:?} (want <= -4), tail below 1e-8 for l >= 256: {tail_small}"
        ),
        start,
        60.0,
    );
}

#[test]
fn criterion_08_kernel_decay() {
    let start = Instant::now();
    let out = run_experiment(&ExperimentConfig::defaults(ExperimentId::E5)).unwrap();
    let fit = out.fit.as_ref().unwrap();
    let tail_ok = out
        .rows
        .iter()
        .filter(|r| r.series == "tail" && r.degree >= 256)
        .all(|r| r.modulus < 1e-6);
    let pass = (-0.6..=-0.4).contains(&fit.exponent) && tail_ok && out.pass;
    report(
        8,
        "kernel-stationary-phase-decay",
        pass,
        &format!(
            "exponent {:.4} (want -0.5 +- 0.1), nonstationary tail < 1e-6: {tail_ok}",
            fit.exponent
        ),
        start,
        60.0,
    );
}

#[test]
fn criterion_09_torus_exact_periods() {
    let start = Instant::now();
    let out = run_experiment(&ExperimentConfig::defaults(ExperimentId::E6)).unwrap();
    let matched = out
        .rows
        .iter()
        .find(|r| r.series == "matched")
        .expect("matched row");
    let matched_ok = (matched.modulus - 5.0).abs() <= 1e-10;
    let mismatched_ok = out
        .rows
        .iter()
        .filter(|r| r.series == "mismatched")
        .all(|r| r.modulus < 1e-12);
    report(
        9,
        "torus-exact-periods",
        matched_ok && mismatched_ok && out.pass,
        &format!(
            "matched modulus {:.12} (want 5), mismatched all < 1e-12: {mismatched_ok}",
            matched.modulus
        ),
        start,
        1.0,
    );
}

#[test]
fn criterion_10_lattice_enumeration() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0u32;
    let mut ok = true;
    for _ in 0..500 {
        let n = rng.next_u64() % 1_000_001;
        let fast = sum_two_squares(n);
        let slow = brute_force_two_squares(n);
        if fast != slow {
            ok = false;
            println!(
                "mismatch at N = {n}: {} vs {} pairs",
                fast.len(),
                slow.len()
            );
        }
        checked += 1;
    }
    report(
        10,
        "lattice-enumeration",
        ok,
        &format!("{checked} seeded N <= 1e6 against the brute-force oracle"),
        start,
        10.0,
    );
}

fn brute_force_two_squares(n: u64) -> Vec<(i64, i64)> {
    let mut out = std::collections::BTreeSet::new();
    let mut m = 0i64;
    while (m * m) as u64 <= n {
        let rem = n - (m * m) as u64;
        let r = (rem as f64).sqrt() as i64;
        for cand in r.saturating_sub(1)..=r + 1 {
            if cand >= 0 && (cand * cand) as u64 == rem {
                for (a, b) in [(m, cand), (m, -cand), (-m, cand), (-m, -cand)] {
                    out.insert((a, b));
                }
            }
        }
        m += 1;
    }
    out.into_iter().collect()
}

#[test]
fn criterion_11_surrogate_audit() {
    let start = Instant::now();
    let mut worst_low = f64::INFINITY;
    let mut worst_high: f64 = 0.0;
    let mut l = 2u32;
    while l <= 1024 {
        let mut m = 0u32;
        while m <= l / 2 {
            let ratio =
                (ln_paper_pmn_zero_surrogate(l, m).unwrap() - ln_pmn_zero_abs(l, m).unwrap()).exp();
            worst_low = worst_low.min(ratio);
            worst_high = worst_high.max(ratio);
            m += 2;
        }
        l += 2;
    }
    // the empty-ratio guard at m = 0 is exactly 1; allow one rounding ulp
    let pass = worst_low >= 1.0 - 1e-12 && worst_high <= 1.5;
    report(
        11,
        "surrogate-audit",
        pass,
        &format!("ratio range [{worst_low:.12}, {worst_high:.12}] (want within [1, 1.5])"),
        start,
        5.0,
    );
}
