//! Experiment runner: sweeps degrees and frequencies, fits power laws on
//! log-log data, and emits one row table per experiment.
//!
//! The six experiments:
//!
//! * `E1` mixed inner product `|<Y_l^m, Y_m^m>|` over the equator at
//!   `m ~ c l` (closed form, quadrature cross-check; exponent `1/4` in `m`).
//! * `E2` diagonal saturation `<Y_l^l, Y_l^l>` over the equator
//!   (exponent `1/2` in `l`).
//! * `E3` bounded regime of windowed generalized periods on a tilted great
//!   circle, envelope over `nu in [0.4, 0.5] lambda` per degree.
//! * `E4` rapid decay of the same family at `nu in [1.9, 2.1] lambda`.
//! * `E5` stationary-phase kernel decay `|K| ~ lambda^{-1/2}` at
//!   `nu = c lambda`, with the non-stationary tail at `nu = 2 lambda`.
//! * `E6` exact torus periods on a rational geodesic: matched frequency
//!   gives modulus `L/(2 pi)`, mismatched dual-lattice frequencies vanish.
//!
//! Individual periods oscillate and may vanish at particular `(l, nu)`, so
//! `E3`/`E4` fit the per-degree maximum of `|value|` over the frequency
//! window; the quantities under test are upper bounds, and the envelope is
//! the testable object.

use crate::functionals::{
    fourier_spectrum, generalized_inner_product, kernel_probe, min_distance_to_segment,
    place_probe_target, FunctionalRequest, PairFunction, ProbeConfig, Window,
};
use crate::geometry::{CurveSpec, Eigenfunction, SpherePoint};
use crate::sharpness::equator_mixed_inner_product_exact;
use crate::{Complex64, Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::E1,
        ExperimentId::E2,
        ExperimentId::E3,
        ExperimentId::E4,
        ExperimentId::E5,
        ExperimentId::E6,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::E1 => "E1",
            ExperimentId::E2 => "E2",
            ExperimentId::E3 => "E3",
            ExperimentId::E4 => "E4",
            ExperimentId::E5 => "E5",
            ExperimentId::E6 => "E6",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ExperimentId::E1 => "mixed inner product exponent over the equator",
            ExperimentId::E2 => "diagonal highest-weight saturation exponent",
            ExperimentId::E3 => "bounded-regime envelope of windowed periods",
            ExperimentId::E4 => "rapid-decay envelope of windowed periods",
            ExperimentId::E5 => "stationary-phase kernel decay",
            ExperimentId::E6 => "exact torus periods on a rational geodesic",
        }
    }
}

impl core::str::FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E1" | "e1" => Ok(ExperimentId::E1),
            "E2" | "e2" => Ok(ExperimentId::E2),
            "E3" | "e3" => Ok(ExperimentId::E3),
            "E4" | "e4" => Ok(ExperimentId::E4),
            "E5" | "e5" => Ok(ExperimentId::E5),
            "E6" | "e6" => Ok(ExperimentId::E6),
            _ => Err(Error::Domain("unknown experiment id (expected E1..E6)")),
        }
    }
}

/// Sweep configuration. The degree grid is geometric in base 2 from
/// `degree_min` to `degree_max`; for `E5` the grid values are the kernel
/// frequencies `lambda` themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub degree_min: u32,
    pub degree_max: u32,
    /// The constant `c` in `(0, 1)`: order fraction for `E1`/`E3`/`E4`,
    /// frequency fraction `nu/lambda` for `E5`.
    pub ratio: f64,
    pub curve: CurveSpec,
    pub window: Option<Window>,
    pub tol: f64,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn defaults(id: ExperimentId) -> Self {
        let base = ExperimentConfig {
            id,
            degree_min: 64,
            degree_max: 1024,
            ratio: 0.5,
            curve: CurveSpec::Equator,
            window: None,
            tol: 1e-10,
            seed: 7,
        };
        match id {
            ExperimentId::E1 => ExperimentConfig {
                degree_max: 2048,
                ..base
            },
            ExperimentId::E2 => base,
            ExperimentId::E3 | ExperimentId::E4 => ExperimentConfig {
                ratio: 0.3,
                curve: CurveSpec::TiltedGreatCircle { tilt: PI / 6.0 },
                // support [0, pi]: covers the arc where the restriction's
                // local frequency sweeps through the tested nu ranges
                window: Some(Window {
                    center: PI / 2.0,
                    halfwidth: PI / 2.0,
                }),
                ..base
            },
            ExperimentId::E5 => ExperimentConfig {
                degree_min: 128,
                degree_max: 4096,
                window: Some(Window {
                    center: 0.0,
                    halfwidth: 0.45,
                }),
                ..base
            },
            ExperimentId::E6 => ExperimentConfig {
                degree_min: 5,
                degree_max: 5,
                curve: CurveSpec::TorusGeodesic {
                    p: 3,
                    q: 4,
                    offset: 0.0,
                },
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree_min == 0 || self.degree_min > self.degree_max {
            return Err(Error::Domain("degree grid must be nonempty and increasing"));
        }
        if !(0.0 < self.ratio && self.ratio < 1.0) {
            return Err(Error::Domain("ratio c must lie in (0, 1)"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain("tolerance must be positive"));
        }
        Ok(())
    }

    fn degrees(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut l = self.degree_min;
        while l <= self.degree_max {
            out.push(l);
            match l.checked_mul(2) {
                Some(next) => l = next,
                None => break,
            }
        }
        out
    }
}

/// How a row's value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Quadrature,
    SeededDraw,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Quadrature => "quadrature",
            Provenance::SeededDraw => "seeded-draw",
        }
    }
}

/// One computed value of an experiment sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    /// Degree `l`, or the kernel frequency `lambda` for `E5`.
    pub degree: u32,
    pub order: i64,
    pub frequency: f64,
    pub value: Complex64,
    pub modulus: f64,
    pub provenance: Provenance,
    /// Sub-series label within the experiment.
    pub series: &'static str,
    /// Cross-route deviation where two routes exist (relative for `E1`/`E2`,
    /// absolute against the exact value for `E6`).
    pub deviation: Option<f64>,
}

/// Least-squares power law through `(x, y)` pairs on log-log axes.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_intercept: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
}

/// Ordinary least squares on `(ln x, ln y)`; the exponent is the slope.
///
/// Nonpositive coordinates are domain errors, and values below `1e-300` are
/// rejected rather than clamped.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::Domain("power-law fit needs at least 3 points"));
    }
    for &(x, y) in points {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(Error::Domain("power-law fit needs strictly positive data"));
        }
        if y < 1e-300 {
            return Err(Error::Domain("power-law fit rejects values below 1e-300"));
        }
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (libm::log(x), libm::log(y)))
        .collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(lx, ly) in &logs {
        sxx += (lx - mean_x) * (lx - mean_x);
        sxy += (lx - mean_x) * (ly - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Domain(
            "power-law fit needs at least two distinct abscissae",
        ));
    }
    let exponent = sxy / sxx;
    let log_intercept = mean_y - exponent * mean_x;
    let mut residuals = Vec::with_capacity(logs.len());
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for &(lx, ly) in &logs {
        let r = ly - (log_intercept + exponent * lx);
        residuals.push(r);
        ss_res += r * r;
        ss_tot += (ly - mean_y) * (ly - mean_y);
    }
    // treat rounding-level spread as constant data, which the zero slope
    // fits exactly
    let spread_floor = 1e-24 * n * (1.0 + mean_y * mean_y);
    let r_squared = if ss_tot > spread_floor {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(PowerLawFit {
        exponent,
        log_intercept,
        r_squared,
        residuals,
    })
}

/// Full result of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub id: ExperimentId,
    pub rows: Vec<ExperimentRow>,
    /// Per-degree series the fit runs on: `(abscissa, envelope value)`.
    pub envelope: Vec<(f64, f64)>,
    pub fit: Option<PowerLawFit>,
    /// Acceptance band on the fitted exponent, where one applies.
    pub exponent_band: Option<(f64, f64)>,
    pub pass: bool,
    /// The seeded probe target (`E5`), echoed for reproducibility.
    pub probe_target: Option<SpherePoint>,
}

/// A failed sweep, carrying whatever rows were completed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentAbort {
    pub cause: Error,
    pub partial_rows: Vec<ExperimentRow>,
}

impl fmt::Display for ExperimentAbort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "experiment aborted after {} rows: {}",
            self.partial_rows.len(),
            self.cause
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ExperimentAbort {}

fn uniform(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Round `c * l` to the nearest even integer, at least 2.
fn even_order(l: u32, c: f64) -> u32 {
    let m = 2.0 * libm::round(c * l as f64 / 2.0);
    (m as u32).clamp(2, l)
}

struct RowLog {
    rows: Vec<ExperimentRow>,
}

impl RowLog {
    fn new() -> Self {
        RowLog { rows: Vec::new() }
    }

    fn push(&mut self, row: ExperimentRow) {
        self.rows.push(row);
    }

    fn fail(self, cause: Error) -> ExperimentAbort {
        ExperimentAbort {
            cause,
            partial_rows: self.rows,
        }
    }
}

/// Run one experiment; identical configurations (seed included) produce
/// identical row tables.
pub fn run_experiment(
    config: &ExperimentConfig,
) -> core::result::Result<ExperimentOutcome, ExperimentAbort> {
    let mut log = RowLog::new();
    if let Err(e) = config.validate() {
        return Err(log.fail(e));
    }
    match config.id {
        ExperimentId::E1 => run_closed_vs_quadrature(config, log, false),
        ExperimentId::E2 => run_closed_vs_quadrature(config, log, true),
        ExperimentId::E3 => run_period_envelope(config, log, (0.4, 0.5), 9, "bounded"),
        ExperimentId::E4 => run_period_envelope(config, log, (1.9, 2.1), 5, "rapid-decay"),
        ExperimentId::E5 => run_kernel_decay(config, log),
        ExperimentId::E6 => {
            let out = run_torus_exact(config, &mut log);
            out.map_err(|e| log.fail(e))
        }
    }
}

fn run_closed_vs_quadrature(
    config: &ExperimentConfig,
    mut log: RowLog,
    diagonal: bool,
) -> core::result::Result<ExperimentOutcome, ExperimentAbort> {
    let mut envelope = Vec::new();
    let mut worst_deviation = 0.0f64;
    for l in config.degrees() {
        if l % 2 == 1 {
            return Err(log.fail(Error::Domain("equator sharpness needs even degrees")));
        }
        let m = if diagonal {
            l
        } else {
            even_order(l, config.ratio)
        };
        let closed = match equator_mixed_inner_product_exact(l, m) {
            Ok(v) => v,
            Err(e) => return Err(log.fail(e)),
        };
        let request = FunctionalRequest {
            f: Eigenfunction::sphere_harmonic(l, m as i32).expect("m <= l"),
            g: PairFunction::Function(
                Eigenfunction::sphere_harmonic(m, m as i32).expect("diagonal index"),
            ),
            curve: CurveSpec::Equator,
            frequency: 0.0,
            window: None,
            tol: config.tol,
        };
        let quad = match generalized_inner_product(&request) {
            Ok(r) => r,
            Err(e) => return Err(log.fail(e)),
        };
        let deviation = libm::fabs(quad.value.norm() - closed) / closed;
        worst_deviation = worst_deviation.max(deviation);
        log.push(ExperimentRow {
            degree: l,
            order: m as i64,
            frequency: 0.0,
            value: Complex64::new(closed, 0.0),
            modulus: closed,
            provenance: Provenance::ClosedForm,
            series: if diagonal { "diagonal" } else { "mixed" },
            deviation: Some(deviation),
        });
        envelope.push((m as f64, closed));
    }
    let fit = match fit_power_law(&envelope) {
        Ok(f) => f,
        Err(e) => return Err(log.fail(e)),
    };
    let band = if diagonal { (0.45, 0.55) } else { (0.20, 0.30) };
    let pass = (band.0..=band.1).contains(&fit.exponent)
        && fit.r_squared >= 0.99
        && worst_deviation <= 1e-8;
    Ok(ExperimentOutcome {
        id: config.id,
        rows: log.rows,
        envelope,
        fit: Some(fit),
        exponent_band: Some(band),
        pass,
        probe_target: None,
    })
}

fn run_period_envelope(
    config: &ExperimentConfig,
    mut log: RowLog,
    nu_fraction: (f64, f64),
    samples: usize,
    series: &'static str,
) -> core::result::Result<ExperimentOutcome, ExperimentAbort> {
    let window = config.window.unwrap_or(Window {
        center: PI / 2.0,
        halfwidth: PI / 2.0,
    });
    let mut envelope = Vec::new();
    for l in config.degrees() {
        let m = libm::floor(config.ratio * l as f64) as u32;
        let f = match Eigenfunction::sphere_harmonic(l, m as i32) {
            Ok(f) => f,
            Err(e) => return Err(log.fail(e)),
        };
        let lambda = f.eigenfrequency();
        let mut best = 0.0f64;
        for j in 0..samples {
            let t = if samples == 1 {
                0.5
            } else {
                j as f64 / (samples - 1) as f64
            };
            let nu = lambda * (nu_fraction.0 + t * (nu_fraction.1 - nu_fraction.0));
            let values = match fourier_spectrum(&f, &config.curve, &[nu], Some(window), config.tol)
            {
                Ok(v) => v,
                Err(e) => return Err(log.fail(e)),
            };
            let (_, value) = values[0];
            best = best.max(value.norm());
            log.push(ExperimentRow {
                degree: l,
                order: m as i64,
                frequency: nu,
                value,
                modulus: value.norm(),
                provenance: Provenance::Quadrature,
                series,
                deviation: None,
            });
        }
        envelope.push((l as f64, best));
    }
    // near the floor of rapid decay the fit may be rejected; the value
    // criterion below still applies
    let fit = fit_power_law(&envelope).ok();
    let (band, pass) = match config.id {
        ExperimentId::E4 => {
            let band = (f64::NEG_INFINITY, -4.0);
            let small_tail = envelope
                .iter()
                .filter(|(x, _)| *x >= 256.0)
                .all(|(_, v)| *v < 1e-8);
            let by_fit = fit.as_ref().map(|f| f.exponent <= -4.0).unwrap_or(false);
            (band, by_fit || small_tail)
        }
        _ => {
            let band = (f64::NEG_INFINITY, 0.1);
            let by_fit = fit.as_ref().map(|f| f.exponent <= 0.1).unwrap_or(false);
            (band, by_fit)
        }
    };
    Ok(ExperimentOutcome {
        id: config.id,
        rows: log.rows,
        envelope,
        fit,
        exponent_band: Some(band),
        pass,
        probe_target: None,
    })
}

fn run_kernel_decay(
    config: &ExperimentConfig,
    mut log: RowLog,
) -> core::result::Result<ExperimentOutcome, ExperimentAbort> {
    let window = config.window.unwrap_or(Window {
        center: 0.0,
        halfwidth: 0.45,
    });
    let probe = ProbeConfig {
        tol: config.tol,
        ..ProbeConfig::default()
    };

    // one seeded draw per config: jitter the stationary point inside the
    // window and the segment distance inside the admissible annulus, then
    // calibrate the placement distance by bisection
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let s_star = window.center + (uniform(&mut rng) - 0.5) * 0.5 * window.halfwidth;
    let wanted = probe.scale * (0.97 + 0.06 * uniform(&mut rng));
    let target = {
        let (mut lo, mut hi) = (0.05f64, PI - 0.05);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let t = match place_probe_target(&config.curve, s_star, mid, config.ratio) {
                Ok(t) => t,
                Err(e) => return Err(log.fail(e)),
            };
            if min_distance_to_segment(&config.curve, &t, &window) < wanted {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        match place_probe_target(&config.curve, s_star, 0.5 * (lo + hi), config.ratio) {
            Ok(t) => t,
            Err(e) => return Err(log.fail(e)),
        }
    };
    log.push(ExperimentRow {
        degree: 0,
        order: 0,
        frequency: s_star,
        value: Complex64::new(target.colatitude, target.longitude),
        modulus: 0.0,
        provenance: Provenance::SeededDraw,
        series: "probe-target",
        deviation: None,
    });

    let mut envelope = Vec::new();
    let mut tail_ok = true;
    for l in config.degrees() {
        let lambda = l as f64;
        let nu = config.ratio * lambda;
        let stationary = match kernel_probe(lambda, nu, &config.curve, &target, &window, &probe) {
            Ok(r) => r,
            Err(e) => return Err(log.fail(e)),
        };
        log.push(ExperimentRow {
            degree: l,
            order: 0,
            frequency: nu,
            value: stationary.value,
            modulus: stationary.value.norm(),
            provenance: Provenance::Quadrature,
            series: "kernel",
            deviation: None,
        });
        envelope.push((lambda, stationary.value.norm()));

        let tail = match kernel_probe(
            lambda,
            2.0 * lambda,
            &config.curve,
            &target,
            &window,
            &probe,
        ) {
            Ok(r) => r,
            Err(e) => return Err(log.fail(e)),
        };
        if lambda >= 256.0 && tail.value.norm() >= 1e-6 {
            tail_ok = false;
        }
        log.push(ExperimentRow {
            degree: l,
            order: 0,
            frequency: 2.0 * lambda,
            value: tail.value,
            modulus: tail.value.norm(),
            provenance: Provenance::Quadrature,
            series: "tail",
            deviation: None,
        });
    }
    let fit = match fit_power_law(&envelope) {
        Ok(f) => f,
        Err(e) => return Err(log.fail(e)),
    };
    let band = (-0.6, -0.4);
    let pass = (band.0..=band.1).contains(&fit.exponent) && tail_ok;
    Ok(ExperimentOutcome {
        id: config.id,
        rows: log.rows,
        envelope,
        fit: Some(fit),
        exponent_band: Some(band),
        pass,
        probe_target: Some(target),
    })
}

fn run_torus_exact(config: &ExperimentConfig, log: &mut RowLog) -> Result<ExperimentOutcome> {
    let curve = match config.curve {
        CurveSpec::TorusGeodesic { .. } => config.curve,
        _ => CurveSpec::TorusGeodesic {
            p: 3,
            q: 4,
            offset: 0.0,
        },
    };
    let (p, q) = match curve {
        CurveSpec::TorusGeodesic { p, q, .. } => (p, q),
        _ => unreachable!(),
    };
    let wave = Eigenfunction::torus_wave(&[(p, q, Complex64::new(1.0, 0.0))])?;
    let speed = libm::sqrt((p * p + q * q) as f64);
    let matched = speed; // restriction of e^{i(px+qy)} is e^{i |(p,q)| s}
    let expected = curve.length() / (2.0 * PI);

    let mut pass = true;
    for (nu, series, want) in [
        (matched, "matched", expected),
        (0.0, "mismatched", 0.0),
        (matched - 1.0 / speed, "mismatched", 0.0),
        (matched + 1.0 / speed, "mismatched", 0.0),
        (2.0 * matched, "mismatched", 0.0),
    ] {
        let req = FunctionalRequest {
            f: wave.clone(),
            g: PairFunction::One,
            curve,
            frequency: nu,
            window: None,
            tol: config.tol,
        };
        let r = generalized_inner_product(&req)?;
        let deviation = libm::fabs(r.value.norm() - want);
        pass &= if series == "matched" {
            deviation <= 1e-10
        } else {
            r.value.norm() < 1e-12
        };
        log.push(ExperimentRow {
            degree: speed as u32,
            order: 0,
            frequency: nu,
            value: r.value,
            modulus: r.value.norm(),
            provenance: Provenance::Quadrature,
            series,
            deviation: Some(deviation),
        });
    }
    Ok(ExperimentOutcome {
        id: config.id,
        rows: core::mem::take(&mut log.rows),
        envelope: Vec::new(),
        fit: None,
        exponent_band: None,
        pass,
        probe_target: None,
    })
}
