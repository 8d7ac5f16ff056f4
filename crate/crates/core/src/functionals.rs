//! Inner products of two eigenfunctions over a curve, generalized periods
//! (Fourier coefficients of the restriction), and the windowed
//! stationary-phase kernel probe with the exact great-circle distance.
//!
//! On a closed curve `e^{-i nu s}` is only periodic for `nu` in
//! `(2 pi / L) Z`, so the closed (unwindowed) variant computes exact Fourier
//! coefficients at dual-lattice frequencies, while the windowed variant
//! accepts arbitrary real `nu`.

use crate::geometry::{cis, CurveSpec, Eigenfunction, SpherePoint, Surface};
use crate::quadrature::{adaptive_periodic, bump_window, QuadResult};
use crate::{Complex64, Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Default relative tolerance handed to the adaptive quadrature.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Smooth cutoff `chi((s - center)/halfwidth)` along the curve parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub center: f64,
    pub halfwidth: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            center: 0.0,
            halfwidth: 0.25,
        }
    }
}

impl Window {
    pub fn new(center: f64, halfwidth: f64) -> Result<Self> {
        if !(halfwidth > 0.0) {
            return Err(Error::Domain("window halfwidth must be positive"));
        }
        Ok(Window { center, halfwidth })
    }

    pub fn support_start(&self) -> f64 {
        self.center - self.halfwidth
    }

    pub fn support_length(&self) -> f64 {
        2.0 * self.halfwidth
    }

    pub fn evaluate(&self, s: f64) -> f64 {
        bump_window(s, self.center, self.halfwidth)
    }
}

/// Second factor of the pairing: an eigenfunction or the constant one
/// (the eigenfunction of eigenvalue zero).
#[derive(Debug, Clone, PartialEq)]
pub enum PairFunction {
    Function(Eigenfunction),
    One,
}

impl PairFunction {
    fn eigenfrequency(&self) -> f64 {
        match self {
            PairFunction::Function(f) => f.eigenfrequency(),
            PairFunction::One => 0.0,
        }
    }
}

impl From<Eigenfunction> for PairFunction {
    fn from(f: Eigenfunction) -> Self {
        PairFunction::Function(f)
    }
}

/// One pairing `int f(gamma(s)) conj(g(gamma(s))) e^{-i nu s} [chi(s)] ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalRequest {
    pub f: Eigenfunction,
    pub g: PairFunction,
    pub curve: CurveSpec,
    pub frequency: f64,
    pub window: Option<Window>,
    pub tol: f64,
}

impl FunctionalRequest {
    pub fn validate(&self) -> Result<()> {
        if self.f.surface() != self.curve.surface() {
            return Err(Error::SurfaceMismatch);
        }
        if let PairFunction::Function(g) = &self.g {
            if g.surface() != self.curve.surface() {
                return Err(Error::SurfaceMismatch);
            }
        }
        if let Some(w) = &self.window {
            if !(w.halfwidth > 0.0) {
                return Err(Error::Domain("window halfwidth must be positive"));
            }
            if w.halfwidth > self.curve.length() / 2.0 {
                return Err(Error::Domain(
                    "window halfwidth exceeds half the curve length",
                ));
            }
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain("tolerance must be positive"));
        }
        Ok(())
    }
}

fn eval_on_curve(f: &Eigenfunction, curve: &CurveSpec, s: f64) -> Complex64 {
    f.eval(&curve.point(s)).expect("request validated surfaces")
}

/// `int f conj(g) e^{-i nu s} [chi] ds` over the closed curve or the window
/// support, with `frequency_hint = (lambda_f + lambda_g + |nu|) * domain/(2 pi)`.
pub fn generalized_inner_product(req: &FunctionalRequest) -> Result<QuadResult> {
    req.validate()?;
    let pair = |s: f64| -> Complex64 {
        let fv = eval_on_curve(&req.f, &req.curve, s);
        let gv = match &req.g {
            PairFunction::Function(g) => eval_on_curve(g, &req.curve, s).conj(),
            PairFunction::One => Complex64::new(1.0, 0.0),
        };
        fv * gv * cis(-req.frequency * s)
    };
    let content = req.f.eigenfrequency() + req.g.eigenfrequency() + libm::fabs(req.frequency);
    match &req.window {
        None => {
            let length = req.curve.length();
            let hint = content * length / (2.0 * PI);
            adaptive_periodic(pair, length, hint, req.tol)
        }
        Some(w) => {
            let start = w.support_start();
            let length = w.support_length();
            let hint = content * length / (2.0 * PI);
            let windowed = |u: f64| {
                let s = start + u;
                pair(s) * w.evaluate(s)
            };
            adaptive_periodic(windowed, length, hint, req.tol)
        }
    }
}

/// Batch generalized periods: one `generalized_inner_product` with `g = 1`
/// per requested frequency, in the order given.
pub fn fourier_spectrum(
    f: &Eigenfunction,
    curve: &CurveSpec,
    frequencies: &[f64],
    window: Option<Window>,
    tol: f64,
) -> Result<Vec<(f64, Complex64)>> {
    let mut out = Vec::with_capacity(frequencies.len());
    for &nu in frequencies {
        let req = FunctionalRequest {
            f: f.clone(),
            g: PairFunction::One,
            curve: *curve,
            frequency: nu,
            window,
            tol,
        };
        out.push((nu, generalized_inner_product(&req)?.value));
    }
    Ok(out)
}

/// Geometry of the kernel probe: target distances admissible for the
/// windowed curve segment sit in `[inner * scale, outer * scale]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub scale: f64,
    pub inner: f64,
    pub outer: f64,
    pub tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            scale: 0.5,
            inner: 0.9,
            outer: 1.1,
            tol: DEFAULT_TOL,
        }
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Exact great-circle distance `arccos <p, q>` between unit vectors.
pub fn great_circle_distance(p: [f64; 3], q: [f64; 3]) -> f64 {
    libm::acos(dot(p, q).clamp(-1.0, 1.0))
}

fn require_sphere_curve(curve: &CurveSpec) -> Result<()> {
    if curve.surface() != Surface::Sphere {
        return Err(Error::Domain("kernel probe needs a sphere curve"));
    }
    Ok(())
}

/// Minimum of `d(gamma(s), target)` over the window support, by a fine scan.
pub fn min_distance_to_segment(curve: &CurveSpec, target: &SpherePoint, window: &Window) -> f64 {
    let x = target.unit_vector();
    let n = 2048;
    let mut best = f64::INFINITY;
    for j in 0..=n {
        let s = window.support_start() + window.support_length() * j as f64 / n as f64;
        best = best.min(great_circle_distance(curve.embedding(s), x));
    }
    best
}

/// `d/ds d(gamma(s), target) = -<gamma'(s), x> / sqrt(1 - <gamma(s), x>^2)`.
pub fn distance_derivative(curve: &CurveSpec, target: &SpherePoint, s: f64) -> f64 {
    let x = target.unit_vector();
    let g = dot(curve.embedding(s), x).clamp(-1.0, 1.0);
    -dot(curve.velocity(s), x) / libm::sqrt((1.0 - g * g).max(f64::MIN_POSITIVE))
}

/// Cosine of the angle between `gamma'(s)` and the tangent at `gamma(s)` of
/// the great circle toward the target, from the ambient embedding.
pub fn velocity_angle_cos(curve: &CurveSpec, target: &SpherePoint, s: f64) -> f64 {
    let p = curve.embedding(s);
    let x = target.unit_vector();
    let c = dot(p, x);
    // unit tangent at p pointing toward x along the connecting great circle
    let mut u = [x[0] - c * p[0], x[1] - c * p[1], x[2] - c * p[2]];
    let norm = libm::sqrt(dot(u, u));
    for w in &mut u {
        *w /= norm;
    }
    dot(curve.velocity(s), u)
}

/// Root of `lambda d'(s) - nu` on the window, by bisection after a bracket
/// scan. Used only to test the phase-derivative identity; the probe integral
/// itself never needs the stationary point.
pub fn locate_stationary_point(
    lambda: f64,
    nu: f64,
    curve: &CurveSpec,
    target: &SpherePoint,
    window: &Window,
) -> Option<f64> {
    let phase_rate = |s: f64| lambda * distance_derivative(curve, target, s) - nu;
    let n = 256;
    let start = window.support_start();
    let step = window.support_length() / n as f64;
    let mut prev_s = start;
    let mut prev_v = phase_rate(prev_s);
    for j in 1..=n {
        let s = start + step * j as f64;
        let v = phase_rate(s);
        if prev_v == 0.0 {
            return Some(prev_s);
        }
        if prev_v * v < 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_s, s, prev_v);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = phase_rate(mid);
                if flo * fm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev_s = s;
        prev_v = v;
    }
    None
}

/// Place a probe target at `distance` from `gamma(s_star)` so the phase
/// `lambda d(gamma(s), x) - nu s` with `nu/lambda = epsilon` is stationary at
/// `s_star`: the receding rate there is `d'(s_star) = epsilon`.
pub fn place_probe_target(
    curve: &CurveSpec,
    s_star: f64,
    distance: f64,
    epsilon: f64,
) -> Result<SpherePoint> {
    require_sphere_curve(curve)?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain("epsilon must lie in [0, 1)"));
    }
    if !(0.0 < distance && distance < PI) {
        return Err(Error::Domain("distance must lie in (0, pi)"));
    }
    let p = curve.embedding(s_star);
    let t = curve.velocity(s_star);
    let n = cross(p, t);
    let ortho = libm::sqrt(1.0 - epsilon * epsilon);
    let (cd, sd) = (libm::cos(distance), libm::sin(distance));
    let x = [
        cd * p[0] + sd * (-epsilon * t[0] + ortho * n[0]),
        cd * p[1] + sd * (-epsilon * t[1] + ortho * n[1]),
        cd * p[2] + sd * (-epsilon * t[2] + ortho * n[2]),
    ];
    Ok(SpherePoint::from_unit_vector(x))
}

/// Windowed oscillatory kernel
/// `K = int e^{i (lambda d(gamma(s), target) - nu s)} chi(s) ds`
/// with `d` the exact great-circle distance.
///
/// The target must sit at distance `[inner, outer] * scale` from the windowed
/// curve segment. For `nu/lambda < c < 1` the phase has a nondegenerate
/// stationary point and `|K|` decays like `lambda^{-1/2}`; for
/// `nu > c^{-1} lambda` it decays faster than any polynomial. Both are
/// verified by the experiment harness rather than asserted per call.
pub fn kernel_probe(
    lambda: f64,
    nu: f64,
    curve: &CurveSpec,
    target: &SpherePoint,
    window: &Window,
    config: &ProbeConfig,
) -> Result<QuadResult> {
    require_sphere_curve(curve)?;
    if !(lambda >= 0.0) {
        return Err(Error::Domain("lambda must be nonnegative"));
    }
    let d_min = min_distance_to_segment(curve, target, window);
    let (lo, hi) = (config.inner * config.scale, config.outer * config.scale);
    if !(lo..=hi).contains(&d_min) {
        return Err(Error::TargetOutsideAnnulus {
            distance: d_min,
            lo,
            hi,
        });
    }
    let x = target.unit_vector();
    let start = window.support_start();
    let length = window.support_length();
    let hint = (lambda + libm::fabs(nu)) * length / (2.0 * PI);
    let integrand = |u: f64| {
        let s = start + u;
        let d = great_circle_distance(curve.embedding(s), x);
        cis(lambda * d - nu * s) * window.evaluate(s)
    };
    adaptive_periodic(integrand, length, hint, config.tol)
}
