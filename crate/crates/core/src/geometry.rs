//! Model surfaces (round `S^2`, flat `T^2`), eigenfunction evaluation,
//! arc-length curves, and lattice-circle enumeration for torus eigenspaces.

use crate::special::{normalized_assoc_legendre, HarmonicIndex};
use crate::{Complex64, Error, Result};
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// `e^{i t}` without going through the complex exponential.
pub(crate) fn cis(t: f64) -> Complex64 {
    Complex64::new(libm::cos(t), libm::sin(t))
}

fn reduce_mod_2pi(t: f64) -> f64 {
    let r = t % TWO_PI;
    if r < 0.0 {
        r + TWO_PI
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    Sphere,
    Torus,
}

/// Point on `S^2` in spherical coordinates: colatitude from the north pole,
/// longitude reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub colatitude: f64,
    pub longitude: f64,
}

impl SpherePoint {
    pub fn new(colatitude: f64, longitude: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&colatitude) {
            return Err(Error::Domain("colatitude outside [0, pi]"));
        }
        Ok(SpherePoint {
            colatitude,
            longitude: reduce_mod_2pi(longitude),
        })
    }

    pub fn from_unit_vector(v: [f64; 3]) -> Self {
        let z = v[2].clamp(-1.0, 1.0);
        SpherePoint {
            colatitude: libm::acos(z),
            longitude: reduce_mod_2pi(libm::atan2(v[1], v[0])),
        }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let st = libm::sin(self.colatitude);
        [
            st * libm::cos(self.longitude),
            st * libm::sin(self.longitude),
            libm::cos(self.colatitude),
        ]
    }
}

/// Point on the square torus `[0, 2 pi)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        TorusPoint {
            x: reduce_mod_2pi(x),
            y: reduce_mod_2pi(y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfacePoint {
    Sphere(SpherePoint),
    Torus(TorusPoint),
}

impl SurfacePoint {
    pub fn surface(&self) -> Surface {
        match self {
            SurfacePoint::Sphere(_) => Surface::Sphere,
            SurfacePoint::Torus(_) => Surface::Torus,
        }
    }
}

/// One Fourier mode `a_{mn} e^{i(mx + ny)}` of a torus eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusMode {
    pub m: i64,
    pub n: i64,
    pub coefficient: Complex64,
}

/// A Laplace eigenfunction on one of the model surfaces.
///
/// Torus waves hold their modes on a single lattice circle `m^2 + n^2 = N`
/// with coefficients normalized to `sum |a_mn|^2 = 1`; together with the
/// `1/(2 pi)` factor in [`Eigenfunction::eval`] this gives unit `L^2(T^2)`
/// norm, matching the unit norm of the orthonormal sphere harmonics.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenfunction {
    SphereHarmonic(HarmonicIndex),
    TorusWave(Vec<TorusMode>),
}

impl Eigenfunction {
    pub fn sphere_harmonic(degree: u32, order: i32) -> Result<Self> {
        Ok(Eigenfunction::SphereHarmonic(HarmonicIndex::new(
            degree, order,
        )?))
    }

    /// Build a torus wave from `(m, n, coefficient)` triples, normalizing the
    /// coefficients. All modes must lie on one lattice circle.
    pub fn torus_wave(modes: &[(i64, i64, Complex64)]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Domain("torus wave needs at least one mode"));
        }
        let circle = modes[0].0 * modes[0].0 + modes[0].1 * modes[0].1;
        let mut norm_sq = 0.0;
        for &(m, n, c) in modes {
            if m * m + n * n != circle {
                return Err(Error::Domain("torus modes not on a single lattice circle"));
            }
            norm_sq += c.norm_sqr();
        }
        if norm_sq <= 0.0 {
            return Err(Error::Domain("torus wave has zero norm"));
        }
        let scale = 1.0 / libm::sqrt(norm_sq);
        Ok(Eigenfunction::TorusWave(
            modes
                .iter()
                .map(|&(m, n, c)| TorusMode {
                    m,
                    n,
                    coefficient: c * scale,
                })
                .collect(),
        ))
    }

    pub fn surface(&self) -> Surface {
        match self {
            Eigenfunction::SphereHarmonic(_) => Surface::Sphere,
            Eigenfunction::TorusWave(_) => Surface::Torus,
        }
    }

    /// `sqrt(l(l+1))` for sphere harmonics, `sqrt(m^2 + n^2)` for torus waves.
    pub fn eigenfrequency(&self) -> f64 {
        match self {
            Eigenfunction::SphereHarmonic(idx) => idx.eigenfrequency(),
            Eigenfunction::TorusWave(modes) => {
                let TorusMode { m, n, .. } = modes[0];
                libm::sqrt((m * m + n * n) as f64)
            }
        }
    }

    /// Evaluate the eigenfunction at a point of its surface.
    pub fn eval(&self, point: &SurfacePoint) -> Result<Complex64> {
        match (self, point) {
            (Eigenfunction::SphereHarmonic(idx), SurfacePoint::Sphere(p)) => {
                let plm = normalized_assoc_legendre(*idx, libm::cos(p.colatitude));
                Ok(plm * cis(idx.order() as f64 * p.longitude))
            }
            (Eigenfunction::TorusWave(modes), SurfacePoint::Torus(p)) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for mode in modes {
                    acc += mode.coefficient * cis(mode.m as f64 * p.x + mode.n as f64 * p.y);
                }
                Ok(acc / TWO_PI)
            }
            _ => Err(Error::SurfaceMismatch),
        }
    }
}

/// Arc-length-parametrized closed curve on a model surface.
///
/// Great circles have length `2 pi`; the `(p, q)` torus geodesic has length
/// `2 pi sqrt(p^2 + q^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveSpec {
    Equator,
    /// Equator rotated by `tilt` about the x-axis.
    TiltedGreatCircle {
        tilt: f64,
    },
    /// `s -> (offset + s p/|(p,q)|, s q/|(p,q)|) mod 2 pi` with `gcd(p, q) = 1`.
    TorusGeodesic {
        p: i64,
        q: i64,
        offset: f64,
    },
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CurveSpec {
    pub fn tilted_great_circle(tilt: f64) -> Result<Self> {
        if !(0.0..=PI / 2.0).contains(&tilt) {
            return Err(Error::Domain("tilt outside [0, pi/2]"));
        }
        Ok(CurveSpec::TiltedGreatCircle { tilt })
    }

    pub fn torus_geodesic(p: i64, q: i64, offset: f64) -> Result<Self> {
        if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
            return Err(Error::Domain("torus geodesic direction (p, q) not coprime"));
        }
        Ok(CurveSpec::TorusGeodesic { p, q, offset })
    }

    pub fn surface(&self) -> Surface {
        match self {
            CurveSpec::Equator | CurveSpec::TiltedGreatCircle { .. } => Surface::Sphere,
            CurveSpec::TorusGeodesic { .. } => Surface::Torus,
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            CurveSpec::Equator | CurveSpec::TiltedGreatCircle { .. } => TWO_PI,
            CurveSpec::TorusGeodesic { p, q, .. } => TWO_PI * libm::sqrt((p * p + q * q) as f64),
        }
    }

    /// `gamma(s)`; the parameter is reduced modulo the curve length.
    pub fn point(&self, s: f64) -> SurfacePoint {
        match self {
            CurveSpec::Equator => SurfacePoint::Sphere(SpherePoint {
                colatitude: PI / 2.0,
                longitude: reduce_mod_2pi(s),
            }),
            CurveSpec::TiltedGreatCircle { .. } => {
                SurfacePoint::Sphere(SpherePoint::from_unit_vector(self.embedding(s)))
            }
            CurveSpec::TorusGeodesic { p, q, offset } => {
                let speed = libm::sqrt((p * p + q * q) as f64);
                SurfacePoint::Torus(TorusPoint::new(
                    offset + s * *p as f64 / speed,
                    s * *q as f64 / speed,
                ))
            }
        }
    }

    /// Ambient `R^3` position of a sphere curve:
    /// `(cos s, cos(tilt) sin s, sin(tilt) sin s)`.
    ///
    /// Panics on torus curves; callers gate on [`CurveSpec::surface`].
    pub fn embedding(&self, s: f64) -> [f64; 3] {
        let tilt = match self {
            CurveSpec::Equator => 0.0,
            CurveSpec::TiltedGreatCircle { tilt } => *tilt,
            CurveSpec::TorusGeodesic { .. } => panic!("embedding is sphere-only"),
        };
        [
            libm::cos(s),
            libm::cos(tilt) * libm::sin(s),
            libm::sin(tilt) * libm::sin(s),
        ]
    }

    /// Ambient unit velocity `gamma'(s)` of a sphere curve.
    pub fn velocity(&self, s: f64) -> [f64; 3] {
        let tilt = match self {
            CurveSpec::Equator => 0.0,
            CurveSpec::TiltedGreatCircle { tilt } => *tilt,
            CurveSpec::TorusGeodesic { .. } => panic!("velocity is sphere-only"),
        };
        [
            -libm::sin(s),
            libm::cos(tilt) * libm::cos(s),
            libm::sin(tilt) * libm::cos(s),
        ]
    }
}

/// All integer pairs with `m^2 + n^2 = n_value`, in lexicographic order.
///
/// Representations are assembled from the Gaussian-integer factorization:
/// factor `N = 2^a prod p_i^{e_i} prod q_j^{f_j}` with `p_i = 1 (mod 4)` and
/// `q_j = 3 (mod 4)`; there are none unless every `f_j` is even, and
/// otherwise every representation is a unit multiple of
/// `(1+i)^a prod pi_i^{k_i} conj(pi_i)^{e_i-k_i} prod q_j^{f_j/2}`
/// where `pi_i` is a Gaussian prime over `p_i`.
pub fn sum_two_squares(n_value: u64) -> Vec<(i64, i64)> {
    if n_value == 0 {
        return alloc::vec![(0, 0)];
    }

    let factors = factorize(n_value);
    let mut divisor_count = 1u64; // prod (e_i + 1) over p = 1 mod 4
    for &(p, e) in &factors {
        if p % 4 == 3 && e % 2 == 1 {
            return Vec::new();
        }
        if p % 4 == 1 {
            divisor_count *= (e + 1) as u64;
        }
    }

    // start from the contribution of 2^a and the q_j^{f_j/2}
    let mut base = (1i64, 0i64);
    for &(p, e) in &factors {
        if p == 2 {
            for _ in 0..e {
                base = gaussian_mul(base, (1, 1));
            }
        } else if p % 4 == 3 {
            for _ in 0..(e / 2) {
                base = gaussian_mul(base, (p as i64, 0));
            }
        }
    }

    let mut products = alloc::vec![base];
    for &(p, e) in &factors {
        if p % 4 != 1 {
            continue;
        }
        let (x, y) = gaussian_prime_over(p);
        let mut next = Vec::with_capacity(products.len() * (e as usize + 1));
        for &z in &products {
            let mut w = z;
            // k factors of pi, e - k of conj(pi)
            let mut powers = Vec::with_capacity(e as usize + 1);
            for _ in 0..e {
                w = gaussian_mul(w, (x, y));
            }
            powers.push(w);
            let mut w = z;
            for k in 1..=e {
                w = gaussian_mul(w, (x, -y));
                let mut v = w;
                for _ in 0..(e - k) {
                    v = gaussian_mul(v, (x, y));
                }
                powers.push(v);
            }
            next.extend(powers);
        }
        products = next;
    }

    let mut set = BTreeSet::new();
    for &(a, b) in &products {
        set.insert((a, b));
        set.insert((-b, a));
        set.insert((-a, -b));
        set.insert((b, -a));
    }
    let out: Vec<(i64, i64)> = set.into_iter().collect();
    debug_assert_eq!(out.len() as u64, 4 * divisor_count);
    out
}

fn gaussian_mul(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut p = 3u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
        p += 2;
    }
    push(n, u32::from(n > 1));
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `(x, y)` with `x^2 + y^2 = p` for a prime `p = 1 (mod 4)`, via a square
/// root of `-1 mod p` and the Hermite-Serret Euclidean descent.
fn gaussian_prime_over(p: u64) -> (i64, i64) {
    debug_assert!(p % 4 == 1);
    let mut r = 0u64;
    for a in 2.. {
        // Euler criterion: a is a non-residue iff a^((p-1)/2) = -1
        if pow_mod(a, (p - 1) / 2, p) == p - 1 {
            r = pow_mod(a, (p - 1) / 4, p);
            break;
        }
    }
    debug_assert_eq!(mul_mod(r, r, p), p - 1);
    let isqrt_p = {
        let mut s = libm::sqrt(p as f64) as u64;
        while s * s > p {
            s -= 1;
        }
        while (s + 1) * (s + 1) <= p {
            s += 1;
        }
        s
    };
    let (mut u, mut v) = (p, r.min(p - r));
    while v > isqrt_p {
        let t = u % v;
        u = v;
        v = t;
    }
    let x = v;
    let y = {
        let rem = p - x * x;
        let mut s = libm::sqrt(rem as f64) as u64;
        while s * s > rem {
            s -= 1;
        }
        while (s + 1) * (s + 1) <= rem {
            s += 1;
        }
        debug_assert_eq!(s * s, rem);
        s
    };
    (x as i64, y as i64)
}
