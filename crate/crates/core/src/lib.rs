//! Restrictions of Laplace eigenfunctions to closed curves on model surfaces.
//!
//! The library evaluates spherical harmonics and flat-torus waves along
//! arc-length curves (great circles, rational torus geodesics), integrates
//! their pairings with the spectrally accurate periodic trapezoid rule, and
//! exposes the closed forms that govern the size of those pairings at high
//! frequency. An experiment harness fits power laws to the resulting data.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm` so results are identical with or without the `std` feature.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod functionals;
pub mod geometry;
pub mod harness;
pub mod quadrature;
pub mod sharpness;
pub mod special;

pub use num_complex::Complex64;

use core::fmt;

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Arguments outside an operation's domain (index, parity, range).
    Domain(&'static str),
    /// Eigenfunction, curve, or point do not live on the same surface.
    SurfaceMismatch,
    /// Adaptive quadrature hit the node cap before meeting the tolerance.
    /// Carries the last two refinement values.
    Convergence {
        nodes: usize,
        last: Complex64,
        previous: Complex64,
    },
    /// Kernel probe target is outside the admissible distance annulus.
    TargetOutsideAnnulus { distance: f64, lo: f64, hi: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::SurfaceMismatch => write!(f, "surface mismatch between curve and function"),
            Error::Convergence { nodes, last, previous } => write!(
                f,
                "quadrature did not converge by {nodes} nodes (last {last}, previous {previous})"
            ),
            Error::TargetOutsideAnnulus { distance, lo, hi } => write!(
                f,
                "probe target at distance {distance} from the curve segment, admissible [{lo}, {hi}]"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
