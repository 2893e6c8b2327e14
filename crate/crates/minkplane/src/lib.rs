//! Exact-arithmetic toolkit for rectangular-area statistics of planar point
//! sets and the associated 3D line-incidence experiments.
//!
//! In split coordinates the squared Minkowski distance between two plane
//! points is the signed area of the axis-parallel rectangle they span,
//! `R(p,q) = (q1-p1)(q2-p2)`. The crate computes, with exact rational
//! arithmetic throughout:
//!
//! * distance (area) sets, realisation spectra, and quadruple energies
//!   ([`minkowski`]);
//! * the group of rectangle-preserving affine maps and its parameterisation
//!   of point-transport cosets as straight lines in the `z > 0` half-space
//!   ([`isometry`]);
//! * pairwise intersections of those line families, null-plane bookkeeping,
//!   rich/poor coordinate classification, dyadic bucket statistics, and the
//!   counting identities tying incidences back to quadruple energy
//!   ([`incidence`]);
//! * sum/product set statistics realised as rectangular-area sets of grids
//!   ([`sumproduct`]);
//! * deterministic instance generators ([`generators`]) and serialisable
//!   report types ([`report`]).
//!
//! There is no floating point anywhere in the verified pipeline; the only
//! inexact values are logarithmic ratios computed at report time.

pub mod generators;
pub mod geom;
pub mod incidence;
pub mod isometry;
pub mod minkowski;
pub mod rational;
pub mod report;
pub mod sumproduct;

pub use geom::{PlanePoint, Plane3, SpacePoint};
pub use isometry::{IsoLine, Isometry};
pub use minkowski::PointSet;
pub use rational::Rational;
pub use sumproduct::RealSet;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A scalar literal could not be parsed.
    ParseRational(String),
    /// Exact division by zero.
    DivisionByZero,
    /// A half-space point was requested at `z <= 0`.
    NonPositiveHeight,
    /// Two identical lines were passed where distinct ones are required.
    IdenticalLines,
    /// A point set contained the same point twice.
    DuplicatePoint(String),
    /// A point set must contain at least one point.
    EmptyPointSet,
    /// A plane needs a nonzero normal.
    DegeneratePlane,
    /// Brute-force enumeration was requested above the configured cap.
    BruteForceCapExceeded { n: usize, cap: usize },
    /// Ratio set with divisor set `{0}`.
    RatioByZeroSet,
    /// Invalid generator parameters.
    InvalidFamily(String),
    /// Malformed input data (file formats).
    Format(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ParseRational(s) => write!(f, "invalid rational literal: {s:?}"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NonPositiveHeight => write!(f, "point has nonpositive z"),
            Error::IdenticalLines => write!(f, "lines are identical"),
            Error::DuplicatePoint(p) => write!(f, "duplicate point {p}"),
            Error::EmptyPointSet => write!(f, "point set is empty"),
            Error::DegeneratePlane => write!(f, "plane normal is zero"),
            Error::BruteForceCapExceeded { n, cap } => {
                write!(f, "{n} points exceed the brute-force cap of {cap}")
            }
            Error::RatioByZeroSet => write!(f, "ratio set divisor is {{0}}"),
            Error::InvalidFamily(msg) => write!(f, "invalid family spec: {msg}"),
            Error::Format(msg) => write!(f, "malformed input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
