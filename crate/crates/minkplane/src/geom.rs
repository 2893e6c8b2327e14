//! Primitive exact geometry: plane points, half-space points, planes, and
//! 2x2 linear solves.

use std::cmp::Ordering;
use std::fmt;

use crate::rational::Rational;
use crate::Error;

/// A point of the plane in the split coordinates `(x1, x2)` in which the
/// quadratic form is the product of coordinate differences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PlanePoint {
    pub x1: Rational,
    pub x2: Rational,
}

impl PlanePoint {
    pub fn new(x1: Rational, x2: Rational) -> Self {
        PlanePoint { x1, x2 }
    }

    pub fn from_ints(x1: i64, x2: i64) -> Self {
        PlanePoint::new(Rational::from_int(x1), Rational::from_int(x2))
    }

    /// Reflection `(x1, x2) -> (x2, x1)`.
    pub fn swapped(&self) -> Self {
        PlanePoint::new(self.x2.clone(), self.x1.clone())
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// Change from the orthogonal coordinates, where the form is a difference of
/// squares, to the split coordinates used everywhere else:
/// `(x1, x2) -> (x1 - x2, x1 + x2)`.
pub fn to_new_coordinates(p: &PlanePoint) -> PlanePoint {
    PlanePoint::new(&p.x1 - &p.x2, &p.x1 + &p.x2)
}

/// A point of 3-space. The incidence pipeline only ever produces points with
/// `z > 0`; comparison is lexicographic by `(z, x, y)`, the deterministic
/// output order of the pipeline.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SpacePoint {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl SpacePoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        SpacePoint { x, y, z }
    }
}

impl Ord for SpacePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.z
            .cmp(&other.z)
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.y.cmp(&other.y))
    }
}

impl PartialOrd for SpacePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A plane `alpha*x + beta*y + gamma*z = delta` in canonical form: the first
/// nonzero coefficient of `(alpha, beta, gamma)` equals 1, so plane equality
/// is field-wise equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Plane3 {
    alpha: Rational,
    beta: Rational,
    gamma: Rational,
    delta: Rational,
}

impl Plane3 {
    pub fn new(
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        delta: Rational,
    ) -> Result<Self, Error> {
        let lead = if !alpha.is_zero() {
            alpha.clone()
        } else if !beta.is_zero() {
            beta.clone()
        } else if !gamma.is_zero() {
            gamma.clone()
        } else {
            return Err(Error::DegeneratePlane);
        };
        Ok(Plane3 {
            alpha: &alpha / &lead,
            beta: &beta / &lead,
            gamma: &gamma / &lead,
            delta: &delta / &lead,
        })
    }

    /// The plane `x + gamma*z = delta`.
    pub fn vertical(gamma: Rational, delta: Rational) -> Self {
        Plane3 {
            alpha: Rational::one(),
            beta: Rational::zero(),
            gamma,
            delta,
        }
    }

    /// The plane `y + gamma*z = delta`.
    pub fn horizontal(gamma: Rational, delta: Rational) -> Self {
        Plane3 {
            alpha: Rational::zero(),
            beta: Rational::one(),
            gamma,
            delta,
        }
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn is_vertical_type(&self) -> bool {
        self.alpha == Rational::one() && self.beta.is_zero()
    }

    pub fn is_horizontal_type(&self) -> bool {
        self.alpha.is_zero() && self.beta == Rational::one()
    }

    pub fn contains_point(&self, p: &SpacePoint) -> bool {
        &self.alpha * &p.x + &self.beta * &p.y + &self.gamma * &p.z == self.delta
    }
}

impl fmt::Display for Plane3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})x + ({})y + ({})z = {}",
            self.alpha, self.beta, self.gamma, self.delta
        )
    }
}

/// Outcome of an exact 2x2 linear solve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Solve2x2 {
    /// Nonzero determinant; the unique solution.
    Unique(Rational, Rational),
    /// Singular matrix, inconsistent right-hand side: no solution.
    Inconsistent,
    /// Singular matrix, consistent right-hand side: infinitely many solutions.
    Underdetermined,
}

/// Solves `a11*x + a12*y = b1`, `a21*x + a22*y = b2` exactly.
pub fn solve_2x2(
    a11: &Rational,
    a12: &Rational,
    a21: &Rational,
    a22: &Rational,
    b1: &Rational,
    b2: &Rational,
) -> Solve2x2 {
    let det = a11 * a22 - a12 * a21;
    if !det.is_zero() {
        let x = &(b1 * a22 - a12 * b2) / &det;
        let y = &(a11 * b2 - b1 * a21) / &det;
        return Solve2x2::Unique(x, y);
    }
    if a11.is_zero() && a12.is_zero() && a21.is_zero() && a22.is_zero() {
        return if b1.is_zero() && b2.is_zero() {
            Solve2x2::Underdetermined
        } else {
            Solve2x2::Inconsistent
        };
    }
    // Rank-one matrix: consistent iff the augmented minors vanish.
    let m1 = a11 * b2 - b1 * a21;
    let m2 = a12 * b2 - b1 * a22;
    if m1.is_zero() && m2.is_zero() {
        Solve2x2::Underdetermined
    } else {
        Solve2x2::Inconsistent
    }
}
