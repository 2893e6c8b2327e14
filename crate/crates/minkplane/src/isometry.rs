//! The group of rectangle-preserving affine maps and its line
//! parameterisation.
//!
//! A rectangle-preserving map is `phi = T_(x,y) . H_z` with `z > 0`, acting
//! as `phi(p) = (x + z*p1, y + p2/z)`; these maps form a group and preserve
//! the rectangular area of every point pair. The coset of maps carrying a
//! point `p` to a point `s` is, in the coordinates `(x, y*z, z)`, an open
//! straight line in the half-space `z > 0`. The line family used by the
//! incidence pipeline is the sign-symmetrized form
//! `l_ps = {(s1 - p1*z, p2 - s2*z, z) : z > 0}`,
//! which is the image of the coset under `psi` followed by `y -> -y`.

use std::fmt;

use crate::geom::{PlanePoint, SpacePoint};
use crate::minkowski::rectangular_area;
use crate::rational::Rational;
use crate::Error;

/// A rectangle-preserving map, stored as `(x, y, z)` with `z > 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Isometry {
    x: Rational,
    y: Rational,
    z: Rational,
}

impl Isometry {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self, Error> {
        if !z.is_positive() {
            return Err(Error::NonPositiveHeight);
        }
        Ok(Isometry { x, y, z })
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Isometry::new(
            Rational::from_int(x),
            Rational::from_int(y),
            Rational::from_int(z),
        )
        .expect("positive z")
    }

    pub fn identity() -> Self {
        Isometry {
            x: Rational::zero(),
            y: Rational::zero(),
            z: Rational::one(),
        }
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn z(&self) -> &Rational {
        &self.z
    }

    /// `phi(p) = (x + z*p1, y + p2/z)`.
    pub fn apply(&self, p: &PlanePoint) -> PlanePoint {
        PlanePoint::new(&self.x + &self.z * &p.x1, &self.y + &p.x2 / &self.z)
    }

    /// The map acting as `self` after `first`; dilation parts multiply.
    pub fn compose(&self, first: &Isometry) -> Isometry {
        Isometry {
            x: &self.x + &self.z * &first.x,
            y: &self.y + &first.y / &self.z,
            z: &self.z * &first.z,
        }
    }

    /// `phi^-1 = T_(-x/z, -y*z) . H_(1/z)`.
    pub fn inverse(&self) -> Isometry {
        Isometry {
            x: -(&self.x / &self.z),
            y: -(&self.y * &self.z),
            z: self.z.recip().expect("z > 0"),
        }
    }

    /// The coordinate chart `(x, y, z) -> (x, y*z, z)`, a bijection onto the
    /// open half-space `z > 0`.
    pub fn psi(&self) -> SpacePoint {
        SpacePoint::new(self.x.clone(), &self.y * &self.z, self.z.clone())
    }

    /// Report text form `(x; y; z)`.
    pub fn to_text(&self) -> String {
        format!("({}; {}; {})", self.x, self.y, self.z)
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Inverse of [`Isometry::psi`]; errors on `z <= 0`.
pub fn psi_inverse(sigma: &SpacePoint) -> Result<Isometry, Error> {
    if !sigma.z.is_positive() {
        return Err(Error::NonPositiveHeight);
    }
    Ok(Isometry {
        x: sigma.x.clone(),
        y: &sigma.y / &sigma.z,
        z: sigma.z.clone(),
    })
}

/// The unique map transporting one interval onto another of equal nonzero
/// area.
///
/// If `R(p,q) = R(s,t) != 0`, exactly one of the two assignments admits a
/// solution: with `z = (t1 - s1)/(q1 - p1) > 0` the returned map satisfies
/// `phi(p) = s, phi(q) = t` and `swapped = false`; otherwise the roles of
/// `s` and `t` are exchanged and `swapped = true`. Returns `None` when the
/// areas differ or vanish — zero-area transport is impossible because
/// space- and time-like directions cannot be exchanged.
pub fn isometry_from_quadruple(
    p: &PlanePoint,
    q: &PlanePoint,
    s: &PlanePoint,
    t: &PlanePoint,
) -> Option<(Isometry, bool)> {
    let area = rectangular_area(p, q);
    if area.is_zero() || area != rectangular_area(s, t) {
        return None;
    }
    // Nonzero area forces q1 != p1 and t1 != s1.
    let z = (&t.x1 - &s.x1) / (&q.x1 - &p.x1);
    let (target, z, swapped) = if z.is_positive() {
        (s, z, false)
    } else {
        (t, -z, true)
    };
    let x = &target.x1 - &z * &p.x1;
    let y = &target.x2 - &p.x2 / &z;
    Some((Isometry { x, y, z }, swapped))
}

/// The line of maps carrying `source` to `target`, in the symmetrized
/// half-space coordinates: its point at height `z` is
/// `(target1 - source1*z, source2 - target2*z, z)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IsoLine {
    pub source: PlanePoint,
    pub target: PlanePoint,
}

impl IsoLine {
    pub fn new(source: PlanePoint, target: PlanePoint) -> Self {
        IsoLine { source, target }
    }

    /// The line point at height `z > 0`.
    pub fn point_at(&self, z: &Rational) -> Result<SpacePoint, Error> {
        if !z.is_positive() {
            return Err(Error::NonPositiveHeight);
        }
        Ok(SpacePoint::new(
            &self.target.x1 - &self.source.x1 * z,
            &self.source.x2 - &self.target.x2 * z,
            z.clone(),
        ))
    }

    pub fn contains(&self, sigma: &SpacePoint) -> bool {
        sigma.z.is_positive()
            && sigma.x == &self.target.x1 - &self.source.x1 * &sigma.z
            && sigma.y == &self.source.x2 - &self.target.x2 * &sigma.z
    }

    /// Direction vector `(-source1, -target2, 1)`.
    pub fn direction(&self) -> (Rational, Rational, Rational) {
        (-&self.source.x1, -&self.target.x2, Rational::one())
    }

    /// The coset element with dilation `z`: the unique map of height `z`
    /// carrying `source` to `target`.
    pub fn isometry_at(&self, z: &Rational) -> Result<Isometry, Error> {
        if !z.is_positive() {
            return Err(Error::NonPositiveHeight);
        }
        Ok(Isometry {
            x: &self.target.x1 - &self.source.x1 * z,
            y: &self.target.x2 - &self.source.x2 / z,
            z: z.clone(),
        })
    }
}

impl fmt::Display for IsoLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l[{} -> {}]", self.source, self.target)
    }
}

/// Builds `l_ps` from an ordered source/target pair.
pub fn line_from_pair(source: &PlanePoint, target: &PlanePoint) -> IsoLine {
    IsoLine::new(source.clone(), target.clone())
}

/// The `y -> -y` reflection linking `psi` images to the symmetrized lines:
/// `phi(p) = s` if and only if `reflect_y(psi(phi))` lies on `l_ps`.
pub fn reflect_y(sigma: &SpacePoint) -> SpacePoint {
    SpacePoint::new(sigma.x.clone(), -&sigma.y, sigma.z.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(a: i64, b: i64) -> PlanePoint {
        PlanePoint::from_ints(a, b)
    }

    #[test]
    fn apply_examples() {
        assert_eq!(Isometry::identity().apply(&pt(3, 4)), pt(3, 4));
        assert_eq!(Isometry::from_ints(1, 2, 2).apply(&pt(3, 4)), pt(7, 4));
    }

    #[test]
    fn dilations_preserve_area() {
        let phi = Isometry::from_ints(0, 0, 3);
        let (p, q) = (pt(2, 5), pt(-1, 7));
        assert_eq!(
            rectangular_area(&phi.apply(&p), &phi.apply(&q)),
            rectangular_area(&p, &q)
        );
    }

    #[test]
    fn compose_examples() {
        let phi = Isometry::from_ints(1, 2, 2);
        assert_eq!(phi.compose(&Isometry::identity()), phi);
        assert_eq!(phi.compose(&phi.inverse()), Isometry::identity());

        let a = Isometry::from_ints(1, 0, 2);
        let b = Isometry::from_ints(0, 1, 3);
        let c = a.compose(&b);
        assert_eq!(c.z(), &Rational::from_int(6));
        for p in [pt(0, 0), pt(1, -1), pt(3, 5)] {
            assert_eq!(c.apply(&p), a.apply(&b.apply(&p)));
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Isometry::identity().inverse(), Isometry::identity());
        let inv = Isometry::from_ints(1, 2, 2).inverse();
        assert_eq!(inv.x(), &Rational::from_fraction(-1, 2));
        assert_eq!(inv.y(), &Rational::from_int(-4));
        assert_eq!(inv.z(), &Rational::from_fraction(1, 2));
    }

    #[test]
    fn quadruple_construction_examples() {
        let (phi, swapped) =
            isometry_from_quadruple(&pt(0, 0), &pt(1, 1), &pt(2, 3), &pt(3, 4)).unwrap();
        assert_eq!(phi, Isometry::from_ints(2, 3, 1));
        assert!(!swapped);
        assert_eq!(phi.apply(&pt(1, 1)), pt(3, 4));

        // z = -1 forces the swap and lands on the identity.
        let (phi, swapped) =
            isometry_from_quadruple(&pt(0, 0), &pt(1, 1), &pt(1, 1), &pt(0, 0)).unwrap();
        assert_eq!(phi, Isometry::identity());
        assert!(swapped);

        // Zero areas admit no transport even when they match.
        assert_eq!(
            isometry_from_quadruple(&pt(0, 0), &pt(0, 1), &pt(0, 0), &pt(1, 0)),
            None
        );
        // Mismatched areas.
        assert_eq!(
            isometry_from_quadruple(&pt(0, 0), &pt(1, 1), &pt(0, 0), &pt(1, 2)),
            None
        );
    }

    #[test]
    fn psi_examples() {
        assert_eq!(
            Isometry::identity().psi(),
            SpacePoint::new(Rational::zero(), Rational::zero(), Rational::one())
        );
        assert_eq!(
            Isometry::from_ints(1, 2, 2).psi(),
            SpacePoint::new(
                Rational::from_int(1),
                Rational::from_int(4),
                Rational::from_int(2)
            )
        );
    }

    #[test]
    fn psi_inverse_examples() {
        let sigma = SpacePoint::new(
            Rational::from_int(1),
            Rational::from_int(4),
            Rational::from_int(2),
        );
        assert_eq!(psi_inverse(&sigma).unwrap(), Isometry::from_ints(1, 2, 2));
        let bad = SpacePoint::new(Rational::zero(), Rational::zero(), Rational::zero());
        assert_eq!(psi_inverse(&bad), Err(Error::NonPositiveHeight));
    }

    #[test]
    fn line_from_pair_examples() {
        // Stabilizer of the origin: x = 0, y = 0.
        let stab = line_from_pair(&pt(0, 0), &pt(0, 0));
        let at2 = stab.point_at(&Rational::from_int(2)).unwrap();
        assert_eq!(at2.x, Rational::zero());
        assert_eq!(at2.y, Rational::zero());

        // x = 1, y = -z.
        let l = line_from_pair(&pt(0, 0), &pt(1, 1));
        let at3 = l.point_at(&Rational::from_int(3)).unwrap();
        assert_eq!(at3.x, Rational::from_int(1));
        assert_eq!(at3.y, Rational::from_int(-3));
        assert!(l.point_at(&Rational::zero()).is_err());
    }

    #[test]
    fn coset_elements_transport_source_to_target() {
        let l = line_from_pair(&pt(2, -1), &pt(5, 7));
        for z in [1i64, 2, 5] {
            let phi = l.isometry_at(&Rational::from_int(z)).unwrap();
            assert_eq!(phi.apply(&pt(2, -1)), pt(5, 7));
            // The symmetrized line carries the reflected psi image.
            assert!(l.contains(&reflect_y(&phi.psi())));
        }
    }

    fn arb_r() -> impl Strategy<Value = Rational> {
        (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::from_fraction(n, d))
    }

    fn arb_pos() -> impl Strategy<Value = Rational> {
        (1i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::from_fraction(n, d))
    }

    fn arb_iso() -> impl Strategy<Value = Isometry> {
        (arb_r(), arb_r(), arb_pos()).prop_map(|(x, y, z)| Isometry::new(x, y, z).unwrap())
    }

    fn arb_pt() -> impl Strategy<Value = PlanePoint> {
        (arb_r(), arb_r()).prop_map(|(a, b)| PlanePoint::new(a, b))
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_iso(), b in arb_iso(), c in arb_iso(), p in arb_pt()) {
            // Associativity, checked both on parameters and pointwise.
            let left = a.compose(&b).compose(&c);
            let right = a.compose(&b.compose(&c));
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(left.apply(&p), a.apply(&b.apply(&c.apply(&p))));
            // Identity and inverse laws.
            prop_assert_eq!(a.compose(&Isometry::identity()), a.clone());
            prop_assert_eq!(Isometry::identity().compose(&a), a.clone());
            prop_assert_eq!(a.compose(&a.inverse()), Isometry::identity());
            prop_assert_eq!(a.inverse().compose(&a), Isometry::identity());
            prop_assert_eq!(a.inverse().inverse(), a);
        }

        #[test]
        fn area_is_preserved(phi in arb_iso(), p in arb_pt(), q in arb_pt()) {
            prop_assert_eq!(
                rectangular_area(&phi.apply(&p), &phi.apply(&q)),
                rectangular_area(&p, &q)
            );
        }

        #[test]
        fn psi_round_trips(phi in arb_iso()) {
            prop_assert_eq!(psi_inverse(&phi.psi()).unwrap(), phi);
        }

        #[test]
        fn coset_line_correspondence(phi in arb_iso(), p in arb_pt(), s in arb_pt()) {
            let line = line_from_pair(&p, &s);
            let on_line = line.contains(&reflect_y(&phi.psi()));
            prop_assert_eq!(on_line, phi.apply(&p) == s);
        }
    }
}
