//! Sum/product set statistics and their geometric cross-checks.
//!
//! The four-variable expander `(a s1 b)(a' s2 b')` over finite real sets is
//! realised geometrically as a rectangular-area set between two grids:
//! `(A - B).(A - B)` equals `R(B x B, A x A)` element for element, and
//! flipping a sign negates the corresponding grid coordinate set. Direction
//! counts over the grid `A x A` and the small cross-ratio sets are computed
//! by exact enumeration.

use std::collections::BTreeSet;

use crate::geom::PlanePoint;
use crate::minkowski::{rect_area_set_between, PointSet};
use crate::rational::Rational;
use crate::Error;

/// A finite set of reals (exact rationals), canonically sorted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealSet {
    elements: BTreeSet<Rational>,
}

impl RealSet {
    pub fn new<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RealSet {
            elements: iter.into_iter().collect(),
        }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        RealSet::new(values.iter().map(|&v| Rational::from_int(v)))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.elements.iter()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.elements.contains(v)
    }

    pub fn negated(&self) -> RealSet {
        RealSet::new(self.elements.iter().map(|v| -v))
    }

    /// On-disk format: a JSON array of rational literals.
    pub fn from_json_str(s: &str) -> Result<Self, Error> {
        let raw: Vec<String> = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        let mut elements = BTreeSet::new();
        for lit in &raw {
            elements.insert(lit.parse::<Rational>()?);
        }
        Ok(RealSet { elements })
    }

    pub fn to_json_string(&self) -> String {
        let raw: Vec<String> = self.elements.iter().map(Rational::to_string).collect();
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SetOp {
    Sum,
    Difference,
    Product,
    Ratio,
}

/// Elementwise set arithmetic; ratios skip zero divisors and error only when
/// the divisor set is exactly `{0}`.
pub fn set_op(a: &RealSet, b: &RealSet, op: SetOp) -> Result<RealSet, Error> {
    if op == SetOp::Ratio && b.iter().all(Rational::is_zero) && !b.is_empty() {
        return Err(Error::RatioByZeroSet);
    }
    let mut out = BTreeSet::new();
    for x in a.iter() {
        for y in b.iter() {
            match op {
                SetOp::Sum => {
                    out.insert(x + y);
                }
                SetOp::Difference => {
                    out.insert(x - y);
                }
                SetOp::Product => {
                    out.insert(x * y);
                }
                SetOp::Ratio => {
                    if !y.is_zero() {
                        out.insert(x / y);
                    }
                }
            }
        }
    }
    Ok(RealSet { elements: out })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

/// `(A s1 B) . (A s2 B)` by direct enumeration.
pub fn expander_set(a: &RealSet, b: &RealSet, s1: Sign, s2: Sign) -> RealSet {
    let combine = |sign: Sign| {
        let op = match sign {
            Sign::Plus => SetOp::Sum,
            Sign::Minus => SetOp::Difference,
        };
        set_op(a, b, op).expect("sum and difference are total")
    };
    set_op(&combine(s1), &combine(s2), SetOp::Product).expect("product is total")
}

pub fn expander_size(a: &RealSet, b: &RealSet, s1: Sign, s2: Sign) -> usize {
    expander_set(a, b, s1, s2).len()
}

/// The grid `{(x, y) : x in xs, y in ys}` as a point set.
pub fn grid_points(xs: &RealSet, ys: &RealSet) -> PointSet {
    let mut pts = Vec::with_capacity(xs.len() * ys.len());
    for x in xs.iter() {
        for y in ys.iter() {
            pts.push(PlanePoint::new(x.clone(), y.clone()));
        }
    }
    PointSet::new(pts).expect("grid points are distinct")
}

/// The same expander set computed geometrically: the rectangular-area set
/// between the grid built from the (possibly negated) copies of `B` and the
/// grid `A x A`. Cross-checked against [`expander_set`] in tests and the
/// acceptance suite.
pub fn expander_set_via_grid(
    a: &RealSet,
    b: &RealSet,
    s1: Sign,
    s2: Sign,
) -> BTreeSet<Rational> {
    let side = |sign: Sign| match sign {
        Sign::Minus => b.clone(),
        Sign::Plus => b.negated(),
    };
    let p = grid_points(&side(s1), &side(s2));
    let q = grid_points(a, a);
    rect_area_set_between(&p, &q)
}

/// Direction statistics of the grid `A x A`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DirectionCount {
    /// Distinct directions of lines through at least two grid points, the
    /// vertical direction counted as one element.
    pub directions: usize,
    /// `|(A - A) : (A - A)|` with zero divisors skipped.
    pub ratio_set_size: usize,
}

pub fn direction_count(a: &RealSet) -> DirectionCount {
    let grid: Vec<&Rational> = a.iter().collect();
    let n = grid.len();
    let mut slopes = BTreeSet::new();
    let mut vertical = false;
    for i in 0..n * n {
        let (x1, y1) = (grid[i / n], grid[i % n]);
        for j in (i + 1)..n * n {
            let (x2, y2) = (grid[j / n], grid[j % n]);
            if x1 == x2 {
                vertical = true;
            } else {
                slopes.insert((y2 - y1) / (x2 - x1));
            }
        }
    }
    let diff = set_op(a, a, SetOp::Difference).expect("difference is total");
    let ratio = set_op(&diff, &diff, SetOp::Ratio).expect("difference set contains nonzero");
    DirectionCount {
        directions: slopes.len() + usize::from(vertical),
        ratio_set_size: ratio.len(),
    }
}

/// Sizes of the three-variable slope set `{(a-b)/(b-c)}` and the
/// four-variable cross-ratio set `{(a-b)(c-d)/((b-c)(a-d))}`, both over
/// tuples of pairwise distinct elements; absent below the minimum set size.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CrossRatioSizes {
    pub three_variable: Option<usize>,
    pub four_variable: Option<usize>,
}

pub fn cross_ratio_sets(a: &RealSet) -> CrossRatioSizes {
    let v: Vec<&Rational> = a.iter().collect();
    let n = v.len();
    let three_variable = (n >= 3).then(|| {
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    out.insert(&(v[i] - v[j]) / &(v[j] - v[k]));
                }
            }
        }
        out.len()
    });
    let four_variable = (n >= 4).then(|| {
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        if i == j || i == k || i == l || j == k || j == l || k == l {
                            continue;
                        }
                        let num = (v[i] - v[j]) * (v[k] - v[l]);
                        let den = (v[j] - v[k]) * (v[i] - v[l]);
                        out.insert(&num / &den);
                    }
                }
            }
        }
        out.len()
    });
    CrossRatioSizes {
        three_variable,
        four_variable,
    }
}

/// `|{i*j : 1 <= i, j <= n}|` by enumeration.
pub fn multiplication_table_size(n: u32) -> usize {
    let mut out = BTreeSet::new();
    for i in 1..=n as u64 {
        for j in i..=n as u64 {
            out.insert(i * j);
        }
    }
    out.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::distance_set;
    use proptest::prelude::*;

    fn rs(values: &[i64]) -> RealSet {
        RealSet::from_ints(values)
    }

    #[test]
    fn set_op_examples() {
        assert_eq!(
            set_op(&rs(&[0, 1]), &rs(&[0, 1]), SetOp::Sum).unwrap(),
            rs(&[0, 1, 2])
        );
        assert_eq!(
            set_op(&rs(&[1, 2]), &rs(&[1, 2]), SetOp::Product).unwrap(),
            rs(&[1, 2, 4])
        );
        assert_eq!(
            set_op(&rs(&[-1, 0, 1]), &rs(&[-1, 1]), SetOp::Ratio).unwrap(),
            rs(&[-1, 0, 1])
        );
        // Zero divisors are skipped, a bare {0} divisor is an error.
        assert_eq!(
            set_op(&rs(&[1]), &rs(&[0, 2]), SetOp::Ratio).unwrap(),
            RealSet::new([Rational::from_fraction(1, 2)])
        );
        assert_eq!(
            set_op(&rs(&[1]), &rs(&[0]), SetOp::Ratio),
            Err(Error::RatioByZeroSet)
        );
    }

    #[test]
    fn expander_examples() {
        assert_eq!(expander_size(&rs(&[0, 1]), &rs(&[0, 1]), Sign::Minus, Sign::Minus), 3);
        // (A+B).(A+B) for A=B={1,2}: {2,3,4}.{2,3,4} = {4,6,8,9,12,16}.
        assert_eq!(expander_size(&rs(&[1, 2]), &rs(&[1, 2]), Sign::Plus, Sign::Plus), 6);
    }

    #[test]
    fn expander_matches_distance_set_when_sets_coincide() {
        // With A = B the minus/minus expander is the area set of the plain
        // grid A x A.
        let a = rs(&[0, 1]);
        let grid = grid_points(&a, &a);
        let direct: BTreeSet<Rational> =
            expander_set(&a, &a, Sign::Minus, Sign::Minus).elements;
        assert_eq!(direct, distance_set(&grid));
    }

    #[test]
    fn expander_grid_cross_check_all_signs() {
        let a = rs(&[0, 2, 5]);
        let b = rs(&[1, 3]);
        for s1 in [Sign::Plus, Sign::Minus] {
            for s2 in [Sign::Plus, Sign::Minus] {
                let direct: BTreeSet<Rational> =
                    expander_set(&a, &b, s1, s2).elements;
                assert_eq!(direct, expander_set_via_grid(&a, &b, s1, s2));
            }
        }
    }

    #[test]
    fn direction_count_examples() {
        let d = direction_count(&rs(&[0, 1]));
        assert_eq!(d.directions, 4); // slopes 0, 1, -1 plus the vertical
        assert_eq!(d.ratio_set_size, 3);

        // The 3x3 grid is the classical extremal configuration: 9 points,
        // exactly 8 directions (and a 7-element raw ratio set).
        let d = direction_count(&rs(&[0, 1, 2]));
        assert_eq!(d.directions, 8);
        assert_eq!(d.ratio_set_size, 7);
    }

    #[test]
    fn cross_ratio_examples() {
        let sizes = cross_ratio_sets(&rs(&[0, 1, 2]));
        // Six ordered triples of distinct values yield {1, -2, -1/2}.
        assert_eq!(sizes.three_variable, Some(3));
        assert_eq!(sizes.four_variable, None);

        let sizes = cross_ratio_sets(&rs(&[0, 1]));
        assert_eq!(sizes.three_variable, None);
    }

    #[test]
    fn multiplication_table_examples() {
        assert_eq!(multiplication_table_size(1), 1);
        assert_eq!(multiplication_table_size(2), 3);
        // Frozen from the enumeration oracle below.
        assert_eq!(multiplication_table_size(8), 30);
        let mut oracle = BTreeSet::new();
        for i in 1u64..=8 {
            for j in 1u64..=8 {
                oracle.insert(i * j);
            }
        }
        assert_eq!(oracle.len(), 30);
    }

    #[test]
    fn json_round_trip() {
        let a = RealSet::new([
            Rational::from_fraction(1, 2),
            Rational::from_int(-3),
        ]);
        assert_eq!(RealSet::from_json_str(&a.to_json_string()).unwrap(), a);
    }

    fn arb_real_set(max: usize) -> impl Strategy<Value = RealSet> {
        proptest::collection::btree_set((-30i64..=30, 1i64..=6), 2..=max).prop_map(|set| {
            RealSet::new(set.into_iter().map(|(n, d)| Rational::from_fraction(n, d)))
        })
    }

    proptest! {
        #[test]
        fn grid_identity_for_all_signs(a in arb_real_set(5), b in arb_real_set(5)) {
            for s1 in [Sign::Plus, Sign::Minus] {
                for s2 in [Sign::Plus, Sign::Minus] {
                    let direct: BTreeSet<Rational> =
                        expander_set(&a, &b, s1, s2).elements;
                    prop_assert_eq!(&direct, &expander_set_via_grid(&a, &b, s1, s2));
                }
            }
        }

        #[test]
        fn transpose_symmetry(a in arb_real_set(5), b in arb_real_set(5)) {
            prop_assert_eq!(
                expander_size(&a, &b, Sign::Minus, Sign::Minus),
                expander_size(&b, &a, Sign::Minus, Sign::Minus)
            );
        }

        #[test]
        fn dilation_leaves_sizes_alone(a in arb_real_set(4), b in arb_real_set(4), t in 1i64..=7) {
            let scale = Rational::from_int(t);
            let ta = RealSet::new(a.iter().map(|v| v * &scale));
            let tb = RealSet::new(b.iter().map(|v| v * &scale));
            prop_assert_eq!(
                expander_size(&ta, &tb, Sign::Minus, Sign::Minus),
                expander_size(&a, &b, Sign::Minus, Sign::Minus)
            );
        }

        #[test]
        fn cross_ratios_are_translation_invariant(a in arb_real_set(5), t in -20i64..=20) {
            let shift = Rational::from_int(t);
            let shifted = RealSet::new(a.iter().map(|v| v + &shift));
            prop_assert_eq!(cross_ratio_sets(&shifted), cross_ratio_sets(&a));
        }

        #[test]
        fn grids_never_sit_on_one_null_line(a in arb_real_set(4), b in arb_real_set(4)) {
            // |A|, |B| >= 2 guarantees the grid spreads in both coordinates.
            prop_assert!(!grid_points(&a, &b).on_single_null_line());
        }
    }
}
