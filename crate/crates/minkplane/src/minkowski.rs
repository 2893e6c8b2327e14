//! Rectangular areas, distance sets, realisation spectra, quadruple energy,
//! and the Cauchy-Schwarz diagnostics.
//!
//! The rectangular area of an ordered point pair is
//! `R(p, q) = (q1 - p1)(q2 - p2)`; it is the squared Minkowski distance in
//! split coordinates. `n(x)` counts ordered pairs (including `p = q`, which
//! contributes to `x = 0`) realising area `x`, so that `sum_x n(x) = N^2`
//! exactly. The quadruple energy `Q = sum_{x != 0} n(x)^2` counts ordered
//! pairs of ordered pairs with equal nonzero area.

use std::collections::{BTreeMap, BTreeSet};

use crate::geom::PlanePoint;
use crate::rational::Rational;
use crate::Error;

/// An ordered set of pairwise-distinct plane points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    points: Vec<PlanePoint>,
}

impl PointSet {
    /// Builds a point set, rejecting duplicates and empty input.
    pub fn new(points: Vec<PlanePoint>) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.clone()) {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        Ok(PointSet { points })
    }

    /// Fixture helper; panics on duplicates.
    pub fn from_int_pairs(pairs: &[(i64, i64)]) -> Self {
        PointSet::new(
            pairs
                .iter()
                .map(|&(a, b)| PlanePoint::from_ints(a, b))
                .collect(),
        )
        .expect("valid fixture")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PlanePoint> {
        self.points.iter()
    }

    /// The set with every point reflected through `(x1, x2) -> (x2, x1)`.
    pub fn reflected(&self) -> PointSet {
        PointSet {
            points: self.points.iter().map(PlanePoint::swapped).collect(),
        }
    }

    /// Parses the on-disk format: a JSON array of two-element arrays of
    /// rational literals, e.g. `[["1/2","3"],["0","-2/5"]]`.
    pub fn from_json_str(s: &str) -> Result<Self, Error> {
        let raw: Vec<[String; 2]> =
            serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        let mut points = Vec::with_capacity(raw.len());
        for [a, b] in &raw {
            points.push(PlanePoint::new(a.parse()?, b.parse()?));
        }
        PointSet::new(points)
    }

    pub fn to_json_string(&self) -> String {
        let raw: Vec<[String; 2]> = self
            .points
            .iter()
            .map(|p| [p.x1.to_string(), p.x2.to_string()])
            .collect();
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    /// Largest number of points sharing one abscissa or one ordinate.
    pub fn max_null_aligned(&self) -> usize {
        let mut by_x1: BTreeMap<&Rational, usize> = BTreeMap::new();
        let mut by_x2: BTreeMap<&Rational, usize> = BTreeMap::new();
        for p in &self.points {
            *by_x1.entry(&p.x1).or_default() += 1;
            *by_x2.entry(&p.x2).or_default() += 1;
        }
        by_x1.values().chain(by_x2.values()).copied().max().unwrap_or(0)
    }

    /// True when every point shares one abscissa or every point shares one
    /// ordinate, i.e. the whole set lies on a single null line.
    pub fn on_single_null_line(&self) -> bool {
        let first = &self.points[0];
        self.points.iter().all(|p| p.x1 == first.x1)
            || self.points.iter().all(|p| p.x2 == first.x2)
    }
}

/// `R(p, q) = (q1 - p1)(q2 - p2)`. Symmetric: both factors negate under a
/// swap, so `R(q, p) = R(p, q)`.
pub fn rectangular_area(p: &PlanePoint, q: &PlanePoint) -> Rational {
    (&q.x1 - &p.x1) * (&q.x2 - &p.x2)
}

/// The set of all rectangular areas over ordered pairs of `ps`, zero
/// included (the diagonal alone puts it there).
pub fn distance_set(ps: &PointSet) -> BTreeSet<Rational> {
    rect_area_set_between(ps, ps)
}

/// `distance_set` without the zero element.
pub fn distance_set_nonzero(ps: &PointSet) -> BTreeSet<Rational> {
    let mut set = distance_set(ps);
    set.remove(&Rational::zero());
    set
}

/// The two-set area collection `{R(p, q) : p in a, q in b}`.
pub fn rect_area_set_between(a: &PointSet, b: &PointSet) -> BTreeSet<Rational> {
    let mut set = BTreeSet::new();
    for p in a.iter() {
        for q in b.iter() {
            set.insert(rectangular_area(p, q));
        }
    }
    set
}

/// Realisation counts `n(x)` over ordered pairs, diagonal included.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AreaSpectrum {
    counts: BTreeMap<Rational, u64>,
}

impl AreaSpectrum {
    pub fn counts(&self) -> &BTreeMap<Rational, u64> {
        &self.counts
    }

    pub fn count_of(&self, x: &Rational) -> u64 {
        self.counts.get(x).copied().unwrap_or(0)
    }

    /// Number of ordered pairs with zero area.
    pub fn zero_pairs(&self) -> u64 {
        self.count_of(&Rational::zero())
    }

    pub fn total_pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn nonzero_pair_count(&self) -> u64 {
        self.total_pairs() - self.zero_pairs()
    }

    /// `|R*(P)|`: number of distinct nonzero areas.
    pub fn nonzero_value_count(&self) -> usize {
        self.counts.len() - usize::from(self.counts.contains_key(&Rational::zero()))
    }

    /// Quadruple energy `Q = sum_{x != 0} n(x)^2`.
    pub fn energy(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(x, _)| !x.is_zero())
            .map(|(_, &n)| n * n)
            .sum()
    }
}

/// Exact realisation counts over all ordered pairs of `ps`.
pub fn area_spectrum(ps: &PointSet) -> AreaSpectrum {
    let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();
    for p in ps.iter() {
        for q in ps.iter() {
            *counts.entry(rectangular_area(p, q)).or_default() += 1;
        }
    }
    AreaSpectrum { counts }
}

/// The number of ordered quadruples `(p, q, s, t)` with
/// `R(p,q) = R(s,t) != 0`.
pub fn quadruple_energy(ps: &PointSet) -> u64 {
    area_spectrum(ps).energy()
}

/// Explicit `O(N^4)` enumeration of the quadruples counted by
/// [`quadruple_energy`], as index quadruples into `ps`. This is the oracle
/// the incidence pipeline is checked against.
pub fn enumerate_quadruples(ps: &PointSet, cap: usize) -> Result<Vec<[usize; 4]>, Error> {
    let n = ps.len();
    if n > cap {
        return Err(Error::BruteForceCapExceeded { n, cap });
    }
    let pts = ps.points();
    let mut areas = Vec::with_capacity(n * n);
    for p in pts {
        for q in pts {
            areas.push(rectangular_area(p, q));
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let r_ij = &areas[i * n + j];
            if r_ij.is_zero() {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    if &areas[k * n + l] == r_ij {
                        out.push([i, j, k, l]);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exact inputs to the Cauchy-Schwarz chain, plus alignment diagnostics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CauchySchwarzReport {
    pub n: usize,
    /// `sum_{x != 0} n(x)`.
    pub nonzero_pairs: u64,
    pub zero_pairs: u64,
    /// Quadruple energy `Q`.
    pub energy: u64,
    /// `|R*(P)|`.
    pub nonzero_values: usize,
    /// `(sum_{x != 0} n(x))^2 <= Q * |R*(P)|`, checked exactly.
    pub inequality_holds: bool,
    /// Max number of points on one horizontal or vertical line.
    pub max_null_aligned: usize,
}

pub fn cauchy_schwarz_report(ps: &PointSet) -> CauchySchwarzReport {
    let spectrum = area_spectrum(ps);
    let nonzero_pairs = spectrum.nonzero_pair_count();
    let energy = spectrum.energy();
    let nonzero_values = spectrum.nonzero_value_count();
    CauchySchwarzReport {
        n: ps.len(),
        nonzero_pairs,
        zero_pairs: spectrum.zero_pairs(),
        energy,
        nonzero_values,
        inequality_holds: (nonzero_pairs as u128).pow(2)
            <= energy as u128 * nonzero_values as u128,
        max_null_aligned: ps.max_null_aligned(),
    }
}
