//! Deterministic instance families: grids, seeded random rational sets,
//! null-line and rich-abscissa configurations, perturbed grids, and integer
//! progressions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::PlanePoint;
use crate::minkowski::PointSet;
use crate::rational::Rational;
use crate::sumproduct::{grid_points, RealSet};
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// The integer grid `{1..n} x {1..n_b}`.
    Grid,
    /// Seeded random points with bounded numerators and denominators.
    RandomRational,
    /// `n` points sharing one abscissa: every pairwise area is zero.
    NullLine,
    /// Half the points share one abscissa, the rest are generic.
    RichAbscissa,
    /// The integer grid displaced by distinct small rationals.
    PerturbedGrid,
    /// The real set `{1, ..., n}`.
    Progression,
}

impl Family {
    pub const ALL_POINT_FAMILIES: [Family; 5] = [
        Family::Grid,
        Family::RandomRational,
        Family::NullLine,
        Family::RichAbscissa,
        Family::PerturbedGrid,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Grid => "grid",
            Family::RandomRational => "random_rational",
            Family::NullLine => "null_line",
            Family::RichAbscissa => "rich_abscissa",
            Family::PerturbedGrid => "perturbed_grid",
            Family::Progression => "progression",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "grid" => Ok(Family::Grid),
            "random_rational" => Ok(Family::RandomRational),
            "null_line" => Ok(Family::NullLine),
            "rich_abscissa" => Ok(Family::RichAbscissa),
            "perturbed_grid" => Ok(Family::PerturbedGrid),
            "progression" => Ok(Family::Progression),
            other => Err(Error::InvalidFamily(format!("unknown family {other:?}"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A fully reproducible generation request: the same spec always produces
/// the same output.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub size: u32,
    /// Second grid dimension; defaults to `size`.
    #[serde(default)]
    pub size_b: Option<u32>,
    #[serde(default)]
    pub seed: u64,
    /// Bound on |numerator| of random coordinates.
    #[serde(default = "default_max_numerator")]
    pub max_numerator: i64,
    /// Bound on denominators of random coordinates.
    #[serde(default = "default_max_denominator")]
    pub max_denominator: i64,
}

fn default_max_numerator() -> i64 {
    100
}

fn default_max_denominator() -> i64 {
    100
}

impl FamilySpec {
    pub fn new(family: Family, size: u32, seed: u64) -> Self {
        FamilySpec {
            family,
            size,
            size_b: None,
            seed,
            max_numerator: default_max_numerator(),
            max_denominator: default_max_denominator(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Generated {
    Points(PointSet),
    Reals(RealSet),
}

impl Generated {
    pub fn into_points(self) -> Option<PointSet> {
        match self {
            Generated::Points(ps) => Some(ps),
            Generated::Reals(_) => None,
        }
    }

    pub fn into_reals(self) -> Option<RealSet> {
        match self {
            Generated::Reals(rs) => Some(rs),
            Generated::Points(_) => None,
        }
    }
}

fn integer_range(n: u32) -> RealSet {
    RealSet::new((1..=i64::from(n)).map(Rational::from_int))
}

fn draw_rational(rng: &mut ChaCha8Rng, spec: &FamilySpec) -> Rational {
    let numer = rng.gen_range(-spec.max_numerator..=spec.max_numerator);
    let denom = rng.gen_range(1..=spec.max_denominator);
    Rational::from_fraction(numer, denom)
}

fn draw_distinct_points(
    rng: &mut ChaCha8Rng,
    spec: &FamilySpec,
    count: usize,
    mut accept: impl FnMut(&PlanePoint) -> bool,
    existing: &mut Vec<PlanePoint>,
) -> Result<(), Error> {
    let mut attempts = 0usize;
    while existing.len() < count {
        let candidate = PlanePoint::new(draw_rational(rng, spec), draw_rational(rng, spec));
        if accept(&candidate) && !existing.contains(&candidate) {
            existing.push(candidate);
        } else {
            attempts += 1;
            if attempts > 100_000 {
                return Err(Error::InvalidFamily(
                    "coordinate bounds too tight for distinct points".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Generates the family instance described by `spec`. Draws are sequential
/// from a seeded generator, so output is a pure function of the spec.
pub fn generate(spec: &FamilySpec) -> Result<Generated, Error> {
    if spec.size == 0 {
        return Err(Error::InvalidFamily("size must be at least 1".into()));
    }
    if spec.max_numerator < 1 || spec.max_denominator < 1 {
        return Err(Error::InvalidFamily("coordinate bounds must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::Grid => {
            let rows = integer_range(spec.size);
            let cols = integer_range(spec.size_b.unwrap_or(spec.size));
            Ok(Generated::Points(grid_points(&rows, &cols)))
        }
        Family::NullLine => {
            let pts = (1..=i64::from(spec.size))
                .map(|i| PlanePoint::new(Rational::zero(), Rational::from_int(i)))
                .collect();
            Ok(Generated::Points(PointSet::new(pts)?))
        }
        Family::RichAbscissa => {
            let n = spec.size as usize;
            let shared = n.div_ceil(2);
            let mut pts: Vec<PlanePoint> = (1..=shared as i64)
                .map(|i| PlanePoint::new(Rational::zero(), Rational::from_int(i)))
                .collect();
            draw_distinct_points(&mut rng, spec, n, |p| !p.x1.is_zero(), &mut pts)?;
            Ok(Generated::Points(PointSet::new(pts)?))
        }
        Family::RandomRational => {
            let mut pts = Vec::new();
            draw_distinct_points(&mut rng, spec, spec.size as usize, |_| true, &mut pts)?;
            Ok(Generated::Points(PointSet::new(pts)?))
        }
        Family::PerturbedGrid => {
            let rows = spec.size as i64;
            let cols = i64::from(spec.size_b.unwrap_or(spec.size));
            // Distinct offsets below 1/2 keep the displaced points distinct.
            let denom = 4 * rows * cols + 7;
            let mut pts = Vec::new();
            let mut k = 0i64;
            for i in 1..=rows {
                for j in 1..=cols {
                    let dx = Rational::from_fraction(k + 1, denom);
                    let dy = Rational::from_fraction(k + 1 + rows * cols, 2 * denom);
                    pts.push(PlanePoint::new(
                        Rational::from_int(i) + dx,
                        Rational::from_int(j) + dy,
                    ));
                    k += 1;
                }
            }
            Ok(Generated::Points(PointSet::new(pts)?))
        }
        Family::Progression => Ok(Generated::Reals(integer_range(spec.size))),
    }
}

/// Seeded random real set with `count` distinct elements, for test corpora.
pub fn random_real_set(seed: u64, count: usize, max_numerator: i64, max_denominator: i64) -> RealSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements = std::collections::BTreeSet::new();
    while elements.len() < count {
        let numer = rng.gen_range(-max_numerator..=max_numerator);
        let denom = rng.gen_range(1..=max_denominator);
        elements.insert(Rational::from_fraction(numer, denom));
    }
    RealSet::new(elements)
}
