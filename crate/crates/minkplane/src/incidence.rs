//! The line family, its pairwise intersections in the `z > 0` half-space,
//! null-plane bookkeeping, rich/poor classification, dyadic buckets, and the
//! audit of the incidence-theorem hypotheses.
//!
//! For an `N`-point set the family has exactly `N^2` lines, one per ordered
//! point pair. Two distinct lines `l_ps`, `l_qt` lie in a common plane of the
//! form `x + a*z = b` exactly when `p1 = q1` and `s1 = t1`, and in a common
//! `y + c*z = d` plane exactly when `p2 = q2` and `s2 = t2`; both
//! coplanarities force the transported pair to have zero area, which is why
//! the refined multiplicity `n*` discounts them. The central bookkeeping
//! identity, checked against the `minkowski` module, is
//! `4 * sum_sigma n*(sigma) = Q`: one factor 2 because transport orients each
//! quadruple, one factor 2 because `n*` counts unordered line pairs.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::geom::{Plane3, SpacePoint};
use crate::isometry::IsoLine;
use crate::minkowski::{quadruple_energy, PointSet};
use crate::rational::Rational;
use crate::Error;

/// All `N^2` transport lines of a point set, indexed by
/// `source_index * N + target_index`.
#[derive(Clone, Debug)]
pub struct LineFamily {
    lines: Vec<IsoLine>,
    n_points: usize,
}

impl LineFamily {
    pub fn lines(&self) -> &[IsoLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn source_index(&self, line: usize) -> usize {
        line / self.n_points
    }

    pub fn target_index(&self, line: usize) -> usize {
        line % self.n_points
    }
}

/// Builds the family and verifies that its lines are pairwise distinct as
/// geometric lines, which holds whenever the points are distinct.
pub fn build_line_family(ps: &PointSet) -> LineFamily {
    let mut lines = Vec::with_capacity(ps.len() * ps.len());
    for p in ps.iter() {
        for s in ps.iter() {
            lines.push(IsoLine::new(p.clone(), s.clone()));
        }
    }
    let distinct: BTreeSet<&IsoLine> = lines.iter().collect();
    assert_eq!(
        distinct.len(),
        lines.len(),
        "line family contains coincident lines"
    );
    LineFamily {
        lines,
        n_points: ps.len(),
    }
}

/// Intersection of the two underlying infinite lines, any height.
fn intersect_unbounded(l1: &IsoLine, l2: &IsoLine) -> Result<Option<SpacePoint>, Error> {
    if l1 == l2 {
        return Err(Error::IdenticalLines);
    }
    let (p, s) = (&l1.source, &l1.target);
    let (q, t) = (&l2.source, &l2.target);
    // x-equations: x + p1*z = s1 and x + q1*z = t1.
    let det_x = &q.x1 - &p.x1;
    if !det_x.is_zero() {
        let z = &(&t.x1 - &s.x1) / &det_x;
        let y1 = &p.x2 - &s.x2 * &z;
        let y2 = &q.x2 - &t.x2 * &z;
        if y1 != y2 {
            return Ok(None);
        }
        let x = &s.x1 - &p.x1 * &z;
        return Ok(Some(SpacePoint::new(x, y1, z)));
    }
    if s.x1 != t.x1 {
        // Parallel x-constraints.
        return Ok(None);
    }
    // Shared x-line; y-equations: y + s2*z = p2 and y + t2*z = q2.
    let det_y = &t.x2 - &s.x2;
    if det_y.is_zero() {
        // s2 = t2 as well; distinct lines then differ in p2: parallel.
        return Ok(None);
    }
    let z = &(&q.x2 - &p.x2) / &det_y;
    let y = &p.x2 - &s.x2 * &z;
    let x = &s.x1 - &p.x1 * &z;
    Ok(Some(SpacePoint::new(x, y, z)))
}

/// The unique common point of two distinct lines in the `z > 0` half-space,
/// or `None` when the lines are parallel, skew, or meet only at `z <= 0`.
pub fn intersect(l1: &IsoLine, l2: &IsoLine) -> Result<Option<SpacePoint>, Error> {
    Ok(intersect_unbounded(l1, l2)?.filter(|sigma| sigma.z.is_positive()))
}

/// An intersection point with its incident lines and multiplicities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidencePoint {
    pub sigma: SpacePoint,
    /// Sorted indices of incident lines; always at least two.
    pub incident: Vec<u32>,
    /// `n(sigma)`: unordered pairs of distinct incident lines.
    pub n_pairs: u64,
    /// `n*(sigma)`: incident pairs not sharing a null-type plane. Zero until
    /// [`refined_multiplicities`] runs.
    pub n_star: u64,
    /// Lines transverse to the designated rich plane (all, when none).
    pub k_perp: u32,
    /// Lines inside the designated rich plane.
    pub k_par: u32,
    /// Dyadic bucket: the power of two `k` with `k <= |incident| < 2k`.
    pub bucket: u32,
}

/// All pairwise intersections, grouped by exact coordinates and ordered
/// lexicographically by `(z, x, y)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceStructure {
    pub points: Vec<IncidencePoint>,
    pub n_points: usize,
    pub n_lines: usize,
}

impl IncidenceStructure {
    pub fn max_concurrency(&self) -> usize {
        self.points.iter().map(|p| p.incident.len()).max().unwrap_or(0)
    }

    pub fn n_sum(&self) -> u64 {
        self.points.iter().map(|p| p.n_pairs).sum()
    }

    pub fn n_star_sum(&self) -> u64 {
        self.points.iter().map(|p| p.n_star).sum()
    }
}

fn dyadic_bucket(multiplicity: usize) -> u32 {
    debug_assert!(multiplicity >= 2);
    let mut k = 2u32;
    while (2 * k as usize) <= multiplicity {
        k *= 2;
    }
    k
}

/// Dyadic values `2, 4, ..., <= n`.
pub fn dyadic_ks(n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut k = 2u32;
    while k as usize <= n {
        out.push(k);
        k *= 2;
    }
    out
}

/// Computes every pairwise intersection with `z > 0`. The pair loop fans out
/// across the current rayon pool; the merge is a key-wise set union, so the
/// result does not depend on the worker count.
pub fn all_intersections(family: &LineFamily) -> IncidenceStructure {
    let lines = family.lines();
    let m = lines.len();
    let merged: BTreeMap<SpacePoint, BTreeSet<u32>> = (0..m)
        .into_par_iter()
        .fold(
            BTreeMap::new,
            |mut acc: BTreeMap<SpacePoint, BTreeSet<u32>>, i| {
                for j in (i + 1)..m {
                    let hit = intersect(&lines[i], &lines[j]).expect("family lines are distinct");
                    if let Some(sigma) = hit {
                        let entry = acc.entry(sigma).or_default();
                        entry.insert(i as u32);
                        entry.insert(j as u32);
                    }
                }
                acc
            },
        )
        .reduce(BTreeMap::new, |mut a, b| {
            for (sigma, set) in b {
                a.entry(sigma).or_default().extend(set);
            }
            a
        });
    let points = merged
        .into_iter()
        .map(|(sigma, set)| {
            let incident: Vec<u32> = set.into_iter().collect();
            let count = incident.len() as u64;
            IncidencePoint {
                sigma,
                n_pairs: count * (count - 1) / 2,
                n_star: 0,
                k_perp: incident.len() as u32,
                k_par: 0,
                bucket: dyadic_bucket(incident.len()),
                incident,
            }
        })
        .collect();
    IncidenceStructure {
        points,
        n_points: family.n_points,
        n_lines: m,
    }
}

/// The two planes of null type containing a line: the vertical-type plane
/// `x + p1*z = s1` and the horizontal-type plane `y + s2*z = p2`.
pub fn rich_plane_candidates(l: &IsoLine) -> (Plane3, Plane3) {
    (
        Plane3::vertical(l.source.x1.clone(), l.target.x1.clone()),
        Plane3::horizontal(l.target.x2.clone(), l.source.x2.clone()),
    )
}

/// Exact containment test of a line in a plane: with the line parameters
/// `(p, s)` this is `alpha*p1 + beta*s2 = gamma` and
/// `alpha*s1 + beta*p2 = delta`; it can never hold when `alpha = beta = 0`.
pub fn lies_in_plane(l: &IsoLine, plane: &Plane3) -> bool {
    *plane.gamma() == plane.alpha() * &l.source.x1 + plane.beta() * &l.target.x2
        && *plane.delta() == plane.alpha() * &l.target.x1 + plane.beta() * &l.source.x2
}

/// Number of family lines contained in a plane.
pub fn coplanar_count(plane: &Plane3, family: &LineFamily) -> usize {
    family.lines().iter().filter(|l| lies_in_plane(l, plane)).count()
}

pub fn lines_share_vertical_plane(l1: &IsoLine, l2: &IsoLine) -> bool {
    l1.source.x1 == l2.source.x1 && l1.target.x1 == l2.target.x1
}

pub fn lines_share_horizontal_plane(l1: &IsoLine, l2: &IsoLine) -> bool {
    l1.source.x2 == l2.source.x2 && l1.target.x2 == l2.target.x2
}

/// A distinct coordinate value with its point count and richness label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateLabel {
    pub value: Rational,
    pub count: usize,
    /// More than `2*sqrt(N)` points share the value, tested in integers as
    /// `count^2 > 4N`.
    pub rich: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateLabels {
    pub abscissae: Vec<CoordinateLabel>,
    pub ordinates: Vec<CoordinateLabel>,
}

pub fn classify_coordinates(ps: &PointSet) -> CoordinateLabels {
    let n = ps.len() as u128;
    let classify = |select: fn(&crate::geom::PlanePoint) -> &Rational| {
        let mut counts: BTreeMap<&Rational, usize> = BTreeMap::new();
        for p in ps.iter() {
            *counts.entry(select(p)).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|(value, count)| CoordinateLabel {
                value: value.clone(),
                count,
                rich: (count as u128) * (count as u128) > 4 * n,
            })
            .collect()
    };
    CoordinateLabels {
        abscissae: classify(|p| &p.x1),
        ordinates: classify(|p| &p.x2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitCase {
    /// At least a quarter of the points have one rich and one poor
    /// coordinate.
    OneRichOnePoor,
    /// At least a quarter of the points have both coordinates poor.
    BothPoor,
}

#[derive(Clone, Debug)]
pub struct CaseSplit {
    pub case: SplitCase,
    /// Witness subset with at least `N/4` points. When the rich coordinate
    /// was the ordinate the witness is reflected so that downstream rich
    /// planes are always the vertical type.
    pub witness: PointSet,
    pub reflected: bool,
    pub both_rich_count: usize,
}

pub fn case_split(ps: &PointSet) -> CaseSplit {
    let labels = classify_coordinates(ps);
    let rich_x: BTreeSet<&Rational> = labels
        .abscissae
        .iter()
        .filter(|l| l.rich)
        .map(|l| &l.value)
        .collect();
    let rich_y: BTreeSet<&Rational> = labels
        .ordinates
        .iter()
        .filter(|l| l.rich)
        .map(|l| &l.value)
        .collect();

    let mut x_rich_only = Vec::new();
    let mut y_rich_only = Vec::new();
    let mut both_poor = Vec::new();
    let mut both_rich = 0usize;
    for p in ps.iter() {
        match (rich_x.contains(&p.x1), rich_y.contains(&p.x2)) {
            (true, true) => both_rich += 1,
            (true, false) => x_rich_only.push(p.clone()),
            (false, true) => y_rich_only.push(p.clone()),
            (false, false) => both_poor.push(p.clone()),
        }
    }
    // Distinct points occupy distinct (abscissa, ordinate) cells, so fewer
    // than a quarter can have both coordinates rich.
    debug_assert!(4 * both_rich < ps.len());

    let (case, points, reflected) =
        if both_poor.len() >= x_rich_only.len() && both_poor.len() >= y_rich_only.len() {
            (SplitCase::BothPoor, both_poor, false)
        } else if x_rich_only.len() >= y_rich_only.len() {
            (SplitCase::OneRichOnePoor, x_rich_only, false)
        } else {
            let reflected_points = y_rich_only.iter().map(|p| p.swapped()).collect();
            (SplitCase::OneRichOnePoor, reflected_points, true)
        };
    let witness = PointSet::new(points).expect("witness class is nonempty and distinct");
    assert!(
        4 * witness.len() >= ps.len(),
        "witness below the quarter bound"
    );
    CaseSplit {
        case,
        witness,
        reflected,
        both_rich_count: both_rich,
    }
}

/// A vertical-type plane holding many family lines.
#[derive(Clone, Debug)]
pub struct RichPlaneRecord {
    pub plane: Plane3,
    /// Source abscissa `a` of the plane `x + a*z = b`.
    pub source_abscissa: Rational,
    /// Target abscissa `b`.
    pub target_abscissa: Rational,
    pub line_indices: Vec<u32>,
    /// Dyadic `k` values for which the plane holds more than `N*k` lines.
    pub k_rich_for: Vec<u32>,
}

fn vertical_plane_groups(family: &LineFamily) -> BTreeMap<(Rational, Rational), Vec<u32>> {
    let mut groups: BTreeMap<(Rational, Rational), Vec<u32>> = BTreeMap::new();
    for (idx, l) in family.lines().iter().enumerate() {
        groups
            .entry((l.source.x1.clone(), l.target.x1.clone()))
            .or_default()
            .push(idx as u32);
    }
    groups
}

/// Every vertical-type plane that is `k`-rich for at least one dyadic `k`,
/// in canonical `(a, b)` order.
pub fn rich_plane_table(family: &LineFamily) -> Vec<RichPlaneRecord> {
    let n = family.n_points();
    let ks = dyadic_ks(n);
    vertical_plane_groups(family)
        .into_iter()
        .filter_map(|((a, b), line_indices)| {
            let k_rich_for: Vec<u32> = ks
                .iter()
                .copied()
                .filter(|&k| line_indices.len() > n * k as usize)
                .collect();
            if k_rich_for.is_empty() {
                return None;
            }
            Some(RichPlaneRecord {
                plane: Plane3::vertical(a.clone(), b.clone()),
                source_abscissa: a,
                target_abscissa: b,
                line_indices,
                k_rich_for,
            })
        })
        .collect()
}

/// The vertical-type planes holding more than `N*k` lines; `k` must be a
/// dyadic integer at least 2. Also checks the plane-count bound
/// `m * k <= N`.
pub fn k_rich_planes(family: &LineFamily, k: u32) -> Vec<RichPlaneRecord> {
    assert!(k >= 2 && k.is_power_of_two(), "k must be dyadic, got {k}");
    let n = family.n_points();
    let records: Vec<RichPlaneRecord> = rich_plane_table(family)
        .into_iter()
        .filter(|r| r.k_rich_for.contains(&k))
        .collect();
    assert!(
        records.len() * k as usize <= n,
        "k-rich plane count {} exceeds N/k for N={n}, k={k}",
        records.len()
    );
    records
}

/// Fills `n*`, `k_perp`, and `k_par` for every intersection point.
///
/// `n*` discounts incident pairs sharing a null-type plane of either
/// orientation. `k_perp`/`k_par` are taken relative to the designated rich
/// plane: the first `k`-rich plane (for the point's own bucket `k`, in
/// canonical order) containing the point, if any.
pub fn refined_multiplicities(
    structure: &mut IncidenceStructure,
    family: &LineFamily,
    rich_planes: &[RichPlaneRecord],
) {
    let lines = family.lines();
    for pt in &mut structure.points {
        let inc = &pt.incident;
        let mut discounted = 0u64;
        for a in 0..inc.len() {
            let la = &lines[inc[a] as usize];
            for b in (a + 1)..inc.len() {
                let lb = &lines[inc[b] as usize];
                if lines_share_vertical_plane(la, lb) || lines_share_horizontal_plane(la, lb) {
                    discounted += 1;
                }
            }
        }
        pt.n_star = pt.n_pairs - discounted;

        let designated = rich_planes.iter().find(|rp| {
            rp.k_rich_for.contains(&pt.bucket) && rp.plane.contains_point(&pt.sigma)
        });
        let k_par = match designated {
            Some(rp) => inc
                .iter()
                .filter(|&&li| {
                    let l = &lines[li as usize];
                    l.source.x1 == rp.source_abscissa && l.target.x1 == rp.target_abscissa
                })
                .count(),
            None => 0,
        };
        pt.k_par = k_par as u32;
        pt.k_perp = (inc.len() - k_par) as u32;
    }
}

/// Buckets the points by dyadic multiplicity: point indices with
/// `k <= |incident| < 2k` land in bucket `k`. The buckets partition the
/// points.
pub fn dyadic_buckets(structure: &IncidenceStructure) -> BTreeMap<u32, Vec<usize>> {
    let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (idx, pt) in structure.points.iter().enumerate() {
        buckets.entry(pt.bucket).or_default().push(idx);
    }
    buckets
}

/// Per-plane stratification of one bucket.
#[derive(Clone, Debug)]
pub struct PlaneStratum {
    pub plane: Plane3,
    /// Bucket points of the rich class lying in the plane.
    pub members: Vec<usize>,
    /// Members with strictly more than half of their lines transverse.
    pub transverse: Vec<usize>,
    /// The rest; ties go to the parallel class.
    pub parallel: Vec<usize>,
}

/// The poor/rich split of one bucket and its per-plane strata.
#[derive(Clone, Debug)]
pub struct Stratification {
    pub k: u32,
    /// Bucket points with fewer than `k/2` incident `k`-rich lines.
    pub poor: Vec<usize>,
    /// Bucket points with at least `k/2` incident `k`-rich lines; ties go
    /// here.
    pub rich: Vec<usize>,
    pub planes: Vec<PlaneStratum>,
}

pub fn stratify(
    structure: &IncidenceStructure,
    family: &LineFamily,
    rich_planes: &[RichPlaneRecord],
    k: u32,
) -> Stratification {
    assert!(k >= 2 && k.is_power_of_two(), "k must be dyadic, got {k}");
    let lines = family.lines();
    let k_planes: Vec<&RichPlaneRecord> = rich_planes
        .iter()
        .filter(|rp| rp.k_rich_for.contains(&k))
        .collect();
    let rich_keys: BTreeSet<(&Rational, &Rational)> = k_planes
        .iter()
        .map(|rp| (&rp.source_abscissa, &rp.target_abscissa))
        .collect();
    let line_is_rich = |li: u32| {
        let l = &lines[li as usize];
        rich_keys.contains(&(&l.source.x1, &l.target.x1))
    };

    let mut poor = Vec::new();
    let mut rich = Vec::new();
    for (idx, pt) in structure.points.iter().enumerate() {
        if pt.bucket != k {
            continue;
        }
        let rich_count = pt.incident.iter().filter(|&&li| line_is_rich(li)).count();
        if 2 * rich_count >= k as usize {
            rich.push(idx);
        } else {
            poor.push(idx);
        }
    }

    let planes = k_planes
        .into_iter()
        .map(|rp| {
            let members: Vec<usize> = rich
                .iter()
                .copied()
                .filter(|&idx| rp.plane.contains_point(&structure.points[idx].sigma))
                .collect();
            let mut transverse = Vec::new();
            let mut parallel = Vec::new();
            for &idx in &members {
                let pt = &structure.points[idx];
                let in_plane = pt
                    .incident
                    .iter()
                    .filter(|&&li| {
                        let l = &lines[li as usize];
                        l.source.x1 == rp.source_abscissa && l.target.x1 == rp.target_abscissa
                    })
                    .count();
                if 2 * (pt.incident.len() - in_plane) > pt.incident.len() {
                    transverse.push(idx);
                } else {
                    parallel.push(idx);
                }
            }
            PlaneStratum {
                plane: rp.plane.clone(),
                members,
                transverse,
                parallel,
            }
        })
        .collect();

    Stratification {
        k,
        poor,
        rich,
        planes,
    }
}

/// `sum_sigma n*(sigma)` over the whole structure.
pub fn incidence_energy(structure: &IncidenceStructure) -> u64 {
    structure.n_star_sum()
}

type Vec3 = (Rational, Rational, Rational);

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    (
        &a.1 * &b.2 - &a.2 * &b.1,
        &a.2 * &b.0 - &a.0 * &b.2,
        &a.0 * &b.1 - &a.1 * &b.0,
    )
}

fn is_zero_vec(v: &Vec3) -> bool {
    v.0.is_zero() && v.1.is_zero() && v.2.is_zero()
}

/// The plane spanned by two distinct lines: through their intersection (of
/// the underlying infinite lines) or through both when parallel; `None` for
/// skew pairs.
pub fn plane_spanned_by(l1: &IsoLine, l2: &IsoLine) -> Result<Option<Plane3>, Error> {
    let d1 = l1.direction();
    let d2 = l2.direction();
    if let Some(sigma) = intersect_unbounded(l1, l2)? {
        let n = cross(&d1, &d2);
        let delta = &n.0 * &sigma.x + &n.1 * &sigma.y + &n.2 * &sigma.z;
        return Ok(Some(Plane3::new(n.0, n.1, n.2, delta).expect(
            "intersecting distinct lines have independent directions",
        )));
    }
    if !is_zero_vec(&cross(&d1, &d2)) {
        return Ok(None); // skew
    }
    // Parallel distinct lines.
    let one = Rational::one();
    let a1 = l1.point_at(&one)?;
    let a2 = l2.point_at(&one)?;
    let w = (&a2.x - &a1.x, &a2.y - &a1.y, Rational::zero());
    let n = cross(&d1, &w);
    let delta = &n.0 * &a1.x + &n.1 * &a1.y + &n.2 * &a1.z;
    Ok(Some(Plane3::new(n.0, n.1, n.2, delta).expect(
        "parallel distinct lines span a plane",
    )))
}

/// Per-bucket audit numbers. Ratio fields are floating point, computed at
/// report time only.
#[derive(Clone, Debug, Serialize)]
pub struct KAudit {
    pub k: u32,
    pub bucket_size: usize,
    pub poor_size: usize,
    pub rich_size: usize,
    pub n_star_sum: u64,
    pub rich_plane_count: usize,
    /// `m * k <= N`.
    pub plane_count_bound_ok: bool,
    /// `|X_i_perp| * k <= 2 * N^2` for every k-rich plane.
    pub transverse_bound_ok: bool,
    /// `|S_k| * k^2 / N^3` (float, diagnostic only).
    pub bucket_ratio_float: f64,
    /// `sum_{S_k} n* / N^3` (float, diagnostic only).
    pub n_star_ratio_float: f64,
}

/// Checks of the incidence-theorem hypotheses and the monitored ratios.
#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub n_points: usize,
    pub n_lines: usize,
    pub max_concurrency: usize,
    /// At most `N` lines are concurrent.
    pub concurrency_bound_ok: bool,
    /// At every point the incident lines have pairwise distinct sources.
    pub source_injectivity_ok: bool,
    /// Number of line pairs sampled for the spanned-plane check.
    pub planes_sampled: usize,
    pub generic_plane_max_lines: usize,
    /// Every sampled plane with `alpha*beta != 0` holds at most `N` lines.
    pub generic_plane_bound_ok: bool,
    pub per_k: Vec<KAudit>,
}

pub fn guth_katz_audit(
    family: &LineFamily,
    structure: &IncidenceStructure,
    strata: &[Stratification],
    plane_sample_cap: usize,
) -> AuditReport {
    let n = family.n_points();
    let max_concurrency = structure.max_concurrency();

    let source_injectivity_ok = structure.points.iter().all(|pt| {
        let sources: BTreeSet<usize> = pt
            .incident
            .iter()
            .map(|&li| family.source_index(li as usize))
            .collect();
        sources.len() == pt.incident.len()
    });

    let mut planes_sampled = 0usize;
    let mut generic_max = 0usize;
    let mut generic_ok = true;
    'outer: for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            if planes_sampled >= plane_sample_cap {
                break 'outer;
            }
            let lines = family.lines();
            if let Some(plane) =
                plane_spanned_by(&lines[i], &lines[j]).expect("family lines are distinct")
            {
                planes_sampled += 1;
                if !plane.alpha().is_zero() && !plane.beta().is_zero() {
                    let count = coplanar_count(&plane, family);
                    generic_max = generic_max.max(count);
                    generic_ok &= count <= n;
                }
            }
        }
    }

    let n_cubed = (n as f64).powi(3);
    let per_k = strata
        .iter()
        .map(|st| {
            let bucket_size = st.poor.len() + st.rich.len();
            let n_star_sum: u64 = st
                .poor
                .iter()
                .chain(st.rich.iter())
                .map(|&idx| structure.points[idx].n_star)
                .sum();
            let transverse_bound_ok = st.planes.iter().all(|ps| {
                ps.transverse.len() as u64 * st.k as u64 <= 2 * (n as u64) * (n as u64)
            });
            KAudit {
                k: st.k,
                bucket_size,
                poor_size: st.poor.len(),
                rich_size: st.rich.len(),
                n_star_sum,
                rich_plane_count: st.planes.len(),
                plane_count_bound_ok: st.planes.len() * st.k as usize <= n,
                transverse_bound_ok,
                bucket_ratio_float: bucket_size as f64 * (st.k as f64).powi(2) / n_cubed,
                n_star_ratio_float: n_star_sum as f64 / n_cubed,
            }
        })
        .collect();

    AuditReport {
        n_points: n,
        n_lines: family.len(),
        max_concurrency,
        concurrency_bound_ok: max_concurrency <= n,
        source_injectivity_ok,
        planes_sampled,
        generic_plane_max_lines: generic_max,
        generic_plane_bound_ok: generic_ok,
        per_k,
    }
}

/// The exact bookkeeping identity `4 * sum n* = Q`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub q_energy: u64,
    pub n_star_sum: u64,
    pub holds: bool,
}

/// Output of the full pipeline on one point set.
#[derive(Clone, Debug)]
pub struct IncidenceAnalysis {
    pub family: LineFamily,
    pub structure: IncidenceStructure,
    pub labels: CoordinateLabels,
    pub case: CaseSplit,
    pub rich_planes: Vec<RichPlaneRecord>,
    pub buckets: BTreeMap<u32, Vec<usize>>,
    pub strata: Vec<Stratification>,
    pub audit: AuditReport,
    pub identity: IdentityCheck,
}

/// Runs the whole pipeline: line family, intersections, refinement, buckets,
/// stratification, audit, and the energy identity.
pub fn analyze(ps: &PointSet, plane_sample_cap: usize) -> IncidenceAnalysis {
    let family = build_line_family(ps);
    let mut structure = all_intersections(&family);
    let rich_planes = rich_plane_table(&family);
    refined_multiplicities(&mut structure, &family, &rich_planes);
    let buckets = dyadic_buckets(&structure);
    let strata: Vec<Stratification> = dyadic_ks(ps.len())
        .into_iter()
        .map(|k| stratify(&structure, &family, &rich_planes, k))
        .collect();
    let audit = guth_katz_audit(&family, &structure, &strata, plane_sample_cap);
    let q_energy = quadruple_energy(ps);
    let n_star_sum = structure.n_star_sum();
    IncidenceAnalysis {
        labels: classify_coordinates(ps),
        case: case_split(ps),
        identity: IdentityCheck {
            q_energy,
            n_star_sum,
            holds: 4 * n_star_sum == q_energy,
        },
        family,
        structure,
        rich_planes,
        buckets,
        strata,
        audit,
    }
}
