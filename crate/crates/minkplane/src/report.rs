//! Serialisable report types for the command-line tools.
//!
//! All reports are plain data with deterministic field order; serialising
//! the same analysis twice yields byte-identical JSON. Fields with the
//! `_float` suffix are computed in floating point at report time and are the
//! only inexact values anywhere in the output.

use serde::{Deserialize, Serialize};

use crate::incidence::{AuditReport, IdentityCheck, IncidenceAnalysis, SplitCase};
use crate::minkowski::{cauchy_schwarz_report, distance_set, quadruple_energy, PointSet};
use crate::sumproduct::{
    cross_ratio_sets, direction_count, expander_set, expander_set_via_grid, multiplication_table_size,
    RealSet, Sign,
};

pub const FLOAT_NOTE: &str = "fields ending in _float are inexact, computed at report time";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistancesReport {
    pub note: String,
    pub n: usize,
    /// `|R(P)|`, zero included.
    pub distance_count: usize,
    /// `|R*(P)|`.
    pub nonzero_distance_count: usize,
    /// Whether the points avoid lying on a single horizontal or vertical
    /// line.
    pub hypothesis_ok: bool,
    pub max_null_aligned: usize,
    pub zero_pairs: u64,
    pub nonzero_pairs: u64,
    pub quadruple_energy: u64,
    pub cauchy_schwarz_holds: bool,
    /// `|R(P)| * ln N / N`.
    pub distance_ratio_float: f64,
}

pub fn distances_report(ps: &PointSet) -> DistancesReport {
    let cs = cauchy_schwarz_report(ps);
    let distances = distance_set(ps);
    let n = ps.len();
    DistancesReport {
        note: FLOAT_NOTE.to_string(),
        n,
        distance_count: distances.len(),
        nonzero_distance_count: cs.nonzero_values,
        hypothesis_ok: !ps.on_single_null_line(),
        max_null_aligned: cs.max_null_aligned,
        zero_pairs: cs.zero_pairs,
        nonzero_pairs: cs.nonzero_pairs,
        quadruple_energy: cs.energy,
        cauchy_schwarz_holds: cs.inequality_holds,
        distance_ratio_float: distances.len() as f64 * (n as f64).ln() / n as f64,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaRecord {
    pub x: String,
    pub y: String,
    pub z: String,
    pub incident: Vec<u32>,
    pub n: u64,
    pub n_star: u64,
    pub k_perp: u32,
    pub k_par: u32,
    pub bucket: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct BucketSummary {
    pub k: u32,
    pub count: usize,
    pub poor: usize,
    pub rich: usize,
    pub n_sum: u64,
    pub n_star_sum: u64,
    pub bucket_ratio_float: f64,
    pub n_star_ratio_float: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RichPlaneSummary {
    pub plane: String,
    pub source_abscissa: String,
    pub target_abscissa: String,
    pub line_count: usize,
    pub k_rich_for: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseSummary {
    pub case: SplitCase,
    pub witness_size: usize,
    pub reflected: bool,
    pub both_rich_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceReport {
    pub note: String,
    pub n_points: usize,
    pub n_lines: usize,
    pub intersection_points: usize,
    pub identity: IdentityCheck,
    pub case: CaseSummary,
    pub buckets: Vec<BucketSummary>,
    pub rich_planes: Vec<RichPlaneSummary>,
    pub audit: AuditReport,
    /// Present when the brute-force quadruple enumeration ran.
    pub oracle_quadruple_count: Option<u64>,
    pub oracle_matches: Option<bool>,
    pub points: Vec<SigmaRecord>,
}

pub fn incidence_report(analysis: &IncidenceAnalysis, oracle_count: Option<u64>) -> IncidenceReport {
    let structure = &analysis.structure;
    let points = structure
        .points
        .iter()
        .map(|p| SigmaRecord {
            x: p.sigma.x.to_string(),
            y: p.sigma.y.to_string(),
            z: p.sigma.z.to_string(),
            incident: p.incident.clone(),
            n: p.n_pairs,
            n_star: p.n_star,
            k_perp: p.k_perp,
            k_par: p.k_par,
            bucket: p.bucket,
        })
        .collect();
    let buckets = analysis
        .audit
        .per_k
        .iter()
        .map(|ka| {
            let members = analysis.buckets.get(&ka.k).cloned().unwrap_or_default();
            BucketSummary {
                k: ka.k,
                count: ka.bucket_size,
                poor: ka.poor_size,
                rich: ka.rich_size,
                n_sum: members.iter().map(|&i| structure.points[i].n_pairs).sum(),
                n_star_sum: ka.n_star_sum,
                bucket_ratio_float: ka.bucket_ratio_float,
                n_star_ratio_float: ka.n_star_ratio_float,
            }
        })
        .collect();
    let rich_planes = analysis
        .rich_planes
        .iter()
        .map(|rp| RichPlaneSummary {
            plane: rp.plane.to_string(),
            source_abscissa: rp.source_abscissa.to_string(),
            target_abscissa: rp.target_abscissa.to_string(),
            line_count: rp.line_indices.len(),
            k_rich_for: rp.k_rich_for.clone(),
        })
        .collect();
    IncidenceReport {
        note: FLOAT_NOTE.to_string(),
        n_points: structure.n_points,
        n_lines: structure.n_lines,
        intersection_points: structure.points.len(),
        identity: analysis.identity.clone(),
        case: CaseSummary {
            case: analysis.case.case,
            witness_size: analysis.case.witness.len(),
            reflected: analysis.case.reflected,
            both_rich_count: analysis.case.both_rich_count,
        },
        buckets,
        rich_planes,
        audit: analysis.audit.clone(),
        oracle_quadruple_count: oracle_count,
        oracle_matches: oracle_count.map(|c| c == analysis.identity.q_energy),
        points,
    }
}

/// CSV lines for the per-bucket summary, header included.
pub fn bucket_summary_csv(report: &IncidenceReport) -> String {
    let mut out = String::from(
        "k,count,poor,rich,n_sum,n_star_sum,bucket_ratio_float,n_star_ratio_float\n",
    );
    for b in &report.buckets {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            b.k,
            b.count,
            b.poor,
            b.rich,
            b.n_sum,
            b.n_star_sum,
            b.bucket_ratio_float,
            b.n_star_ratio_float
        ));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub size: u32,
    pub n: usize,
    pub distance_count: usize,
    pub quadruple_energy: u64,
    pub n_star_sum: u64,
    pub distance_ratio_float: f64,
    pub energy_ratio_float: f64,
}

pub fn sweep_row(family: &str, size: u32, ps: &PointSet, n_star_sum: u64) -> SweepRow {
    let n = ps.len();
    let distance_count = distance_set(ps).len();
    let q = quadruple_energy(ps);
    let ln_n = (n as f64).ln();
    SweepRow {
        family: family.to_string(),
        size,
        n,
        distance_count,
        quadruple_energy: q,
        n_star_sum,
        distance_ratio_float: distance_count as f64 * ln_n / n as f64,
        energy_ratio_float: q as f64 / ((n as f64).powi(3) * ln_n),
    }
}

pub const SWEEP_CSV_HEADER: &str =
    "family,size,n,distance_count,quadruple_energy,n_star_sum,distance_ratio_float,energy_ratio_float";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.family,
            r.size,
            r.n,
            r.distance_count,
            r.quadruple_energy,
            r.n_star_sum,
            r.distance_ratio_float,
            r.energy_ratio_float
        ));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpanderEntry {
    pub signs: String,
    pub size: usize,
    pub grid_size: usize,
    pub matches_grid: bool,
    /// Size over `|A||B| / (ln|A| + ln|B|)`.
    pub bound_ratio_float: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicationTableEntry {
    pub n: u32,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SumProductReport {
    pub note: String,
    pub a_size: usize,
    pub b_size: usize,
    pub expanders: Vec<ExpanderEntry>,
    pub directions: usize,
    pub ratio_set_size: usize,
    pub direction_bound_ok: bool,
    pub three_variable_slopes: Option<usize>,
    pub four_variable_cross_ratios: Option<usize>,
    pub multiplication_table: Vec<MultiplicationTableEntry>,
}

pub fn sumproduct_report(a: &RealSet, b: &RealSet) -> SumProductReport {
    let bound = (a.len() * b.len()) as f64 / ((a.len() as f64).ln() + (b.len() as f64).ln());
    let signs = [
        (Sign::Plus, Sign::Plus, "++"),
        (Sign::Plus, Sign::Minus, "+-"),
        (Sign::Minus, Sign::Plus, "-+"),
        (Sign::Minus, Sign::Minus, "--"),
    ];
    let expanders = signs
        .iter()
        .map(|&(s1, s2, label)| {
            let direct = expander_set(a, b, s1, s2);
            let grid = expander_set_via_grid(a, b, s1, s2);
            ExpanderEntry {
                signs: label.to_string(),
                size: direct.len(),
                grid_size: grid.len(),
                matches_grid: direct.iter().cloned().collect::<std::collections::BTreeSet<_>>()
                    == grid,
                bound_ratio_float: direct.len() as f64 / bound,
            }
        })
        .collect();
    let dirs = direction_count(a);
    let ratios = cross_ratio_sets(a);
    let multiplication_table = (1..=a.len() as u32)
        .map(|n| MultiplicationTableEntry {
            n,
            size: multiplication_table_size(n),
        })
        .collect();
    SumProductReport {
        note: FLOAT_NOTE.to_string(),
        a_size: a.len(),
        b_size: b.len(),
        expanders,
        directions: dirs.directions,
        ratio_set_size: dirs.ratio_set_size,
        direction_bound_ok: dirs.directions >= a.len() * a.len(),
        three_variable_slopes: ratios.three_variable,
        four_variable_cross_ratios: ratios.four_variable,
        multiplication_table,
    }
}
