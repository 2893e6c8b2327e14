//! Command-line driver for the exact incidence and sum-product experiments.
//!
//! Every run writes its configuration next to its outputs, and re-running a
//! recorded configuration reproduces the reports byte for byte. The exit
//! status encodes the verification outcome: 0 when all exact checks pass,
//! 3 when an exact identity failed, 4 when the input violates the
//! non-degeneracy hypothesis (all points on one null line).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use minkplane::generators::{generate, Family, FamilySpec};
use minkplane::incidence::analyze;
use minkplane::minkowski::{enumerate_quadruples, PointSet};
use minkplane::report::{
    bucket_summary_csv, distances_report, incidence_report, sumproduct_report, sweep_csv,
    sweep_row, SweepRow,
};
use minkplane::sumproduct::RealSet;

#[derive(Parser)]
#[command(name = "minkplane", version, about = "Exact rectangular-area and line-incidence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
enum Command {
    /// Generate an instance family and write it to the output directory.
    Generate {
        /// grid, random_rational, null_line, rich_abscissa, perturbed_grid,
        /// or progression.
        #[arg(long)]
        family: String,
        /// Primary size parameter (grid side, point count, or set size).
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// Second grid dimension, when it differs from --n.
        #[arg(long)]
        n_b: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Distance-set statistics, hypothesis check, and the Cauchy-Schwarz
    /// report for a point set.
    Distances {
        /// Point set file (JSON array of rational pairs).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Generate the input instead of reading it.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 4)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Full incidence pipeline: line family, intersections, refined counts,
    /// rich planes, buckets, and the audit.
    Incidence {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 4)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point-count cap for the O(N^4) pairwise intersection stage.
        #[arg(long, default_value_t = 64)]
        n_cap: usize,
        /// Cap for the brute-force quadruple oracle.
        #[arg(long, default_value_t = 12)]
        bf_cap: usize,
        /// Worker threads for the intersection stage (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Line pairs sampled for the spanned-plane audit.
        #[arg(long, default_value_t = 200)]
        plane_samples: usize,
        /// json writes the full report; csv additionally writes the
        /// per-bucket summary table.
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a family over a range of sizes and emit one CSV row per size.
    Sweep {
        #[arg(long)]
        family: String,
        /// Inclusive range "2..8" or list "2,3,5"; empty means no rows.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        n_cap: usize,
        #[arg(long, default_value_t = 12)]
        bf_cap: usize,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Expander sizes with their grid cross-checks, direction counts,
    /// cross-ratio set sizes, and the multiplication-table curve.
    Sumproduct {
        /// Real set A (JSON array of rational literals).
        #[arg(long)]
        input: PathBuf,
        /// Real set B; defaults to A.
        #[arg(long)]
        input_b: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-run a recorded configuration file.
    Rerun {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Serialize, Deserialize)]
struct RunConfig {
    #[serde(flatten)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Outcome {
    Pass,
    IdentityFailed,
    HypothesisViolated,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::IdentityFailed) => ExitCode::from(3),
        Ok(Outcome::HypothesisViolated) => ExitCode::from(4),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Rerun { config } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let recorded: RunConfig = serde_json::from_str(&text).context("parsing run config")?;
            dispatch(recorded.command)
        }
        other => run(other),
    }
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn write_config(dir: &Path, command: &Command) -> Result<()> {
    let config = RunConfig {
        command: command.clone(),
    };
    let mut text = serde_json::to_string_pretty(&config)?;
    text.push('\n');
    write_out(dir, "run_config.json", &text)?;
    Ok(())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_out(dir, name, &text)
}

fn load_point_set(
    input: &Option<PathBuf>,
    family: &Option<String>,
    n: u32,
    seed: u64,
) -> Result<PointSet> {
    match (input, family) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(PointSet::from_json_str(&text)?)
        }
        (None, Some(name)) => {
            let family: Family = name.parse()?;
            let spec = FamilySpec::new(family, n, seed);
            generate(&spec)?
                .into_points()
                .ok_or_else(|| anyhow::anyhow!("family {name} generates a real set, not points"))
        }
        (Some(_), Some(_)) => bail!("pass either --input or --family, not both"),
        (None, None) => bail!("an input is required: pass --input PATH or --family NAME"),
    }
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .context("building worker pool")?;
            Ok(pool.install(f))
        }
    }
}

fn parse_sizes(text: &str) -> Result<Vec<u32>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((lo, hi)) = trimmed.split_once("..") {
        let lo: u32 = lo.trim().parse().context("range start")?;
        let hi: u32 = hi.trim().parse().context("range end")?;
        if lo > hi {
            bail!("empty size range {trimmed:?}");
        }
        return Ok((lo..=hi).collect());
    }
    trimmed
        .split(',')
        .map(|part| part.trim().parse::<u32>().context("size list entry"))
        .collect()
}

fn run(command: Command) -> Result<Outcome> {
    match &command {
        Command::Generate {
            family,
            n,
            n_b,
            seed,
            out,
        } => {
            let parsed: Family = family.parse()?;
            let mut spec = FamilySpec::new(parsed, *n, *seed);
            spec.size_b = *n_b;
            match generate(&spec)? {
                minkplane::generators::Generated::Points(ps) => {
                    let mut text = ps.to_json_string();
                    text.push('\n');
                    let path = write_out(out, "pointset.json", &text)?;
                    println!("wrote {} points to {}", ps.len(), path.display());
                }
                minkplane::generators::Generated::Reals(rs) => {
                    let mut text = rs.to_json_string();
                    text.push('\n');
                    let path = write_out(out, "realset.json", &text)?;
                    println!("wrote {} reals to {}", rs.len(), path.display());
                }
            }
            write_config(out, &command)?;
            Ok(Outcome::Pass)
        }

        Command::Distances {
            input,
            family,
            n,
            seed,
            out,
        } => {
            let ps = load_point_set(input, family, *n, *seed)?;
            let report = distances_report(&ps);
            write_json(out, "distances_report.json", &report)?;
            write_config(out, &command)?;
            println!(
                "N={} |R(P)|={} |R*(P)|={} Q={} ratio_float={:.6}",
                report.n,
                report.distance_count,
                report.nonzero_distance_count,
                report.quadruple_energy,
                report.distance_ratio_float
            );
            if !report.cauchy_schwarz_holds {
                println!("FAIL: Cauchy-Schwarz inequality violated");
                return Ok(Outcome::IdentityFailed);
            }
            if !report.hypothesis_ok {
                println!("warning: all points lie on a single horizontal or vertical line");
                return Ok(Outcome::HypothesisViolated);
            }
            Ok(Outcome::Pass)
        }

        Command::Incidence {
            input,
            family,
            n,
            seed,
            n_cap,
            bf_cap,
            workers,
            plane_samples,
            format,
            out,
        } => {
            let ps = load_point_set(input, family, *n, *seed)?;
            if ps.len() > *n_cap {
                bail!(
                    "point count {} exceeds --n-cap {}; the intersection stage is O(N^4), raise the cap only deliberately",
                    ps.len(),
                    n_cap
                );
            }
            let samples = *plane_samples;
            let analysis = {
                let ps = ps.clone();
                with_pool(*workers, move || analyze(&ps, samples))?
            };
            let oracle_count = if ps.len() <= *bf_cap {
                Some(enumerate_quadruples(&ps, *bf_cap)?.len() as u64)
            } else {
                None
            };
            let report = incidence_report(&analysis, oracle_count);
            write_json(out, "incidence_report.json", &report)?;
            if format == "csv" {
                write_out(out, "per_k.csv", &bucket_summary_csv(&report))?;
            }
            write_config(out, &command)?;
            println!(
                "N={} lines={} points={} sum_n*={} Q={} identity={}",
                report.n_points,
                report.n_lines,
                report.intersection_points,
                report.identity.n_star_sum,
                report.identity.q_energy,
                if report.identity.holds { "ok" } else { "FAIL" }
            );
            let audit_ok = report.audit.concurrency_bound_ok
                && report.audit.source_injectivity_ok
                && report.audit.generic_plane_bound_ok
                && report
                    .audit
                    .per_k
                    .iter()
                    .all(|k| k.plane_count_bound_ok && k.transverse_bound_ok);
            let oracle_ok = report.oracle_matches.unwrap_or(true);
            if report.identity.holds && audit_ok && oracle_ok {
                Ok(Outcome::Pass)
            } else {
                println!("FAIL: an exact identity or bound was violated");
                Ok(Outcome::IdentityFailed)
            }
        }

        Command::Sweep {
            family,
            sizes,
            seed,
            n_cap,
            bf_cap,
            workers,
            out,
        } => {
            let parsed: Family = family.parse()?;
            let sizes = parse_sizes(sizes)?;
            let mut rows: Vec<SweepRow> = Vec::new();
            let mut all_ok = true;
            for &size in &sizes {
                let spec = FamilySpec::new(parsed, size, *seed);
                let ps = generate(&spec)?
                    .into_points()
                    .ok_or_else(|| anyhow::anyhow!("family {family} generates real sets"))?;
                if ps.len() > *n_cap {
                    bail!(
                        "size {size} yields {} points, over --n-cap {n_cap}",
                        ps.len()
                    );
                }
                let analysis = {
                    let ps = ps.clone();
                    with_pool(*workers, move || analyze(&ps, 200))?
                };
                all_ok &= analysis.identity.holds;
                if ps.len() <= *bf_cap {
                    let quads = enumerate_quadruples(&ps, *bf_cap)?;
                    all_ok &= quads.len() as u64 == analysis.identity.q_energy;
                }
                rows.push(sweep_row(
                    family,
                    size,
                    &ps,
                    analysis.structure.n_star_sum(),
                ));
                println!(
                    "{family} size={size}: N={} |R|={} Q={} sum_n*={}",
                    rows.last().unwrap().n,
                    rows.last().unwrap().distance_count,
                    rows.last().unwrap().quadruple_energy,
                    rows.last().unwrap().n_star_sum
                );
            }
            write_out(out, "sweep.csv", &sweep_csv(&rows))?;
            write_config(out, &command)?;
            if all_ok {
                Ok(Outcome::Pass)
            } else {
                println!("FAIL: an exact identity was violated during the sweep");
                Ok(Outcome::IdentityFailed)
            }
        }

        Command::Sumproduct {
            input,
            input_b,
            out,
        } => {
            let a = RealSet::from_json_str(
                &fs::read_to_string(input)
                    .with_context(|| format!("reading {}", input.display()))?,
            )?;
            let b = match input_b {
                Some(path) => RealSet::from_json_str(
                    &fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?,
                )?,
                None => a.clone(),
            };
            if a.len() < 2 || b.len() < 2 {
                bail!("expander statistics need at least two elements in each set");
            }
            let report = sumproduct_report(&a, &b);
            write_json(out, "sumproduct_report.json", &report)?;
            write_config(out, &command)?;
            for e in &report.expanders {
                println!(
                    "signs {}: size={} grid={} ratio_float={:.6}",
                    e.signs, e.size, e.grid_size, e.bound_ratio_float
                );
            }
            println!(
                "directions={} ratio_set={} dir_bound={}",
                report.directions, report.ratio_set_size, report.direction_bound_ok
            );
            if report.expanders.iter().all(|e| e.matches_grid) {
                Ok(Outcome::Pass)
            } else {
                println!("FAIL: expander/grid cross-check mismatch");
                Ok(Outcome::IdentityFailed)
            }
        }

        Command::Rerun { .. } => unreachable!("handled by dispatch"),
    }
}
