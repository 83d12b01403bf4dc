use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, ensure, Context, Result};
use netnoise::analysis::{
    bell_slope_table, dimension_table, ghz3_slope_table, threshold_grid, threshold_sweep,
    tree_vs_cluster, x_vs_y, ThresholdFamily,
};
use netnoise::engine::run_plan;
use netnoise::fidelity::Polynomial;
use netnoise::graph::VertexId;
use netnoise::plan::{ManipulationPlan, Strategy};
use netnoise::report::FidelityReport;
use netnoise::topologies::{
    build_resource, plan_bell, plan_ghz3, worst_case_bell_request, Layout, Method, PathStyle,
    Resource, ResourceSpec,
};
use netnoise::validation::{check_cases, small_cases, Mutation, CHECK_PS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig, Sampling};
use crate::output::{write_csv, write_json};

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ValidationFailed,
}

const DEFAULT_SAMPLES: usize = 32;
const DEFAULT_THRESHOLD_FAMILIES: &str = "ghz,1d,2d,3d,tree";

/// Styles tried in order when none is requested: a cornered path unless the
/// targets share all but one coordinate. The X method prefers a stairway,
/// where it needs only six Z measurements.
fn default_paths(res: &Resource, method: Method) -> &'static [PathStyle] {
    match (&res.layout, method) {
        (Layout::Torus { k: 2, .. }, Method::X) => {
            &[PathStyle::Stairway, PathStyle::Corner, PathStyle::Straight]
        }
        (Layout::Torus { k, .. }, _) if *k > 1 => &[PathStyle::Corner, PathStyle::Straight],
        _ => &[PathStyle::Straight],
    }
}

fn plan_any(
    cfg: &RunConfig,
    res: &Resource,
    targets: &[VertexId],
    styles: &[PathStyle],
) -> Result<ManipulationPlan> {
    let mut last = None;
    for &style in styles {
        match make_plan(cfg, res, targets, style) {
            Ok(p) => return Ok(p),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| anyhow!("no path style to try")))
}

fn make_plan(
    cfg: &RunConfig,
    res: &Resource,
    targets: &[VertexId],
    path: PathStyle,
) -> Result<ManipulationPlan> {
    let method = cfg.method.unwrap_or_default();
    Ok(match *targets {
        [a, b] => plan_bell(
            res,
            a,
            b,
            method,
            path,
            cfg.strategy.clone().unwrap_or(Strategy::SideToSide),
        )?,
        [a, b, c] => {
            ensure!(method == Method::Y, "GHZ3 plans use the Y method");
            plan_ghz3(
                res,
                a,
                b,
                c,
                cfg.strategy.clone().unwrap_or(Strategy::OutwardSideToSide),
            )?
        }
        _ => bail!("targets must be two (Bell) or three (GHZ3) qubits"),
    })
}

/// One concrete target choice with its exact fidelity polynomial.
struct Draw {
    targets: Vec<VertexId>,
    plan: ManipulationPlan,
    poly: Polynomial,
}

fn draws(cfg: &RunConfig, res: &Resource) -> Result<Vec<Draw>> {
    let requested = cfg.path.map(|p| vec![p]);
    let defaults = default_paths(res, cfg.method.unwrap_or_default()).to_vec();
    let pairs: Vec<(Vec<VertexId>, Vec<PathStyle>)> = match (&cfg.targets, cfg.sampling) {
        (Some(t), None) => vec![(t.clone(), requested.unwrap_or(defaults))],
        (None, Some(Sampling::Worst) | None) => {
            let (a, b, style) = worst_case_bell_request(res)?;
            let styles = requested.unwrap_or_else(|| {
                let mut s = defaults.clone();
                s.retain(|&x| x != style);
                s.insert(0, style);
                if cfg.method == Some(Method::X) {
                    s.sort_by_key(|&x| x != PathStyle::Stairway);
                }
                s
            });
            vec![(vec![a, b], styles)]
        }
        (None, Some(Sampling::Uniform)) => {
            let ends = res.endpoints();
            ensure!(ends.len() >= 2, "resource has fewer than two endpoints");
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
            let styles = requested.unwrap_or(defaults);
            (0..cfg.samples.unwrap_or(DEFAULT_SAMPLES))
                .map(|_| {
                    let i = rng.gen_range(0..ends.len());
                    let mut j = rng.gen_range(0..ends.len() - 1);
                    if j >= i {
                        j += 1;
                    }
                    (vec![ends[i], ends[j]], styles.clone())
                })
                .collect()
        }
        (Some(_), Some(_)) => bail!("give either explicit targets or a sampling mode, not both"),
    };
    ensure!(!pairs.is_empty(), "no targets to evaluate");
    pairs
        .into_par_iter()
        .map(|(targets, styles)| {
            let plan = plan_any(cfg, res, &targets, &styles)?;
            let poly = run_plan(&res.graph, &plan, 1.0)?.exact();
            Ok(Draw {
                targets,
                plan,
                poly,
            })
        })
        .collect()
}

fn slope_f64(poly: &Polynomial) -> f64 {
    let s = poly.ler_slope();
    *s.numer() as f64 / *s.denom() as f64
}

#[derive(Serialize)]
struct FidelityDoc {
    #[serde(flatten)]
    report: FidelityReport,
    method: Method,
    strategy: Strategy,
    seed: u64,
}

#[derive(Serialize)]
struct FidelityCsvRow {
    p: f64,
    fidelity: f64,
    ler_slope: String,
    t: u64,
    n_inner: usize,
    m_outer: usize,
    seed: u64,
}

#[derive(Serialize)]
struct SampleDraw {
    targets: Vec<VertexId>,
    ler_slope: String,
    fidelity: f64,
}

#[derive(Serialize)]
struct SampleDoc {
    resource: ResourceSpec,
    #[serde(rename = "N")]
    n: u64,
    sampling: Sampling,
    seed: u64,
    samples: usize,
    method: Method,
    p: f64,
    mean_fidelity: f64,
    min_fidelity: f64,
    max_fidelity: f64,
    mean_ler_slope: f64,
    draws: Vec<SampleDraw>,
}

#[derive(Serialize)]
struct SweepRow {
    family: String,
    #[serde(rename = "N")]
    n: u64,
    targets: String,
    p: f64,
    mean_fidelity: f64,
    min_fidelity: f64,
    max_fidelity: f64,
    mean_ler_slope: f64,
    samples: usize,
    seed: u64,
}

struct Summary {
    mean: f64,
    min: f64,
    max: f64,
    mean_slope: f64,
}

fn summarize(draws: &[Draw], p: f64) -> Summary {
    let fs: Vec<f64> = draws.iter().map(|d| d.poly.eval(p)).collect();
    let m = fs.len() as f64;
    Summary {
        mean: fs.iter().sum::<f64>() / m,
        min: fs.iter().copied().fold(f64::INFINITY, f64::min),
        max: fs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_slope: draws.iter().map(|d| slope_f64(&d.poly)).sum::<f64>() / m,
    }
}

fn targets_label(cfg: &RunConfig) -> String {
    match (&cfg.targets, cfg.sampling) {
        (Some(t), _) => t
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("-"),
        (None, Some(Sampling::Uniform)) => "uniform".into(),
        _ => "worst".into(),
    }
}

pub fn fidelity(cfg: &RunConfig) -> Result<Status> {
    let spec = cfg.resource_spec()?;
    let res = build_resource(&spec)?;
    let ps = cfg.ps()?;
    if let Some(path) = &cfg.save_graph {
        std::fs::write(path, res.graph.to_edge_list())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let draws = draws(cfg, &res)?;
    let format = cfg.format.unwrap_or(Format::Json);
    let out = cfg.out.as_deref();

    if cfg.sampling == Some(Sampling::Uniform) {
        let docs: Vec<SampleDoc> = ps
            .iter()
            .map(|&p| {
                let s = summarize(&draws, p);
                SampleDoc {
                    resource: spec.clone(),
                    n: spec.network_size(),
                    sampling: Sampling::Uniform,
                    seed: cfg.seed(),
                    samples: draws.len(),
                    method: cfg.method.unwrap_or_default(),
                    p,
                    mean_fidelity: s.mean,
                    min_fidelity: s.min,
                    max_fidelity: s.max,
                    mean_ler_slope: s.mean_slope,
                    draws: draws
                        .iter()
                        .map(|d| SampleDraw {
                            targets: d.targets.clone(),
                            ler_slope: d.poly.ler_slope().to_string(),
                            fidelity: d.poly.eval(p),
                        })
                        .collect(),
                }
            })
            .collect();
        return match format {
            Format::Json if docs.len() == 1 => write_json(out, &docs[0]),
            Format::Json => write_json(out, &docs),
            Format::Csv => bail!("uniform sampling in CSV is what `sweep` is for"),
        }
        .map(|_| Status::Ok);
    }

    let d = &draws[0];
    let run = run_plan(&res.graph, &d.plan, ps[0])?;
    let docs: Vec<FidelityDoc> = ps
        .iter()
        .map(|&p| {
            let mut r = run.clone();
            r.p = p;
            FidelityDoc {
                report: FidelityReport::new(&res, &d.plan, &r),
                method: cfg.method.unwrap_or_default(),
                strategy: d.plan.strategy.clone(),
                seed: cfg.seed(),
            }
        })
        .collect();
    match format {
        Format::Json if docs.len() == 1 => write_json(out, &docs[0])?,
        Format::Json => write_json(out, &docs)?,
        Format::Csv => {
            let rows: Vec<FidelityCsvRow> = docs
                .iter()
                .map(|d| FidelityCsvRow {
                    p: d.report.p,
                    fidelity: d.report.fidelity,
                    ler_slope: d.report.ler_slope.clone(),
                    t: d.report.t,
                    n_inner: d.report.n_inner,
                    m_outer: d.report.m_outer,
                    seed: d.seed,
                })
                .collect();
            write_csv(out, &rows)?
        }
    }
    Ok(Status::Ok)
}

pub fn sweep(cfg: &RunConfig) -> Result<Status> {
    let ps = cfg.ps()?;
    let mut cfg = cfg.clone();
    if cfg.targets.is_none() && cfg.sampling.is_none() {
        cfg.sampling = Some(Sampling::Uniform);
    }
    let sizes: Vec<Option<u64>> = match &cfg.n_grid {
        Some(g) => {
            ensure!(
                cfg.side.is_none() && cfg.depth.is_none() && cfg.branching.is_none(),
                "--n-grid sets the size; drop --side, --depth and --branching"
            );
            ensure!(!g.is_empty(), "empty --n-grid");
            g.iter().map(|&n| Some(n)).collect()
        }
        None => vec![cfg.n],
    };
    let mut rows = Vec::new();
    for n in sizes {
        let mut c = cfg.clone();
        c.n = n;
        let spec = c.resource_spec()?;
        let res = build_resource(&spec)?;
        let draws = draws(&c, &res)?;
        for &p in &ps {
            let s = summarize(&draws, p);
            rows.push(SweepRow {
                family: spec.family_name().into(),
                n: spec.network_size(),
                targets: targets_label(&c),
                p,
                mean_fidelity: s.mean,
                min_fidelity: s.min,
                max_fidelity: s.max,
                mean_ler_slope: s.mean_slope,
                samples: draws.len(),
                seed: c.seed(),
            });
        }
    }
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(cfg.out.as_deref(), &rows)?,
        Format::Json => write_json(cfg.out.as_deref(), &rows)?,
    }
    Ok(Status::Ok)
}

fn threshold_families(list: &str) -> Result<Vec<ThresholdFamily>> {
    let fams: Vec<ThresholdFamily> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|e| anyhow!("{e}")))
        .collect::<Result<_>>()?;
    ensure!(!fams.is_empty(), "no threshold families given");
    Ok(fams)
}

pub fn threshold(cfg: &RunConfig) -> Result<Status> {
    let fams = threshold_families(cfg.family.as_deref().unwrap_or(DEFAULT_THRESHOLD_FAMILIES))?;
    let grid = cfg.n_grid.clone().unwrap_or_else(threshold_grid);
    ensure!(!grid.is_empty(), "empty --n-grid");
    let rows = threshold_sweep(&fams, &grid)?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(cfg.out.as_deref(), &rows)?,
        Format::Json => write_json(cfg.out.as_deref(), &rows)?,
    }
    Ok(Status::Ok)
}

/// Quarter decades from 10 to 1e6.
fn dimension_grid() -> Vec<f64> {
    (0..=20)
        .map(|i| 10f64.powf(1.0 + i as f64 / 4.0).round())
        .collect()
}

pub fn tables(cfg: &RunConfig) -> Result<Status> {
    let dir: PathBuf = cfg.out.clone().unwrap_or_else(|| PathBuf::from("tables"));
    std::fs::create_dir_all(&dir)?;
    let file = |name: &str| -> PathBuf { dir.join(name) };
    let write = |name: &str, f: &dyn Fn(&Path) -> Result<()>| -> Result<()> {
        let p = file(name);
        f(&p)?;
        eprintln!("wrote {}", p.display());
        Ok(())
    };
    write("optimal_dimension.csv", &|p| {
        write_csv(Some(p), &dimension_table(&dimension_grid(), 10))
    })?;
    let fams = threshold_families(
        cfg.family
            .as_deref()
            .unwrap_or("ghz,1d,2d,3d,tree,2d-bound,3d-bound"),
    )?;
    let grid = cfg.n_grid.clone().unwrap_or_else(threshold_grid);
    write("thresholds.csv", &|p| {
        write_csv(Some(p), &threshold_sweep(&fams, &grid)?)
    })?;
    write("tree_vs_cluster.csv", &|p| {
        write_csv(Some(p), &tree_vs_cluster(2..=20))
    })?;
    write("bell_slopes.csv", &|p| {
        write_csv(Some(p), &bell_slope_table()?)
    })?;
    write("ghz3_slopes.csv", &|p| {
        write_csv(Some(p), &ghz3_slope_table()?)
    })?;
    let eps = cfg.eps.unwrap_or(1e-3);
    write("x_vs_y.csv", &|p| write_csv(Some(p), &x_vs_y(1..=10, eps)?))?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct Failure {
    label: String,
    p: f64,
    engine: f64,
    oracle: f64,
    diff: f64,
}

#[derive(Serialize)]
struct ValidationDoc {
    max_qubits: usize,
    ps: Vec<f64>,
    mutation: bool,
    cases: usize,
    checks: usize,
    tolerance: f64,
    worst_diff: f64,
    failures: Vec<Failure>,
}

pub const VALIDATION_TOLERANCE: f64 = 1e-10;

pub fn validate(cfg: &RunConfig) -> Result<Status> {
    let max_qubits = cfg.max_qubits.unwrap_or(10);
    let ps = cfg
        .p_grid
        .clone()
        .or(cfg.p.map(|p| vec![p]))
        .unwrap_or(CHECK_PS.to_vec());
    let cases = small_cases(max_qubits);
    ensure!(
        !ps.is_empty() && !cases.is_empty(),
        "empty validation matrix (max_qubits {max_qubits}, {} p values)",
        ps.len()
    );
    let mutation = if cfg.mutate == Some(true) {
        Mutation::DropYNeighbours
    } else {
        Mutation::None
    };
    let checks = check_cases(&cases, &ps, mutation)?;
    let failures: Vec<Failure> = checks
        .iter()
        .filter(|c| c.diff().is_nan() || c.diff() > VALIDATION_TOLERANCE)
        .map(|c| Failure {
            label: c.label.clone(),
            p: c.p,
            engine: c.engine,
            oracle: c.oracle,
            diff: c.diff(),
        })
        .collect();
    let doc = ValidationDoc {
        max_qubits,
        ps,
        mutation: mutation != Mutation::None,
        cases: cases.len(),
        checks: checks.len(),
        tolerance: VALIDATION_TOLERANCE,
        worst_diff: checks.iter().map(|c| c.diff()).fold(0.0, f64::max),
        failures,
    };
    if let Some(out) = cfg.out.as_deref() {
        write_json(Some(out), &doc)?;
    }
    for f in doc.failures.iter().take(20) {
        eprintln!(
            "FAIL {} p={}: engine {} oracle {}",
            f.label, f.p, f.engine, f.oracle
        );
    }
    eprintln!(
        "validate: {} cases, {} checks, worst |engine - oracle| = {:.3e}, {} failures",
        doc.cases,
        doc.checks,
        doc.worst_diff,
        doc.failures.len()
    );
    Ok(if doc.failures.is_empty() {
        Status::Ok
    } else {
        Status::ValidationFailed
    })
}
