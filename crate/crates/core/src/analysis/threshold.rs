use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::run_plan;
use crate::error::SpecError;
use crate::fidelity::{bell_exact_poly, Polynomial};
use crate::plan::{ManipulationPlan, Strategy};
use crate::topologies::predict::w_kd;
use crate::topologies::{
    build_resource, plan_bell, worst_case_bell_request, Method, Resource, ResourceSpec,
};

/// Resource family for worst-case Bell thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdFamily {
    Ghz,
    Ring,
    /// Torus of the given dimension, cornered worst-case path.
    Torus(u32),
    /// Straight-line closed form at the worst-case inner length.
    TorusBound(u32),
    Tree,
}

impl fmt::Display for ThresholdFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdFamily::Ghz => write!(f, "ghz"),
            ThresholdFamily::Ring => write!(f, "1d"),
            ThresholdFamily::Torus(k) => write!(f, "{k}d"),
            ThresholdFamily::TorusBound(k) => write!(f, "{k}d-bound"),
            ThresholdFamily::Tree => write!(f, "tree"),
        }
    }
}

impl std::str::FromStr for ThresholdFamily {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let bad = || SpecError::Invalid(format!("unknown threshold family '{s}'"));
        Ok(match s {
            "ghz" => ThresholdFamily::Ghz,
            "1d" => ThresholdFamily::Ring,
            "tree" => ThresholdFamily::Tree,
            _ => {
                let (k, bound) = match s.strip_suffix("d-bound") {
                    Some(k) => (k, true),
                    None => (s.strip_suffix('d').ok_or_else(bad)?, false),
                };
                let k: u32 = k.parse().map_err(|_| bad())?;
                if k < 2 {
                    return Err(bad());
                }
                if bound {
                    ThresholdFamily::TorusBound(k)
                } else {
                    ThresholdFamily::Torus(k)
                }
            }
        })
    }
}

/// The farthest-apart Bell request on a resource of roughly `n` nodes.
#[derive(Debug, Clone)]
pub struct WorstCase {
    pub family: ThresholdFamily,
    /// Node count actually used.
    pub nodes: u64,
    pub inner: u64,
    /// `None` for closed-form rows.
    pub setup: Option<(Resource, ManipulationPlan)>,
    pub poly: Polynomial,
}

fn torus_side(k: u32, n: u64) -> usize {
    ((n as f64).powf(1.0 / k as f64).round() as usize).max(3)
}

fn engine_case(spec: ResourceSpec) -> Result<(Resource, ManipulationPlan, Polynomial), SpecError> {
    let res = build_resource(&spec)?;
    let (a, b, style) = worst_case_bell_request(&res)?;
    let plan = plan_bell(&res, a, b, Method::Y, style, Strategy::SideToSide)?;
    let poly = run_plan(&res.graph, &plan, 1.0)?.exact();
    Ok((res, plan, poly))
}

pub fn worst_case_bell(family: ThresholdFamily, n: u64) -> Result<WorstCase, SpecError> {
    let (spec, inner) = match family {
        ThresholdFamily::Ghz => (
            ResourceSpec::Ghz {
                n: n.max(3) as usize,
            },
            1,
        ),
        ThresholdFamily::Ring => {
            let side = n.max(4) as usize;
            (ResourceSpec::Cluster { k: 1, side }, (side / 2) as u64 - 1)
        }
        ThresholdFamily::Torus(k) => {
            let s = torus_side(k, n);
            (
                ResourceSpec::Cluster {
                    k: k as usize,
                    side: s,
                },
                k as u64 * (s / 2) as u64 - 1,
            )
        }
        ThresholdFamily::TorusBound(k) => {
            let s = torus_side(k, n);
            let inner = k as u64 * (s / 2) as u64 - 1;
            return Ok(WorstCase {
                family,
                nodes: (s as u64).pow(k),
                inner,
                setup: None,
                poly: bell_exact_poly(&w_kd(k as u64, inner)),
            });
        }
        ThresholdFamily::Tree => {
            let d = ((((n + 1) as f64).log2() - 1.0).round() as usize).max(2);
            (ResourceSpec::binary_tree(d), 2 * d as u64 - 3)
        }
    };
    let nodes = spec.network_size();
    let (res, plan, poly) = engine_case(spec)?;
    Ok(WorstCase {
        family,
        nodes,
        inner,
        setup: Some((res, plan)),
        poly,
    })
}

/// Noise level `eps = 1 - p` at which the fidelity crosses one half.
/// `None` if the fidelity stays above one half for every `p`.
pub fn solve_threshold(poly: &Polynomial) -> Option<f64> {
    if poly.eval_eps(1.0) >= 0.5 {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly.eval_eps(mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub family: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub p_th: f64,
    #[serde(rename = "1-p_th")]
    pub one_minus_p_th: f64,
    pub inner: u64,
    /// `|F(p_th) - 1/2|`.
    pub residual: f64,
}

pub fn threshold_row(family: ThresholdFamily, n: u64) -> Result<ThresholdRow, SpecError> {
    let wc = worst_case_bell(family, n)?;
    let eps = solve_threshold(&wc.poly)
        .ok_or_else(|| SpecError::Invalid(format!("{family} at N={n} never drops below 1/2")))?;
    Ok(ThresholdRow {
        family: family.to_string(),
        n: wc.nodes,
        p_th: 1.0 - eps,
        one_minus_p_th: eps,
        inner: wc.inner,
        residual: (wc.poly.eval_eps(eps) - 0.5).abs(),
    })
}

/// `round(10^(2 + i/4))` for `i = 0..=12`: quarter decades from 1e2 to 1e5.
pub fn threshold_grid() -> Vec<u64> {
    (0..=12)
        .map(|i| 10f64.powf(2.0 + i as f64 / 4.0).round() as u64)
        .collect()
}

/// Rows in `families x ns` order regardless of scheduling. Requested sizes
/// that round to the same concrete resource give one row.
pub fn threshold_sweep(
    families: &[ThresholdFamily],
    ns: &[u64],
) -> Result<Vec<ThresholdRow>, SpecError> {
    let jobs: Vec<(ThresholdFamily, u64)> = families
        .iter()
        .flat_map(|&f| ns.iter().map(move |&n| (f, n)))
        .collect();
    let rows: Vec<ThresholdRow> = jobs
        .par_iter()
        .map(|&(f, n)| threshold_row(f, n))
        .collect::<Result<_, _>>()?;
    let mut seen = std::collections::HashSet::new();
    Ok(rows
        .into_iter()
        .filter(|r| seen.insert((r.family.clone(), r.n)))
        .collect())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
