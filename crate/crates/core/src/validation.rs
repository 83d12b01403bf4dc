//! Engine versus dense-oracle checks on every small resource and target choice.

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{assemble, final_masks, run_plan, StepData, Timeline};
use crate::error::OracleError;
use crate::graph::VertexId;
use crate::oracle::oracle_fidelity;
use crate::plan::{check_target_shape, ManipulationPlan, Strategy};
use crate::topologies::{
    build_resource, plan_bell, plan_ghz3, shortest_path, Method, PathStyle, Resource, ResourceSpec,
};

/// Noise parameters every case is checked at.
pub const CHECK_PS: [f64; 3] = [1.0, 0.9, 0.7];

#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub resource: Resource,
    pub plan: ManipulationPlan,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseCheck {
    pub label: String,
    pub p: f64,
    pub engine: f64,
    pub oracle: f64,
}

impl CaseCheck {
    pub fn diff(&self) -> f64 {
        (self.engine - self.oracle).abs()
    }
}

/// Deliberate engine faults used to show that the oracle comparison has teeth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// Forget the neighbourhood toggle of every Y measurement.
    DropYNeighbours,
}

fn spec_families(max_qubits: usize) -> Vec<ResourceSpec> {
    let mut out = Vec::new();
    for e in 2..=max_qubits / 2 {
        out.push(ResourceSpec::SwitchBell { externals: e });
    }
    for e in (2..).step_by(2).take_while(|e| 3 * e / 2 <= max_qubits) {
        out.push(ResourceSpec::SwitchGhz3 { externals: e });
    }
    for n in 3..=max_qubits {
        out.push(ResourceSpec::Ghz { n });
    }
    for side in 3..=max_qubits {
        out.push(ResourceSpec::Cluster { k: 1, side });
    }
    for side in (3..).take_while(|s| s * s <= max_qubits) {
        out.push(ResourceSpec::Cluster { k: 2, side });
    }
    for b in [vec![2], vec![3], vec![2, 2], vec![2, 3], vec![3, 2]] {
        let spec = ResourceSpec::Tree { branching: b };
        if spec.network_size() as usize <= max_qubits {
            out.push(spec);
        }
    }
    out
}

fn usable(res: &Resource, plan: &ManipulationPlan) -> bool {
    plan.execute(&res.graph)
        .map(|g| check_target_shape(&g, &plan.targets).is_ok())
        .unwrap_or(false)
}

fn bell_plans(res: &Resource, a: VertexId, b: VertexId) -> Vec<(String, ManipulationPlan)> {
    let mut out = Vec::new();
    let is_torus = matches!(res.spec, ResourceSpec::Cluster { .. });
    let styles: &[PathStyle] = if is_torus {
        &[PathStyle::Straight, PathStyle::Corner, PathStyle::Stairway]
    } else {
        &[PathStyle::Straight]
    };
    let methods: &[Method] = if is_torus {
        &[Method::Y, Method::X]
    } else {
        &[Method::Y]
    };
    for &style in styles {
        if is_torus && shortest_path(res, a, b, style).is_err() {
            continue;
        }
        for &m in methods {
            if let Ok(plan) = plan_bell(res, a, b, m, style, Strategy::SideToSide) {
                let tag = format!("bell {a}-{b} {:?}/{}", m, style.name());
                out.push((tag, plan));
            }
        }
    }
    out
}

/// All plans the planners produce on resources of at most `max_qubits`
/// qubits, over every Bell pair and every GHZ3 triple they accept.
pub fn small_cases(max_qubits: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for spec in spec_families(max_qubits) {
        let res = match build_resource(&spec) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let name = format!("{}:{}", spec.family_name(), res.qubit_count());
        let ends = res.endpoints();
        let mut push = |tag: String, plan: ManipulationPlan| {
            if usable(&res, &plan) {
                cases.push(Case {
                    label: format!("{name} {tag}"),
                    resource: res.clone(),
                    plan,
                });
            }
        };
        let all: Vec<VertexId> = (0..res.qubit_count() as VertexId).collect();
        let bell_ends = if matches!(spec, ResourceSpec::Ghz { .. }) {
            &all
        } else {
            &ends
        };
        for (i, &a) in bell_ends.iter().enumerate() {
            for &b in &bell_ends[i + 1..] {
                for (tag, plan) in bell_plans(&res, a, b) {
                    push(tag, plan);
                }
            }
        }
        if matches!(
            spec,
            ResourceSpec::SwitchBell { .. } | ResourceSpec::SwitchGhz3 { .. }
        ) {
            continue;
        }
        for (i, &a) in all.iter().enumerate() {
            for &c in &all[i + 1..] {
                for &b in &all {
                    if b == a || b == c {
                        continue;
                    }
                    if let Ok(plan) = plan_ghz3(&res, a, b, c, Strategy::OutwardSideToSide) {
                        push(format!("ghz3 {a}-{b}-{c}"), plan);
                    }
                }
            }
        }
    }
    cases
}

/// Engine fidelity with an optional injected fault.
pub fn engine_fidelity(case: &Case, p: f64, mutation: Mutation) -> Result<f64, OracleError> {
    let g0 = &case.resource.graph;
    if mutation == Mutation::None {
        return Ok(run_plan(g0, &case.plan, p)?.fidelity());
    }
    let mut tl = Timeline::build(g0, &case.plan.primitives())?;
    for s in &mut tl.steps {
        if let StepData::Y { nbrs, .. } = s {
            nbrs.clear();
        }
    }
    let masks = final_masks(g0, &tl, &case.plan.targets.vertices());
    Ok(assemble(&case.plan, p, tl.final_graph, &masks).fidelity())
}

/// Check every case at every `p`; results keep the input order.
pub fn check_cases(
    cases: &[Case],
    ps: &[f64],
    mutation: Mutation,
) -> Result<Vec<CaseCheck>, OracleError> {
    let jobs: Vec<(&Case, f64)> = cases
        .iter()
        .flat_map(|c| ps.iter().map(move |&p| (c, p)))
        .collect();
    jobs.par_iter()
        .map(|&(case, p)| {
            Ok(CaseCheck {
                label: case.label.clone(),
                p,
                engine: engine_fidelity(case, p, mutation)?,
                oracle: oracle_fidelity(&case.resource.graph, &case.plan, p)?,
            })
        })
        .collect()
}
