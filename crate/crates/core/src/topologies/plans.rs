use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::paths::{shortest_path, PathChoice, PathStyle};
use super::{Layout, Resource};
use crate::error::SpecError;
use crate::graph::{GraphState, VertexId};
use crate::plan::{ManipulationPlan, Step, Strategy, Targets};

/// How inner path qubits are cleared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Z-measure every outer neighbour, then Y-measure the inner qubits.
    #[default]
    Y,
    /// X-measure the inner qubits in path order with the first target as
    /// special neighbour, then Z-measure what still hangs off the targets.
    X,
}

fn outer_of(g: &GraphState, on_path: &BTreeSet<VertexId>) -> Vec<VertexId> {
    let mut out = BTreeSet::new();
    for &v in on_path {
        out.extend(g.neighbors(v).iter().filter(|u| !on_path.contains(u)));
    }
    out.into_iter().collect()
}

/// Z on every outer neighbour of `paths`, then Y on each inner list in order.
fn y_method(g: &GraphState, paths: &[&[VertexId]], inner_orders: &[Vec<VertexId>]) -> Vec<Step> {
    let on_path: BTreeSet<VertexId> = paths.iter().flat_map(|p| p.iter().copied()).collect();
    let mut steps: Vec<Step> = outer_of(g, &on_path).into_iter().map(Step::Z).collect();
    for inner in inner_orders {
        steps.extend(inner.iter().map(|&v| Step::Y(v)));
    }
    steps
}

/// The induced subgraph on `path` and its neighbours, keeping vertex ids.
fn patch(g: &GraphState, path: &[VertexId]) -> GraphState {
    let mut keep: BTreeSet<VertexId> = path.iter().copied().collect();
    for &v in path {
        keep.extend(g.neighbors(v));
    }
    let edges: Vec<_> = keep
        .iter()
        .flat_map(|&u| {
            g.neighbors(u)
                .range(u + 1..)
                .filter(|w| keep.contains(w))
                .map(move |&w| (u, w))
        })
        .collect();
    GraphState::new(g.vertex_count(), &edges).expect("patch of a valid graph")
}

fn x_method(g: &GraphState, path: &PathChoice) -> Result<Vec<Step>, SpecError> {
    let a = path.vertices[0];
    let b = *path.vertices.last().unwrap();
    let mut work = patch(g, &path.vertices);
    let mut steps = Vec::new();
    for &v in path.inner() {
        work.measure_x(v, a)?;
        steps.push(Step::X { v, special: a });
    }
    let mut zs: BTreeSet<VertexId> = work.neighbors(a).clone();
    zs.extend(work.neighbors(b));
    zs.remove(&a);
    zs.remove(&b);
    steps.extend(zs.into_iter().map(Step::Z));
    Ok(steps)
}

fn switch_parts(res: &Resource) -> Option<(&[VertexId], &[VertexId])> {
    match &res.layout {
        Layout::Switch { ext, central } => Some((ext, central)),
        _ => None,
    }
}

fn central_of(ext: &[VertexId], central: &[VertexId], q: VertexId) -> Result<VertexId, SpecError> {
    ext.iter()
        .position(|&e| e == q)
        .map(|i| central[i])
        .ok_or_else(|| SpecError::Invalid(format!("qubit {q} is not at an external node")))
}

/// Plan that turns the resource into a Bell pair between `a` and `b`.
pub fn plan_bell(
    res: &Resource,
    a: VertexId,
    b: VertexId,
    method: Method,
    style: PathStyle,
    strategy: Strategy,
) -> Result<ManipulationPlan, SpecError> {
    if a == b {
        return Err(SpecError::Invalid("targets must differ".into()));
    }
    let targets = Targets::Bell { a, b };
    let g = &res.graph;
    let steps = match &res.layout {
        Layout::Switch { .. } => {
            let (ext, central) = switch_parts(res).unwrap();
            let (ca, cb) = (central_of(ext, central, a)?, central_of(ext, central, b)?);
            if ca == cb {
                vec![Step::Y(ca)]
            } else {
                let mut steps = Vec::new();
                for (c, t) in [(ca, a), (cb, b)] {
                    steps.extend(
                        g.neighbors(c)
                            .iter()
                            .filter(|&&u| u != t)
                            .map(|&u| Step::Z(u)),
                    );
                }
                steps.push(Step::Merge(ca, cb));
                steps
            }
        }
        Layout::Star => {
            let n = res.qubit_count() as VertexId;
            if a >= n || b >= n {
                return Err(SpecError::Invalid("target out of range".into()));
            }
            let mut steps: Vec<Step> = (1..n).filter(|&v| v != a && v != b).map(Step::Z).collect();
            if a != 0 && b != 0 {
                steps.push(Step::Y(0));
            }
            steps
        }
        Layout::Torus { .. } | Layout::Tree { .. } => {
            let path = shortest_path(res, a, b, style)?;
            match method {
                Method::Y => y_method(g, &[&path.vertices], &[path.inner().to_vec()]),
                Method::X => {
                    if matches!(res.layout, Layout::Tree { .. }) {
                        return Err(SpecError::Unsupported("X method on trees".into()));
                    }
                    x_method(g, &path)?
                }
            }
        }
    };
    let plan = ManipulationPlan::new(steps, targets, strategy);
    plan.execute(g)?;
    Ok(plan)
}

/// Vertex on all three pairwise tree paths.
fn junction(res: &Resource, a: VertexId, b: VertexId, c: VertexId) -> Result<VertexId, SpecError> {
    let pab: BTreeSet<_> = shortest_path(res, a, b, PathStyle::Straight)?
        .vertices
        .into_iter()
        .collect();
    let pbc = shortest_path(res, b, c, PathStyle::Straight)?.vertices;
    let pac: BTreeSet<_> = shortest_path(res, a, c, PathStyle::Straight)?
        .vertices
        .into_iter()
        .collect();
    pbc.into_iter()
        .find(|v| pab.contains(v) && pac.contains(v))
        .ok_or_else(|| SpecError::Invalid("no junction".into()))
}

fn default_style(res: &Resource, a: VertexId, b: VertexId) -> PathStyle {
    if shortest_path(res, a, b, PathStyle::Straight).is_ok() {
        PathStyle::Straight
    } else {
        PathStyle::Corner
    }
}

/// Plan that turns the resource into a GHZ3 star with root `b` and leaves `a`, `c`.
pub fn plan_ghz3(
    res: &Resource,
    a: VertexId,
    b: VertexId,
    c: VertexId,
    strategy: Strategy,
) -> Result<ManipulationPlan, SpecError> {
    if a == b || b == c || a == c {
        return Err(SpecError::Invalid("targets must be distinct".into()));
    }
    let targets = Targets::Ghz3 { a, b, c };
    let g = &res.graph;
    let outward = |p: &PathChoice| -> Vec<VertexId> { p.inner().iter().rev().copied().collect() };
    let steps = match &res.layout {
        Layout::Star => {
            if b != 0 {
                return Err(SpecError::Unsupported(
                    "GHZ3 from a GHZ state needs the resource root as target root".into(),
                ));
            }
            (1..res.qubit_count() as VertexId)
                .filter(|&v| v != a && v != c)
                .map(Step::Z)
                .collect()
        }
        Layout::Torus { .. } => {
            // Paths run from each leaf to the root; outward order starts next to the root.
            let pa = shortest_path(res, a, b, default_style(res, a, b))?;
            let pc = shortest_path(res, c, b, default_style(res, c, b))?;
            y_method(
                g,
                &[&pa.vertices, &pc.vertices],
                &[outward(&pa), outward(&pc)],
            )
        }
        Layout::Tree { .. } => {
            let r = junction(res, a, b, c)?;
            if r == a || r == c {
                return Err(SpecError::Unsupported(
                    "the target root must lie on the path between the leaves".into(),
                ));
            }
            if r == b {
                let pa = shortest_path(res, a, b, PathStyle::Straight)?;
                let pc = shortest_path(res, c, b, PathStyle::Straight)?;
                y_method(
                    g,
                    &[&pa.vertices, &pc.vertices],
                    &[outward(&pa), outward(&pc)],
                )
            } else {
                let ps: Vec<PathChoice> = [a, b, c]
                    .iter()
                    .map(|&t| shortest_path(res, t, r, PathStyle::Straight))
                    .collect::<Result<_, _>>()?;
                let verts: Vec<&[VertexId]> = ps.iter().map(|p| p.vertices.as_slice()).collect();
                let orders: Vec<Vec<VertexId>> = ps.iter().map(outward).collect();
                let mut steps = y_method(g, &verts, &orders);
                steps.push(Step::X { v: r, special: b });
                steps
            }
        }
        Layout::Switch { .. } => {
            return Err(SpecError::Unsupported(
                "GHZ3 targets on a switch resource".into(),
            ))
        }
    };
    let plan = ManipulationPlan::new(steps, targets, strategy);
    plan.execute(g)?;
    Ok(plan)
}
