//! Resource-state families, paths between targets, plan generation and
//! closed-form weight predictions.

mod paths;
mod plans;
pub mod predict;

use serde::{Deserialize, Serialize};

use crate::error::SpecError;
use crate::graph::{GraphState, VertexId};

pub use paths::{shortest_path, PathChoice, PathStyle};
pub use plans::{plan_bell, plan_ghz3, Method};

/// Which resource state is distributed over the network.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ResourceSpec {
    /// One Bell pair per external node, partner qubits stored in a central node.
    SwitchBell { externals: usize },
    /// One GHZ3 per two external nodes, roots stored in a central node.
    SwitchGhz3 { externals: usize },
    /// Star graph on `n` qubits with root 0.
    Ghz { n: usize },
    /// `k`-dimensional torus with `side^k` qubits.
    Cluster { k: usize, side: usize },
    /// Tree with per-level child counts.
    Tree { branching: Vec<usize> },
}

#[derive(Debug, Clone)]
pub enum Layout {
    /// `ext[i]` is the qubit at external node `i`, `central[i]` the central
    /// qubit it is entangled with.
    Switch {
        ext: Vec<VertexId>,
        central: Vec<VertexId>,
    },
    Star,
    Torus {
        k: usize,
        side: usize,
    },
    Tree {
        parent: Vec<Option<VertexId>>,
        depth: Vec<u32>,
        children: Vec<Vec<VertexId>>,
    },
}

#[derive(Debug, Clone)]
pub struct Resource {
    pub spec: ResourceSpec,
    pub graph: GraphState,
    /// Physical node of each qubit; node 0 is the central node for switches.
    pub node_of: Vec<u32>,
    pub layout: Layout,
}

impl ResourceSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            ResourceSpec::SwitchBell { .. } => "switch-bell",
            ResourceSpec::SwitchGhz3 { .. } => "switch-ghz3",
            ResourceSpec::Ghz { .. } => "ghz",
            ResourceSpec::Cluster { .. } => "cluster",
            ResourceSpec::Tree { .. } => "tree",
        }
    }

    /// Number of network nodes (external nodes for switches, qubits otherwise).
    pub fn network_size(&self) -> u64 {
        match self {
            ResourceSpec::SwitchBell { externals } | ResourceSpec::SwitchGhz3 { externals } => {
                *externals as u64
            }
            ResourceSpec::Ghz { n } => *n as u64,
            ResourceSpec::Cluster { k, side } => (*side as u64).pow(*k as u32),
            ResourceSpec::Tree { branching } => tree_size(branching),
        }
    }

    pub fn binary_tree(depth: usize) -> Self {
        ResourceSpec::Tree {
            branching: vec![2; depth],
        }
    }
}

fn tree_size(b: &[usize]) -> u64 {
    let mut total = 1u64;
    let mut level = 1u64;
    for &x in b {
        level *= x as u64;
        total += level;
    }
    total
}

impl Resource {
    pub fn qubit_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Torus coordinates of qubit `v`.
    pub fn coords(&self, v: VertexId) -> Vec<usize> {
        match self.layout {
            Layout::Torus { k, side } => {
                let mut v = v as usize;
                (0..k)
                    .map(|_| {
                        let c = v % side;
                        v /= side;
                        c
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn at(&self, coords: &[usize]) -> VertexId {
        match self.layout {
            Layout::Torus { side, .. } => coords
                .iter()
                .rev()
                .fold(0usize, |acc, &c| acc * side + c % side)
                as VertexId,
            _ => panic!("coordinates on a non-torus resource"),
        }
    }

    /// Qubits that can act as targets in a Bell request.
    pub fn endpoints(&self) -> Vec<VertexId> {
        match &self.layout {
            Layout::Switch { ext, .. } => ext.clone(),
            Layout::Star => (1..self.qubit_count() as VertexId).collect(),
            _ => self.graph.live_vertices().collect(),
        }
    }
}

pub fn build_resource(spec: &ResourceSpec) -> Result<Resource, SpecError> {
    let bad = |m: &str| Err(SpecError::Invalid(m.to_string()));
    match spec {
        ResourceSpec::SwitchBell { externals } => {
            let n = *externals;
            if n < 2 {
                return bad("switch needs at least two external nodes");
            }
            let edges: Vec<_> = (0..n as VertexId).map(|i| (2 * i, 2 * i + 1)).collect();
            let graph = GraphState::new(2 * n, &edges)?;
            let node_of = (0..2 * n as u32)
                .map(|q| if q % 2 == 0 { q / 2 + 1 } else { 0 })
                .collect();
            Ok(Resource {
                spec: spec.clone(),
                graph,
                node_of,
                layout: Layout::Switch {
                    ext: (0..n as VertexId).map(|i| 2 * i).collect(),
                    central: (0..n as VertexId).map(|i| 2 * i + 1).collect(),
                },
            })
        }
        ResourceSpec::SwitchGhz3 { externals } => {
            let n = *externals;
            if n < 2 || n % 2 != 0 {
                return bad("GHZ3 switch needs an even number (>= 2) of external nodes");
            }
            let groups = n / 2;
            let mut edges = Vec::new();
            let mut ext = Vec::new();
            let mut central = Vec::new();
            let mut node_of = vec![0u32; 3 * groups];
            for j in 0..groups as VertexId {
                let r = 3 * j;
                for leaf in [r + 1, r + 2] {
                    edges.push((r, leaf));
                    node_of[leaf as usize] = ext.len() as u32 + 1;
                    ext.push(leaf);
                    central.push(r);
                }
            }
            Ok(Resource {
                spec: spec.clone(),
                graph: GraphState::new(3 * groups, &edges)?,
                node_of,
                layout: Layout::Switch { ext, central },
            })
        }
        ResourceSpec::Ghz { n } => {
            if *n < 2 {
                return bad("GHZ state needs at least two qubits");
            }
            let edges: Vec<_> = (1..*n as VertexId).map(|i| (0, i)).collect();
            Ok(Resource {
                spec: spec.clone(),
                graph: GraphState::new(*n, &edges)?,
                node_of: (0..*n as u32).collect(),
                layout: Layout::Star,
            })
        }
        ResourceSpec::Cluster { k, side } => {
            let (k, s) = (*k, *side);
            if k == 0 || s < 3 {
                return bad("cluster needs k >= 1 and side >= 3");
            }
            let total = s
                .checked_pow(k as u32)
                .filter(|&t| t <= u32::MAX as usize / 2)
                .ok_or_else(|| SpecError::Invalid("cluster too large".into()))?;
            let mut stride = 1usize;
            let mut edges = Vec::with_capacity(total * k);
            for _ in 0..k {
                for v in 0..total {
                    let c = (v / stride) % s;
                    let u = if c + 1 == s {
                        v - c * stride
                    } else {
                        v + stride
                    };
                    edges.push((v as VertexId, u as VertexId));
                }
                stride *= s;
            }
            Ok(Resource {
                spec: spec.clone(),
                graph: GraphState::new(total, &edges)?,
                node_of: (0..total as u32).collect(),
                layout: Layout::Torus { k, side: s },
            })
        }
        ResourceSpec::Tree { branching } => {
            if branching.is_empty() || branching.contains(&0) {
                return bad("tree needs a non-empty branching vector of positive entries");
            }
            let total = tree_size(branching);
            if total > u32::MAX as u64 / 2 {
                return bad("tree too large");
            }
            let total = total as usize;
            let mut parent = vec![None; total];
            let mut depth = vec![0u32; total];
            let mut children = vec![Vec::new(); total];
            let mut edges = Vec::with_capacity(total - 1);
            let mut level: Vec<VertexId> = vec![0];
            let mut next: VertexId = 1;
            for (d, &b) in branching.iter().enumerate() {
                let mut new = Vec::with_capacity(level.len() * b);
                for &u in &level {
                    for _ in 0..b {
                        edges.push((u, next));
                        parent[next as usize] = Some(u);
                        depth[next as usize] = d as u32 + 1;
                        children[u as usize].push(next);
                        new.push(next);
                        next += 1;
                    }
                }
                level = new;
            }
            Ok(Resource {
                spec: spec.clone(),
                graph: GraphState::new(total, &edges)?,
                node_of: (0..total as u32).collect(),
                layout: Layout::Tree {
                    parent,
                    depth,
                    children,
                },
            })
        }
    }
}

/// The farthest-apart Bell request the resource supports, with the path
/// style that realises it.
///
/// Tori: the origin and the antipode, cornered when `k > 1`. Trees: the first
/// node one level above the leaves under each of the first two root children.
pub fn worst_case_bell_request(
    res: &Resource,
) -> Result<(VertexId, VertexId, PathStyle), SpecError> {
    match &res.layout {
        Layout::Switch { ext, .. } => {
            let b = if matches!(res.spec, ResourceSpec::SwitchGhz3 { .. }) && ext.len() >= 4 {
                ext[2]
            } else {
                ext[1]
            };
            Ok((ext[0], b, PathStyle::Straight))
        }
        Layout::Star => {
            if res.qubit_count() < 3 {
                return Err(SpecError::Invalid("star needs two leaves".into()));
            }
            Ok((1, 2, PathStyle::Straight))
        }
        Layout::Torus { k, side } => {
            let b = res.at(&vec![side / 2; *k]);
            let style = if *k == 1 {
                PathStyle::Straight
            } else {
                PathStyle::Corner
            };
            Ok((0, b, style))
        }
        Layout::Tree {
            children, depth, ..
        } => {
            let max_depth = depth.iter().copied().max().unwrap_or(0);
            if children[0].len() < 2 || max_depth < 2 {
                return Err(SpecError::Invalid(
                    "worst-case tree request needs depth >= 2 and two root children".into(),
                ));
            }
            let descend = |mut v: VertexId| {
                while depth[v as usize] + 1 < max_depth {
                    v = children[v as usize][0];
                }
                v
            };
            Ok((
                descend(children[0][0]),
                descend(children[0][1]),
                PathStyle::Straight,
            ))
        }
    }
}
