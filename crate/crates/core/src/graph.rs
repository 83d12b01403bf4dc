//! Graph states as simple graphs with tombstoned vertex deletion.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::GraphError;

pub type VertexId = u32;

/// Pauli basis of a single-qubit measurement. `X` carries its special neighbour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementBasis {
    X { special: VertexId },
    Y,
    Z,
}

/// A graph state `|G> = prod CZ |+>^V`, stored as per-vertex ordered neighbour sets.
///
/// Vertex ids are allocated once; deleting a vertex leaves a tombstone so ids
/// are never reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphState {
    adj: Vec<BTreeSet<VertexId>>,
    alive: Vec<bool>,
}

impl GraphState {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        GraphState {
            adj: vec![BTreeSet::new(); n],
            alive: vec![true; n],
        }
    }

    pub fn new(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u, v));
            }
            for x in [u, v] {
                if x as usize >= n {
                    return Err(GraphError::OutOfRange(x, n));
                }
            }
            if !g.adj[u as usize].insert(v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            g.adj[v as usize].insert(u);
        }
        Ok(g)
    }

    /// Number of allocated ids, including deleted ones.
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn live_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn is_live(&self, v: VertexId) -> bool {
        self.alive.get(v as usize).copied().unwrap_or(false)
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adj.len() as VertexId).filter(|&v| self.alive[v as usize])
    }

    pub fn neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj
            .get(u as usize)
            .map(|n| n.contains(&v))
            .unwrap_or(false)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|n| n.len()).sum::<usize>() / 2
    }

    /// All edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            let u = u as VertexId;
            out.extend(nbrs.range(u + 1..).map(|&v| (u, v)));
        }
        out
    }

    fn check_live(&self, v: VertexId) -> Result<(), GraphError> {
        if v as usize >= self.adj.len() {
            Err(GraphError::OutOfRange(v, self.adj.len()))
        } else if !self.alive[v as usize] {
            Err(GraphError::Deleted(v))
        } else {
            Ok(())
        }
    }

    fn toggle(&mut self, u: VertexId, v: VertexId) {
        if !self.adj[u as usize].remove(&v) {
            self.adj[u as usize].insert(v);
            self.adj[v as usize].insert(u);
        } else {
            self.adj[v as usize].remove(&u);
        }
    }

    fn delete(&mut self, v: VertexId) {
        let nbrs = std::mem::take(&mut self.adj[v as usize]);
        for u in nbrs {
            self.adj[u as usize].remove(&v);
        }
        self.alive[v as usize] = false;
    }

    /// Toggle every edge between two distinct neighbours of `v`.
    pub fn local_complement(&mut self, v: VertexId) -> Result<(), GraphError> {
        self.check_live(v)?;
        let nbrs: Vec<VertexId> = self.adj[v as usize].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                self.toggle(a, b);
            }
        }
        Ok(())
    }

    pub fn measure_z(&mut self, v: VertexId) -> Result<(), GraphError> {
        self.check_live(v)?;
        self.delete(v);
        Ok(())
    }

    pub fn measure_y(&mut self, v: VertexId) -> Result<(), GraphError> {
        self.local_complement(v)?;
        self.delete(v);
        Ok(())
    }

    pub fn measure_x(&mut self, v: VertexId, special: VertexId) -> Result<(), GraphError> {
        self.check_live(v)?;
        self.check_live(special)?;
        if !self.has_edge(v, special) {
            return Err(GraphError::NotAdjacent { v, special });
        }
        self.local_complement(special)?;
        self.local_complement(v)?;
        self.delete(v);
        self.local_complement(special)?;
        Ok(())
    }

    pub fn measure(&mut self, v: VertexId, basis: MeasurementBasis) -> Result<(), GraphError> {
        match basis {
            MeasurementBasis::X { special } => self.measure_x(v, special),
            MeasurementBasis::Y => self.measure_y(v),
            MeasurementBasis::Z => self.measure_z(v),
        }
    }

    /// Controlled-Z between `u` and `v`: toggles the edge.
    pub fn add_edge_cz(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SameVertex(u));
        }
        self.check_live(u)?;
        self.check_live(v)?;
        self.toggle(u, v);
        Ok(())
    }

    /// CZ(u1, u2), X-measure u1 with special neighbour u2, then Y-measure u2.
    pub fn full_merge(&mut self, u1: VertexId, u2: VertexId) -> Result<(), GraphError> {
        if u1 == u2 {
            return Err(GraphError::SameVertex(u1));
        }
        self.check_live(u1)?;
        self.check_live(u2)?;
        if self.has_edge(u1, u2) {
            return Err(GraphError::AdjacentMerge(u1, u2));
        }
        self.toggle(u1, u2);
        self.measure_x(u1, u2)?;
        self.measure_y(u2)
    }

    /// Verify symmetry, absence of self-loops and empty tombstones.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (v, nbrs) in self.adj.iter().enumerate() {
            let v = v as VertexId;
            if !self.alive[v as usize] && !nbrs.is_empty() {
                return Err(format!("deleted vertex {v} has neighbours"));
            }
            for &u in nbrs {
                if u == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.alive[u as usize] {
                    return Err(format!("{v} adjacent to deleted {u}"));
                }
                if !self.adj[u as usize].contains(&v) {
                    return Err(format!("asymmetric edge {v}-{u}"));
                }
            }
        }
        Ok(())
    }

    /// Edge-list text: first line `N`, then one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.vertex_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, first) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing vertex count".into(),
        })?;
        let n: usize = first.parse().map_err(|_| GraphError::Parse {
            line,
            msg: format!("bad vertex count {first:?}"),
        })?;
        let mut edges = Vec::new();
        for (line, l) in lines {
            let mut it = l.split_whitespace().map(str::parse::<VertexId>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("expected `u v`, got {l:?}"),
                    })
                }
            }
        }
        Self::new(n, &edges)
    }
}
