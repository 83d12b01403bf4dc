//! Manipulation plans: ordered local operations plus a target declaration.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::graph::{GraphState, MeasurementBasis, VertexId};

/// One plan step as written by a planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Z(VertexId),
    Y(VertexId),
    X { v: VertexId, special: VertexId },
    Cz(VertexId, VertexId),
    Merge(VertexId, VertexId),
}

/// Primitive graph operation. Merges expand into `Cz`, `X`, `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prim {
    Z(VertexId),
    Y(VertexId),
    X(VertexId, VertexId),
    Cz(VertexId, VertexId),
}

impl Step {
    pub fn measured(&self) -> Vec<VertexId> {
        match *self {
            Step::Z(v) | Step::Y(v) | Step::X { v, .. } => vec![v],
            Step::Merge(u1, u2) => vec![u1, u2],
            Step::Cz(..) => vec![],
        }
    }

    pub fn basis(&self) -> Option<MeasurementBasis> {
        match *self {
            Step::Z(_) => Some(MeasurementBasis::Z),
            Step::Y(_) => Some(MeasurementBasis::Y),
            Step::X { special, .. } => Some(MeasurementBasis::X { special }),
            _ => None,
        }
    }

    pub fn expand(&self, out: &mut Vec<Prim>) {
        match *self {
            Step::Z(v) => out.push(Prim::Z(v)),
            Step::Y(v) => out.push(Prim::Y(v)),
            Step::X { v, special } => out.push(Prim::X(v, special)),
            Step::Cz(u, v) => out.push(Prim::Cz(u, v)),
            Step::Merge(u1, u2) => {
                out.push(Prim::Cz(u1, u2));
                out.push(Prim::X(u1, u2));
                out.push(Prim::Y(u2));
            }
        }
    }
}

impl Prim {
    pub fn apply(&self, g: &mut GraphState) -> Result<(), crate::error::GraphError> {
        match *self {
            Prim::Z(v) => g.measure_z(v),
            Prim::Y(v) => g.measure_y(v),
            Prim::X(v, b) => g.measure_x(v, b),
            Prim::Cz(u, v) => g.add_edge_cz(u, v),
        }
    }
}

/// Declared target state. GHZ3 targets are a star rooted at `b` with leaves `a`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Targets {
    Bell {
        a: VertexId,
        b: VertexId,
    },
    Ghz3 {
        a: VertexId,
        b: VertexId,
        c: VertexId,
    },
}

impl Targets {
    pub fn vertices(&self) -> Vec<VertexId> {
        match *self {
            Targets::Bell { a, b } => vec![a, b],
            Targets::Ghz3 { a, b, c } => vec![a, b, c],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Targets::Bell { .. } => 2,
            Targets::Ghz3 { .. } => 3,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Edges of the ideal target graph, as pairs of target indices.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        match self {
            Targets::Bell { .. } => vec![(0, 1)],
            Targets::Ghz3 { .. } => vec![(0, 1), (1, 2)],
        }
    }

    /// Index of `v` among the targets, if any.
    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.vertices().iter().position(|&t| t == v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    SideToSide,
    OutwardSideToSide,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManipulationPlan {
    pub steps: Vec<Step>,
    pub targets: Targets,
    pub strategy: Strategy,
}

impl ManipulationPlan {
    pub fn new(steps: Vec<Step>, targets: Targets, strategy: Strategy) -> Self {
        ManipulationPlan {
            steps,
            targets,
            strategy,
        }
    }

    pub fn primitives(&self) -> Vec<Prim> {
        let mut out = Vec::with_capacity(self.steps.len() + 2);
        for s in &self.steps {
            s.expand(&mut out);
        }
        out
    }

    /// Every vertex consumed by a measurement or merge, in plan order.
    pub fn measured(&self) -> Vec<VertexId> {
        self.steps.iter().flat_map(|s| s.measured()).collect()
    }

    pub fn merged(&self) -> Vec<VertexId> {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Merge(..)))
            .flat_map(|s| s.measured())
            .collect()
    }

    pub fn merge_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Merge(..)))
            .count()
    }

    pub fn count(&self, pred: impl Fn(&Step) -> bool) -> usize {
        self.steps.iter().filter(|s| pred(s)).count()
    }

    /// Structural checks that do not need the graph.
    pub fn validate(&self) -> Result<(), PlanError> {
        let t = self.targets.vertices();
        let distinct: HashSet<_> = t.iter().collect();
        if distinct.len() != t.len() {
            return Err(PlanError::BadTargets);
        }
        let mut seen = HashSet::new();
        for v in self.measured() {
            if distinct.contains(&v) {
                return Err(PlanError::TargetMeasured(v));
            }
            if !seen.insert(v) {
                return Err(PlanError::MeasuredTwice(v));
            }
        }
        Ok(())
    }

    /// Run the plan noiselessly and check the target shape.
    pub fn execute(&self, g0: &GraphState) -> Result<GraphState, PlanError> {
        self.validate()?;
        let mut g = g0.clone();
        for p in self.primitives() {
            p.apply(&mut g)?;
        }
        check_target_shape(&g, &self.targets)?;
        Ok(g)
    }
}

/// The targets must induce exactly the declared shape and touch nothing else.
pub fn check_target_shape(g: &GraphState, targets: &Targets) -> Result<(), PlanError> {
    let t = targets.vertices();
    for &v in &t {
        if !g.is_live(v) {
            return Err(PlanError::WrongShape(format!("target {v} was deleted")));
        }
        if let Some(&u) = g.neighbors(v).iter().find(|u| !t.contains(u)) {
            return Err(PlanError::WrongShape(format!(
                "target {v} still adjacent to {u}"
            )));
        }
    }
    let want = targets.shape();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let expect = want.contains(&(i, j));
            if g.has_edge(t[i], t[j]) != expect {
                return Err(PlanError::WrongShape(format!(
                    "edge {}-{} should be {}",
                    t[i],
                    t[j],
                    if expect { "present" } else { "absent" }
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_expands_to_three_primitives() {
        let mut v = Vec::new();
        Step::Merge(3, 4).expand(&mut v);
        assert_eq!(v, vec![Prim::Cz(3, 4), Prim::X(3, 4), Prim::Y(4)]);
    }

    #[test]
    fn validation() {
        let t = Targets::Bell { a: 0, b: 2 };
        let p = ManipulationPlan::new(vec![Step::Y(1), Step::Z(1)], t, Strategy::Custom);
        assert_eq!(p.validate(), Err(PlanError::MeasuredTwice(1)));
        let p = ManipulationPlan::new(vec![Step::Y(0)], t, Strategy::Custom);
        assert_eq!(p.validate(), Err(PlanError::TargetMeasured(0)));
        let g = GraphState::new(3, &[(0, 1), (1, 2)]).unwrap();
        let p = ManipulationPlan::new(vec![Step::Y(1)], t, Strategy::Custom);
        assert!(p.execute(&g).is_ok());
        let p = ManipulationPlan::new(vec![Step::Z(1)], t, Strategy::Custom);
        assert!(matches!(p.execute(&g), Err(PlanError::WrongShape(_))));
    }
}
