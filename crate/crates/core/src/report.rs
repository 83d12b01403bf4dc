//! Serializable summary of one engine run.

use serde::{Deserialize, Serialize};

use crate::engine::{MapClass, Run, WeightVector};
use crate::fidelity::ExactTerm;
use crate::graph::VertexId;
use crate::plan::{ManipulationPlan, Step, Targets};
use crate::topologies::{Resource, ResourceSpec};

/// Final map of one qubit, restricted to the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub qubit: VertexId,
    pub class: String,
    /// Z and X generator masks over the target qubits, in target order.
    pub z: u8,
    pub x: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub resource: ResourceSpec,
    #[serde(rename = "N")]
    pub n: u64,
    pub targets: Targets,
    pub p: f64,
    /// `F(p) = sum coeff * p^exponent`.
    pub exact_terms: Vec<ExactTerm>,
    pub fidelity: f64,
    /// Exact rational, `F ~ 1 - slope * eps`.
    pub ler_slope: String,
    pub ler_slope_value: f64,
    pub weights: WeightVector,
    pub t: u64,
    /// Y and X measurements on the inner path.
    pub n_inner: usize,
    /// Z measurements on outer neighbours.
    pub m_outer: usize,
    /// False when some map fell outside the canonical classes; the exact
    /// terms still account for it.
    pub canonical: bool,
    pub classifications: Vec<Classification>,
}

impl FidelityReport {
    pub fn new(res: &Resource, plan: &ManipulationPlan, run: &Run) -> Self {
        let poly = run.exact();
        let slope = poly.ler_slope();
        FidelityReport {
            resource: res.spec.clone(),
            n: res.spec.network_size(),
            targets: run.targets,
            p: run.p,
            exact_terms: poly.exact_terms(),
            fidelity: poly.eval(run.p),
            ler_slope: slope.to_string(),
            ler_slope_value: *slope.numer() as f64 / *slope.denom() as f64,
            weights: run.weights,
            t: run.t(),
            n_inner: plan.count(|s| matches!(s, Step::Y(_) | Step::X { .. })),
            m_outer: plan.count(|s| matches!(s, Step::Z(_))),
            canonical: run.is_canonical(),
            classifications: run
                .maps
                .iter()
                .filter(|m| m.class != MapClass::Trivial)
                .map(|m| Classification {
                    qubit: m.owner,
                    class: m.class.label(),
                    z: m.z,
                    x: m.x,
                })
                .collect(),
        }
    }
}
