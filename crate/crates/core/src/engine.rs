//! Noise-map propagation through a manipulation plan.
//!
//! A depolarizing channel on qubit `a` of a graph state is a uniform mixture of
//! the Z-supports `{}`, `{a}`, `N(a)`, `{a} ^ N(a)`. Every plan step acts on
//! supports GF(2)-linearly, so a map is tracked by two generator supports: the
//! images of `Z_a` and of `X_a`.
//!
//! Two routes compute the final maps. [`propagate_forward`] pushes each map's
//! supports through the steps it touches. [`Timeline::project`] runs the
//! transpose of the same linear maps backwards once and reads off every
//! vertex's target image in time linear in the plan.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::fidelity::{self, Polynomial};
use crate::graph::{GraphState, VertexId};
use crate::plan::{check_target_shape, ManipulationPlan, Prim, Targets};

pub type Support = BTreeSet<VertexId>;

/// Per-step data frozen from the noiseless graph evolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepData {
    Z {
        v: VertexId,
    },
    /// `nbrs` is `N(v)` just before the measurement.
    Y {
        v: VertexId,
        nbrs: Vec<VertexId>,
    },
    /// `flip_b0` is `{b0} ^ N'(b0)`; `flip_v` is `A ^ B ^ {b0} ^ N'(b0)` where
    /// `A = N(v) - N(b0) - {b0}`, `B = N(b0) - N(v) - {v}` and `N'` is taken
    /// after the step.
    X {
        v: VertexId,
        b0: VertexId,
        flip_b0: Vec<VertexId>,
        flip_v: Vec<VertexId>,
    },
    Cz,
}

fn sym_diff(a: &BTreeSet<VertexId>, b: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    a.symmetric_difference(b).copied().collect()
}

fn xor_into(s: &mut Support, flips: &[VertexId]) {
    for &w in flips {
        if !s.remove(&w) {
            s.insert(w);
        }
    }
}

impl StepData {
    /// Vertices whose presence in a support makes this step act non-trivially.
    pub fn triggers(&self) -> [Option<VertexId>; 2] {
        match *self {
            StepData::Z { v } | StepData::Y { v, .. } => [Some(v), None],
            StepData::X { v, b0, .. } => [Some(v), Some(b0)],
            StepData::Cz => [None, None],
        }
    }

    fn flip_lists(&self) -> [&[VertexId]; 2] {
        match self {
            StepData::Y { nbrs, .. } => [nbrs, &[]],
            StepData::X {
                flip_b0, flip_v, ..
            } => [flip_b0, flip_v],
            _ => [&[], &[]],
        }
    }
}

/// Push one support through one step.
pub fn propagate(support: &Support, step: &StepData) -> Support {
    let mut out = support.clone();
    match step {
        StepData::Z { v } => {
            out.remove(v);
        }
        StepData::Y { v, nbrs } => {
            if out.remove(v) {
                xor_into(&mut out, nbrs);
            }
        }
        StepData::X {
            v,
            b0,
            flip_b0,
            flip_v,
        } => {
            out.remove(v);
            if support.contains(b0) {
                xor_into(&mut out, flip_b0);
            }
            if support.contains(v) {
                xor_into(&mut out, flip_v);
            }
        }
        StepData::Cz => {}
    }
    out
}

/// The noiseless graph evolution of a plan with the data each step needs.
#[derive(Debug, Clone)]
pub struct Timeline {
    pub steps: Vec<StepData>,
    pub final_graph: GraphState,
}

impl Timeline {
    pub fn build(g0: &GraphState, prims: &[Prim]) -> Result<Timeline, PlanError> {
        let mut g = g0.clone();
        let mut steps = Vec::with_capacity(prims.len());
        for p in prims {
            let data = match *p {
                Prim::Z(v) => {
                    g.measure_z(v)?;
                    StepData::Z { v }
                }
                Prim::Y(v) => {
                    let nbrs = if g.is_live(v) {
                        g.neighbors(v).iter().copied().collect()
                    } else {
                        Vec::new()
                    };
                    g.measure_y(v)?;
                    StepData::Y { v, nbrs }
                }
                Prim::X(v, b0) => {
                    let (nv, nb) = if g.is_live(v) && g.is_live(b0) {
                        (g.neighbors(v).clone(), g.neighbors(b0).clone())
                    } else {
                        (Support::new(), Support::new())
                    };
                    g.measure_x(v, b0)?;
                    let mut a: Support = nv.difference(&nb).copied().collect();
                    a.remove(&b0);
                    let mut b: Support = nb.difference(&nv).copied().collect();
                    b.remove(&v);
                    let mut d_b0 = g.neighbors(b0).clone();
                    d_b0.insert(b0);
                    let flip_v = sym_diff(&sym_diff(&a, &b), &d_b0);
                    StepData::X {
                        v,
                        b0,
                        flip_b0: d_b0.into_iter().collect(),
                        flip_v: flip_v.into_iter().collect(),
                    }
                }
                Prim::Cz(u, v) => {
                    g.add_edge_cz(u, v)?;
                    StepData::Cz
                }
            };
            steps.push(data);
        }
        Ok(Timeline {
            steps,
            final_graph: g,
        })
    }

    /// Target image of every single-vertex support `{w}` at the start of the
    /// plan, as a bitmask over `targets` (bit `i` for `targets[i]`).
    pub fn project(&self, targets: &[VertexId]) -> Vec<u8> {
        let mut cur = vec![0u8; self.final_graph.vertex_count()];
        for (i, &t) in targets.iter().enumerate() {
            cur[t as usize] = 1 << i;
        }
        let fold = |cur: &[u8], ws: &[VertexId]| ws.iter().fold(0u8, |m, &w| m ^ cur[w as usize]);
        for step in self.steps.iter().rev() {
            match step {
                StepData::Z { v } => cur[*v as usize] = 0,
                StepData::Y { v, nbrs } => cur[*v as usize] = fold(&cur, nbrs),
                StepData::X {
                    v,
                    b0,
                    flip_b0,
                    flip_v,
                } => {
                    let nb = cur[*b0 as usize] ^ fold(&cur, flip_b0);
                    let nv = fold(&cur, flip_v);
                    cur[*b0 as usize] = nb;
                    cur[*v as usize] = nv;
                }
                StepData::Cz => {}
            }
        }
        cur
    }
}

/// A depolarizing channel rewritten on the initial graph state.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseMap {
    pub owner: VertexId,
    pub p: f64,
    /// Image of `Z_owner`.
    pub z: Support,
    /// Image of `X_owner`.
    pub x: Support,
}

/// One branch `Z_S rho Z_S` of a reduced map with weight `quarters * (1 - p) / 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub support: Support,
    pub quarters: u8,
}

impl NoiseMap {
    /// Reduced non-identity branches; the identity carries the remaining weight.
    pub fn branches(&self) -> Vec<Branch> {
        let zx = sym_diff(&self.z, &self.x);
        let mut out: Vec<Branch> = Vec::new();
        for s in [Support::new(), self.z.clone(), self.x.clone(), zx] {
            match out.iter_mut().find(|b| b.support == s) {
                Some(b) => b.quarters += 1,
                None => out.push(Branch {
                    support: s,
                    quarters: 1,
                }),
            }
        }
        out
    }

    /// Bitmasks of the two generators restricted to `targets`.
    pub fn masks(&self, targets: &[VertexId]) -> (u8, u8) {
        let m = |s: &Support| {
            targets
                .iter()
                .enumerate()
                .filter(|(_, t)| s.contains(t))
                .fold(0u8, |m, (i, _)| m | (1 << i))
        };
        (m(&self.z), m(&self.x))
    }
}

pub fn depolarizing_map(g0: &GraphState, a: VertexId, p: f64) -> Result<NoiseMap, PlanError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PlanError::BadProbability(p));
    }
    if !g0.is_live(a) {
        return Err(crate::error::GraphError::OutOfRange(a, g0.vertex_count()).into());
    }
    Ok(NoiseMap {
        owner: a,
        p,
        z: Support::from([a]),
        x: g0.neighbors(a).clone(),
    })
}

/// Forward route: push every map through the steps its supports touch.
///
/// Steps that do not contain a support vertex among their triggers leave the
/// support unchanged, so each map jumps between the steps of its own vertices.
pub fn propagate_forward(timeline: &Timeline, maps: &[NoiseMap]) -> Vec<NoiseMap> {
    let mut touch: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, s) in timeline.steps.iter().enumerate() {
        for v in s.triggers().into_iter().flatten() {
            touch.entry(v).or_default().push(i);
        }
    }
    let next = |v: VertexId, from: usize| -> Option<usize> {
        let list = touch.get(&v)?;
        let k = list.partition_point(|&i| i < from);
        list.get(k).copied()
    };
    maps.par_iter()
        .map(|m| {
            let mut gens = [m.z.clone(), m.x.clone()];
            let mut heap = BinaryHeap::new();
            for g in &gens {
                for &v in g {
                    if let Some(i) = next(v, 0) {
                        heap.push(Reverse(i));
                    }
                }
            }
            let mut done: Option<usize> = None;
            while let Some(Reverse(i)) = heap.pop() {
                if done.is_some_and(|d| i <= d) {
                    continue;
                }
                done = Some(i);
                let step = &timeline.steps[i];
                for g in gens.iter_mut() {
                    *g = propagate(g, step);
                }
                for list in step.flip_lists() {
                    for &w in list {
                        if gens.iter().any(|g| g.contains(&w)) {
                            if let Some(j) = next(w, i + 1) {
                                heap.push(Reverse(j));
                            }
                        }
                    }
                }
            }
            let [z, x] = gens;
            NoiseMap {
                owner: m.owner,
                p: m.p,
                z,
                x,
            }
        })
        .collect()
}

/// Canonical form of a final map on the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapClass {
    /// Acts as the identity on the target.
    Trivial,
    /// `Z_a Z_b` with probability `(1-p)/2`.
    Alpha,
    /// `Z_a`.
    Beta,
    /// `Z_b`.
    Gamma,
    /// Uniform over all four Z-patterns of a Bell target.
    Target,
    /// GHZ3 pattern `Z_a^alpha Z_b^beta Z_c^gamma`, stored as `4 alpha + 2 beta + gamma`.
    Pattern(u8),
    General,
}

impl MapClass {
    pub fn label(&self) -> String {
        match self {
            MapClass::Pattern(v) => format!("m{:03b}", v),
            other => format!("{other:?}").to_lowercase(),
        }
    }
}

/// Classify a map from its generator masks over `k` targets.
pub fn classify_masks(z: u8, x: u8, k: usize) -> MapClass {
    let mut h: Vec<u8> = [z, x, z ^ x].into_iter().filter(|&s| s != 0).collect();
    h.sort_unstable();
    h.dedup();
    match (k, h.as_slice()) {
        (_, []) => MapClass::Trivial,
        (2, [3]) => MapClass::Alpha,
        (2, [1]) => MapClass::Beta,
        (2, [2]) => MapClass::Gamma,
        (2, [1, 2, 3]) => MapClass::Target,
        (3, [s]) => MapClass::Pattern(4 * (s & 1) + 2 * ((s >> 1) & 1) + ((s >> 2) & 1)),
        _ => MapClass::General,
    }
}

pub fn classify(map: &NoiseMap, targets: &Targets) -> MapClass {
    let t = targets.vertices();
    let (z, x) = map.masks(&t);
    classify_masks(z, x, t.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BellWeights {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
    pub t: u64,
}

impl BellWeights {
    pub fn new(alpha: u64, beta: u64, gamma: u64, t: u64) -> Self {
        BellWeights {
            alpha,
            beta,
            gamma,
            t,
        }
    }

    pub fn sum(&self) -> u64 {
        self.alpha + self.beta + self.gamma
    }

    pub fn scaled(&self, k: u64) -> Self {
        BellWeights::new(k * self.alpha, k * self.beta, k * self.gamma, self.t)
    }

    pub fn components(&self) -> [u64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    /// Same vector up to the relabellings `alpha <-> beta`, `alpha <-> gamma`
    /// induced by local complementation of the Bell target.
    pub fn same_up_to_relabel(&self, other: &BellWeights) -> bool {
        let mut a = self.components();
        let mut b = other.components();
        a.sort_unstable();
        b.sort_unstable();
        a == b && self.t == other.t
    }
}

/// GHZ3 weights in the order `w001, w010, w011, w100, w101, w110, w111`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Ghz3Weights(pub [u64; 7]);

impl Ghz3Weights {
    pub fn get(&self, pattern: u8) -> u64 {
        self.0[pattern as usize - 1]
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightVector {
    Bell(BellWeights),
    Ghz3(Ghz3Weights),
}

impl WeightVector {
    pub fn components(&self) -> Vec<u64> {
        match self {
            WeightVector::Bell(w) => w.components().to_vec(),
            WeightVector::Ghz3(w) => w.0.to_vec(),
        }
    }
}

/// A propagated map restricted to the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalMap {
    pub owner: VertexId,
    pub z: u8,
    pub x: u8,
    pub class: MapClass,
}

/// Result of [`run_plan`].
#[derive(Debug, Clone)]
pub struct Run {
    pub targets: Targets,
    pub p: f64,
    pub final_graph: GraphState,
    /// Maps of targets, measured qubits and any other qubit whose map is not
    /// trivial on the target, sorted by owner.
    pub maps: Vec<FinalMap>,
    pub weights: WeightVector,
    /// Measured maps that reduce to the identity on the target.
    pub trivial: u64,
    /// Measured or merged maps outside the canonical forms.
    pub general: Vec<VertexId>,
    /// Unmeasured non-target qubits whose maps reach the target.
    pub passive: Vec<VertexId>,
}

impl Run {
    pub fn t(&self) -> u64 {
        match self.weights {
            WeightVector::Bell(w) => w.t,
            WeightVector::Ghz3(_) => 0,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.general.is_empty() && self.passive.is_empty()
    }

    /// Exact fidelity polynomial from all maps (general path).
    pub fn exact(&self) -> Polynomial {
        let masks: Vec<(u8, u8)> = self.maps.iter().map(|m| (m.z, m.x)).collect();
        fidelity::fidelity_from_maps(&masks, self.targets.len())
    }

    pub fn fidelity(&self) -> f64 {
        self.exact().eval(self.p)
    }
}

/// Final target masks of every vertex's map via the backward route.
pub fn final_masks(g0: &GraphState, timeline: &Timeline, targets: &[VertexId]) -> Vec<(u8, u8)> {
    let cur = timeline.project(targets);
    (0..g0.vertex_count())
        .map(|a| {
            if !g0.is_live(a as VertexId) {
                return (0, 0);
            }
            let x = g0
                .neighbors(a as VertexId)
                .iter()
                .fold(0u8, |m, &w| m ^ cur[w as usize]);
            (cur[a], x)
        })
        .collect()
}

pub fn relevant_qubits(plan: &ManipulationPlan) -> BTreeSet<VertexId> {
    let mut s: BTreeSet<VertexId> = plan.targets.vertices().into_iter().collect();
    s.extend(plan.measured());
    s
}

/// Execute a plan on `g0` and propagate every depolarizing map to the target.
pub fn run_plan(g0: &GraphState, plan: &ManipulationPlan, p: f64) -> Result<Run, PlanError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PlanError::BadProbability(p));
    }
    plan.validate()?;
    let timeline = Timeline::build(g0, &plan.primitives())?;
    check_target_shape(&timeline.final_graph, &plan.targets)?;
    let tv = plan.targets.vertices();
    let masks = final_masks(g0, &timeline, &tv);
    Ok(assemble(plan, p, timeline.final_graph, &masks))
}

/// Classify final masks (indexed by vertex) into a [`Run`].
pub fn assemble(
    plan: &ManipulationPlan,
    p: f64,
    final_graph: GraphState,
    masks: &[(u8, u8)],
) -> Run {
    let k = plan.targets.len();
    let merged: BTreeSet<VertexId> = plan.merged().into_iter().collect();
    let relevant = relevant_qubits(plan);
    let tv = plan.targets.vertices();

    let mut bell = BellWeights {
        t: plan.merge_count() as u64,
        ..Default::default()
    };
    let mut ghz = [0u64; 7];
    let mut trivial = 0;
    let mut general = Vec::new();
    let mut passive = Vec::new();
    let mut maps = Vec::new();

    for (a, &(z, x)) in masks.iter().enumerate() {
        let a = a as VertexId;
        let class = classify_masks(z, x, k);
        let is_rel = relevant.contains(&a);
        if !is_rel && class == MapClass::Trivial {
            continue;
        }
        maps.push(FinalMap {
            owner: a,
            z,
            x,
            class,
        });
        if tv.contains(&a) {
            continue;
        }
        if !is_rel {
            passive.push(a);
            continue;
        }
        if merged.contains(&a) {
            if class != MapClass::Target {
                general.push(a);
            }
            continue;
        }
        match class {
            MapClass::Trivial => trivial += 1,
            MapClass::Alpha => bell.alpha += 1,
            MapClass::Beta => bell.beta += 1,
            MapClass::Gamma => bell.gamma += 1,
            MapClass::Pattern(s) => ghz[s as usize - 1] += 1,
            MapClass::Target | MapClass::General => general.push(a),
        }
    }
    let weights = match plan.targets {
        Targets::Bell { .. } => WeightVector::Bell(bell),
        Targets::Ghz3 { .. } => WeightVector::Ghz3(Ghz3Weights(ghz)),
    };
    Run {
        targets: plan.targets,
        p,
        final_graph,
        maps,
        weights,
        trivial,
        general,
        passive,
    }
}
