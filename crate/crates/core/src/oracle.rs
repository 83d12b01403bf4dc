//! Brute-force density-matrix simulation of small noisy plans.
//!
//! Independent of the propagation rules: the state is built from CZ gates,
//! every qubit is depolarized, measurements are projections summed over both
//! outcomes with the standard graph-state corrections, and the fidelity is the
//! overlap with the ideal target graph state.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C;

use crate::error::OracleError;
use crate::graph::{GraphState, VertexId};
use crate::plan::{ManipulationPlan, Prim, Targets};

pub const MAX_QUBITS: usize = 12;

type U2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Density operator over `qubits`; bit `i` of a basis index is `qubits[i]`.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub qubits: Vec<VertexId>,
    pub rho: Vec<C>,
}

fn pauli_z() -> U2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

/// `exp(i theta Z)`.
fn exp_z(theta: f64) -> U2 {
    [
        [C::from_polar(1.0, theta), ZERO],
        [ZERO, C::from_polar(1.0, -theta)],
    ]
}

/// `exp(i theta Y) = cos I + i sin Y`.
fn exp_y(theta: f64) -> U2 {
    let (s, c) = theta.sin_cos();
    [
        [C::new(c, 0.0), C::new(s, 0.0)],
        [C::new(-s, 0.0), C::new(c, 0.0)],
    ]
}

fn dagger(u: &U2) -> U2 {
    [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ]
}

fn basis_vector(kind: char, outcome: usize) -> [C; 2] {
    let h = FRAC_1_SQRT_2;
    let s = if outcome == 0 { 1.0 } else { -1.0 };
    match kind {
        'x' => [C::new(h, 0.0), C::new(s * h, 0.0)],
        'y' => [C::new(h, 0.0), C::new(0.0, s * h)],
        _ => {
            if outcome == 0 {
                [ONE, ZERO]
            } else {
                [ZERO, ONE]
            }
        }
    }
}

impl DenseState {
    pub fn dim(&self) -> usize {
        1 << self.qubits.len()
    }

    fn pos(&self, v: VertexId) -> usize {
        self.qubits
            .iter()
            .position(|&q| q == v)
            .expect("qubit not in dense state")
    }

    pub fn trace(&self) -> C {
        let d = self.dim();
        (0..d).map(|i| self.rho[i * d + i]).sum()
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let d = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                m = m.max((self.rho[i * d + j] - self.rho[j * d + i].conj()).norm());
            }
        }
        m
    }

    /// `rho -> U rho U^dagger` on qubit `v`.
    pub fn apply_unitary(&mut self, v: VertexId, u: &U2) {
        let d = self.dim();
        let m = 1 << self.pos(v);
        for i in (0..d).filter(|i| i & m == 0) {
            for j in 0..d {
                let r0 = self.rho[i * d + j];
                let r1 = self.rho[(i | m) * d + j];
                self.rho[i * d + j] = u[0][0] * r0 + u[0][1] * r1;
                self.rho[(i | m) * d + j] = u[1][0] * r0 + u[1][1] * r1;
            }
        }
        for i in 0..d {
            for j in (0..d).filter(|j| j & m == 0) {
                let c0 = self.rho[i * d + j];
                let c1 = self.rho[i * d + (j | m)];
                self.rho[i * d + j] = c0 * u[0][0].conj() + c1 * u[0][1].conj();
                self.rho[i * d + (j | m)] = c0 * u[1][0].conj() + c1 * u[1][1].conj();
            }
        }
    }

    /// `p rho + (1-p)/4 sum_sigma sigma rho sigma` on qubit `v`.
    pub fn apply_depolarizing(&mut self, v: VertexId, p: f64) {
        let d = self.dim();
        let m = 1 << self.pos(v);
        for i in 0..d {
            for j in 0..d {
                if (i ^ j) & m != 0 {
                    self.rho[i * d + j] *= p;
                } else if i & m == 0 {
                    let a = self.rho[i * d + j];
                    let b = self.rho[(i | m) * d + (j | m)];
                    let avg = (a + b) * ((1.0 - p) / 2.0);
                    self.rho[i * d + j] = a * p + avg;
                    self.rho[(i | m) * d + (j | m)] = b * p + avg;
                }
            }
        }
    }

    pub fn apply_cz(&mut self, a: VertexId, b: VertexId) {
        let d = self.dim();
        let (ma, mb) = (1 << self.pos(a), 1 << self.pos(b));
        let s = |i: usize| i & ma != 0 && i & mb != 0;
        for i in 0..d {
            for j in 0..d {
                if s(i) != s(j) {
                    self.rho[i * d + j] = -self.rho[i * d + j];
                }
            }
        }
    }

    /// Contract qubit `v` with `<phi| . |phi>` and drop it.
    fn project_out(&self, v: VertexId, phi: &[C; 2]) -> DenseState {
        let k = self.pos(v);
        let d = self.dim();
        let nd = d / 2;
        let low = (1 << k) - 1;
        let ins = |i: usize, bit: usize| ((i & !low) << 1) | (bit << k) | (i & low);
        let mut rho = vec![ZERO; nd * nd];
        for i in 0..nd {
            for j in 0..nd {
                let mut acc = ZERO;
                for (x, px) in phi.iter().enumerate() {
                    for (y, py) in phi.iter().enumerate() {
                        acc += px.conj() * self.rho[ins(i, x) * d + ins(j, y)] * py;
                    }
                }
                rho[i * nd + j] = acc;
            }
        }
        let mut qubits = self.qubits.clone();
        qubits.remove(k);
        DenseState { qubits, rho }
    }

    /// Overlap with the ideal target graph state after tracing out the rest.
    pub fn target_fidelity(&self, targets: &Targets) -> f64 {
        let tv = targets.vertices();
        let d = self.dim();
        let tbits: Vec<usize> = tv.iter().map(|&t| 1 << self.pos(t)).collect();
        let rest: Vec<usize> = (0..self.qubits.len())
            .map(|i| 1 << i)
            .filter(|b| !tbits.contains(b))
            .collect();
        let k = tv.len();
        let shape = targets.shape();
        let amp = (0..1usize << k)
            .map(|x| {
                let s = shape
                    .iter()
                    .filter(|&&(i, j)| (x >> i) & (x >> j) & 1 == 1)
                    .count();
                if s % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect::<Vec<f64>>();
        let norm = 1.0 / (1 << k) as f64;
        let scatter = |x: usize, bits: &[usize]| {
            bits.iter()
                .enumerate()
                .filter(|(i, _)| (x >> i) & 1 == 1)
                .fold(0, |m, (_, b)| m | b)
        };
        let mut f = ZERO;
        for r in 0..1usize << rest.len() {
            let ro = scatter(r, &rest);
            for x in 0..1usize << k {
                for y in 0..1usize << k {
                    let i = ro | scatter(x, &tbits);
                    let j = ro | scatter(y, &tbits);
                    f += self.rho[i * d + j] * (amp[x] * amp[y] * norm);
                }
            }
        }
        f.re
    }
}

/// Pure graph-state density operator over the live vertices of `g`.
pub fn dense_graph_state(g: &GraphState) -> Result<DenseState, OracleError> {
    let qubits: Vec<VertexId> = g.live_vertices().collect();
    let n = qubits.len();
    if n > MAX_QUBITS {
        return Err(OracleError::TooLarge(n, MAX_QUBITS));
    }
    let d = 1usize << n;
    let pos = |v: VertexId| qubits.iter().position(|&q| q == v).unwrap();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| (1 << pos(u), 1 << pos(v)))
        .collect();
    let psi: Vec<f64> = (0..d)
        .map(|i| {
            let s = edges
                .iter()
                .filter(|&&(a, b)| i & a != 0 && i & b != 0)
                .count();
            let amp = 1.0 / (d as f64).sqrt();
            if s % 2 == 0 {
                amp
            } else {
                -amp
            }
        })
        .collect();
    let mut rho = vec![ZERO; d * d];
    for i in 0..d {
        for j in 0..d {
            rho[i * d + j] = C::new(psi[i] * psi[j], 0.0);
        }
    }
    Ok(DenseState { qubits, rho })
}

/// Outcome-dependent corrections `U_0, U_1` for a measurement on the graph `g`
/// before the step; the oracle applies `U_m^dagger` after projecting.
fn corrections(g: &GraphState, prim: &Prim) -> [Vec<(VertexId, U2)>; 2] {
    let pi4 = std::f64::consts::FRAC_PI_4;
    match *prim {
        Prim::Z(v) => [
            Vec::new(),
            g.neighbors(v).iter().map(|&b| (b, pauli_z())).collect(),
        ],
        Prim::Y(v) => [
            g.neighbors(v).iter().map(|&b| (b, exp_z(-pi4))).collect(),
            g.neighbors(v).iter().map(|&b| (b, exp_z(pi4))).collect(),
        ],
        Prim::X(v, b0) => {
            let nv = g.neighbors(v);
            let nb = g.neighbors(b0);
            let a: Vec<_> = nv
                .iter()
                .filter(|&&w| !nb.contains(&w) && w != b0)
                .map(|&w| (w, pauli_z()))
                .collect();
            let b: Vec<_> = nb
                .iter()
                .filter(|&&w| !nv.contains(&w) && w != v)
                .map(|&w| (w, pauli_z()))
                .collect();
            let mut plus = vec![(b0, exp_y(pi4))];
            plus.extend(a);
            let mut minus = vec![(b0, exp_y(-pi4))];
            minus.extend(b);
            [plus, minus]
        }
        Prim::Cz(..) => [Vec::new(), Vec::new()],
    }
}

/// Run `plan` on a dense state that corresponds to graph `g`, then return the
/// target fidelity.
pub fn simulate_plan(
    state: DenseState,
    g: &GraphState,
    plan: &ManipulationPlan,
) -> Result<f64, OracleError> {
    plan.validate()?;
    let mut s = state;
    let mut g = g.clone();
    for prim in plan.primitives() {
        match prim {
            Prim::Cz(a, b) => s.apply_cz(a, b),
            Prim::Z(v) | Prim::Y(v) | Prim::X(v, _) => {
                let kind = match prim {
                    Prim::Z(_) => 'z',
                    Prim::Y(_) => 'y',
                    _ => 'x',
                };
                let cors = corrections(&g, &prim);
                let mut acc: Option<DenseState> = None;
                for (m, cor) in cors.iter().enumerate() {
                    let mut branch = s.project_out(v, &basis_vector(kind, m));
                    for (b, u) in cor {
                        branch.apply_unitary(*b, &dagger(u));
                    }
                    acc = Some(match acc {
                        None => branch,
                        Some(mut a) => {
                            for (x, y) in a.rho.iter_mut().zip(&branch.rho) {
                                *x += y;
                            }
                            a
                        }
                    });
                }
                s = acc.expect("two outcomes");
            }
        }
        prim.apply(&mut g)?;
    }
    crate::plan::check_target_shape(&g, &plan.targets)?;
    Ok(s.target_fidelity(&plan.targets))
}

/// Depolarize every qubit of `g0` with parameter `p`, run the plan, return the fidelity.
pub fn oracle_fidelity(
    g0: &GraphState,
    plan: &ManipulationPlan,
    p: f64,
) -> Result<f64, OracleError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(crate::error::PlanError::BadProbability(p).into());
    }
    let mut s = dense_graph_state(g0)?;
    for v in g0.live_vertices() {
        s.apply_depolarizing(v, p);
    }
    simulate_plan(s, g0, plan)
}
