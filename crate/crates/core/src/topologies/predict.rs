//! Closed-form weight vectors and first-order slopes for the standard
//! geometries. The engine is the ground truth; these exist for comparison
//! and for sweeps at sizes where building the graph is pointless.

use num_rational::Ratio;

use crate::engine::{BellWeights, Ghz3Weights};

/// `1` for odd `n`, `0` for even.
pub fn g(n: u64) -> u64 {
    n % 2
}

fn half(num: u64) -> Ratio<u64> {
    Ratio::new(num, 2)
}

/// Side-to-side Y method on a ring, `n` inner qubits.
pub fn w1d(n: u64) -> BellWeights {
    BellWeights::new((n + g(n)) / 2, 1, (n - g(n)) / 2 + 1, 0)
}

/// Straight path in a `k`-dimensional torus.
pub fn w_kd(k: u64, n: u64) -> BellWeights {
    w1d(n).scaled(2 * k - 1)
}

pub fn w2d_straight(n: u64) -> BellWeights {
    w_kd(2, n)
}

/// X method along a stairway.
pub fn w2d_x_stairway(n: u64) -> BellWeights {
    BellWeights::new(0, (n - g(n)) / 2 + 3, (n + g(n)) / 2 + 3, 0)
}

/// Binary tree, apex below the tree root.
pub fn w_tree_bell(n: u64) -> BellWeights {
    w1d(n).scaled(2)
}

pub fn w_switch_bell() -> BellWeights {
    BellWeights::new(0, 0, 0, 1)
}

/// Targets in different GHZ3 groups of a switch.
pub fn w_switch_ghz3_cross() -> BellWeights {
    BellWeights::new(0, 1, 1, 1)
}

/// Targets in the same GHZ3 group of a switch.
pub fn w_switch_ghz3_same() -> BellWeights {
    w_ghz_bell(3)
}

/// Two leaves of an `n`-qubit star.
pub fn w_ghz_bell(n: u64) -> BellWeights {
    BellWeights::new(n - 2, 0, 0, 0)
}

/// GHZ3 from a ring: paths `a..b` and `b..c` cleared outward from `b`.
pub fn w1d_ghz3(n_ab: u64, n_bc: u64) -> Ghz3Weights {
    Ghz3Weights([
        1 + (n_bc - g(n_bc)) / 2,
        0,
        (n_bc + g(n_bc)) / 2,
        1 + (n_ab - g(n_ab)) / 2,
        0,
        (n_ab + g(n_ab)) / 2,
        0,
    ])
}

/// GHZ3 from a `k`-dimensional torus along straight paths.
pub fn w_kd_ghz3(k: u64, n_ab: u64, n_bc: u64) -> Ghz3Weights {
    let mut w = w1d_ghz3(n_ab, n_bc).0.map(|x| (2 * k - 1) * x);
    w[1] += 2 * k - 2;
    Ghz3Weights(w)
}

/// GHZ3 from an `n`-qubit star, root kept as GHZ3 root.
pub fn w_ghz_ghz3(n: u64) -> Ghz3Weights {
    Ghz3Weights([0, n - 3, 0, 0, 0, 0, 0])
}

/// Published tree GHZ3 vector, with the duplicated `w110` entry read as `w111`.
pub fn tree_ghz3_weights_published(n_ar: u64, n_br: u64, n_cr: u64) -> Ghz3Weights {
    Ghz3Weights([
        n_ar - g(n_ar) + 2,
        n_br - g(n_br) + 3,
        n_cr + g(n_cr),
        n_cr - g(n_cr) + 2,
        0,
        n_ar + g(n_ar),
        n_br + g(n_br),
    ])
}

/// Tree GHZ3 vector the engine produces for outward Y clearing followed by
/// X at the junction with `b` as special neighbour. Valid when no path
/// crosses the tree root and no target is a leaf: a root crossing drops one
/// outer qubit from `w101`, a leaf target two from its own component.
pub fn tree_ghz3_weights_engine(n_ar: u64, n_br: u64, n_cr: u64) -> Ghz3Weights {
    Ghz3Weights([
        n_cr - g(n_cr) + 2,
        1,
        n_cr + g(n_cr),
        n_ar - g(n_ar) + 2,
        n_br - g(n_br) + 2,
        n_ar + g(n_ar),
        n_br + g(n_br),
    ])
}

/// Published Bell slopes (coefficient of `eps`).
pub mod bell_slope {
    use super::*;

    pub fn switch_bell() -> Ratio<u64> {
        Ratio::from_integer(3)
    }
    pub fn switch_ghz3_cross() -> Ratio<u64> {
        Ratio::from_integer(4)
    }
    pub fn switch_ghz3_same() -> Ratio<u64> {
        Ratio::from_integer(2)
    }
    pub fn ghz(n_qubits: u64) -> Ratio<u64> {
        half(n_qubits + 1)
    }
    pub fn ring(n: u64) -> Ratio<u64> {
        half(n + 5)
    }
    pub fn grid_straight(n: u64) -> Ratio<u64> {
        half(3 * n + 9)
    }
    pub fn grid_corner(n: u64) -> Ratio<u64> {
        half(3 * n + 8)
    }
    pub fn grid_y_stairway(n: u64) -> Ratio<u64> {
        half(2 * n + 9)
    }
    pub fn grid_x_stairway(n: u64) -> Ratio<u64> {
        half(n + 9)
    }
    pub fn torus(k: u64, n: u64) -> Ratio<u64> {
        half((n + 2) * (2 * k - 1) + 3)
    }
    pub fn tree(n: u64) -> Ratio<u64> {
        Ratio::from_integer(n + 4)
    }
}

/// Published GHZ3 slopes, `n` being the total inner count.
pub mod ghz3_slope {
    use super::*;

    pub fn ghz(n_qubits: u64) -> Ratio<u64> {
        half(n_qubits - 1)
    }
    pub fn ring(n: u64) -> Ratio<u64> {
        half(6 + n)
    }
    pub fn grid(n: u64) -> Ratio<u64> {
        half(12 + 3 * n)
    }
    pub fn torus(k: u64, n: u64) -> Ratio<u64> {
        half((2 * k - 1) * (n + 3) + 3)
    }
    pub fn tree(n: u64) -> Ratio<u64> {
        half(11 + 2 * n)
    }
}

/// Engine slope of the Y method on a stairway with `n >= 1` inner qubits.
pub fn y_stairway_engine_slope(n: u64) -> Ratio<u64> {
    half(n + 10)
}

/// Outer neighbours Z-measured by the Y method.
pub mod outer_count {
    pub fn ring() -> u64 {
        2
    }
    pub fn grid_straight(n: u64) -> u64 {
        2 * n + 6
    }
    pub fn grid_stairway(n: u64) -> u64 {
        n + 6
    }
    pub fn torus(k: u64, n: u64) -> u64 {
        2 * (k - 1) * n + 2 * (2 * k - 1)
    }
    pub fn binary_tree(n: u64) -> u64 {
        n + 3
    }
    /// Tree whose root has `b1` children, targets in different root subtrees.
    pub fn wide_tree(n: u64, b1: u64) -> u64 {
        n + b1 + 1
    }
}
