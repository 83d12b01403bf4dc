//! Exact and low-error-regime fidelities.
//!
//! Each final map is a uniform mixture over the Z-patterns of a subgroup `H`
//! of the target's pattern group, taken with probability `1 - p`. Averaging the
//! characters `chi_u` of the pattern group gives
//!
//! ```text
//! F(p) = 2^-k * sum_u p^(number of maps whose H is not orthogonal to u)
//! ```
//!
//! so every fidelity is a polynomial in `p` with integer exponents and dyadic
//! coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::engine::{BellWeights, Ghz3Weights};
use crate::error::PlanError;
use crate::plan::Targets;

/// `sum_e (num_e / denom) p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    denom: u64,
    terms: BTreeMap<u64, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTerm {
    pub exponent: u64,
    pub coefficient: String,
}

impl Polynomial {
    pub fn from_exponents(denom: u64, exps: impl IntoIterator<Item = u64>) -> Self {
        let mut terms = BTreeMap::new();
        for e in exps {
            *terms.entry(e).or_insert(0) += 1;
        }
        Polynomial { denom, terms }
    }

    pub fn terms(&self) -> Vec<(u64, Ratio<u64>)> {
        self.terms
            .iter()
            .map(|(&e, &c)| (e, Ratio::new(c, self.denom)))
            .collect()
    }

    pub fn exact_terms(&self) -> Vec<ExactTerm> {
        self.terms()
            .into_iter()
            .map(|(exponent, c)| ExactTerm {
                exponent,
                coefficient: c.to_string(),
            })
            .collect()
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&e, &c)| c as f64 * p.powf(e as f64))
            .sum::<f64>()
            / self.denom as f64
    }

    /// Evaluate at `p = 1 - eps` without cancellation near `eps = 0`.
    pub fn eval_eps(&self, eps: f64) -> f64 {
        let l = (-eps).ln_1p();
        self.terms
            .iter()
            .map(|(&e, &c)| {
                let v = if e == 0 { 1.0 } else { (e as f64 * l).exp() };
                c as f64 * v
            })
            .sum::<f64>()
            / self.denom as f64
    }

    pub fn at_one(&self) -> Ratio<u64> {
        Ratio::new(self.terms.values().sum(), self.denom)
    }

    pub fn at_zero(&self) -> Ratio<u64> {
        Ratio::new(self.terms.get(&0).copied().unwrap_or(0), self.denom)
    }

    /// `-dF/dp` at `p = 1`, i.e. `F(1 - eps) ~ 1 - slope * eps`.
    pub fn ler_slope(&self) -> Ratio<u64> {
        Ratio::new(self.terms.iter().map(|(&e, &c)| e * c).sum(), self.denom)
    }

    pub fn max_exponent(&self) -> u64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, &c)| match (c, e) {
                (1, 0) => "1".to_string(),
                (c, 0) => c.to_string(),
                (1, e) => format!("p^{e}"),
                (c, e) => format!("{c}p^{e}"),
            })
            .collect();
        write!(f, "({})/{}", parts.join(" + "), self.denom)
    }
}

fn check_p(p: f64) -> Result<(), PlanError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(PlanError::BadProbability(p))
    }
}

pub fn g_parity(x: u64) -> u64 {
    x % 2
}

fn parity(x: u8) -> bool {
    x.count_ones() % 2 == 1
}

/// General path: character sum over maps given as target bitmasks `(z, x)`.
pub fn fidelity_from_maps(masks: &[(u8, u8)], k: usize) -> Polynomial {
    let mut groups: HashMap<(u8, u8), u64> = HashMap::new();
    for &m in masks {
        *groups.entry(m).or_insert(0) += 1;
    }
    let exps = (0..1u8 << k).map(|u| {
        groups
            .iter()
            .filter(|((z, x), _)| parity(z & u) || parity(x & u))
            .map(|(_, c)| c)
            .sum::<u64>()
    });
    Polynomial::from_exponents(1 << k, exps)
}

/// General path by direct application: every map acts as a mixture of
/// Z-conjugations on the dense target density matrix.
pub fn fidelity_from_maps_dense(masks: &[(u8, u8)], targets: &Targets, p: f64) -> f64 {
    let k = targets.len();
    let d = 1usize << k;
    let shape = targets.shape();
    let psi: Vec<f64> = (0..d)
        .map(|x| {
            let sign = shape
                .iter()
                .filter(|&&(i, j)| (x >> i) & 1 == 1 && (x >> j) & 1 == 1)
                .count();
            let s = if sign % 2 == 0 { 1.0 } else { -1.0 };
            s / (d as f64).sqrt()
        })
        .collect();
    let mut rho: Vec<f64> = (0..d * d).map(|ij| psi[ij / d] * psi[ij % d]).collect();
    let sgn = |s: u8, i: usize| if parity(s & i as u8) { -1.0 } else { 1.0 };
    for &(z, x) in masks {
        let pats = [0u8, z, x, z ^ x];
        let mut next = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let avg: f64 = pats.iter().map(|&s| sgn(s, i) * sgn(s, j)).sum::<f64>() / 4.0;
                next[i * d + j] = rho[i * d + j] * (p + (1.0 - p) * avg);
            }
        }
        rho = next;
    }
    let mut f = 0.0;
    for i in 0..d {
        for j in 0..d {
            f += psi[i] * rho[i * d + j] * psi[j];
        }
    }
    f
}

/// `1/4 (1 + p^(2+2t) (p^(wa+wb) + p^(wa+wg) + p^(wb+wg)))`, summed over unordered pairs.
pub fn bell_exact_poly(w: &BellWeights) -> Polynomial {
    let base = 2 + 2 * w.t;
    Polynomial::from_exponents(
        4,
        [
            0,
            base + w.alpha + w.beta,
            base + w.alpha + w.gamma,
            base + w.beta + w.gamma,
        ],
    )
}

pub fn bell_fidelity_exact(w: &BellWeights, p: f64) -> Result<f64, PlanError> {
    check_p(p)?;
    Ok(bell_exact_poly(w).eval(p))
}

/// `(3 + 3t + wa + wb + wg) / 2`.
pub fn bell_fidelity_ler(w: &BellWeights) -> Ratio<u64> {
    Ratio::new(3 + 3 * w.t + w.sum(), 2)
}

/// Number of the three bare GHZ3 target maps that each character sees,
/// indexed by pattern `4a + 2b + c` minus one.
const GHZ3_TARGET_EXP: [u64; 7] = [2, 3, 3, 2, 2, 3, 3];

fn ghz3_w_of(w: &Ghz3Weights, u: u8) -> u64 {
    (1..8u8).filter(|&s| parity(s & u)).map(|s| w.get(s)).sum()
}

/// State fidelity of a GHZ3 target from measured-qubit weights:
/// `1/8 (1 + sum_{u != 0} p^(T(u) + W(u)))`.
pub fn ghz3_exact_poly(w: &Ghz3Weights) -> Polynomial {
    let exps = std::iter::once(0)
        .chain((1..8u8).map(|u| GHZ3_TARGET_EXP[u as usize - 1] + ghz3_w_of(w, u)));
    Polynomial::from_exponents(8, exps)
}

pub fn ghz3_fidelity_exact(w: &Ghz3Weights, p: f64) -> Result<f64, PlanError> {
    check_p(p)?;
    Ok(ghz3_exact_poly(w).eval(p))
}

/// First-order slope of [`ghz3_exact_poly`]: `(9 + 2 sum w) / 4`.
pub fn ghz3_exact_slope(w: &Ghz3Weights) -> Ratio<u64> {
    Ratio::new(9 + 2 * w.sum(), 4)
}

/// Four-term expression that counts the leaf-parity pattern `Z_a Z_c` as
/// harmless. It is the probability that the residual pattern lies in
/// `{1, Z_a Z_c}`, which upper-bounds the state fidelity.
pub fn ghz3_reduced_poly(w: &Ghz3Weights) -> Polynomial {
    let g = |s: u8| w.get(s);
    Polynomial::from_exponents(
        4,
        [
            0,
            2 + g(0b001) + g(0b011) + g(0b100) + g(0b110),
            3 + g(0b001) + g(0b010) + g(0b100) + g(0b111),
            3 + g(0b010) + g(0b011) + g(0b110) + g(0b111),
        ],
    )
}

pub fn ghz3_fidelity_reduced(w: &Ghz3Weights, p: f64) -> Result<f64, PlanError> {
    check_p(p)?;
    Ok(ghz3_reduced_poly(w).eval(p))
}

/// Slope of [`ghz3_reduced_poly`]: `(4 + sum w - w101) / 2`.
pub fn ghz3_fidelity_ler(w: &Ghz3Weights) -> Ratio<u64> {
    Ratio::new(4 + w.sum() - w.get(0b101), 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn bell_closed_forms() {
        let sw = BellWeights::new(0, 0, 0, 1);
        assert!(close(bell_fidelity_exact(&sw, 1.0).unwrap(), 1.0));
        let p: f64 = 0.95;
        assert!(close(
            bell_fidelity_exact(&sw, p).unwrap(),
            0.25 * (1.0 + 3.0 * p.powi(4))
        ));
        assert_eq!(bell_fidelity_ler(&sw), Ratio::from_integer(3));
        assert_eq!(
            bell_fidelity_ler(&BellWeights::new(0, 1, 1, 1)),
            Ratio::from_integer(4)
        );
        assert_eq!(
            bell_fidelity_ler(&BellWeights::new(1, 1, 2, 0)),
            Ratio::new(7, 2)
        );

        let n = 7u64;
        let ghz = BellWeights::new(n - 2, 0, 0, 0);
        let want = 0.25 * (1.0 + p * p + 2.0 * p.powi(n as i32));
        assert!(close(bell_fidelity_exact(&ghz, p).unwrap(), want));
        assert_eq!(bell_fidelity_ler(&ghz), Ratio::new(n + 1, 2));
        assert!(bell_fidelity_exact(&ghz, -0.1).is_err());
    }

    #[test]
    fn ghz3_bare_state() {
        let w = Ghz3Weights::default();
        let poly = ghz3_exact_poly(&w);
        assert_eq!(poly.at_one(), Ratio::from_integer(1));
        assert_eq!(poly.at_zero(), Ratio::new(1, 8));
        let p: f64 = 0.8;
        assert!(close(
            poly.eval(p),
            (1.0 + 3.0 * p * p + 4.0 * p.powi(3)) / 8.0
        ));
        assert_eq!(poly.ler_slope(), Ratio::new(9, 4));
        let red = ghz3_reduced_poly(&w);
        assert!(close(red.eval(p), 0.25 * (1.0 + p * p + 2.0 * p.powi(3))));
        assert_eq!(ghz3_fidelity_ler(&w), Ratio::from_integer(2));
    }

    #[test]
    fn character_sum_matches_dense() {
        let t = Targets::Ghz3 { a: 0, b: 1, c: 2 };
        let masks = [(1, 2), (2, 5), (4, 2), (5, 5), (3, 0), (0, 6)];
        for p in [0.0, 0.3, 0.9, 1.0] {
            let a = fidelity_from_maps(&masks, 3).eval(p);
            let b = fidelity_from_maps_dense(&masks, &t, p);
            assert!(close(a, b), "{a} {b}");
        }
    }

    #[test]
    fn eps_evaluation_is_stable() {
        let poly = bell_exact_poly(&BellWeights::new(3, 1, 4, 0));
        for eps in [0.0, 1e-9, 0.01, 0.5, 1.0] {
            assert!((poly.eval_eps(eps) - poly.eval(1.0 - eps)).abs() < 1e-12);
        }
        assert_eq!(poly.to_string(), "(1 + p^6 + p^7 + p^9)/4");
    }

    #[test]
    fn parity_helper() {
        assert_eq!(g_parity(0), 0);
        assert_eq!(g_parity(1), 1);
        assert_eq!(g_parity(7), 1);
    }
}
