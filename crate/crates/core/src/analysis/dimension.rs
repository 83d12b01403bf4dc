use serde::Serialize;

fn g(n: f64) -> f64 {
    if (n.round() as u64) % 2 == 1 {
        1.0
    } else {
        0.0
    }
}

/// Average inner path length between two random nodes of an `n`-node torus
/// of dimension `k`, from a mean per-axis distance of `n^(1/k) / 4`.
pub fn avg_inner_kd(k: u32, n: f64) -> f64 {
    let k = k as f64;
    k / 4.0 * (n.powf(1.0 / k) - g(n)) - 0.5
}

/// Average inner plus outer measurements for a straight-path Bell pair.
pub fn avg_measurements_kd(k: u32, n: f64) -> f64 {
    (2.0 * k as f64 - 1.0) * (avg_inner_kd(k, n) + 2.0)
}

/// Dimension with the fewest average measurements, `k` in `1..=log2(n)`.
/// Ties go to the smaller `k`.
pub fn optimal_dimension(n: f64) -> (u32, f64) {
    let kmax = (n.log2().floor() as u32).max(1);
    let mut best = (1, avg_measurements_kd(1, n));
    for k in 2..=kmax {
        let m = avg_measurements_kd(k, n);
        if m < best.1 {
            best = (k, m);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionRow {
    pub k: u32,
    #[serde(rename = "N")]
    pub n: f64,
    pub avg_measurements: f64,
}

pub fn dimension_table(ns: &[f64], kmax: u32) -> Vec<DimensionRow> {
    ns.iter()
        .flat_map(|&n| {
            (1..=kmax).map(move |k| DimensionRow {
                k,
                n,
                avg_measurements: avg_measurements_kd(k, n),
            })
        })
        .collect()
}

/// Binary tree of `n = 2^(d+1) - 1` nodes.
pub fn tree_avg_binary(n: f64) -> f64 {
    2.0 * (n + 1.0).log2() - 3.0
}

/// Tree with branching `(3, 2, ..., 2)`, `n = 3 * 2^d - 2` nodes.
pub fn tree_avg_wide(n: f64) -> f64 {
    2.0 * ((n + 2.0) / 3.0).log2() - 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeVsClusterRow {
    pub depth: u32,
    pub series: &'static str,
    #[serde(rename = "N")]
    pub n: f64,
    pub tree_avg: f64,
    pub k_opt: u32,
    pub cluster_avg: f64,
}

/// Both tree series against the optimal cluster of the same size.
pub fn tree_vs_cluster(depths: impl IntoIterator<Item = u32>) -> Vec<TreeVsClusterRow> {
    let mut rows = Vec::new();
    for d in depths {
        let series = [
            (
                "binary",
                2f64.powi(d as i32 + 1) - 1.0,
                tree_avg_binary as fn(f64) -> f64,
            ),
            ("width3", 3.0 * 2f64.powi(d as i32) - 2.0, tree_avg_wide),
        ];
        for (name, n, avg) in series {
            let (k_opt, cluster_avg) = optimal_dimension(n);
            rows.push(TreeVsClusterRow {
                depth: d,
                series: name,
                n,
                tree_avg: avg(n),
                k_opt,
                cluster_avg,
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hundred_nodes_prefer_a_grid() {
        let (k, m) = optimal_dimension(100.0);
        assert_eq!(k, 2);
        assert!((m - 19.5).abs() < 1e-12);
        assert!((avg_measurements_kd(1, 100.0) - 26.5).abs() < 1e-12);
    }

    #[test]
    fn optimal_dimension_grows() {
        let ks: Vec<u32> = [1e2, 1e3, 1e4, 1e5]
            .iter()
            .map(|&n| optimal_dimension(n).0)
            .collect();
        assert!(ks.windows(2).all(|w| w[0] <= w[1]), "{ks:?}");
    }

    #[test]
    fn trees_need_fewer_measurements() {
        for r in tree_vs_cluster(1..=20) {
            assert!(r.tree_avg <= r.cluster_avg, "{r:?}");
            if r.n >= 100.0 {
                assert!(r.tree_avg < r.cluster_avg, "{r:?}");
            }
        }
        // Small binary trees tie with a ring exactly.
        let ties: Vec<f64> = tree_vs_cluster(1..=20)
            .into_iter()
            .filter(|r| r.tree_avg == r.cluster_avg)
            .map(|r| r.n)
            .collect();
        assert_eq!(ties, vec![7.0, 15.0]);
    }
}
