use netnoise::engine::{run_plan, BellWeights, Ghz3Weights, Run, WeightVector};
use netnoise::plan::{ManipulationPlan, Step, Strategy};
use netnoise::topologies::predict::*;
use netnoise::topologies::{
    build_resource, plan_bell, plan_ghz3, shortest_path, Method, PathStyle, Resource, ResourceSpec,
};

fn run(res: &Resource, plan: &ManipulationPlan) -> Run {
    let r = run_plan(&res.graph, plan, 0.9).unwrap();
    assert!(
        r.is_canonical(),
        "general {:?} passive {:?}",
        r.general,
        r.passive
    );
    r
}

fn bell(r: &Run) -> BellWeights {
    match r.weights {
        WeightVector::Bell(w) => w,
        _ => panic!("expected Bell weights"),
    }
}

fn ghz3(r: &Run) -> Ghz3Weights {
    match r.weights {
        WeightVector::Ghz3(w) => w,
        _ => panic!("expected GHZ3 weights"),
    }
}

fn cluster(k: usize, side: usize) -> Resource {
    build_resource(&ResourceSpec::Cluster { k, side }).unwrap()
}

fn straight_bell(res: &Resource, k: usize, n: usize) -> BellWeights {
    let a = res.at(&vec![1; k]);
    let mut c = vec![1; k];
    c[0] += n + 1;
    let plan = plan_bell(
        res,
        a,
        res.at(&c),
        Method::Y,
        PathStyle::Straight,
        Strategy::SideToSide,
    )
    .unwrap();
    bell(&run(res, &plan))
}

#[test]
fn ring_matches_closed_form() {
    for n in 0..=12u64 {
        let res = cluster(1, 2 * n as usize + 8);
        assert_eq!(straight_bell(&res, 1, n as usize), w1d(n), "n={n}");
    }
}

#[test]
fn torus_straight_is_scaled_ring() {
    for n in 0..=8u64 {
        let res = cluster(2, 2 * n as usize + 6);
        assert_eq!(straight_bell(&res, 2, n as usize), w2d_straight(n), "n={n}");
    }
    for k in 3..=4usize {
        for n in 0..=3u64 {
            let res = cluster(k, 2 * n as usize + 6);
            assert_eq!(
                straight_bell(&res, k, n as usize),
                w_kd(k as u64, n),
                "k={k} n={n}"
            );
        }
    }
}

#[test]
fn x_stairway_matches_closed_form() {
    let res = cluster(2, 16);
    for n in 0..=10u64 {
        let dx = n as usize / 2 + 1;
        let dy = (n as usize).div_ceil(2);
        let style = if dy == 0 {
            PathStyle::Straight
        } else {
            PathStyle::Stairway
        };
        let plan = plan_bell(
            &res,
            res.at(&[2, 2]),
            res.at(&[2 + dx, 2 + dy]),
            Method::X,
            style,
            Strategy::SideToSide,
        )
        .unwrap();
        assert_eq!(plan.count(|s| matches!(s, Step::X { .. })), n as usize);
        assert_eq!(plan.count(|s| matches!(s, Step::Z(_))), 6);
        assert_eq!(bell(&run(&res, &plan)), w2d_x_stairway(n), "n={n}");
    }
}

#[test]
fn y_stairway_slope() {
    let res = cluster(2, 16);
    for n in 1..=9u64 {
        let dx = n as usize / 2 + 1;
        let dy = (n as usize).div_ceil(2);
        let plan = plan_bell(
            &res,
            res.at(&[2, 2]),
            res.at(&[2 + dx, 2 + dy]),
            Method::Y,
            PathStyle::Stairway,
            Strategy::SideToSide,
        )
        .unwrap();
        let w = bell(&run(&res, &plan));
        assert_eq!(
            netnoise::fidelity::bell_fidelity_ler(&w),
            y_stairway_engine_slope(n),
            "n={n}"
        );
    }
}

#[test]
fn small_resources() {
    let res = build_resource(&ResourceSpec::SwitchBell { externals: 4 }).unwrap();
    let plan = plan_bell(&res, 0, 4, Method::Y, PathStyle::Straight, Strategy::Custom).unwrap();
    assert_eq!(bell(&run(&res, &plan)), w_switch_bell());

    let res = build_resource(&ResourceSpec::SwitchGhz3 { externals: 4 }).unwrap();
    let plan = plan_bell(&res, 1, 4, Method::Y, PathStyle::Straight, Strategy::Custom).unwrap();
    let w = bell(&run(&res, &plan));
    assert!(w.same_up_to_relabel(&w_switch_ghz3_cross()), "{w:?}");
    let plan = plan_bell(&res, 1, 2, Method::Y, PathStyle::Straight, Strategy::Custom).unwrap();
    assert_eq!(bell(&run(&res, &plan)), w_switch_ghz3_same());

    for n in 3..=12u64 {
        let res = build_resource(&ResourceSpec::Ghz { n: n as usize }).unwrap();
        let plan = plan_bell(&res, 1, 2, Method::Y, PathStyle::Straight, Strategy::Custom).unwrap();
        assert_eq!(bell(&run(&res, &plan)), w_ghz_bell(n));
        let plan = plan_ghz3(&res, 1, 0, 2, Strategy::Custom).unwrap();
        assert_eq!(ghz3(&run(&res, &plan)), w_ghz_ghz3(n));
    }
}

#[test]
fn ghz3_on_rings_and_grids() {
    for n_ab in 0..=5u64 {
        for n_bc in 0..=5u64 {
            let res = cluster(1, (n_ab + n_bc) as usize + 8);
            let b = n_ab as u32 + 1;
            let plan =
                plan_ghz3(&res, 0, b, b + n_bc as u32 + 1, Strategy::OutwardSideToSide).unwrap();
            assert_eq!(
                ghz3(&run(&res, &plan)),
                w1d_ghz3(n_ab, n_bc),
                "{n_ab} {n_bc}"
            );

            let res = cluster(2, (n_ab + n_bc) as usize + 8);
            let (a, b, c) = (
                res.at(&[1, 3]),
                res.at(&[2 + n_ab as usize, 3]),
                res.at(&[3 + (n_ab + n_bc) as usize, 3]),
            );
            let plan = plan_ghz3(&res, a, b, c, Strategy::OutwardSideToSide).unwrap();
            assert_eq!(
                ghz3(&run(&res, &plan)),
                w_kd_ghz3(2, n_ab, n_bc),
                "{n_ab} {n_bc}"
            );
        }
    }
}

#[test]
fn tree_bell_and_ghz3() {
    let res = build_resource(&ResourceSpec::binary_tree(6)).unwrap();
    // Apex 1 has a parent, so one outer qubit more than a root apex and
    // exactly twice the ring vector.
    let plan = plan_bell(
        &res,
        15,
        19,
        Method::Y,
        PathStyle::Straight,
        Strategy::SideToSide,
    )
    .unwrap();
    assert_eq!(
        plan.measured().len() as u64,
        5 + outer_count::binary_tree(5) + 1
    );
    assert_eq!(bell(&run(&res, &plan)), w_tree_bell(5));
    // Root apex: outer count drops by one.
    let plan = plan_bell(
        &res,
        3,
        5,
        Method::Y,
        PathStyle::Straight,
        Strategy::SideToSide,
    )
    .unwrap();
    assert_eq!(
        plan.measured().len() as u64,
        3 + outer_count::binary_tree(3)
    );
    assert_eq!(bell(&run(&res, &plan)).sum(), 2 * 3 + 3);

    let inner = |s, t| shortest_path(&res, s, t, PathStyle::Straight).unwrap().n() as u64;
    let junction_x = |a, b, c| {
        let plan = plan_ghz3(&res, a, b, c, Strategy::OutwardSideToSide).unwrap();
        let r = match plan.steps.last() {
            Some(Step::X { v, .. }) => *v,
            other => panic!("expected X at junction, got {other:?}"),
        };
        (r, ghz3(&run(&res, &plan)))
    };
    // No path crosses the tree root.
    for &(a, b, c) in &[(15u32, 9u32, 17u32), (31, 20, 35), (7, 10, 9), (31, 10, 40)] {
        let (r, w) = junction_x(a, b, c);
        assert_eq!(
            w,
            tree_ghz3_weights_engine(inner(a, r), inner(b, r), inner(c, r)),
            "{a} {b} {c}"
        );
    }
    // The root of the tree has no parent, so the root path loses one outer qubit.
    let (r, w) = junction_x(15, 5, 19);
    let mut expect = tree_ghz3_weights_engine(inner(15, r), inner(5, r), inner(19, r));
    expect.0[4] -= 1;
    assert_eq!(w, expect);
}

#[test]
fn stairway_neighbourhoods_under_x_measurements() {
    // Path v1..v5 is 0..4, outer neighbours a..i are 5..13.
    let name = |v: u32| -> String {
        if v < 5 {
            format!("v{}", v + 1)
        } else {
            ((b'a' + (v - 5) as u8) as char).to_string()
        }
    };
    let id = |s: &str| -> u32 {
        match s.strip_prefix('v') {
            Some(k) => k.parse::<u32>().unwrap() - 1,
            None => (s.as_bytes()[0] - b'a') as u32 + 5,
        }
    };
    let t0 = [
        "a b i v2",
        "v1 h g v3",
        "v2 v4 c b",
        "v3 v5 g f",
        "v4 c d e",
    ];
    let mut edges = Vec::new();
    for (v, row) in t0.iter().enumerate() {
        for u in row.split(' ').map(id) {
            if (v as u32) < u {
                edges.push((v as u32, u));
            }
        }
    }
    let mut g = netnoise::graph::GraphState::new(14, &edges).unwrap();
    let expected: [[&str; 5]; 3] = [
        ["v3 g h", "", "v1 v4 c a i", "v3 v5 g f", "v4 c d e"],
        ["v4 c a i", "", "", "v1 v5 h f", "v4 c d e"],
        ["v5 h f", "", "", "", "v1 d e a i"],
    ];
    for (t, column) in expected.iter().enumerate() {
        g.measure_x(t as u32 + 1, 0).unwrap();
        for (v, want) in column.iter().enumerate() {
            let mut want: Vec<u32> = want.split_whitespace().map(id).collect();
            want.sort();
            let got: Vec<u32> = g.neighbors(v as u32).iter().copied().collect();
            assert_eq!(
                got,
                want,
                "t={} N(v{}) = {:?}",
                t + 1,
                v + 1,
                got.iter().map(|&u| name(u)).collect::<Vec<_>>()
            );
        }
    }
    // Outer qubits left hanging off the two ends.
    let hanging: std::collections::BTreeSet<u32> = g
        .neighbors(0)
        .iter()
        .chain(g.neighbors(4))
        .copied()
        .filter(|&u| u > 4)
        .collect();
    assert_eq!(hanging, "a d e f h i".split(' ').map(id).collect());
}
