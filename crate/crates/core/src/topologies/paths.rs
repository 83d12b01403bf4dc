use serde::{Deserialize, Serialize};

use super::{Layout, Resource};
use crate::error::SpecError;
use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStyle {
    /// Single axis.
    #[default]
    Straight,
    /// Axis-ordered: all steps along the lowest axis first, one corner per
    /// further axis.
    Corner,
    /// Two axes, alternating every step.
    Stairway,
}

impl PathStyle {
    pub fn name(&self) -> &'static str {
        match self {
            PathStyle::Straight => "straight",
            PathStyle::Corner => "corner",
            PathStyle::Stairway => "stairway",
        }
    }
}

/// A path between two targets; `vertices` includes both endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathChoice {
    pub style: PathStyle,
    pub vertices: Vec<VertexId>,
}

impl PathChoice {
    pub fn inner(&self) -> &[VertexId] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn n(&self) -> usize {
        self.vertices.len() - 2
    }
}

/// Signed minimal displacement per axis on a torus of side `s`.
fn displacement(ca: &[usize], cb: &[usize], s: usize) -> Vec<i64> {
    ca.iter()
        .zip(cb)
        .map(|(&a, &b)| {
            let d = (b + s - a) % s;
            if 2 * d <= s {
                d as i64
            } else {
                -((s - d) as i64)
            }
        })
        .collect()
}

fn walk(res: &Resource, a: VertexId, moves: &[(usize, i64)], side: usize) -> Vec<VertexId> {
    let mut c = res.coords(a);
    let mut out = vec![a];
    for &(ax, dir) in moves {
        c[ax] = (c[ax] + side).wrapping_add_signed(dir as isize) % side;
        out.push(res.at(&c));
    }
    out
}

fn tree_path(parent: &[Option<VertexId>], a: VertexId, b: VertexId) -> Vec<VertexId> {
    let anc = |mut x: VertexId| {
        let mut r = vec![x];
        while let Some(p) = parent[x as usize] {
            r.push(p);
            x = p;
        }
        r
    };
    let pa = anc(a);
    let pb = anc(b);
    let common = *pa
        .iter()
        .find(|x| pb.contains(x))
        .expect("tree is connected");
    let ia = pa.iter().position(|&x| x == common).unwrap();
    let ib = pb.iter().position(|&x| x == common).unwrap();
    let mut path: Vec<VertexId> = pa[..=ia].to_vec();
    path.extend(pb[..ib].iter().rev());
    path
}

/// Minimal path of the requested style between `a` and `b`.
///
/// Trees have a unique path and ignore `style`.
pub fn shortest_path(
    res: &Resource,
    a: VertexId,
    b: VertexId,
    style: PathStyle,
) -> Result<PathChoice, SpecError> {
    let none = || SpecError::NoPath {
        style: style.name(),
        a,
        b,
    };
    if a == b || a as usize >= res.qubit_count() || b as usize >= res.qubit_count() {
        return Err(none());
    }
    match &res.layout {
        Layout::Tree { parent, .. } => Ok(PathChoice {
            style,
            vertices: tree_path(parent, a, b),
        }),
        Layout::Torus { side, .. } => {
            let side = *side;
            let d = displacement(&res.coords(a), &res.coords(b), side);
            let axes: Vec<usize> = (0..d.len()).filter(|&i| d[i] != 0).collect();
            let step = |ax: usize| (ax, d[ax].signum());
            let moves: Vec<(usize, i64)> = match style {
                PathStyle::Straight if axes.len() == 1 => {
                    vec![step(axes[0]); d[axes[0]].unsigned_abs() as usize]
                }
                PathStyle::Corner if axes.len() >= 2 => axes
                    .iter()
                    .flat_map(|&ax| vec![step(ax); d[ax].unsigned_abs() as usize])
                    .collect(),
                PathStyle::Stairway if axes.len() == 2 => {
                    let (x, y) = (axes[0], axes[1]);
                    let (nx, ny) = (d[x].unsigned_abs(), d[y].unsigned_abs());
                    if nx.abs_diff(ny) > 1 {
                        return Err(none());
                    }
                    let (first, second) = if ny > nx { (y, x) } else { (x, y) };
                    (0..nx + ny)
                        .map(|i| step(if i % 2 == 0 { first } else { second }))
                        .collect()
                }
                _ => return Err(none()),
            };
            Ok(PathChoice {
                style,
                vertices: walk(res, a, &moves, side),
            })
        }
        _ => Err(SpecError::Unsupported(
            "paths exist only on clusters and trees".into(),
        )),
    }
}
