use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use netnoise::graph::VertexId;
use netnoise::plan::Strategy;
use netnoise::topologies::{Method, PathStyle, ResourceSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// How target qubits are chosen when they are not listed explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Farthest-apart Bell pair.
    Worst,
    /// Bell pairs drawn uniformly from the endpoints with a seeded RNG.
    Uniform,
}

/// Every knob of every subcommand. Missing fields fall back to flags, then
/// to per-command defaults.
#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub family: Option<String>,
    /// Network size: externals for switches, qubits otherwise.
    pub n: Option<u64>,
    pub k: Option<usize>,
    pub side: Option<usize>,
    pub branching: Option<Vec<usize>>,
    pub depth: Option<usize>,
    pub targets: Option<Vec<VertexId>>,
    pub sampling: Option<Sampling>,
    pub samples: Option<usize>,
    pub method: Option<Method>,
    pub strategy: Option<Strategy>,
    pub path: Option<PathStyle>,
    pub p: Option<f64>,
    pub p_grid: Option<Vec<f64>>,
    pub n_grid: Option<Vec<u64>>,
    pub eps: Option<f64>,
    pub max_qubits: Option<usize>,
    pub mutate: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    /// Write the resource graph as an edge list.
    pub save_graph: Option<PathBuf>,
}

/// Command-line flags shared by all subcommands.
#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// Config file (TOML or JSON); its values override flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// switch-bell, switch-ghz3, ghz, cluster, tree. For `threshold`, a
    /// comma list of ghz, 1d, 2d, 3d, kd, kd-bound, tree.
    #[arg(long)]
    pub family: Option<String>,
    /// Network size N.
    #[arg(long)]
    pub n: Option<u64>,
    /// Cluster dimension.
    #[arg(long)]
    pub k: Option<usize>,
    /// Cluster side length (overrides N).
    #[arg(long)]
    pub side: Option<usize>,
    /// Tree child counts per level, e.g. 3,2,2.
    #[arg(long)]
    pub branching: Option<String>,
    /// Binary tree depth (overrides N).
    #[arg(long)]
    pub depth: Option<usize>,
    /// `a,b` (Bell), `a,b,c` (GHZ3 rooted at b), `worst` (default) or `uniform`.
    #[arg(long)]
    pub targets: Option<String>,
    /// Draws for uniform sampling.
    #[arg(long)]
    pub samples: Option<usize>,
    /// y or x.
    #[arg(long)]
    pub method: Option<String>,
    /// side-to-side, outward-side-to-side, custom.
    #[arg(long)]
    pub strategy: Option<String>,
    /// straight, corner, stairway.
    #[arg(long)]
    pub path: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma list `0.9,0.99` or range `start:stop:count`.
    #[arg(long)]
    pub p_grid: Option<String>,
    /// Comma list of network sizes.
    #[arg(long)]
    pub n_grid: Option<String>,
    /// Noise level for the X-versus-Y table.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Largest resource in the validation matrix.
    #[arg(long)]
    pub max_qubits: Option<usize>,
    /// Validate a deliberately broken Y rule.
    #[arg(long)]
    pub mutate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write the resource graph as an edge list (first line N, then `u v`).
    #[arg(long)]
    pub save_graph: Option<PathBuf>,
}

/// Parse a kebab-case flag value into a snake_case serde enum.
fn parse_enum<T: DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    let v = serde_json::Value::String(s.trim().replace('-', "_").to_lowercase());
    serde_json::from_value(v).map_err(|_| anyhow!("unknown {what} '{s}'"))
}

fn parse_list<T: std::str::FromStr>(what: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| anyhow!("bad {what} entry '{x}'"))
        })
        .collect()
}

pub fn parse_p_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, n] => {
            let (a, b): (f64, f64) = (a.trim().parse()?, b.trim().parse()?);
            let n: usize = n.trim().parse()?;
            if n < 2 {
                bail!("p-grid range needs at least two points");
            }
            Ok((0..n)
                .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                .collect())
        }
        [_] => parse_list("p-grid", s),
        _ => bail!("p-grid must be a comma list or start:stop:count"),
    }
}

impl Flags {
    pub fn to_config(&self) -> Result<RunConfig> {
        let (targets, sampling) = match self.targets.as_deref().map(str::trim) {
            None => (None, None),
            Some("worst") => (None, Some(Sampling::Worst)),
            Some("uniform") => (None, Some(Sampling::Uniform)),
            Some(s) => (Some(parse_list("target", s)?), None),
        };
        Ok(RunConfig {
            command: None,
            family: self.family.clone(),
            n: self.n,
            k: self.k,
            side: self.side,
            branching: self
                .branching
                .as_deref()
                .map(|s| parse_list("branching", s))
                .transpose()?,
            depth: self.depth,
            targets,
            sampling,
            samples: self.samples,
            method: self
                .method
                .as_deref()
                .map(|s| parse_enum("method", s))
                .transpose()?,
            strategy: self
                .strategy
                .as_deref()
                .map(|s| parse_enum("strategy", s))
                .transpose()?,
            path: self
                .path
                .as_deref()
                .map(|s| parse_enum("path style", s))
                .transpose()?,
            p: self.p,
            p_grid: self.p_grid.as_deref().map(parse_p_grid).transpose()?,
            n_grid: self
                .n_grid
                .as_deref()
                .map(|s| parse_list("n-grid", s))
                .transpose()?,
            eps: self.eps,
            max_qubits: self.max_qubits,
            mutate: self.mutate.then_some(true),
            out: self.out.clone(),
            format: self.format,
            seed: self.seed,
            workers: self.workers,
            save_graph: self.save_graph.clone(),
        })
    }
}

pub fn load_file(path: &Path) -> Result<RunConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg: RunConfig = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
    } else {
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
    };
    if cfg.targets.is_some() && cfg.sampling.is_some() {
        bail!("config gives both explicit targets and a sampling mode");
    }
    Ok(cfg)
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $(if $top.$f.is_some() { $base.$f = $top.$f; })*
    };
}

impl RunConfig {
    /// Fields set in `top` replace those in `self`. Explicit targets and
    /// sampling mode are one setting: either in `top` replaces both.
    pub fn overlay(mut self, top: RunConfig) -> RunConfig {
        if top.targets.is_some() || top.sampling.is_some() {
            self.targets = top.targets.clone();
            self.sampling = top.sampling;
        }
        overlay!(self, top; command, family, n, k, side, branching, depth, samples, method,
            strategy, path, p, p_grid, n_grid, eps, max_qubits, mutate, out, format, seed, workers, save_graph);
        self
    }

    /// Flags, then the config file on top.
    pub fn resolve(command: &str, flags: &Flags) -> Result<RunConfig> {
        let mut cfg = flags.to_config()?;
        if let Some(path) = &flags.config {
            cfg = cfg.overlay(load_file(path)?);
        }
        if let Some(c) = &cfg.command {
            if c != command {
                bail!("config file is for '{c}', not '{command}'");
            }
        }
        Ok(cfg)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn family(&self) -> Result<&str> {
        self.family
            .as_deref()
            .ok_or_else(|| anyhow!("--family is required"))
    }

    /// Resource from family and size fields.
    pub fn resource_spec(&self) -> Result<ResourceSpec> {
        let need_n = || {
            self.n
                .ok_or_else(|| anyhow!("--n is required for this family"))
        };
        Ok(match self.family()? {
            "switch-bell" => ResourceSpec::SwitchBell {
                externals: need_n()? as usize,
            },
            "switch-ghz3" => ResourceSpec::SwitchGhz3 {
                externals: need_n()? as usize,
            },
            "ghz" => ResourceSpec::Ghz {
                n: need_n()? as usize,
            },
            fam @ ("cluster" | "1d" | "2d" | "3d") => {
                let k = match fam {
                    "cluster" => self.k.unwrap_or(1),
                    _ => (fam.as_bytes()[0] - b'0') as usize,
                };
                if k == 0 {
                    bail!("--k must be positive");
                }
                let side = match self.side {
                    Some(s) => s,
                    None => (need_n()? as f64).powf(1.0 / k as f64).round() as usize,
                };
                ResourceSpec::Cluster { k, side }
            }
            "tree" => match (&self.branching, self.depth) {
                (Some(b), _) => ResourceSpec::Tree {
                    branching: b.clone(),
                },
                (None, Some(d)) => ResourceSpec::binary_tree(d),
                (None, None) => {
                    let d = (((need_n()? + 1) as f64).log2() - 1.0).round().max(1.0) as usize;
                    ResourceSpec::binary_tree(d)
                }
            },
            other => bail!("unknown family '{other}'"),
        })
    }

    /// `p` values in the order given; a grid wins over a single `p`.
    pub fn ps(&self) -> Result<Vec<f64>> {
        let ps = match (&self.p_grid, self.p) {
            (Some(g), _) => g.clone(),
            (None, Some(p)) => vec![p],
            (None, None) => bail!("--p or --p-grid is required"),
        };
        if let Some(bad) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            bail!("probability {bad} is outside [0, 1]");
        }
        Ok(ps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_wins_over_flags() {
        let flags = Flags {
            family: Some("ghz".into()),
            n: Some(5),
            targets: Some("1,2".into()),
            ..Default::default()
        };
        let file = RunConfig {
            n: Some(9),
            sampling: Some(Sampling::Worst),
            ..Default::default()
        };
        let cfg = flags.to_config().unwrap().overlay(file);
        assert_eq!(cfg.n, Some(9));
        assert_eq!(cfg.family.as_deref(), Some("ghz"));
        assert_eq!((cfg.targets, cfg.sampling), (None, Some(Sampling::Worst)));
    }

    #[test]
    fn flag_values() {
        assert_eq!(parse_p_grid("0.5:1:3").unwrap(), vec![0.5, 0.75, 1.0]);
        assert_eq!(parse_p_grid("0.9,1").unwrap(), vec![0.9, 1.0]);
        assert!(parse_p_grid("1:2").is_err());
        let s: Strategy = parse_enum("strategy", "outward-side-to-side").unwrap();
        assert_eq!(s, Strategy::OutwardSideToSide);
        let m: Method = parse_enum("method", "X").unwrap();
        assert_eq!(m, Method::X);
        assert!(parse_enum::<PathStyle>("path", "zigzag").is_err());
    }

    #[test]
    fn sizes_per_family() {
        let cfg = |family: &str, n: u64| RunConfig {
            family: Some(family.into()),
            n: Some(n),
            k: Some(3),
            ..Default::default()
        };
        assert_eq!(
            cfg("cluster", 1_000_000).resource_spec().unwrap(),
            ResourceSpec::Cluster { k: 3, side: 100 }
        );
        assert_eq!(
            cfg("tree", 127).resource_spec().unwrap(),
            ResourceSpec::binary_tree(6)
        );
        assert!(cfg("torus", 9).resource_spec().is_err());
    }
}
