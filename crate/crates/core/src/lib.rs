//! Noise propagation through graph-state manipulations in entanglement-based
//! quantum networks.
//!
//! A network shares a multipartite resource (Bell pairs at a switch, a GHZ
//! star, a toroidal cluster, a tree). Parties request a Bell pair or a GHZ3
//! state; a [`plan::ManipulationPlan`] of local Pauli measurements and merges
//! carves that state out of the resource. Every qubit of the resource first
//! suffers local depolarizing noise with parameter `p`. The [`engine`]
//! pushes each of those noise maps through the plan and onto the small
//! target, where [`fidelity`] turns them into an exact polynomial in `p`.
//!
//! ```
//! use netnoise::engine::run_plan;
//! use netnoise::plan::Strategy;
//! use netnoise::topologies::{build_resource, plan_bell, Method, PathStyle, ResourceSpec};
//!
//! let ring = build_resource(&ResourceSpec::Cluster { k: 1, side: 12 }).unwrap();
//! let plan = plan_bell(&ring, 0, 4, Method::Y, PathStyle::Straight, Strategy::SideToSide).unwrap();
//! let run = run_plan(&ring.graph, &plan, 0.99).unwrap();
//! // Three inner qubits between the targets: F ~ 1 - 4 eps.
//! assert_eq!(run.exact().ler_slope().to_string(), "4");
//! ```
//!
//! [`oracle`] recomputes the same numbers by dense density-matrix
//! simulation for resources of up to a dozen qubits; [`validation`] runs the
//! two against each other.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod fidelity;
pub mod graph;
pub mod oracle;
pub mod plan;
pub mod report;
pub mod topologies;
pub mod validation;
