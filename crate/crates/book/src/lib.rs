//! Runs the guide's code blocks as doctests. mdbook cannot link against
//! workspace crates on its own, so each chapter is included here instead.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/graph-states.md")]
pub mod graph_states {}
#[doc = include_str!("../../../book/src/noise-maps.md")]
pub mod noise_maps {}
#[doc = include_str!("../../../book/src/fidelity.md")]
pub mod fidelity {}
#[doc = include_str!("../../../book/src/resources.md")]
pub mod resources {}
#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}
#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
