//! Solvers for the minimum shared-power edge cut problem.
//!
//! Given an edge-weighted graph with terminals `s` and `t`, assign a
//! non-negative power to every other vertex; an edge disappears once the
//! powers at its endpoints sum to at least its weight. The goal is to
//! disconnect `s` from `t` at minimum total power.
//!
//! The crate provides:
//! - instance parsing, validation, and the feasibility checker ([`instance`]),
//! - a blocking-flow engine for minimum s-t vertex cuts ([`mincut`]),
//! - the exact bottleneck solver for the uniform-power variant ([`bottleneck`]),
//! - (1+eps) schemes and exact integer/uniform solvers ([`fptas`]),
//! - exact solvers for finite per-vertex power menus ([`domain`]),
//! - the rectangular barrier-coverage front-end over sensor disks ([`barrier`]),
//! - a brute-force optimum oracle for desk-scale verification ([`oracle`]).

pub mod barrier;
pub mod bottleneck;
pub mod domain;
pub mod error;
pub mod fptas;
pub mod instance;
pub mod mincut;
pub mod oracle;
#[cfg(test)]
pub(crate) mod testgen;

pub use error::{Error, Result};
pub use instance::{
    is_feasible_cut, CutVerdict, Edge, EdgeRecord, Instance, Node, PowerAssignment, SolveResult,
};
