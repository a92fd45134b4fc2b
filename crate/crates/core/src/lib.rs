//! Robust monotone submodular maximization under a cardinality constraint,
//! where an adversary may remove up to `tau` elements from the returned
//! set.
//!
//! The library provides:
//!
//! - an oracle contract for normalized monotone submodular functions with
//!   evaluation counting ([`oracle`]),
//! - concrete objectives: tabular functions, dominating-set coverage and
//!   exemplar clustering ([`objectives`]),
//! - greedy-family subroutines with near-greedy certificates
//!   ([`subroutines`]),
//! - the partitioned-robust solver, the OSU baseline and the approximation
//!   certificate ([`solvers`]),
//! - optimal (branch-and-bound) and greedy adversaries plus a brute-force
//!   verification oracle ([`adversary`]),
//! - dataset loaders and deterministic subsampling ([`data`]).

pub mod adversary;
pub mod data;
pub mod error;
pub mod ground;
pub mod objectives;
pub mod oracle;
pub mod solvers;
pub mod subroutines;
pub mod synthetic;

pub use adversary::{
    brute_force_robust_opt, greedy_removal, optimal_removal, optimal_removal_with, robust_value,
    AdversaryKind, BranchBoundOptions, RemovalResult,
};
pub use error::{Error, Result};
pub use ground::{ElementId, ElementSet, GroundSet};
pub use oracle::{Conditioned, EvalCounter, EvalCounts, Objective, Oracle};
pub use solvers::{
    bound_certificate, greedy_baseline, osu, partition_layout, pro, BoundCertificate, Bucket,
    PartitionLayout, PartitionSpec, RobustSolution,
};
pub use subroutines::{
    near_greedy_prefix_bound, run_subroutine, verify_beta_iterative, OrderedSolution,
    SubroutineSpec,
};
