//! Entanglement decay of small cluster states stored in a dephasing
//! environment.
//!
//! The crate builds linear-chain (or arbitrary graph) cluster states,
//! rotates them into locally-equivalent representations with Hadamard
//! masks, dephases every qubit with equal strength `p`, and tracks the
//! negativity of chosen partial transposes as `p` grows. On top of that
//! sit sudden-death threshold location, classification of all Hadamard
//! representations into decay-equivalence classes, and robustness
//! rankings.
//!
//! Qubits are 1-indexed everywhere in the public API. Qubit 1 is the most
//! significant bit of a computational-basis index.

// `!(x >= lo)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod clusterstate;
pub mod dephasing;
mod error;
pub mod negativity;
pub mod qmatrix;

pub use analysis::{
    canonical_grid, classify_representations, decay_curve, esd_threshold, robustness_ranking,
    DecayCurve, EsdResult, EsdVerdict, RankingReport, RepClass,
};
pub use clusterstate::{
    apply_hadamards, build_cluster, density_from_state, ClusterSpec, DensityMatrix,
    RepresentationMask, StateVector,
};
pub use dephasing::{
    apply_dephasing_fast, apply_dephasing_kraus, kraus_pair, p_from_time, product_kraus,
    DephasingStrength, KrausSet,
};
pub use error::{Error, Result};
pub use negativity::{
    negativity, partial_transpose, tri_negativity, Measure, NegativityValue, QubitSubset,
    ZERO_THRESHOLD,
};
pub use qmatrix::ComplexMatrix;
