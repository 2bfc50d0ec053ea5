//! Exact lattice-theoretic machinery for the deformation classification of
//! real nonsingular cubic fourfolds via real K3 involutions.
//!
//! The crate is layered bottom-up:
//!
//! - [`matrix`]: arbitrary-precision integer matrices, Smith form, kernels.
//! - [`lattice`]: Gram lattices, signatures, reflections and twists.
//! - [`forms`]: discriminant groups and finite quadratic forms on
//!   2-elementary groups (parity, Brown invariant, isomorphism).
//! - [`catalog`]: the 75 real K3-involution classes with their eigenlattices.
//! - [`classes`]: odd / Wu / even-non-Wu elements, existence predicates,
//!   witnesses and the brute-force search oracle.
//! - [`graph`]: the adjacency graphs of K3 involutions and of cubic
//!   fourfolds, the morphism between them, and their structural checks.
//! - [`verify`]: the named verification suites driven by the CLI.

pub mod catalog;
pub mod classes;
pub mod error;
pub mod forms;
pub mod graph;
pub mod lattice;
pub mod matrix;
pub mod verify;

pub use error::{Error, Result};

/// Version tag carried by every JSON document the crate emits.
pub const SCHEMA: &str = "k4graph/1";
