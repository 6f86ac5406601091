//! Exact-arithmetic invariants of toric origami templates.
//!
//! A template is a connected multigraph whose vertices carry Delzant
//! polytopes and whose edges carry shared fold facets. This crate
//! validates templates, glues the orbit-space face structure, and
//! computes the invariants determined by it: f/h/h'/h'' vectors, Betti
//! numbers (by a closed form and independently by a cut recursion),
//! integer homology of the dual poset's order complex, equivariant
//! Poincare series, restriction-map rank bookkeeping, and, in dimension
//! four, an explicit degree-2/degree-4 presentation with the mu-class
//! kernel basis. All arithmetic is exact.

// index-based loops mirror the formulas they implement
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub mod commands;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod homology;
pub mod invariants;
pub mod linalg;
pub mod orbit;
pub mod polytope;
pub mod ring4d;
pub mod template;

pub use error::{Error, Result};
