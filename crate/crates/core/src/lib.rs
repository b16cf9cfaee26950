//! Exact tools for piecewise-linear knot pseudodiagrams: realizability of
//! resolutions as straight-segment embeddings, knot identification of
//! resolutions, weighted resolution sets and forcing numbers.

pub mod analysis;
pub mod diagram;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod invariants;
pub mod io;
pub mod lp;
pub mod realizability;
pub mod search;

pub use diagram::{CrossingAssignment, PdCode, Pseudodiagram, Shadow};
pub use error::Error;
pub use geometry::{PlanePoint, Rational};
