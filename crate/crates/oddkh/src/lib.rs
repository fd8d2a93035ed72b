//! Odd Khovanov homology of links from planar diagrams.
//!
//! The pipeline: parse a PD code, pick a one-circle resolution, extract
//! the signed linking matrix of its arcs, and build the chain complex
//! over the hypercube of resolutions from that seed alone. A geometric
//! construction straight from the resolved diagrams is kept alongside
//! as a cross-check, together with a mutation toolkit and the surgery
//! matrices presenting the branched double cover.

pub mod chords;
pub mod complex;
pub mod diagram;
pub mod exactalg;

pub use exactalg::{IntMatrix, PresentedGroup};
