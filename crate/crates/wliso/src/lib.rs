//! Weisfeiler-Lehman graph-isomorphism toolkit: r-round k-dimensional
//! refinement (counting and count-free), an evaluable threshold/Boolean
//! circuit compilation of the refinement, exact Ehrenfeucht-Fraïssé
//! pebble-game depths, and a coordinate-based isomorphism algorithm for
//! rotation systems, with generators for the standard hard instance families.

pub mod circuit;
pub mod error;
pub mod games;
pub mod gen;
pub mod graph;
pub mod rotation;
pub mod structure;
pub mod wl;

pub use error::Error;
pub use graph::{Graph, TreeDecomposition};
pub use rotation::RotationSystem;
pub use structure::RelStructure;
