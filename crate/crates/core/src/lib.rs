//! Exact enumeration of rhombus tilings of hexagons with holes.

pub mod check;
pub mod closed_form;
pub mod correlation;
pub mod counting;
pub mod error;
pub mod exact_linalg;
pub mod lattice;
pub mod lgv_paths;
pub mod matching_graph;
pub mod oracle;
pub mod par;

pub use error::{Error, Result};
pub use lattice::{build_region, HexDims, Orientation, Region, RegionSpec, RhombusKind, TriTriple};
