//! Procedural tree-modeling toolkit: Weber-Penn parameter dictionaries,
//! 3D tree mesh growth, synthetic line-art sketch rendering, target-matrix
//! encoding, species identification, and reconstruction metrics.

pub mod codec;
pub mod math;
pub mod params;
pub mod sketch;
pub mod synthesis;

pub use params::{ParamRegistry, Species, SpeciesProfile, TreeParams};
