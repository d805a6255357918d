//! Tree geometry synthesis: growth semantics, radius formulas, crown
//! shapes, and triangle-mesh generation.

pub mod grow;
pub mod mesh;
pub mod radius;
pub mod shape;

pub use grow::{grow, grow_tree, growth_seed, GrowError, Leaf, StemPiece, Tree};
pub use mesh::{sweep_tube, Mesh, MeshError, MeshPart, TubePath};
pub use radius::{child_radius, split_count, stems_after_split, trunk_radius, RadiusError};
pub use shape::{shape_ratio, ShapeError, TreeShape};
