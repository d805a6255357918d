//! Sketch synthesis: rasterization of tree meshes from the canonical
//! cameras and the line-art compositing chains.

pub mod camera;
pub mod chains;
pub mod image;
pub mod ops;
pub mod raster;

pub use camera::{
    fit_canonical_cameras, fit_distance, CameraView, CanonicalView, DEFAULT_FILL,
    DEFAULT_FOV_Y_DEG,
};
pub use chains::{
    foliage_chain, skeleton_chain, sketch_tree, SketchConfig, SketchError, TreeRenderSet,
    ViewRender, DEFAULT_RESOLUTION,
};
pub use image::{ImageError, RasterImage};
pub use ops::{
    background_remove, color_ramp, denoise, erode, gaussian, invert, multiply_mix,
    resize_for_input, sobel, OpsError,
};
pub use raster::{render_part, RenderError};
