//! Synthetic scenes with known ground truth: analytic primitives, a
//! simulated spinning LiDAR, rendered depth and degraded pipeline inputs.

mod bundle;
pub mod presets;
mod primitive;
mod render;
mod scanner;

pub use bundle::{
    make_bundle, AffineSpec, BoxSpec, Degradation, SceneBundle, SceneConfig, DEFAULT_BOX_MARGIN,
};
pub use primitive::{nearest_hit, Primitive, PrimitiveSpec, Shape, ROOT_TOL, T_MIN};
pub use render::{cast_pixel, render_depth, RenderedDepth};
pub use scanner::{scan_scene, LabeledScan, ScannerSpec};
