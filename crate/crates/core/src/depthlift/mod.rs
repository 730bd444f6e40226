//! From relative depth to metric object points: gradient filtering,
//! background alignment and box-constrained scale refinement.

mod correspond;
mod gradient;
pub mod lp;
mod ransac;
mod scale;

pub use correspond::{background_correspondences, Correspondence};
pub use gradient::{
    default_gradient_threshold, depth_gradient_filter, gradient_at, DEFAULT_GRADIENT_FRACTION,
};
pub use ransac::{
    least_squares_affine, ransac_affine_fit, AffineDepthParams, RansacConfig, DEFAULT_INLIER_TOL,
    DEFAULT_ITERATIONS,
};
pub use scale::{
    lift_pixels, pixel_samples, ray_interval, refine_scale_lp, PixelSample, ALPHA_FLOOR,
};
