//! Geometry-based LiDAR inpainting.
//!
//! Given a pinhole camera, a LiDAR scan, an oriented 3D box and a relative
//! depth map plus object mask for an object inserted into the image, this
//! crate recovers the object's metric surface and rewrites the ranges of the
//! LiDAR rays that hit it.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`geometry`]: camera projection, box corners, RoI masks and crops.
//! 2. [`depthlift`]: depth-gradient filtering, background correspondences,
//!    RANSAC affine alignment and the box-constrained scale LP.
//! 3. [`voxel`]: occupancy voxelization inside the box and ray range updates.
//! 4. [`metrics`]: AbsRel and l2 reconstruction errors against ground truth.
//!
//! [`sim`] generates synthetic scenes with known ground truth, and [`io`]
//! reads and writes the on-disk formats (PFM, PGM, `.lray`, PLY, JSON).

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod depthlift;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod sim;
pub mod voxel;

pub use error::{Error, ErrorKind, Result};
