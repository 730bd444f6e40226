use serde::{Deserialize, Serialize};

use crate::geometry::{Camera, NEAR_PLANE};
use crate::raster::{DepthMap, ObjectMask};
use crate::voxel::LidarScan;
use crate::{Error, Result};

/// Relative depth at a background pixel paired with the metric camera-frame
/// depth of the LiDAR return that projects onto it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub d: f64,
    pub z: f64,
}

/// Projects every LiDAR return into the depth raster and pairs it with the
/// nearest-pixel relative depth, skipping returns that land on `object_mask`
/// or outside the raster. The scan must share the camera's world frame.
pub fn background_correspondences(
    scan: &LidarScan,
    cam: &Camera,
    depth: &DepthMap,
    object_mask: &ObjectMask,
) -> Result<Vec<Correspondence>> {
    if depth.dims() != object_mask.dims() {
        return Err(Error::DimensionMismatch {
            expected: depth.dims(),
            actual: object_mask.dims(),
        });
    }
    let placement = depth.placement();
    let (w, h) = depth.dims();
    let mut out = Vec::new();
    for (_, p) in scan.points() {
        let Ok(proj) = cam.project_point_near(&p, NEAR_PLANE) else {
            continue;
        };
        let Some((i, j)) = placement.locate(proj.u, proj.v, w, h) else {
            continue;
        };
        if object_mask.get(i, j) {
            continue;
        }
        out.push(Correspondence {
            d: depth.get(i, j) as f64,
            z: proj.depth,
        });
    }
    if out.len() < 2 {
        return Err(Error::TooFewCorrespondences { found: out.len() });
    }
    Ok(out)
}
