use crate::raster::{DepthMap, ObjectMask};
use crate::{Error, Result};

/// Default threshold as a fraction of the relative-depth span inside the mask.
pub const DEFAULT_GRADIENT_FRACTION: f64 = 0.05;

/// `fraction · (max − min)` of the depth values under `mask`.
pub fn default_gradient_threshold(depth: &DepthMap, mask: &ObjectMask, fraction: f64) -> f64 {
    match depth.range_in(mask) {
        Some((lo, hi)) => fraction * (hi as f64 - lo as f64),
        None => 0.0,
    }
}

/// Finite-difference gradient at pixel `(i, j)`: central differences inside
/// the raster, one-sided at the border, zero along a degenerate axis.
pub fn gradient_at(depth: &DepthMap, i: usize, j: usize) -> (f64, f64) {
    let (w, h) = depth.dims();
    let d = |x: usize, y: usize| depth.get(x, y) as f64;
    let diff = |n: usize, k: usize, at: &dyn Fn(usize) -> f64| -> f64 {
        if n < 2 {
            0.0
        } else if k == 0 {
            at(1) - at(0)
        } else if k == n - 1 {
            at(n - 1) - at(n - 2)
        } else {
            0.5 * (at(k + 1) - at(k - 1))
        }
    };
    let gx = diff(w, i, &|x| d(x, j));
    let gy = diff(h, j, &|y| d(i, y));
    (gx, gy)
}

/// Drops mask pixels whose depth-gradient magnitude exceeds `threshold`.
pub fn depth_gradient_filter(
    depth: &DepthMap,
    mask: &ObjectMask,
    threshold: f64,
) -> Result<ObjectMask> {
    if depth.dims() != mask.dims() {
        return Err(Error::DimensionMismatch {
            expected: depth.dims(),
            actual: mask.dims(),
        });
    }
    if !(threshold > 0.0) {
        return Err(Error::invalid("gradient threshold must be positive"));
    }
    let mut out = mask.clone();
    for (i, j) in mask.iter_set() {
        let (gx, gy) = gradient_at(depth, i, j);
        if gx.hypot(gy) > threshold {
            out.set(i, j, false);
        }
    }
    Ok(out)
}
