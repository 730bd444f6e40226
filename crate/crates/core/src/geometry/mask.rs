//! RoI masks from projected boxes and square crop bookkeeping.

use serde::{Deserialize, Serialize};

use super::bbox::{project_box_corners, BBox3D};
use super::camera::Camera;
use crate::raster::{ObjectMask, RasterPlacement};
use crate::{Error, Result};

/// Default mask enlargement fraction.
pub const DEFAULT_ENLARGE: f64 = 0.10;

pub type Point2 = [f64; 2];

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull by monotone chain; counter-clockwise in (x, y), collinear
/// points dropped.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

pub fn polygon_area(poly: &[Point2]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut a = 0.0;
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        a += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * a.abs()
}

/// Area centroid of a simple polygon with nonzero area.
pub fn polygon_centroid(poly: &[Point2]) -> Point2 {
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let w = p[0] * q[1] - q[0] * p[1];
        a += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [cx / (3.0 * a), cy / (3.0 * a)]
}

/// Keeps the part of `poly` with `sign·(coord[axis] − c) ≤ 0`.
fn clip(poly: &[Point2], axis: usize, c: f64, sign: f64) -> Vec<Point2> {
    let inside = |p: &Point2| sign * (p[axis] - c) <= 0.0;
    let mut out = Vec::with_capacity(poly.len() + 2);
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let (pin, qin) = (inside(&p), inside(&q));
        if pin {
            out.push(p);
        }
        if pin != qin {
            let t = (c - p[axis]) / (q[axis] - p[axis]);
            let mut x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
            x[axis] = c;
            out.push(x);
        }
    }
    out
}

/// Conservative coverage: a pixel is set iff its closed unit square meets the
/// closed convex polygon. Pixels outside the `width × height` image are
/// ignored.
pub fn rasterize_convex(poly: &[Point2], width: usize, height: usize) -> ObjectMask {
    let mut mask = ObjectMask::empty(width, height);
    if poly.is_empty() {
        return mask;
    }
    let ymin = poly.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let ymax = poly.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
    let j0 = ((ymin - 1.0).ceil().max(0.0)) as usize;
    let j1 = ymax.floor().min(height as f64 - 1.0);
    if j1 < 0.0 {
        return mask;
    }
    for j in j0..=(j1 as usize) {
        let band = clip(&clip(poly, 1, j as f64, -1.0), 1, j as f64 + 1.0, 1.0);
        if band.is_empty() {
            continue;
        }
        let xmin = band.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let xmax = band.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let i0 = (xmin - 1.0).ceil().max(0.0);
        let i1 = xmax.floor().min(width as f64 - 1.0);
        if i1 < i0 {
            continue;
        }
        for i in (i0 as usize)..=(i1 as usize) {
            mask.set(i, j, true);
        }
    }
    mask
}

/// Filled perspective outline of `bbox`: the convex hull of its 8 projected
/// corners, scaled about the hull's area centroid by `1 + enlarge`, then
/// conservatively rasterized and clipped to the image.
pub fn roi_mask_from_box(cam: &Camera, bbox: &BBox3D, enlarge: f64) -> Result<ObjectMask> {
    Ok(roi_hull_from_box(cam, bbox, enlarge)?.1)
}

/// Same as [`roi_mask_from_box`], also returning the enlarged hull polygon.
pub fn roi_hull_from_box(
    cam: &Camera,
    bbox: &BBox3D,
    enlarge: f64,
) -> Result<(Vec<Point2>, ObjectMask)> {
    if !(enlarge >= 0.0 && enlarge.is_finite()) {
        return Err(Error::invalid("enlarge fraction must be non-negative"));
    }
    let corners = project_box_corners(cam, bbox)?;
    let pts: Vec<Point2> = corners.iter().map(|p| [p.u, p.v]).collect();
    let hull = convex_hull(&pts);
    if polygon_area(&hull) < 1.0 {
        return Err(Error::EmptyMask);
    }
    let c = polygon_centroid(&hull);
    let s = 1.0 + enlarge;
    let grown: Vec<Point2> = hull
        .iter()
        .map(|p| [c[0] + s * (p[0] - c[0]), c[1] + s * (p[1] - c[1])])
        .collect();
    let mask = rasterize_convex(&grown, cam.width(), cam.height());
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok((grown, mask))
}

/// Square window of the full frame, resampled to `target × target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CropWindow {
    pub x0: usize,
    pub y0: usize,
    pub side: usize,
    pub target: usize,
    /// Target pixels per full-frame pixel.
    pub scale: f64,
}

impl CropWindow {
    pub fn to_target(&self, u: f64, v: f64) -> (f64, f64) {
        (
            (u - self.x0 as f64) * self.scale,
            (v - self.y0 as f64) * self.scale,
        )
    }

    pub fn to_frame(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.x0 as f64 + x / self.scale,
            self.y0 as f64 + y / self.scale,
        )
    }

    /// Placement of a raster rendered at the target resolution.
    pub fn placement(&self) -> RasterPlacement {
        RasterPlacement {
            origin: (self.x0 as f64, self.y0 as f64),
            scale: self.scale,
        }
    }
}

/// Smallest square (side = larger bbox dimension) centered on the mask's
/// bounding box, shifted inward so it stays inside the image.
pub fn square_crop_for_mask(mask: &ObjectMask, target: usize) -> Result<CropWindow> {
    if target == 0 {
        return Err(Error::invalid("crop target side must be positive"));
    }
    let (x0, y0, x1, y1) = mask.bounding_box().ok_or(Error::EmptyMask)?;
    let (bw, bh) = (x1 - x0 + 1, y1 - y0 + 1);
    let side = bw.max(bh);
    if side > mask.width() || side > mask.height() {
        return Err(Error::invalid(format!(
            "a {side}px square crop does not fit a {}x{} image",
            mask.width(),
            mask.height()
        )));
    }
    let place = |lo: usize, extent: usize, limit: usize| -> usize {
        let start = lo as isize - ((side - extent) / 2) as isize;
        start.clamp(0, (limit - side) as isize) as usize
    };
    Ok(CropWindow {
        x0: place(x0, bw, mask.width()),
        y0: place(y0, bh, mask.height()),
        side,
        target,
        scale: target as f64 / side as f64,
    })
}
