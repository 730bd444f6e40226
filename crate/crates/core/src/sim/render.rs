use rayon::prelude::*;

use super::primitive::{nearest_hit, Primitive};
use crate::geometry::Camera;
use crate::raster::ObjectMask;

/// Metric camera-frame depth at pixel centers, `+inf` where nothing is hit,
/// with the index of the visible primitive per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedDepth {
    width: usize,
    height: usize,
    depth: Vec<f64>,
    labels: Vec<Option<usize>>,
}

impl RenderedDepth {
    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn values(&self) -> &[f64] {
        &self.depth
    }
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.depth[j * self.width + i]
    }
    pub fn label(&self, i: usize, j: usize) -> Option<usize> {
        self.labels[j * self.width + i]
    }

    /// Pixels where primitive `index` is the nearest surface.
    pub fn silhouette(&self, index: usize) -> ObjectMask {
        ObjectMask::from_fn(self.width, self.height, |i, j| {
            self.label(i, j) == Some(index)
        })
    }
}

/// Camera ray through continuous pixel position `(u, v)`: metric depth of the
/// nearest hit and the primitive index.
pub fn cast_pixel(cam: &Camera, primitives: &[Primitive], u: f64, v: f64) -> Option<(f64, usize)> {
    let k = cam.back_project(u, v);
    let n = k.norm();
    let dir = cam.pose().inverse().apply_vector(&(k / n));
    nearest_hit(primitives, &cam.center(), &dir).map(|(t, i)| (t / n, i))
}

pub fn render_depth(cam: &Camera, primitives: &[Primitive]) -> RenderedDepth {
    let (w, h) = (cam.width(), cam.height());
    let hits: Vec<Option<(f64, usize)>> = (0..w * h)
        .into_par_iter()
        .map(|k| cast_pixel(cam, primitives, (k % w) as f64 + 0.5, (k / w) as f64 + 0.5))
        .collect();
    RenderedDepth {
        width: w,
        height: h,
        depth: hits
            .iter()
            .map(|h| h.map_or(f64::INFINITY, |x| x.0))
            .collect(),
        labels: hits.iter().map(|h| h.map(|x| x.1)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RigidTransform;
    use nalgebra::Vector3;

    fn cam() -> Camera {
        Camera::new(50.0, 50.0, 16.0, 16.0, 32, 32, RigidTransform::identity()).unwrap()
    }

    #[test]
    fn empty_scene_is_infinite() {
        let r = render_depth(&cam(), &[]);
        assert!(r.values().iter().all(|d| d.is_infinite()));
    }

    #[test]
    fn principal_pixel_on_sphere() {
        let s = Primitive::sphere(Vector3::new(0.0, 0.0, 10.0), 1.0).unwrap();
        let (z, i) = cast_pixel(&cam(), &[s], 16.0, 16.0).unwrap();
        assert!((z - 9.0).abs() < 1e-12);
        assert_eq!(i, 0);
        let r = render_depth(&cam(), &[s]);
        assert!(r.silhouette(0).count() > 0);
        assert!(r.get(0, 0).is_infinite());
    }

    #[test]
    fn wall_depth_is_constant() {
        let wall = Primitive::cuboid(
            Vector3::new(0.0, 0.0, 20.5),
            Vector3::new(100.0, 100.0, 1.0),
            0.0,
        )
        .unwrap();
        let r = render_depth(&cam(), &[wall]);
        assert!(r.values().iter().all(|&d| (d - 20.0).abs() < 1e-9));
    }
}
