use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::primitive::{nearest_hit, Primitive};
use crate::geometry::RigidTransform;
use crate::voxel::{LidarScan, Ray, NO_RETURN};
use crate::{Error, Result};

/// Spinning LiDAR on a regular azimuth × elevation grid. Beam `(a, e)` is
/// stored at index `e · azimuth_count + a`, sampled at bin centers, in the
/// sensor frame `(cos e · cos a, cos e · sin a, sin e)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScannerSpec {
    pub azimuth_count: usize,
    pub elevation_count: usize,
    /// `[min, max]` radians.
    pub azimuth_range: [f64; 2],
    pub elevation_range: [f64; 2],
    pub max_range: f64,
    /// Sensor → world.
    pub origin: RigidTransform,
}

impl ScannerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.azimuth_count == 0 || self.elevation_count == 0 {
            return Err(Error::invalid("scanner beam counts must be at least 1"));
        }
        if !(self.max_range > 0.0 && self.max_range.is_finite()) {
            return Err(Error::invalid("scanner max range must be positive"));
        }
        let ranges = self.azimuth_range.iter().chain(&self.elevation_range);
        if !ranges.clone().all(|a| a.is_finite()) {
            return Err(Error::invalid("scanner angle ranges must be finite"));
        }
        if self.azimuth_range[0] > self.azimuth_range[1]
            || self.elevation_range[0] > self.elevation_range[1]
        {
            return Err(Error::invalid(
                "scanner angle ranges must be ordered [min, max]",
            ));
        }
        Ok(())
    }

    pub fn ray_count(&self) -> usize {
        self.azimuth_count * self.elevation_count
    }

    /// Sensor-frame unit direction of beam `index`.
    pub fn direction(&self, index: usize) -> Vector3<f64> {
        let (a, e) = (index % self.azimuth_count, index / self.azimuth_count);
        let bin =
            |r: [f64; 2], n: usize, k: usize| r[0] + (r[1] - r[0]) * (k as f64 + 0.5) / n as f64;
        let az = bin(self.azimuth_range, self.azimuth_count, a);
        let el = bin(self.elevation_range, self.elevation_count, e);
        Vector3::new(el.cos() * az.cos(), el.cos() * az.sin(), el.sin())
    }
}

/// Simulated scan plus, per ray, the index of the primitive it hit.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledScan {
    pub scan: LidarScan,
    pub labels: Vec<Option<usize>>,
}

/// Casts every beam against `primitives`; world-frame rays, `NO_RETURN`
/// beyond `max_range`.
pub fn scan_scene(spec: &ScannerSpec, primitives: &[Primitive]) -> Result<LabeledScan> {
    spec.validate()?;
    let pose = &spec.origin;
    let origin = *pose.translation();
    let hits: Vec<(Ray, Option<usize>)> = (0..spec.ray_count())
        .into_par_iter()
        .map(|k| {
            let dir = pose.apply_vector(&spec.direction(k)).normalize();
            match nearest_hit(primitives, &origin, &dir) {
                Some((t, i)) if t <= spec.max_range => (
                    Ray {
                        origin,
                        direction: dir,
                        range: t,
                    },
                    Some(i),
                ),
                _ => (
                    Ray {
                        origin,
                        direction: dir,
                        range: NO_RETURN,
                    },
                    None,
                ),
            }
        })
        .collect();
    let (rays, labels) = hits.into_iter().unzip();
    Ok(LabeledScan {
        scan: LidarScan::new("world", rays),
        labels,
    })
}
