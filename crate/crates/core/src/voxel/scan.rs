use nalgebra::Vector3;

use crate::geometry::RigidTransform;
use crate::{Error, Result};

/// Range of a beam without an echo.
pub const NO_RETURN: f64 = f64::INFINITY;

/// Unit-direction tolerance for rays built in memory.
pub const UNIT_TOL: f64 = 1e-9;
/// Looser tolerance for directions read back from single-precision files.
pub const STORED_UNIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Vector3<f64>,
    pub direction: Vector3<f64>,
    pub range: f64,
}

impl Ray {
    /// Normalizes `direction`; `range` must be positive or [`NO_RETURN`].
    pub fn new(origin: Vector3<f64>, direction: Vector3<f64>, range: f64) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid("ray direction must be nonzero and finite"));
        }
        Self::checked(origin, direction / n, range, UNIT_TOL)
    }

    /// Stores `direction` verbatim, accepting it if unit within `tol`.
    pub fn checked(
        origin: Vector3<f64>,
        direction: Vector3<f64>,
        range: f64,
        tol: f64,
    ) -> Result<Self> {
        if !origin.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("ray origin must be finite"));
        }
        if !((direction.norm() - 1.0).abs() <= tol) {
            return Err(Error::invalid("ray direction is not unit length"));
        }
        if !(range > 0.0) || range.is_nan() {
            return Err(Error::invalid(format!(
                "ray range {range} must be positive"
            )));
        }
        Ok(Self {
            origin,
            direction,
            range,
        })
    }

    pub fn no_return(origin: Vector3<f64>, direction: Vector3<f64>) -> Result<Self> {
        Self::new(origin, direction, NO_RETURN)
    }

    pub fn has_return(&self) -> bool {
        self.range.is_finite()
    }

    pub fn at(&self, t: f64) -> Vector3<f64> {
        self.origin + self.direction * t
    }

    /// Return point, if any.
    pub fn point(&self) -> Option<Vector3<f64>> {
        self.has_return().then(|| self.at(self.range))
    }

    pub fn with_range(&self, range: f64) -> Ray {
        Ray { range, ..*self }
    }

    pub fn transformed(&self, t: &RigidTransform) -> Ray {
        Ray {
            origin: t.apply(&self.origin),
            direction: t.apply_vector(&self.direction),
            range: self.range,
        }
    }
}

/// Ordered set of beams sharing one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LidarScan {
    pub frame_id: String,
    pub rays: Vec<Ray>,
}

impl LidarScan {
    pub fn new(frame_id: impl Into<String>, rays: Vec<Ray>) -> Self {
        Self {
            frame_id: frame_id.into(),
            rays,
        }
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn return_count(&self) -> usize {
        self.rays.iter().filter(|r| r.has_return()).count()
    }

    /// `(index, point)` for every ray with a return.
    pub fn points(&self) -> impl Iterator<Item = (usize, Vector3<f64>)> + '_ {
        self.rays
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.point().map(|p| (i, p)))
    }

    pub fn transformed(&self, t: &RigidTransform) -> LidarScan {
        LidarScan {
            frame_id: self.frame_id.clone(),
            rays: self.rays.iter().map(|r| r.transformed(t)).collect(),
        }
    }
}
