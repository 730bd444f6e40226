use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::transform::{RigidTransform, RigidTransformRecord};
use crate::{Error, Result};

/// Default near plane in meters.
pub const NEAR_PLANE: f64 = 0.1;

/// Pinhole camera. `pose` maps world coordinates into the camera frame
/// (x right, y down, z forward).
///
/// Pixel `(i, j)` covers the continuous square `[i, i+1) × [j, j+1)`, so its
/// center sits at `(i + 0.5, j + 0.5)`. Projection returns continuous
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    fx: f64,
    fy: f64,
    cx: f64,
    cy: f64,
    width: usize,
    height: usize,
    pose: RigidTransform,
}

/// Continuous pixel position plus camera-frame depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub u: f64,
    pub v: f64,
    pub depth: f64,
}

impl Projection {
    /// Index of the pixel containing this position, if inside a `w × h` raster.
    pub fn pixel(&self, width: usize, height: usize) -> Option<(usize, usize)> {
        let (fu, fv) = (self.u.floor(), self.v.floor());
        if fu < 0.0 || fv < 0.0 || fu >= width as f64 || fv >= height as f64 {
            return None;
        }
        Some((fu as usize, fv as usize))
    }
}

impl Camera {
    pub fn new(
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        width: usize,
        height: usize,
        pose: RigidTransform,
    ) -> Result<Self> {
        if !(fx > 0.0 && fy > 0.0 && fx.is_finite() && fy.is_finite()) {
            return Err(Error::invalid("focal lengths must be positive"));
        }
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        if !(cx >= 0.0 && cx < width as f64 && cy >= 0.0 && cy < height as f64) {
            return Err(Error::invalid("principal point must lie inside the image"));
        }
        Ok(Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
            pose,
        })
    }

    pub fn fx(&self) -> f64 {
        self.fx
    }
    pub fn fy(&self) -> f64 {
        self.fy
    }
    pub fn cx(&self) -> f64 {
        self.cx
    }
    pub fn cy(&self) -> f64 {
        self.cy
    }
    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }

    /// World → camera.
    pub fn pose(&self) -> &RigidTransform {
        &self.pose
    }

    pub fn with_pose(&self, pose: RigidTransform) -> Self {
        Self {
            pose,
            ..self.clone()
        }
    }

    pub fn intrinsics(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.fx, 0.0, self.cx, //
            0.0, self.fy, self.cy, //
            0.0, 0.0, 1.0,
        )
    }

    /// Camera center in world coordinates.
    pub fn center(&self) -> Vector3<f64> {
        self.pose.inverse().translation().to_owned()
    }

    pub fn to_camera(&self, p_world: &Vector3<f64>) -> Vector3<f64> {
        self.pose.apply(p_world)
    }

    pub fn to_world(&self, p_cam: &Vector3<f64>) -> Vector3<f64> {
        self.pose.inverse().apply(p_cam)
    }

    pub fn project_point(&self, p_world: &Vector3<f64>) -> Result<Projection> {
        self.project_point_near(p_world, NEAR_PLANE)
    }

    pub fn project_point_near(&self, p_world: &Vector3<f64>, near: f64) -> Result<Projection> {
        self.project_camera_point(&self.to_camera(p_world), near)
    }

    /// Projects a point already expressed in the camera frame.
    pub fn project_camera_point(&self, p: &Vector3<f64>, near: f64) -> Result<Projection> {
        if !(p.z > near) {
            return Err(Error::BehindCamera { depth: p.z, near });
        }
        Ok(Projection {
            u: self.fx * p.x / p.z + self.cx,
            v: self.fy * p.y / p.z + self.cy,
            depth: p.z,
        })
    }

    /// `K⁻¹·(u, v, 1)`: camera-frame ray with unit z component.
    pub fn back_project(&self, u: f64, v: f64) -> Vector3<f64> {
        Vector3::new((u - self.cx) / self.fx, (v - self.cy) / self.fy, 1.0)
    }

    /// Camera-frame point at pixel position `(u, v)` and depth `z`.
    pub fn lift(&self, u: f64, v: f64, z: f64) -> Vector3<f64> {
        self.back_project(u, v) * z
    }
}

/// Calibration JSON: `{fx, fy, cx, cy, width, height, pose: {rotation, translation}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
    pub pose: RigidTransformRecord,
}

impl From<&Camera> for CalibrationRecord {
    fn from(c: &Camera) -> Self {
        Self {
            fx: c.fx,
            fy: c.fy,
            cx: c.cx,
            cy: c.cy,
            width: c.width,
            height: c.height,
            pose: RigidTransformRecord::from(&c.pose),
        }
    }
}

impl TryFrom<&CalibrationRecord> for Camera {
    type Error = Error;

    fn try_from(r: &CalibrationRecord) -> Result<Self> {
        let pose = RigidTransform::try_from(&r.pose)?;
        Camera::new(r.fx, r.fy, r.cx, r.cy, r.width, r.height, pose)
    }
}

impl Serialize for Camera {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CalibrationRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Camera {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = CalibrationRecord::deserialize(d)?;
        Camera::try_from(&rec).map_err(serde::de::Error::custom)
    }
}
