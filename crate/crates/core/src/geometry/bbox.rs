use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::camera::{Camera, Projection, NEAR_PLANE};
use super::transform::{normalize_angle, yaw_pitch_matrix, RigidTransform};
use crate::{Error, Result};

/// Oriented 3D box. Local axes: x spans the length `l`, y the width `w`,
/// z the height `h`. The box is rotated by yaw about +Z of its frame, then by
/// pitch about the yawed +Y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox3D {
    center: Vector3<f64>,
    size: Vector3<f64>,
    yaw: f64,
    pitch: f64,
}

impl BBox3D {
    pub fn new(center: Vector3<f64>, size: Vector3<f64>, yaw: f64, pitch: f64) -> Result<Self> {
        if !size.iter().all(|&s| s > 0.0 && s.is_finite()) {
            return Err(Error::invalid("box size must be positive"));
        }
        if !center.iter().all(|c| c.is_finite()) || !yaw.is_finite() || !pitch.is_finite() {
            return Err(Error::invalid("box pose must be finite"));
        }
        Ok(Self {
            center,
            size,
            yaw: normalize_angle(yaw),
            pitch: normalize_angle(pitch),
        })
    }

    pub fn center(&self) -> &Vector3<f64> {
        &self.center
    }
    pub fn size(&self) -> &Vector3<f64> {
        &self.size
    }
    pub fn yaw(&self) -> f64 {
        self.yaw
    }
    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn half_extent(&self) -> Vector3<f64> {
        self.size * 0.5
    }

    /// Box-local → host-frame rotation.
    pub fn orientation(&self) -> Matrix3<f64> {
        yaw_pitch_matrix(self.yaw, self.pitch)
    }

    /// Box-local → host-frame rigid placement.
    pub fn placement(&self) -> RigidTransform {
        RigidTransform::from_yaw_pitch(self.yaw, self.pitch, self.center)
    }

    /// Corners in host coordinates. Corner `k` takes `+l/2` when bit 0 of `k`
    /// is set (else `-l/2`), `+w/2` for bit 1 and `+h/2` for bit 2.
    pub fn corners(&self) -> [Vector3<f64>; 8] {
        let r = self.orientation();
        let b0 = self.half_extent();
        std::array::from_fn(|k| {
            let local = Vector3::new(
                if k & 1 != 0 { b0.x } else { -b0.x },
                if k & 2 != 0 { b0.y } else { -b0.y },
                if k & 4 != 0 { b0.z } else { -b0.z },
            );
            self.center + r * local
        })
    }

    /// Coordinates of `p` in the box-local frame (centered on the box).
    pub fn to_local(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.orientation().transpose() * (p - self.center)
    }

    /// True iff `p` lies inside the closed box; `p` shares the box's frame.
    pub fn contains(&self, p: &Vector3<f64>) -> bool {
        let q = self.to_local(p);
        let b0 = self.half_extent();
        (0..3).all(|k| q[k].abs() <= b0[k])
    }

    /// The same box re-expressed in another frame: `t` maps this box's frame
    /// into the target frame. Only rotations about +Z keep the yaw/pitch
    /// parametrization, so general rotations are rejected.
    pub fn transformed(&self, t: &RigidTransform) -> Result<Self> {
        let r = t.rotation() * self.orientation();
        // recover yaw/pitch from R = Rz(yaw)·Ry(pitch)
        let pitch = (-r[(2, 0)]).clamp(-1.0, 1.0).asin();
        let yaw = r[(1, 0)].atan2(r[(0, 0)]);
        let rebuilt = yaw_pitch_matrix(yaw, pitch);
        if (rebuilt - r).abs().max() > 1e-9 {
            return Err(Error::invalid(
                "transform introduces roll; box cannot be expressed with yaw/pitch",
            ));
        }
        BBox3D::new(t.apply(&self.center), self.size, yaw, pitch)
    }
}

pub fn point_in_box(bbox: &BBox3D, p: &Vector3<f64>) -> bool {
    bbox.contains(p)
}

/// Projects the 8 corners (see [`BBox3D::corners`] for the order). Boxes with
/// any corner at or behind the near plane are rejected.
pub fn project_box_corners(cam: &Camera, bbox: &BBox3D) -> Result<[Projection; 8]> {
    let corners = bbox.corners();
    let mut out = [Projection {
        u: 0.0,
        v: 0.0,
        depth: 0.0,
    }; 8];
    for (slot, c) in out.iter_mut().zip(corners.iter()) {
        *slot = cam.project_point_near(c, NEAR_PLANE)?;
    }
    Ok(out)
}

/// Box-aligned bounds for points expressed in a host frame: a host point `p`
/// lies in the box iff `delta_min ≤ rotation·p ≤ delta_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxFrame {
    pub rotation: Matrix3<f64>,
    pub delta_min: Vector3<f64>,
    pub delta_max: Vector3<f64>,
    pub half_extent: Vector3<f64>,
}

impl BoxFrame {
    /// Aligned coordinates `R·p`.
    pub fn align(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p
    }

    pub fn extent(&self) -> Vector3<f64> {
        self.delta_max - self.delta_min
    }

    pub fn contains(&self, p: &Vector3<f64>, tol: f64) -> bool {
        let q = self.align(p);
        (0..3).all(|k| q[k] >= self.delta_min[k] - tol && q[k] <= self.delta_max[k] + tol)
    }

    /// Re-hosts the frame. `t` maps points of the new host frame into the
    /// current host frame.
    pub fn rehost(&self, t: &RigidTransform) -> BoxFrame {
        let offset = self.rotation * t.translation();
        BoxFrame {
            rotation: self.rotation * t.rotation(),
            delta_min: self.delta_min - offset,
            delta_max: self.delta_max - offset,
            half_extent: self.half_extent,
        }
    }
}

/// Box bounds in the camera frame: `R` rotates camera-frame vectors onto the
/// box axes, `b` is the box center in camera coordinates and
/// `delta_min = R·b − b0`, `delta_max = R·b + b0`.
pub fn box_frame(bbox: &BBox3D, cam: &Camera) -> BoxFrame {
    let cam_from_box = cam.pose().rotation() * bbox.orientation();
    let rotation = cam_from_box.transpose();
    let b = cam.to_camera(bbox.center());
    let b0 = bbox.half_extent();
    let rb = rotation * b;
    BoxFrame {
        rotation,
        delta_min: rb - b0,
        delta_max: rb + b0,
        half_extent: b0,
    }
}

/// Per-frame sequence of boxes sharing one size.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxTrack {
    frames: Vec<(u32, BBox3D)>,
}

impl BoxTrack {
    pub fn new(frames: Vec<(u32, BBox3D)>) -> Result<Self> {
        for w in frames.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::invalid(
                    "box track frame indices must be strictly increasing",
                ));
            }
            if (w[1].1.size - w[0].1.size).abs().max() > 1e-9 {
                return Err(Error::invalid("box size must be constant along a track"));
            }
        }
        Ok(Self { frames })
    }

    pub fn frames(&self) -> &[(u32, BBox3D)] {
        &self.frames
    }

    pub fn get(&self, frame: u32) -> Option<&BBox3D> {
        self.frames
            .binary_search_by_key(&frame, |(f, _)| *f)
            .ok()
            .map(|i| &self.frames[i].1)
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// One entry of the box-track JSON array.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxRecord {
    pub frame: u32,
    pub center: [f64; 3],
    pub size: [f64; 3],
    pub yaw: f64,
    pub pitch: f64,
}

impl BoxRecord {
    pub fn new(frame: u32, b: &BBox3D) -> Self {
        Self {
            frame,
            center: [b.center.x, b.center.y, b.center.z],
            size: [b.size.x, b.size.y, b.size.z],
            yaw: b.yaw,
            pitch: b.pitch,
        }
    }

    pub fn to_box(&self) -> Result<BBox3D> {
        BBox3D::new(
            Vector3::from(self.center),
            Vector3::from(self.size),
            self.yaw,
            self.pitch,
        )
    }
}

impl Serialize for BoxTrack {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let recs: Vec<BoxRecord> = self
            .frames
            .iter()
            .map(|(f, b)| BoxRecord::new(*f, b))
            .collect();
        recs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoxTrack {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let recs = Vec::<BoxRecord>::deserialize(d)?;
        let frames = recs
            .iter()
            .map(|r| r.to_box().map(|b| (r.frame, b)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        BoxTrack::new(frames).map_err(serde::de::Error::custom)
    }
}
