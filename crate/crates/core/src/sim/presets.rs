//! Reference scenes: a camera at 1.5 m height looking down world +x, a
//! co-located scanner, and fronto-parallel walls at 16, 22 and 28 m.
//!
//! Walls keep the background depth piecewise constant, so nearest-pixel
//! correspondences are exact away from wall edges. With `alpha = 0.5`,
//! `beta = 2` every wall maps to an exactly representable `f32` relative
//! depth.

use nalgebra::{Matrix3, Vector3};

use super::bundle::{AffineSpec, Degradation, SceneConfig};
use super::primitive::PrimitiveSpec;
use super::scanner::ScannerSpec;
use crate::geometry::{Camera, RigidTransform};

pub const EYE_HEIGHT: f64 = 1.5;
pub const TRUE_ALPHA: f64 = 0.5;
pub const TRUE_BETA: f64 = 2.0;

/// 640 × 480, `f = 600` px, optical axis along world +x.
pub fn forward_camera() -> Camera {
    let r = Matrix3::new(0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0);
    let c = Vector3::new(0.0, 0.0, EYE_HEIGHT);
    let pose = RigidTransform::new(r, -(r * c)).expect("rotation");
    Camera::new(600.0, 600.0, 320.0, 240.0, 640, 480, pose).expect("valid camera")
}

/// 500 × 100 beams covering the camera's field of view.
pub fn forward_scanner() -> ScannerSpec {
    ScannerSpec {
        azimuth_count: 500,
        elevation_count: 100,
        azimuth_range: [-0.5, 0.5],
        elevation_range: [-0.38, 0.38],
        max_range: 120.0,
        origin: RigidTransform::from_translation(Vector3::new(0.0, 0.0, EYE_HEIGHT)),
    }
}

fn wall(x: f64, y: [f64; 2]) -> PrimitiveSpec {
    PrimitiveSpec::Cuboid {
        center: [x + 0.5, 0.5 * (y[0] + y[1]), 2.5],
        size: [1.0, y[1] - y[0], 45.0],
        yaw: 0.0,
        pitch: 0.0,
    }
}

pub fn walls() -> Vec<PrimitiveSpec> {
    vec![
        wall(16.0, [2.0, 30.0]),
        wall(22.0, [-6.0, 2.0]),
        wall(28.0, [-40.0, 40.0]),
    ]
}

pub fn sphere_object() -> PrimitiveSpec {
    PrimitiveSpec::Sphere {
        center: [10.0, 0.5, EYE_HEIGHT],
        radius: 1.0,
    }
}

pub fn cuboid_object() -> PrimitiveSpec {
    PrimitiveSpec::Cuboid {
        center: [10.0, 0.3, EYE_HEIGHT],
        size: [1.6, 1.6, 1.6],
        yaw: 0.6,
        pitch: 0.0,
    }
}

pub fn superellipsoid_object() -> PrimitiveSpec {
    PrimitiveSpec::Superellipsoid {
        center: [11.0, 0.0, EYE_HEIGHT],
        radii: [1.0, 1.2, 0.9],
        exponents: [0.6, 0.8],
        yaw: 0.3,
        pitch: 0.0,
    }
}

pub fn scene_with(object: Option<PrimitiveSpec>) -> SceneConfig {
    SceneConfig {
        camera: forward_camera(),
        scanner: forward_scanner(),
        background: walls(),
        object,
        object_box: None,
        affine: AffineSpec {
            alpha: TRUE_ALPHA,
            beta: TRUE_BETA,
        },
        degradation: Degradation::default(),
    }
}

pub fn sphere_scene() -> SceneConfig {
    scene_with(Some(sphere_object()))
}

pub fn cuboid_scene() -> SceneConfig {
    scene_with(Some(cuboid_object()))
}

/// Sphere at 12 m partly hidden behind a thin post at 8 m.
pub fn occluded_scene() -> SceneConfig {
    let mut s = scene_with(Some(PrimitiveSpec::Sphere {
        center: [12.0, 0.3, EYE_HEIGHT],
        radius: 1.0,
    }));
    s.background.push(PrimitiveSpec::Cuboid {
        center: [8.0, 0.6, EYE_HEIGHT],
        size: [0.3, 0.5, 4.0],
        yaw: 0.0,
        pitch: 0.0,
    });
    s
}

/// Sphere scene with σ = 0.01 relative-depth noise and 30% outliers.
pub fn noisy_sphere_scene() -> SceneConfig {
    let mut s = sphere_scene();
    s.degradation.noise_sigma = 0.01;
    s.degradation.outlier_fraction = 0.3;
    s
}
