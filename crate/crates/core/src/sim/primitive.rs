use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::geometry::{BBox3D, RigidTransform};
use crate::{Error, Result};

/// Intersections closer than this to the ray origin are ignored.
pub const T_MIN: f64 = 1e-9;
/// Root tolerance for implicit-surface intersections (meters).
pub const ROOT_TOL: f64 = 1e-9;
const MARCH_STEPS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Sphere {
        radius: f64,
    },
    Cuboid {
        size: Vector3<f64>,
    },
    /// `((|x/a|^(2/e2) + |y/b|^(2/e2))^(e2/e1) + |z/c|^(2/e1)) = 1`.
    Superellipsoid {
        radii: Vector3<f64>,
        exponents: [f64; 2],
    },
}

/// Analytic solid placed with yaw/pitch about its center, like [`BBox3D`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    shape: Shape,
    center: Vector3<f64>,
    yaw: f64,
    pitch: f64,
}

impl Primitive {
    pub fn new(shape: Shape, center: Vector3<f64>, yaw: f64, pitch: f64) -> Result<Self> {
        let ok = match shape {
            Shape::Sphere { radius } => radius > 0.0 && radius.is_finite(),
            Shape::Cuboid { size } => size.iter().all(|&s| s > 0.0 && s.is_finite()),
            Shape::Superellipsoid { radii, exponents } => {
                radii.iter().all(|&s| s > 0.0 && s.is_finite())
                    && exponents.iter().all(|&e| e > 0.0 && e.is_finite())
            }
        };
        if !ok {
            return Err(Error::invalid(
                "primitive extents and exponents must be positive",
            ));
        }
        if !center.iter().all(|c| c.is_finite()) {
            return Err(Error::invalid("primitive center must be finite"));
        }
        Ok(Self {
            shape,
            center,
            yaw,
            pitch,
        })
    }

    pub fn sphere(center: Vector3<f64>, radius: f64) -> Result<Self> {
        Self::new(Shape::Sphere { radius }, center, 0.0, 0.0)
    }

    pub fn cuboid(center: Vector3<f64>, size: Vector3<f64>, yaw: f64) -> Result<Self> {
        Self::new(Shape::Cuboid { size }, center, yaw, 0.0)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn center(&self) -> &Vector3<f64> {
        &self.center
    }

    /// Local → world placement.
    pub fn pose(&self) -> RigidTransform {
        RigidTransform::from_yaw_pitch(self.yaw, self.pitch, self.center)
    }

    fn half_extent(&self) -> Vector3<f64> {
        match self.shape {
            Shape::Sphere { radius } => Vector3::repeat(radius),
            Shape::Cuboid { size } => size * 0.5,
            Shape::Superellipsoid { radii, .. } => radii,
        }
    }

    /// Tightest box aligned with the primitive's own axes.
    pub fn bounding_box(&self) -> BBox3D {
        BBox3D::new(self.center, self.half_extent() * 2.0, self.yaw, self.pitch)
            .expect("validated primitive")
    }

    /// Nearest hit distance along a unit ray, if any beyond [`T_MIN`].
    pub fn intersect(&self, origin: &Vector3<f64>, dir: &Vector3<f64>) -> Option<f64> {
        let inv = self.pose().inverse();
        let o = inv.apply(origin);
        let d = inv.apply_vector(dir);
        match self.shape {
            Shape::Sphere { radius } => sphere_hit(&o, &d, radius),
            Shape::Cuboid { size } => {
                let (t0, t1) = slab(&o, &d, &(size * 0.5))?;
                if t0 > T_MIN {
                    Some(t0)
                } else if t1 > T_MIN {
                    Some(t1)
                } else {
                    None
                }
            }
            Shape::Superellipsoid { radii, exponents } => {
                let (t0, t1) = slab(&o, &d, &radii)?;
                let f = |t: f64| superquadric_value(&(o + d * t), &radii, exponents);
                if t0 > T_MIN && f(t0) <= 0.0 {
                    // surface touches the bounding box where the ray enters
                    return Some(t0);
                }
                march_root(f, t0.max(T_MIN), t1)
            }
        }
    }

    /// Distance-like residual of a world point against the surface: zero on
    /// the surface, negative inside. Metric for spheres and cuboids; the raw
    /// implicit value for superellipsoids.
    pub fn surface_residual(&self, p: &Vector3<f64>) -> f64 {
        let q = self.pose().inverse().apply(p);
        match self.shape {
            Shape::Sphere { radius } => q.norm() - radius,
            Shape::Cuboid { size } => {
                let h = size * 0.5;
                (0..3)
                    .map(|k| q[k].abs() - h[k])
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            Shape::Superellipsoid { radii, exponents } => superquadric_value(&q, &radii, exponents),
        }
    }
}

fn sphere_hit(o: &Vector3<f64>, d: &Vector3<f64>, r: f64) -> Option<f64> {
    let b = o.dot(d);
    let c = o.norm_squared() - r * r;
    let disc = b * b - c;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    // stable pair of roots
    let q = if b > 0.0 { -(b + s) } else { -b + s };
    let (mut t0, mut t1) = (q, c / q);
    if q == 0.0 {
        t0 = 0.0;
        t1 = 0.0;
    }
    if t0 > t1 {
        std::mem::swap(&mut t0, &mut t1);
    }
    if t0 > T_MIN {
        Some(t0)
    } else if t1 > T_MIN {
        Some(t1)
    } else {
        None
    }
}

/// Ray parameter interval inside the centered box `[-h, h]`.
fn slab(o: &Vector3<f64>, d: &Vector3<f64>, h: &Vector3<f64>) -> Option<(f64, f64)> {
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in 0..3 {
        if d[k] == 0.0 {
            if o[k].abs() > h[k] {
                return None;
            }
        } else {
            let a = (-h[k] - o[k]) / d[k];
            let b = (h[k] - o[k]) / d[k];
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    (t0 <= t1 && t1 > T_MIN).then_some((t0, t1))
}

fn superquadric_value(q: &Vector3<f64>, r: &Vector3<f64>, e: [f64; 2]) -> f64 {
    let xy = (q.x / r.x).abs().powf(2.0 / e[1]) + (q.y / r.y).abs().powf(2.0 / e[1]);
    xy.powf(e[1] / e[0]) + (q.z / r.z).abs().powf(2.0 / e[0]) - 1.0
}

/// First sign change of `f` on `[a, b]`, refined by bisection.
fn march_root(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Option<f64> {
    if !(b > a) {
        return None;
    }
    let step = (b - a) / MARCH_STEPS as f64;
    let mut t_prev = a;
    let mut f_prev = f(a);
    for k in 1..=MARCH_STEPS {
        let t = if k == MARCH_STEPS {
            b
        } else {
            a + step * k as f64
        };
        let ft = f(t);
        if (f_prev > 0.0) != (ft > 0.0) {
            let (mut lo, mut hi) = (t_prev, t);
            let inside_hi = ft <= 0.0;
            while hi - lo > ROOT_TOL * 0.1 {
                let mid = 0.5 * (lo + hi);
                if (f(mid) <= 0.0) == inside_hi {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        t_prev = t;
        f_prev = ft;
    }
    None
}

/// Nearest hit over a primitive list: `(distance, primitive index)`.
pub fn nearest_hit(
    prims: &[Primitive],
    origin: &Vector3<f64>,
    dir: &Vector3<f64>,
) -> Option<(f64, usize)> {
    prims
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.intersect(origin, dir).map(|t| (t, i)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// JSON form of a primitive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PrimitiveSpec {
    Sphere {
        center: [f64; 3],
        radius: f64,
    },
    Cuboid {
        center: [f64; 3],
        size: [f64; 3],
        #[serde(default)]
        yaw: f64,
        #[serde(default)]
        pitch: f64,
    },
    Superellipsoid {
        center: [f64; 3],
        radii: [f64; 3],
        exponents: [f64; 2],
        #[serde(default)]
        yaw: f64,
        #[serde(default)]
        pitch: f64,
    },
}

impl PrimitiveSpec {
    pub fn build(&self) -> Result<Primitive> {
        match *self {
            PrimitiveSpec::Sphere { center, radius } => {
                Primitive::sphere(Vector3::from(center), radius)
            }
            PrimitiveSpec::Cuboid {
                center,
                size,
                yaw,
                pitch,
            } => Primitive::new(
                Shape::Cuboid {
                    size: Vector3::from(size),
                },
                Vector3::from(center),
                yaw,
                pitch,
            ),
            PrimitiveSpec::Superellipsoid {
                center,
                radii,
                exponents,
                yaw,
                pitch,
            } => Primitive::new(
                Shape::Superellipsoid {
                    radii: Vector3::from(radii),
                    exponents,
                },
                Vector3::from(center),
                yaw,
                pitch,
            ),
        }
    }
}
