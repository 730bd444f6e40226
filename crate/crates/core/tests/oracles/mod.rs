//! Brute-force reference implementations used by the property tests.
#![allow(dead_code)]

pub mod formats;

use lidarfill::geometry::{BoxFrame, Point2};
use lidarfill::raster::{DepthMap, ObjectMask};
use nalgebra::Vector3;

pub const ALPHA_MIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpOutcome {
    Optimal(f64),
    Infeasible,
    Unbounded,
}

/// `a · (α, β) ≤ b`.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    pub a: [f64; 2],
    pub b: f64,
}

/// Every axis bound of every sample, written out directly:
/// `δ_min,k ≤ X_k · (d α + β) ≤ δ_max,k`, plus `α ≥ ALPHA_MIN`.
pub fn box_program(samples: &[(Vector3<f64>, f64)], frame: &BoxFrame) -> Vec<Row> {
    let mut rows = vec![Row {
        a: [-1.0, 0.0],
        b: -ALPHA_MIN,
    }];
    for (x, d) in samples {
        for k in 0..3 {
            rows.push(Row {
                a: [x[k] * d, x[k]],
                b: frame.delta_max[k],
            });
            rows.push(Row {
                a: [-x[k] * d, -x[k]],
                b: -frame.delta_min[k],
            });
        }
    }
    rows
}

fn feasible(rows: &[Row], p: [f64; 2], tol: f64) -> bool {
    rows.iter().all(|r| {
        let lhs = r.a[0] * p[0] + r.a[1] * p[1];
        let scale = 1.0 + r.b.abs() + (r.a[0] * p[0]).abs() + (r.a[1] * p[1]).abs();
        lhs <= r.b + tol * scale
    })
}

/// Maximize α by enumerating all pairwise line intersections.
pub fn vertex_enumeration(rows: &[Row]) -> LpOutcome {
    let mut best: Option<f64> = None;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (p, q) = (rows[i], rows[j]);
            let det = p.a[0] * q.a[1] - p.a[1] * q.a[0];
            let norm = p.a[0].hypot(p.a[1]) * q.a[0].hypot(q.a[1]);
            if det.abs() <= 1e-12 * norm {
                continue;
            }
            let x = [
                (p.b * q.a[1] - p.a[1] * q.b) / det,
                (p.a[0] * q.b - p.b * q.a[0]) / det,
            ];
            if feasible(rows, x, 1e-9) {
                best = Some(best.map_or(x[0], |b: f64| b.max(x[0])));
            }
        }
    }
    match best {
        None => LpOutcome::Infeasible,
        Some(a) if has_alpha_recession(rows) => {
            let _ = a;
            LpOutcome::Unbounded
        }
        Some(a) => LpOutcome::Optimal(a),
    }
}

/// True iff some direction `(1, s)` satisfies `a · (1, s) ≤ 0` for all rows.
fn has_alpha_recession(rows: &[Row]) -> bool {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for r in rows {
        if r.a[1] == 0.0 {
            if r.a[0] > 0.0 {
                return false;
            }
        } else if r.a[1] > 0.0 {
            hi = hi.min(-r.a[0] / r.a[1]);
        } else {
            lo = lo.max(-r.a[0] / r.a[1]);
        }
    }
    lo <= hi + 1e-12 * (1.0 + lo.abs().max(hi.abs()))
}

/// Slab-tested cells of a grid spanning `[0, n·size)` in aligned
/// coordinates, ordered by where the ray enters them (clamped to 0).
pub fn slab_traversal(
    o: &Vector3<f64>,
    d: &Vector3<f64>,
    size: &Vector3<f64>,
    n: [usize; 3],
) -> Vec<([usize; 3], f64)> {
    let mut out = Vec::new();
    for iz in 0..n[2] {
        for iy in 0..n[1] {
            for ix in 0..n[0] {
                let idx = [ix, iy, iz];
                let (mut te, mut tx) = (f64::NEG_INFINITY, f64::INFINITY);
                let mut hit = true;
                for k in 0..3 {
                    let lo = idx[k] as f64 * size[k];
                    let hi = lo + size[k];
                    if d[k] == 0.0 {
                        if o[k] < lo || o[k] >= hi {
                            hit = false;
                        }
                    } else {
                        let a = (lo - o[k]) / d[k];
                        let b = (hi - o[k]) / d[k];
                        te = te.max(a.min(b));
                        tx = tx.min(a.max(b));
                    }
                }
                if hit && tx > te.max(0.0) {
                    out.push((idx, te.max(0.0)));
                }
            }
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

/// Pixel squares that meet a closed convex polygon, by separating axes.
pub fn sat_raster(poly: &[Point2], width: usize, height: usize) -> ObjectMask {
    ObjectMask::from_fn(width, height, |i, j| {
        let sq = [
            [i as f64, j as f64],
            [i as f64 + 1.0, j as f64],
            [i as f64 + 1.0, j as f64 + 1.0],
            [i as f64, j as f64 + 1.0],
        ];
        let mut axes = vec![[1.0, 0.0], [0.0, 1.0]];
        for k in 0..poly.len() {
            let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
            axes.push([q[1] - p[1], p[0] - q[0]]);
        }
        axes.iter().all(|ax| {
            let proj = |pts: &[Point2]| {
                pts.iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                        let v = p[0] * ax[0] + p[1] * ax[1];
                        (lo.min(v), hi.max(v))
                    })
            };
            let (a0, a1) = proj(&sq);
            let (b0, b1) = proj(poly);
            a1 >= b0 && b1 >= a0
        })
    })
}

/// Gradient magnitude with the textbook finite differences.
pub fn gradient_magnitude(depth: &DepthMap, i: usize, j: usize) -> f64 {
    let (w, h) = depth.dims();
    let v = |x: usize, y: usize| depth.values()[y * w + x] as f64;
    let gx = if w == 1 {
        0.0
    } else if i == 0 {
        v(1, j) - v(0, j)
    } else if i == w - 1 {
        v(w - 1, j) - v(w - 2, j)
    } else {
        (v(i + 1, j) - v(i - 1, j)) / 2.0
    };
    let gy = if h == 1 {
        0.0
    } else if j == 0 {
        v(i, 1) - v(i, 0)
    } else if j == h - 1 {
        v(i, h - 1) - v(i, h - 2)
    } else {
        (v(i, j + 1) - v(i, j - 1)) / 2.0
    };
    (gx * gx + gy * gy).sqrt()
}

/// Smallest positive root of `|o + t d − c|² = r²` by the plain quadratic
/// formula (direction need not be unit).
pub fn sphere_distance(
    o: &Vector3<f64>,
    d: &Vector3<f64>,
    c: &Vector3<f64>,
    r: f64,
) -> Option<f64> {
    let oc = o - c;
    let a = d.dot(d);
    let b = 2.0 * d.dot(&oc);
    let cc = oc.dot(&oc) - r * r;
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    [(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)]
        .into_iter()
        .filter(|&t| t > 1e-9)
        .reduce(f64::min)
}

/// Nearest hit on an axis-aligned box (local frame) by testing each face plane.
pub fn box_distance(o: &Vector3<f64>, d: &Vector3<f64>, half: &Vector3<f64>) -> Option<f64> {
    let mut best: Option<f64> = None;
    for k in 0..3 {
        if d[k] == 0.0 {
            continue;
        }
        for s in [-1.0, 1.0] {
            let t = (s * half[k] - o[k]) / d[k];
            if t <= 1e-9 {
                continue;
            }
            let p = o + d * t;
            let inside = (0..3).all(|m| m == k || p[m].abs() <= half[m] * (1.0 + 1e-12));
            if inside {
                best = Some(best.map_or(t, |b: f64| b.min(t)));
            }
        }
    }
    best
}

/// First crossing of an implicit function along `[0, t_max]` by dense
/// stepping then bisection.
pub fn implicit_distance(f: impl Fn(f64) -> f64, t_max: f64, steps: usize) -> Option<f64> {
    let h = t_max / steps as f64;
    let mut prev = f(0.0);
    for k in 1..=steps {
        let t = h * k as f64;
        let cur = f(t);
        if (prev > 0.0) != (cur > 0.0) {
            let (mut lo, mut hi) = (t - h, t);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (f(mid) > 0.0) == (prev > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = cur;
    }
    None
}

/// Left-to-right running sums.
pub fn mean_abs_rel(gt: &[f64], rec: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..gt.len() {
        s += (gt[i] - rec[i]).abs() / rec[i];
    }
    s / gt.len() as f64
}

pub fn mean_distance(gt: &[Vector3<f64>], rec: &[Vector3<f64>]) -> f64 {
    let mut s = 0.0;
    for i in 0..gt.len() {
        let dx = gt[i].x - rec[i].x;
        let dy = gt[i].y - rec[i].y;
        let dz = gt[i].z - rec[i].z;
        s += (dx * dx + dy * dy + dz * dz).sqrt();
    }
    s / gt.len() as f64
}

use lidarfill::depthlift::PixelSample;
use nalgebra::{Matrix3, Rotation3};
use rand::Rng;

pub fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    let pi = std::f64::consts::PI;
    Rotation3::from_euler_angles(
        rng.random_range(-pi..pi),
        rng.random_range(-0.5 * pi..0.5 * pi),
        rng.random_range(-pi..pi),
    )
    .into_inner()
}

/// Box in front of a camera at the origin: `(frame, center, half extent)`.
pub fn random_frame(rng: &mut impl Rng) -> (BoxFrame, Vector3<f64>, Vector3<f64>) {
    let r = random_rotation(rng);
    let c = Vector3::new(
        rng.random_range(-3.0..3.0),
        rng.random_range(-2.0..2.0),
        rng.random_range(8.0..30.0),
    );
    let b = Vector3::new(
        rng.random_range(0.3..2.5),
        rng.random_range(0.3..2.5),
        rng.random_range(0.3..2.5),
    );
    let rc = r * c;
    (
        BoxFrame {
            rotation: r,
            delta_min: rc - b,
            delta_max: rc + b,
            half_extent: b,
        },
        c,
        b,
    )
}

/// Sample whose pixel ray passes through host point `p`, with relative depth `d`.
pub fn sample_through(frame: &BoxFrame, p: &Vector3<f64>, d: f64) -> PixelSample {
    let ray = p / p.z;
    PixelSample {
        u: ray.x,
        v: ray.y,
        d,
        x: frame.rotation * ray,
    }
}

/// Samples from surface points inside the box mapped by a hidden positive
/// affine law, so `(alpha0, beta0)` is feasible.
pub fn feasible_instance(rng: &mut impl Rng, n: usize) -> (BoxFrame, Vec<PixelSample>, f64, f64) {
    let (frame, c, b) = random_frame(rng);
    let alpha0 = rng.random_range(0.2..5.0);
    let beta0 = rng.random_range(-5.0..5.0);
    let samples = (0..n)
        .map(|_| {
            let q = Vector3::new(
                rng.random_range(-1.0..1.0) * b.x,
                rng.random_range(-1.0..1.0) * b.y,
                rng.random_range(-1.0..1.0) * b.z,
            );
            let p = c + frame.rotation.transpose() * q;
            sample_through(&frame, &p, (p.z - beta0) / alpha0)
        })
        .collect();
    (frame, samples, alpha0, beta0)
}

/// Arbitrary samples: random rays toward the box region, random depths,
/// optionally all sharing one depth value.
pub fn arbitrary_instance(
    rng: &mut impl Rng,
    n: usize,
    equal_d: bool,
) -> (BoxFrame, Vec<PixelSample>) {
    let (frame, c, b) = random_frame(rng);
    let d0 = rng.random_range(-3.0..20.0);
    let samples = (0..n)
        .map(|_| {
            let q = Vector3::new(
                rng.random_range(-1.5..1.5) * b.x,
                rng.random_range(-1.5..1.5) * b.y,
                rng.random_range(-1.5..1.5) * b.z,
            );
            let p = c + frame.rotation.transpose() * q;
            let d = if equal_d {
                d0
            } else {
                rng.random_range(-3.0..20.0)
            };
            sample_through(&frame, &p, d)
        })
        .collect();
    (frame, samples)
}

pub fn oracle_for(samples: &[PixelSample], frame: &BoxFrame) -> LpOutcome {
    let pairs: Vec<(Vector3<f64>, f64)> = samples.iter().map(|s| (s.x, s.d)).collect();
    vertex_enumeration(&box_program(&pairs, frame))
}

// random grids and rays for the traversal checks

use lidarfill::voxel::VoxelGrid;

/// Rotated grid with random extent, resolution up to `max_res` per axis and sparse occupancy.
pub fn random_grid(rng: &mut impl Rng, max_res: usize) -> VoxelGrid {
    let r = random_rotation(rng);
    let lo = Vector3::new(
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
    );
    let ext = Vector3::new(
        rng.random_range(0.5..4.0),
        rng.random_range(0.5..4.0),
        rng.random_range(0.5..4.0),
    );
    let frame = BoxFrame {
        rotation: r,
        delta_min: lo,
        delta_max: lo + ext,
        half_extent: ext * 0.5,
    };
    let res = [
        rng.random_range(1..=max_res),
        rng.random_range(1..=max_res),
        rng.random_range(1..=max_res),
    ];
    let mut g = VoxelGrid::empty(frame, res).unwrap();
    let fill = rng.random_range(0.0..0.3);
    for iz in 0..res[2] {
        for iy in 0..res[1] {
            for ix in 0..res[0] {
                if rng.random_bool(fill) {
                    g.set([ix, iy, iz], true);
                }
            }
        }
    }
    g
}

pub fn unit(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Host-frame ray that usually crosses the grid.
pub fn random_ray(rng: &mut impl Rng, g: &VoxelGrid) -> (Vector3<f64>, Vector3<f64>) {
    let f = g.frame();
    let rt = f.rotation.transpose();
    let center = rt * ((f.delta_min + f.delta_max) * 0.5);
    let span = f.extent().norm();
    let origin = center + unit(rng) * rng.random_range(0.0..2.0 * span);
    let dir = if rng.random_bool(0.8) {
        let target = center + unit(rng) * rng.random_range(0.0..0.6 * span);
        (target - origin).normalize()
    } else {
        unit(rng)
    };
    (origin, dir)
}

pub fn oracle_cells(
    g: &VoxelGrid,
    origin: &Vector3<f64>,
    dir: &Vector3<f64>,
) -> Vec<([usize; 3], f64)> {
    let f = g.frame();
    let o = f.rotation * origin - f.delta_min;
    let d = f.rotation * dir;
    slab_traversal(&o, &d, g.voxel_size(), g.resolution())
}
