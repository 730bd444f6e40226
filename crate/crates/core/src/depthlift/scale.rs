use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::lp::{self, Bounds2, HalfPlane};
use super::ransac::AffineDepthParams;
use crate::geometry::{BoxFrame, Camera};
use crate::raster::{DepthMap, ObjectMask};
use crate::{Error, Result};

/// `α > 0` is enforced as `α ≥ ALPHA_FLOOR`.
pub const ALPHA_FLOOR: f64 = 1e-9;

/// Seed for the LP insertion order; the optimum does not depend on it.
const LP_SEED: u64 = 0x005e_ed0f_a1fa;

/// Object pixel ready for lifting: full-frame continuous position, relative
/// depth, and box-aligned direction `X = R·K⁻¹·(u, v, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelSample {
    pub u: f64,
    pub v: f64,
    pub d: f64,
    pub x: Vector3<f64>,
}

/// One sample per set pixel of `mask`, positioned at the pixel center.
pub fn pixel_samples(
    depth: &DepthMap,
    mask: &ObjectMask,
    cam: &Camera,
    frame: &BoxFrame,
) -> Result<Vec<PixelSample>> {
    if depth.dims() != mask.dims() {
        return Err(Error::DimensionMismatch {
            expected: depth.dims(),
            actual: mask.dims(),
        });
    }
    let placement = depth.placement();
    Ok(mask
        .iter_set()
        .map(|(i, j)| {
            let (u, v) = placement.pixel_center(i, j);
            PixelSample {
                u,
                v,
                d: depth.get(i, j) as f64,
                x: frame.rotation * cam.back_project(u, v),
            }
        })
        .collect())
}

/// Range of `t` with `lo ≤ x·t ≤ hi` on every axis, or `None` if empty.
pub fn ray_interval(x: &Vector3<f64>, frame: &BoxFrame) -> Option<(f64, f64)> {
    let (mut tl, mut th) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in 0..3 {
        let (lo, hi, xk) = (frame.delta_min[k], frame.delta_max[k], x[k]);
        if xk == 0.0 {
            if lo > 0.0 || hi < 0.0 {
                return None;
            }
        } else if xk > 0.0 {
            tl = tl.max(lo / xk);
            th = th.min(hi / xk);
        } else {
            tl = tl.max(hi / xk);
            th = th.min(lo / xk);
        }
    }
    (tl <= th).then_some((tl, th))
}

/// Largest scale `α` such that every lifted sample `X_i·(d_i·α + β)` stays
/// within `[δ_min, δ_max]`, with `α ≥ ALPHA_FLOOR`.
///
/// Each sample reduces to an interval `[tl_i, th_i]` for its metric depth
/// `t_i = d_i·α + β`, so the program has two half-planes per sample. When all
/// samples share one `d` the scale is unbounded. Otherwise the feasible set is
/// bounded and solved exactly; among optimal shifts the one closest to
/// `init.beta` is returned.
pub fn refine_scale_lp(
    samples: &[PixelSample],
    frame: &BoxFrame,
    init: &AffineDepthParams,
) -> Result<AffineDepthParams> {
    if samples.is_empty() {
        return Err(Error::invalid("scale refinement needs at least one sample"));
    }
    if !(init.alpha > 0.0) {
        return Err(Error::invalid("initial scale must be positive"));
    }
    let mut rows = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        let Some((tl, th)) = ray_interval(&s.x, frame) else {
            return Err(Error::Infeasible(format!(
                "pixel sample {i} at ({:.1}, {:.1}) cannot reach the box at any depth",
                s.u, s.v
            )));
        };
        rows.push((s.d, tl, th));
    }

    let d0 = rows[0].0;
    if rows.iter().all(|r| r.0 == d0) {
        let tl = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        let th = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
        return Err(if tl <= th {
            Error::Unbounded("all samples share one relative depth; β absorbs any α".into())
        } else {
            Error::Infeasible("samples with equal relative depth need disjoint depths".into())
        });
    }

    let (imin, imax) = rows.iter().enumerate().fold((0, 0), |(a, b), (k, r)| {
        (
            if r.0 < rows[a].0 { k } else { a },
            if r.0 > rows[b].0 { k } else { b },
        )
    });
    let (dl, tll, thl) = rows[imin];
    let (dh, tlh, thh) = rows[imax];
    let span = dh - dl;
    let alpha_hi = (thh - tll) / span;
    if alpha_hi < ALPHA_FLOOR {
        return Err(Error::Infeasible(
            "no positive scale keeps the nearest and farthest samples in the box".into(),
        ));
    }
    let alpha_lo = ((tlh - thl) / span).max(ALPHA_FLOOR);
    let beta_lo = tll - (dl * alpha_lo).max(dl * alpha_hi);
    let beta_hi = thl - (dl * alpha_lo).min(dl * alpha_hi);
    let pad = |lo: f64, hi: f64| {
        let m = 1.0 + 0.5 * (hi - lo) + 1e-6 * (lo.abs() + hi.abs());
        (lo - m, hi + m)
    };
    let (a_lo, a_hi) = pad(alpha_lo, alpha_hi);
    let (b_lo, b_hi) = pad(beta_lo, beta_hi);
    let bounds = Bounds2 {
        lo: [a_lo, b_lo],
        hi: [a_hi, b_hi],
    };

    let mut planes = Vec::with_capacity(2 * rows.len() + 1);
    planes.push(HalfPlane::new(-1.0, 0.0, -ALPHA_FLOOR));
    for &(d, tl, th) in &rows {
        planes.push(HalfPlane::new(d, 1.0, th));
        planes.push(HalfPlane::new(-d, -1.0, -tl));
    }
    let Some([alpha, beta_vertex]) = lp::maximize(&planes, [1.0, 0.0], [0.0, 1.0], bounds, LP_SEED)
    else {
        return Err(Error::Infeasible(
            "sample depth intervals admit no common affine map".into(),
        ));
    };

    // optimal shifts at α form an interval; take the point nearest init.beta
    let lo = rows
        .iter()
        .map(|&(d, tl, _)| tl - d * alpha)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = rows
        .iter()
        .map(|&(d, _, th)| th - d * alpha)
        .fold(f64::INFINITY, f64::min);
    let beta = if lo <= hi {
        init.beta.clamp(lo, hi)
    } else {
        beta_vertex
    };

    Ok(AffineDepthParams {
        alpha,
        beta,
        inlier_count: samples.len(),
        residual_rms: 0.0,
    })
}

/// Camera-frame points `K⁻¹·(u, v, 1)·(d·α + β)`, in input order.
pub fn lift_pixels(
    samples: &[PixelSample],
    params: &AffineDepthParams,
    cam: &Camera,
) -> Result<Vec<Vector3<f64>>> {
    if !(params.alpha > 0.0) {
        return Err(Error::invalid("scale must be positive"));
    }
    samples
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let z = params.metric(s.d);
            if !(z > 0.0) {
                return Err(Error::NonPositiveDepth { index, depth: z });
            }
            Ok(cam.lift(s.u, s.v, z))
        })
        .collect()
}
