//! Reconstruction errors between a ground-truth scan and a reconstructed one.
//!
//! `AbsRel = mean |d*ᵢ − dᵢ| / dᵢ` with `d*` the ground-truth range and `d`
//! the reconstructed one; `l2 = mean ‖p*ᵢ − pᵢ‖`. Means use a fixed pairwise
//! summation order so results do not depend on scheduling.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::geometry::BBox3D;
use crate::voxel::LidarScan;
use crate::{Error, Result};

/// Which range divides the absolute error in AbsRel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbsRelDenominator {
    /// The reconstructed range `dᵢ`.
    #[default]
    Reconstructed,
    /// The ground-truth range `d*ᵢ`.
    GroundTruth,
}

/// Pairwise (tree) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

pub fn absrel(gt: &[f64], rec: &[f64]) -> Result<f64> {
    absrel_with(gt, rec, AbsRelDenominator::Reconstructed)
}

pub fn absrel_with(gt: &[f64], rec: &[f64], denom: AbsRelDenominator) -> Result<f64> {
    if gt.len() != rec.len() {
        return Err(Error::LengthMismatch {
            left: gt.len(),
            right: rec.len(),
        });
    }
    if gt.is_empty() {
        return Err(Error::invalid("absrel needs at least one pair"));
    }
    let terms = gt
        .iter()
        .zip(rec)
        .enumerate()
        .map(|(index, (&g, &r))| {
            let den = match denom {
                AbsRelDenominator::Reconstructed => r,
                AbsRelDenominator::GroundTruth => g,
            };
            if !(den > 0.0) {
                return Err(Error::NonPositiveDenominator { index });
            }
            Ok((g - r).abs() / den)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(mean(&terms))
}

pub fn l2_error(gt: &[Vector3<f64>], rec: &[Vector3<f64>]) -> Result<f64> {
    if gt.len() != rec.len() {
        return Err(Error::LengthMismatch {
            left: gt.len(),
            right: rec.len(),
        });
    }
    if gt.is_empty() {
        return Err(Error::invalid("l2 error needs at least one pair"));
    }
    let terms: Vec<f64> = gt.iter().zip(rec).map(|(a, b)| (a - b).norm()).collect();
    Ok(mean(&terms))
}

/// Index-aligned ray pair where both scans have a return.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPair {
    pub ray_index: usize,
    pub gt_range: f64,
    pub rec_range: f64,
    pub gt_point: Vector3<f64>,
    pub rec_point: Vector3<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RayMatching {
    /// Pairs whose ground-truth return lies inside the box.
    pub object: Vec<RayPair>,
    pub all: Vec<RayPair>,
    /// Rays with a return in exactly one of the scans.
    pub misses: usize,
    /// Misses whose return (in whichever scan has one) lies inside the box.
    pub object_misses: usize,
}

/// Pairs rays by index. Requires both scans to come from the same beam grid.
pub fn match_by_ray(gt: &LidarScan, rec: &LidarScan, bbox: &BBox3D) -> Result<RayMatching> {
    if gt.len() != rec.len() {
        return Err(Error::GridMismatch {
            left: gt.len(),
            right: rec.len(),
        });
    }
    let mut m = RayMatching::default();
    for (i, (g, r)) in gt.rays.iter().zip(&rec.rays).enumerate() {
        match (g.point(), r.point()) {
            (Some(gp), Some(rp)) => {
                let pair = RayPair {
                    ray_index: i,
                    gt_range: g.range,
                    rec_range: r.range,
                    gt_point: gp,
                    rec_point: rp,
                };
                if bbox.contains(&gp) {
                    m.object.push(pair);
                }
                m.all.push(pair);
            }
            (Some(p), None) | (None, Some(p)) => {
                m.misses += 1;
                if bbox.contains(&p) {
                    m.object_misses += 1;
                }
            }
            (None, None) => {}
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub absrel_object: Option<f64>,
    pub absrel_all: Option<f64>,
    pub l2_object: Option<f64>,
    pub l2_all: Option<f64>,
    pub matched_object: usize,
    pub matched_all: usize,
    pub misses: usize,
    pub object_misses: usize,
    pub absrel_denominator: AbsRelDenominator,
}

fn pair_metrics(pairs: &[RayPair], denom: AbsRelDenominator) -> Result<(Option<f64>, Option<f64>)> {
    if pairs.is_empty() {
        return Ok((None, None));
    }
    let g: Vec<f64> = pairs.iter().map(|p| p.gt_range).collect();
    let r: Vec<f64> = pairs.iter().map(|p| p.rec_range).collect();
    let gp: Vec<Vector3<f64>> = pairs.iter().map(|p| p.gt_point).collect();
    let rp: Vec<Vector3<f64>> = pairs.iter().map(|p| p.rec_point).collect();
    Ok((Some(absrel_with(&g, &r, denom)?), Some(l2_error(&gp, &rp)?)))
}

pub fn evaluate_scans(
    gt: &LidarScan,
    rec: &LidarScan,
    bbox: &BBox3D,
    denom: AbsRelDenominator,
) -> Result<EvalReport> {
    let m = match_by_ray(gt, rec, bbox)?;
    let (absrel_object, l2_object) = pair_metrics(&m.object, denom)?;
    let (absrel_all, l2_all) = pair_metrics(&m.all, denom)?;
    Ok(EvalReport {
        absrel_object,
        absrel_all,
        l2_object,
        l2_all,
        matched_object: m.object.len(),
        matched_all: m.all.len(),
        misses: m.misses,
        object_misses: m.object_misses,
        absrel_denominator: denom,
    })
}
