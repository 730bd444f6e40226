//! End-to-end inpainting: mask filtering, background alignment, scale
//! refinement, voxelization and ray updates.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::depthlift::{
    background_correspondences, default_gradient_threshold, depth_gradient_filter, lift_pixels,
    pixel_samples, ransac_affine_fit, ray_interval, refine_scale_lp, AffineDepthParams,
    PixelSample, RansacConfig, DEFAULT_GRADIENT_FRACTION,
};
use crate::geometry::{box_frame, roi_mask_from_box, BBox3D, BoxFrame, Camera, DEFAULT_ENLARGE};
use crate::raster::{DepthMap, ObjectMask, RasterPlacement};
use crate::voxel::{
    update_rays, voxelize_points, LidarScan, RangeMode, RayUpdate, VoxelGrid, DEFAULT_RESOLUTION,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum GradientThreshold {
    /// Fraction of the relative-depth span inside the mask.
    Fraction(f64),
    Absolute(f64),
    Off,
}

impl Default for GradientThreshold {
    fn default() -> Self {
        GradientThreshold::Fraction(DEFAULT_GRADIENT_FRACTION)
    }
}

/// Component switches for ablation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Ablation {
    /// Use the enlarged RoI hull of the box instead of the object mask.
    pub hull_mask: bool,
    /// Replace the relative depth inside the mask by the box-center depth.
    pub constant_depth: bool,
    /// Skip the depth-gradient filter.
    pub skip_gradient: bool,
}

impl Ablation {
    pub const FULL: Ablation = Ablation {
        hull_mask: false,
        constant_depth: false,
        skip_gradient: false,
    };
}

/// What to do when the scale program is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnboundedPolicy {
    #[default]
    Fail,
    /// Keep the RANSAC scale and move the shift into the feasible range.
    KeepInitial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub gradient: GradientThreshold,
    pub ransac: RansacConfig,
    pub resolution: [usize; 3],
    /// Occupancy dilation radius in voxels.
    pub dilation: usize,
    /// RoI enlargement for the hull-mask ablation.
    pub enlarge: f64,
    /// The depth input is disparity-like (larger is nearer); use its reciprocal.
    pub invert_disparity: bool,
    pub range_mode: RangeMode,
    pub unbounded: UnboundedPolicy,
    pub ablation: Ablation,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            gradient: GradientThreshold::default(),
            ransac: RansacConfig::default(),
            resolution: DEFAULT_RESOLUTION,
            dilation: 0,
            enlarge: DEFAULT_ENLARGE,
            invert_disparity: false,
            range_mode: RangeMode::Entry,
            unbounded: UnboundedPolicy::Fail,
            ablation: Ablation::FULL,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        match self.gradient {
            GradientThreshold::Fraction(f) | GradientThreshold::Absolute(f)
                if !(f > 0.0 && f.is_finite()) =>
            {
                return Err(Error::invalid("gradient threshold must be positive"))
            }
            _ => {}
        }
        let r = &self.ransac;
        if !(r.inlier_tol > 0.0 && r.inlier_tol.is_finite()) || r.iterations == 0 {
            return Err(Error::invalid(
                "RANSAC needs a positive tolerance and iteration count",
            ));
        }
        if self.resolution.iter().any(|&n| n == 0 || n > 1024) {
            return Err(Error::invalid(
                "voxel resolution must lie in 1..=1024 per axis",
            ));
        }
        if self.dilation > 16 {
            return Err(Error::invalid("dilation radius must be at most 16 voxels"));
        }
        if !(self.enlarge >= 0.0 && self.enlarge <= 1.0) {
            return Err(Error::invalid("enlarge fraction must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// One frame's inputs. The scan and box share the camera's world frame.
#[derive(Debug, Clone, Copy)]
pub struct PipelineInput<'a> {
    pub camera: &'a Camera,
    pub scan: &'a LidarScan,
    pub depth: &'a DepthMap,
    pub mask: &'a ObjectMask,
    pub bbox: &'a BBox3D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleSource {
    Program,
    /// The program was unbounded; the RANSAC scale was kept.
    InitialFallback,
}

#[derive(Debug, Clone)]
pub struct FitReport {
    pub threshold: Option<f64>,
    pub mask_pixels: usize,
    pub kept_pixels: usize,
    /// Kept pixels dropped because their rays miss the box.
    pub off_box_pixels: usize,
    pub correspondences: usize,
    pub ransac: AffineDepthParams,
    pub refined: AffineDepthParams,
    pub scale_source: ScaleSource,
    pub frame: BoxFrame,
    pub samples: Vec<PixelSample>,
}

#[derive(Debug, Clone)]
pub struct InpaintReport {
    pub fit: FitReport,
    /// Lifted object points, camera frame.
    pub points: Vec<Vector3<f64>>,
    pub dropped_points: usize,
    /// Occupancy hosted in the world frame.
    pub grid: VoxelGrid,
    pub scan: LidarScan,
    pub updates: Vec<RayUpdate>,
}

pub fn fit(input: &PipelineInput, cfg: &PipelineConfig) -> Result<FitReport> {
    cfg.validate()?;
    let cam = input.camera;
    let inverted;
    let mut depth = input.depth;
    if cfg.invert_disparity {
        inverted = depth.inverted()?;
        depth = &inverted;
    }
    if depth.dims() != input.mask.dims() {
        return Err(Error::DimensionMismatch {
            expected: depth.dims(),
            actual: input.mask.dims(),
        });
    }

    let hull;
    let mut mask = input.mask;
    if cfg.ablation.hull_mask {
        if depth.placement() != RasterPlacement::FULL_FRAME
            || depth.dims() != (cam.width(), cam.height())
        {
            return Err(Error::invalid(
                "hull-mask ablation needs a full-frame depth map",
            ));
        }
        hull = roi_mask_from_box(cam, input.bbox, cfg.enlarge)?;
        mask = &hull;
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }

    let pairs = background_correspondences(input.scan, cam, depth, mask)?;
    let ransac = ransac_affine_fit(&pairs, &cfg.ransac)?;

    let flattened;
    if cfg.ablation.constant_depth {
        let zc = cam.to_camera(input.bbox.center()).z;
        let dc = ((zc - ransac.beta) / ransac.alpha) as f32;
        let (w, _) = depth.dims();
        let mut values = depth.values().to_vec();
        for (i, j) in mask.iter_set() {
            values[j * w + i] = dc;
        }
        flattened =
            DepthMap::with_placement(depth.width(), depth.height(), values, depth.placement())?;
        depth = &flattened;
    }

    let threshold = match (cfg.ablation.skip_gradient, cfg.gradient) {
        (true, _) | (_, GradientThreshold::Off) => None,
        (false, GradientThreshold::Absolute(t)) => Some(t),
        (false, GradientThreshold::Fraction(f)) => {
            Some(default_gradient_threshold(depth, mask, f).max(f64::MIN_POSITIVE))
        }
    };
    let kept = match threshold {
        Some(t) => depth_gradient_filter(depth, mask, t)?,
        None => mask.clone(),
    };
    if kept.is_empty() {
        return Err(Error::EmptyMask);
    }

    let frame = box_frame(input.bbox, cam);
    let all = pixel_samples(depth, &kept, cam, &frame)?;
    // pixels whose rays never cross the box cannot be lifted into it
    let samples: Vec<PixelSample> = all
        .iter()
        .copied()
        .filter(|s| ray_interval(&s.x, &frame).is_some_and(|(_, th)| th > 0.0))
        .collect();
    let off_box_pixels = all.len() - samples.len();
    if samples.is_empty() {
        return Err(Error::EmptyMask);
    }
    let fallback = cfg.unbounded == UnboundedPolicy::KeepInitial || cfg.ablation.constant_depth;
    let (refined, scale_source) = match refine_scale_lp(&samples, &frame, &ransac) {
        Ok(p) => (p, ScaleSource::Program),
        Err(Error::Unbounded(_)) if fallback => (
            keep_scale(&samples, &frame, &ransac)?,
            ScaleSource::InitialFallback,
        ),
        Err(e) => return Err(e),
    };

    Ok(FitReport {
        threshold,
        mask_pixels: mask.count(),
        kept_pixels: kept.count(),
        off_box_pixels,
        correspondences: pairs.len(),
        ransac,
        refined,
        scale_source,
        frame,
        samples,
    })
}

/// Keeps `init.alpha` and clamps the shift into the range that keeps every
/// sample in the box.
fn keep_scale(
    samples: &[PixelSample],
    frame: &BoxFrame,
    init: &AffineDepthParams,
) -> Result<AffineDepthParams> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for s in samples {
        let (tl, th) = ray_interval(&s.x, frame)
            .ok_or_else(|| Error::Infeasible("a mask pixel's ray misses the box".into()))?;
        lo = lo.max(tl - s.d * init.alpha);
        hi = hi.min(th - s.d * init.alpha);
    }
    if lo > hi {
        return Err(Error::Infeasible(
            "no shift fits every sample at the initial scale".into(),
        ));
    }
    Ok(AffineDepthParams {
        alpha: init.alpha,
        beta: init.beta.clamp(lo, hi),
        inlier_count: samples.len(),
        residual_rms: 0.0,
    })
}

pub fn inpaint(input: &PipelineInput, cfg: &PipelineConfig) -> Result<InpaintReport> {
    let fit = fit(input, cfg)?;
    let points = lift_pixels(&fit.samples, &fit.refined, input.camera)?;
    let vox = voxelize_points(&points, &fit.frame, cfg.resolution)?;
    let grid = vox.grid.dilated(cfg.dilation).rehost(input.camera.pose());
    let (scan, updates) = update_rays(input.scan, &grid, cfg.range_mode);
    Ok(InpaintReport {
        fit,
        points,
        dropped_points: vox.dropped,
        grid,
        scan,
        updates,
    })
}
