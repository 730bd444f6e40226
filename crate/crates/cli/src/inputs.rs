use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use lidarfill::depthlift::RansacConfig;
use lidarfill::geometry::{BBox3D, Camera, CropWindow};
use lidarfill::io::{self, files};
use lidarfill::pipeline::{Ablation, GradientThreshold, PipelineConfig, UnboundedPolicy};
use lidarfill::raster::{DepthMap, ObjectMask};
use lidarfill::voxel::{LidarScan, RangeMode};
use lidarfill::{Error, Result};
use serde::Serialize;

use crate::args::{AblationArg, InputArgs, KnobArgs};

/// Missing inputs are validation errors, not I/O failures.
pub fn existing(path: &Path) -> Result<&Path> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(Error::invalid(format!(
            "input file {} does not exist",
            path.display()
        )))
    }
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(existing(path)?)?))
}

pub fn read_scan(path: &Path) -> Result<LidarScan> {
    io::read_lray(&mut open(path)?, "world")
}

pub fn read_box(path: &Path, frame: u32) -> Result<BBox3D> {
    let track = io::read_box_track(existing(path)?)?;
    track
        .get(frame)
        .copied()
        .ok_or_else(|| Error::invalid(format!("box track has no frame {frame}")))
}

/// Resolved input paths, echoed into reports.
#[derive(Debug, Clone, Serialize)]
pub struct InputPaths {
    pub calib: PathBuf,
    pub boxes: PathBuf,
    pub scan: PathBuf,
    pub depth: PathBuf,
    pub mask: PathBuf,
    pub crop: Option<PathBuf>,
    pub frame: u32,
}

pub struct Loaded {
    pub camera: Camera,
    pub bbox: BBox3D,
    pub scan: LidarScan,
    pub depth: DepthMap,
    pub mask: ObjectMask,
}

impl InputPaths {
    pub fn resolve(a: &InputArgs) -> Result<Self> {
        let pick = |given: &Option<PathBuf>, name: &str, flag: &str| -> Result<PathBuf> {
            match (given, &a.bundle) {
                (Some(p), _) => Ok(p.clone()),
                (None, Some(dir)) => Ok(dir.join(name)),
                (None, None) => Err(Error::invalid(format!(
                    "--{flag} is required without --bundle"
                ))),
            }
        };
        Ok(Self {
            calib: pick(&a.calib, files::CALIB, "calib")?,
            boxes: pick(&a.boxes, files::BOXES, "boxes")?,
            scan: pick(&a.scan, files::SCAN, "scan")?,
            depth: pick(&a.depth, files::DEPTH, "depth")?,
            mask: pick(&a.mask, files::MASK, "mask")?,
            crop: a.crop.clone(),
            frame: a.frame,
        })
    }

    pub fn load(&self) -> Result<Loaded> {
        for p in [
            &self.calib,
            &self.boxes,
            &self.scan,
            &self.depth,
            &self.mask,
        ] {
            existing(p)?;
        }
        let camera = io::read_calibration(&self.calib)?;
        let bbox = read_box(&self.boxes, self.frame)?;
        let scan = read_scan(&self.scan)?;
        let mut depth = io::read_depth_pfm(&mut open(&self.depth)?)?;
        let mask = io::read_mask_pgm(&mut open(&self.mask)?)?;
        if let Some(c) = &self.crop {
            let crop: CropWindow = io::read_json(existing(c)?)?;
            if depth.dims() != (crop.target, crop.target) {
                return Err(Error::invalid(
                    "depth map size does not match the crop target",
                ));
            }
            depth.set_placement(crop.placement());
        }
        Ok(Loaded {
            camera,
            bbox,
            scan,
            depth,
            mask,
        })
    }
}

pub fn pipeline_config(k: &KnobArgs) -> PipelineConfig {
    let gradient = if k.no_gradient_filter {
        GradientThreshold::Off
    } else if let Some(t) = k.gradient_threshold {
        GradientThreshold::Absolute(t)
    } else {
        GradientThreshold::Fraction(k.gradient_fraction)
    };
    let ablation = match k.ablation {
        AblationArg::Full => Ablation::FULL,
        AblationArg::NoSam => Ablation {
            hull_mask: true,
            ..Ablation::FULL
        },
        AblationArg::NoDa => Ablation {
            constant_depth: true,
            ..Ablation::FULL
        },
        AblationArg::NoFilter => Ablation {
            skip_gradient: true,
            ..Ablation::FULL
        },
        AblationArg::NoFilterNoMask => Ablation {
            hull_mask: true,
            skip_gradient: true,
            ..Ablation::FULL
        },
        AblationArg::NoDaNoSam => Ablation {
            hull_mask: true,
            constant_depth: true,
            ..Ablation::FULL
        },
    };
    PipelineConfig {
        gradient,
        ransac: RansacConfig {
            inlier_tol: k.ransac_tol,
            iterations: k.ransac_iters,
            seed: k.seed,
        },
        resolution: k.resolution,
        dilation: k.dilation,
        enlarge: k.enlarge,
        invert_disparity: k.invert_disparity,
        range_mode: if k.voxel_center_distance {
            RangeMode::Center
        } else {
            RangeMode::Entry
        },
        unbounded: if k.keep_scale_if_unbounded {
            UnboundedPolicy::KeepInitial
        } else {
            UnboundedPolicy::Fail
        },
        ablation,
    }
}
