use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use lidarfill::depthlift::AffineDepthParams;
use lidarfill::geometry::{roi_mask_from_box, square_crop_for_mask, CropWindow};
use lidarfill::io::{self, files, BundleTruth, PlyFormat, PointCloud};
use lidarfill::metrics::{evaluate_scans, AbsRelDenominator, EvalReport};
use lidarfill::pipeline::{self, FitReport, PipelineConfig, PipelineInput, ScaleSource};
use lidarfill::sim::{make_bundle, presets, SceneConfig};
use lidarfill::{Error, Result};
use serde::Serialize;

use crate::args::*;
use crate::inputs::{self, InputPaths};

fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Result<()> {
    let text = io::to_json_string(report)?;
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ProjectReport<'a> {
    crop: CropWindow,
    mask_pixels: usize,
    width: usize,
    height: usize,
    calib: &'a Path,
    boxes: &'a Path,
    frame: u32,
    enlarge: f64,
    crop_size: usize,
}

pub fn project(a: &ProjectArgs) -> Result<()> {
    let cam = io::read_calibration(inputs::existing(&a.calib)?)?;
    let bbox = inputs::read_box(&a.boxes, a.frame)?;
    let mask = roi_mask_from_box(&cam, &bbox, a.enlarge)?;
    let crop = square_crop_for_mask(&mask, a.crop_size)?;
    let mut w = BufWriter::new(File::create(&a.out_mask)?);
    io::write_pgm(&mut w, &io::pgm_from_mask(&mask))?;
    w.flush()?;
    let report = ProjectReport {
        crop,
        mask_pixels: mask.count(),
        width: mask.width(),
        height: mask.height(),
        calib: &a.calib,
        boxes: &a.boxes,
        frame: a.frame,
        enlarge: a.enlarge,
        crop_size: a.crop_size,
    };
    emit(&crop, Some(&a.out_crop))?;
    emit(&report, None)
}

#[derive(Serialize)]
struct FitSummary {
    alpha: f64,
    beta: f64,
    ransac: AffineDepthParams,
    refined: AffineDepthParams,
    scale_source: ScaleSource,
    correspondences: usize,
    mask_pixels: usize,
    kept_pixels: usize,
    off_box_pixels: usize,
    gradient_threshold: Option<f64>,
}

impl From<&FitReport> for FitSummary {
    fn from(f: &FitReport) -> Self {
        Self {
            alpha: f.refined.alpha,
            beta: f.refined.beta,
            ransac: f.ransac,
            refined: f.refined,
            scale_source: f.scale_source,
            correspondences: f.correspondences,
            mask_pixels: f.mask_pixels,
            kept_pixels: f.kept_pixels,
            off_box_pixels: f.off_box_pixels,
            gradient_threshold: f.threshold,
        }
    }
}

#[derive(Serialize)]
struct FitOutput<'a> {
    #[serde(flatten)]
    fit: FitSummary,
    inputs: &'a InputPaths,
    config: &'a PipelineConfig,
}

pub fn fit(a: &FitArgs) -> Result<()> {
    let paths = InputPaths::resolve(&a.inputs)?;
    let cfg = inputs::pipeline_config(&a.knobs);
    let l = paths.load()?;
    let input = PipelineInput {
        camera: &l.camera,
        scan: &l.scan,
        depth: &l.depth,
        mask: &l.mask,
        bbox: &l.bbox,
    };
    let f = pipeline::fit(&input, &cfg)?;
    emit(
        &FitOutput {
            fit: FitSummary::from(&f),
            inputs: &paths,
            config: &cfg,
        },
        a.out.as_deref(),
    )
}

#[derive(Serialize)]
struct InpaintOutput<'a> {
    fit: FitSummary,
    lifted_points: usize,
    dropped_points: usize,
    occupied_voxels: usize,
    updated_rays: usize,
    inputs: &'a InputPaths,
    config: &'a PipelineConfig,
}

#[derive(Serialize)]
struct UpdateRow {
    ray_index: usize,
    old_range: f64,
    new_range: f64,
    ix: usize,
    iy: usize,
    iz: usize,
}

pub fn inpaint(a: &InpaintArgs) -> Result<()> {
    let paths = InputPaths::resolve(&a.inputs)?;
    let cfg = inputs::pipeline_config(&a.knobs);
    let l = paths.load()?;
    let input = PipelineInput {
        camera: &l.camera,
        scan: &l.scan,
        depth: &l.depth,
        mask: &l.mask,
        bbox: &l.bbox,
    };
    let r = pipeline::inpaint(&input, &cfg)?;
    fs::create_dir_all(&a.out_dir)?;

    let mut w = BufWriter::new(File::create(a.out_dir.join(files::SCAN))?);
    io::write_lray(&mut w, &r.scan)?;
    w.flush()?;

    let mut csv = csv::Writer::from_path(a.out_dir.join("updates.csv")).map_err(csv_err)?;
    for u in &r.updates {
        csv.serialize(UpdateRow {
            ray_index: u.ray_index,
            old_range: u.old_range,
            new_range: u.new_range,
            ix: u.hit_voxel[0],
            iy: u.hit_voxel[1],
            iz: u.hit_voxel[2],
        })
        .map_err(csv_err)?;
    }
    csv.flush()?;

    let world: Vec<_> = r.points.iter().map(|p| l.camera.to_world(p)).collect();
    let format = match a.ply_format {
        PlyArg::Ascii => PlyFormat::Ascii,
        PlyArg::Binary => PlyFormat::BinaryLittleEndian,
    };
    let mut w = BufWriter::new(File::create(a.out_dir.join("object.ply"))?);
    io::write_ply(&mut w, &PointCloud::from_f64(&world), format)?;
    w.flush()?;

    let report = InpaintOutput {
        fit: FitSummary::from(&r.fit),
        lifted_points: r.points.len(),
        dropped_points: r.dropped_points,
        occupied_voxels: r.grid.occupied_count(),
        updated_rays: r.updates.len(),
        inputs: &paths,
        config: &cfg,
    };
    io::write_json(&a.out_dir.join("inpaint.json"), &report)?;
    emit(&report, None)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::format(format!("CSV: {other:?}")),
    }
}

pub fn preset(p: PresetArg) -> SceneConfig {
    match p {
        PresetArg::Empty => {
            let mut s = presets::scene_with(None);
            s.background.clear();
            s
        }
        PresetArg::Sphere => presets::sphere_scene(),
        PresetArg::Cuboid => presets::cuboid_scene(),
        PresetArg::Superellipsoid => presets::scene_with(Some(presets::superellipsoid_object())),
        PresetArg::Occluded => presets::occluded_scene(),
        PresetArg::NoisySphere => presets::noisy_sphere_scene(),
    }
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    out_dir: &'a Path,
    seed: u64,
    rays: usize,
    returns: usize,
    object_rays: usize,
    removed_rays: usize,
    mask_pixels: usize,
    silhouette_pixels: usize,
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let scene = match (&a.scene, a.preset) {
        (Some(p), _) => io::read_json::<SceneConfig>(inputs::existing(p)?)?,
        (None, Some(p)) => preset(p),
        (None, None) => return Err(Error::invalid("--scene or --preset is required")),
    };
    let b = make_bundle(&scene, a.seed)?;
    io::write_bundle(&b, &a.out_dir)?;
    let truth = BundleTruth::of(&b);
    emit(
        &SimulateOutput {
            out_dir: &a.out_dir,
            seed: a.seed,
            rays: b.ground_truth.scan.len(),
            returns: b.ground_truth.scan.return_count(),
            object_rays: truth.object_rays.len(),
            removed_rays: truth.removed_rays.len(),
            mask_pixels: truth.mask_pixels,
            silhouette_pixels: truth.silhouette_pixels,
        },
        None,
    )
}

#[derive(Serialize)]
struct EvaluateOutput<'a> {
    #[serde(flatten)]
    report: EvalReport,
    ablation: Option<&'a str>,
    reconstruction: String,
    bundle: &'a Path,
    frame: u32,
    config: Option<PipelineConfig>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    bundle: String,
    reconstruction: &'a str,
    ablation: &'a str,
    absrel_denominator: &'a str,
    absrel_object: Option<f64>,
    l2_object: Option<f64>,
    absrel_all: Option<f64>,
    l2_all: Option<f64>,
    matched_object: usize,
    matched_all: usize,
    misses: usize,
    object_misses: usize,
}

pub fn evaluate(a: &EvaluateArgs) -> Result<()> {
    let gt = inputs::read_scan(&a.bundle.join(files::GROUND_TRUTH))?;
    let bbox = inputs::read_box(&a.bundle.join(files::BOXES), a.frame)?;
    let denom = match a.absrel_denominator {
        DenominatorArg::Reconstructed => AbsRelDenominator::Reconstructed,
        DenominatorArg::GroundTruth => AbsRelDenominator::GroundTruth,
    };
    let (rec, reconstruction, config, ablation) = match &a.rec {
        Some(p) => (inputs::read_scan(p)?, p.display().to_string(), None, None),
        None => {
            let cfg = inputs::pipeline_config(&a.knobs);
            let paths = InputPaths::resolve(&InputArgs {
                bundle: Some(a.bundle.clone()),
                calib: None,
                boxes: None,
                scan: None,
                depth: None,
                mask: None,
                crop: None,
                frame: a.frame,
            })?;
            let l = paths.load()?;
            let input = PipelineInput {
                camera: &l.camera,
                scan: &l.scan,
                depth: &l.depth,
                mask: &l.mask,
                bbox: &l.bbox,
            };
            let r = pipeline::inpaint(&input, &cfg)?;
            let name = clap::ValueEnum::to_possible_value(&a.knobs.ablation)
                .map(|v| v.get_name().to_string());
            (r.scan, "pipeline".to_string(), Some(cfg), name)
        }
    };
    let report = evaluate_scans(&gt, &rec, &bbox, denom)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        w.serialize(CsvRow {
            bundle: a.bundle.display().to_string(),
            reconstruction: &reconstruction,
            ablation: ablation.as_deref().unwrap_or(""),
            absrel_denominator: match denom {
                AbsRelDenominator::Reconstructed => "reconstructed",
                AbsRelDenominator::GroundTruth => "ground-truth",
            },
            absrel_object: report.absrel_object,
            l2_object: report.l2_object,
            absrel_all: report.absrel_all,
            l2_all: report.l2_all,
            matched_object: report.matched_object,
            matched_all: report.matched_all,
            misses: report.misses,
            object_misses: report.object_misses,
        })
        .map_err(csv_err)?;
        w.flush()?;
    }
    emit(
        &EvaluateOutput {
            report,
            ablation: ablation.as_deref(),
            reconstruction,
            bundle: &a.bundle,
            frame: a.frame,
            config,
        },
        a.out.as_deref(),
    )
}
