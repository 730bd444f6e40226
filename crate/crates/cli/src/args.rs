use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const FORMATS: &str = "\
FILE FORMATS
  calibration JSON  {fx, fy, cx, cy, width, height,
                     pose: {rotation: [9 row-major], translation: [3]}}
                    pose maps world to camera (x right, y down, z forward).
  box track JSON    [{frame, center: [3], size: [l, w, h], yaw, pitch}, ...]
                    world frame, Z up; yaw about +Z, then pitch about the
                    yawed +Y.
  depth PFM         'Pf' single channel float map; relative depth that grows
                    with distance (see --invert-disparity).
  mask PGM          binary P5, maxval <= 255; pixels >= half maxval are object.
  .lray             12-byte magic 'LIDARFILLRAY', u32 version 1, u64 ray
                    count, then per ray 7 x f32 little-endian: origin xyz,
                    unit direction xyz, range (+inf = no return).
  PLY               vertex x, y, z float32; ascii or binary_little_endian.
  scene JSON        {camera, scanner, background: [primitive], object,
                     object_box?, affine: {alpha, beta}, degradation?}
                    primitive: {kind: sphere|cuboid|superellipsoid, ...}.

EXIT CODES
  0 success, 2 invalid input, 3 numerical failure, 4 I/O failure.";

/// Geometry-based LiDAR inpainting for objects inserted into camera frames.
#[derive(Debug, Parser)]
#[command(name = "lidarfill", version, after_long_help = FORMATS)]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "LIDARFILL_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a 3D box into an RoI mask and square crop window.
    Project(ProjectArgs),
    /// Fit the affine depth map and refine its scale inside the box.
    Fit(FitArgs),
    /// Run the full pipeline and write the updated scan.
    Inpaint(InpaintArgs),
    /// Generate a synthetic bundle with ground truth.
    Simulate(SimulateArgs),
    /// Compare a reconstructed scan against a bundle's ground truth.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub calib: PathBuf,
    #[arg(long)]
    pub boxes: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub frame: u32,
    /// Outline enlargement about the hull centroid.
    #[arg(long, default_value_t = 0.10)]
    pub enlarge: f64,
    /// Side of the resampled square crop in pixels.
    #[arg(long, default_value_t = 512)]
    pub crop_size: usize,
    #[arg(long)]
    pub out_mask: PathBuf,
    #[arg(long)]
    pub out_crop: PathBuf,
}

/// Pipeline inputs; each defaults to the matching file in `--bundle`.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Directory holding calib.json, boxes.json, scan.lray, depth.pfm, mask.pgm.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    #[arg(long)]
    pub calib: Option<PathBuf>,
    #[arg(long)]
    pub boxes: Option<PathBuf>,
    #[arg(long)]
    pub scan: Option<PathBuf>,
    #[arg(long)]
    pub depth: Option<PathBuf>,
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Crop JSON from `project`, when depth and mask cover a crop.
    #[arg(long)]
    pub crop: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub frame: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AblationArg {
    Full,
    /// RoI hull instead of the object mask.
    NoSam,
    /// Constant relative depth at the box center.
    NoDa,
    /// No depth-gradient filter.
    NoFilter,
    /// No gradient filter and the RoI hull as mask.
    NoFilterNoMask,
    NoDaNoSam,
}

#[derive(Debug, Clone, Args)]
pub struct KnobArgs {
    /// Gradient threshold as a fraction of the in-mask depth span.
    #[arg(long, default_value_t = 0.05, conflicts_with_all = ["gradient_threshold", "no_gradient_filter"])]
    pub gradient_fraction: f64,
    /// Absolute gradient threshold (relative-depth units per pixel).
    #[arg(long)]
    pub gradient_threshold: Option<f64>,
    #[arg(long)]
    pub no_gradient_filter: bool,
    /// RANSAC inlier tolerance in meters.
    #[arg(long, default_value_t = 0.05)]
    pub ransac_tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub ransac_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Voxels per axis: N or NX,NY,NZ.
    #[arg(long, default_value = "64", value_parser = parse_resolution)]
    pub resolution: [usize; 3],
    /// Occupancy dilation radius in voxels.
    #[arg(long, default_value_t = 0)]
    pub dilation: usize,
    /// RoI enlargement used by hull-mask ablations.
    #[arg(long, default_value_t = 0.10)]
    pub enlarge: f64,
    /// Depth input is disparity (larger = nearer); use its reciprocal.
    #[arg(long)]
    pub invert_disparity: bool,
    /// Measure updated ranges to voxel centers instead of entry points.
    #[arg(long)]
    pub voxel_center_distance: bool,
    /// Keep the RANSAC scale when the box program is unbounded.
    #[arg(long)]
    pub keep_scale_if_unbounded: bool,
    #[arg(long, value_enum, default_value_t = AblationArg::Full)]
    pub ablation: AblationArg,
}

fn parse_resolution(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [n] => Ok([*n; 3]),
        [x, y, z] => Ok([*x, *y, *z]),
        _ => Err("expected N or NX,NY,NZ".into()),
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
    #[command(flatten)]
    pub knobs: KnobArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlyArg {
    Ascii,
    Binary,
}

#[derive(Debug, Args)]
pub struct InpaintArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
    #[command(flatten)]
    pub knobs: KnobArgs,
    /// Receives scan.lray, updates.csv, object.ply and inpaint.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = PlyArg::Binary)]
    pub ply_format: PlyArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Empty,
    Sphere,
    Cuboid,
    Superellipsoid,
    Occluded,
    NoisySphere,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scene JSON.
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    pub scene: Option<PathBuf>,
    /// Built-in scene instead of a scene file.
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DenominatorArg {
    Reconstructed,
    GroundTruth,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Bundle with gt.lray and boxes.json.
    #[arg(long)]
    pub bundle: PathBuf,
    /// Reconstructed scan; omit to run the pipeline on the bundle.
    #[arg(long)]
    pub rec: Option<PathBuf>,
    #[command(flatten)]
    pub knobs: KnobArgs,
    #[arg(long, value_enum, default_value_t = DenominatorArg::Reconstructed)]
    pub absrel_denominator: DenominatorArg,
    #[arg(long, default_value_t = 0)]
    pub frame: u32,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the report as a one-row CSV table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}
