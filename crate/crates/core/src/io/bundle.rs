use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::json::{write_box_track, write_json};
use super::lray::write_lray;
use super::pfm::{pfm_from_depth, write_pfm};
use super::pgm::{pgm_from_mask, write_pgm};
use super::ply::{write_ply, PlyFormat, PointCloud};
use crate::geometry::BoxTrack;
use crate::sim::{BoxSpec, SceneBundle};
use crate::Result;

/// File names inside a bundle directory.
pub mod files {
    pub const SCENE: &str = "scene.json";
    pub const CALIB: &str = "calib.json";
    pub const BOXES: &str = "boxes.json";
    pub const SCAN: &str = "scan.lray";
    pub const GROUND_TRUTH: &str = "gt.lray";
    pub const DEPTH: &str = "depth.pfm";
    pub const MASK: &str = "mask.pgm";
    pub const SILHOUETTE: &str = "silhouette.pgm";
    pub const TRUTH: &str = "truth.json";
    pub const GT_OBJECT: &str = "gt_object.ply";
}

/// `truth.json`: the generating parameters and labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleTruth {
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub object_box: Option<BoxSpec>,
    pub ray_count: usize,
    /// Ground-truth rays whose return lies on the object primitive.
    pub object_rays: Vec<usize>,
    /// Rays whose return was cleared from `scan.lray`.
    pub removed_rays: Vec<usize>,
    pub mask_pixels: usize,
    pub silhouette_pixels: usize,
}

impl BundleTruth {
    pub fn of(b: &SceneBundle) -> Self {
        Self {
            seed: b.seed,
            alpha: b.alpha,
            beta: b.beta,
            object_box: b.object_box.as_ref().map(BoxSpec::from_box),
            ray_count: b.ground_truth.scan.len(),
            object_rays: b.object_rays(),
            removed_rays: b.removed.ray_indices.clone(),
            mask_pixels: b.mask.count(),
            silhouette_pixels: b.silhouette.count(),
        }
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Writes every bundle file into `dir`, creating it if needed. Without an
/// object the box track is empty.
pub fn write_bundle(bundle: &SceneBundle, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_json(&dir.join(files::SCENE), &bundle.config)?;
    write_json(&dir.join(files::CALIB), &bundle.camera)?;
    let track = BoxTrack::new(bundle.object_box.iter().map(|b| (0, *b)).collect())?;
    write_box_track(&dir.join(files::BOXES), &track)?;
    write_json(&dir.join(files::TRUTH), &BundleTruth::of(bundle))?;

    let mut w = create(dir, files::SCAN)?;
    write_lray(&mut w, &bundle.input_scan)?;
    w.flush()?;
    let mut w = create(dir, files::GROUND_TRUTH)?;
    write_lray(&mut w, &bundle.ground_truth.scan)?;
    w.flush()?;
    let mut w = create(dir, files::DEPTH)?;
    write_pfm(&mut w, &pfm_from_depth(&bundle.relative_depth))?;
    w.flush()?;
    let mut w = create(dir, files::MASK)?;
    write_pgm(&mut w, &pgm_from_mask(&bundle.mask))?;
    w.flush()?;
    let mut w = create(dir, files::SILHOUETTE)?;
    write_pgm(&mut w, &pgm_from_mask(&bundle.silhouette))?;
    w.flush()?;
    let mut w = create(dir, files::GT_OBJECT)?;
    write_ply(
        &mut w,
        &PointCloud::from_f64(&bundle.removed.points),
        PlyFormat::BinaryLittleEndian,
    )?;
    w.flush()?;
    Ok(())
}
