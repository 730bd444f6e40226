use nalgebra::Vector3;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::primitive::{Primitive, PrimitiveSpec};
use super::render::{render_depth, RenderedDepth};
use super::scanner::{scan_scene, LabeledScan, ScannerSpec};
use crate::geometry::{roi_mask_from_box, BBox3D, Camera, DEFAULT_ENLARGE, NEAR_PLANE};
use crate::raster::{DepthMap, ObjectMask};
use crate::voxel::{remove_points_in_box, LidarScan, RemovalPolicy, RemovedReturns};
use crate::{Error, Result};

const NOISE_STREAM: u64 = 1;
const OUTLIER_STREAM: u64 = 2;

/// Default padding of the tight object box on every side (meters), so that
/// returns on flat faces are not lost to round-off at the box boundary.
pub const DEFAULT_BOX_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub center: [f64; 3],
    pub size: [f64; 3],
    #[serde(default)]
    pub yaw: f64,
    #[serde(default)]
    pub pitch: f64,
}

impl BoxSpec {
    pub fn build(&self) -> Result<BBox3D> {
        BBox3D::new(
            Vector3::from(self.center),
            Vector3::from(self.size),
            self.yaw,
            self.pitch,
        )
    }

    pub fn from_box(b: &BBox3D) -> Self {
        Self {
            center: (*b.center()).into(),
            size: (*b.size()).into(),
            yaw: b.yaw(),
            pitch: b.pitch(),
        }
    }
}

/// Ground-truth affine map: metric depth `z = alpha · d + beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineSpec {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Degradation {
    /// Replace the silhouette by the enlarged RoI hull of the box.
    pub hull_mask: bool,
    /// Flatten the mask's relative depth to the box-center depth.
    pub constant_depth: bool,
    /// Gaussian noise σ in relative-depth units, applied to every pixel.
    pub noise_sigma: f64,
    /// Fraction of background pixels carrying a LiDAR return whose relative
    /// depth is replaced by a uniform draw.
    pub outlier_fraction: f64,
    /// Hull enlargement for `hull_mask`.
    pub enlarge: f64,
}

impl Default for Degradation {
    fn default() -> Self {
        Self {
            hull_mask: false,
            constant_depth: false,
            noise_sigma: 0.0,
            outlier_fraction: 0.0,
            enlarge: DEFAULT_ENLARGE,
        }
    }
}

/// Scene description for [`make_bundle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub camera: Camera,
    pub scanner: ScannerSpec,
    #[serde(default)]
    pub background: Vec<PrimitiveSpec>,
    #[serde(default)]
    pub object: Option<PrimitiveSpec>,
    /// Defaults to the object's own box padded by [`DEFAULT_BOX_MARGIN`].
    #[serde(default)]
    pub object_box: Option<BoxSpec>,
    pub affine: AffineSpec,
    #[serde(default)]
    pub degradation: Degradation,
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        self.scanner.validate()?;
        let AffineSpec { alpha, beta } = self.affine;
        if !(alpha > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::invalid(
                "true scale must be positive and shift finite",
            ));
        }
        let d = &self.degradation;
        if !(d.noise_sigma >= 0.0 && d.noise_sigma.is_finite()) {
            return Err(Error::invalid("noise sigma must be non-negative"));
        }
        if !(0.0..=1.0).contains(&d.outlier_fraction) {
            return Err(Error::invalid("outlier fraction must lie in [0, 1]"));
        }
        if !(d.enlarge >= 0.0 && d.enlarge.is_finite()) {
            return Err(Error::invalid("enlarge fraction must be non-negative"));
        }
        if self.object.is_none() && (d.hull_mask || d.constant_depth) {
            return Err(Error::invalid("mask and depth degradations need an object"));
        }
        Ok(())
    }
}

/// Synthetic scene with full ground truth.
#[derive(Debug, Clone)]
pub struct SceneBundle {
    pub config: SceneConfig,
    pub seed: u64,
    pub camera: Camera,
    /// Background primitives followed by the object, if any.
    pub primitives: Vec<Primitive>,
    pub object_label: Option<usize>,
    pub object_box: Option<BBox3D>,
    pub ground_truth: LabeledScan,
    /// Ground truth with the returns inside the object box cleared.
    pub input_scan: LidarScan,
    pub removed: RemovedReturns,
    pub metric_depth: RenderedDepth,
    pub relative_depth: DepthMap,
    /// Exact object silhouette.
    pub silhouette: ObjectMask,
    /// Mask handed to the pipeline (silhouette or RoI hull).
    pub mask: ObjectMask,
    pub alpha: f64,
    pub beta: f64,
}

impl SceneBundle {
    /// Ground-truth rays whose return lies on the object.
    pub fn object_rays(&self) -> Vec<usize> {
        match self.object_label {
            Some(l) => (0..self.ground_truth.labels.len())
                .filter(|&k| self.ground_truth.labels[k] == Some(l))
                .collect(),
            None => Vec::new(),
        }
    }
}

pub fn make_bundle(config: &SceneConfig, seed: u64) -> Result<SceneBundle> {
    config.validate()?;
    let cam = config.camera.clone();
    let mut primitives = config
        .background
        .iter()
        .map(PrimitiveSpec::build)
        .collect::<Result<Vec<_>>>()?;
    let object = config
        .object
        .as_ref()
        .map(PrimitiveSpec::build)
        .transpose()?;
    let object_label = object.map(|o| {
        primitives.push(o);
        primitives.len() - 1
    });
    let object_box = match (&config.object_box, &object) {
        (Some(b), _) => Some(b.build()?),
        (None, Some(o)) => {
            let t = o.bounding_box();
            let size = t.size() + Vector3::repeat(2.0 * DEFAULT_BOX_MARGIN);
            Some(BBox3D::new(*t.center(), size, t.yaw(), t.pitch())?)
        }
        (None, None) => None,
    };

    let ground_truth = scan_scene(&config.scanner, &primitives)?;
    let (input_scan, removed) = match &object_box {
        Some(b) => remove_points_in_box(&ground_truth.scan, b, RemovalPolicy::NoReturn),
        None => (
            ground_truth.scan.clone(),
            RemovedReturns {
                ray_indices: Vec::new(),
                points: Vec::new(),
            },
        ),
    };

    let metric_depth = render_depth(&cam, &primitives);
    let (w, h) = (cam.width(), cam.height());
    let silhouette = match object_label {
        Some(l) => metric_depth.silhouette(l),
        None => ObjectMask::empty(w, h),
    };
    let mask = match (&object_box, config.degradation.hull_mask) {
        (Some(b), true) => roi_mask_from_box(&cam, b, config.degradation.enlarge)?,
        _ => silhouette.clone(),
    };

    let AffineSpec { alpha, beta } = config.affine;
    let far = config.scanner.max_range;
    let mut rel: Vec<f64> = metric_depth
        .values()
        .iter()
        .map(|&z| (if z.is_finite() { z } else { far } - beta) / alpha)
        .collect();

    let deg = &config.degradation;
    if deg.constant_depth {
        let b = object_box.as_ref().expect("validated");
        let zc = cam.to_camera(b.center()).z;
        if zc <= NEAR_PLANE {
            return Err(Error::BehindCamera {
                depth: zc,
                near: NEAR_PLANE,
            });
        }
        let dc = (zc - beta) / alpha;
        for (i, j) in mask.iter_set() {
            rel[j * w + i] = dc;
        }
    }

    if deg.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(NOISE_STREAM);
        let normal =
            Normal::new(0.0, deg.noise_sigma).map_err(|e| Error::invalid(e.to_string()))?;
        for d in rel.iter_mut() {
            *d += normal.sample(&mut rng);
        }
    }

    if deg.outlier_fraction > 0.0 {
        corrupt_background(
            &mut rel,
            &cam,
            &input_scan,
            &mask,
            deg.outlier_fraction,
            seed,
        );
    }

    let relative_depth = DepthMap::new(w, h, rel.iter().map(|&d| d as f32).collect())?;
    Ok(SceneBundle {
        config: config.clone(),
        seed,
        camera: cam,
        primitives,
        object_label,
        object_box,
        ground_truth,
        input_scan,
        removed,
        metric_depth,
        relative_depth,
        silhouette,
        mask,
        alpha,
        beta,
    })
}

/// Replaces the relative depth at a random subset of background pixels that
/// receive a LiDAR return. Pixels within one pixel of the mask are spared.
fn corrupt_background(
    rel: &mut [f64],
    cam: &Camera,
    scan: &LidarScan,
    mask: &ObjectMask,
    fraction: f64,
    seed: u64,
) {
    let (w, h) = (cam.width(), cam.height());
    let guard = mask.dilated(1);
    let mut hit = vec![false; w * h];
    for (_, p) in scan.points() {
        if let Ok(proj) = cam.project_point_near(&p, NEAR_PLANE) {
            if let Some((i, j)) = proj.pixel(w, h) {
                if !guard.get(i, j) {
                    hit[j * w + i] = true;
                }
            }
        }
    }
    let pixels: Vec<usize> = (0..w * h).filter(|&k| hit[k]).collect();
    if pixels.is_empty() {
        return;
    }
    let (lo, hi) = rel
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| {
            (a.min(d), b.max(d))
        });
    let span = (hi - lo).max(1.0);
    let count = ((fraction * pixels.len() as f64).round() as usize).min(pixels.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(OUTLIER_STREAM);
    let mut chosen = index::sample(&mut rng, pixels.len(), count).into_vec();
    chosen.sort_unstable();
    for c in chosen {
        rel[pixels[c]] = rng.random_range(lo - 0.5 * span..hi + 0.5 * span);
    }
}
