//! On-disk formats: PFM depth maps, PGM masks, `.lray` scans, PLY point
//! clouds, JSON records and synthetic bundle directories.

mod bundle;
mod header;
mod json;
mod lray;
mod pfm;
mod pgm;
mod ply;

pub use bundle::{files, write_bundle, BundleTruth};
pub use json::{
    read_box_track, read_calibration, read_json, to_json_string, write_box_track, write_json,
};
pub use lray::{read_lray, write_lray, LRAY_MAGIC, LRAY_VERSION};
pub use pfm::{depth_from_pfm, pfm_from_depth, read_depth_pfm, read_pfm, write_pfm, PfmImage};
pub use pgm::{mask_from_pgm, pgm_from_mask, read_mask_pgm, read_pgm, write_pgm, GrayImage};
pub use ply::{read_ply, write_ply, PlyFormat, PointCloud};
