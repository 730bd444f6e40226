use nalgebra::Vector3;

use crate::geometry::{BoxFrame, RigidTransform};
use crate::{Error, Result};

pub const DEFAULT_RESOLUTION: [usize; 3] = [64, 64, 64];

/// Points this close outside the box are clamped into the boundary cells
/// instead of dropped.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Binary occupancy over the box `[δ_min, δ_max]` in box-aligned coordinates.
/// Cells are stored row-major with x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    frame: BoxFrame,
    resolution: [usize; 3],
    voxel_size: Vector3<f64>,
    occupancy: Vec<bool>,
}

/// Result of [`voxelize_points`].
#[derive(Debug, Clone, PartialEq)]
pub struct Voxelization {
    pub grid: VoxelGrid,
    /// Points outside the box.
    pub dropped: usize,
}

impl VoxelGrid {
    pub fn empty(frame: BoxFrame, resolution: [usize; 3]) -> Result<Self> {
        if resolution.contains(&0) {
            return Err(Error::invalid(
                "voxel resolution must be positive on every axis",
            ));
        }
        let ext = frame.extent();
        if !ext.iter().all(|&e| e > 0.0 && e.is_finite()) {
            return Err(Error::invalid("box extent must be positive"));
        }
        let voxel_size = Vector3::new(
            ext.x / resolution[0] as f64,
            ext.y / resolution[1] as f64,
            ext.z / resolution[2] as f64,
        );
        Ok(Self {
            frame,
            resolution,
            voxel_size,
            occupancy: vec![false; resolution.iter().product()],
        })
    }

    pub fn frame(&self) -> &BoxFrame {
        &self.frame
    }
    pub fn resolution(&self) -> [usize; 3] {
        self.resolution
    }
    pub fn voxel_size(&self) -> &Vector3<f64> {
        &self.voxel_size
    }
    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    pub fn linear_index(&self, idx: [usize; 3]) -> usize {
        idx[0] + self.resolution[0] * (idx[1] + self.resolution[1] * idx[2])
    }

    pub fn is_occupied(&self, idx: [usize; 3]) -> bool {
        self.occupancy[self.linear_index(idx)]
    }

    pub fn set(&mut self, idx: [usize; 3], on: bool) {
        let k = self.linear_index(idx);
        self.occupancy[k] = on;
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    pub fn occupied(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let [nx, ny, _] = self.resolution;
        self.occupancy
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(k, _)| [k % nx, (k / nx) % ny, k / (nx * ny)])
    }

    /// Cell containing host-frame point `p`, or `None` outside the box
    /// (beyond [`BOUNDARY_TOL`]).
    pub fn cell_of(&self, p: &Vector3<f64>) -> Option<[usize; 3]> {
        let q = self.frame.align(p) - self.frame.delta_min;
        let ext = self.frame.extent();
        let mut idx = [0usize; 3];
        for k in 0..3 {
            if !(q[k] >= -BOUNDARY_TOL && q[k] <= ext[k] + BOUNDARY_TOL) {
                return None;
            }
            let c = (q[k] / self.voxel_size[k]).floor();
            idx[k] = c.clamp(0.0, (self.resolution[k] - 1) as f64) as usize;
        }
        Some(idx)
    }

    /// Center of a cell in box-aligned coordinates.
    pub fn cell_center_aligned(&self, idx: [usize; 3]) -> Vector3<f64> {
        Vector3::new(
            self.frame.delta_min.x + (idx[0] as f64 + 0.5) * self.voxel_size.x,
            self.frame.delta_min.y + (idx[1] as f64 + 0.5) * self.voxel_size.y,
            self.frame.delta_min.z + (idx[2] as f64 + 0.5) * self.voxel_size.z,
        )
    }

    /// Same occupancy hosted in another frame; `t` maps the new host into
    /// the current one.
    pub fn rehost(&self, t: &RigidTransform) -> VoxelGrid {
        VoxelGrid {
            frame: self.frame.rehost(t),
            ..self.clone()
        }
    }

    /// Chebyshev dilation of the occupancy by `radius` cells.
    pub fn dilated(&self, radius: usize) -> VoxelGrid {
        if radius == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        let r = radius as isize;
        let [nx, ny, nz] = self.resolution.map(|n| n as isize);
        for idx in self.occupied() {
            for dz in -r..=r {
                for dy in -r..=r {
                    for dx in -r..=r {
                        let (x, y, z) = (
                            idx[0] as isize + dx,
                            idx[1] as isize + dy,
                            idx[2] as isize + dz,
                        );
                        if (0..nx).contains(&x) && (0..ny).contains(&y) && (0..nz).contains(&z) {
                            out.set([x as usize, y as usize, z as usize], true);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Marks every cell that receives at least one point. `points` live in the
/// frame's host frame (the camera frame for [`crate::geometry::box_frame`]).
/// A point exactly on `δ_max` falls in the last cell.
pub fn voxelize_points(
    points: &[Vector3<f64>],
    frame: &BoxFrame,
    resolution: [usize; 3],
) -> Result<Voxelization> {
    let mut grid = VoxelGrid::empty(*frame, resolution)?;
    let mut dropped = 0;
    for p in points {
        match grid.cell_of(p) {
            Some(idx) => grid.set(idx, true),
            None => dropped += 1,
        }
    }
    Ok(Voxelization { grid, dropped })
}
