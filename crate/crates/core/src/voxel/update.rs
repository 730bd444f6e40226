use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::VoxelGrid;
use super::scan::{LidarScan, Ray};
use super::traverse::VoxelWalk;
use crate::geometry::BBox3D;

/// How the range to an occupied voxel is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeMode {
    /// Distance at which the ray enters the voxel.
    #[default]
    Entry,
    /// Projection of the voxel center onto the ray.
    Center,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayUpdate {
    pub ray_index: usize,
    pub old_range: f64,
    pub new_range: f64,
    pub hit_voxel: [usize; 3],
}

/// Range candidate for one ray: the first occupied voxel along it, as long as
/// it is nearer than the ray's existing return.
pub fn first_occupied(grid: &VoxelGrid, ray: &Ray, mode: RangeMode) -> Option<(f64, [usize; 3])> {
    for hit in VoxelWalk::new(grid, &ray.origin, &ray.direction) {
        if hit.t_entry >= ray.range {
            // an existing return in front of this cell occludes it
            return None;
        }
        if !grid.is_occupied(hit.index) {
            continue;
        }
        let t = match mode {
            RangeMode::Entry => hit.t_entry,
            RangeMode::Center => {
                let c = grid.cell_center_aligned(hit.index);
                let f = grid.frame();
                (c - f.align(&ray.origin)).dot(&f.align(&ray.direction))
            }
        };
        return (t > 0.0 && t < ray.range).then_some((t, hit.index));
    }
    None
}

/// Rewrites every ray whose first occupied voxel lies in front of its current
/// return (or that had none). `grid` must be hosted in the scan's frame.
/// Output order matches input order.
pub fn update_rays(
    scan: &LidarScan,
    grid: &VoxelGrid,
    mode: RangeMode,
) -> (LidarScan, Vec<RayUpdate>) {
    let found: Vec<Option<(f64, [usize; 3])>> = scan
        .rays
        .par_iter()
        .map(|r| first_occupied(grid, r, mode))
        .collect();
    let mut rays = scan.rays.clone();
    let mut updates = Vec::new();
    for (i, f) in found.into_iter().enumerate() {
        if let Some((t, hit_voxel)) = f {
            updates.push(RayUpdate {
                ray_index: i,
                old_range: rays[i].range,
                new_range: t,
                hit_voxel,
            });
            rays[i].range = t;
        }
    }
    (LidarScan::new(scan.frame_id.clone(), rays), updates)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalPolicy {
    /// Keep the beam, clear its return.
    #[default]
    NoReturn,
    /// Drop the beam from the scan.
    Delete,
}

/// Returns removed by [`remove_points_in_box`], indexed by the input scan.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovedReturns {
    pub ray_indices: Vec<usize>,
    pub points: Vec<Vector3<f64>>,
}

impl RemovedReturns {
    pub fn len(&self) -> usize {
        self.ray_indices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.ray_indices.is_empty()
    }
}

/// Clears (or drops) every return that falls inside `bbox`, which must be in
/// the scan's frame. The removed returns are the evaluation ground truth.
pub fn remove_points_in_box(
    scan: &LidarScan,
    bbox: &BBox3D,
    policy: RemovalPolicy,
) -> (LidarScan, RemovedReturns) {
    let mut removed = RemovedReturns {
        ray_indices: Vec::new(),
        points: Vec::new(),
    };
    let mut rays = Vec::with_capacity(scan.rays.len());
    for (i, r) in scan.rays.iter().enumerate() {
        match r.point() {
            Some(p) if bbox.contains(&p) => {
                removed.ray_indices.push(i);
                removed.points.push(p);
                if policy == RemovalPolicy::NoReturn {
                    rays.push(r.with_range(super::NO_RETURN));
                }
            }
            _ => rays.push(*r),
        }
    }
    (LidarScan::new(scan.frame_id.clone(), rays), removed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoxFrame;
    use crate::voxel::NO_RETURN;
    use nalgebra::Matrix3;

    /// 4×4×4 grid over [−1,1]² × [9,11] with the cell row ix = 1 at (·,1..2,1..2) occupied.
    fn grid() -> VoxelGrid {
        let frame = BoxFrame {
            rotation: Matrix3::identity(),
            delta_min: Vector3::new(-1.0, -1.0, 9.0),
            delta_max: Vector3::new(1.0, 1.0, 11.0),
            half_extent: Vector3::new(1.0, 1.0, 1.0),
        };
        let mut g = VoxelGrid::empty(frame, [4, 4, 4]).unwrap();
        for iy in 0..4 {
            for ix in 0..4 {
                g.set([ix, iy, 1], true);
            }
        }
        g
    }

    fn ray(range: f64) -> Ray {
        Ray::new(Vector3::new(0.1, 0.1, 0.0), Vector3::z(), range).unwrap()
    }

    #[test]
    fn occluded_ray_unchanged() {
        let scan = LidarScan::new("w", vec![ray(5.0)]);
        let (out, ups) = update_rays(&scan, &grid(), RangeMode::Entry);
        assert!(ups.is_empty());
        assert_eq!(out, scan);
    }

    #[test]
    fn no_return_ray_gets_entry_range() {
        // z cells are 0.5 m thick, layer 1 spans [9.5, 10.0)
        let scan = LidarScan::new("w", vec![ray(NO_RETURN), ray(20.0)]);
        let (out, ups) = update_rays(&scan, &grid(), RangeMode::Entry);
        assert_eq!(ups.len(), 2);
        assert_eq!(out.rays[0].range, 9.5);
        assert_eq!(ups[0].hit_voxel, [2, 2, 1]);
        assert_eq!(ups[1].old_range, 20.0);
        // input untouched
        assert_eq!(scan.rays[0].range, NO_RETURN);
    }

    #[test]
    fn center_mode_uses_projected_center() {
        let scan = LidarScan::new("w", vec![ray(NO_RETURN)]);
        let (out, _) = update_rays(&scan, &grid(), RangeMode::Center);
        assert!((out.rays[0].range - 9.75).abs() < 1e-12);
    }

    #[test]
    fn missing_ray_absent_from_updates() {
        let r = Ray::new(Vector3::new(5.0, 0.0, 0.0), Vector3::z(), NO_RETURN).unwrap();
        let scan = LidarScan::new("w", vec![r]);
        let (out, ups) = update_rays(&scan, &grid(), RangeMode::Entry);
        assert!(ups.is_empty());
        assert_eq!(out, scan);
    }

    #[test]
    fn update_is_idempotent() {
        let scan = LidarScan::new("w", vec![ray(NO_RETURN), ray(30.0), ray(2.0)]);
        let (once, _) = update_rays(&scan, &grid(), RangeMode::Entry);
        let (twice, ups) = update_rays(&once, &grid(), RangeMode::Entry);
        assert_eq!(once, twice);
        assert!(ups.is_empty());
    }

    #[test]
    fn removal_policies() {
        let b = BBox3D::new(
            Vector3::new(0.0, 0.0, 10.0),
            Vector3::new(2.0, 2.0, 2.0),
            0.0,
            0.0,
        )
        .unwrap();
        let scan = LidarScan::new("w", vec![ray(10.0), ray(3.0), ray(NO_RETURN)]);
        let (kept, gt) = remove_points_in_box(&scan, &b, RemovalPolicy::NoReturn);
        assert_eq!(kept.len(), 3);
        assert!(!kept.rays[0].has_return());
        assert_eq!(gt.ray_indices, vec![0]);
        assert!((gt.points[0] - Vector3::new(0.1, 0.1, 10.0)).norm() < 1e-12);
        let (dropped, _) = remove_points_in_box(&scan, &b, RemovalPolicy::Delete);
        assert_eq!(dropped.len(), 2);
        let far = BBox3D::new(
            Vector3::new(50.0, 0.0, 0.0),
            Vector3::new(1.0, 1.0, 1.0),
            0.0,
            0.0,
        )
        .unwrap();
        let (same, none) = remove_points_in_box(&scan, &far, RemovalPolicy::NoReturn);
        assert_eq!(same, scan);
        assert!(none.is_empty());
    }
}
