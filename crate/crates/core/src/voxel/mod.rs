//! LiDAR scans, box-aligned occupancy grids and ray range updates.

mod grid;
mod scan;
mod traverse;
mod update;

pub use grid::{voxelize_points, VoxelGrid, Voxelization, BOUNDARY_TOL, DEFAULT_RESOLUTION};
pub use scan::{LidarScan, Ray, NO_RETURN, STORED_UNIT_TOL, UNIT_TOL};
pub use traverse::{traverse, VoxelHit, VoxelWalk};
pub use update::{
    first_occupied, remove_points_in_box, update_rays, RangeMode, RayUpdate, RemovalPolicy,
    RemovedReturns,
};
