//! Cell-by-cell ray walk through a [`VoxelGrid`] (Amanatides–Woo).

use nalgebra::Vector3;

use super::grid::VoxelGrid;

/// A cell crossed by a ray and the ray parameter at which it is entered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoxelHit {
    pub index: [usize; 3],
    pub t_entry: f64,
}

/// Iterator over the cells a ray crosses, in increasing `t`.
///
/// Works in box-aligned coordinates relative to `δ_min`. Cell boundaries are
/// computed directly from the cell index on every step rather than
/// accumulated, so no drift builds up along long walks.
#[derive(Debug, Clone)]
pub struct VoxelWalk<'a> {
    grid: &'a VoxelGrid,
    origin: Vector3<f64>,
    dir: Vector3<f64>,
    cell: [isize; 3],
    t: f64,
    t_exit: f64,
    done: bool,
}

impl<'a> VoxelWalk<'a> {
    /// `origin` and `direction` are in the grid's host frame; `direction` is
    /// expected to be unit length so that `t` is a distance.
    pub fn new(grid: &'a VoxelGrid, origin: &Vector3<f64>, direction: &Vector3<f64>) -> Self {
        let frame = grid.frame();
        let o = frame.align(origin) - frame.delta_min;
        let d = frame.align(direction);
        let ext = frame.extent();
        let mut walk = Self {
            grid,
            origin: o,
            dir: d,
            cell: [0; 3],
            t: 0.0,
            t_exit: 0.0,
            done: true,
        };

        // slab test against [0, ext]
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for k in 0..3 {
            if d[k] == 0.0 {
                if o[k] < 0.0 || o[k] > ext[k] {
                    return walk;
                }
            } else {
                let a = -o[k] / d[k];
                let b = (ext[k] - o[k]) / d[k];
                t0 = t0.max(a.min(b));
                t1 = t1.min(a.max(b));
            }
        }
        let start = t0.max(0.0);
        if !(start < t1) {
            return walk;
        }

        let p = o + d * start;
        let vs = grid.voxel_size();
        let res = grid.resolution();
        for k in 0..3 {
            let c = (p[k] / vs[k]).floor();
            walk.cell[k] = c.clamp(0.0, (res[k] - 1) as f64) as isize;
        }
        walk.t = start;
        walk.t_exit = t1;
        walk.done = false;
        walk
    }

    fn next_boundary(&self, k: usize) -> f64 {
        let vs = self.grid.voxel_size()[k];
        let d = self.dir[k];
        if d > 0.0 {
            ((self.cell[k] + 1) as f64 * vs - self.origin[k]) / d
        } else if d < 0.0 {
            (self.cell[k] as f64 * vs - self.origin[k]) / d
        } else {
            f64::INFINITY
        }
    }
}

impl Iterator for VoxelWalk<'_> {
    type Item = VoxelHit;

    fn next(&mut self) -> Option<VoxelHit> {
        if self.done {
            return None;
        }
        let hit = VoxelHit {
            index: self.cell.map(|c| c as usize),
            t_entry: self.t,
        };
        let (axis, t_next) = (0..3)
            .map(|k| (k, self.next_boundary(k)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("three axes");
        if t_next >= self.t_exit {
            self.done = true;
        } else {
            // a boundary behind the current entry can only come from rounding
            self.t = t_next.max(self.t);
            self.cell[axis] += if self.dir[axis] > 0.0 { 1 } else { -1 };
            let n = self.grid.resolution()[axis] as isize;
            if self.cell[axis] < 0 || self.cell[axis] >= n {
                self.done = true;
            }
        }
        Some(hit)
    }
}

/// Every cell the ray passes through, each with its entry distance.
pub fn traverse(
    grid: &VoxelGrid,
    origin: &Vector3<f64>,
    direction: &Vector3<f64>,
) -> Vec<VoxelHit> {
    VoxelWalk::new(grid, origin, direction).collect()
}
