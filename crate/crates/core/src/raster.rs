//! Single-channel rasters: relative depth maps and binary object masks.

use crate::{Error, Result};

/// Maps raster pixels onto full-frame image coordinates: raster pixel `(i, j)`
/// covers full-frame `[x0 + i/s, x0 + (i+1)/s)` horizontally (likewise
/// vertically), where `s` is the raster's scale (raster px per image px).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterPlacement {
    pub origin: (f64, f64),
    pub scale: f64,
}

impl RasterPlacement {
    pub const FULL_FRAME: RasterPlacement = RasterPlacement {
        origin: (0.0, 0.0),
        scale: 1.0,
    };

    /// Full-frame coordinates of the center of raster pixel `(i, j)`.
    pub fn pixel_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + (i as f64 + 0.5) / self.scale,
            self.origin.1 + (j as f64 + 0.5) / self.scale,
        )
    }

    /// Raster pixel containing full-frame position `(u, v)`, if in bounds.
    pub fn locate(&self, u: f64, v: f64, width: usize, height: usize) -> Option<(usize, usize)> {
        let x = ((u - self.origin.0) * self.scale).floor();
        let y = ((v - self.origin.1) * self.scale).floor();
        if !(x >= 0.0 && y >= 0.0 && x < width as f64 && y < height as f64) {
            return None;
        }
        Some((x as usize, y as usize))
    }
}

impl Default for RasterPlacement {
    fn default() -> Self {
        Self::FULL_FRAME
    }
}

/// Relative depth raster, row-major, larger values are farther away.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    width: usize,
    height: usize,
    values: Vec<f32>,
    placement: RasterPlacement,
}

impl DepthMap {
    pub fn new(width: usize, height: usize, values: Vec<f32>) -> Result<Self> {
        Self::with_placement(width, height, values, RasterPlacement::FULL_FRAME)
    }

    pub fn with_placement(
        width: usize,
        height: usize,
        values: Vec<f32>,
        placement: RasterPlacement,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("depth map dimensions must be positive"));
        }
        if values.len() != width * height {
            return Err(Error::invalid(format!(
                "depth map has {} values, expected {}",
                values.len(),
                width * height
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("depth value {i} is not finite")));
        }
        if !(placement.scale > 0.0 && placement.scale.is_finite()) {
            return Err(Error::invalid("depth map placement scale must be positive"));
        }
        Ok(Self {
            width,
            height,
            values,
            placement,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }
    pub fn values(&self) -> &[f32] {
        &self.values
    }
    pub fn placement(&self) -> RasterPlacement {
        self.placement
    }

    pub fn set_placement(&mut self, placement: RasterPlacement) {
        self.placement = placement;
    }

    pub fn get(&self, i: usize, j: usize) -> f32 {
        self.values[j * self.width + i]
    }

    /// Converts raw disparity (larger = nearer) into relative depth by taking
    /// reciprocals. Fails on non-positive disparities.
    pub fn inverted(&self) -> Result<DepthMap> {
        if let Some(i) = self.values.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::invalid(format!(
                "disparity at index {i} is not positive and cannot be inverted"
            )));
        }
        Ok(DepthMap {
            values: self.values.iter().map(|v| 1.0 / v).collect(),
            ..self.clone()
        })
    }

    /// Min and max over the pixels selected by `mask`.
    pub fn range_in(&self, mask: &ObjectMask) -> Option<(f32, f32)> {
        let mut it = self
            .values
            .iter()
            .zip(mask.bits())
            .filter(|(_, &m)| m)
            .map(|(v, _)| *v);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }
}

/// Binary raster, `true` marks object pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl ObjectMask {
    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::invalid("mask length does not match its dimensions"));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for j in 0..height {
            for i in 0..width {
                bits.push(f(i, j));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.width + i]
    }

    pub fn set(&mut self, i: usize, j: usize, on: bool) {
        self.bits[j * self.width + i] = on;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Inclusive pixel bounds `(x0, y0, x1, y1)` of the set pixels.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut out: Option<(usize, usize, usize, usize)> = None;
        for j in 0..self.height {
            for i in 0..self.width {
                if self.get(i, j) {
                    out = Some(match out {
                        None => (i, j, i, j),
                        Some((x0, y0, x1, y1)) => (x0.min(i), y0.min(j), x1.max(i), y1.max(j)),
                    });
                }
            }
        }
        out
    }

    /// Pixels set here but not in `other`.
    pub fn minus(&self, other: &ObjectMask) -> ObjectMask {
        ObjectMask {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && !b)
                .collect(),
            ..self.clone()
        }
    }

    /// Chebyshev dilation by `radius` pixels.
    pub fn dilated(&self, radius: usize) -> ObjectMask {
        if radius == 0 {
            return self.clone();
        }
        let r = radius as isize;
        ObjectMask::from_fn(self.width, self.height, |i, j| {
            for dj in -r..=r {
                for di in -r..=r {
                    let (x, y) = (i as isize + di, j as isize + dj);
                    if x >= 0
                        && y >= 0
                        && (x as usize) < self.width
                        && (y as usize) < self.height
                        && self.get(x as usize, y as usize)
                    {
                        return true;
                    }
                }
            }
            false
        })
    }

    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(k, _)| (k % self.width, k / self.width))
    }
}
