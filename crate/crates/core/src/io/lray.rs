use std::io::{Read, Write};

use nalgebra::Vector3;

use crate::voxel::{LidarScan, Ray, NO_RETURN, STORED_UNIT_TOL};
use crate::{Error, Result};

pub const LRAY_MAGIC: &[u8; 12] = b"LIDARFILLRAY";
pub const LRAY_VERSION: u32 = 1;
const RECORD: usize = 28;

/// Reads a `.lray` scan. Directions are stored as `f32`, so unit length is
/// checked to [`STORED_UNIT_TOL`]; `+inf` range is `NO_RETURN`.
pub fn read_lray(r: &mut impl Read, frame_id: &str) -> Result<LidarScan> {
    let mut head = [0u8; 24];
    r.read_exact(&mut head)
        .map_err(|_| Error::format(".lray: truncated header"))?;
    if &head[..12] != LRAY_MAGIC {
        return Err(Error::format(".lray: bad magic"));
    }
    let version = u32::from_le_bytes(head[12..16].try_into().unwrap());
    if version != LRAY_VERSION {
        return Err(Error::format(format!(
            ".lray: unsupported version {version}"
        )));
    }
    let count = u64::from_le_bytes(head[16..24].try_into().unwrap());
    let count = usize::try_from(count).map_err(|_| Error::format(".lray: ray count overflow"))?;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len()
        != count
            .checked_mul(RECORD)
            .ok_or_else(|| Error::format(".lray: ray count overflow"))?
    {
        return Err(Error::format(format!(
            ".lray: header says {count} rays, body holds {} bytes",
            body.len()
        )));
    }
    let rays = body
        .chunks_exact(RECORD)
        .enumerate()
        .map(|(k, c)| {
            let f = |i: usize| f32::from_le_bytes(c[4 * i..4 * i + 4].try_into().unwrap()) as f64;
            let origin = Vector3::new(f(0), f(1), f(2));
            let dir = Vector3::new(f(3), f(4), f(5));
            let range = f(6);
            if !(range > 0.0) || range == f64::NEG_INFINITY {
                return Err(Error::format(format!(".lray: ray {k} has range {range}")));
            }
            let range = if range == f64::INFINITY {
                NO_RETURN
            } else {
                range
            };
            Ray::checked(origin, dir, range, STORED_UNIT_TOL)
                .map_err(|e| Error::format(format!(".lray: ray {k}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LidarScan::new(frame_id, rays))
}

pub fn write_lray(w: &mut impl Write, scan: &LidarScan) -> Result<()> {
    let mut buf = Vec::with_capacity(24 + RECORD * scan.len());
    buf.extend_from_slice(LRAY_MAGIC);
    buf.extend_from_slice(&LRAY_VERSION.to_le_bytes());
    buf.extend_from_slice(&(scan.len() as u64).to_le_bytes());
    for r in &scan.rays {
        let vals = [
            r.origin.x,
            r.origin.y,
            r.origin.z,
            r.direction.x,
            r.direction.y,
            r.direction.z,
            r.range,
        ];
        for v in vals {
            buf.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}
