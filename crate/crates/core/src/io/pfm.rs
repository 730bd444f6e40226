use std::io::{BufRead, Read, Write};

use super::header::{parse_dim, read_tokens};
use crate::raster::DepthMap;
use crate::{Error, Result};

/// Portable float map. `data` is row-major from the top row, channels
/// interleaved; the file itself stores rows bottom-up.
#[derive(Debug, Clone, PartialEq)]
pub struct PfmImage {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<f32>,
}

impl PfmImage {
    /// Bitwise equality, so NaN payloads compare too.
    pub fn bit_eq(&self, other: &PfmImage) -> bool {
        (self.width, self.height, self.channels) == (other.width, other.height, other.channels)
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

pub fn read_pfm(r: &mut impl BufRead) -> Result<PfmImage> {
    let t = read_tokens(r, 4, "PFM")?;
    let channels = match t[0].as_str() {
        "Pf" => 1,
        "PF" => 3,
        m => return Err(Error::format(format!("PFM: bad magic {m:?}"))),
    };
    let width = parse_dim(&t[1], "PFM")?;
    let height = parse_dim(&t[2], "PFM")?;
    let scale: f32 = t[3]
        .parse()
        .map_err(|_| Error::format(format!("PFM: bad scale {:?}", t[3])))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::format("PFM: scale must be finite and non-zero"));
    }
    let little = scale < 0.0;
    let row = width * channels;
    let mut raw = vec![0u8; row * height * 4];
    r.read_exact(&mut raw)
        .map_err(|_| Error::format("PFM: truncated pixel data"))?;
    let mut data = vec![0f32; row * height];
    for (k, c) in raw.chunks_exact(4).enumerate() {
        let b = [c[0], c[1], c[2], c[3]];
        let v = if little {
            f32::from_le_bytes(b)
        } else {
            f32::from_be_bytes(b)
        };
        // file row y is image row height-1-y
        let (y, x) = (k / row, k % row);
        data[(height - 1 - y) * row + x] = v;
    }
    Ok(PfmImage {
        width,
        height,
        channels,
        data,
    })
}

/// Always writes little-endian with scale −1.
pub fn write_pfm(w: &mut impl Write, img: &PfmImage) -> Result<()> {
    let magic = match img.channels {
        1 => "Pf",
        3 => "PF",
        c => {
            return Err(Error::invalid(format!(
                "PFM supports 1 or 3 channels, not {c}"
            )))
        }
    };
    let row = img.width * img.channels;
    if img.data.len() != row * img.height {
        return Err(Error::invalid("PFM data length does not match dimensions"));
    }
    write!(w, "{magic}\n{} {}\n-1\n", img.width, img.height)?;
    let mut buf = Vec::with_capacity(img.data.len() * 4);
    for y in (0..img.height).rev() {
        for v in &img.data[y * row..(y + 1) * row] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn depth_from_pfm(img: &PfmImage) -> Result<DepthMap> {
    if img.channels != 1 {
        return Err(Error::format("depth map PFM must have one channel"));
    }
    DepthMap::new(img.width, img.height, img.data.clone())
}

pub fn pfm_from_depth(d: &DepthMap) -> PfmImage {
    PfmImage {
        width: d.width(),
        height: d.height(),
        channels: 1,
        data: d.values().to_vec(),
    }
}

pub fn read_depth_pfm(r: &mut impl Read) -> Result<DepthMap> {
    depth_from_pfm(&read_pfm(&mut std::io::BufReader::new(r))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_row_order() {
        let img = PfmImage {
            width: 2,
            height: 2,
            channels: 1,
            data: vec![1.0, 2.0, 3.0, 4.0],
        };
        let mut buf = Vec::new();
        write_pfm(&mut buf, &img).unwrap();
        assert!(buf.starts_with(b"Pf\n2 2\n-1\n"));
        // first stored row is the bottom one
        assert_eq!(&buf[10..14], &3.0f32.to_le_bytes());
        let back = read_pfm(&mut &buf[..]).unwrap();
        assert!(back.bit_eq(&img));
    }

    #[test]
    fn big_endian_and_comments() {
        let mut buf = b"PF\n# note\n1 1\n1.0\n".to_vec();
        for v in [1.5f32, -2.0, 0.25] {
            buf.extend_from_slice(&v.to_be_bytes());
        }
        let img = read_pfm(&mut &buf[..]).unwrap();
        assert_eq!(img.data, vec![1.5, -2.0, 0.25]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_pfm(&mut &b"P5\n1 1\n255\n\0"[..]).is_err());
        assert!(read_pfm(&mut &b"Pf\n2 2\n-1\n\0\0\0\0"[..]).is_err());
        assert!(read_pfm(&mut &b"Pf\n0 2\n-1\n"[..]).is_err());
    }
}
