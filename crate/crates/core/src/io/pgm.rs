use std::io::{BufRead, Read, Write};

use super::header::{parse_dim, read_tokens};
use crate::raster::ObjectMask;
use crate::{Error, Result};

/// 8-bit binary graymap (P5).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u8,
    pub data: Vec<u8>,
}

pub fn read_pgm(r: &mut impl BufRead) -> Result<GrayImage> {
    let t = read_tokens(r, 4, "PGM")?;
    if t[0] != "P5" {
        return Err(Error::format(format!("PGM: expected P5, found {:?}", t[0])));
    }
    let width = parse_dim(&t[1], "PGM")?;
    let height = parse_dim(&t[2], "PGM")?;
    let maxval: u32 = t[3]
        .parse()
        .map_err(|_| Error::format(format!("PGM: bad maxval {:?}", t[3])))?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::format(format!(
            "PGM: maxval {maxval} unsupported (1..=255)"
        )));
    }
    let mut data = vec![0u8; width * height];
    r.read_exact(&mut data)
        .map_err(|_| Error::format("PGM: truncated pixel data"))?;
    if data.iter().any(|&v| v as u32 > maxval) {
        return Err(Error::format("PGM: sample exceeds maxval"));
    }
    Ok(GrayImage {
        width,
        height,
        maxval: maxval as u8,
        data,
    })
}

pub fn write_pgm(w: &mut impl Write, img: &GrayImage) -> Result<()> {
    if img.data.len() != img.width * img.height || img.maxval == 0 {
        return Err(Error::invalid("PGM data length does not match dimensions"));
    }
    write!(w, "P5\n{} {}\n{}\n", img.width, img.height, img.maxval)?;
    w.write_all(&img.data)?;
    Ok(())
}

/// Object pixels are those at or above half of `maxval`.
pub fn mask_from_pgm(img: &GrayImage) -> ObjectMask {
    let half = (img.maxval as u16).div_ceil(2);
    ObjectMask::from_fn(img.width, img.height, |i, j| {
        img.data[j * img.width + i] as u16 >= half
    })
}

/// Object pixels as 255, background as 0.
pub fn pgm_from_mask(m: &ObjectMask) -> GrayImage {
    GrayImage {
        width: m.width(),
        height: m.height(),
        maxval: 255,
        data: m.bits().iter().map(|&b| if b { 255 } else { 0 }).collect(),
    }
}

pub fn read_mask_pgm(r: &mut impl Read) -> Result<ObjectMask> {
    Ok(mask_from_pgm(&read_pgm(&mut std::io::BufReader::new(r))?))
}
