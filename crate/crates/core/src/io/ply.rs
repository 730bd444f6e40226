use std::io::{BufRead, Write};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlyFormat {
    Ascii,
    BinaryLittleEndian,
}

/// Vertex positions in meters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<[f32; 3]>,
}

impl PointCloud {
    pub fn from_f64(points: &[nalgebra::Vector3<f64>]) -> Self {
        Self {
            points: points
                .iter()
                .map(|p| [p.x as f32, p.y as f32, p.z as f32])
                .collect(),
        }
    }

    pub fn bit_eq(&self, other: &PointCloud) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (0..3).all(|k| a[k].to_bits() == b[k].to_bits()))
    }
}

pub fn write_ply(w: &mut impl Write, cloud: &PointCloud, format: PlyFormat) -> Result<()> {
    let fmt = match format {
        PlyFormat::Ascii => "ascii",
        PlyFormat::BinaryLittleEndian => "binary_little_endian",
    };
    write!(
        w,
        "ply\nformat {fmt} 1.0\nelement vertex {}\nproperty float x\nproperty float y\nproperty float z\nend_header\n",
        cloud.points.len()
    )?;
    match format {
        PlyFormat::Ascii => {
            let mut s = String::new();
            for p in &cloud.points {
                // Debug formatting of f32 is shortest round-trip
                s.push_str(&format!("{:?} {:?} {:?}\n", p[0], p[1], p[2]));
            }
            w.write_all(s.as_bytes())?;
        }
        PlyFormat::BinaryLittleEndian => {
            let mut buf = Vec::with_capacity(cloud.points.len() * 12);
            for p in &cloud.points {
                for v in p {
                    buf.extend_from_slice(&v.to_le_bytes());
                }
            }
            w.write_all(&buf)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "char" | "int8" => Self::I8,
            "uchar" | "uint8" => Self::U8,
            "short" | "int16" => Self::I16,
            "ushort" | "uint16" => Self::U16,
            "int" | "int32" => Self::I32,
            "uint" | "uint32" => Self::U32,
            "float" | "float32" => Self::F32,
            "double" | "float64" => Self::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Self::I8 | Self::U8 => 1,
            Self::I16 | Self::U16 => 2,
            Self::I32 | Self::U32 | Self::F32 => 4,
            Self::F64 => 8,
        }
    }

    fn decode_le(self, b: &[u8]) -> f64 {
        match self {
            Self::I8 => b[0] as i8 as f64,
            Self::U8 => b[0] as f64,
            Self::I16 => i16::from_le_bytes([b[0], b[1]]) as f64,
            Self::U16 => u16::from_le_bytes([b[0], b[1]]) as f64,
            Self::I32 => i32::from_le_bytes(b[..4].try_into().unwrap()) as f64,
            Self::U32 => u32::from_le_bytes(b[..4].try_into().unwrap()) as f64,
            Self::F32 => f32::from_le_bytes(b[..4].try_into().unwrap()) as f64,
            Self::F64 => f64::from_le_bytes(b[..8].try_into().unwrap()),
        }
    }
}

struct Element {
    name: String,
    count: usize,
    props: Vec<(String, Scalar)>,
}

fn header_line(r: &mut impl BufRead) -> Result<String> {
    let mut line = String::new();
    if r.read_line(&mut line)? == 0 {
        return Err(Error::format("PLY: truncated header"));
    }
    Ok(line.trim_end_matches(['\n', '\r']).to_string())
}

/// Reads vertex `x y z` from ascii or binary little-endian PLY. Other
/// elements are skipped; list properties are not supported.
pub fn read_ply(r: &mut impl BufRead) -> Result<(PointCloud, PlyFormat)> {
    if header_line(r)? != "ply" {
        return Err(Error::format("PLY: missing magic"));
    }
    let mut format = None;
    let mut elements: Vec<Element> = Vec::new();
    loop {
        let line = header_line(r)?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["end_header"] => break,
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["format", f, "1.0"] => {
                format = Some(match *f {
                    "ascii" => PlyFormat::Ascii,
                    "binary_little_endian" => PlyFormat::BinaryLittleEndian,
                    other => return Err(Error::format(format!("PLY: unsupported format {other}"))),
                })
            }
            ["element", name, n] => elements.push(Element {
                name: name.to_string(),
                count: n
                    .parse()
                    .map_err(|_| Error::format(format!("PLY: bad element count {n:?}")))?,
                props: Vec::new(),
            }),
            ["property", "list", ..] => {
                return Err(Error::format("PLY: list properties are not supported"))
            }
            ["property", ty, name] => {
                let ty = Scalar::parse(ty)
                    .ok_or_else(|| Error::format(format!("PLY: unknown type {ty}")))?;
                elements
                    .last_mut()
                    .ok_or_else(|| Error::format("PLY: property before element"))?
                    .props
                    .push((name.to_string(), ty));
            }
            _ => return Err(Error::format(format!("PLY: bad header line {line:?}"))),
        }
    }
    let format = format.ok_or_else(|| Error::format("PLY: missing format line"))?;
    if !elements.iter().any(|e| e.name == "vertex") {
        return Err(Error::format("PLY: no vertex element"));
    }
    let mut cloud = PointCloud::default();
    let mut ascii_lines = if format == PlyFormat::Ascii {
        let mut s = String::new();
        r.read_to_string(&mut s)
            .map_err(|_| Error::format("PLY: body is not text"))?;
        Some(s)
    } else {
        None
    };
    let mut lines = ascii_lines
        .as_mut()
        .map(|s| s.lines().filter(|l| !l.trim().is_empty()));
    for e in &elements {
        let pos = if e.name == "vertex" {
            let find = |n: &str| {
                e.props
                    .iter()
                    .position(|p| p.0 == n)
                    .ok_or_else(|| Error::format(format!("PLY: vertex lacks {n}")))
            };
            Some([find("x")?, find("y")?, find("z")?])
        } else {
            None
        };
        let stride: usize = e.props.iter().map(|p| p.1.size()).sum();
        let offsets: Vec<usize> = e
            .props
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.1.size();
                Some(o)
            })
            .collect();
        if pos.is_some() {
            cloud.points.reserve(e.count.min(1 << 24));
        }
        let mut rec = vec![0u8; stride];
        for _ in 0..e.count {
            let vals: Vec<f64> = match lines.as_mut() {
                Some(it) => {
                    let line = it
                        .next()
                        .ok_or_else(|| Error::format("PLY: truncated body"))?;
                    let toks: Vec<&str> = line.split_whitespace().collect();
                    if toks.len() != e.props.len() {
                        return Err(Error::format("PLY: wrong value count in body line"));
                    }
                    // float tokens parse straight to f32 to avoid double rounding
                    toks.iter()
                        .zip(&e.props)
                        .map(|(t, p)| match p.1 {
                            Scalar::F32 => t.parse::<f32>().map(f64::from).ok(),
                            _ => t.parse::<f64>().ok(),
                        })
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| Error::format(format!("PLY: bad number in {line:?}")))?
                }
                None => {
                    r.read_exact(&mut rec)
                        .map_err(|_| Error::format("PLY: truncated body"))?;
                    e.props
                        .iter()
                        .zip(&offsets)
                        .map(|(p, &o)| p.1.decode_le(&rec[o..o + p.1.size()]))
                        .collect()
                }
            };
            if let Some([x, y, z]) = pos {
                cloud
                    .points
                    .push([vals[x] as f32, vals[y] as f32, vals[z] as f32]);
            }
        }
    }
    Ok((cloud, format))
}
