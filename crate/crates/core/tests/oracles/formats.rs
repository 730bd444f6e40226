//! Random well-formed files for the round-trip checks. Each generator emits
//! raw bytes with header variation (comments, odd whitespace, byte order,
//! extra properties) that the writers never produce themselves.

use std::io::Cursor;

use lidarfill::io::{
    read_lray, read_pfm, read_pgm, read_ply, write_lray, write_pfm, write_pgm, write_ply,
};
use rand::Rng;

fn ws(rng: &mut impl Rng) -> &'static str {
    [" ", "\n", "  ", "\t", "\n# a comment\n", "\r\n"][rng.random_range(0..6)]
}

fn any_f32(rng: &mut impl Rng, allow_nan: bool) -> f32 {
    loop {
        let v = match rng.random_range(0..4) {
            0 => f32::from_bits(rng.random()),
            1 => rng.random_range(-1e6..1e6f32),
            2 => [
                0.0,
                -0.0,
                f32::INFINITY,
                f32::NEG_INFINITY,
                f32::MIN_POSITIVE,
                f32::MAX,
            ][rng.random_range(0..6)],
            _ => rng.random_range(-1.0..1.0f32) * 1e-30,
        };
        if allow_nan || !v.is_nan() {
            return v;
        }
    }
}

pub fn pfm_bytes(rng: &mut impl Rng) -> Vec<u8> {
    let (w, h) = (rng.random_range(1..40usize), rng.random_range(1..40usize));
    let c = if rng.random_bool(0.5) { 1 } else { 3 };
    let big = rng.random_bool(0.5);
    let scale = rng.random_range(0.1..4.0f32) * if big { 1.0 } else { -1.0 };
    let mut out = format!(
        "{}{}{}{}{}{}{}\n",
        if c == 1 { "Pf" } else { "PF" },
        [" ", "\n", "  ", "\t"][rng.random_range(0..4)],
        w,
        " ",
        h,
        "\n",
        scale
    )
    .into_bytes();
    for _ in 0..w * h * c {
        let v = any_f32(rng, true);
        out.extend_from_slice(&if big {
            v.to_be_bytes()
        } else {
            v.to_le_bytes()
        });
    }
    out
}

pub fn pgm_bytes(rng: &mut impl Rng) -> Vec<u8> {
    let (w, h) = (rng.random_range(1..60usize), rng.random_range(1..60usize));
    let maxval: u8 = rng.random_range(1..=255);
    let mut out = format!("P5{}{}{}{}{}{}", ws(rng), w, ws(rng), h, ws(rng), maxval).into_bytes();
    out.push(b"\n \t"[rng.random_range(0..3)]);
    for _ in 0..w * h {
        out.push(rng.random_range(0..=maxval));
    }
    out
}

pub fn lray_bytes(rng: &mut impl Rng) -> Vec<u8> {
    let n = rng.random_range(0..200usize);
    let mut out = b"LIDARFILLRAY".to_vec();
    out.extend_from_slice(&1u32.to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for _ in 0..n {
        let d = loop {
            let v = [
                rng.random_range(-1.0..1.0f64),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if norm > 0.1 {
                break v.map(|x| (x / norm) as f32);
            }
        };
        let range = if rng.random_bool(0.2) {
            f32::INFINITY
        } else {
            rng.random_range(0.01..200.0f32)
        };
        let vals = [
            rng.random_range(-50.0..50.0f32),
            rng.random_range(-50.0..50.0),
            rng.random_range(-5.0..5.0),
            d[0],
            d[1],
            d[2],
            range,
        ];
        for v in vals {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn ply_bytes<R: Rng>(rng: &mut R, binary: bool) -> Vec<u8> {
    let n = rng.random_range(0..150usize);
    // vertex properties: x y z in random order among extras
    let mut props: Vec<(&str, &str)> = vec![("float", "x"), ("float", "y"), ("float", "z")];
    for extra in ["uchar red", "int id", "double w", "short s"] {
        if rng.random_bool(0.4) {
            let (t, name) = extra.split_once(' ').unwrap();
            props.push((t, name));
        }
    }
    for k in (1..props.len()).rev() {
        props.swap(k, rng.random_range(0..=k));
    }
    let faces = if rng.random_bool(0.3) {
        rng.random_range(1..5usize)
    } else {
        0
    };
    let mut head = format!(
        "ply\nformat {} 1.0\ncomment fuzz\nelement vertex {n}\n",
        if binary {
            "binary_little_endian"
        } else {
            "ascii"
        }
    );
    for (t, name) in &props {
        head.push_str(&format!("property {t} {name}\n"));
    }
    if faces > 0 {
        head.push_str(&format!(
            "element edge {faces}\nproperty int a\nproperty int b\n"
        ));
    }
    head.push_str("end_header\n");
    let mut out = head.into_bytes();
    let row = |rng: &mut R, out: &mut Vec<u8>, props: &[(&str, &str)]| {
        let mut toks = Vec::new();
        for (t, _) in props {
            match *t {
                "float" => {
                    let v = any_f32(rng, false);
                    if binary {
                        out.extend_from_slice(&v.to_le_bytes());
                    } else {
                        toks.push(format!("{v:?}"));
                    }
                }
                "double" => {
                    let v = rng.random_range(-10.0..10.0f64);
                    if binary {
                        out.extend_from_slice(&v.to_le_bytes());
                    } else {
                        toks.push(v.to_string());
                    }
                }
                "uchar" => {
                    let v: u8 = rng.random();
                    if binary {
                        out.push(v);
                    } else {
                        toks.push(v.to_string());
                    }
                }
                "short" => {
                    let v: i16 = rng.random();
                    if binary {
                        out.extend_from_slice(&v.to_le_bytes());
                    } else {
                        toks.push(v.to_string());
                    }
                }
                _ => {
                    let v: i32 = rng.random();
                    if binary {
                        out.extend_from_slice(&v.to_le_bytes());
                    } else {
                        toks.push(v.to_string());
                    }
                }
            }
        }
        if !binary {
            out.extend_from_slice(toks.join(" ").as_bytes());
            out.push(b'\n');
        }
    };
    for _ in 0..n {
        row(rng, &mut out, &props);
    }
    for _ in 0..faces {
        row(rng, &mut out, &[("int", "a"), ("int", "b")]);
    }
    out
}

/// Reads `bytes`, writes, reads again; the two decoded values must agree
/// bitwise and a second write must reproduce the first byte for byte.
pub fn pfm_round_trip(bytes: &[u8]) -> Result<(), String> {
    let a = read_pfm(&mut Cursor::new(bytes)).map_err(|e| e.to_string())?;
    let mut w1 = Vec::new();
    write_pfm(&mut w1, &a).map_err(|e| e.to_string())?;
    let b = read_pfm(&mut Cursor::new(&w1)).map_err(|e| e.to_string())?;
    let mut w2 = Vec::new();
    write_pfm(&mut w2, &b).map_err(|e| e.to_string())?;
    (a.bit_eq(&b) && w1 == w2)
        .then_some(())
        .ok_or_else(|| "PFM mismatch".into())
}

pub fn pgm_round_trip(bytes: &[u8]) -> Result<(), String> {
    let a = read_pgm(&mut Cursor::new(bytes)).map_err(|e| e.to_string())?;
    let mut w1 = Vec::new();
    write_pgm(&mut w1, &a).map_err(|e| e.to_string())?;
    let b = read_pgm(&mut Cursor::new(&w1)).map_err(|e| e.to_string())?;
    let mut w2 = Vec::new();
    write_pgm(&mut w2, &b).map_err(|e| e.to_string())?;
    (a == b && w1 == w2)
        .then_some(())
        .ok_or_else(|| "PGM mismatch".into())
}

pub fn lray_round_trip(bytes: &[u8]) -> Result<(), String> {
    let a = read_lray(&mut Cursor::new(bytes), "world").map_err(|e| e.to_string())?;
    let mut w1 = Vec::new();
    write_lray(&mut w1, &a).map_err(|e| e.to_string())?;
    let b = read_lray(&mut Cursor::new(&w1), "world").map_err(|e| e.to_string())?;
    let same = a.len() == b.len()
        && a.rays.iter().zip(&b.rays).all(|(x, y)| {
            let bits = |r: &lidarfill::voxel::Ray| {
                [
                    r.origin.x,
                    r.origin.y,
                    r.origin.z,
                    r.direction.x,
                    r.direction.y,
                    r.direction.z,
                    r.range,
                ]
                .map(f64::to_bits)
            };
            bits(x) == bits(y)
        });
    (same && w1 == bytes)
        .then_some(())
        .ok_or_else(|| ".lray mismatch".into())
}

pub fn ply_round_trip(bytes: &[u8]) -> Result<(), String> {
    let (a, fmt) = read_ply(&mut Cursor::new(bytes)).map_err(|e| e.to_string())?;
    let mut w1 = Vec::new();
    write_ply(&mut w1, &a, fmt).map_err(|e| e.to_string())?;
    let (b, fmt2) = read_ply(&mut Cursor::new(&w1)).map_err(|e| e.to_string())?;
    let mut w2 = Vec::new();
    write_ply(&mut w2, &b, fmt2).map_err(|e| e.to_string())?;
    (fmt == fmt2 && a.bit_eq(&b) && w1 == w2)
        .then_some(())
        .ok_or_else(|| "PLY mismatch".into())
}
