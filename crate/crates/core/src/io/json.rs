use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::geometry::{BBox3D, BoxRecord, BoxTrack, Camera};
use crate::{Error, Result};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::format(format!("{}: {e}", path.display())))
}

/// Pretty-printed with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn read_calibration(path: &Path) -> Result<Camera> {
    read_json(path)
}

/// Box track file: a JSON array of `{frame, center, size, yaw, pitch}`.
pub fn read_box_track(path: &Path) -> Result<BoxTrack> {
    let recs: Vec<BoxRecord> = read_json(path)?;
    let frames = recs
        .iter()
        .map(|r| Ok((r.frame, r.to_box()?)))
        .collect::<Result<Vec<(u32, BBox3D)>>>()?;
    BoxTrack::new(frames)
}

pub fn write_box_track(path: &Path, track: &BoxTrack) -> Result<()> {
    let recs: Vec<BoxRecord> = track
        .frames()
        .iter()
        .map(|(f, b)| BoxRecord::new(*f, b))
        .collect();
    write_json(path, &recs)
}
