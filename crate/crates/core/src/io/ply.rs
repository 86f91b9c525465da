//! ASCII PLY point clouds. Coordinates are stored as `float` with nine
//! significant digits, which is exact for single precision; colors, when
//! present, as `uchar red green blue`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{PointCloud, Vec3};
use crate::io::{in_file, read_bytes, write_bytes};

pub fn encode_ply(cloud: &PointCloud) -> Vec<u8> {
    let mut s = String::with_capacity(64 + cloud.len() * 48);
    s.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(s, "element vertex {}", cloud.len());
    s.push_str("property float x\nproperty float y\nproperty float z\n");
    if cloud.colors().is_some() {
        s.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    }
    s.push_str("end_header\n");
    for (k, p) in cloud.points().iter().enumerate() {
        let _ = write!(s, "{:.8e} {:.8e} {:.8e}", p.x as f32, p.y as f32, p.z as f32);
        if let Some(c) = cloud.colors() {
            let _ = write!(s, " {} {} {}", c[k][0], c[k][1], c[k][2]);
        }
        s.push('\n');
    }
    s.into_bytes()
}

pub fn decode_ply(bytes: &[u8]) -> Result<PointCloud> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::format(format!("PLY: {e}")))?;
    let mut lines = text.lines().enumerate();
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::format(format!("PLY: file ends before {what}")))
    };
    if next("magic")?.1 != "ply" {
        return Err(Error::format("PLY: bad magic"));
    }
    let mut count = None;
    let mut props: Vec<String> = Vec::new();
    loop {
        let (n, line) = next("end_header")?;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["format", "ascii", "1.0"] => {}
            ["format", other, ..] => {
                return Err(Error::format(format!("PLY: unsupported format {other:?}")))
            }
            ["comment", ..] | ["obj_info", ..] => {}
            ["element", "vertex", c] if count.is_none() => {
                count = Some(c.parse::<usize>().map_err(|_| {
                    Error::format(format!("PLY line {}: bad vertex count {c:?}", n + 1))
                })?)
            }
            ["property", _, name] if count.is_some() => props.push(name.to_string()),
            ["end_header"] => break,
            _ => return Err(Error::format(format!("PLY line {}: unsupported header {line:?}", n + 1))),
        }
    }
    let count = count.ok_or_else(|| Error::format("PLY: no vertex element"))?;
    let colored = match props.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["x", "y", "z"] => false,
        ["x", "y", "z", "red", "green", "blue"] => true,
        other => return Err(Error::format(format!("PLY: unsupported vertex properties {other:?}"))),
    };

    let mut points = Vec::with_capacity(count.min(1 << 20));
    let mut colors = Vec::new();
    for k in 0..count {
        let (n, line) = next("all vertices")?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != props.len() {
            return Err(Error::format(format!(
                "PLY line {}: {} values, expected {}",
                n + 1,
                f.len(),
                props.len()
            )));
        }
        let coord = |i: usize| {
            f[i].parse::<f32>()
                .ok()
                .filter(|v| v.is_finite())
                .map(f64::from)
                .ok_or_else(|| Error::format(format!("PLY vertex {k}: bad coordinate {:?}", f[i])))
        };
        points.push(Vec3::new(coord(0)?, coord(1)?, coord(2)?));
        if colored {
            let channel = |i: usize| {
                f[i].parse::<u8>()
                    .map_err(|_| Error::format(format!("PLY vertex {k}: bad color {:?}", f[i])))
            };
            colors.push([channel(3)?, channel(4)?, channel(5)?]);
        }
    }
    if let Some((n, line)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::format(format!("PLY line {}: unexpected data {line:?}", n + 1)));
    }
    if colored {
        PointCloud::with_colors(points, colors)
    } else {
        Ok(PointCloud::new(points))
    }
}

pub fn read_ply(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    in_file(path, decode_ply(&read_bytes(path)?))
}

pub fn write_ply(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_ply(cloud))
}
