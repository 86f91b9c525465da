use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::DepthMap;
use crate::io::{header_line, in_file, read_bytes, write_bytes};

fn parse_dim(s: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 && s.bytes().all(|b| b.is_ascii_digit()) => Ok(v),
        _ => Err(Error::format(format!("PFM: invalid dimension {s:?}"))),
    }
}

pub fn encode_depth(depth: &DepthMap) -> Vec<u8> {
    let (w, h) = (depth.width(), depth.height());
    let mut out = format!("Pf\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * 4);
    for row in depth.values().chunks_exact(w).rev() {
        for v in row {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn decode_depth(bytes: &[u8]) -> Result<DepthMap> {
    let mut pos = 0;
    match header_line(bytes, &mut pos, "PFM")? {
        "Pf" => {}
        "PF" => return Err(Error::format("PFM: color variant \"PF\" is not supported")),
        other => return Err(Error::format(format!("PFM: bad magic {other:?}"))),
    }
    let dims = header_line(bytes, &mut pos, "PFM")?;
    let mut parts = dims.split(' ');
    let (w, h) = match (parts.next(), parts.next(), parts.next()) {
        (Some(w), Some(h), None) => (parse_dim(w)?, parse_dim(h)?),
        _ => return Err(Error::format(format!("PFM: bad dimension line {dims:?}"))),
    };
    let scale_line = header_line(bytes, &mut pos, "PFM")?;
    let scale: f32 = scale_line
        .parse()
        .map_err(|_| Error::format(format!("PFM: bad scale {scale_line:?}")))?;
    if !(scale.is_finite() && scale < 0.0) {
        return Err(Error::format(format!(
            "PFM: scale {scale_line:?} is not a negative (little-endian) value"
        )));
    }

    let expected = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::format("PFM: dimensions overflow"))?;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::format(format!(
            "PFM: payload truncated at byte offset {}, expected {expected} payload bytes from offset {pos}",
            bytes.len()
        )));
    }
    if payload.len() > expected {
        return Err(Error::format(format!(
            "PFM: {} trailing bytes after payload at byte offset {}",
            payload.len() - expected,
            pos + expected
        )));
    }
    let mut values = vec![0f32; w * h];
    for (row_idx, row) in payload.chunks_exact(w * 4).enumerate() {
        let y = h - 1 - row_idx;
        for (x, c) in row.chunks_exact(4).enumerate() {
            values[y * w + x] = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
        }
    }
    DepthMap::new(w, h, values)
}

pub fn read_depth(path: impl AsRef<Path>) -> Result<DepthMap> {
    let path = path.as_ref();
    in_file(path, decode_depth(&read_bytes(path)?))
}

pub fn write_depth(depth: &DepthMap, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_depth(depth))
}
