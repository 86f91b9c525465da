//! `CTOK` camera-token container: magic `CTOK`, then little-endian `u32`
//! version (1), count and dim, then `count * dim` little-endian `f32` values
//! row-major.

use std::path::Path;

use crate::error::{Error, Result};
use crate::io::{in_file, read_bytes, write_bytes};
use crate::pipeline::CameraTokenSet;

pub const MAGIC: &[u8; 4] = b"CTOK";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

pub fn encode_tokens(tokens: &CameraTokenSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + tokens.vectors().len() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(tokens.count() as u32).to_le_bytes());
    out.extend_from_slice(&(tokens.dim() as u32).to_le_bytes());
    for v in tokens.vectors() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_tokens(bytes: &[u8]) -> Result<CameraTokenSet> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::format(format!(
            "CTOK: header truncated at byte offset {}",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::format("CTOK: bad magic"));
    }
    let word = |k: usize| u32::from_le_bytes(bytes[4 * k..4 * k + 4].try_into().unwrap());
    let (version, count, dim) = (word(1), word(2) as usize, word(3) as usize);
    if version != VERSION {
        return Err(Error::format(format!("CTOK: unsupported version {version}")));
    }
    if count == 0 || dim == 0 {
        return Err(Error::format(format!("CTOK: empty token set {count}x{dim}")));
    }
    let expected = count
        .checked_mul(dim)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::format("CTOK: size overflow"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(Error::format(format!(
            "CTOK: payload of {} bytes, header declares {count}x{dim} ({expected} bytes)",
            payload.len()
        )));
    }
    let values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    CameraTokenSet::new(count, dim, values).map_err(|e| Error::format(format!("CTOK: {e}")))
}

pub fn read_tokens(path: impl AsRef<Path>) -> Result<CameraTokenSet> {
    let path = path.as_ref();
    in_file(path, decode_tokens(&read_bytes(path)?))
}

pub fn write_tokens(tokens: &CameraTokenSet, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_tokens(tokens))
}
