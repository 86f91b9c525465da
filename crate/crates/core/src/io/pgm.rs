use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::BinaryMask;
use crate::io::{in_file, read_bytes, write_bytes};

pub fn encode_mask(mask: &BinaryMask) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", mask.width(), mask.height()).into_bytes();
    out.extend(mask.bits().iter().map(|&b| if b { 255u8 } else { 0 }));
    out
}

/// Next whitespace-delimited header token, skipping `#` comments.
fn token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a str> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && *pos - start < 32 {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::format(format!("PGM: header ends at byte {start}")));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .map_err(|_| Error::format(format!("PGM: non-text header at byte {start}")))
}

fn number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let t = token(bytes, pos)?;
    match t.parse::<usize>() {
        Ok(v) if v > 0 && t.bytes().all(|b| b.is_ascii_digit()) => Ok(v),
        _ => Err(Error::format(format!("PGM: invalid {what} {t:?}"))),
    }
}

pub fn decode_mask(bytes: &[u8]) -> Result<BinaryMask> {
    let mut pos = 0;
    let magic = token(bytes, &mut pos)?;
    if magic != "P5" {
        return Err(Error::format(format!("PGM: expected binary P5, got {magic:?}")));
    }
    let w = number(bytes, &mut pos, "width")?;
    let h = number(bytes, &mut pos, "height")?;
    let maxval = number(bytes, &mut pos, "maxval")?;
    if maxval != 255 {
        return Err(Error::format(format!("PGM: maxval {maxval}, only 255 is supported")));
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::format(format!("PGM: missing separator after header at byte {pos}")));
    }
    pos += 1;
    let expected = w
        .checked_mul(h)
        .ok_or_else(|| Error::format("PGM: dimensions overflow"))?;
    let payload = &bytes[pos..];
    if payload.len() != expected {
        return Err(Error::format(format!(
            "PGM: payload of {} bytes at offset {pos}, expected {expected}",
            payload.len()
        )));
    }
    BinaryMask::new(w, h, payload.iter().map(|&b| b != 0).collect())
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let path = path.as_ref();
    in_file(path, decode_mask(&read_bytes(path)?))
}

pub fn write_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_mask(mask))
}
