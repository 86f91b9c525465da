//! Readers and writers for every file crossing the library boundary.
//!
//! | Artifact | Format |
//! |----------|--------|
//! | depth map | PFM, grayscale `Pf`, little-endian, rows bottom to top |
//! | mask | binary PGM `P5`, maxval 255, nonzero = object |
//! | image | 8-bit RGB PNG |
//! | camera | JSON object |
//! | camera tokens | `CTOK` binary container |
//! | point cloud | ASCII PLY, single precision |
//! | manifests, reports | JSON lines |
//!
//! Every format has an in-memory `encode_*` / `decode_*` pair and a path
//! based `write_*` / `read_*` pair.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub mod camera;
pub mod manifest;
pub mod pfm;
pub mod pgm;
pub mod ply;
pub mod png;
pub mod report;
pub mod tokens;

pub use camera::{decode_camera, encode_camera, read_camera, write_camera};
pub use manifest::{
    decode_pairs, encode_manifest, encode_pairs, read_frames_manifest, read_manifest, read_pairs,
    write_manifest, write_pairs, FrameEntry, Manifest, ManifestRecord, PairRecord,
};
pub use pfm::{decode_depth, encode_depth, read_depth, write_depth};
pub use pgm::{decode_mask, encode_mask, read_mask, write_mask};
pub use ply::{decode_ply, encode_ply, read_ply, write_ply};
pub use png::{decode_image, encode_image, read_image, write_image};
pub use report::{
    decode_report, encode_report, read_report, write_report, ObjectReport, ReportRecord,
    SummaryReport,
};
pub use tokens::{decode_tokens, encode_tokens, read_tokens, write_tokens};

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Attaches the file path to format errors.
pub(crate) fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Splits off the next `\n`-terminated header line starting at `*pos`.
pub(crate) fn header_line<'a>(bytes: &'a [u8], pos: &mut usize, what: &str) -> Result<&'a str> {
    let rest = &bytes[*pos..];
    let end = rest
        .iter()
        .take(256)
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::format(format!("{what}: unterminated header line at byte {}", *pos)))?;
    let line = std::str::from_utf8(&rest[..end])
        .map_err(|_| Error::format(format!("{what}: non-text header at byte {}", *pos)))?;
    *pos += end + 1;
    Ok(line)
}
