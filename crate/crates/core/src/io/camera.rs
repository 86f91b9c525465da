//! Camera JSON: `{"width", "height", "fx", "fy", "cx", "cy", "R", "t"}` with
//! `R` a row-major world-to-camera rotation and `t` the translation.
//!
//! `width` and `height` are required. The four intrinsics come as a group;
//! when all are absent the default pinhole for the image size is used. A
//! missing `R` or `t` means identity rotation or zero translation.

use std::path::Path;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CameraIntrinsics, CameraModel, CameraPose, Vec3};
use crate::io::{in_file, read_bytes, write_bytes};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CameraFile {
    width: usize,
    height: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cy: Option<f64>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    rotation: Option<[f64; 9]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<[f64; 3]>,
}

pub fn encode_camera(camera: &CameraModel) -> Vec<u8> {
    let i = &camera.intrinsics;
    let r = camera.pose.rotation();
    let file = CameraFile {
        width: i.width,
        height: i.height,
        fx: Some(i.fx),
        fy: Some(i.fy),
        cx: Some(i.cx),
        cy: Some(i.cy),
        rotation: Some(std::array::from_fn(|k| r[(k / 3, k % 3)])),
        t: Some((*camera.pose.translation()).into()),
    };
    let mut out = serde_json::to_vec(&file).expect("camera serializes");
    out.push(b'\n');
    out
}

pub fn decode_camera(bytes: &[u8]) -> Result<CameraModel> {
    let file: CameraFile =
        serde_json::from_slice(bytes).map_err(|e| Error::format(format!("camera JSON: {e}")))?;
    let intrinsics = match (file.fx, file.fy, file.cx, file.cy) {
        (Some(fx), Some(fy), Some(cx), Some(cy)) => {
            CameraIntrinsics::new(fx, fy, cx, cy, file.width, file.height)?
        }
        (None, None, None, None) => CameraIntrinsics::default_for(file.width, file.height)?,
        _ => {
            return Err(Error::format(
                "camera JSON: fx, fy, cx, cy must be given together",
            ))
        }
    };
    let rotation = file
        .rotation
        .map(|r| Matrix3::from_row_slice(&r))
        .unwrap_or_else(Matrix3::identity);
    let translation = file.t.map(Vec3::from).unwrap_or_else(Vec3::zeros);
    Ok(CameraModel::new(intrinsics, CameraPose::new(rotation, translation)?))
}

pub fn read_camera(path: impl AsRef<Path>) -> Result<CameraModel> {
    let path = path.as_ref();
    in_file(path, decode_camera(&read_bytes(path)?))
}

pub fn write_camera(camera: &CameraModel, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_camera(camera))
}
