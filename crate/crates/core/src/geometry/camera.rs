//! Pinhole camera model.
//!
//! The pose maps world to camera coordinates, `X_cam = R * X_world + t`, with
//! `+Z` pointing into the scene. Pixel `(u, v)` has its center at integer
//! coordinates, `u` to the right and `v` downward from the top-left corner.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Orthonormality tolerance applied to every rotation.
pub const ROTATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, width: usize, height: usize) -> Result<Self> {
        let intr = Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        };
        intr.validate()?;
        Ok(intr)
    }

    /// Synthesized pinhole used when intrinsics are not supplied:
    /// `fx = fy = max(width, height)` and the principal point at the image center.
    pub fn default_for(width: usize, height: usize) -> Result<Self> {
        let f = width.max(height) as f64;
        Self::new(f, f, width as f64 / 2.0, height as f64 / 2.0, width, height)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidIntrinsics(format!(
                "image size {}x{}",
                self.width, self.height
            )));
        }
        if !(self.fx.is_finite() && self.fx > 0.0 && self.fy.is_finite() && self.fy > 0.0) {
            return Err(Error::InvalidIntrinsics(format!(
                "focal lengths must be positive, got fx={} fy={}",
                self.fx, self.fy
            )));
        }
        if !(0.0..=self.width as f64).contains(&self.cx)
            || !(0.0..=self.height as f64).contains(&self.cy)
        {
            return Err(Error::InvalidIntrinsics(format!(
                "principal point ({}, {}) outside {}x{}",
                self.cx, self.cy, self.width, self.height
            )));
        }
        Ok(())
    }

    /// Whether a real-valued pixel falls on the image. Pixel `i` covers
    /// `[i - 0.5, i + 0.5)`.
    pub fn contains(&self, u: f64, v: f64) -> bool {
        (-0.5..self.width as f64 - 0.5).contains(&u) && (-0.5..self.height as f64 - 0.5).contains(&v)
    }

    /// Integer pixel nearest to `(u, v)`, if on the image.
    pub fn pixel_index(&self, u: f64, v: f64) -> Option<(usize, usize)> {
        if !self.contains(u, v) {
            return None;
        }
        let x = (u + 0.5).floor() as usize;
        let y = (v + 0.5).floor() as usize;
        Some((x.min(self.width - 1), y.min(self.height - 1)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraPose {
    rotation: Matrix3<f64>,
    translation: Vec3,
}

impl CameraPose {
    pub fn new(rotation: Matrix3<f64>, translation: Vec3) -> Result<Self> {
        validate_rotation(&rotation)?;
        if !translation.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite camera translation {translation:?}"
            )));
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vec3 {
        &self.translation
    }

    pub fn world_to_camera(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn camera_to_world(&self, p: &Vec3) -> Vec3 {
        self.rotation.transpose() * (p - self.translation)
    }
}

impl Default for CameraPose {
    fn default() -> Self {
        Self::identity()
    }
}

/// Rejects any matrix with `max |R^T R - I| > 1e-6` or `|det R - 1| > 1e-6`.
pub fn validate_rotation(r: &Matrix3<f64>) -> Result<()> {
    if !r.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidRotation("non-finite entry".into()));
    }
    let dev = (r.transpose() * r - Matrix3::identity()).abs().max();
    if dev > ROTATION_TOLERANCE {
        return Err(Error::InvalidRotation(format!(
            "max |R^T R - I| = {dev:e}"
        )));
    }
    let det = r.determinant();
    if (det - 1.0).abs() > ROTATION_TOLERANCE {
        return Err(Error::InvalidRotation(format!("det R = {det}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    pub intrinsics: CameraIntrinsics,
    pub pose: CameraPose,
}

impl CameraModel {
    pub fn new(intrinsics: CameraIntrinsics, pose: CameraPose) -> Self {
        Self { intrinsics, pose }
    }

    /// Default intrinsics and identity pose for an image of the given size.
    pub fn default_for(width: usize, height: usize) -> Result<Self> {
        Ok(Self::new(
            CameraIntrinsics::default_for(width, height)?,
            CameraPose::identity(),
        ))
    }

    pub fn unproject(&self, pixel: (f64, f64), depth: f64) -> Result<Vec3> {
        unproject_pixel(&self.intrinsics, &self.pose, pixel, depth)
    }

    pub fn project(&self, p: &Vec3) -> Result<((f64, f64), f64)> {
        project_point(&self.intrinsics, &self.pose, p)
    }
}

/// Lifts pixel `(u, v)` at camera depth `depth` to a world-space point.
pub fn unproject_pixel(
    intr: &CameraIntrinsics,
    pose: &CameraPose,
    (u, v): (f64, f64),
    depth: f64,
) -> Result<Vec3> {
    if !(depth.is_finite() && depth > 0.0) {
        return Err(Error::InvalidDepth(depth));
    }
    if !intr.contains(u, v) {
        return Err(Error::OutOfBounds {
            u,
            v,
            width: intr.width,
            height: intr.height,
        });
    }
    let cam = Vec3::new(
        (u - intr.cx) / intr.fx * depth,
        (v - intr.cy) / intr.fy * depth,
        depth,
    );
    Ok(pose.camera_to_world(&cam))
}

/// Projects a world-space point; returns the real-valued pixel and camera
/// depth. The pixel may fall outside the image.
pub fn project_point(
    intr: &CameraIntrinsics,
    pose: &CameraPose,
    p: &Vec3,
) -> Result<((f64, f64), f64)> {
    let cam = pose.world_to_camera(p);
    project_camera_point(intr, &cam)
}

pub(crate) fn project_camera_point(
    intr: &CameraIntrinsics,
    cam: &Vec3,
) -> Result<((f64, f64), f64)> {
    if !(cam.z > 0.0) {
        return Err(Error::BehindCamera(None));
    }
    let u = intr.fx * cam.x / cam.z + intr.cx;
    let v = intr.fy * cam.y / cam.z + intr.cy;
    Ok(((u, v), cam.z))
}
