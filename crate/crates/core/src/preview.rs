//! Depth-aware preview rendering.
//!
//! Each requested object is lifted to 3D from its mask and the scene depth,
//! translated, and forward-splatted back into the source view over a depth
//! buffer initialized from the scene, so moved objects occlude each other and
//! are hidden by nearer scene content.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::camera::project_camera_point;
use crate::geometry::{
    scene_diagonal, translate_cloud, unproject_depth, unproject_masked, BinaryMask, CameraIntrinsics,
    CameraModel, CameraPose, DepthMap, Image, PointCloud, Rgb, Vec3,
};

pub const MAX_SPLAT_RADIUS: u32 = 8;

/// How the vacated source region of every moved object is painted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "color")]
pub enum ErasePolicy {
    Leave,
    FillBackgroundEstimate,
    FillFlatColor(Rgb),
}

/// Depth tolerance of the z-test against the scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZEpsilon {
    /// Absolute tolerance in scene units.
    Absolute(f64),
    /// Fraction of the valid-scene diagonal.
    SceneRelative(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreviewConfig {
    pub splat_radius: u32,
    pub z_test_epsilon: ZEpsilon,
    pub erase_policy: ErasePolicy,
    /// Used where a background estimate has no unerased neighbor to draw from.
    pub background_color: Rgb,
}

impl Default for PreviewConfig {
    fn default() -> Self {
        Self {
            splat_radius: 1,
            z_test_epsilon: ZEpsilon::SceneRelative(1e-4),
            erase_policy: ErasePolicy::FillFlatColor([128, 128, 128]),
            background_color: [128, 128, 128],
        }
    }
}

impl PreviewConfig {
    pub fn validate(&self) -> Result<()> {
        if self.splat_radius > MAX_SPLAT_RADIUS {
            return Err(Error::InvalidParameter(format!(
                "splat_radius {} exceeds {MAX_SPLAT_RADIUS}",
                self.splat_radius
            )));
        }
        let eps = match self.z_test_epsilon {
            ZEpsilon::Absolute(e) | ZEpsilon::SceneRelative(e) => e,
        };
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(Error::InvalidParameter(format!("z_test_epsilon {eps}")));
        }
        Ok(())
    }
}

/// Nearest camera depth per pixel; `+inf` where nothing has been drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthBuffer {
    width: usize,
    height: usize,
    depths: Vec<f64>,
}

impl DepthBuffer {
    pub fn infinite(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            depths: vec![f64::INFINITY; width * height],
        }
    }

    /// Scene depths, with invalid pixels treated as infinitely far.
    pub fn from_depth(depth: &DepthMap) -> Self {
        Self {
            width: depth.width(),
            height: depth.height(),
            depths: depth
                .values()
                .iter()
                .map(|&v| {
                    if DepthMap::is_valid_value(v) {
                        v as f64
                    } else {
                        f64::INFINITY
                    }
                })
                .collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.depths[y * self.width + x]
    }

    /// Single-precision depth map; empty pixels become `+inf` (invalid).
    pub fn to_depth_map(&self) -> DepthMap {
        let values = self.depths.iter().map(|&d| d as f32).collect();
        DepthMap::new(self.width, self.height, values).expect("buffer shape is consistent")
    }

    fn clear_region(&mut self, mask: &BinaryMask) {
        for (d, &m) in self.depths.iter_mut().zip(mask.bits()) {
            if m {
                *d = f64::INFINITY;
            }
        }
    }
}

/// Forward-splats a colored cloud into `canvas`.
///
/// A point covers the `(2r+1)^2` square around its nearest pixel and wins a
/// pixel iff its camera depth is below `zbuf - epsilon` there. Among points
/// passing the test the nearest wins, ties going to the lower point index, so
/// the result does not depend on evaluation order. Points behind the camera
/// or whose center falls off the image are skipped.
pub fn splat(
    cloud: &PointCloud,
    intr: &CameraIntrinsics,
    pose: &CameraPose,
    canvas: &Image,
    zbuf: &DepthBuffer,
    radius: u32,
    epsilon: f64,
) -> Result<(Image, DepthBuffer)> {
    let (w, h) = (canvas.width(), canvas.height());
    if zbuf.width != w || zbuf.height != h {
        return Err(Error::ShapeMismatch(format!(
            "canvas {w}x{h} vs depth buffer {}x{}",
            zbuf.width, zbuf.height
        )));
    }
    if cloud.is_empty() {
        return Ok((canvas.clone(), zbuf.clone()));
    }
    let colors = cloud
        .colors()
        .ok_or_else(|| Error::InvalidParameter("splatted cloud has no colors".into()))?;
    if intr.width != w || intr.height != h {
        return Err(Error::ShapeMismatch(format!(
            "camera {}x{} vs canvas {w}x{h}",
            intr.width, intr.height
        )));
    }

    let r = radius as isize;
    let mut winner: Vec<Option<(f64, usize)>> = vec![None; w * h];
    for (idx, p) in cloud.points().iter().enumerate() {
        let cam = pose.world_to_camera(p);
        let Ok(((u, v), depth)) = project_camera_point(intr, &cam) else {
            continue;
        };
        let Some((px, py)) = intr.pixel_index(u, v) else {
            continue;
        };
        let (px, py) = (px as isize, py as isize);
        for y in (py - r).max(0)..=(py + r).min(h as isize - 1) {
            for x in (px - r).max(0)..=(px + r).min(w as isize - 1) {
                let k = y as usize * w + x as usize;
                if !(depth < zbuf.depths[k] - epsilon) {
                    continue;
                }
                match winner[k] {
                    Some((best, _)) if best <= depth => {}
                    _ => winner[k] = Some((depth, idx)),
                }
            }
        }
    }

    let mut image = canvas.clone();
    let mut out = zbuf.clone();
    for (k, win) in winner.into_iter().enumerate() {
        if let Some((depth, idx)) = win {
            image.set(k % w, k / w, colors[idx]);
            out.depths[k] = depth;
        }
    }
    Ok((image, out))
}

/// One object to move: its source mask and 3D translation.
#[derive(Debug, Clone, PartialEq)]
pub struct ManipulationRequest {
    pub object_id: String,
    pub mask: BinaryMask,
    pub delta: Vec3,
}

#[derive(Debug, Clone)]
pub struct Preview {
    pub image: Image,
    pub depth: DepthBuffer,
    /// Translated object clouds, sorted by object id.
    pub clouds: Vec<(String, PointCloud)>,
}

/// Renders the preview image for a set of object translations.
pub fn render_preview(
    src: &Image,
    scene_depth: &DepthMap,
    camera: &CameraModel,
    requests: &[ManipulationRequest],
    cfg: &PreviewConfig,
) -> Result<Image> {
    render_preview_full(src, scene_depth, camera, requests, cfg).map(|p| p.image)
}

/// Like [`render_preview`] but also returns the final depth buffer and the
/// translated clouds.
pub fn render_preview_full(
    src: &Image,
    scene_depth: &DepthMap,
    camera: &CameraModel,
    requests: &[ManipulationRequest],
    cfg: &PreviewConfig,
) -> Result<Preview> {
    cfg.validate()?;
    if requests.is_empty() {
        return Err(Error::NoRequests);
    }
    let (w, h) = (src.width(), src.height());
    if scene_depth.width() != w || scene_depth.height() != h {
        return Err(Error::ShapeMismatch(format!(
            "source {w}x{h} vs depth {}x{}",
            scene_depth.width(),
            scene_depth.height()
        )));
    }
    for req in requests {
        if !req.mask.same_shape(w, h) {
            return Err(Error::ShapeMismatch(format!(
                "mask of {} is {}x{}, source is {w}x{h}",
                req.object_id,
                req.mask.width(),
                req.mask.height()
            )));
        }
    }

    // Sort so that the splat index order, and hence tie-breaking, does not
    // depend on request order. Disjoint masks make the key unique.
    let mut order: Vec<&ManipulationRequest> = requests.iter().collect();
    order.sort_by(|a, b| {
        a.object_id
            .cmp(&b.object_id)
            .then(a.mask.first_set().cmp(&b.mask.first_set()))
    });

    let mut erased = BinaryMask::empty(w, h)?;
    for (i, a) in order.iter().enumerate() {
        for b in &order[i + 1..] {
            if a.mask.and(&b.mask)?.count() > 0 {
                return Err(Error::MaskOverlap(a.object_id.clone(), b.object_id.clone()));
            }
        }
        erased = erased.or(&a.mask)?;
    }

    let intr = &camera.intrinsics;
    let pose = &camera.pose;
    let mut clouds = Vec::with_capacity(order.len());
    let mut combined = PointCloud::default();
    for req in &order {
        let cloud = unproject_masked(src, &req.mask, scene_depth, intr, pose)
            .map_err(|e| e.with_object(&req.object_id))?;
        let moved = translate_cloud(&cloud, &req.delta);
        if !moved
            .points()
            .iter()
            .any(|p| pose.world_to_camera(p).z > 0.0)
        {
            return Err(Error::BehindCamera(Some(req.object_id.clone())));
        }
        combined.extend(&moved);
        clouds.push((req.object_id.clone(), moved));
    }

    let epsilon = match cfg.z_test_epsilon {
        ZEpsilon::Absolute(e) => e,
        ZEpsilon::SceneRelative(f) => match unproject_depth(scene_depth, camera) {
            Ok(scene) => f * scene_diagonal(&scene)?,
            Err(Error::EmptyObject(_)) => 0.0,
            Err(e) => return Err(e),
        },
    };

    let canvas = erase(src, &erased, cfg);
    let mut zbuf = DepthBuffer::from_depth(scene_depth);
    zbuf.clear_region(&erased);
    let (image, depth) = splat(&combined, intr, pose, &canvas, &zbuf, cfg.splat_radius, epsilon)?;
    Ok(Preview {
        image,
        depth,
        clouds,
    })
}

fn erase(src: &Image, region: &BinaryMask, cfg: &PreviewConfig) -> Image {
    let mut out = src.clone();
    match cfg.erase_policy {
        ErasePolicy::Leave => {}
        ErasePolicy::FillFlatColor(color) => {
            for (k, _) in region.bits().iter().enumerate().filter(|(_, &b)| b) {
                out.set(k % src.width(), k / src.width(), color);
            }
        }
        ErasePolicy::FillBackgroundEstimate => {
            for y in 0..src.height() {
                for x in 0..src.width() {
                    if region.get(x, y) {
                        let c = estimate_background(src, region, x, y)
                            .unwrap_or(cfg.background_color);
                        out.set(x, y, c);
                    }
                }
            }
        }
    }
    out
}

/// Linear interpolation between the nearest unerased pixels on the same row,
/// falling back to the same column.
fn estimate_background(src: &Image, region: &BinaryMask, x: usize, y: usize) -> Option<Rgb> {
    let row = |i: usize| (i, y);
    let col = |i: usize| (x, i);
    interpolate_line(src, region, x, src.width(), row)
        .or_else(|| interpolate_line(src, region, y, src.height(), col))
}

fn interpolate_line(
    src: &Image,
    region: &BinaryMask,
    at: usize,
    len: usize,
    coord: impl Fn(usize) -> (usize, usize),
) -> Option<Rgb> {
    let free = |i: usize| {
        let (x, y) = coord(i);
        !region.get(x, y)
    };
    let before = (0..at).rev().find(|&i| free(i));
    let after = (at + 1..len).find(|&i| free(i));
    let color = |i: usize| {
        let (x, y) = coord(i);
        src.get(x, y)
    };
    match (before, after) {
        (Some(a), Some(b)) => {
            let t = (at - a) as f64 / (b - a) as f64;
            let (ca, cb) = (color(a), color(b));
            let mut c = [0u8; 3];
            for k in 0..3 {
                c[k] = (ca[k] as f64 * (1.0 - t) + cb[k] as f64 * t).round() as u8;
            }
            Some(c)
        }
        (Some(a), None) => Some(color(a)),
        (None, Some(b)) => Some(color(b)),
        (None, None) => None,
    }
}
