use crate::error::{Error, Result};
use crate::geometry::camera::{unproject_pixel, CameraIntrinsics, CameraModel, CameraPose, Vec3};
use crate::geometry::raster::{BinaryMask, DepthMap, Image, Rgb};

/// 3D points with optional per-point colors and source pixels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    points: Vec<Vec3>,
    colors: Option<Vec<Rgb>>,
    source_pixels: Option<Vec<(u32, u32)>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec3>) -> Self {
        Self {
            points,
            colors: None,
            source_pixels: None,
        }
    }

    pub fn with_colors(points: Vec<Vec3>, colors: Vec<Rgb>) -> Result<Self> {
        if colors.len() != points.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} colors for {} points",
                colors.len(),
                points.len()
            )));
        }
        Ok(Self {
            points,
            colors: Some(colors),
            source_pixels: None,
        })
    }

    pub fn with_source_pixels(mut self, pixels: Vec<(u32, u32)>) -> Result<Self> {
        if pixels.len() != self.points.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} source pixels for {} points",
                pixels.len(),
                self.points.len()
            )));
        }
        self.source_pixels = Some(pixels);
        Ok(self)
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn colors(&self) -> Option<&[Rgb]> {
        self.colors.as_deref()
    }

    pub fn source_pixels(&self) -> Option<&[(u32, u32)]> {
        self.source_pixels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Appends `other`. Parallel lists survive only if both clouds carry them.
    pub fn extend(&mut self, other: &PointCloud) {
        let keep_colors = self.colors.is_some() && other.colors.is_some()
            || self.points.is_empty() && other.colors.is_some();
        let keep_pixels = self.source_pixels.is_some() && other.source_pixels.is_some()
            || self.points.is_empty() && other.source_pixels.is_some();
        self.colors = if keep_colors {
            let mut c = self.colors.take().unwrap_or_default();
            c.extend_from_slice(other.colors.as_deref().unwrap_or_default());
            Some(c)
        } else {
            None
        };
        self.source_pixels = if keep_pixels {
            let mut c = self.source_pixels.take().unwrap_or_default();
            c.extend_from_slice(other.source_pixels.as_deref().unwrap_or_default());
            Some(c)
        } else {
            None
        };
        self.points.extend_from_slice(&other.points);
    }
}

/// Unprojects every mask pixel with valid depth, in row-major order, and
/// records each point's source pixel. Colors are taken from `image` when given.
pub fn unproject_region(
    image: Option<&Image>,
    mask: &BinaryMask,
    depth: &DepthMap,
    intr: &CameraIntrinsics,
    pose: &CameraPose,
) -> Result<PointCloud> {
    let (w, h) = (depth.width(), depth.height());
    if !mask.same_shape(w, h) {
        return Err(Error::ShapeMismatch(format!(
            "mask {}x{} vs depth {w}x{h}",
            mask.width(),
            mask.height()
        )));
    }
    if let Some(img) = image {
        if img.width() != w || img.height() != h {
            return Err(Error::ShapeMismatch(format!(
                "image {}x{} vs depth {w}x{h}",
                img.width(),
                img.height()
            )));
        }
    }
    if intr.width != w || intr.height != h {
        return Err(Error::ShapeMismatch(format!(
            "camera {}x{} vs depth {w}x{h}",
            intr.width, intr.height
        )));
    }

    let mut points = Vec::new();
    let mut colors = Vec::new();
    let mut pixels = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) || !depth.is_valid(x, y) {
                continue;
            }
            let p = unproject_pixel(intr, pose, (x as f64, y as f64), depth.get(x, y) as f64)?;
            points.push(p);
            pixels.push((x as u32, y as u32));
            if let Some(img) = image {
                colors.push(img.get(x, y));
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyObject(None));
    }
    let cloud = match image {
        Some(_) => PointCloud::with_colors(points, colors)?,
        None => PointCloud::new(points),
    };
    cloud.with_source_pixels(pixels)
}

/// Colored object cloud from an image, its object mask and depth.
pub fn unproject_masked(
    image: &Image,
    mask: &BinaryMask,
    depth: &DepthMap,
    intr: &CameraIntrinsics,
    pose: &CameraPose,
) -> Result<PointCloud> {
    unproject_region(Some(image), mask, depth, intr, pose)
}

/// Cloud of every valid depth pixel.
pub fn unproject_depth(depth: &DepthMap, camera: &CameraModel) -> Result<PointCloud> {
    unproject_region(
        None,
        &depth.validity(),
        depth,
        &camera.intrinsics,
        &camera.pose,
    )
}

pub fn translate_cloud(cloud: &PointCloud, delta: &Vec3) -> PointCloud {
    PointCloud {
        points: cloud.points.iter().map(|p| p + delta).collect(),
        colors: cloud.colors.clone(),
        source_pixels: cloud.source_pixels.clone(),
    }
}

/// Median of a non-empty slice; even lengths average the two central values.
fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (lower, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = lower.iter().copied().max_by(f64::total_cmp).unwrap();
        (lower + upper) / 2.0
    }
}

/// Coordinate-wise median of the cloud.
pub fn representative_coordinate(cloud: &PointCloud) -> Result<Vec3> {
    if cloud.is_empty() {
        return Err(Error::EmptyObject(None));
    }
    let mut axis = vec![0.0; cloud.len()];
    let mut out = Vec3::zeros();
    for k in 0..3 {
        for (slot, p) in axis.iter_mut().zip(cloud.points()) {
            *slot = p[k];
        }
        out[k] = median(&mut axis);
    }
    Ok(out)
}

pub fn displacement(a: &Vec3, b: &Vec3) -> f64 {
    (a - b).norm()
}

/// Axis-aligned bounding box `(min, max)` of a non-empty cloud.
pub fn bounding_box(cloud: &PointCloud) -> Result<(Vec3, Vec3)> {
    let first = cloud.points().first().ok_or(Error::EmptyObject(None))?;
    Ok(cloud
        .points()
        .iter()
        .fold((*first, *first), |(lo, hi), p| (lo.inf(p), hi.sup(p))))
}

/// Length of the bounding-box diagonal.
pub fn scene_diagonal(cloud: &PointCloud) -> Result<f64> {
    let (lo, hi) = bounding_box(cloud)?;
    Ok((hi - lo).norm())
}
