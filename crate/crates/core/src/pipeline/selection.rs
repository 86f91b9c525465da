//! Depth-aware frame-pair selection and displacement filtering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    displacement, representative_coordinate, unproject_region, BinaryMask, CameraModel, DepthMap,
    Vec3,
};

/// One frame of a camera-static clip with its object mask.
#[derive(Debug, Clone)]
pub struct FrameRecord {
    pub frame_index: usize,
    pub depth: DepthMap,
    pub mask: BinaryMask,
    pub camera: CameraModel,
}

impl FrameRecord {
    /// Coordinate-wise median of the object's unprojected pixels.
    pub fn representative_coordinate(&self) -> Result<Vec3> {
        let cloud = unproject_region(
            None,
            &self.mask,
            &self.depth,
            &self.camera.intrinsics,
            &self.camera.pose,
        )
        .map_err(|e| match e {
            Error::EmptyObject(None) => Error::EmptyObject(Some(format!("frame {}", self.frame_index))),
            other => other,
        })?;
        representative_coordinate(&cloud)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSelection {
    pub i: usize,
    pub j: usize,
    pub centroid_i: Vec3,
    pub centroid_j: Vec3,
    /// `‖centroid_j - centroid_i‖`.
    pub displacement: f64,
    /// `centroid_j - centroid_i`.
    pub delta: Vec3,
    pub short_clip_rule_used: bool,
}

impl PairSelection {
    fn between(i: usize, j: usize, ci: Vec3, cj: Vec3, short: bool) -> Self {
        Self {
            i,
            j,
            centroid_i: ci,
            centroid_j: cj,
            displacement: displacement(&ci, &cj),
            delta: cj - ci,
            short_clip_rule_used: short,
        }
    }

    /// Displacement and delta divided by `diagonal`.
    pub fn normalized(&self, diagonal: f64) -> Result<Self> {
        if !(diagonal.is_finite() && diagonal > 0.0) {
            return Err(Error::DegenerateScene(diagonal));
        }
        Ok(Self {
            displacement: self.displacement / diagonal,
            delta: self.delta / diagonal,
            centroid_i: self.centroid_i / diagonal,
            centroid_j: self.centroid_j / diagonal,
            ..*self
        })
    }
}

pub const DEFAULT_SHORT_CLIP_THRESHOLD: usize = 16;

/// Chooses the frame pair from per-frame representative coordinates.
///
/// Clips of at most `short_clip_threshold` frames use the first and last
/// frame. Longer clips use the pair with the largest displacement, ties going
/// to the smallest `i`, then the smallest `j`. Positions, not frame indices,
/// are returned in `i` and `j`.
pub fn select_pair_from_coordinates(coords: &[Vec3], short_clip_threshold: usize) -> Result<PairSelection> {
    let k = coords.len();
    if k < 2 {
        return Err(Error::InsufficientFrames(k));
    }
    if k <= short_clip_threshold {
        return Ok(PairSelection::between(0, k - 1, coords[0], coords[k - 1], true));
    }
    let mut best = (0, 1, f64::NEG_INFINITY);
    for i in 0..k {
        for j in i + 1..k {
            let d = displacement(&coords[i], &coords[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (i, j, _) = best;
    Ok(PairSelection::between(i, j, coords[i], coords[j], false))
}

/// Selects the training pair of a clip. Frames are taken in the given order;
/// the returned `i` and `j` are their `frame_index` values.
pub fn select_pair(frames: &[FrameRecord], short_clip_threshold: usize) -> Result<PairSelection> {
    if frames.len() < 2 {
        return Err(Error::InsufficientFrames(frames.len()));
    }
    let coords = frames
        .iter()
        .map(FrameRecord::representative_coordinate)
        .collect::<Result<Vec<_>>>()?;
    let mut sel = select_pair_from_coordinates(&coords, short_clip_threshold)?;
    sel.i = frames[sel.i].frame_index;
    sel.j = frames[sel.j].frame_index;
    Ok(sel)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterThresholds {
    pub min_total: f64,
    pub min_depth_axis: f64,
}

impl Default for FilterThresholds {
    fn default() -> Self {
        Self {
            min_total: 0.05,
            min_depth_axis: 0.02,
        }
    }
}

/// Keeps a pair iff its displacement and its depth-axis component both reach
/// the thresholds.
pub fn depth_filter(selection: &PairSelection, thresholds: &FilterThresholds) -> bool {
    selection.displacement >= thresholds.min_total
        && selection.delta.z.abs() >= thresholds.min_depth_axis
}
