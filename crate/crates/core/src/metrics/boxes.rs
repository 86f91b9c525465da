use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BinaryMask;

/// Axis-aligned box in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct BoundingBox {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl BoundingBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self> {
        if ![x_min, y_min, x_max, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite box coordinate".into()));
        }
        if x_min > x_max || y_min > y_max {
            return Err(Error::InvalidParameter(format!(
                "inverted box [{x_min}, {y_min}, {x_max}, {y_max}]"
            )));
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    pub fn center(&self) -> (f64, f64) {
        (
            (self.x_min + self.x_max) / 2.0,
            (self.y_min + self.y_max) / 2.0,
        )
    }
}

impl TryFrom<[f64; 4]> for BoundingBox {
    type Error = Error;

    fn try_from(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<BoundingBox> for [f64; 4] {
    fn from(b: BoundingBox) -> Self {
        [b.x_min, b.y_min, b.x_max, b.y_max]
    }
}

/// Distance-IoU: IoU minus the squared center distance over the squared
/// diagonal of the smallest enclosing box.
pub fn diou(pred: &BoundingBox, gt: &BoundingBox) -> Result<f64> {
    if !(gt.area() > 0.0) {
        return Err(Error::DegenerateBox);
    }
    let iw = (pred.x_max.min(gt.x_max) - pred.x_min.max(gt.x_min)).max(0.0);
    let ih = (pred.y_max.min(gt.y_max) - pred.y_min.max(gt.y_min)).max(0.0);
    let inter = iw * ih;
    let union = pred.area() + gt.area() - inter;
    let iou = inter / union;

    let (pcx, pcy) = pred.center();
    let (gcx, gcy) = gt.center();
    let rho2 = (pcx - gcx).powi(2) + (pcy - gcy).powi(2);
    let cw = pred.x_max.max(gt.x_max) - pred.x_min.min(gt.x_min);
    let ch = pred.y_max.max(gt.y_max) - pred.y_min.min(gt.y_min);
    let c2 = cw * cw + ch * ch;
    Ok((iou - rho2 / c2).clamp(-1.0, 1.0))
}

/// `|pred ∧ gt| / |pred ∨ gt|`, zero when both masks are empty.
pub fn mask_iou(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    if !pred.same_shape(gt.width(), gt.height()) {
        return Err(Error::ShapeMismatch(format!(
            "pred mask {}x{} vs gt mask {}x{}",
            pred.width(),
            pred.height(),
            gt.width(),
            gt.height()
        )));
    }
    let (mut inter, mut union) = (0usize, 0usize);
    for (&a, &b) in pred.bits().iter().zip(gt.bits()) {
        inter += (a && b) as usize;
        union += (a || b) as usize;
    }
    if union == 0 {
        return Ok(0.0);
    }
    Ok(inter as f64 / union as f64)
}
