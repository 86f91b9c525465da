//! Depth accuracy over a valid object region.

use crate::error::{Error, Result};
use crate::geometry::{BinaryMask, DepthMap};

fn check_shapes(pred: &DepthMap, gt: &DepthMap, region: &BinaryMask) -> Result<()> {
    let (w, h) = (gt.width(), gt.height());
    if pred.width() != w || pred.height() != h || !region.same_shape(w, h) {
        return Err(Error::ShapeMismatch(format!(
            "pred {}x{}, gt {w}x{h}, region {}x{}",
            pred.width(),
            pred.height(),
            region.width(),
            region.height()
        )));
    }
    Ok(())
}

/// `(pred, gt)` pairs over `region ∧ valid(pred) ∧ valid(gt)`.
fn valid_pairs<'a>(
    pred: &'a DepthMap,
    gt: &'a DepthMap,
    region: &'a BinaryMask,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    region
        .bits()
        .iter()
        .zip(pred.values().iter().zip(gt.values()))
        .filter(|(&m, (&p, &g))| m && DepthMap::is_valid_value(p) && DepthMap::is_valid_value(g))
        .map(|(_, (&p, &g))| (p as f64, g as f64))
}

/// Mean absolute relative error `|pred - gt| / gt`.
pub fn absrel(pred: &DepthMap, gt: &DepthMap, region: &BinaryMask) -> Result<f64> {
    check_shapes(pred, gt, region)?;
    let (mut sum, mut n) = (0.0, 0usize);
    for (p, g) in valid_pairs(pred, gt, region) {
        sum += (p - g).abs() / g;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyRegion);
    }
    Ok(sum / n as f64)
}

/// Fraction of pixels with `max(pred/gt, gt/pred) < threshold`.
pub fn delta_ratio(pred: &DepthMap, gt: &DepthMap, region: &BinaryMask, threshold: f64) -> Result<f64> {
    check_shapes(pred, gt, region)?;
    let (mut hits, mut n) = (0usize, 0usize);
    for (p, g) in valid_pairs(pred, gt, region) {
        if (p / g).max(g / p) < threshold {
            hits += 1;
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyRegion);
    }
    Ok(hits as f64 / n as f64)
}

/// Scale-invariant log error: variance of `log pred - log gt` over the region
/// pixels where `gt` is valid. A non-positive or non-finite prediction there
/// is an error.
pub fn silog(pred: &DepthMap, gt: &DepthMap, region: &BinaryMask) -> Result<f64> {
    check_shapes(pred, gt, region)?;
    let (mut sum, mut sum_sq, mut n) = (0.0, 0.0, 0usize);
    for ((&m, &p), &g) in region.bits().iter().zip(pred.values()).zip(gt.values()) {
        if !m || !DepthMap::is_valid_value(g) {
            continue;
        }
        if !DepthMap::is_valid_value(p) {
            return Err(Error::InvalidDepth(p as f64));
        }
        let d = (p as f64).ln() - (g as f64).ln();
        sum += d;
        sum_sq += d * d;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyRegion);
    }
    let n = n as f64;
    let mean = sum / n;
    Ok((sum_sq / n - mean * mean).max(0.0))
}
