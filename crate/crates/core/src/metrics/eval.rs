//! Two-phase batch evaluation: raw metrics of every localized object first,
//! then the batch penalty for missing objects, then normalization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{scene_diagonal, BinaryMask, DepthMap, PointCloud};
use crate::metrics::boxes::{diou, mask_iou, BoundingBox};
use crate::metrics::cloud::{centroid_distance, chamfer};
use crate::metrics::depth::{absrel, delta_ratio};
use crate::metrics::penalty::{missing_penalty, PenaltyPolicy};
use crate::metrics::relocation::{ra_dino, RelocationPair};
use crate::metrics::report::{Metric, MetricReport, MetricSet, MetricValue, NormalizationSpec, RawMetrics};

pub const DELTA_THRESHOLD: f64 = 1.25;

/// Prediction and ground truth of an object found in the edited image.
#[derive(Debug, Clone)]
pub struct LocalizedObject {
    pub pred_box: BoundingBox,
    pub gt_box: BoundingBox,
    pub pred_mask: BinaryMask,
    pub gt_mask: BinaryMask,
    pub pred_depth: DepthMap,
    pub gt_depth: DepthMap,
    pub pred_cloud: PointCloud,
    pub gt_cloud: PointCloud,
    pub scene_cloud_gt: PointCloud,
    pub dino_similarity: f64,
    pub relocation: RelocationPair,
}

#[derive(Debug, Clone)]
pub struct ObjectEvalInput {
    pub item_id: String,
    pub object_id: String,
    /// `None` when the object could not be localized in the edited image.
    pub localized: Option<LocalizedObject>,
    pub deqa: Option<f64>,
    pub phys_vlm: Option<f64>,
}

/// Raw values of the seven geometric metrics. Depth metrics use
/// `gt_mask ∧ valid(pred) ∧ valid(gt)`; 3D metrics are normalized by the
/// diagonal of the ground-truth scene cloud.
pub fn raw_metrics(obj: &LocalizedObject) -> Result<RawMetrics> {
    if !(0.0..=1.0).contains(&obj.dino_similarity) {
        return Err(Error::InvalidParameter(format!(
            "dino_similarity {} outside [0, 1]",
            obj.dino_similarity
        )));
    }
    let diagonal = scene_diagonal(&obj.scene_cloud_gt)?;
    Ok(MetricSet {
        diou: diou(&obj.pred_box, &obj.gt_box)?,
        mask_iou: mask_iou(&obj.pred_mask, &obj.gt_mask)?,
        absrel: absrel(&obj.pred_depth, &obj.gt_depth, &obj.gt_mask)?,
        delta: delta_ratio(&obj.pred_depth, &obj.gt_depth, &obj.gt_mask, DELTA_THRESHOLD)?,
        chamfer: chamfer(&obj.pred_cloud, &obj.gt_cloud, diagonal)?,
        centroid: centroid_distance(&obj.pred_cloud, &obj.gt_cloud, diagonal)?,
        ra_dino: ra_dino(obj.dino_similarity, &obj.relocation),
    })
}

/// Raw penalty value per distance metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistancePenalties {
    pub absrel: f64,
    pub chamfer: f64,
    pub centroid: f64,
    /// True when derived from the fallback rather than the batch.
    pub from_fallback: bool,
}

impl DistancePenalties {
    pub fn get(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::Absrel => Some(self.absrel),
            Metric::Chamfer => Some(self.chamfer),
            Metric::Centroid => Some(self.centroid),
            _ => None,
        }
    }

    /// Penalties from the distribution of localized values, or the policy
    /// fallback when there are none. Fails with [`Error::EmptySample`] if
    /// neither is available.
    pub fn from_batch(localized: &[RawMetrics], policy: &PenaltyPolicy) -> Result<Self> {
        policy.validate()?;
        if localized.is_empty() {
            let f = policy.fallback.ok_or(Error::EmptySample)?;
            return Ok(Self {
                absrel: f,
                chamfer: f,
                centroid: f,
                from_fallback: true,
            });
        }
        let column = |m: Metric| -> Vec<f64> { localized.iter().map(|r| *r.get(m)).collect() };
        Ok(Self {
            absrel: missing_penalty(&column(Metric::Absrel), policy)?,
            chamfer: missing_penalty(&column(Metric::Chamfer), policy)?,
            centroid: missing_penalty(&column(Metric::Centroid), policy)?,
            from_fallback: false,
        })
    }
}

/// Normalized report of a localized object.
pub fn finalize_localized(raw: &RawMetrics, norm: &NormalizationSpec) -> MetricSet<MetricValue> {
    MetricSet::from_fn(|m| {
        let v = *raw.get(m);
        MetricValue {
            raw: v,
            normalized: norm.get(m).apply(v),
            penalty_applied: false,
        }
    })
}

/// Normalized report of a missing object: accuracy metrics at their floor,
/// distance metrics at the batch penalty.
pub fn finalize_missing(
    penalties: &DistancePenalties,
    norm: &NormalizationSpec,
) -> MetricSet<MetricValue> {
    MetricSet::from_fn(|m| {
        let (raw, penalty_applied) = match penalties.get(m) {
            Some(p) => (p, true),
            None => (m.floor(), false),
        };
        MetricValue {
            raw,
            normalized: norm.get(m).apply(raw),
            penalty_applied,
        }
    })
}

/// Evaluates one object. Missing objects need the batch `penalties`.
pub fn evaluate_object(
    input: &ObjectEvalInput,
    penalties: Option<&DistancePenalties>,
    norm: &NormalizationSpec,
) -> Result<MetricReport> {
    let metrics = match &input.localized {
        Some(obj) => finalize_localized(&raw_metrics(obj)?, norm),
        None => finalize_missing(penalties.ok_or(Error::EmptySample)?, norm),
    };
    Ok(MetricReport {
        metrics,
        deqa: input.deqa,
        phys_vlm: input.phys_vlm,
    })
}

#[derive(Debug, Clone)]
pub struct BatchEvaluation {
    /// One report per input, in input order.
    pub reports: Vec<MetricReport>,
    /// Present when the batch contained a missing object.
    pub penalties: Option<DistancePenalties>,
}

/// Evaluates a batch on the current rayon pool. Results do not depend on the
/// number of worker threads.
pub fn evaluate_batch(
    inputs: &[ObjectEvalInput],
    policy: &PenaltyPolicy,
    norm: &NormalizationSpec,
) -> Result<BatchEvaluation> {
    norm.validate()?;
    policy.validate()?;
    let raw: Vec<Option<RawMetrics>> = inputs
        .par_iter()
        .map(|input| {
            input
                .localized
                .as_ref()
                .map(raw_metrics)
                .transpose()
                .map_err(|e| tag_item(e, input))
        })
        .collect::<Result<_>>()?;

    let localized: Vec<RawMetrics> = raw.iter().flatten().copied().collect();
    let penalties = if raw.iter().any(Option::is_none) {
        Some(DistancePenalties::from_batch(&localized, policy)?)
    } else {
        None
    };

    let reports = inputs
        .iter()
        .zip(&raw)
        .map(|(input, raw)| MetricReport {
            metrics: match (raw, &penalties) {
                (Some(r), _) => finalize_localized(r, norm),
                (None, Some(p)) => finalize_missing(p, norm),
                (None, None) => unreachable!("penalties exist whenever an object is missing"),
            },
            deqa: input.deqa,
            phys_vlm: input.phys_vlm,
        })
        .collect();
    Ok(BatchEvaluation { reports, penalties })
}

fn tag_item(e: Error, input: &ObjectEvalInput) -> Error {
    match e {
        Error::EmptyObject(None) | Error::BehindCamera(None) => {
            e.with_object(&format!("{}/{}", input.item_id, input.object_id))
        }
        other => other,
    }
}
