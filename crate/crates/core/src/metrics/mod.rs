//! Manipulation evaluation metrics.
//!
//! 2D placement (DIoU, mask IoU), depth accuracy (AbsRel, δ, SILog), 3D
//! placement (Chamfer and centroid distance on diagonal-normalized clouds),
//! relocation-aware similarity, the missing-object penalty and the batch
//! evaluation that ties them together.

pub mod boxes;
pub mod cloud;
pub mod depth;
pub mod eval;
pub mod kdtree;
pub mod penalty;
pub mod relocation;
pub mod report;

pub use boxes::{diou, mask_iou, BoundingBox};
pub use cloud::{centroid_distance, chamfer};
pub use depth::{absrel, delta_ratio, silog};
pub use eval::{
    evaluate_batch, evaluate_object, raw_metrics, BatchEvaluation, DistancePenalties,
    LocalizedObject, ObjectEvalInput,
};
pub use penalty::{missing_penalty, quantile, PenaltyPolicy};
pub use relocation::{ra_dino, RelocationPair};
pub use report::{
    aggregate, LinearMap, Metric, MetricReport, MetricSet, MetricValue, NormalizationSpec,
    RawMetrics,
};
