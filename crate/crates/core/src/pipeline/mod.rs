//! Curation stages for building manipulation pairs from video: camera-token
//! clustering into camera-static clips, frame-pair selection and
//! displacement filtering.

pub mod clips;
pub mod dbscan;
pub mod selection;

pub use clips::{static_clips, ClipRange};
pub use dbscan::{dbscan, CameraTokenSet, ClusterAssignment, DbscanParams, NOISE};
pub use selection::{
    depth_filter, select_pair, select_pair_from_coordinates, FilterThresholds, FrameRecord,
    PairSelection, DEFAULT_SHORT_CLIP_THRESHOLD,
};
