use serde::{Deserialize, Serialize};

use crate::pipeline::dbscan::{ClusterAssignment, NOISE};

/// Inclusive frame range `[start, end]` inside one cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClipRange {
    pub cluster: i64,
    pub start: usize,
    pub end: usize,
}

impl ClipRange {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Maximal runs of consecutive frames sharing a non-noise label, keeping runs
/// of at least `min_run` frames, sorted by start frame.
pub fn static_clips(assignment: &ClusterAssignment, min_run: usize) -> Vec<ClipRange> {
    let labels = &assignment.labels;
    let mut clips = Vec::new();
    let mut start = 0;
    while start < labels.len() {
        let label = labels[start];
        let mut end = start;
        while end + 1 < labels.len() && labels[end + 1] == label {
            end += 1;
        }
        if label != NOISE && end - start + 1 >= min_run {
            clips.push(ClipRange {
                cluster: label,
                start,
                end,
            });
        }
        start = end + 1;
    }
    clips
}
