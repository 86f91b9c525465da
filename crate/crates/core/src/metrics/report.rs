//! Per-object metric records, normalization to `[0, 100]` and aggregation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Diou,
    MaskIou,
    Absrel,
    Delta,
    Chamfer,
    Centroid,
    RaDino,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Diou,
        Metric::MaskIou,
        Metric::Absrel,
        Metric::Delta,
        Metric::Chamfer,
        Metric::Centroid,
        Metric::RaDino,
    ];

    /// Distance-style metrics receive the batch penalty when an object is
    /// missing; accuracy-style metrics drop to their floor.
    pub fn is_distance(self) -> bool {
        matches!(self, Metric::Absrel | Metric::Chamfer | Metric::Centroid)
    }

    /// Raw value assigned to accuracy-style metrics of a missing object.
    pub fn floor(self) -> f64 {
        match self {
            Metric::Diou => -1.0,
            _ => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Diou => "diou",
            Metric::MaskIou => "mask_iou",
            Metric::Absrel => "absrel",
            Metric::Delta => "delta",
            Metric::Chamfer => "chamfer",
            Metric::Centroid => "centroid",
            Metric::RaDino => "ra_dino",
        }
    }
}

/// One value per metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet<T> {
    pub diou: T,
    pub mask_iou: T,
    pub absrel: T,
    pub delta: T,
    pub chamfer: T,
    pub centroid: T,
    pub ra_dino: T,
}

impl<T> MetricSet<T> {
    pub fn from_fn(mut f: impl FnMut(Metric) -> T) -> Self {
        Self {
            diou: f(Metric::Diou),
            mask_iou: f(Metric::MaskIou),
            absrel: f(Metric::Absrel),
            delta: f(Metric::Delta),
            chamfer: f(Metric::Chamfer),
            centroid: f(Metric::Centroid),
            ra_dino: f(Metric::RaDino),
        }
    }

    pub fn get(&self, m: Metric) -> &T {
        match m {
            Metric::Diou => &self.diou,
            Metric::MaskIou => &self.mask_iou,
            Metric::Absrel => &self.absrel,
            Metric::Delta => &self.delta,
            Metric::Chamfer => &self.chamfer,
            Metric::Centroid => &self.centroid,
            Metric::RaDino => &self.ra_dino,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metric, &T)> {
        Metric::ALL.into_iter().map(move |m| (m, self.get(m)))
    }
}

/// Raw metric values of one localized object.
pub type RawMetrics = MetricSet<f64>;

/// Linear map taking `lo` to 0 and `hi` to 100, clamped. Swapping the ends
/// reverses the direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub lo: f64,
    pub hi: f64,
}

impl LinearMap {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn apply(&self, raw: f64) -> f64 {
        let t = (raw - self.lo) / (self.hi - self.lo);
        (100.0 * t).clamp(0.0, 100.0)
    }
}

pub type NormalizationSpec = MetricSet<LinearMap>;

impl Default for NormalizationSpec {
    fn default() -> Self {
        Self::standard()
    }
}

impl NormalizationSpec {
    pub fn standard() -> Self {
        Self {
            diou: LinearMap::new(-1.0, 1.0),
            mask_iou: LinearMap::new(0.0, 1.0),
            absrel: LinearMap::new(0.0, 2.0),
            delta: LinearMap::new(0.0, 1.0),
            chamfer: LinearMap::new(0.0, 0.5),
            centroid: LinearMap::new(0.0, 0.5),
            ra_dino: LinearMap::new(0.0, 1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (m, map) in self.iter() {
            if !(map.lo.is_finite() && map.hi.is_finite() && map.lo != map.hi) {
                return Err(Error::InvalidParameter(format!(
                    "normalization of {} needs finite distinct ends, got ({}, {})",
                    m.name(),
                    map.lo,
                    map.hi
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricValue {
    pub raw: f64,
    pub normalized: f64,
    pub penalty_applied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metrics: MetricSet<MetricValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deqa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phys_vlm: Option<f64>,
}

/// Sum with pairwise splitting, in slice order.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Mean that does not depend on the order of `values`: the values are sorted
/// before pairwise summation.
fn order_free_mean(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    pairwise_sum(&values) / values.len() as f64
}

/// Per-metric means of raw and normalized values. `penalty_applied` is set if
/// any input had the penalty applied; pass-through scores average over the
/// reports that carry them.
pub fn aggregate(reports: &[MetricReport]) -> Result<MetricReport> {
    if reports.is_empty() {
        return Err(Error::EmptySample);
    }
    let metrics = MetricSet::from_fn(|m| {
        let values = || reports.iter().map(move |r| *r.metrics.get(m));
        MetricValue {
            raw: order_free_mean(values().map(|v| v.raw).collect()),
            normalized: order_free_mean(values().map(|v| v.normalized).collect()),
            penalty_applied: values().any(|v| v.penalty_applied),
        }
    });
    let optional_mean = |f: fn(&MetricReport) -> Option<f64>| {
        let present: Vec<f64> = reports.iter().filter_map(f).collect();
        (!present.is_empty()).then(|| order_free_mean(present))
    };
    Ok(MetricReport {
        metrics,
        deqa: optional_mean(|r| r.deqa),
        phys_vlm: optional_mean(|r| r.phys_vlm),
    })
}
