//! Evaluation reports as JSON lines: one `object` record per evaluated
//! object followed by a single `summary` record.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::manifest::{parse_lines, to_lines};
use crate::io::{read_bytes, write_bytes};
use crate::metrics::{DistancePenalties, MetricReport, MetricSet, MetricValue, NormalizationSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectReport {
    pub item_id: String,
    pub object_id: String,
    pub localized: bool,
    pub metrics: MetricSet<MetricValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deqa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phys_vlm: Option<f64>,
    pub normalization: NormalizationSpec,
}

impl ObjectReport {
    pub fn new(
        item_id: impl Into<String>,
        object_id: impl Into<String>,
        localized: bool,
        report: &MetricReport,
        normalization: &NormalizationSpec,
    ) -> Self {
        Self {
            item_id: item_id.into(),
            object_id: object_id.into(),
            localized,
            metrics: report.metrics,
            deqa: report.deqa,
            phys_vlm: report.phys_vlm,
            normalization: *normalization,
        }
    }

    pub fn metric_report(&self) -> MetricReport {
        MetricReport {
            metrics: self.metrics,
            deqa: self.deqa,
            phys_vlm: self.phys_vlm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub count: usize,
    pub localized_count: usize,
    pub metrics: MetricSet<MetricValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deqa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phys_vlm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalties: Option<DistancePenalties>,
    pub normalization: NormalizationSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportRecord {
    Object(ObjectReport),
    Summary(SummaryReport),
}

pub fn encode_report(records: &[ReportRecord]) -> Vec<u8> {
    to_lines(records)
}

pub fn decode_report(bytes: &[u8]) -> Result<Vec<ReportRecord>> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::format("report: not UTF-8"))?;
    Ok(parse_lines(text)?.into_iter().map(|(_, r)| r).collect())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Vec<ReportRecord>> {
    decode_report(&read_bytes(path.as_ref())?)
}

pub fn write_report(records: &[ReportRecord], path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_report(records))
}
