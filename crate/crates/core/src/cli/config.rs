use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{NormalizationSpec, PenaltyPolicy};
use crate::pipeline::{DbscanParams, FilterThresholds, DEFAULT_SHORT_CLIP_THRESHOLD};
use crate::preview::PreviewConfig;

/// Settings shared by all subcommands. Every section is optional in the
/// JSON file and falls back to the library defaults.
///
/// ```json
/// {"threads": 4,
///  "preview": {"splat_radius": 2, "erase_policy": {"kind": "fill_background_estimate"}},
///  "evaluate": {"penalty": {"fallback": 1.0}},
///  "cluster": {"dbscan": {"eps": 0.3, "min_samples": 4}, "min_run": 8},
///  "select": {"short_clip_threshold": 16},
///  "filter": {"min_total": 0.05, "min_depth_axis": 0.02}}
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub threads: Option<usize>,
    pub preview: PreviewConfig,
    pub evaluate: EvaluateConfig,
    pub cluster: ClusterConfig,
    pub select: SelectConfig,
    pub filter: FilterThresholds,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluateConfig {
    pub penalty: PenaltyPolicy,
    /// Must list all seven metrics when given.
    pub normalization: NormalizationSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterConfig {
    pub dbscan: DbscanParams,
    /// Shortest run of one label kept as a clip.
    pub min_run: usize,
    /// L2-normalize tokens before clustering.
    pub normalize_tokens: bool,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            dbscan: DbscanParams::default(),
            min_run: 2,
            normalize_tokens: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectConfig {
    pub short_clip_threshold: usize,
}

impl Default for SelectConfig {
    fn default() -> Self {
        Self {
            short_clip_threshold: DEFAULT_SHORT_CLIP_THRESHOLD,
        }
    }
}

impl Config {
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let config: Config = serde_json::from_slice(&bytes)
            .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.preview.validate()?;
        self.evaluate.penalty.validate()?;
        self.evaluate.normalization.validate()?;
        self.cluster.dbscan.validate()?;
        if self.cluster.min_run == 0 {
            return Err(Error::InvalidParameter("min_run must be >= 1".into()));
        }
        if self.select.short_clip_threshold == 0 {
            return Err(Error::InvalidParameter("short_clip_threshold must be >= 1".into()));
        }
        let f = &self.filter;
        if !(f.min_total >= 0.0 && f.min_depth_axis >= 0.0) {
            return Err(Error::InvalidParameter("filter thresholds must be >= 0".into()));
        }
        Ok(())
    }
}
