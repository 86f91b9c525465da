//! JSON-lines manifests: evaluation objects, clip frames and selected pairs.
//!
//! Relative paths inside a manifest are resolved against the manifest's
//! directory. Errors carry the 1-based line number.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{unproject_depth, unproject_region, CameraModel, Vec3};
use crate::io::{read_bytes, read_camera, read_depth, read_mask, read_ply, write_bytes};
use crate::metrics::{BoundingBox, LocalizedObject, ObjectEvalInput, RelocationPair};
use crate::pipeline::{FrameRecord, PairSelection};

/// Parses non-blank lines of `text` as `T`, returning `(line, value)` pairs.
pub(crate) fn parse_lines<T: DeserializeOwned>(text: &str) -> Result<Vec<(usize, T)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str(l)
                .map(|v| (n + 1, v))
                .map_err(|e| Error::Manifest {
                    line: n + 1,
                    message: e.to_string(),
                })
        })
        .collect()
}

pub(crate) fn to_lines<T: Serialize>(records: &[T]) -> Vec<u8> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r).expect("record serializes");
        out.push(b'\n');
    }
    out
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_bytes(path)?)
        .map_err(|_| Error::format(format!("{}: not UTF-8", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Manifest { .. } => e,
        other => Error::Manifest {
            line,
            message: other.to_string(),
        },
    }
}

/// One object of an evaluation manifest.
///
/// A localized object needs boxes, masks, depths, the DINO similarity and
/// the relocation vectors. Clouds default to the unprojection of the masked
/// depths (and the full ground-truth depth for the scene) with `camera`, or
/// the default camera for the depth size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    pub item_id: String,
    pub object_id: String,
    pub localized: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred_box: Option<BoundingBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_box: Option<BoundingBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred_mask: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_mask: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred_depth: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_depth: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred_cloud: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_cloud: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scene_cloud: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dino_similarity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relocation: Option<RelocationPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deqa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phys_vlm: Option<f64>,
}

impl ManifestRecord {
    /// A record for an object that was not found in the edited image.
    pub fn missing(item_id: impl Into<String>, object_id: impl Into<String>) -> Self {
        Self {
            item_id: item_id.into(),
            object_id: object_id.into(),
            localized: false,
            camera: None,
            pred_box: None,
            gt_box: None,
            pred_mask: None,
            gt_mask: None,
            pred_depth: None,
            gt_depth: None,
            pred_cloud: None,
            gt_cloud: None,
            scene_cloud: None,
            dino_similarity: None,
            relocation: None,
            deqa: None,
            phys_vlm: None,
        }
    }

    fn paths(&self) -> impl Iterator<Item = (&'static str, &Path)> {
        [
            ("camera", &self.camera),
            ("pred_mask", &self.pred_mask),
            ("gt_mask", &self.gt_mask),
            ("pred_depth", &self.pred_depth),
            ("gt_depth", &self.gt_depth),
            ("pred_cloud", &self.pred_cloud),
            ("gt_cloud", &self.gt_cloud),
            ("scene_cloud", &self.scene_cloud),
        ]
        .into_iter()
        .filter_map(|(name, p)| p.as_deref().map(|p| (name, p)))
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.localized {
            let required = [
                ("pred_box", self.pred_box.is_some()),
                ("gt_box", self.gt_box.is_some()),
                ("pred_mask", self.pred_mask.is_some()),
                ("gt_mask", self.gt_mask.is_some()),
                ("pred_depth", self.pred_depth.is_some()),
                ("gt_depth", self.gt_depth.is_some()),
                ("dino_similarity", self.dino_similarity.is_some()),
                ("relocation", self.relocation.is_some()),
            ];
            if let Some((name, _)) = required.iter().find(|(_, present)| !present) {
                return Err(format!(
                    "localized object {}/{} is missing field `{name}`",
                    self.item_id, self.object_id
                ));
            }
        }
        if let Some(s) = self.dino_similarity {
            if !(0.0..=1.0).contains(&s) {
                return Err(format!("dino_similarity {s} outside [0, 1]"));
            }
        }
        if let Some(r) = &self.relocation {
            let finite = r.v_pred.iter().chain(r.v_gt.iter()).all(|v| v.is_finite());
            if !finite || !(r.alpha >= 0.0 && r.beta >= 0.0 && r.epsilon > 0.0) {
                return Err("relocation needs finite vectors and non-negative weights".into());
            }
        }
        Ok(())
    }
}

/// A parsed evaluation manifest.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub base_dir: PathBuf,
    pub records: Vec<ManifestRecord>,
    lines: Vec<usize>,
}

impl Manifest {
    /// Parses and validates manifest text without touching referenced files.
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let parsed: Vec<(usize, ManifestRecord)> = parse_lines(text)?;
        let mut seen = HashSet::new();
        for (line, r) in &parsed {
            r.validate().map_err(|message| Error::Manifest {
                line: *line,
                message,
            })?;
            if !seen.insert((r.item_id.as_str(), r.object_id.as_str())) {
                return Err(Error::Manifest {
                    line: *line,
                    message: format!("duplicate object {}/{}", r.item_id, r.object_id),
                });
            }
        }
        let (lines, records) = parsed.into_iter().unzip();
        Ok(Self {
            base_dir: base_dir.into(),
            records,
            lines,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        self.base_dir.join(p)
    }

    /// Fails on the first referenced file that does not exist.
    pub fn check_files(&self) -> Result<()> {
        for (r, &line) in self.records.iter().zip(&self.lines) {
            for (name, p) in r.paths() {
                let full = self.resolve(p);
                if !full.is_file() {
                    return Err(Error::Manifest {
                        line,
                        message: format!("`{name}` file not found: {}", full.display()),
                    });
                }
            }
        }
        Ok(())
    }

    /// Reads every referenced file and builds evaluation inputs in manifest
    /// order.
    pub fn load_inputs(&self) -> Result<Vec<ObjectEvalInput>> {
        self.records
            .par_iter()
            .zip(self.lines.par_iter())
            .map(|(r, &line)| self.load_record(r).map_err(at_line(line)))
            .collect()
    }

    fn load_record(&self, r: &ManifestRecord) -> Result<ObjectEvalInput> {
        let localized = if r.localized {
            Some(self.load_localized(r)?)
        } else {
            None
        };
        Ok(ObjectEvalInput {
            item_id: r.item_id.clone(),
            object_id: r.object_id.clone(),
            localized,
            deqa: r.deqa,
            phys_vlm: r.phys_vlm,
        })
    }

    fn load_localized(&self, r: &ManifestRecord) -> Result<LocalizedObject> {
        // validate() guarantees the required fields
        let path = |p: &Option<PathBuf>| self.resolve(p.as_deref().expect("validated"));
        let pred_mask = read_mask(path(&r.pred_mask))?;
        let gt_mask = read_mask(path(&r.gt_mask))?;
        let pred_depth = read_depth(path(&r.pred_depth))?;
        let gt_depth = read_depth(path(&r.gt_depth))?;
        let camera = match &r.camera {
            Some(p) => read_camera(self.resolve(p))?,
            None => CameraModel::default_for(gt_depth.width(), gt_depth.height())?,
        };
        let region_cloud = |cloud: &Option<PathBuf>, mask, depth| match cloud {
            Some(p) => read_ply(self.resolve(p)),
            None => unproject_region(None, mask, depth, &camera.intrinsics, &camera.pose),
        };
        let id = format!("{}/{}", r.item_id, r.object_id);
        let pred_cloud = region_cloud(&r.pred_cloud, &pred_mask, &pred_depth)
            .map_err(|e| e.with_object(&format!("{id} (prediction)")))?;
        let gt_cloud = region_cloud(&r.gt_cloud, &gt_mask, &gt_depth)
            .map_err(|e| e.with_object(&format!("{id} (ground truth)")))?;
        let scene_cloud_gt = match &r.scene_cloud {
            Some(p) => read_ply(self.resolve(p))?,
            None => unproject_depth(&gt_depth, &camera)?,
        };
        Ok(LocalizedObject {
            pred_box: r.pred_box.expect("validated"),
            gt_box: r.gt_box.expect("validated"),
            pred_mask,
            gt_mask,
            pred_depth,
            gt_depth,
            pred_cloud,
            gt_cloud,
            scene_cloud_gt,
            dino_similarity: r.dino_similarity.expect("validated"),
            relocation: r.relocation.expect("validated"),
        })
    }
}

/// Reads, validates and checks the files of an evaluation manifest.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let manifest = Manifest::parse(&read_text(path)?, base_dir(path))?;
    manifest.check_files()?;
    Ok(manifest)
}

pub fn encode_manifest(records: &[ManifestRecord]) -> Vec<u8> {
    to_lines(records)
}

pub fn write_manifest(records: &[ManifestRecord], path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_manifest(records))
}

/// One frame of a frames manifest. Paths are resolved on read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameEntry {
    pub clip_id: String,
    pub frame_index: usize,
    pub depth: PathBuf,
    pub mask: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<PathBuf>,
}

impl FrameEntry {
    pub fn load(&self) -> Result<FrameRecord> {
        let depth = read_depth(&self.depth)?;
        let mask = read_mask(&self.mask)?;
        let camera = match &self.camera {
            Some(p) => read_camera(p)?,
            None => CameraModel::default_for(depth.width(), depth.height())?,
        };
        Ok(FrameRecord {
            frame_index: self.frame_index,
            depth,
            mask,
            camera,
        })
    }
}

/// Reads a frames manifest and groups it by clip, frames in index order.
pub fn read_frames_manifest(path: impl AsRef<Path>) -> Result<BTreeMap<String, Vec<FrameEntry>>> {
    let path = path.as_ref();
    let dir = base_dir(path);
    let mut clips: BTreeMap<String, Vec<(usize, FrameEntry)>> = BTreeMap::new();
    for (line, mut e) in parse_lines::<FrameEntry>(&read_text(path)?)? {
        for (name, p) in [("depth", Some(&mut e.depth)), ("mask", Some(&mut e.mask))]
            .into_iter()
            .chain([("camera", e.camera.as_mut()), ("image", e.image.as_mut())])
        {
            if let Some(p) = p {
                *p = dir.join(&*p);
                if !p.is_file() {
                    return Err(Error::Manifest {
                        line,
                        message: format!("`{name}` file not found: {}", p.display()),
                    });
                }
            }
        }
        clips.entry(e.clip_id.clone()).or_default().push((line, e));
    }
    clips
        .into_iter()
        .map(|(id, mut frames)| {
            frames.sort_by_key(|(_, e)| e.frame_index);
            if let Some(w) = frames.windows(2).find(|w| w[0].1.frame_index == w[1].1.frame_index) {
                return Err(Error::Manifest {
                    line: w[1].0,
                    message: format!("duplicate frame {} in clip {id}", w[1].1.frame_index),
                });
            }
            Ok((id, frames.into_iter().map(|(_, e)| e).collect()))
        })
        .collect()
}

/// A selected frame pair with raw and diagonal-normalized motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub clip_id: String,
    pub i: usize,
    pub j: usize,
    pub centroid_i: Vec3,
    pub centroid_j: Vec3,
    pub displacement: f64,
    pub delta: Vec3,
    pub short_clip_rule_used: bool,
    pub scene_diagonal: f64,
    pub normalized_displacement: f64,
    pub normalized_delta: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep: Option<bool>,
}

impl PairRecord {
    pub fn new(clip_id: impl Into<String>, sel: &PairSelection, scene_diagonal: f64) -> Result<Self> {
        let n = sel.normalized(scene_diagonal)?;
        Ok(Self {
            clip_id: clip_id.into(),
            i: sel.i,
            j: sel.j,
            centroid_i: sel.centroid_i,
            centroid_j: sel.centroid_j,
            displacement: sel.displacement,
            delta: sel.delta,
            short_clip_rule_used: sel.short_clip_rule_used,
            scene_diagonal,
            normalized_displacement: n.displacement,
            normalized_delta: n.delta,
            keep: None,
        })
    }

    /// The selection in diagonal-normalized units.
    pub fn normalized_selection(&self) -> PairSelection {
        PairSelection {
            i: self.i,
            j: self.j,
            centroid_i: self.centroid_i / self.scene_diagonal,
            centroid_j: self.centroid_j / self.scene_diagonal,
            displacement: self.normalized_displacement,
            delta: self.normalized_delta,
            short_clip_rule_used: self.short_clip_rule_used,
        }
    }
}

pub fn encode_pairs(records: &[PairRecord]) -> Vec<u8> {
    to_lines(records)
}

pub fn decode_pairs(bytes: &[u8]) -> Result<Vec<PairRecord>> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::format("pairs: not UTF-8"))?;
    Ok(parse_lines(text)?.into_iter().map(|(_, r)| r).collect())
}

pub fn read_pairs(path: impl AsRef<Path>) -> Result<Vec<PairRecord>> {
    decode_pairs(&read_bytes(path.as_ref())?)
}

pub fn write_pairs(records: &[PairRecord], path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_pairs(records))
}
