use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;

use crate::cli::{dry_run_note, emit, CmdResult, Ctx, Failure};
use crate::error::Result;
use crate::geometry::{scene_diagonal, unproject_depth};
use crate::io::manifest::to_lines;
use crate::io::{read_frames_manifest, read_pairs, read_tokens, FrameEntry, PairRecord};
use crate::pipeline::{dbscan, depth_filter, select_pair, static_clips};

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Camera tokens (`CTOK` file).
    #[arg(long)]
    pub tokens: PathBuf,
    /// Clip ranges as JSON lines; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write the per-frame labels (`-1` = noise) as a JSON array.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub min_samples: Option<usize>,
    /// Shortest run of one cluster kept as a clip.
    #[arg(long)]
    pub min_run: Option<usize>,
    /// L2-normalize tokens before clustering.
    #[arg(long)]
    pub normalize_tokens: bool,
}

pub fn run_cluster(ctx: &mut Ctx, args: ClusterArgs) -> CmdResult {
    let cfg = &mut ctx.config.cluster;
    if let Some(e) = args.eps {
        cfg.dbscan.eps = e;
    }
    if let Some(m) = args.min_samples {
        cfg.dbscan.min_samples = m;
    }
    if let Some(r) = args.min_run {
        cfg.min_run = r;
    }
    cfg.normalize_tokens |= args.normalize_tokens;
    ctx.config.validate().map_err(Failure::config)?;
    let cfg = &ctx.config.cluster;

    let mut tokens = read_tokens(&args.tokens)?;
    if cfg.normalize_tokens {
        tokens = tokens.l2_normalized();
    }
    let assignment = dbscan(&tokens, &cfg.dbscan)?;
    let clips = static_clips(&assignment, cfg.min_run);

    dry_run_note(
        ctx,
        "cluster",
        serde_json::json!({"tokens": tokens.count(), "clusters": assignment.cluster_count(), "clips": clips.len()}),
    );
    if let Some(p) = &args.labels {
        let mut bytes = serde_json::to_vec(&assignment.labels).expect("labels serialize");
        bytes.push(b'\n');
        emit(ctx, Some(p), &bytes)?;
    }
    emit(ctx, args.output.as_deref(), &to_lines(&clips))
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Frames manifest (JSON lines of clip_id, frame_index, depth, mask, camera?).
    #[arg(long)]
    pub frames: PathBuf,
    /// Pair records as JSON lines; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Clips with at most this many frames use their first and last frame.
    #[arg(long)]
    pub short_clip_threshold: Option<usize>,
}

fn select_clip(id: &str, entries: &[FrameEntry], threshold: usize) -> Result<PairRecord> {
    let frames = entries
        .iter()
        .map(FrameEntry::load)
        .collect::<Result<Vec<_>>>()?;
    let sel = select_pair(&frames, threshold).map_err(|e| e.with_object(&format!("clip {id}")))?;
    let first = frames
        .iter()
        .find(|f| f.frame_index == sel.i)
        .expect("selected frame exists");
    let diagonal = scene_diagonal(&unproject_depth(&first.depth, &first.camera)?)?;
    PairRecord::new(id, &sel, diagonal)
}

pub fn run_select(ctx: &mut Ctx, args: SelectArgs) -> CmdResult {
    if let Some(t) = args.short_clip_threshold {
        ctx.config.select.short_clip_threshold = t;
    }
    ctx.config.validate().map_err(Failure::config)?;
    let threshold = ctx.config.select.short_clip_threshold;

    let clips: Vec<(String, Vec<FrameEntry>)> = read_frames_manifest(&args.frames)?.into_iter().collect();
    let records: Vec<PairRecord> = clips
        .par_iter()
        .map(|(id, entries)| select_clip(id, entries, threshold))
        .collect::<Result<_>>()?;

    dry_run_note(ctx, "select", serde_json::json!({"clips": records.len()}));
    emit(ctx, args.output.as_deref(), &to_lines(&records))
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Pair records from `select`.
    #[arg(long)]
    pub pairs: PathBuf,
    /// Pair records with `keep` set; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Minimum normalized displacement.
    #[arg(long)]
    pub min_total: Option<f64>,
    /// Minimum normalized motion along the depth axis.
    #[arg(long)]
    pub min_depth_axis: Option<f64>,
    /// Write only the pairs that pass.
    #[arg(long)]
    pub kept_only: bool,
}

pub fn run_filter(ctx: &mut Ctx, args: FilterArgs) -> CmdResult {
    let th = &mut ctx.config.filter;
    if let Some(v) = args.min_total {
        th.min_total = v;
    }
    if let Some(v) = args.min_depth_axis {
        th.min_depth_axis = v;
    }
    ctx.config.validate().map_err(Failure::config)?;
    let th = ctx.config.filter;

    let mut records = read_pairs(&args.pairs)?;
    for r in &mut records {
        r.keep = Some(depth_filter(&r.normalized_selection(), &th));
    }
    let kept = records.iter().filter(|r| r.keep == Some(true)).count();
    if args.kept_only {
        records.retain(|r| r.keep == Some(true));
    }
    dry_run_note(ctx, "filter", serde_json::json!({"pairs": records.len(), "kept": kept}));
    emit(ctx, args.output.as_deref(), &to_lines(&records))
}
