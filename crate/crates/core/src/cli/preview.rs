use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::cli::{dry_run_note, CmdResult, Ctx, Failure};
use crate::error::{Error, Result};
use crate::geometry::{CameraModel, Vec3};
use crate::io::manifest::parse_lines;
use crate::io::ply::encode_ply;
use crate::io::{encode_depth, encode_image, read_camera, read_depth, read_image, read_mask};
use crate::preview::{render_preview_full, ErasePolicy, ManipulationRequest};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EraseArg {
    Leave,
    FillBackground,
    FillFlat,
}

#[derive(Debug, Args)]
pub struct PreviewArgs {
    /// Source image (PNG).
    #[arg(long)]
    pub image: PathBuf,
    /// Scene depth (PFM).
    #[arg(long)]
    pub depth: PathBuf,
    /// Camera JSON; defaults to the standard pinhole for the image size.
    #[arg(long)]
    pub camera: Option<PathBuf>,
    /// JSON lines of `{"object_id"?, "mask", "delta": [x, y, z]}`; mask paths
    /// are relative to this file.
    #[arg(long)]
    pub requests: PathBuf,
    /// Output preview (PNG).
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also write the final depth buffer (PFM).
    #[arg(long)]
    pub depth_output: Option<PathBuf>,
    /// Also write each translated cloud as `<dir>/<object_id>.ply`.
    #[arg(long)]
    pub ply_dir: Option<PathBuf>,
    #[arg(long)]
    pub splat_radius: Option<u32>,
    #[arg(long, value_enum)]
    pub erase: Option<EraseArg>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestLine {
    object_id: Option<String>,
    mask: PathBuf,
    delta: [f64; 3],
}

fn read_requests(path: &Path) -> Result<Vec<ManipulationRequest>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let dir = path.parent().unwrap_or(Path::new(""));
    parse_lines::<RequestLine>(&text)?
        .into_iter()
        .map(|(line, r)| {
            if !r.delta.iter().all(|v| v.is_finite()) {
                return Err(Error::Manifest {
                    line,
                    message: "delta must be finite".into(),
                });
            }
            let mask_path = dir.join(&r.mask);
            Ok(ManipulationRequest {
                object_id: r.object_id.unwrap_or_else(|| r.mask.display().to_string()),
                mask: read_mask(&mask_path)?,
                delta: Vec3::from(r.delta),
            })
        })
        .collect()
}

pub fn run(ctx: &mut Ctx, args: PreviewArgs) -> CmdResult {
    let cfg = &mut ctx.config.preview;
    if let Some(r) = args.splat_radius {
        cfg.splat_radius = r;
    }
    match args.erase {
        Some(EraseArg::Leave) => cfg.erase_policy = ErasePolicy::Leave,
        Some(EraseArg::FillBackground) => cfg.erase_policy = ErasePolicy::FillBackgroundEstimate,
        Some(EraseArg::FillFlat) => cfg.erase_policy = ErasePolicy::FillFlatColor(cfg.background_color),
        None => {}
    }
    ctx.config.validate().map_err(Failure::config)?;

    let src = read_image(&args.image)?;
    let depth = read_depth(&args.depth)?;
    let camera = match &args.camera {
        Some(p) => read_camera(p)?,
        None => CameraModel::default_for(src.width(), src.height())?,
    };
    let requests = read_requests(&args.requests)?;
    let preview = render_preview_full(&src, &depth, &camera, &requests, &ctx.config.preview)?;

    dry_run_note(
        ctx,
        "preview",
        serde_json::json!({"objects": requests.len(), "width": src.width(), "height": src.height()}),
    );
    if ctx.dry_run {
        return Ok(());
    }
    write(&args.output, &encode_image(&preview.image)?)?;
    if let Some(p) = &args.depth_output {
        write(p, &encode_depth(&preview.depth.to_depth_map()))?;
    }
    if let Some(dir) = &args.ply_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (id, cloud) in &preview.clouds {
            let name: String = id
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
                .collect();
            write(&dir.join(format!("{name}.ply")), &encode_ply(cloud))?;
        }
    }
    Ok(())
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
