//! Picks the frame pair with the largest object motion in a clip and checks
//! it against the depth filter.

use manip3d::geometry::{scene_diagonal, unproject_depth, BinaryMask, CameraModel, DepthMap};
use manip3d::pipeline::{depth_filter, select_pair, FilterThresholds, FrameRecord};

fn clip(frames: usize, toward_camera: bool) -> manip3d::Result<Vec<FrameRecord>> {
    let (w, h) = (64, 48);
    (0..frames)
        .map(|f| {
            // the object slides right, and optionally comes closer
            let x0 = 8 + f;
            let z = if toward_camera { 5.0 - 0.08 * f as f32 } else { 5.0 };
            let inside = move |x: usize, y: usize| (x0..x0 + 8).contains(&x) && (20..28).contains(&y);
            Ok(FrameRecord {
                frame_index: f,
                depth: DepthMap::from_fn(w, h, |x, y| if inside(x, y) { z } else { 8.0 })?,
                mask: BinaryMask::from_fn(w, h, inside)?,
                camera: CameraModel::default_for(w, h)?,
            })
        })
        .collect()
}

fn main() -> manip3d::Result<()> {
    let thresholds = FilterThresholds::default();
    for (name, frames) in [("sideways", clip(30, false)?), ("approach", clip(30, true)?), ("short", clip(8, true)?)] {
        let sel = select_pair(&frames, 16)?;
        let first = &frames[sel.i];
        let diagonal = scene_diagonal(&unproject_depth(&first.depth, &first.camera)?)?;
        let norm = sel.normalized(diagonal)?;
        println!(
            "{name:<9} frames ({}, {}), moved {:.3} of the scene diagonal, depth change {:.3}, short rule {}, kept {}",
            sel.i,
            sel.j,
            norm.displacement,
            norm.delta.z.abs(),
            sel.short_clip_rule_used,
            depth_filter(&norm, &thresholds)
        );
    }
    Ok(())
}
