//! Moves one object of a synthetic scene in 3D and renders the preview.
//!
//! ```text
//! cargo run --example preview_render [out_dir]
//! ```

use manip3d::geometry::{BinaryMask, CameraModel, DepthMap, Image, Vec3};
use manip3d::io::{write_depth, write_image};
use manip3d::preview::{render_preview_full, ErasePolicy, ManipulationRequest, PreviewConfig};

fn main() -> manip3d::Result<()> {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string());
    let (w, h) = (96, 64);

    // a floor that recedes with y, and a box sitting on it
    let in_box = |x: usize, y: usize| (20..36).contains(&x) && (30..46).contains(&y);
    let image = Image::from_fn(w, h, |x, y| {
        if in_box(x, y) {
            [220, 120, 40]
        } else {
            [60 + (y * 2) as u8, 90, 140]
        }
    })?;
    let depth = DepthMap::from_fn(w, h, |x, y| {
        if in_box(x, y) {
            2.0
        } else {
            6.0 - 3.0 * y as f32 / h as f32
        }
    })?;
    let camera = CameraModel::default_for(w, h)?;
    let mask = BinaryMask::from_fn(w, h, in_box)?;

    let request = ManipulationRequest {
        object_id: "box".into(),
        mask,
        // half a unit to the right, slightly closer to the camera
        delta: Vec3::new(0.5, 0.0, -0.3),
    };
    let config = PreviewConfig {
        erase_policy: ErasePolicy::FillBackgroundEstimate,
        ..PreviewConfig::default()
    };
    let preview = render_preview_full(&image, &depth, &camera, &[request], &config)?;

    let changed = image.pixels().iter().zip(preview.image.pixels()).filter(|(a, b)| a != b).count();
    println!("{changed} of {} pixels changed", w * h);
    for (id, cloud) in &preview.clouds {
        println!("{id}: {} points after the move", cloud.len());
    }

    let png = std::path::Path::new(&out_dir).join("preview.png");
    write_image(&preview.image, &png)?;
    write_depth(&preview.depth.to_depth_map(), png.with_extension("pfm"))?;
    println!("wrote {}", png.display());
    Ok(())
}
