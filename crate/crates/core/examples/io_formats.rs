//! Writes and reads back every file format the crate understands.

use manip3d::geometry::{BinaryMask, CameraModel, DepthMap, Image, PointCloud, Vec3};
use manip3d::io::*;
use manip3d::pipeline::CameraTokenSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("manip3d_io_formats");
    std::fs::create_dir_all(&dir)?;
    let size = |p: &std::path::Path| std::fs::metadata(p).map(|m| m.len()).unwrap_or(0);

    let depth = DepthMap::from_fn(32, 24, |x, y| if x == y { f32::NAN } else { 1.0 + x as f32 / 8.0 })?;
    let p = dir.join("depth.pfm");
    write_depth(&depth, &p)?;
    let back = read_depth(&p)?;
    let same = depth.values().iter().zip(back.values()).all(|(a, b)| a.to_bits() == b.to_bits());
    println!("pfm     {:>6} bytes, bit-exact {same}", size(&p));

    let mask = BinaryMask::from_fn(32, 24, |x, y| (x / 4 + y / 4) % 2 == 0)?;
    let p = dir.join("mask.pgm");
    write_mask(&mask, &p)?;
    println!("pgm     {:>6} bytes, equal {}", size(&p), read_mask(&p)? == mask);

    let image = Image::from_fn(32, 24, |x, y| [(x * 8) as u8, (y * 10) as u8, 128])?;
    let p = dir.join("image.png");
    write_image(&image, &p)?;
    println!("png     {:>6} bytes, equal {}", size(&p), read_image(&p)? == image);

    let camera = CameraModel::default_for(32, 24)?;
    let p = dir.join("camera.json");
    write_camera(&camera, &p)?;
    println!("camera  {:>6} bytes, equal {}", size(&p), read_camera(&p)? == camera);

    let tokens = CameraTokenSet::new(3, 4, (0..12).map(|v| v as f32 * 0.25).collect())?;
    let p = dir.join("tokens.ctok");
    write_tokens(&tokens, &p)?;
    println!("ctok    {:>6} bytes, equal {}", size(&p), read_tokens(&p)? == tokens);

    let cloud = PointCloud::with_colors(
        vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.5, -0.25, 2.0)],
        vec![[255, 0, 0], [0, 0, 255]],
    )?;
    let p = dir.join("cloud.ply");
    write_ply(&cloud, &p)?;
    println!("ply     {:>6} bytes, equal {}", size(&p), read_ply(&p)? == cloud);

    // a truncated depth file is rejected with the offending offset
    let bytes = encode_depth(&depth);
    if let Err(e) = decode_depth(&bytes[..bytes.len() - 7]) {
        println!("\ntruncated pfm: {e}");
    }
    Ok(())
}
