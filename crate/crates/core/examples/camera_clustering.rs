//! Splits a synthetic video into static-camera clips by clustering its
//! per-frame camera tokens.

use manip3d::pipeline::{dbscan, static_clips, CameraTokenSet, DbscanParams};
use rand::{Rng, SeedableRng};

fn main() -> manip3d::Result<()> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    let dim = 8;
    // three camera positions, with a fast pan between the first two
    let shots: [(usize, f32); 3] = [(30, 0.0), (25, 4.0), (40, -3.0)];
    let mut vectors = Vec::new();
    for (k, &(len, base)) in shots.iter().enumerate() {
        for _ in 0..len {
            vectors.extend((0..dim).map(|d| base + d as f32 * 0.1 + rng.random_range(-0.05..0.05)));
        }
        if k == 0 {
            for t in 0..6 {
                vectors.extend((0..dim).map(|d| t as f32 * 0.7 + d as f32 * 0.1));
            }
        }
    }
    let count = vectors.len() / dim;
    let tokens = CameraTokenSet::new(count, dim, vectors)?;

    let assignment = dbscan(&tokens, &DbscanParams { eps: 0.5, min_samples: 4 })?;
    println!("{count} frames, {} clusters", assignment.cluster_count());
    let noise = assignment.labels.iter().filter(|&&l| l < 0).count();
    println!("{noise} frames marked as noise");
    for clip in static_clips(&assignment, 10) {
        println!("cluster {}: frames {}..={} ({} frames)", clip.cluster, clip.start, clip.end, clip.len());
    }
    Ok(())
}
