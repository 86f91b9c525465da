#![allow(dead_code)]

pub mod fuzz;

use std::path::{Path, PathBuf};

use manip3d::geometry::{BinaryMask, CameraIntrinsics, CameraModel, CameraPose, DepthMap, Image, Vec3};
use manip3d::io::{write_depth, write_manifest, write_mask, ManifestRecord};
use manip3d::metrics::{BoundingBox, RelocationPair};
use manip3d::preview::ManipulationRequest;
use nalgebra::{Quaternion, UnitQuaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rotation(rng: &mut impl Rng) -> nalgebra::Matrix3<f64> {
    let q = Quaternion::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    let q = if q.norm() < 1e-3 { Quaternion::identity() } else { q };
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

pub fn random_camera(rng: &mut impl Rng) -> CameraModel {
    let w = rng.random_range(16..1024);
    let h = rng.random_range(16..1024);
    let intr = CameraIntrinsics::new(
        rng.random_range(50.0..2000.0),
        rng.random_range(50.0..2000.0),
        rng.random_range(0.0..w as f64),
        rng.random_range(0.0..h as f64),
        w,
        h,
    )
    .unwrap();
    let t = Vec3::new(
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
    );
    CameraModel::new(intr, CameraPose::new(random_rotation(rng), t).unwrap())
}

/// Pixel-space bounding box of a mask, as `[x_min, y_min, x_max + 1, y_max + 1]`.
pub fn mask_box(mask: &BinaryMask) -> BoundingBox {
    let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x + 1);
                y1 = y1.max(y + 1);
            }
        }
    }
    BoundingBox::new(x0 as f64, y0 as f64, x1 as f64, y1 as f64).unwrap()
}

pub fn square_mask(w: usize, h: usize, x0: usize, y0: usize, side: usize) -> BinaryMask {
    BinaryMask::from_fn(w, h, |x, y| {
        (x0..x0 + side).contains(&x) && (y0..y0 + side).contains(&y)
    })
    .unwrap()
}

/// Writes a synthetic evaluation set and returns the manifest path.
///
/// Every item has a `size`×`size` ground-truth depth with a `side`×`side`
/// object. Predictions are perturbed copies. Items whose index is in
/// `missing` are recorded as not localized.
pub fn write_eval_fixture(
    dir: &Path,
    items: usize,
    size: usize,
    side: usize,
    missing: &[usize],
    seed: u64,
) -> PathBuf {
    let mut rng = rng(seed);
    let mut records = Vec::with_capacity(items);
    for k in 0..items {
        let item = format!("item{k:04}");
        if missing.contains(&k) {
            let mut r = ManifestRecord::missing(&item, "obj");
            r.deqa = Some(rng.random_range(1.0..5.0));
            records.push(r);
            continue;
        }
        let (a, b) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
        let gt_depth = DepthMap::from_fn(size, size, |x, y| {
            (3.0 + 0.5 * (a * x as f64 / size as f64 * 6.0).sin()
                + 0.3 * (b * y as f64 / size as f64 * 6.0).cos()) as f32
        })
        .unwrap();
        let noise = rng.random_range(0.0..0.2);
        let pred_depth = DepthMap::from_fn(size, size, |x, y| {
            let g = gt_depth.get(x, y) as f64;
            (g * (1.0 + noise * ((x * 7 + y * 13) % 17) as f64 / 17.0)) as f32
        })
        .unwrap();
        let x0 = rng.random_range(0..size - side);
        let y0 = rng.random_range(0..size - side);
        let gt_mask = square_mask(size, size, x0, y0, side);
        let dx = rng.random_range(0..(size - side - x0).min(8) + 1);
        let pred_mask = square_mask(size, size, x0 + dx, y0, side);

        let name = |s: &str| format!("{item}_{s}");
        write_depth(&gt_depth, dir.join(name("gt.pfm"))).unwrap();
        write_depth(&pred_depth, dir.join(name("pred.pfm"))).unwrap();
        write_mask(&gt_mask, dir.join(name("gt.pgm"))).unwrap();
        write_mask(&pred_mask, dir.join(name("pred.pgm"))).unwrap();

        let v_gt = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 0.5);
        let v_pred = v_gt + Vec3::new(rng.random_range(-0.3..0.3), 0.0, rng.random_range(-0.3..0.3));
        records.push(ManifestRecord {
            pred_box: Some(mask_box(&pred_mask)),
            gt_box: Some(mask_box(&gt_mask)),
            pred_mask: Some(name("pred.pgm").into()),
            gt_mask: Some(name("gt.pgm").into()),
            pred_depth: Some(name("pred.pfm").into()),
            gt_depth: Some(name("gt.pfm").into()),
            dino_similarity: Some(rng.random_range(0.3..1.0)),
            relocation: Some(RelocationPair::new(v_pred, v_gt)),
            deqa: Some(rng.random_range(1.0..5.0)),
            phys_vlm: Some(rng.random_range(0.0..1.0)),
            localized: true,
            ..ManifestRecord::missing(&item, "obj")
        });
    }
    let path = dir.join("manifest.jsonl");
    write_manifest(&records, &path).unwrap();
    path
}

pub fn run_cli(args: &[&str]) -> i32 {
    manip3d::cli::run_from(std::iter::once("manip3d").chain(args.iter().copied()))
}

/// One object for [`reference_render`]: id, mask and translation.
pub struct RefRequest<'a> {
    pub id: &'a str,
    pub mask: &'a BinaryMask,
    pub delta: Vec3,
}

/// Pixel-enumeration reference for the preview renderer with a flat erase
/// color. For every output pixel it scans all moved points and keeps the
/// nearest one (then the lowest index) whose square footprint covers the
/// pixel and which is in front of the initial depth by more than `eps`.
/// Returns the image and, per pixel, the winning depth if any.
pub fn reference_render(
    src: &manip3d::geometry::Image,
    depth: &DepthMap,
    cam: &CameraModel,
    requests: &[RefRequest],
    radius: i64,
    eps: f64,
    fill: [u8; 3],
) -> (manip3d::geometry::Image, Vec<Option<f64>>) {
    let (w, h) = (src.width(), src.height());
    let i = &cam.intrinsics;
    let r = cam.pose.rotation();
    let t = cam.pose.translation();

    let mut order: Vec<&RefRequest> = requests.iter().collect();
    order.sort_by_key(|q| (q.id, (0..w * h).find(|&k| q.mask.bits()[k])));

    let mut erased = vec![false; w * h];
    // (pixel x, pixel y, depth, color)
    let mut points: Vec<(i64, i64, f64, [u8; 3])> = Vec::new();
    for q in &order {
        for y in 0..h {
            for x in 0..w {
                if !q.mask.get(x, y) {
                    continue;
                }
                erased[y * w + x] = true;
                let d = depth.get(x, y);
                if !(d.is_finite() && d > 0.0) {
                    continue;
                }
                let d = d as f64;
                let pc = Vec3::new((x as f64 - i.cx) / i.fx * d, (y as f64 - i.cy) / i.fy * d, d);
                let world = r.transpose() * (pc - t);
                let moved = r * (world + q.delta) + t;
                if moved.z <= 0.0 {
                    continue;
                }
                let u = i.fx * moved.x / moved.z + i.cx;
                let v = i.fy * moved.y / moved.z + i.cy;
                let (px, py) = ((u + 0.5).floor(), (v + 0.5).floor());
                if px < 0.0 || py < 0.0 || px >= w as f64 || py >= h as f64 {
                    continue;
                }
                points.push((px as i64, py as i64, moved.z, src.get(x, y)));
            }
        }
    }

    let mut out = src.clone();
    let mut won = vec![None; w * h];
    for y in 0..h {
        for x in 0..w {
            let k = y * w + x;
            let d = depth.get(x, y);
            let z0 = if erased[k] || !(d.is_finite() && d > 0.0) {
                f64::INFINITY
            } else {
                d as f64
            };
            if erased[k] {
                out.set(x, y, fill);
            }
            let mut best: Option<(f64, usize)> = None;
            for (idx, p) in points.iter().enumerate() {
                let covers = (p.0 - x as i64).abs() <= radius && (p.1 - y as i64).abs() <= radius;
                if covers && p.2 < z0 - eps && best.is_none_or(|(bz, _)| p.2 < bz) {
                    best = Some((p.2, idx));
                }
            }
            if let Some((z, idx)) = best {
                out.set(x, y, points[idx].3);
                won[k] = Some(z);
            }
        }
    }
    (out, won)
}

/// DBSCAN by union-find: core points within `eps` of each other share a
/// cluster, clusters are numbered by their smallest core index, and a border
/// point takes the smallest-numbered cluster among its core neighbors.
pub fn dbscan_reference(rows: &[Vec<f32>], eps: f64, min_samples: usize) -> Vec<i64> {
    let n = rows.len();
    let near = |a: usize, b: usize| {
        let d2: f64 = rows[a]
            .iter()
            .zip(&rows[b])
            .map(|(x, y)| {
                let d = *x as f64 - *y as f64;
                d * d
            })
            .sum();
        d2 <= eps * eps
    };
    let core: Vec<bool> = (0..n)
        .map(|a| (0..n).filter(|&b| near(a, b)).count() >= min_samples)
        .collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for a in 0..n {
        for b in a + 1..n {
            if core[a] && core[b] && near(a, b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut label_of_root = std::collections::HashMap::new();
    let mut labels = vec![-1i64; n];
    for a in 0..n {
        if core[a] {
            let root = find(&mut parent, a);
            let next = label_of_root.len() as i64;
            labels[a] = *label_of_root.entry(root).or_insert(next);
        }
    }
    for a in 0..n {
        if !core[a] {
            labels[a] = (0..n)
                .filter(|&b| core[b] && near(a, b))
                .map(|b| labels[b])
                .min()
                .unwrap_or(-1);
        }
    }
    labels
}

/// Renumbers labels by first appearance, keeping -1.
pub fn canonical_labels(labels: &[i64]) -> Vec<i64> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            if l < 0 {
                -1
            } else {
                let next = map.len() as i64;
                *map.entry(l).or_insert(next)
            }
        })
        .collect()
}

/// Coordinate-wise median by full sort.
pub fn median_reference(points: &[Vec3]) -> Vec3 {
    let axis = |k: usize| {
        let mut v: Vec<f64> = points.iter().map(|p| p[k]).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        }
    };
    Vec3::new(axis(0), axis(1), axis(2))
}

/// The `(i, j)` positions, `i < j`, with the largest distance; the first
/// such pair in lexicographic order.
pub fn best_pair_reference(coords: &[Vec3]) -> (usize, usize, f64) {
    let mut best = (0, 1, -1.0);
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let d = (coords[j] - coords[i]).norm();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

/// Symmetric Chamfer distance by exhaustive search.
pub fn chamfer_reference(a: &[Vec3], b: &[Vec3], diagonal: f64) -> f64 {
    let one_way = |from: &[Vec3], to: &[Vec3]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| ((p - q) / diagonal).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / from.len() as f64
    };
    one_way(a, b) + one_way(b, a)
}

/// Linear-interpolation quantile on a sorted copy.
pub fn quantile_reference(values: &[f64], q: f64) -> f64 {
    let mut s = values.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = (s.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(s.len() - 1);
    s[lo] + (h - lo as f64) * (s[hi] - s[lo])
}

pub const RED: [u8; 3] = [200, 30, 30];
pub const GREEN: [u8; 3] = [30, 200, 30];
pub const BLUE: [u8; 3] = [30, 30, 200];

/// 8x8 scene: blue background at depth 4 on the left, a green wall at depth
/// 2 on the right half, and a red object at depth 1 on columns 1-2, rows 3-4.
pub fn wall_scene() -> (Image, DepthMap, CameraModel, BinaryMask) {
    let object = |x: usize, y: usize| (1..=2).contains(&x) && (3..=4).contains(&y);
    let src = Image::from_fn(8, 8, |x, y| {
        if object(x, y) {
            RED
        } else if x >= 4 {
            GREEN
        } else {
            BLUE
        }
    })
    .unwrap();
    let depth = DepthMap::from_fn(8, 8, |x, y| {
        if object(x, y) {
            1.0
        } else if x >= 4 {
            2.0
        } else {
            4.0
        }
    })
    .unwrap();
    let cam = CameraModel::new(
        CameraIntrinsics::new(8.0, 8.0, 3.5, 3.5, 8, 8).unwrap(),
        CameraPose::identity(),
    );
    let mask = BinaryMask::from_fn(8, 8, object).unwrap();
    (src, depth, cam, mask)
}

pub fn random_scene(seed: u64) -> (Image, DepthMap, CameraModel, Vec<ManipulationRequest>) {
    let mut rng = rng(seed);
    let (w, h) = (rng.random_range(4..14), rng.random_range(4..14));
    let src = Image::from_fn(w, h, |x, y| [(x * 17) as u8, (y * 23) as u8, ((x * y) % 251) as u8]).unwrap();
    let depth = DepthMap::from_fn(w, h, |x, y| {
        if (x * 3 + y) % 11 == 0 {
            0.0
        } else {
            1.0 + ((x * 5 + y * 7) % 9) as f32 * 0.25
        }
    })
    .unwrap();
    let cam = CameraModel::default_for(w, h).unwrap();
    let n = rng.random_range(1..4);
    let labels: Vec<usize> = (0..w * h).map(|_| rng.random_range(0..n + 2)).collect();
    let reqs = (0..n)
        .filter_map(|k| {
            let mask = BinaryMask::new(w, h, labels.iter().map(|&l| l == k).collect()).unwrap();
            let has_valid = (0..w * h).any(|i| mask.bits()[i] && depth.values()[i] > 0.0);
            has_valid.then(|| ManipulationRequest {
                object_id: format!("obj{}", n - k),
                mask,
                delta: Vec3::new(
                    rng.random_range(-0.5..0.5),
                    rng.random_range(-0.5..0.5),
                    rng.random_range(-0.5..0.5),
                ),
            })
        })
        .collect();
    (src, depth, cam, reqs)
}


/// `max(q(q_hi), multiplier * q(q_mid))` by sorted-array interpolation.
pub fn penalty_reference(values: &[f64], q_hi: f64, q_mid: f64, multiplier: f64) -> f64 {
    quantile_reference(values, q_hi).max(multiplier * quantile_reference(values, q_mid))
}
