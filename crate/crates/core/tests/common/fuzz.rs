//! Random file contents for every format, round-trip checks and corruption
//! checks. Each check returns a description of the first violation.

use manip3d::geometry::{BinaryMask, CameraIntrinsics, CameraModel, CameraPose, DepthMap, Image, PointCloud, Vec3};
use manip3d::io::*;
use manip3d::metrics::{BoundingBox, DistancePenalties, MetricSet, MetricValue, NormalizationSpec, RelocationPair};
use manip3d::pipeline::{CameraTokenSet, PairSelection};
use rand::Rng;

pub const FORMATS: [&str; 9] = ["pfm", "pgm", "png", "camera", "tokens", "ply", "manifest", "report", "pairs"];

fn any_f32(rng: &mut impl Rng) -> f32 {
    match rng.random_range(0..4) {
        0 => f32::from_bits(rng.random()),
        1 => rng.random_range(0.0..100.0),
        2 => [0.0, -0.0, f32::INFINITY, f32::NAN, f32::MIN_POSITIVE][rng.random_range(0..5)],
        _ => rng.random_range(-1e6..1e6),
    }
}

fn finite_f32(rng: &mut impl Rng) -> f32 {
    loop {
        let v = any_f32(rng);
        if v.is_finite() {
            return v;
        }
    }
}

fn any_f64(rng: &mut impl Rng) -> f64 {
    match rng.random_range(0..3) {
        0 => loop {
            let v = f64::from_bits(rng.random());
            if v.is_finite() {
                break v;
            }
        },
        1 => rng.random_range(-1.0..1.0),
        _ => rng.random_range(-1e9..1e9),
    }
}

fn dims(rng: &mut impl Rng) -> (usize, usize) {
    (rng.random_range(1..24), rng.random_range(1..24))
}

pub fn random_depth(rng: &mut impl Rng) -> DepthMap {
    let (w, h) = dims(rng);
    DepthMap::new(w, h, (0..w * h).map(|_| any_f32(rng)).collect()).unwrap()
}

pub fn random_mask(rng: &mut impl Rng) -> BinaryMask {
    let (w, h) = dims(rng);
    let p = rng.random_range(0.0..1.0);
    BinaryMask::new(w, h, (0..w * h).map(|_| rng.random_bool(p)).collect()).unwrap()
}

pub fn random_image(rng: &mut impl Rng) -> Image {
    let (w, h) = dims(rng);
    Image::new(w, h, (0..w * h).map(|_| rng.random()).collect()).unwrap()
}

pub fn random_camera_model(rng: &mut impl Rng) -> CameraModel {
    let cam = super::random_camera(rng);
    let i = cam.intrinsics;
    let intr = CameraIntrinsics::new(
        i.fx * rng.random_range(0.5..2.0),
        i.fy,
        i.cx,
        i.cy,
        i.width,
        i.height,
    )
    .unwrap();
    let t = Vec3::new(any_f64(rng), any_f64(rng), any_f64(rng));
    CameraModel::new(intr, CameraPose::new(*cam.pose.rotation(), t).unwrap())
}

pub fn random_tokens(rng: &mut impl Rng) -> CameraTokenSet {
    let (n, d) = (rng.random_range(1..40), rng.random_range(1..16));
    CameraTokenSet::new(n, d, (0..n * d).map(|_| finite_f32(rng)).collect()).unwrap()
}

pub fn random_cloud(rng: &mut impl Rng) -> PointCloud {
    let n = rng.random_range(0..60);
    let points: Vec<Vec3> = (0..n)
        .map(|_| Vec3::new(finite_f32(rng) as f64, finite_f32(rng) as f64, finite_f32(rng) as f64))
        .collect();
    if rng.random_bool(0.5) {
        let colors = (0..n).map(|_| rng.random()).collect();
        PointCloud::with_colors(points, colors).unwrap()
    } else {
        PointCloud::new(points)
    }
}

fn random_id(rng: &mut impl Rng) -> String {
    let len = rng.random_range(1..12);
    (0..len)
        .map(|_| ['a', 'Z', '0', '_', '-', 'é', ' ', '"', '\\', '/'][rng.random_range(0..10)])
        .collect()
}

pub fn random_manifest(rng: &mut impl Rng) -> Vec<ManifestRecord> {
    let n = rng.random_range(0..8);
    (0..n)
        .map(|k| {
            let mut r = ManifestRecord::missing(format!("{}{k}", random_id(rng)), random_id(rng));
            if rng.random_bool(0.6) {
                let x = rng.random_range(0.0..100.0);
                r.localized = true;
                r.pred_box = Some(BoundingBox::new(x, 0.0, x + rng.random_range(0.0..50.0), 10.0).unwrap());
                r.gt_box = Some(BoundingBox::new(0.0, 0.0, 1.0 + any_f64(rng).abs(), 2.0).unwrap());
                r.pred_mask = Some(format!("m/{}.pgm", random_id(rng)).into());
                r.gt_mask = Some("gt.pgm".into());
                r.pred_depth = Some("p.pfm".into());
                r.gt_depth = Some("g.pfm".into());
                r.camera = rng.random_bool(0.5).then(|| "cam.json".into());
                r.dino_similarity = Some(rng.random_range(0.0..=1.0));
                let a = Vec3::new(any_f64(rng), any_f64(rng), any_f64(rng));
                let b = Vec3::new(any_f64(rng), any_f64(rng), any_f64(rng));
                r.relocation = Some(RelocationPair::new(a, b));
            }
            r.deqa = rng.random_bool(0.5).then(|| any_f64(rng));
            r.phys_vlm = rng.random_bool(0.5).then(|| any_f64(rng));
            r
        })
        .collect()
}

fn random_metric_set(rng: &mut impl Rng) -> MetricSet<MetricValue> {
    MetricSet::from_fn(|_| MetricValue {
        raw: any_f64(rng),
        normalized: rng.random_range(0.0..=100.0),
        penalty_applied: rng.random_bool(0.3),
    })
}

pub fn random_report(rng: &mut impl Rng) -> Vec<ReportRecord> {
    let n = rng.random_range(0..6);
    let norm = NormalizationSpec::standard();
    let mut out: Vec<ReportRecord> = (0..n)
        .map(|_| {
            ReportRecord::Object(ObjectReport {
                item_id: random_id(rng),
                object_id: random_id(rng),
                localized: rng.random(),
                metrics: random_metric_set(rng),
                deqa: rng.random_bool(0.5).then(|| any_f64(rng)),
                phys_vlm: rng.random_bool(0.5).then(|| any_f64(rng)),
                normalization: norm,
            })
        })
        .collect();
    out.push(ReportRecord::Summary(SummaryReport {
        count: n,
        localized_count: rng.random_range(0..=n),
        metrics: random_metric_set(rng),
        deqa: rng.random_bool(0.5).then(|| any_f64(rng)),
        phys_vlm: None,
        penalties: rng.random_bool(0.5).then(|| DistancePenalties {
            absrel: any_f64(rng).abs(),
            chamfer: any_f64(rng).abs(),
            centroid: any_f64(rng).abs(),
            from_fallback: rng.random(),
        }),
        normalization: norm,
    }));
    out
}

pub fn random_pairs(rng: &mut impl Rng) -> Vec<PairRecord> {
    let n = rng.random_range(0..6);
    (0..n)
        .map(|_| {
            let mut c = || rng.random_range(-1e9..1e9);
            let ci = Vec3::new(c(), c(), c());
            let cj = Vec3::new(rng.random(), rng.random(), rng.random());
            let sel = PairSelection {
                i: rng.random_range(0..100),
                j: rng.random_range(100..200),
                centroid_i: ci,
                centroid_j: cj,
                displacement: (cj - ci).norm(),
                delta: cj - ci,
                short_clip_rule_used: rng.random(),
            };
            let mut r = PairRecord::new(random_id(rng), &sel, rng.random_range(0.1..10.0)).unwrap();
            r.keep = [None, Some(true), Some(false)][rng.random_range(0..3)];
            r
        })
        .collect()
}

fn same_bits(a: &DepthMap, b: &DepthMap) -> bool {
    a.width() == b.width()
        && a.height() == b.height()
        && a.values().iter().zip(b.values()).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Writes a random value of `format`, reads it back and compares.
pub fn round_trip_once(format: &str, rng: &mut impl Rng) -> Result<(), String> {
    let fail = |what: &str| Err(format!("{format}: {what}"));
    match format {
        "pfm" => {
            let d = random_depth(rng);
            let back = decode_depth(&encode_depth(&d)).map_err(|e| e.to_string())?;
            if !same_bits(&d, &back) {
                return fail("values differ");
            }
        }
        "pgm" => {
            let m = random_mask(rng);
            if decode_mask(&encode_mask(&m)).map_err(|e| e.to_string())? != m {
                return fail("mask differs");
            }
        }
        "png" => {
            let img = random_image(rng);
            let bytes = encode_image(&img).map_err(|e| e.to_string())?;
            if decode_image(&bytes).map_err(|e| e.to_string())? != img {
                return fail("image differs");
            }
        }
        "camera" => {
            let c = random_camera_model(rng);
            if decode_camera(&encode_camera(&c)).map_err(|e| e.to_string())? != c {
                return fail("camera differs");
            }
        }
        "tokens" => {
            let t = random_tokens(rng);
            if decode_tokens(&encode_tokens(&t)).map_err(|e| e.to_string())? != t {
                return fail("tokens differ");
            }
        }
        "ply" => {
            let c = random_cloud(rng);
            if decode_ply(&encode_ply(&c)).map_err(|e| e.to_string())? != c {
                return fail("cloud differs");
            }
        }
        "manifest" => {
            let records = random_manifest(rng);
            let text = String::from_utf8(encode_manifest(&records)).unwrap();
            let back = Manifest::parse(&text, ".").map_err(|e| e.to_string())?;
            if back.records != records {
                return fail("records differ");
            }
        }
        "report" => {
            let records = random_report(rng);
            if decode_report(&encode_report(&records)).map_err(|e| e.to_string())? != records {
                return fail("records differ");
            }
        }
        "pairs" => {
            let records = random_pairs(rng);
            if decode_pairs(&encode_pairs(&records)).map_err(|e| e.to_string())? != records {
                return fail("records differ");
            }
        }
        other => panic!("unknown format {other}"),
    }
    Ok(())
}

/// Flips bits, truncates, inserts or deletes bytes.
pub fn mutate(bytes: &[u8], rng: &mut impl Rng) -> Vec<u8> {
    let mut b = bytes.to_vec();
    let edits = rng.random_range(1..4);
    for _ in 0..edits {
        if b.is_empty() {
            b.push(rng.random());
            continue;
        }
        let at = if rng.random_bool(0.5) {
            rng.random_range(0..b.len().min(24))
        } else {
            rng.random_range(0..b.len())
        };
        match rng.random_range(0..5) {
            0 => b[at] ^= 1 << rng.random_range(0..8),
            1 => b.truncate(at),
            2 => b.insert(at, rng.random()),
            3 => {
                b.remove(at);
            }
            _ => b[at] = rng.random(),
        }
    }
    b
}

/// Header lines of a PFM or PLY-style text prefix.
fn text_lines(bytes: &[u8], n: usize) -> Option<(Vec<String>, usize)> {
    let mut pos = 0;
    let mut lines = Vec::new();
    for _ in 0..n {
        let end = bytes[pos..].iter().position(|&c| c == b'\n')?;
        lines.push(String::from_utf8(bytes[pos..pos + end].to_vec()).ok()?);
        pos += end + 1;
    }
    Some((lines, pos))
}

/// Decodes a corrupted encoding of a random value. A successful read must
/// agree with what the bytes actually say.
pub fn corruption_once(format: &str, rng: &mut impl Rng) -> Result<(), String> {
    let misread = |what: String| Err(format!("{format}: silent misread: {what}"));
    match format {
        "pfm" => {
            let bad = mutate(&encode_depth(&random_depth(rng)), rng);
            if let Ok(d) = decode_depth(&bad) {
                let Some((lines, header)) = text_lines(&bad, 3) else {
                    return misread("accepted a file without a header".into());
                };
                let payload = &bad[header..];
                let canon = encode_depth(&d);
                let canon_payload = &canon[canon.len() - d.width() * d.height() * 4..];
                if lines[0] != "Pf"
                    || lines[1] != format!("{} {}", d.width(), d.height())
                    || payload != canon_payload
                {
                    return misread(format!("{lines:?}"));
                }
            }
        }
        "pgm" => {
            let bad = mutate(&encode_mask(&random_mask(rng)), rng);
            if let Ok(m) = decode_mask(&bad) {
                let n = m.width() * m.height();
                let tail = &bad[bad.len() - n..];
                let bits: Vec<bool> = tail.iter().map(|&b| b != 0).collect();
                if !bad.starts_with(b"P5") || bits != m.bits() {
                    return misread("payload differs".into());
                }
            }
        }
        "png" => {
            let img = random_image(rng);
            let bad = mutate(&encode_image(&img).unwrap(), rng);
            if let Ok(back) = decode_image(&bad) {
                let again = decode_image(&encode_image(&back).unwrap()).unwrap();
                if again != back {
                    return misread("decode is not stable".into());
                }
            }
        }
        "camera" => {
            let bad = mutate(&encode_camera(&random_camera_model(rng)), rng);
            if let Ok(c) = decode_camera(&bad) {
                let v: serde_json::Value = serde_json::from_slice(&bad).unwrap();
                let num = |k: &str| v.get(k).and_then(|x| x.as_f64());
                let i = c.intrinsics;
                let dims_ok = v["width"].as_u64() == Some(i.width as u64)
                    && v["height"].as_u64() == Some(i.height as u64);
                let intr_ok = match num("fx") {
                    Some(fx) => fx == i.fx && num("fy") == Some(i.fy) && num("cx") == Some(i.cx) && num("cy") == Some(i.cy),
                    None => true,
                };
                if !dims_ok || !intr_ok {
                    return misread(format!("{v}"));
                }
            }
        }
        "tokens" => {
            let bad = mutate(&encode_tokens(&random_tokens(rng)), rng);
            if let Ok(t) = decode_tokens(&bad) {
                if encode_tokens(&t) != bad {
                    return misread("decoded tokens do not re-encode to the input".into());
                }
            }
        }
        "ply" => {
            let bad = mutate(&encode_ply(&random_cloud(rng)), rng);
            if let Ok(c) = decode_ply(&bad) {
                let text = String::from_utf8(bad).unwrap();
                let body: Vec<&str> = text
                    .split("end_header\n")
                    .nth(1)
                    .unwrap_or("")
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .collect();
                if body.len() != c.len() {
                    return misread(format!("{} vertex lines, {} points", body.len(), c.len()));
                }
                for (line, p) in body.iter().zip(c.points()) {
                    let xyz: Vec<f64> = line
                        .split_whitespace()
                        .take(3)
                        .map(|s| s.parse::<f32>().unwrap() as f64)
                        .collect();
                    if xyz != [p.x, p.y, p.z] {
                        return misread(format!("vertex {line:?} read as {p:?}"));
                    }
                }
            }
        }
        "manifest" | "report" | "pairs" => {
            let bytes = match format {
                "manifest" => encode_manifest(&random_manifest(rng)),
                "report" => encode_report(&random_report(rng)),
                _ => encode_pairs(&random_pairs(rng)),
            };
            let bad = mutate(&bytes, rng);
            let Ok(text) = std::str::from_utf8(&bad) else {
                return Ok(());
            };
            // each accepted line must be the JSON the reader reports
            let ok = match format {
                "manifest" => Manifest::parse(text, ".").map(|m| encode_manifest(&m.records)).ok(),
                "report" => decode_report(&bad).map(|r| encode_report(&r)).ok(),
                _ => decode_pairs(&bad).map(|r| encode_pairs(&r)).ok(),
            };
            if let Some(canon) = ok {
                let canon = String::from_utf8(canon).unwrap();
                let originals: Vec<serde_json::Value> = text
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(|l| serde_json::from_str(l).unwrap())
                    .collect();
                let readback: Vec<serde_json::Value> =
                    canon.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
                if originals.len() != readback.len() {
                    return misread("line count differs".into());
                }
            }
        }
        other => panic!("unknown format {other}"),
    }
    Ok(())
}
