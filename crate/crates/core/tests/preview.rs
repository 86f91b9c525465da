mod common;

use common::{random_scene, reference_render, wall_scene, RefRequest, RED};
use manip3d::geometry::{BinaryMask, Vec3};
use manip3d::io::encode_image;
use manip3d::preview::{render_preview, render_preview_full, ErasePolicy, ManipulationRequest, PreviewConfig, ZEpsilon};
use proptest::prelude::*;

const FILL: [u8; 3] = [128, 128, 128];

fn cfg(radius: u32) -> PreviewConfig {
    PreviewConfig {
        splat_radius: radius,
        z_test_epsilon: ZEpsilon::Absolute(1e-6),
        erase_policy: ErasePolicy::FillFlatColor(FILL),
        ..PreviewConfig::default()
    }
}

fn request(id: &str, mask: &BinaryMask, delta: [f64; 3]) -> ManipulationRequest {
    ManipulationRequest {
        object_id: id.into(),
        mask: mask.clone(),
        delta: Vec3::from(delta),
    }
}

#[test]
fn object_pushed_behind_wall_is_hidden() {
    // pixels (1|2, 3|4) at depth 1 move to depth 3 and land on (5, 3) and
    // (5, 4), behind the wall at depth 2
    let (src, depth, cam, mask) = wall_scene();
    let out = render_preview(&src, &depth, &cam, &[request("cup", &mask, [0.875, 0.0, 2.0])], &cfg(0)).unwrap();
    for y in 0..8 {
        for x in 0..8 {
            let expected = if mask.get(x, y) { FILL } else { src.get(x, y) };
            assert_eq!(out.get(x, y), expected, "pixel ({x}, {y})");
        }
    }
}

#[test]
fn object_in_front_of_wall_is_drawn() {
    // delta (0.875, 0, 0.5): depth 1.5 in front of the wall; both columns
    // round onto column 7
    let (src, depth, cam, mask) = wall_scene();
    let p = render_preview_full(&src, &depth, &cam, &[request("cup", &mask, [0.875, 0.0, 0.5])], &cfg(0)).unwrap();
    for y in 0..8 {
        for x in 0..8 {
            let expected = if x == 7 && (y == 3 || y == 4) {
                RED
            } else if mask.get(x, y) {
                FILL
            } else {
                src.get(x, y)
            };
            assert_eq!(p.image.get(x, y), expected, "pixel ({x}, {y})");
        }
    }
    assert_eq!(p.depth.get(7, 3), 1.5);
    assert_eq!(p.depth.get(1, 3), f64::INFINITY);
}

#[test]
fn wall_scenes_match_reference() {
    let (src, depth, cam, mask) = wall_scene();
    for delta in [[0.875, 0.0, 2.0], [0.875, 0.0, 0.5], [0.3, -0.2, 0.1], [0.0; 3]] {
        for radius in 0..3 {
            let out = render_preview(&src, &depth, &cam, &[request("cup", &mask, delta)], &cfg(radius)).unwrap();
            let req = RefRequest { id: "cup", mask: &mask, delta: Vec3::from(delta) };
            let (expected, _) = reference_render(&src, &depth, &cam, &[req], radius as i64, 1e-6, FILL);
            assert_eq!(out, expected, "delta {delta:?} radius {radius}");
        }
    }
}

#[test]
fn nearer_object_occludes_farther() {
    // two objects moved onto the same pixels; the nearer one wins
    let (src, depth, cam, _) = wall_scene();
    let a = BinaryMask::from_fn(8, 8, |x, y| x == 0 && y == 0).unwrap();
    let b = BinaryMask::from_fn(8, 8, |x, y| x == 0 && y == 7).unwrap();
    let mut src = src;
    src.set(0, 0, [1, 1, 1]);
    src.set(0, 7, [2, 2, 2]);
    // pixel (0, 0) at depth 4 is (-1.75, -1.75, 4) and (0, 7) is
    // (-1.75, 1.75, 4); both move onto the optical axis, projecting to
    // u = v = 3.5 -> pixel (4, 4), in front of the wall at depth 2
    let reqs = [
        request("a", &a, [1.75, 1.75, -2.5]),
        request("b", &b, [1.75, -1.75, -3.0]),
    ];
    let p = render_preview_full(&src, &depth, &cam, &reqs, &cfg(0)).unwrap();
    let (px, py) = (4, 4);
    assert_eq!(p.depth.get(px, py), 1.0);
    assert_eq!(p.image.get(px, py), [2, 2, 2]);
}

#[test]
fn overlapping_masks_are_rejected() {
    let (src, depth, cam, mask) = wall_scene();
    let err = render_preview(
        &src,
        &depth,
        &cam,
        &[request("a", &mask, [0.0; 3]), request("b", &mask, [0.1, 0.0, 0.0])],
        &cfg(1),
    )
    .unwrap_err();
    assert!(matches!(err, manip3d::Error::MaskOverlap(..)));
}

#[test]
fn null_edit_reproduces_source() {
    let (src, depth, cam, mask) = wall_scene();
    for policy in [ErasePolicy::Leave, ErasePolicy::FillBackgroundEstimate, ErasePolicy::FillFlatColor([0, 0, 0])] {
        let c = PreviewConfig { erase_policy: policy, ..cfg(0) };
        let out = render_preview(&src, &depth, &cam, &[request("cup", &mask, [0.0; 3])], &c).unwrap();
        assert_eq!(out, src);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn renderer_matches_reference(seed in any::<u64>(), radius in 0u32..3) {
        let (src, depth, cam, reqs) = random_scene(seed);
        prop_assume!(!reqs.is_empty());
        let out = render_preview(&src, &depth, &cam, &reqs, &cfg(radius)).unwrap();
        let refs: Vec<RefRequest> = reqs.iter().map(|r| RefRequest { id: &r.object_id, mask: &r.mask, delta: r.delta }).collect();
        let (expected, _) = reference_render(&src, &depth, &cam, &refs, radius as i64, 1e-6, FILL);
        prop_assert_eq!(out, expected);
    }

    #[test]
    fn request_order_does_not_matter(seed in any::<u64>(), radius in 0u32..3) {
        let (src, depth, cam, reqs) = random_scene(seed);
        prop_assume!(!reqs.is_empty());
        let c = PreviewConfig { splat_radius: radius, ..PreviewConfig::default() };
        let a = encode_image(&render_preview(&src, &depth, &cam, &reqs, &c).unwrap()).unwrap();
        let mut rev = reqs.clone();
        rev.reverse();
        let b = encode_image(&render_preview(&src, &depth, &cam, &rev, &c).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn larger_footprint_covers_more(seed in any::<u64>(), radius in 0u32..3) {
        let (src, depth, cam, reqs) = random_scene(seed);
        prop_assume!(!reqs.is_empty());
        let small = render_preview_full(&src, &depth, &cam, &reqs, &cfg(radius)).unwrap();
        let large = render_preview_full(&src, &depth, &cam, &reqs, &cfg(radius + 1)).unwrap();
        let erased = reqs.iter().fold(BinaryMask::empty(src.width(), src.height()).unwrap(), |acc, r| acc.or(&r.mask).unwrap());
        let initial = |k: usize| {
            let d = depth.values()[k];
            if erased.bits()[k] || !(d > 0.0) { f64::INFINITY } else { d as f64 }
        };
        for k in 0..src.width() * src.height() {
            if small.depth.depths()[k] != initial(k) {
                prop_assert!(large.depth.depths()[k] <= small.depth.depths()[k]);
                prop_assert!(large.depth.depths()[k] != initial(k));
            }
        }
    }
}
