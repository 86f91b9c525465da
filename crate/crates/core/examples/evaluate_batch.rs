//! Batch evaluation with one object the editor lost. The lost object gets
//! the quantile penalty derived from the others.

use manip3d::geometry::{unproject_depth, unproject_region, BinaryMask, CameraModel, DepthMap, Vec3};
use manip3d::metrics::{
    aggregate, evaluate_batch, BoundingBox, LocalizedObject, Metric, NormalizationSpec, ObjectEvalInput,
    PenaltyPolicy, RelocationPair,
};

fn object(k: usize) -> manip3d::Result<LocalizedObject> {
    let (w, h) = (48, 48);
    let camera = CameraModel::default_for(w, h)?;
    let gt_depth = DepthMap::from_fn(w, h, |x, y| 4.0 + 0.01 * (x + y) as f32)?;
    let pred_depth = gt_depth.scaled(1.0 + 0.03 * k as f32);
    let square = |x0: usize| BinaryMask::from_fn(w, h, move |x, y| (x0..x0 + 12).contains(&x) && (10..22).contains(&y));
    let (gt_mask, pred_mask) = (square(10)?, square(10 + k)?);
    let cloud = |m: &BinaryMask, d: &DepthMap| unproject_region(None, m, d, &camera.intrinsics, &camera.pose);
    let v_gt = Vec3::new(0.4, 0.0, 0.1);
    Ok(LocalizedObject {
        pred_box: BoundingBox::new((10 + k) as f64, 10.0, (22 + k) as f64, 22.0)?,
        gt_box: BoundingBox::new(10.0, 10.0, 22.0, 22.0)?,
        pred_cloud: cloud(&pred_mask, &pred_depth)?,
        gt_cloud: cloud(&gt_mask, &gt_depth)?,
        scene_cloud_gt: unproject_depth(&gt_depth, &camera)?,
        pred_mask,
        gt_mask,
        pred_depth,
        gt_depth,
        dino_similarity: 0.8,
        relocation: RelocationPair::new(v_gt + Vec3::new(0.0, 0.02 * k as f64, 0.0), v_gt),
    })
}

fn main() -> manip3d::Result<()> {
    let mut inputs = Vec::new();
    for k in 0..6 {
        inputs.push(ObjectEvalInput {
            item_id: format!("edit{k}"),
            object_id: "mug".into(),
            localized: if k == 3 { None } else { Some(object(k)?) },
            deqa: Some(3.5),
            phys_vlm: None,
        });
    }
    let norm = NormalizationSpec::standard();
    let batch = evaluate_batch(&inputs, &PenaltyPolicy::default(), &norm)?;

    println!("{:<8} {:>8} {:>8} {:>8} {:>8}", "item", "diou", "absrel", "chamfer", "ra_dino");
    for (input, r) in inputs.iter().zip(&batch.reports) {
        let m = |metric| r.metrics.get(metric).raw;
        println!(
            "{:<8} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            input.item_id,
            m(Metric::Diou),
            m(Metric::Absrel),
            m(Metric::Chamfer),
            m(Metric::RaDino)
        );
    }
    if let Some(p) = batch.penalties {
        println!("penalties: absrel {:.4}, chamfer {:.4}, centroid {:.4}", p.absrel, p.chamfer, p.centroid);
    }

    let summary = aggregate(&batch.reports)?;
    println!("\nnormalized means (0-100):");
    for (m, v) in summary.metrics.iter() {
        println!("  {:<9} {:6.2}", m.name(), v.normalized);
    }
    Ok(())
}
