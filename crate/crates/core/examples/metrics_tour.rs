//! Every geometric metric on a small hand-made prediction.

use manip3d::geometry::{unproject_depth, unproject_region, BinaryMask, CameraModel, DepthMap, Vec3};
use manip3d::metrics::{
    absrel, centroid_distance, chamfer, delta_ratio, diou, mask_iou, ra_dino, silog, BoundingBox, Metric,
    NormalizationSpec, RelocationPair,
};

fn main() -> manip3d::Result<()> {
    let (w, h) = (64, 48);
    let camera = CameraModel::default_for(w, h)?;
    let gt_depth = DepthMap::from_fn(w, h, |x, _| 3.0 + 0.02 * x as f32)?;
    // prediction: right shape, 10% too deep
    let pred_depth = gt_depth.scaled(1.1);

    let gt_mask = BinaryMask::from_fn(w, h, |x, y| (10..30).contains(&x) && (10..25).contains(&y))?;
    let pred_mask = BinaryMask::from_fn(w, h, |x, y| (13..33).contains(&x) && (11..26).contains(&y))?;
    let gt_box = BoundingBox::new(10.0, 10.0, 30.0, 25.0)?;
    let pred_box = BoundingBox::new(13.0, 11.0, 33.0, 26.0)?;

    println!("DIoU      {:.4}", diou(&pred_box, &gt_box)?);
    println!("mask IoU  {:.4}", mask_iou(&pred_mask, &gt_mask)?);
    println!("AbsRel    {:.4}", absrel(&pred_depth, &gt_depth, &gt_mask)?);
    println!("delta     {:.4}", delta_ratio(&pred_depth, &gt_depth, &gt_mask, 1.25)?);
    // a pure scale error leaves SILog at zero
    println!("SILog     {:.2e}", silog(&pred_depth, &gt_depth, &gt_mask)?);

    let (i, p) = (&camera.intrinsics, &camera.pose);
    let gt_cloud = unproject_region(None, &gt_mask, &gt_depth, i, p)?;
    let pred_cloud = unproject_region(None, &pred_mask, &pred_depth, i, p)?;
    let diagonal = manip3d::geometry::scene_diagonal(&unproject_depth(&gt_depth, &camera)?)?;
    println!("diagonal  {diagonal:.4}");
    println!("Chamfer   {:.4}", chamfer(&pred_cloud, &gt_cloud, diagonal)?);
    println!("centroid  {:.4}", centroid_distance(&pred_cloud, &gt_cloud, diagonal)?);

    let rel = RelocationPair::new(Vec3::new(0.45, 0.05, 0.0), Vec3::new(0.5, 0.0, 0.0));
    let (e_par, e_perp) = rel.errors();
    println!("RA-DINO   {:.4}  (e_par {e_par:.3}, e_perp {e_perp:.3})", ra_dino(0.9, &rel));

    let norm = NormalizationSpec::standard();
    println!("\nraw Chamfer 0.1 reports as {:.1}", norm.get(Metric::Chamfer).apply(0.1));
    println!("raw DIoU 0.5 reports as {:.1}", norm.get(Metric::Diou).apply(0.5));
    Ok(())
}
