use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::metrics::kdtree::KdTree;

/// Cloud coordinates divided by `diagonal`.
pub fn normalized_points(cloud: &PointCloud, diagonal: f64) -> Vec<[f64; 3]> {
    cloud
        .points()
        .iter()
        .map(|p| [p.x / diagonal, p.y / diagonal, p.z / diagonal])
        .collect()
}

fn check(pred: &PointCloud, gt: &PointCloud, diagonal: f64) -> Result<()> {
    if pred.is_empty() || gt.is_empty() {
        return Err(Error::EmptyObject(None));
    }
    if !(diagonal.is_finite() && diagonal > 0.0) {
        return Err(Error::DegenerateScene(diagonal));
    }
    Ok(())
}

/// Mean over `from` of the distance to the nearest point of `to`, summed in
/// index order.
fn mean_nearest(from: &[[f64; 3]], to: &KdTree) -> f64 {
    let sum: f64 = from.iter().map(|q| to.nearest_squared(q).sqrt()).sum();
    sum / from.len() as f64
}

/// Symmetric Chamfer distance of the two clouds after scaling by
/// `1 / diagonal`.
pub fn chamfer(pred: &PointCloud, gt: &PointCloud, diagonal: f64) -> Result<f64> {
    check(pred, gt, diagonal)?;
    let p = normalized_points(pred, diagonal);
    let g = normalized_points(gt, diagonal);
    let p_tree = KdTree::build(&p);
    let g_tree = KdTree::build(&g);
    Ok(mean_nearest(&p, &g_tree) + mean_nearest(&g, &p_tree))
}

fn centroid(points: &[[f64; 3]]) -> [f64; 3] {
    let mut c = [0.0; 3];
    for p in points {
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    c.map(|v| v / points.len() as f64)
}

/// Distance between the arithmetic-mean centroids after scaling by
/// `1 / diagonal`.
pub fn centroid_distance(pred: &PointCloud, gt: &PointCloud, diagonal: f64) -> Result<f64> {
    check(pred, gt, diagonal)?;
    let a = centroid(&normalized_points(pred, diagonal));
    let b = centroid(&normalized_points(gt, diagonal));
    Ok(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt())
}
