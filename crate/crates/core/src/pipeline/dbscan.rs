//! DBSCAN over per-frame camera tokens.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NOISE: i64 = -1;

/// Per-frame embedding vectors in temporal order, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraTokenSet {
    count: usize,
    dim: usize,
    vectors: Vec<f32>,
}

impl CameraTokenSet {
    pub fn new(count: usize, dim: usize, vectors: Vec<f32>) -> Result<Self> {
        if count == 0 || dim == 0 {
            return Err(Error::InvalidParameter(format!(
                "token set needs positive count and dim, got {count}x{dim}"
            )));
        }
        if count.checked_mul(dim) != Some(vectors.len()) {
            return Err(Error::ShapeMismatch(format!(
                "{count}x{dim} tokens but {} values",
                vectors.len()
            )));
        }
        if let Some(i) = vectors.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite token entry at frame {}",
                i / dim
            )));
        }
        Ok(Self {
            count,
            dim,
            vectors,
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[f32] {
        &self.vectors
    }

    pub fn row(&self, k: usize) -> &[f32] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    /// Each row scaled to unit Euclidean norm; zero rows are kept.
    pub fn l2_normalized(&self) -> Self {
        let mut vectors = self.vectors.clone();
        for row in vectors.chunks_exact_mut(self.dim) {
            let norm = row.iter().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
            if norm > 0.0 {
                for v in row {
                    *v = (*v as f64 / norm) as f32;
                }
            }
        }
        Self { vectors, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DbscanParams {
    /// Neighborhood radius (inclusive), Euclidean.
    pub eps: f64,
    /// Neighbors within `eps`, counting the point itself, that make a core point.
    pub min_samples: usize,
}

impl Default for DbscanParams {
    fn default() -> Self {
        Self {
            eps: 0.5,
            min_samples: 5,
        }
    }
}

impl DbscanParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::InvalidParameter(format!("eps {} must be > 0", self.eps)));
        }
        if self.min_samples == 0 {
            return Err(Error::InvalidParameter("min_samples must be >= 1".into()));
        }
        Ok(())
    }
}

/// Cluster label per frame, [`NOISE`] for noise. Ids are contiguous from 0 in
/// order of discovery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub labels: Vec<i64>,
}

impl ClusterAssignment {
    pub fn cluster_count(&self) -> usize {
        self.labels.iter().copied().max().map_or(0, |m| (m + 1).max(0) as usize)
    }
}

pub fn squared_distance(a: &[f32], b: &[f32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum()
}

/// Standard DBSCAN. Frames are scanned in index order; each unlabeled core
/// frame seeds a cluster that is fully expanded before the scan continues,
/// so a border frame joins the first cluster that reaches it.
pub fn dbscan(tokens: &CameraTokenSet, params: &DbscanParams) -> Result<ClusterAssignment> {
    params.validate()?;
    let n = tokens.count();
    let eps2 = params.eps * params.eps;
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| squared_distance(tokens.row(i), tokens.row(j)) <= eps2)
                .collect()
        })
        .collect();
    let is_core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= params.min_samples).collect();

    let mut labels: Vec<Option<i64>> = vec![None; n];
    let mut next = 0i64;
    let mut queue = VecDeque::new();
    for seed in 0..n {
        if labels[seed].is_some() {
            continue;
        }
        if !is_core[seed] {
            labels[seed] = Some(NOISE);
            continue;
        }
        let id = next;
        next += 1;
        labels[seed] = Some(id);
        queue.extend(neighbors[seed].iter().copied());
        while let Some(q) = queue.pop_front() {
            match labels[q] {
                Some(NOISE) => labels[q] = Some(id),
                None => {
                    labels[q] = Some(id);
                    if is_core[q] {
                        queue.extend(neighbors[q].iter().copied());
                    }
                }
                Some(_) => {}
            }
        }
    }
    Ok(ClusterAssignment {
        labels: labels.into_iter().map(|l| l.unwrap_or(NOISE)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tokens(rows: &[&[f32]]) -> CameraTokenSet {
        let dim = rows[0].len();
        CameraTokenSet::new(rows.len(), dim, rows.concat()).unwrap()
    }

    #[test]
    fn identical_tokens_form_one_cluster() {
        let row: &[f32] = &[1.0, 2.0];
        let t = tokens(&[row; 6]);
        let a = dbscan(&t, &DbscanParams { eps: 0.1, min_samples: 3 }).unwrap();
        assert_eq!(a.labels, vec![0; 6]);
    }

    #[test]
    fn isolated_token_is_noise() {
        let t = tokens(&[&[0.0], &[0.05], &[10.0]]);
        let a = dbscan(&t, &DbscanParams { eps: 0.1, min_samples: 2 }).unwrap();
        assert_eq!(a.labels, vec![0, 0, NOISE]);
        assert_eq!(a.cluster_count(), 1);
    }

    #[test]
    fn two_blobs() {
        let rows: Vec<Vec<f32>> = (0..10)
            .map(|i| vec![(i % 5) as f32 * 0.01 + if i < 5 { 0.0 } else { 100.0 }, 0.0])
            .collect();
        let refs: Vec<&[f32]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = dbscan(&tokens(&refs), &DbscanParams { eps: 0.5, min_samples: 3 }).unwrap();
        assert_eq!(a.labels, vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn border_joins_first_cluster() {
        // frames 3 and 4 are border points of the left and right blobs
        let t = tokens(&[&[0.0], &[0.5], &[1.0], &[2.0], &[5.0], &[6.0], &[6.5], &[7.0]]);
        let a = dbscan(&t, &DbscanParams { eps: 1.0, min_samples: 3 }).unwrap();
        assert_eq!(a.labels, vec![0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn infinite_radius_single_cluster() {
        let t = tokens(&[&[0.0], &[1e6], &[-3.0]]);
        let a = dbscan(&t, &DbscanParams { eps: f64::INFINITY, min_samples: 1 }).unwrap();
        assert_eq!(a.labels, vec![0, 0, 0]);
    }

    #[test]
    fn validation() {
        assert!(CameraTokenSet::new(0, 2, vec![]).is_err());
        assert!(CameraTokenSet::new(2, 2, vec![0.0; 3]).is_err());
        assert!(CameraTokenSet::new(1, 1, vec![f32::NAN]).is_err());
        let t = tokens(&[&[0.0]]);
        assert!(dbscan(&t, &DbscanParams { eps: 0.0, min_samples: 1 }).is_err());
        assert!(dbscan(&t, &DbscanParams { eps: 1.0, min_samples: 0 }).is_err());
    }

    #[test]
    fn normalization() {
        let t = tokens(&[&[3.0, 4.0], &[0.0, 0.0]]).l2_normalized();
        assert_eq!(t.row(0), &[0.6, 0.8]);
        assert_eq!(t.row(1), &[0.0, 0.0]);
    }
}
