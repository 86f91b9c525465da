use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;

pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_BETA: f64 = 0.8;
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Predicted and ground-truth relocation vectors with the error weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelocationPair {
    pub v_pred: Vec3,
    pub v_gt: Vec3,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_beta() -> f64 {
    DEFAULT_BETA
}
fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl RelocationPair {
    pub fn new(v_pred: Vec3, v_gt: Vec3) -> Self {
        Self {
            v_pred,
            v_gt,
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            epsilon: DEFAULT_EPSILON,
        }
    }

    /// Parallel and orthogonal relative errors `(e_par, e_perp)`.
    ///
    /// With a zero ground-truth vector the parallel component is zero and all
    /// predicted motion counts as orthogonal error.
    pub fn errors(&self) -> (f64, f64) {
        let gt_norm = self.v_gt.norm();
        let v_par = if gt_norm == 0.0 {
            Vec3::zeros()
        } else {
            self.v_gt * (self.v_pred.dot(&self.v_gt) / (gt_norm * gt_norm))
        };
        let v_perp = self.v_pred - v_par;
        let denom = gt_norm + self.epsilon;
        ((v_par - self.v_gt).norm() / denom, v_perp.norm() / denom)
    }
}

/// DINO similarity attenuated by `exp(-alpha * e_par - beta * e_perp)`.
pub fn ra_dino(s_dino: f64, rel: &RelocationPair) -> f64 {
    let (e_par, e_perp) = rel.errors();
    s_dino * (-rel.alpha * e_par - rel.beta * e_perp).exp()
}
