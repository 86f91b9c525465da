use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quantile rule for distance metrics of objects that could not be localized:
/// `max(q(q_hi), multiplier * q(q_mid))` over the successfully localized ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PenaltyPolicy {
    pub q_hi: f64,
    pub q_mid: f64,
    pub multiplier: f64,
    /// Penalty used when a batch has no localized object to derive one from.
    pub fallback: Option<f64>,
}

impl Default for PenaltyPolicy {
    fn default() -> Self {
        Self {
            q_hi: 0.99,
            q_mid: 0.95,
            multiplier: 1.2,
            fallback: None,
        }
    }
}

impl PenaltyPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.q_mid && self.q_mid <= self.q_hi && self.q_hi <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile levels must satisfy 0 < q_mid <= q_hi <= 1, got {} and {}",
                self.q_mid, self.q_hi
            )));
        }
        if !(self.multiplier >= 1.0 && self.multiplier.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "multiplier {} must be >= 1",
                self.multiplier
            )));
        }
        if let Some(f) = self.fallback {
            if !(f.is_finite() && f >= 0.0) {
                return Err(Error::InvalidParameter(format!("fallback penalty {f}")));
            }
        }
        Ok(())
    }
}

/// Empirical quantile at level `q` with linear interpolation between order
/// statistics at rank `(n - 1) * q`. Reorders `values`.
pub fn quantile(values: &mut [f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let h = (values.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let (_, &mut a, upper) = values.select_nth_unstable_by(lo, f64::total_cmp);
    if frac == 0.0 || upper.is_empty() {
        return Ok(a);
    }
    let b = upper.iter().copied().min_by(f64::total_cmp).unwrap();
    Ok(a + frac * (b - a))
}

pub fn missing_penalty(observed: &[f64], policy: &PenaltyPolicy) -> Result<f64> {
    policy.validate()?;
    if observed.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(bad) = observed.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "penalty sample value {bad}"
        )));
    }
    let mut scratch = observed.to_vec();
    let hi = quantile(&mut scratch, policy.q_hi)?;
    let mid = quantile(&mut scratch, policy.q_mid)?;
    Ok(hi.max(policy.multiplier * mid))
}
