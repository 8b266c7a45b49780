//! Polynomial growth envelope of the analytically continued two-point function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectral::SpectralModel;
use super::wightman::analytic_two_point;
use crate::error::{Error, Result};

/// `W(t - iη, r)` at a point of the tube.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AnalyticSample {
    pub t: f64,
    pub r: f64,
    pub eta: f64,
    pub value: Complex64,
}

impl AnalyticSample {
    pub fn norm(&self) -> f64 {
        (self.t * self.t + self.r * self.r + self.eta * self.eta).sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { value: self.value * factor, ..*self }
    }
}

pub fn analytic_samples(model: &SpectralModel, ts: &[f64], rs: &[f64], etas: &[f64]) -> Result<Vec<AnalyticSample>> {
    let mut out = Vec::with_capacity(ts.len() * rs.len() * etas.len());
    for &eta in etas {
        for &t in ts {
            for &r in rs {
                let d = analytic_two_point(model, t, r, eta, 1e-11)?;
                out.push(AnalyticSample { t, r, eta, value: d.value });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEnvelope {
    pub c: f64,
    pub n: u32,
    pub m: u32,
    /// The constant stopped growing when the smallest `η` level was added.
    pub saturated: bool,
    /// `C` over all samples divided by `C` without the finest `η` level.
    pub refinement_ratio: f64,
}

/// Smallest `(M, N)` (in that order) for which
/// `|W(z)| ≤ C (1 + ‖z‖)^N (1 + ‖Im z‖^{-M})` holds with a constant that
/// is stable under refinement of the `η` grid.
pub fn verify_growth_estimate(samples: &[AnalyticSample], max_n: u32, max_m: u32) -> Result<GrowthEnvelope> {
    if samples.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let finest = samples.iter().map(|s| s.eta).fold(f64::INFINITY, f64::min);
    let coarse_exists = samples.iter().any(|s| s.eta > finest);
    let ratio_at = |s: &AnalyticSample, n: u32, m: u32| {
        s.value.norm() / ((1.0 + s.norm()).powi(n as i32) * (1.0 + s.eta.powi(-(m as i32))))
    };
    let mut fallback = None;
    for m in 0..=max_m {
        for n in 0..=max_n {
            let all = samples.iter().map(|s| ratio_at(s, n, m)).fold(0.0, f64::max);
            let coarse = samples.iter().filter(|s| s.eta > finest).map(|s| ratio_at(s, n, m)).fold(0.0, f64::max);
            let refinement_ratio = if coarse > 0.0 { all / coarse } else { 1.0 };
            let saturated = coarse_exists && refinement_ratio <= 1.5;
            let env = GrowthEnvelope { c: all, n, m, saturated, refinement_ratio };
            if saturated {
                return Ok(env);
            }
            fallback = Some(env);
        }
    }
    Ok(fallback.expect("non-empty search range"))
}
