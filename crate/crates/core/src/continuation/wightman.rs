//! Positive-frequency kernels from a spectral model, in the energy variable.
//!
//! `W(t - iη, r) = (1/4π²r) ∫_μ^∞ dω sin(pr) e^{-iω(t - iη)}`, `p = √(ω² - μ²)`,
//! with the massless part subtracted in closed form. Boundary values are
//! reached by Richardson extrapolation in `η`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectral::SpectralModel;
use crate::correlator::Point;
use crate::error::{Error, Result};
use crate::free_field::kernel::richardson;
use crate::quad::{integrate, integrate_panels, QuadOptions};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryOptions {
    /// Largest damping `η` of the extrapolation ladder.
    pub eps0: f64,
    pub levels: usize,
    pub ratio: f64,
    pub rel_tol: f64,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        Self { eps0: 0.1, levels: 6, ratio: 2.0, rel_tol: 1e-13 }
    }
}

/// A damped value and its quadrature error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Damped {
    pub value: Complex64,
    pub error: f64,
}

fn massless(t: f64, r: f64, eta: f64) -> Complex64 {
    let tau = Complex64::new(t, -eta);
    (Complex64::new(r * r, 0.0) - tau * tau).inv() / (4.0 * PI * PI)
}

/// `sin(kr)/r`, continuous at `r = 0`.
fn radial(k: f64, r: f64) -> f64 {
    if r == 0.0 {
        k
    } else {
        (k * r).sin() / r
    }
}

/// Positive-frequency kernel of mass² `mass_sq` at complex time `t - iη`, `η > 0`.
pub fn delta_plus_damped(mass_sq: f64, t: f64, r: f64, eta: f64, rel_tol: f64) -> Result<Damped> {
    if !(eta > 0.0) {
        return Err(Error::Unsupported("damping must be positive".into()));
    }
    if !mass_sq.is_finite() || mass_sq < 0.0 {
        return Err(Error::NonFinite);
    }
    let base = massless(t, r, eta);
    if mass_sq == 0.0 {
        return Ok(Damped { value: base, error: 0.0 });
    }
    let mu = mass_sq.sqrt();
    let phase = |w: f64| Complex64::from_polar((-w * eta).exp(), -w * t);
    let opts = QuadOptions { rel_tol, abs_tol: 0.1 * rel_tol * 4.0 * PI * PI * base.norm(), max_evals: 40_000_000 };

    // ∫_0^μ of the massless integrand, taken away
    let below = integrate(|w: f64| phase(w) * radial(w, r), 0.0, mu, &opts);
    // [μ, μ + 1] with ω = μ + s² to smooth the square-root threshold
    // sin(pr) - sin(ωr) as a product, with p - ω = -μ²/(p + ω)
    let diff = |w: f64| {
        let p = (w * w - mass_sq).max(0.0).sqrt();
        let gap = -mass_sq / (p + w);
        let d = if r == 0.0 { gap } else { 2.0 * ((p + w) * r / 2.0).cos() * (gap * r / 2.0).sin() / r };
        phase(w) * d
    };
    let near = integrate(|s: f64| diff(mu + s * s) * (2.0 * s), 0.0, 1.0, &opts);
    let freq = r + t.abs() + 0.5;
    let panel = (2.0 * PI / freq).min(4.0);
    let upper = mu + 1.0 + 46.0 / eta;
    let far = integrate_panels(diff, mu + 1.0, panel, upper, &opts);

    let remainder = near.value + far.value - below.value;
    let error = (near.error + far.error + below.error) / (4.0 * PI * PI);
    let target = rel_tol * remainder.norm().max(base.norm()) / (4.0 * PI * PI);
    if !(near.converged && far.converged && below.converged) && !(error <= target) {
        return Err(Error::Quadrature { achieved: error, target });
    }
    Ok(Damped { value: base + remainder / (4.0 * PI * PI), error })
}

/// Model two-point function at complex time `t - iη`.
pub fn analytic_two_point(model: &SpectralModel, t: f64, r: f64, eta: f64, rel_tol: f64) -> Result<Damped> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for (m2, w) in model.components() {
        if w == 0.0 {
            continue;
        }
        let d = delta_plus_damped(m2, t, r, eta, rel_tol)?;
        value += d.value * w;
        error += d.error * w.abs();
    }
    Ok(Damped { value, error })
}

fn split(x: &Point) -> Result<(f64, f64)> {
    let t = x[0];
    let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    if !t.is_finite() || !r.is_finite() {
        return Err(Error::NonFinite);
    }
    if (r - t.abs()).abs() < 1e-9 {
        return Err(Error::Singular);
    }
    Ok((t, r))
}

/// Boundary value `η → 0⁺` of the model two-point function at Minkowski `x`.
pub fn continue_to_wightman(model: &SpectralModel, x: &Point, opts: &BoundaryOptions) -> Result<Complex64> {
    model.validate()?;
    let (t, r) = split(x)?;
    if opts.levels == 0 || !(opts.ratio > 1.0) || !(opts.eps0 > 0.0) {
        return Err(Error::Unsupported("boundary-value ladder needs eps0 > 0, ratio > 1, levels ≥ 1".into()));
    }
    // the massless part is exact at every η; only the remainder is extrapolated
    let total_weight: f64 = model.components().iter().map(|c| c.1).sum();
    let mut values = Vec::with_capacity(opts.levels);
    for k in 0..opts.levels {
        let eta = opts.eps0 / opts.ratio.powi(k as i32);
        let v = analytic_two_point(model, t, r, eta, opts.rel_tol)?.value;
        values.push(v - massless(t, r, eta) * total_weight);
    }
    Ok(richardson(&values, opts.ratio) + massless(t, r, 0.0) * total_weight)
}
