//! Positivity and cluster statements carried from Euclidean to Minkowski data.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectral::SpectralModel;
use super::wightman::{continue_to_wightman, BoundaryOptions};
use crate::correlator::{Bump, TestFunction};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};

/// `∫_0^∞ e^{-ωτ} e^{-(τ-c)²/2w²} dτ`.
fn positive_time_laplace(omega: f64, center: f64, width: f64) -> f64 {
    let lo = (center - 14.0 * width).max(0.0);
    let hi = (center + 14.0 * width).max(lo + width);
    let opts = QuadOptions { rel_tol: 1e-14, abs_tol: 0.0, max_evals: 200_000 };
    integrate(|t: f64| (-omega * t - (t - center).powi(2) / (2.0 * width * width)).exp(), lo, hi, &opts).value
}

fn plain_gaussians(f: &TestFunction) -> Result<Vec<(&Bump, Complex64)>> {
    f.bumps()?
        .iter()
        .map(|b| {
            if b.poly.degree() > 0 {
                Err(Error::Unsupported("transport gram takes Gaussian bumps without polynomial factors".into()))
            } else {
                Ok((b, b.poly.terms().first().map(|t| t.1).unwrap_or_default()))
            }
        })
        .collect()
}

/// `M_ij = Σ Z ∫ d³p/((2π)³ 2ω) conj(F_i(p)) F_j(p)` with `F` the spatial
/// Fourier, positive-time Laplace transform of the basis functions: the
/// Minkowski norm of the vectors obtained from positive-time test functions.
pub fn transport_gram(model: &SpectralModel, basis: &[TestFunction]) -> Result<DMatrix<Complex64>> {
    model.validate()?;
    let parts: Vec<Vec<(&Bump, Complex64)>> = basis.iter().map(plain_gaussians).collect::<Result<_>>()?;
    let n = basis.len();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let opts = QuadOptions { rel_tol: 1e-12, abs_tol: 0.0, max_evals: 400_000 };
    for i in 0..n {
        for j in i..n {
            let mut total = Complex64::new(0.0, 0.0);
            for &(a, ca) in &parts[i] {
                for &(b, cb) in &parts[j] {
                    let d = ((1..4).map(|k| (a.center[k] - b.center[k]).powi(2)).sum::<f64>()).sqrt();
                    let norm3 = (2.0 * PI).powi(3) * a.width.powi(3) * b.width.powi(3);
                    let integrand = |p: f64| {
                        let sinc = if p * d == 0.0 { 1.0 } else { (p * d).sin() / (p * d) };
                        let gauss = (-p * p * (a.width * a.width + b.width * b.width) / 2.0).exp();
                        model
                            .components()
                            .iter()
                            .map(|&(m2, z)| {
                                let omega = (p * p + m2).sqrt();
                                z / (2.0 * omega)
                                    * positive_time_laplace(omega, a.center[0], a.width)
                                    * positive_time_laplace(omega, b.center[0], b.width)
                            })
                            .sum::<f64>()
                            * p
                            * p
                            / (2.0 * PI * PI)
                            * sinc
                            * gauss
                            * norm3
                    };
                    let scale = 1.0 / a.width.max(b.width);
                    let head = integrate(integrand, 0.0, 10.0 * scale, &opts);
                    let tail = integrate_to_infinity(integrand, 10.0 * scale, &opts);
                    total += ca.conj() * cb * (head.value + tail.value);
                }
            }
            m[(i, j)] = total;
            m[(j, i)] = total.conj();
        }
    }
    Ok(m)
}

/// `log|y| = A - rate·λ - power·log λ`, by linear least squares.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub amplitude: f64,
    pub rate: f64,
    pub power: f64,
    pub residual: f64,
}

pub fn fit_decay(lambdas: &[f64], values: &[f64]) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = lambdas.iter().zip(values).filter(|(_, v)| v.abs() > 0.0).map(|(l, v)| (*l, v.abs().ln())).collect();
    if pts.len() < 3 {
        return Err(Error::Unsupported("decay fit needs three nonzero samples".into()));
    }
    let a = DMatrix::from_fn(pts.len(), 3, |r, c| match c {
        0 => 1.0,
        1 => -pts[r].0,
        _ => -pts[r].0.ln(),
    });
    let b = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Unsupported(format!("decay fit: {e}")))?;
    let residual = ((&a * &x - &b).norm_squared() / pts.len() as f64).sqrt();
    Ok(DecayFit { amplitude: x[0], rate: x[1], power: x[2], residual })
}

/// Decay of the continued two-point function along a spatial ray.
pub fn minkowski_cluster_fit(model: &SpectralModel, lambdas: &[f64], opts: &BoundaryOptions) -> Result<DecayFit> {
    let values: Vec<f64> = lambdas
        .iter()
        .map(|&l| continue_to_wightman(model, &[0.0, l, 0.0, 0.0], opts).map(|w| w.norm()))
        .collect::<Result<_>>()?;
    fit_decay(lambdas, &values)
}
