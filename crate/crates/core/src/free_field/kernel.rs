//! Pointwise free kernels in both metrics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::correlator::{Point, ANTISYMMETRIC_PAIRS};
use crate::error::{Error, Result};
use crate::quad::{integrate_panels, QuadOptions};
use crate::special::bessel_k1;

fn norm(x: &Point) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Euclidean propagator `m K₁(m|ξ|) / (4π² |ξ|)`, and `1/(4π²|ξ|²)` at `m = 0`.
pub fn scalar_schwinger_2pt(mass: f64, xi: &Point) -> Result<f64> {
    let r = norm(xi);
    if r == 0.0 {
        return Err(Error::Singular);
    }
    if !r.is_finite() || !mass.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(radial_propagator(mass, r))
}

pub fn radial_propagator(mass: f64, r: f64) -> f64 {
    if mass == 0.0 {
        1.0 / (4.0 * PI * PI * r * r)
    } else {
        mass * bessel_k1(mass * r) / (4.0 * PI * PI * r)
    }
}

/// `∂_a ∂_b` of the massless propagator `1/(4π² z²)`.
fn massless_hessian(z: &Point, a: usize, b: usize) -> f64 {
    let z2: f64 = z.iter().map(|v| v * v).sum();
    let delta = if a == b { 1.0 } else { 0.0 };
    (8.0 * z[a] * z[b] / z2.powi(3) - 2.0 * delta / (z2 * z2)) / (4.0 * PI * PI)
}

/// `⟨F_{μν}(0) F_{ρσ}(ζ)⟩` for the free Euclidean photon.
pub fn maxwell_f_schwinger_2pt(mn: (usize, usize), rs: (usize, usize), zeta: &Point) -> Result<f64> {
    if norm(zeta) == 0.0 {
        return Err(Error::Singular);
    }
    let (mu, nu) = mn;
    let (rho, sigma) = rs;
    if mu > 3 || nu > 3 || rho > 3 || sigma > 3 {
        return Err(Error::IndexOutOfRange { index: mu.max(nu).max(rho).max(sigma), dim: 4 });
    }
    if mu == nu || rho == sigma {
        return Ok(0.0);
    }
    // ⟨∂_a A_b(0) ∂_c A_d(ζ)⟩ = δ_bd ∂_a ∂_c D evaluated at ζ (D even, second derivative even)
    let term = |a: usize, b: usize, c: usize, d: usize| if b == d { -massless_hessian(zeta, a, c) } else { 0.0 };
    Ok(term(mu, nu, rho, sigma) - term(mu, nu, sigma, rho) - term(nu, mu, rho, sigma) + term(nu, mu, sigma, rho))
}

/// Same as [`maxwell_f_schwinger_2pt`] on stored antisymmetric components.
pub fn maxwell_component_2pt(c1: usize, c2: usize, zeta: &Point) -> Result<f64> {
    maxwell_f_schwinger_2pt(ANTISYMMETRIC_PAIRS[c1], ANTISYMMETRIC_PAIRS[c2], zeta)
}

/// Wightman function of the free scalar at a Minkowski point `x = (t, x⃗)`,
/// `∫ d³p e^{-iωt + ip·x}/((2π)³ 2ω)`, as the boundary value `t → t - i0`.
///
/// The radial integral is split into `e^{±ipr}` pieces and each is taken
/// along a ray `p = s e^{±iπ/4}` in the half plane where it decays, which is
/// exact away from the light cone.
pub fn scalar_wightman_2pt(mass: f64, x: &Point) -> Result<Complex64> {
    let t = x[0];
    let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    if !t.is_finite() || !r.is_finite() || !mass.is_finite() {
        return Err(Error::NonFinite);
    }
    if (r - t.abs()).abs() < 1e-9 {
        return Err(Error::Singular);
    }
    if mass == 0.0 {
        return Ok(Complex64::new(r * r - t * t, 0.0).inv() / (4.0 * PI * PI));
    }
    let value = if r == 0.0 {
        ray_integral(mass, t, -t, |p| p * p)?
    } else {
        let plus = ray_integral(mass, t, r - t, |p| p * (Complex64::i() * p * r).exp())?;
        let minus = ray_integral(mass, t, -r - t, |p| p * (-Complex64::i() * p * r).exp())?;
        (plus - minus) / Complex64::new(0.0, 2.0 * r)
    };
    Ok(value / (4.0 * PI * PI))
}

/// `∫₀^∞ amp(p) e^{-iωt}/ω dp` where the integrand behaves like `e^{ikp}` at
/// large `p`; the contour is rotated by `π/4` towards decay.
fn ray_integral(mass: f64, t: f64, k: f64, amp: impl Fn(Complex64) -> Complex64) -> Result<Complex64> {
    let dir = Complex64::from_polar(1.0, k.signum() * PI / 4.0);
    let m2 = mass * mass;
    let f = |s: f64| {
        let p = dir * s;
        let w = (p * p + m2).sqrt();
        amp(p) * (-Complex64::i() * w * t).exp() / w * dir
    };
    let decay = std::f64::consts::SQRT_2 / k.abs();
    let panel = decay.min(4.0 / mass.max(1e-3));
    let upper = 80.0 * decay + 40.0 / mass;
    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 0.0, max_evals: 4_000_000 };
    let res = integrate_panels(f, 0.0, panel, upper, &opts);
    if res.converged || res.error <= 1e-12 * res.value.norm() {
        Ok(res.value)
    } else {
        Err(Error::Quadrature { achieved: res.error, target: 1e-12 * res.value.norm() })
    }
}

/// Richardson table for values at step sizes `h, h/ratio, h/ratio², ...`.
pub fn richardson(values: &[Complex64], ratio: f64) -> Complex64 {
    let mut table = values.to_vec();
    let mut factor = ratio;
    for level in 1..values.len() {
        for i in 0..values.len() - level {
            table[i] = (table[i + 1] * factor - table[i]) / (factor - 1.0);
        }
        factor *= ratio;
    }
    table[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxwell_antisymmetry() {
        let z = [0.3, -0.7, 0.2, 0.5];
        let a = maxwell_f_schwinger_2pt((0, 1), (2, 3), &z).unwrap();
        let b = maxwell_f_schwinger_2pt((1, 0), (2, 3), &z).unwrap();
        assert!((a + b).abs() < 1e-15);
        assert_eq!(maxwell_f_schwinger_2pt((2, 2), (0, 1), &z).unwrap(), 0.0);
    }

    #[test]
    fn richardson_removes_linear_and_quadratic_terms() {
        let f = |h: f64| Complex64::new(2.0 + 3.0 * h - h * h + 0.5 * h * h * h, 0.0);
        let v: Vec<Complex64> = [0.4, 0.2, 0.1, 0.05].iter().map(|&h| f(h)).collect();
        assert!((richardson(&v, 2.0).re - 2.0).abs() < 1e-12);
    }
}
