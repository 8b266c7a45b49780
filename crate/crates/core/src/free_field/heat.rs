//! Proper-time evaluation of Gaussian-smeared free kernels.
//!
//! A kernel with spectral weight `ρ(μ²)` is `∫ dt w(t) K_t(x - y)` with the
//! 4D heat kernel `K_t` and `w(t) = ∫ dμ² ρ(μ²) e^{-μ² t}`. For two bumps the
//! spatial double integral factorizes per coordinate and is done exactly,
//! leaving a smooth one-dimensional integral over `t`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::correlator::{Bump, TestFunction};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::special::{bessel_k0_scaled, bessel_k1_scaled};

/// Lower proper-time cutoff for composite densities (UV regulator `Λ² ~ 1/t`).
pub const COMPOSITE_CUTOFF: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProperTimeWeight {
    /// Single particle of the given mass: `w(t) = e^{-m² t}`.
    Propagator { mass: f64 },
    /// Density `(1/8π²)√(1 - 4m²/μ²)` of `2 S(x)²`.
    PairDensity { mass: f64 },
    /// Density `μ⁴/(4π²)` of `⟨:F²:(x) :F²:(y)⟩` for the free photon.
    FieldStrengthDensity,
}

impl ProperTimeWeight {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            ProperTimeWeight::Propagator { mass } => (-mass * mass * t).exp(),
            ProperTimeWeight::PairDensity { mass } => {
                if mass == 0.0 {
                    return 1.0 / (8.0 * PI * PI * t);
                }
                let a = 4.0 * mass * mass;
                let z = a * t / 2.0;
                // e^{-z}(K1(z) - K0(z)) with scaled Bessel functions
                let diff = (bessel_k1_scaled(z) - bessel_k0_scaled(z)) * (-2.0 * z).exp();
                a / 2.0 * diff / (8.0 * PI * PI)
            }
            ProperTimeWeight::FieldStrengthDensity => 1.0 / (2.0 * PI * PI * t.powi(3)),
        }
    }

    pub fn cutoff(&self) -> f64 {
        match self {
            ProperTimeWeight::Propagator { .. } => 0.0,
            _ => COMPOSITE_CUTOFF,
        }
    }

    fn tag(&self) -> [u64; 2] {
        match *self {
            ProperTimeWeight::Propagator { mass } => [1, mass.to_bits()],
            ProperTimeWeight::PairDensity { mass } => [2, mass.to_bits()],
            ProperTimeWeight::FieldStrengthDensity => [3, 0],
        }
    }
}

/// Bivariate normal moments `E[u^p v^q]` via Stein's identity.
fn moment_table(mu_u: f64, mu_v: f64, var_u: f64, var_v: f64, cov: f64, pmax: usize, qmax: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; qmax + 1]; pmax + 1];
    m[0][0] = 1.0;
    for q in 1..=qmax {
        m[0][q] = mu_v * m[0][q - 1] + if q >= 2 { (q - 1) as f64 * var_v * m[0][q - 2] } else { 0.0 };
    }
    for p in 1..=pmax {
        for q in 0..=qmax {
            let mut v = mu_u * m[p - 1][q];
            if p >= 2 {
                v += (p - 1) as f64 * var_u * m[p - 2][q];
            }
            if q >= 1 {
                v += q as f64 * cov * m[p - 1][q - 1];
            }
            m[p][q] = v;
        }
    }
    m
}

/// `∫∫ f(x) g(y) K_t(x - y) dx dy` for a pair of bumps.
pub fn heat_pair(f: &Bump, g: &Bump, t: f64) -> Complex64 {
    let s2 = f.width * f.width;
    let r2 = g.width * g.width;
    let pf = f.poly.max_powers();
    let pg = g.poly.max_powers();
    let mut prefactor = 1.0;
    let mut tables = Vec::with_capacity(4);
    for k in 0..4 {
        let d = f.center[k] - g.center[k];
        let big_d = 2.0 * t + s2 + r2;
        prefactor *= 2.0 * PI * f.width * g.width / (2.0 * PI * big_d).sqrt() * (-d * d / (2.0 * big_d)).exp();
        tables.push(moment_table(
            -d * s2 / big_d,
            d * r2 / big_d,
            s2 * (2.0 * t + r2) / big_d,
            r2 * (2.0 * t + s2) / big_d,
            s2 * r2 / big_d,
            pf[k],
            pg[k],
        ));
    }
    if prefactor == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (a, ca) in f.poly.terms() {
        for (b, cb) in g.poly.terms() {
            let m: f64 = (0..4).map(|k| tables[k][a[k] as usize][b[k] as usize]).product();
            sum += ca * cb * m;
        }
    }
    sum * prefactor
}

fn bump_key(b: &Bump) -> Vec<u64> {
    let mut v = Vec::new();
    b.key_bits(&mut v);
    v
}

/// Smearing engine with a memo table keyed by the bit patterns of the bump
/// pair; the pair is put in canonical order so `S(f, g)` and `S(g, f)`
/// agree bit for bit.
pub struct HeatKernelSmear {
    cache: Mutex<HashMap<Vec<u64>, Complex64>>,
    opts: QuadOptions,
}

impl Default for HeatKernelSmear {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for HeatKernelSmear {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HeatKernelSmear").finish_non_exhaustive()
    }
}

impl Clone for HeatKernelSmear {
    fn clone(&self) -> Self {
        Self::new()
    }
}

impl HeatKernelSmear {
    pub fn new() -> Self {
        Self { cache: Mutex::new(HashMap::new()), opts: QuadOptions { rel_tol: 1e-12, abs_tol: 0.0, max_evals: 400_000 } }
    }

    pub fn pair(&self, f: &Bump, g: &Bump, w: ProperTimeWeight) -> Result<Complex64> {
        let (kf, kg) = (bump_key(f), bump_key(g));
        let swap = kg < kf;
        let (first, second) = if swap { (g, f) } else { (f, g) };
        let mut key = if swap { kg.clone() } else { kf.clone() };
        key.extend(if swap { kf } else { kg });
        key.extend(w.tag());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let v = self.integrate_pair(first, second, w)?;
        self.cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    fn integrate_pair(&self, f: &Bump, g: &Bump, w: ProperTimeWeight) -> Result<Complex64> {
        let d2: f64 = (0..4).map(|k| (f.center[k] - g.center[k]).powi(2)).sum();
        let scale = 0.5 * (f.width * f.width + g.width * g.width) + d2 / 8.0;
        let lo = w.cutoff();
        let integrand = |t: f64| heat_pair(f, g, t) * w.eval(t);
        let head = integrate(integrand, lo, lo + scale, &self.opts);
        let tail = integrate_to_infinity(|u: f64| heat_pair(f, g, lo + scale * u) * (w.eval(lo + scale * u) * scale), 1.0, &self.opts);
        let value = head.value + tail.value;
        if head.converged && tail.converged {
            return Ok(value);
        }
        // Cancelling polynomial terms can stall a purely relative target;
        // accept if the error is tiny against the absolute integrand mass.
        let loose = QuadOptions { rel_tol: 1e-4, abs_tol: 0.0, max_evals: 100_000 };
        let abs_head = integrate(|t: f64| abs_pair(f, g, t) * w.eval(t), lo, lo + scale, &loose).value;
        let abs_tail = integrate_to_infinity(|u: f64| abs_pair(f, g, lo + scale * u) * w.eval(lo + scale * u) * scale, 1.0, &loose).value;
        let err = head.error + tail.error;
        if err <= 1e-11 * (abs_head + abs_tail) {
            Ok(value)
        } else {
            Err(Error::Quadrature { achieved: err, target: 1e-11 * (abs_head + abs_tail) })
        }
    }

    /// Bilinear pairing of two test functions.
    pub fn smear(&self, f: &TestFunction, g: &TestFunction, w: ProperTimeWeight) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for a in f.bumps()? {
            for b in g.bumps()? {
                total += self.pair(a, b, w)?;
            }
        }
        Ok(total)
    }
}

/// Same as [`heat_pair`] with every polynomial coefficient replaced by its modulus.
fn abs_pair(f: &Bump, g: &Bump, t: f64) -> f64 {
    let fa = Bump { poly: abs_poly(&f.poly), ..f.clone() };
    let ga = Bump { poly: abs_poly(&g.poly), ..g.clone() };
    heat_pair(&fa, &ga, t).norm()
}

fn abs_poly(p: &crate::correlator::Poly) -> crate::correlator::Poly {
    p.terms()
        .iter()
        .fold(crate::correlator::Poly::constant(Complex64::new(0.0, 0.0)), |acc, (pw, c)| {
            acc.add(&crate::correlator::Poly::monomial(*pw, Complex64::new(c.norm(), 0.0)))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlator::Poly;

    /// Brute-force 2D Gauss-Hermite check of one coordinate factor at fixed t.
    #[test]
    fn coordinate_factor_against_quadrature() {
        let f = Bump::with_poly([0.3, 0.0, 0.0, 0.0], 0.5, Poly::monomial([2, 0, 0, 0], Complex64::new(1.0, 0.0)));
        let g = Bump::with_poly([-0.4, 0.0, 0.0, 0.0], 0.7, Poly::monomial([1, 0, 0, 0], Complex64::new(1.0, 0.0)));
        let t = 0.37;
        let got = heat_pair(&f, &g, t).re;
        // the three trivial coordinates each contribute 2π s r / sqrt(2π D)
        let trivial = |s: f64, r: f64| {
            let d = 2.0 * t + s * s + r * r;
            2.0 * PI * s * r / (2.0 * PI * d).sqrt()
        };
        let rest = trivial(0.5, 0.7).powi(3);
        let (nodes, weights) = crate::quad::gauss_hermite(40);
        let mut acc = 0.0;
        for (zu, wu) in nodes.iter().zip(weights) {
            for (zv, wv) in nodes.iter().zip(weights) {
                let u = 0.5 * zu;
                let v = 0.7 * zv;
                let x = 0.3 + u;
                let y = -0.4 + v;
                let k = (-(x - y).powi(2) / (4.0 * t)).exp() / (4.0 * PI * t).sqrt();
                acc += wu * wv * u * u * v * k;
            }
        }
        acc *= 2.0 * PI * 0.5 * 0.7;
        assert!((got - acc * rest).abs() < 1e-12 * got.abs().max(1e-300), "{got} vs {}", acc * rest);
    }

    #[test]
    fn pair_density_small_t_limit() {
        let w = ProperTimeWeight::PairDensity { mass: 1.0 };
        let t = 1e-5;
        let rel = w.eval(t) * 8.0 * PI * PI * t;
        assert!((rel - 1.0).abs() < 1e-3);
    }
}
