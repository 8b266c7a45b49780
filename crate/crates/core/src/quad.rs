//! Adaptive Gauss-Kronrod quadrature with achieved-error reporting, plus
//! Gauss-Hermite rules for polynomial-times-Gaussian moments.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Hard cap on integrand evaluations.
    pub max_evals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 0.0, max_evals: 10_000_000 }
    }
}

impl QuadOptions {
    pub fn tight() -> Self {
        Self { rel_tol: 1e-13, abs_tol: 1e-300, max_evals: 2_000_000 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult<V> {
    pub value: V,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

impl<V: QuadValue> QuadResult<V> {
    /// Turn a non-converged result into an error that carries the achieved accuracy.
    pub fn require(self, opts: &QuadOptions) -> Result<V> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature {
                achieved: self.error,
                target: opts.rel_tol * self.value.magnitude().max(opts.abs_tol),
            })
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod value, error estimate and Kronrod integral of `|f|`.
fn gk15<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.magnitude() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        kronrod = kronrod + pair * WGK[j];
        resabs += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    let err = (kronrod - gauss).magnitude();
    (kronrod, err, resabs * half.abs())
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    abs: f64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive 15-point Gauss-Kronrod integration over a finite interval.
pub fn integrate<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> QuadResult<V> {
    if a == b {
        return QuadResult { value: V::zero(), error: 0.0, evals: 0, converged: true };
    }
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    // Start from a few panels so narrow features are not missed by the first rule.
    let initial = 4;
    let mut total = V::zero();
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    for k in 0..initial {
        let lo = a + (b - a) * k as f64 / initial as f64;
        let hi = a + (b - a) * (k + 1) as f64 / initial as f64;
        let (value, error, abs) = gk15(&mut f, lo, hi);
        evals += 15;
        total = total + value;
        total_err += error;
        total_abs += abs;
        heap.push(Segment { a: lo, b: hi, value, error, abs });
    }
    loop {
        // cancellation caps the attainable accuracy at roundoff of ∫|f|
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude()).max(64.0 * f64::EPSILON * total_abs);
        if total_err <= target {
            return QuadResult { value: total, error: total_err, evals, converged: true };
        }
        if evals + 30 > opts.max_evals {
            return QuadResult { value: total, error: total_err, evals, converged: false };
        }
        let seg = heap.pop().expect("non-empty segment heap");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval exhausted at machine resolution; accept what we have.
            heap.push(seg);
            let converged = total_err <= 10.0 * target;
            return QuadResult { value: total, error: total_err, evals, converged };
        }
        let (v1, e1, a1) = gk15(&mut f, seg.a, mid);
        let (v2, e2, a2) = gk15(&mut f, mid, seg.b);
        evals += 30;
        total = total - seg.value + v1 + v2;
        total_abs = total_abs - seg.abs + a1 + a2;
        total_err = total_err - seg.error + e1 + e2;
        if total_err < 0.0 {
            total_err = heap.iter().map(|s| s.error).sum::<f64>() + e1 + e2;
        }
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1, abs: a1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2, abs: a2 });
    }
}

/// Integrate over `[a, ∞)` using the map `x = a + t/(1-t)`.
pub fn integrate_to_infinity<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    a: f64,
    opts: &QuadOptions,
) -> QuadResult<V> {
    integrate(
        |t: f64| {
            if t >= 1.0 {
                return V::zero();
            }
            let one_minus = 1.0 - t;
            let x = a + t / one_minus;
            let jac = 1.0 / (one_minus * one_minus);
            let v = f(x);
            if v.magnitude() == 0.0 {
                V::zero()
            } else {
                v * jac
            }
        },
        0.0,
        1.0,
        opts,
    )
}

/// Sum adaptive integrals over consecutive panels of `[a, upper)`. Suited to
/// damped oscillatory integrands where `panel` is a few oscillation periods.
pub fn integrate_panels<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    a: f64,
    panel: f64,
    upper: f64,
    opts: &QuadOptions,
) -> QuadResult<V> {
    let mut total = V::zero();
    let mut error = 0.0;
    let mut evals = 0;
    let mut converged = true;
    let mut lo = a;
    let panels = ((upper - a) / panel).ceil().max(1.0);
    while lo < upper {
        let hi = (lo + panel).min(upper);
        let inner = QuadOptions {
            rel_tol: opts.rel_tol,
            abs_tol: opts.abs_tol.max(opts.rel_tol * total.magnitude() / panels),
            max_evals: opts.max_evals.saturating_sub(evals).max(1000),
        };
        let r = integrate(&mut f, lo, hi, &inner);
        total = total + r.value;
        error += r.error;
        evals += r.evals;
        converged &= r.converged;
        lo = hi;
        if evals > opts.max_evals && lo < upper {
            // the untouched panels are unaccounted for
            return QuadResult { value: total, error: f64::INFINITY, evals, converged: false };
        }
    }
    QuadResult { value: total, error, evals, converged }
}

/// Nodes and weights for `∫ p(z) exp(-z²/2) dz / √(2π)` (probabilists' Hermite),
/// exact for polynomials of degree `2n - 1`.
pub fn gauss_hermite(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    const MAX: usize = 48;
    static TABLE: [OnceLock<(Vec<f64>, Vec<f64>)>; MAX] = [const { OnceLock::new() }; MAX];
    assert!((1..MAX).contains(&n), "Gauss-Hermite order {n} unsupported");
    TABLE[n].get_or_init(|| {
        // Golub-Welsch on the Jacobi matrix of the monic He_k recursion.
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let off = (k as f64).sqrt();
            jac[(k - 1, k)] = off;
            jac[(k, k - 1)] = off;
        }
        let eig = jac.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Symmetrize to remove eigen-solver asymmetry.
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let j = n - 1 - i;
            nodes[i] = 0.5 * (pairs[i].0 - pairs[j].0);
            weights[i] = 0.5 * (pairs[i].1 + pairs[j].1);
        }
        let norm: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= norm;
        }
        (nodes, weights)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, &QuadOptions::tight());
        assert!(r.converged);
        assert!((r.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate_to_infinity(|x: f64| (-x).exp(), 0.0, &QuadOptions::tight());
        assert!((r.value - 1.0).abs() < 1e-12, "{:?}", r.value);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            std::f64::consts::PI,
            &QuadOptions::tight(),
        );
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn hermite_moments() {
        let (x, w) = gauss_hermite(6);
        let m4: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(4)).sum();
        let m10: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((m4 - 3.0).abs() < 1e-12);
        assert!((m10 - 945.0).abs() < 1e-9);
    }

    #[test]
    fn eval_cap_reports_nonconvergence() {
        let opts = QuadOptions { rel_tol: 1e-15, abs_tol: 0.0, max_evals: 100 };
        let r = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &opts);
        assert!(!r.converged);
        assert!(r.require(&opts).is_err());
    }
}
