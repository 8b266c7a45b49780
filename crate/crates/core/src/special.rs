//! Bessel functions and combinatorial helpers, generic over `num_traits::Float`.
//!
//! All routines go through integral representations that converge
//! geometrically under the trapezoid rule (periodic or doubly-exponentially
//! decaying integrands), or through composite Gauss-Legendre panels where no
//! such representation exists.

use num_traits::Float;

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("constant representable")
}

const GL10_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// Composite 10-point Gauss-Legendre over `[a, b]` split into `panels` pieces.
fn gauss_legendre<T: Float, F: Fn(T) -> T>(f: F, a: T, b: T, panels: usize) -> T {
    let panels = panels.max(1);
    let width = (b - a) / c::<T>(panels as f64);
    let half = width / c(2.0);
    let mut total = T::zero();
    for p in 0..panels {
        let mid = a + width * c::<T>(p as f64) + half;
        for (node, weight) in GL10_NODES.iter().zip(GL10_WEIGHTS.iter()) {
            let dx = half * c(*node);
            total = total + c::<T>(*weight) * (f(mid - dx) + f(mid + dx)) * half;
        }
    }
    total
}

/// `exp(x) K_1(x)` for `x > 0`, from `K_1(x) = ∫_0^∞ exp(-x cosh t) cosh t dt`.
pub fn bessel_k1_scaled<T: Float>(x: T) -> T {
    assert!(x > T::zero(), "bessel_k1 requires a positive argument");
    let h: T = c(0.05);
    let limit: T = c(45.0);
    let mut sum = c::<T>(0.5);
    let mut k = 1usize;
    loop {
        let t = h * c::<T>(k as f64);
        let ch = t.cosh();
        let arg = x * (ch - T::one());
        if arg > limit {
            break;
        }
        sum = sum + (-arg).exp() * ch;
        k += 1;
    }
    sum * h
}

pub fn bessel_k1<T: Float>(x: T) -> T {
    bessel_k1_scaled(x) * (-x).exp()
}

/// `exp(x) K_0(x)` for `x > 0`, from `K_0(x) = ∫_0^∞ exp(-x cosh t) dt`.
pub fn bessel_k0_scaled<T: Float>(x: T) -> T {
    assert!(x > T::zero(), "bessel_k0 requires a positive argument");
    let h: T = c(0.05);
    let limit: T = c(45.0);
    let mut sum = c::<T>(0.5);
    let mut k = 1usize;
    loop {
        let t = h * c::<T>(k as f64);
        let arg = x * (t.cosh() - T::one());
        if arg > limit {
            break;
        }
        sum = sum + (-arg).exp();
        k += 1;
    }
    sum * h
}

pub fn bessel_k0<T: Float>(x: T) -> T {
    bessel_k0_scaled(x) * (-x).exp()
}

/// `exp(-x) I_n(x)` for `x >= 0` via the periodic trapezoid rule.
pub fn bessel_i_scaled<T: Float>(n: u32, x: T) -> T {
    let points = 64 + 2 * x.abs().to_f64().unwrap_or(0.0).ceil() as usize + 2 * n as usize;
    let two_pi: T = c(std::f64::consts::TAU);
    let mut sum = T::zero();
    for k in 0..points {
        let theta = two_pi * c::<T>(k as f64) / c::<T>(points as f64);
        sum = sum + (x * (theta.cos() - T::one())).exp() * (c::<T>(n as f64) * theta).cos();
    }
    sum / c::<T>(points as f64)
}

pub fn bessel_i<T: Float>(n: u32, x: T) -> T {
    bessel_i_scaled(n, x) * x.exp()
}

/// `J_n(x)` from the periodic Bessel integral.
pub fn bessel_j<T: Float>(n: u32, x: T) -> T {
    let points = 64 + 2 * x.abs().to_f64().unwrap_or(0.0).ceil() as usize + 2 * n as usize;
    let two_pi: T = c(std::f64::consts::TAU);
    let mut sum = T::zero();
    for k in 0..points {
        let theta = two_pi * c::<T>(k as f64) / c::<T>(points as f64);
        sum = sum + (x * theta.sin() - c::<T>(n as f64) * theta).cos();
    }
    sum / c::<T>(points as f64)
}

/// `Y_1(x)` for `x > 0` from
/// `Y_1 = (1/π)∫_0^π sin(x sinθ - θ) dθ - (2/π)∫_0^∞ sinh t exp(-x sinh t) dt`.
pub fn bessel_y1<T: Float>(x: T) -> T {
    assert!(x > T::zero(), "bessel_y1 requires a positive argument");
    let pi: T = c(std::f64::consts::PI);
    let xf = x.to_f64().unwrap_or(1.0);
    let osc_panels = (8.0 + xf * 2.0).ceil() as usize;
    let first = gauss_legendre(|th: T| (x * th.sin() - th).sin(), T::zero(), pi, osc_panels);
    let upper = (45.0 / xf).asinh() + 1.0;
    let width = (1.0 / xf).min(0.25);
    let panels = (upper / width).ceil() as usize;
    let second = gauss_legendre(
        |t: T| t.sinh() * (-(x * t.sinh())).exp(),
        T::zero(),
        c(upper),
        panels,
    );
    (first - c::<T>(2.0) * second) / pi
}

/// `(2n-1)!!` with the convention `(-1)!! = 1`.
pub fn double_factorial_odd(n: u32) -> f64 {
    (1..=n).map(|k| (2 * k - 1) as f64).product()
}

pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + G + 0.5;
    let a = COEF.iter().enumerate().skip(1).fold(COEF[0], |a, (i, c)| a + c / (x + i as f64));
    0.5 * std::f64::consts::TAU.ln() + (x + 0.5) * t.ln() - t + a.ln()
}
