//! Test functions: Gaussian bumps with polynomial prefactors, finite sums of
//! them, and lattice grid functions.

use std::collections::BTreeMap;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::special::{double_factorial_odd, ln_gamma};

pub type Point = [f64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial in the four offset coordinates `u = x - center`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    terms: Vec<([u8; 4], Complex64)>,
}

impl Poly {
    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_map(BTreeMap::from([([0u8; 4], c)]))
    }

    pub fn monomial(powers: [u8; 4], c: Complex64) -> Self {
        Self::from_map(BTreeMap::from([(powers, c)]))
    }

    /// Linear form `Σ_k a_k u_k + b`.
    pub fn linear(a: [f64; 4], b: f64) -> Self {
        let mut map = BTreeMap::new();
        map.insert([0; 4], Complex64::new(b, 0.0));
        for (k, &ak) in a.iter().enumerate() {
            let mut p = [0u8; 4];
            p[k] = 1;
            map.insert(p, Complex64::new(ak, 0.0));
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<[u8; 4], Complex64>) -> Self {
        Self { terms: map.into_iter().filter(|(_, c)| *c != ZERO).collect() }
    }

    fn to_map(&self) -> BTreeMap<[u8; 4], Complex64> {
        self.terms.iter().cloned().collect()
    }

    pub fn terms(&self) -> &[([u8; 4], Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(p, _)| p.iter().map(|&e| e as usize).sum()).max().unwrap_or(0)
    }

    /// Highest power of each coordinate.
    pub fn max_powers(&self) -> [usize; 4] {
        let mut out = [0; 4];
        for (p, _) in &self.terms {
            for k in 0..4 {
                out[k] = out[k].max(p[k] as usize);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut map = self.to_map();
        for (p, c) in &other.terms {
            *map.entry(*p).or_insert(ZERO) += c;
        }
        Self::from_map(map)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_map(self.terms.iter().map(|(p, c)| (*p, c * s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map = BTreeMap::new();
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                let r = [p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]];
                *map.entry(r).or_insert(ZERO) += c * d;
            }
        }
        Self::from_map(map)
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut map = BTreeMap::new();
        for (p, c) in &self.terms {
            if p[k] > 0 {
                let mut q = *p;
                q[k] -= 1;
                *map.entry(q).or_insert(ZERO) += c * p[k] as f64;
            }
        }
        Self::from_map(map)
    }

    /// `u_k · P(u)`.
    pub fn times_coordinate(&self, k: usize) -> Self {
        Self::from_map(
            self.terms
                .iter()
                .map(|(p, c)| {
                    let mut q = *p;
                    q[k] += 1;
                    (q, *c)
                })
                .collect(),
        )
    }

    pub fn eval(&self, u: &Point) -> Complex64 {
        self.terms.iter().fold(ZERO, |acc, (p, c)| {
            acc + c * (0..4).map(|k| u[k].powi(p[k] as i32)).product::<f64>()
        })
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect() }
    }

    /// `P(M u + shift)`.
    pub fn substitute(&self, m: &Matrix4<f64>, shift: &Point) -> Self {
        let rows: Vec<Poly> = (0..4)
            .map(|k| Poly::linear([m[(k, 0)], m[(k, 1)], m[(k, 2)], m[(k, 3)]], shift[k]))
            .collect();
        let mut powers: Vec<Vec<Poly>> = rows
            .iter()
            .map(|r| vec![Poly::one(), r.clone()])
            .collect();
        let mut out = Poly::from_map(BTreeMap::new());
        for (p, c) in &self.terms {
            let mut term = Poly::constant(*c);
            for k in 0..4 {
                let e = p[k] as usize;
                while powers[k].len() <= e {
                    let next = powers[k].last().expect("non-empty").mul(&rows[k]);
                    powers[k].push(next);
                }
                term = term.mul(&powers[k][e]);
            }
            out = out.add(&term);
        }
        out
    }

    /// `P(u + shift)`.
    pub fn shift(&self, shift: &Point) -> Self {
        if shift.iter().all(|&s| s == 0.0) {
            return self.clone();
        }
        self.substitute(&Matrix4::identity(), shift)
    }

    /// `P(u₀ → -u₀)`.
    pub fn reflect_time(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (*p, if p[0] % 2 == 1 { -c } else { *c }))
                .collect(),
        }
    }

    fn key_bits(&self, out: &mut Vec<u64>) {
        for (p, c) in &self.terms {
            out.push(u32::from_le_bytes(*p) as u64);
            out.push(c.re.to_bits());
            out.push(c.im.to_bits());
        }
    }
}

/// `P(x - c) · exp(-|x - c|² / (2 w²))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: Point,
    pub width: f64,
    pub poly: Poly,
}

/// `∫ u^n exp(-u²/(2 s²)) du`.
pub fn gaussian_moment(n: usize, s: f64) -> f64 {
    if n % 2 == 1 {
        0.0
    } else {
        (2.0 * std::f64::consts::PI).sqrt() * s.powi(n as i32 + 1) * double_factorial_odd((n / 2) as u32)
    }
}

impl Bump {
    pub fn gaussian(center: Point, width: f64) -> Self {
        Self { center, width, poly: Poly::one() }
    }

    pub fn with_poly(center: Point, width: f64, poly: Poly) -> Self {
        Self { center, width, poly }
    }

    fn offset(&self, x: &Point) -> Point {
        [x[0] - self.center[0], x[1] - self.center[1], x[2] - self.center[2], x[3] - self.center[3]]
    }

    pub fn eval(&self, x: &Point) -> Complex64 {
        let u = self.offset(x);
        let r2: f64 = u.iter().map(|v| v * v).sum();
        self.poly.eval(&u) * (-r2 / (2.0 * self.width * self.width)).exp()
    }

    pub fn derivative(&self, k: usize) -> Self {
        let w2 = self.width * self.width;
        let poly = self.poly.derivative(k).add(&self.poly.times_coordinate(k).scale(Complex64::new(-1.0 / w2, 0.0)));
        Self { center: self.center, width: self.width, poly }
    }

    pub fn conj(&self) -> Self {
        Self { center: self.center, width: self.width, poly: self.poly.conj() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { center: self.center, width: self.width, poly: self.poly.scale(s) }
    }

    /// `x ↦ (-x⁰, x⃗)` pullback.
    pub fn time_reflect(&self) -> Self {
        let mut center = self.center;
        center[0] = -center[0];
        Self { center, width: self.width, poly: self.poly.reflect_time() }
    }

    pub fn translate(&self, a: &Point) -> Self {
        let mut center = self.center;
        for k in 0..4 {
            center[k] += a[k];
        }
        Self { center, width: self.width, poly: self.poly.clone() }
    }

    /// `f'(x) = f(R⁻¹(x - a))` for orthogonal `R`.
    pub fn pullback(&self, r: &Matrix4<f64>, a: &Point) -> Self {
        let c = r * nalgebra::Vector4::from(self.center);
        let center = [c[0] + a[0], c[1] + a[1], c[2] + a[2], c[3] + a[3]];
        Self { center, width: self.width, poly: self.poly.substitute(&r.transpose(), &[0.0; 4]) }
    }

    /// Pointwise product, again a bump.
    pub fn product(&self, other: &Self) -> Self {
        let s2 = self.width * self.width;
        let r2 = other.width * other.width;
        let w2 = s2 * r2 / (s2 + r2);
        let mut center = [0.0; 4];
        let mut dist2 = 0.0;
        for k in 0..4 {
            center[k] = w2 * (self.center[k] / s2 + other.center[k] / r2);
            dist2 += (self.center[k] - other.center[k]).powi(2);
        }
        let k_fac = (-dist2 / (2.0 * (s2 + r2))).exp();
        let d1: Point = std::array::from_fn(|k| center[k] - self.center[k]);
        let d2: Point = std::array::from_fn(|k| center[k] - other.center[k]);
        let poly = self.poly.shift(&d1).mul(&other.poly.shift(&d2)).scale(Complex64::new(k_fac, 0.0));
        Self { center, width: w2.sqrt(), poly }
    }

    pub fn integral(&self) -> Complex64 {
        self.poly.terms().iter().fold(ZERO, |acc, (p, c)| {
            acc + c * (0..4).map(|k| gaussian_moment(p[k] as usize, self.width)).product::<f64>()
        })
    }

    /// Weighted L1 scale `Σ |c_a| Π_k ∫|u_k|^{a_k} G`, used to normalize leakage.
    fn l1_scale(&self) -> f64 {
        self.poly
            .terms()
            .iter()
            .map(|(p, c)| c.norm() * (0..4).map(|k| abs_moment(p[k] as usize, self.width)).product::<f64>())
            .sum()
    }

    /// Bound on the mass at `x⁰ <= 0` relative to the L1 scale.
    pub fn negative_time_leakage(&self) -> f64 {
        let cut = -self.center[0];
        let leak: f64 = self
            .poly
            .terms()
            .iter()
            .map(|(p, c)| {
                c.norm()
                    * abs_moment_below(p[0] as usize, self.width, cut)
                    * (1..4).map(|k| abs_moment(p[k] as usize, self.width)).product::<f64>()
            })
            .sum();
        let scale = self.l1_scale();
        if scale == 0.0 {
            0.0
        } else {
            leak / scale
        }
    }

    pub(crate) fn key_bits(&self, out: &mut Vec<u64>) {
        for c in self.center {
            out.push(c.to_bits());
        }
        out.push(self.width.to_bits());
        self.poly.key_bits(out);
        out.push(u64::MAX);
    }
}

fn abs_moment(n: usize, s: f64) -> f64 {
    // ∫ |u|^n G du = 2^{n/2} Γ((n+1)/2) s^{n+1}
    let half = (n as f64 + 1.0) / 2.0;
    2f64.powf(n as f64 / 2.0) * ln_gamma(half).exp() * s.powi(n as i32 + 1)
}

fn abs_moment_below(n: usize, s: f64, cut: f64) -> f64 {
    // ∫_{-∞}^{cut} |u|^n exp(-u²/2s²) du
    let f = |u: f64| u.abs().powi(n as i32) * (-u * u / (2.0 * s * s)).exp();
    let lo = cut.min(0.0) - 40.0 * s;
    if cut < lo {
        return 0.0;
    }
    let opts = QuadOptions { rel_tol: 1e-10, abs_tol: 1e-300, max_evals: 200_000 };
    integrate(f, lo, cut, &opts).value
}

/// Signed axis permutation followed by a lattice translation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypercubicElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
    pub shift: Vec<i64>,
}

impl HypercubicElement {
    pub fn identity(rank: usize) -> Self {
        Self { perm: (0..rank).collect(), signs: vec![1; rank], shift: vec![0; rank] }
    }

    pub fn random<R: rand::Rng + ?Sized>(rank: usize, extents: &[usize], rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..rank).collect();
        // only permute axes of equal extent
        if extents.iter().all(|&e| e == extents[0]) {
            perm.shuffle(rng);
        }
        let signs = (0..rank).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let shift = extents.iter().map(|&e| rng.random_range(0..e as i64)).collect();
        Self { perm, signs, shift }
    }

    /// Orthogonal matrix of the point part, padded to 4×4.
    pub fn matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        for i in 0..self.perm.len().min(4) {
            for j in 0..self.perm.len().min(4) {
                m[(i, j)] = if self.perm[i] == j { self.signs[i] as f64 } else { 0.0 };
            }
        }
        m
    }
}

/// Values on lattice sites (coordinate 0 is time, slowest index).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub dims: Vec<usize>,
    pub spacing: f64,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(dims: &[usize], spacing: f64) -> Self {
        Self { dims: dims.to_vec(), spacing, values: vec![ZERO; dims.iter().product()] }
    }

    pub fn site_index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.dims).fold(0, |acc, (xi, d)| acc * d + xi)
    }

    pub fn coords(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = idx % self.dims[k];
            idx /= self.dims[k];
        }
        out
    }

    /// Periodic shift: `g(x) = f(x - a)`.
    pub fn translate(&self, a: &[i64]) -> Self {
        let mut out = Self::zeros(&self.dims, self.spacing);
        for (i, v) in self.values.iter().enumerate() {
            let x = self.coords(i);
            let y: Vec<usize> = x
                .iter()
                .zip(a)
                .zip(&self.dims)
                .map(|((xi, ai), d)| (*xi as i64 + ai).rem_euclid(*d as i64) as usize)
                .collect();
            let j = out.site_index(&y);
            out.values[j] = *v;
        }
        out
    }

    /// `g(x) = f(R⁻¹(x - a))` for a signed axis permutation `R`, with
    /// `(Rx)_i = sign_i x_{perm_i}` acting on site positions `x + offset`.
    pub fn pullback_hypercubic(&self, el: &HypercubicElement, offset: f64) -> Result<Self> {
        let d = self.dims.len();
        if el.perm.len() != d || el.signs.len() != d || el.shift.len() != d {
            return Err(Error::DimensionMismatch(format!("hypercubic element of rank {} on a rank-{d} grid", el.perm.len())));
        }
        for i in 0..d {
            if self.dims[el.perm[i]] != self.dims[i] {
                return Err(Error::Geometry("axis permutation between unequal extents".into()));
            }
        }
        let mut out = Self::zeros(&self.dims, self.spacing);
        for (idx, v) in self.values.iter().enumerate() {
            let x = self.coords(idx);
            let mut y = vec![0usize; d];
            for i in 0..d {
                let pos = x[el.perm[i]] as f64 + offset;
                let moved = el.signs[i] as f64 * pos - offset + el.shift[i] as f64;
                y[i] = (moved.round() as i64).rem_euclid(self.dims[i] as i64) as usize;
            }
            let j = out.site_index(&y);
            out.values[j] = *v;
        }
        Ok(out)
    }

    /// Site reflection `t ↦ -1 - t` (mod T) followed by complex conjugation.
    pub fn theta(&self) -> Self {
        let t_ext = self.dims[0] as i64;
        let mut out = Self::zeros(&self.dims, self.spacing);
        for (i, v) in self.values.iter().enumerate() {
            let mut x = self.coords(i);
            x[0] = (-1 - x[0] as i64).rem_euclid(t_ext) as usize;
            let j = out.site_index(&x);
            out.values[j] = v.conj();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    Smooth { bumps: Vec<Bump> },
    Grid(GridFunction),
}

impl TestFunction {
    pub fn gaussian(center: Point, width: f64) -> Self {
        TestFunction::Smooth { bumps: vec![Bump::gaussian(center, width)] }
    }

    pub fn from_bump(b: Bump) -> Self {
        TestFunction::Smooth { bumps: vec![b] }
    }

    pub fn bumps(&self) -> Result<&[Bump]> {
        match self {
            TestFunction::Smooth { bumps } => Ok(bumps),
            TestFunction::Grid(_) => Err(Error::DimensionMismatch("expected closed-form test function, got grid".into())),
        }
    }

    pub fn grid(&self) -> Result<&GridFunction> {
        match self {
            TestFunction::Grid(g) => Ok(g),
            TestFunction::Smooth { .. } => Err(Error::DimensionMismatch("expected grid test function, got closed form".into())),
        }
    }

    /// Argument dimension (4 for closed-form functions, the lattice rank for grids).
    pub fn dimension(&self) -> usize {
        match self {
            TestFunction::Smooth { .. } => 4,
            TestFunction::Grid(g) => g.dims.len(),
        }
    }

    fn map_bumps(&self, f: impl Fn(&Bump) -> Bump) -> Self {
        match self {
            TestFunction::Smooth { bumps } => TestFunction::Smooth { bumps: bumps.iter().map(f).collect() },
            TestFunction::Grid(g) => TestFunction::Grid(g.clone()),
        }
    }

    pub fn eval(&self, x: &Point) -> Complex64 {
        match self {
            TestFunction::Smooth { bumps } => bumps.iter().map(|b| b.eval(x)).sum(),
            TestFunction::Grid(_) => ZERO,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        match self {
            TestFunction::Grid(g) => {
                TestFunction::Grid(GridFunction { values: g.values.iter().map(|v| v * s).collect(), ..g.clone() })
            }
            _ => self.map_bumps(|b| b.scale(s)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (TestFunction::Smooth { bumps: a }, TestFunction::Smooth { bumps: b }) => {
                Ok(TestFunction::Smooth { bumps: a.iter().chain(b).cloned().collect() })
            }
            (TestFunction::Grid(a), TestFunction::Grid(b)) if a.dims == b.dims => Ok(TestFunction::Grid(GridFunction {
                values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect(),
                ..a.clone()
            })),
            _ => Err(Error::DimensionMismatch("cannot add test functions of different kinds".into())),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            TestFunction::Grid(g) => {
                TestFunction::Grid(GridFunction { values: g.values.iter().map(|v| v.conj()).collect(), ..g.clone() })
            }
            _ => self.map_bumps(|b| b.conj()),
        }
    }

    /// `Θ`: time reflection followed by complex conjugation.
    pub fn theta(&self) -> Self {
        match self {
            TestFunction::Grid(g) => TestFunction::Grid(g.theta()),
            _ => self.map_bumps(|b| b.time_reflect().conj()),
        }
    }

    pub fn derivative(&self, k: usize) -> Result<Self> {
        match self {
            TestFunction::Smooth { .. } => Ok(self.map_bumps(|b| b.derivative(k))),
            TestFunction::Grid(_) => Err(Error::Unsupported("derivative of grid function".into())),
        }
    }

    pub fn translate(&self, a: &Point) -> Self {
        self.map_bumps(|b| b.translate(a))
    }

    pub fn pullback(&self, r: &Matrix4<f64>, a: &Point) -> Self {
        self.map_bumps(|b| b.pullback(r, a))
    }

    pub fn integral(&self) -> Complex64 {
        match self {
            TestFunction::Smooth { bumps } => bumps.iter().map(|b| b.integral()).sum(),
            TestFunction::Grid(g) => g.values.iter().sum::<Complex64>() * g.spacing.powi(g.dims.len() as i32),
        }
    }

    /// Largest relative mass at non-positive times over all bumps.
    pub fn negative_time_leakage(&self) -> f64 {
        match self {
            TestFunction::Smooth { bumps } => bumps.iter().map(|b| b.negative_time_leakage()).fold(0.0, f64::max),
            TestFunction::Grid(g) => {
                let t0: f64 = g
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| g.coords(*i)[0] >= g.dims[0] / 2)
                    .map(|(_, v)| v.norm())
                    .sum();
                let all: f64 = g.values.iter().map(|v| v.norm()).sum();
                if all == 0.0 {
                    0.0
                } else {
                    t0 / all
                }
            }
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            TestFunction::Smooth { bumps } => bumps.iter().all(|b| b.poly.terms().iter().all(|(_, c)| c.im == 0.0)),
            TestFunction::Grid(g) => g.values.iter().all(|v| v.im == 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let b = Bump::with_poly([0.1, -0.2, 0.3, 0.0], 0.7, Poly::monomial([1, 0, 2, 0], c(1.5)));
        let x = [0.4, 0.1, -0.3, 0.2];
        for k in 0..4 {
            let h = 1e-5;
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let fd = (b.eval(&xp) - b.eval(&xm)) / (2.0 * h);
            assert!((b.derivative(k).eval(&x) - fd).norm() < 1e-8);
        }
    }

    #[test]
    fn product_is_pointwise() {
        let a = Bump::with_poly([0.0, 1.0, 0.0, 0.0], 0.8, Poly::linear([1.0, 0.0, -2.0, 0.5], 0.3));
        let b = Bump::with_poly([0.5, 0.0, 0.2, -0.1], 0.5, Poly::monomial([0, 2, 0, 1], Complex64::new(0.0, 1.0)));
        let p = a.product(&b);
        let x = [0.2, 0.4, -0.1, 0.3];
        assert!((p.eval(&x) - a.eval(&x) * b.eval(&x)).norm() < 1e-14);
    }

    #[test]
    fn pullback_under_rotation() {
        let th: f64 = 0.6;
        let mut r = Matrix4::identity();
        r[(1, 1)] = th.cos();
        r[(1, 2)] = -th.sin();
        r[(2, 1)] = th.sin();
        r[(2, 2)] = th.cos();
        let a = [0.3, -0.1, 0.2, 0.5];
        let b = Bump::with_poly([0.1, 0.2, 0.3, 0.4], 0.9, Poly::monomial([0, 2, 1, 0], c(1.0)));
        let moved = b.pullback(&r, &a);
        let x = [0.7, -0.4, 0.6, 0.1];
        let y = r.transpose() * nalgebra::Vector4::new(x[0] - a[0], x[1] - a[1], x[2] - a[2], x[3] - a[3]);
        assert!((moved.eval(&x) - b.eval(&[y[0], y[1], y[2], y[3]])).norm() < 1e-14);
    }

    #[test]
    fn integral_of_unit_gaussian() {
        let b = Bump::gaussian([1.0, 2.0, 3.0, 4.0], 1.0);
        let want = (2.0 * std::f64::consts::PI).powi(2);
        assert!((b.integral().re - want).abs() < 1e-12);
    }

    #[test]
    fn leakage_is_small_for_separated_bump() {
        let b = Bump::gaussian([1.0, 0.0, 0.0, 0.0], 0.12);
        assert!(b.negative_time_leakage() < 1e-10);
        let wide = Bump::gaussian([1.0, 0.0, 0.0, 0.0], 0.5);
        assert!(wide.negative_time_leakage() > 1e-4);
    }

    #[test]
    fn grid_translate_roundtrip() {
        let mut g = GridFunction::zeros(&[4, 4], 1.0);
        g.values[5] = c(2.0);
        let back = g.translate(&[1, -3]).translate(&[-1, 3]);
        assert_eq!(back, g);
    }
}
