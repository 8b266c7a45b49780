//! Compact gauge groups U(1), SU(2), SU(3): generators, structure constants,
//! adjoint representation, exponential map and Haar sampling.

use nalgebra::{Complex, ComplexField, DMatrix};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type CMat<T> = DMatrix<Complex<T>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    U1,
    SU2,
    SU3,
}

impl GroupKind {
    pub fn dim_algebra(self) -> usize {
        match self {
            GroupKind::U1 => 1,
            GroupKind::SU2 => 3,
            GroupKind::SU3 => 8,
        }
    }

    pub fn matrix_dim(self) -> usize {
        match self {
            GroupKind::U1 => 1,
            GroupKind::SU2 => 2,
            GroupKind::SU3 => 3,
        }
    }

    pub fn is_abelian(self) -> bool {
        self == GroupKind::U1
    }

    pub fn code(self) -> u8 {
        match self {
            GroupKind::U1 => 1,
            GroupKind::SU2 => 2,
            GroupKind::SU3 => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(GroupKind::U1),
            2 => Some(GroupKind::SU2),
            3 => Some(GroupKind::SU3),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::U1 => "U1",
            GroupKind::SU2 => "SU2",
            GroupKind::SU3 => "SU3",
        }
    }

    /// Normalization note carried into reports.
    pub fn normalization_note(self) -> &'static str {
        match self {
            GroupKind::U1 => "t = -i/sqrt(2), tr(t t) = -1/2 (abelian extension)",
            _ => "anti-Hermitian t_a, tr(t_a t_b) = -delta_ab/2",
        }
    }
}

pub(crate) fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

fn pauli<T: Real>(k: usize) -> CMat<T> {
    let entries: [(f64, f64); 4] = match k {
        0 => [(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
        1 => [(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)],
        _ => [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)],
    };
    CMat::from_row_slice(2, 2, &entries.map(|(r, i)| cx(r, i)))
}

fn gell_mann<T: Real>(k: usize) -> CMat<T> {
    let mut m = CMat::<T>::zeros(3, 3);
    let s3 = 1.0 / 3f64.sqrt();
    let mut set = |i: usize, j: usize, re: f64, im: f64| m[(i, j)] = cx(re, im);
    match k {
        0 => {
            set(0, 1, 1.0, 0.0);
            set(1, 0, 1.0, 0.0);
        }
        1 => {
            set(0, 1, 0.0, -1.0);
            set(1, 0, 0.0, 1.0);
        }
        2 => {
            set(0, 0, 1.0, 0.0);
            set(1, 1, -1.0, 0.0);
        }
        3 => {
            set(0, 2, 1.0, 0.0);
            set(2, 0, 1.0, 0.0);
        }
        4 => {
            set(0, 2, 0.0, -1.0);
            set(2, 0, 0.0, 1.0);
        }
        5 => {
            set(1, 2, 1.0, 0.0);
            set(2, 1, 1.0, 0.0);
        }
        6 => {
            set(1, 2, 0.0, -1.0);
            set(2, 1, 0.0, 1.0);
        }
        _ => {
            set(0, 0, s3, 0.0);
            set(1, 1, s3, 0.0);
            set(2, 2, -2.0 * s3, 0.0);
        }
    }
    m
}

/// Anti-Hermitian generator basis with `tr(t_a t_b) = -δ_ab / 2`.
pub fn generators<T: Real>(kind: GroupKind) -> Vec<CMat<T>> {
    let minus_half_i = cx::<T>(0.0, -0.5);
    match kind {
        GroupKind::U1 => vec![CMat::from_element(1, 1, cx(0.0, -std::f64::consts::FRAC_1_SQRT_2))],
        GroupKind::SU2 => (0..3).map(|k| pauli::<T>(k) * minus_half_i).collect(),
        GroupKind::SU3 => (0..8).map(|k| gell_mann::<T>(k) * minus_half_i).collect(),
    }
}

/// Real coordinates of a matrix in the generator basis: `c_a = -2 Re tr(t_a M)`.
pub fn algebra_coordinates<T: Real>(kind: GroupKind, m: &CMat<T>) -> Vec<T> {
    generators::<T>(kind)
        .iter()
        .map(|t| T::lit(-2.0) * (t * m).trace().re)
        .collect()
}

/// `C[γ][α][β]` with `[t_α, t_β] = Σ_γ C^γ_{αβ} t_γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<T> {
    pub dim: usize,
    data: Vec<T>,
}

impl<T: Real> StructureConstants<T> {
    pub fn get(&self, gamma: usize, alpha: usize, beta: usize) -> T {
        self.data[(gamma * self.dim + alpha) * self.dim + beta]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| *c == T::zero())
    }
}

pub fn structure_constants<T: Real>(kind: GroupKind) -> StructureConstants<T> {
    let ts = generators::<T>(kind);
    let n = ts.len();
    let mut data = vec![T::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            let comm = &ts[a] * &ts[b] - &ts[b] * &ts[a];
            for (g, coord) in algebra_coordinates(kind, &comm).into_iter().enumerate() {
                // Snap rounding noise so that vanishing constants are exactly zero.
                let snapped = if coord.abs() < T::lit(1e-14) { T::zero() } else { coord };
                data[(g * n + a) * n + b] = snapped;
            }
        }
    }
    StructureConstants { dim: n, data }
}

/// Adjoint-representation generator with entries `(t_γ)^α_δ = −i C^α_{δγ}`.
pub fn adjoint_generator<T: Real>(kind: GroupKind, gamma: usize) -> Result<CMat<T>> {
    let n = kind.dim_algebra();
    if gamma >= n {
        return Err(Error::IndexOutOfRange { index: gamma, dim: n });
    }
    let c = structure_constants::<T>(kind);
    Ok(CMat::from_fn(n, n, |alpha, delta| {
        Complex::new(T::zero(), -c.get(alpha, delta, gamma))
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T> {
    pub kind: GroupKind,
    pub coefficients: Vec<T>,
}

impl<T: Real> AlgebraElement<T> {
    pub fn new(kind: GroupKind, coefficients: Vec<T>) -> Result<Self> {
        if coefficients.len() != kind.dim_algebra() {
            return Err(Error::IndexOutOfRange { index: coefficients.len(), dim: kind.dim_algebra() });
        }
        Ok(Self { kind, coefficients })
    }

    pub fn zero(kind: GroupKind) -> Self {
        Self { kind, coefficients: vec![T::zero(); kind.dim_algebra()] }
    }

    pub fn to_matrix(&self) -> CMat<T> {
        let d = self.kind.matrix_dim();
        generators::<T>(self.kind)
            .iter()
            .zip(&self.coefficients)
            .fold(CMat::zeros(d, d), |acc, (t, c)| acc + t * Complex::new(*c, T::zero()))
    }

    /// Lie bracket computed from the structure constants.
    pub fn bracket(&self, other: &Self) -> Self {
        let c = structure_constants::<T>(self.kind);
        let n = self.coefficients.len();
        let coefficients = (0..n)
            .map(|g| {
                let mut s = T::zero();
                for a in 0..n {
                    for b in 0..n {
                        s += c.get(g, a, b) * self.coefficients[a] * other.coefficients[b];
                    }
                }
                s
            })
            .collect();
        Self { kind: self.kind, coefficients }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<T: Real> {
    pub kind: GroupKind,
    pub matrix: CMat<T>,
}

impl<T: Real> GroupElement<T> {
    pub fn identity(kind: GroupKind) -> Self {
        let d = kind.matrix_dim();
        Self { kind, matrix: CMat::identity(d, d) }
    }

    pub fn inverse(&self) -> Self {
        Self { kind: self.kind, matrix: self.matrix.adjoint() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { kind: self.kind, matrix: &self.matrix * &other.matrix }
    }

    /// `‖U†U − I‖` (max-abs entry).
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.matrix.nrows();
        (self.matrix.adjoint() * &self.matrix - CMat::<T>::identity(d, d))
            .iter()
            .map(|z| z.modulus().to_f64_lossy())
            .fold(0.0, f64::max)
    }

    pub fn det_defect(&self) -> f64 {
        if self.kind == GroupKind::U1 {
            return 0.0;
        }
        (self.matrix.determinant() - Complex::new(T::one(), T::zero())).modulus().to_f64_lossy()
    }

    /// `g X g⁻¹` on an algebra element.
    pub fn adjoint_action(&self, x: &AlgebraElement<T>) -> AlgebraElement<T> {
        let m = &self.matrix * x.to_matrix() * self.matrix.adjoint();
        AlgebraElement { kind: self.kind, coefficients: algebra_coordinates(self.kind, &m) }
    }

    /// Real orthogonal matrix of the adjoint action in the generator basis.
    pub fn adjoint_matrix(&self) -> DMatrix<T> {
        let ts = generators::<T>(self.kind);
        let n = ts.len();
        DMatrix::from_fn(n, n, |a, b| {
            let m = &self.matrix * &ts[b] * self.matrix.adjoint();
            T::lit(-2.0) * (&ts[a] * m).trace().re
        })
    }
}

/// `exp(scale · x)` through the Hermitian eigendecomposition of `i·scale·x`.
pub fn exp_map<T: Real>(x: &AlgebraElement<T>, scale: T) -> Result<GroupElement<T>> {
    if !scale.is_finite() || x.coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let h = x.to_matrix() * Complex::new(T::zero(), scale);
    let h = (&h + h.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let eig = h.symmetric_eigen();
    let d = eig.eigenvalues.len();
    let phases = CMat::from_fn(d, d, |i, j| {
        if i == j {
            let a = eig.eigenvalues[i];
            Complex::new(a.cos(), -a.sin())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    let v = &eig.eigenvectors;
    Ok(GroupElement { kind: x.kind, matrix: v * phases * v.adjoint() })
}

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let z: f64 = StandardNormal.sample(rng);
    T::lit(z)
}

/// Haar-distributed group element.
pub fn haar_sample<T: Real, R: Rng + ?Sized>(kind: GroupKind, rng: &mut R) -> GroupElement<T> {
    let matrix = match kind {
        GroupKind::U1 => {
            let theta = T::lit(rng.random::<f64>() * std::f64::consts::TAU);
            CMat::from_element(1, 1, Complex::new(theta.cos(), theta.sin()))
        }
        GroupKind::SU2 => {
            let mut a: [T; 4] = [normal(rng), normal(rng), normal(rng), normal(rng)];
            let norm = a.iter().fold(T::zero(), |s, x| s + *x * *x).sqrt();
            for x in &mut a {
                *x /= norm;
            }
            su2_from_quaternion(a)
        }
        GroupKind::SU3 => {
            let g = CMat::<T>::from_fn(3, 3, |_, _| {
                let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
                Complex::new(normal::<T, R>(rng) * h, normal::<T, R>(rng) * h)
            });
            let qr = g.qr();
            let mut q = qr.q();
            let r = qr.r();
            for j in 0..3 {
                let rjj = r[(j, j)];
                let phase = rjj / Complex::new(rjj.modulus(), T::zero());
                for i in 0..3 {
                    q[(i, j)] *= phase;
                }
            }
            let det = q.determinant();
            let arg = det.im.atan2(det.re) / T::lit(3.0);
            q * Complex::new(arg.cos(), -arg.sin())
        }
    };
    GroupElement { kind, matrix }
}

/// `a0 I + i (a1 σ1 + a2 σ2 + a3 σ3)` for a unit quaternion.
pub fn su2_from_quaternion<T: Real>(a: [T; 4]) -> CMat<T> {
    CMat::from_row_slice(
        2,
        2,
        &[
            Complex::new(a[0], a[3]),
            Complex::new(a[2], a[1]),
            Complex::new(-a[2], a[1]),
            Complex::new(a[0], -a[3]),
        ],
    )
}
