//! Finite-dimensional spacetime representations: spinor tensor products and
//! the vector representation for SL(2,C) (Lorentz) and SU(2)×SU(2) (Euclidean).

use nalgebra::{Complex, DMatrix, Matrix4};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::gauge::{cx, su2_from_quaternion, CMat};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    Euclidean,
    Minkowski,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "Euclidean",
            Metric::Minkowski => "Minkowski",
        }
    }
}

/// Undotted/dotted index counts of a field label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinorIndexSet {
    pub undotted: u32,
    pub dotted: u32,
}

impl SpinorIndexSet {
    pub const SCALAR: Self = Self { undotted: 0, dotted: 0 };

    pub fn dimension(self) -> usize {
        1 << (self.undotted + self.dotted)
    }

    pub fn is_fermionic(self) -> bool {
        (self.undotted + self.dotted) % 2 == 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpacetimeRep<T: Real> {
    /// Translation `a` and `A ∈ SL(2,C)`.
    Lorentz { translation: [T; 4], a: CMat<T> },
    /// Translation `a` and `(U, V) ∈ SU(2)×SU(2)`.
    Euclidean { translation: [T; 4], u: CMat<T>, v: CMat<T> },
}

impl<T: Real> SpacetimeRep<T> {
    pub fn metric(&self) -> Metric {
        match self {
            SpacetimeRep::Lorentz { .. } => Metric::Minkowski,
            SpacetimeRep::Euclidean { .. } => Metric::Euclidean,
        }
    }

    pub fn identity(metric: Metric) -> Self {
        let id = CMat::identity(2, 2);
        let zero = [T::zero(); 4];
        match metric {
            Metric::Minkowski => SpacetimeRep::Lorentz { translation: zero, a: id },
            Metric::Euclidean => SpacetimeRep::Euclidean { translation: zero, u: id.clone(), v: id },
        }
    }

    pub fn translation(&self) -> [T; 4] {
        match self {
            SpacetimeRep::Lorentz { translation, .. } | SpacetimeRep::Euclidean { translation, .. } => {
                *translation
            }
        }
    }

    /// Group product `(a₁, g₁)(a₂, g₂) = (a₁ + Λ₁a₂, g₁g₂)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let lam = vector_rep_matrix(self);
        let a2 = other.translation();
        let a1 = self.translation();
        let mut t = [T::zero(); 4];
        for (mu, tm) in t.iter_mut().enumerate() {
            *tm = a1[mu];
            for nu in 0..4 {
                *tm += lam[(mu, nu)] * a2[nu];
            }
        }
        match (self, other) {
            (SpacetimeRep::Lorentz { a: a1m, .. }, SpacetimeRep::Lorentz { a: a2m, .. }) => {
                Ok(SpacetimeRep::Lorentz { translation: t, a: a1m * a2m })
            }
            (SpacetimeRep::Euclidean { u: u1, v: v1, .. }, SpacetimeRep::Euclidean { u: u2, v: v2, .. }) => {
                Ok(SpacetimeRep::Euclidean { translation: t, u: u1 * u2, v: v1 * v2 })
            }
            _ => Err(Error::MetricMismatch { expected: self.metric().name(), got: other.metric().name() }),
        }
    }

    /// Act on a spacetime point: `x ↦ Λx + a`.
    pub fn apply(&self, x: [T; 4]) -> [T; 4] {
        let lam = vector_rep_matrix(self);
        let a = self.translation();
        let mut y = [T::zero(); 4];
        for mu in 0..4 {
            y[mu] = a[mu];
            for nu in 0..4 {
                y[mu] += lam[(mu, nu)] * x[nu];
            }
        }
        y
    }
}

fn kron_power<T: Real>(factors: &[&CMat<T>]) -> CMat<T> {
    factors
        .iter()
        .fold(CMat::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// `l` copies of the left factor tensored with `m` copies of the right factor.
pub fn spinor_rep_matrix<T: Real>(set: SpinorIndexSet, rep: &SpacetimeRep<T>, metric: Metric) -> Result<CMat<T>> {
    if rep.metric() != metric {
        return Err(Error::MetricMismatch { expected: metric.name(), got: rep.metric().name() });
    }
    let (left, right) = match rep {
        SpacetimeRep::Lorentz { a, .. } => (a.clone(), a.map(|z| z.conj())),
        SpacetimeRep::Euclidean { u, v, .. } => (u.clone(), v.clone()),
    };
    let mut factors: Vec<&CMat<T>> = Vec::new();
    for _ in 0..set.undotted {
        factors.push(&left);
    }
    for _ in 0..set.dotted {
        factors.push(&right);
    }
    Ok(kron_power(&factors))
}

fn sigma_basis<T: Real>() -> [CMat<T>; 4] {
    let z = cx::<T>(0.0, 0.0);
    let one = cx::<T>(1.0, 0.0);
    [
        CMat::from_row_slice(2, 2, &[one, z, z, one]),
        CMat::from_row_slice(2, 2, &[z, one, one, z]),
        CMat::from_row_slice(2, 2, &[z, cx(0.0, -1.0), cx(0.0, 1.0), z]),
        CMat::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// Real 4×4 vector representation: `½ tr(σ_μ A σ_ν A†)` (Lorentz) or
/// `½ Re tr(τ_μ† U τ_ν V†)` with `τ = (I, iσ)` (Euclidean).
pub fn vector_rep_matrix<T: Real>(rep: &SpacetimeRep<T>) -> Matrix4<T> {
    let s = sigma_basis::<T>();
    let half = T::lit(0.5);
    match rep {
        SpacetimeRep::Lorentz { a, .. } => {
            Matrix4::from_fn(|mu, nu| (&s[mu] * a * &s[nu] * a.adjoint()).trace().re * half)
        }
        SpacetimeRep::Euclidean { u, v, .. } => {
            let i = cx::<T>(0.0, 1.0);
            let tau: Vec<CMat<T>> =
                (0..4).map(|k| if k == 0 { s[0].clone() } else { &s[k] * i }).collect();
            Matrix4::from_fn(|mu, nu| (tau[mu].adjoint() * u * &tau[nu] * v.adjoint()).trace().re * half)
        }
    }
}

pub fn metric_tensor<T: Real>(metric: Metric) -> Matrix4<T> {
    match metric {
        Metric::Euclidean => Matrix4::identity(),
        Metric::Minkowski => Matrix4::from_diagonal(&nalgebra::Vector4::new(
            T::one(),
            -T::one(),
            -T::one(),
            -T::one(),
        )),
    }
}

/// Max-abs defect of `Λᵀ g Λ = g`.
pub fn metric_defect<T: Real>(rep: &SpacetimeRep<T>) -> f64 {
    let lam = vector_rep_matrix(rep);
    let g = metric_tensor::<T>(rep.metric());
    (lam.transpose() * g * lam - g).iter().map(|x| x.abs().to_f64_lossy()).fold(0.0, f64::max)
}

fn unit_quaternion<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [T; 4] {
    let mut q = [0.0f64; 4];
    for x in &mut q {
        *x = StandardNormal.sample(rng);
    }
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.map(|x| T::lit(x / n))
}

/// Random Euclidean motion: Haar (U, V) and Gaussian translation of scale `shift`.
pub fn random_euclidean<T: Real, R: Rng + ?Sized>(rng: &mut R, shift: f64) -> SpacetimeRep<T> {
    let u = su2_from_quaternion(unit_quaternion::<T, R>(rng));
    let v = su2_from_quaternion(unit_quaternion::<T, R>(rng));
    let mut translation = [T::zero(); 4];
    for t in &mut translation {
        let z: f64 = StandardNormal.sample(rng);
        *t = T::lit(shift * z);
    }
    SpacetimeRep::Euclidean { translation, u, v }
}

/// Random spatial rotation (U = V) with translation restricted to space.
pub fn random_spatial<T: Real, R: Rng + ?Sized>(rng: &mut R, shift: f64) -> SpacetimeRep<T> {
    let u = su2_from_quaternion(unit_quaternion::<T, R>(rng));
    let mut translation = [T::zero(); 4];
    for t in translation.iter_mut().skip(1) {
        let z: f64 = StandardNormal.sample(rng);
        *t = T::lit(shift * z);
    }
    SpacetimeRep::Euclidean { translation, u: u.clone(), v: u }
}

/// Random element of SL(2,C) as `exp` of a moderate traceless complex matrix,
/// with a random translation.
pub fn random_lorentz<R: Rng + ?Sized>(rng: &mut R, shift: f64) -> SpacetimeRep<f64> {
    let mut g = || -> f64 { StandardNormal.sample(rng) };
    let (p, q, r, s, t, w) = (g() * 0.5, g() * 0.5, g() * 0.5, g() * 0.5, g() * 0.5, g() * 0.5);
    let x = DMatrix::from_row_slice(
        2,
        2,
        &[Complex::new(p, q), Complex::new(r, s), Complex::new(t, w), Complex::new(-p, -q)],
    );
    // x² = -det(x) I for traceless x, so exp(x) = cosh(k) I + sinh(k)/k x with k² = -det x.
    let k2 = -x.determinant();
    let k = k2.sqrt();
    let (ch, shk) = if k.norm() < 1e-12 {
        (Complex::new(1.0, 0.0), Complex::new(1.0, 0.0))
    } else {
        (k.cosh(), k.sinh() / k)
    };
    let a = DMatrix::identity(2, 2) * ch + x * shk;
    let translation = [g() * shift, g() * shift, g() * shift, g() * shift];
    SpacetimeRep::Lorentz { translation, a }
}
