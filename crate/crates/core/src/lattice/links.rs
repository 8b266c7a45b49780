//! Small fixed-size link matrices and the per-group link operations.

use nalgebra::SMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::symmetry::{haar_sample, GroupElement, GroupKind};

pub type Mat<const N: usize> = SMatrix<Complex64, N, N>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(1/N) Re tr M`.
#[inline]
pub fn re_tr<const N: usize>(m: &Mat<N>) -> f64 {
    m.trace().re / N as f64
}

/// Nearest group element: phase for U(1), normalized quaternion for SU(2),
/// Gram-Schmidt with a completed third row for SU(3).
pub fn reunitarize<const N: usize>(m: &Mat<N>) -> Mat<N> {
    let mut out = *m;
    match N {
        1 => {
            let z = m[(0, 0)];
            out[(0, 0)] = z / z.norm();
        }
        2 => {
            let [a0, a1, a2, a3] = quaternion(m);
            let n = (a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3).sqrt();
            out = from_quaternion([a0 / n, a1 / n, a2 / n, a3 / n]);
        }
        _ => {
            let norm = |r: &[Complex64]| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let mut r0: Vec<Complex64> = (0..3).map(|j| m[(0, j)]).collect();
            let n0 = norm(&r0);
            r0.iter_mut().for_each(|z| *z /= n0);
            let mut r1: Vec<Complex64> = (0..3).map(|j| m[(1, j)]).collect();
            let proj: Complex64 = (0..3).map(|j| r0[j].conj() * r1[j]).sum();
            for j in 0..3 {
                r1[j] -= proj * r0[j];
            }
            let n1 = norm(&r1);
            r1.iter_mut().for_each(|z| *z /= n1);
            let r2 = [
                (r0[1] * r1[2] - r0[2] * r1[1]).conj(),
                (r0[2] * r1[0] - r0[0] * r1[2]).conj(),
                (r0[0] * r1[1] - r0[1] * r1[0]).conj(),
            ];
            for j in 0..3 {
                out[(0, j)] = r0[j];
                out[(1, j)] = r1[j];
                out[(2, j)] = r2[j];
            }
        }
    }
    out
}

/// Quaternion coordinates of the `k·SU(2)` part of a 2×2 matrix,
/// `m ≈ a0 I + i(a1 σ1 + a2 σ2 + a3 σ3)`.
pub fn quaternion<const N: usize>(m: &Mat<N>) -> [f64; 4] {
    sub_quaternion(m, 0, 1)
}

/// Quaternion part of the `(i, j)` 2×2 block.
pub fn sub_quaternion<const N: usize>(m: &Mat<N>, i: usize, j: usize) -> [f64; 4] {
    let (w00, w01, w10, w11) = (m[(i, i)], m[(i, j)], m[(j, i)], m[(j, j)]);
    [(w00.re + w11.re) / 2.0, (w01.im + w10.im) / 2.0, (w01.re - w10.re) / 2.0, (w00.im - w11.im) / 2.0]
}

pub fn from_quaternion<const N: usize>(a: [f64; 4]) -> Mat<N> {
    let mut m = Mat::<N>::zeros();
    m[(0, 0)] = Complex64::new(a[0], a[3]);
    m[(0, 1)] = Complex64::new(a[2], a[1]);
    m[(1, 0)] = Complex64::new(-a[2], a[1]);
    m[(1, 1)] = Complex64::new(a[0], -a[3]);
    m
}

/// SU(2) element `a` embedded in the `(i, j)` block of the identity.
pub fn embed<const N: usize>(a: [f64; 4], i: usize, j: usize) -> Mat<N> {
    let q = from_quaternion::<2>(a);
    let mut m = Mat::<N>::identity();
    m[(i, i)] = q[(0, 0)];
    m[(i, j)] = q[(0, 1)];
    m[(j, i)] = q[(1, 0)];
    m[(j, j)] = q[(1, 1)];
    m
}

pub fn to_element<const N: usize>(kind: GroupKind, m: &Mat<N>) -> GroupElement<f64> {
    GroupElement { kind, matrix: nalgebra::DMatrix::from_fn(N, N, |i, j| m[(i, j)]) }
}

pub fn from_element<const N: usize>(g: &GroupElement<f64>) -> Mat<N> {
    Mat::<N>::from_fn(|i, j| g.matrix[(i, j)])
}

pub fn haar<const N: usize, R: Rng + ?Sized>(kind: GroupKind, rng: &mut R) -> Mat<N> {
    from_element(&haar_sample::<f64, R>(kind, rng))
}

/// Uniform point on the unit 2-sphere scaled by `r`.
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, r: f64) -> [f64; 3] {
    let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|c| c * r / n)
}

/// Kennedy–Pendleton draw of `x0 ∈ [-1, 1]` with density `√(1 - x0²) e^{α x0}`.
pub fn kennedy_pendleton<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha < 1e-8 {
        // effectively Haar: x0 with density √(1 - x0²)
        loop {
            let x: f64 = rng.random_range(-1.0..1.0);
            let y: f64 = rng.random();
            if y * y <= 1.0 - x * x {
                return x;
            }
        }
    }
    loop {
        let r1: f64 = 1.0 - rng.random::<f64>();
        let r2: f64 = rng.random();
        let r3: f64 = 1.0 - rng.random::<f64>();
        let c = (std::f64::consts::TAU * r2).cos();
        let lambda_sq = -(r1.ln() + c * c * r3.ln()) / (2.0 * alpha);
        let r4: f64 = rng.random();
        if r4 * r4 <= 1.0 - lambda_sq {
            return 1.0 - 2.0 * lambda_sq;
        }
    }
}

/// Unit quaternion with `a0` drawn from the SU(2) heatbath at coupling `alpha`.
pub fn su2_heatbath<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> [f64; 4] {
    let a0 = kennedy_pendleton(alpha, rng);
    let [a1, a2, a3] = sphere_point(rng, (1.0 - a0 * a0).max(0.0).sqrt());
    [a0, a1, a2, a3]
}

pub fn quaternion_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    // same product as the matrices from_quaternion(a) · from_quaternion(b)
    let m = from_quaternion::<2>(a) * from_quaternion::<2>(b);
    quaternion(&m)
}

pub fn quaternion_conj(a: [f64; 4]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn defect<const N: usize>(m: &Mat<N>) -> f64 {
        (m.adjoint() * m - Mat::<N>::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn reunitarize_projects_each_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let noisy = |m: Mat<3>| m.map(|z| z * Complex64::new(1.0 + 1e-4, -2e-4));
        let u = noisy(haar::<3, _>(GroupKind::SU3, &mut rng));
        let r = reunitarize(&u);
        assert!(defect(&r) < 1e-14);
        assert!((r.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        let v = haar::<2, _>(GroupKind::SU2, &mut rng) * Complex64::new(1.01, 0.0);
        assert!(defect(&reunitarize(&v)) < 1e-14);
        let w = Mat::<1>::from_element(Complex64::new(0.3, 0.4));
        assert!((reunitarize(&w)[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quaternion_roundtrip() {
        let a = [0.5, -0.5, 0.5, 0.5];
        assert_eq!(quaternion(&from_quaternion::<2>(a)), a);
        let b = [0.0, 0.6, 0.0, 0.8];
        let ab = quaternion_mul(a, b);
        assert!((ab.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-15);
        let id = quaternion_mul(a, quaternion_conj(a));
        assert!((id[0] - 1.0).abs() < 1e-15 && id[1].abs() < 1e-15);
    }

    #[test]
    fn kennedy_pendleton_mean_matches_bessel_ratio() {
        // E[x0] = I₂(α)/I₁(α) for density √(1-x²)e^{αx}
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let alpha = 3.0;
        let n = 200_000;
        let mean = (0..n).map(|_| kennedy_pendleton(alpha, &mut rng)).sum::<f64>() / n as f64;
        let exact = crate::special::bessel_i(2, alpha) / crate::special::bessel_i(1, alpha);
        assert!((mean - exact).abs() < 4.0 * 0.5 / (n as f64).sqrt(), "{mean} vs {exact}");
    }
}
