//! Link configurations, local gauge transformations and link reflection.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::geometry::Lattice;
use super::links::{haar, Mat, ZERO};
use crate::error::{Error, Result};
use crate::symmetry::GroupKind;

/// Run `$body` with `$n` bound to the matrix size of `$group`.
macro_rules! with_n {
    ($group:expr, $n:ident => $body:expr) => {
        match $group {
            $crate::symmetry::GroupKind::U1 => {
                const $n: usize = 1;
                $body
            }
            $crate::symmetry::GroupKind::SU2 => {
                const $n: usize = 2;
                $body
            }
            $crate::symmetry::GroupKind::SU3 => {
                const $n: usize = 3;
                $body
            }
        }
    };
}
pub(crate) use with_n;

/// Link matrices indexed by `site · rank + μ`, stored row-major, plus an
/// optional complex scalar per site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub lattice: Lattice,
    pub group: GroupKind,
    pub links: Vec<Complex64>,
    pub matter: Option<Vec<Complex64>>,
}

impl LatticeConfig {
    pub fn cold(lattice: &Lattice, group: GroupKind, matter: bool) -> Self {
        let n = group.matrix_dim();
        let mut links = vec![ZERO; lattice.links() * n * n];
        for l in 0..lattice.links() {
            for i in 0..n {
                links[l * n * n + i * n + i] = Complex64::new(1.0, 0.0);
            }
        }
        Self { lattice: lattice.clone(), group, links, matter: matter.then(|| vec![Complex64::new(1.0, 0.0); lattice.volume()]) }
    }

    /// Haar-random links; matter uniform in the unit square.
    pub fn hot<R: Rng + ?Sized>(lattice: &Lattice, group: GroupKind, matter: bool, rng: &mut R) -> Self {
        let mut cfg = Self::cold(lattice, group, matter);
        with_n!(group, N => {
            for l in 0..lattice.links() {
                let u = haar::<N, R>(group, rng);
                cfg.set::<N>(l, &u);
            }
        });
        if let Some(m) = cfg.matter.as_mut() {
            for v in m.iter_mut() {
                *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        cfg
    }

    #[inline]
    pub fn link_index(&self, site: usize, mu: usize) -> usize {
        site * self.lattice.rank() + mu
    }

    #[inline]
    pub fn get<const N: usize>(&self, l: usize) -> Mat<N> {
        let s = &self.links[l * N * N..(l + 1) * N * N];
        Mat::<N>::from_fn(|i, j| s[i * N + j])
    }

    #[inline]
    pub fn link<const N: usize>(&self, site: usize, mu: usize) -> Mat<N> {
        self.get::<N>(self.link_index(site, mu))
    }

    #[inline]
    pub fn set<const N: usize>(&mut self, l: usize, m: &Mat<N>) {
        let s = &mut self.links[l * N * N..(l + 1) * N * N];
        for i in 0..N {
            for j in 0..N {
                s[i * N + j] = m[(i, j)];
            }
        }
    }

    /// Largest `‖U†U − I‖` entry over all links.
    pub fn unitarity_defect(&self) -> f64 {
        with_n!(self.group, N => {
            (0..self.lattice.links())
                .map(|l| {
                    let u = self.get::<N>(l);
                    (u.adjoint() * u - Mat::<N>::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.group.matrix_dim();
        if self.links.len() != self.lattice.links() * n * n {
            return Err(Error::Geometry("link array length does not match the lattice".into()));
        }
        if self.links.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = self.unitarity_defect();
        if defect > 1e-10 {
            return Err(Error::Geometry(format!("link unitarity defect {defect:.3e}")));
        }
        if let Some(m) = &self.matter {
            if m.len() != self.lattice.volume() || m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Geometry("matter field invalid".into()));
            }
        }
        Ok(())
    }
}

/// Site-indexed group elements, row-major like the links.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeField {
    pub group: GroupKind,
    pub values: Vec<Complex64>,
}

impl GaugeField {
    pub fn identity(lattice: &Lattice, group: GroupKind) -> Self {
        let cfg = LatticeConfig::cold(lattice, group, false);
        let n2 = group.matrix_dim().pow(2);
        Self { group, values: cfg.links.chunks(n2 * lattice.rank()).flat_map(|c| c[..n2].to_vec()).collect() }
    }

    pub fn random<R: Rng + ?Sized>(lattice: &Lattice, group: GroupKind, rng: &mut R) -> Self {
        let n2 = group.matrix_dim().pow(2);
        let mut values = vec![ZERO; lattice.volume() * n2];
        with_n!(group, N => {
            for s in 0..lattice.volume() {
                let g = haar::<N, R>(group, rng);
                for i in 0..N {
                    for j in 0..N {
                        values[s * n2 + i * N + j] = g[(i, j)];
                    }
                }
            }
        });
        Self { group, values }
    }

    #[inline]
    pub fn at<const N: usize>(&self, site: usize) -> Mat<N> {
        let s = &self.values[site * N * N..(site + 1) * N * N];
        Mat::<N>::from_fn(|i, j| s[i * N + j])
    }
}

/// `U_μ(x) → g(x) U_μ(x) g(x+μ̂)⁻¹`, `φ(x) → g(x) φ(x)`.
pub fn gauge_transform(cfg: &LatticeConfig, g: &GaugeField) -> Result<LatticeConfig> {
    let n2 = cfg.group.matrix_dim().pow(2);
    if g.group != cfg.group || g.values.len() != cfg.lattice.volume() * n2 {
        return Err(Error::Geometry("gauge field does not match the configuration".into()));
    }
    let lat = &cfg.lattice;
    let mut out = cfg.clone();
    with_n!(cfg.group, N => {
        for s in 0..lat.volume() {
            let gx = g.at::<N>(s);
            for mu in 0..lat.rank() {
                let l = cfg.link_index(s, mu);
                let u = gx * cfg.get::<N>(l) * g.at::<N>(lat.up(s, mu)).adjoint();
                out.set::<N>(l, &u);
            }
        }
    });
    if let Some(m) = out.matter.as_mut() {
        // scalar matter is U(1)-charged: g is a phase
        for (s, v) in m.iter_mut().enumerate() {
            *v *= g.values[s * n2];
        }
    }
    Ok(out)
}

/// Reflection through the plane between time slices `-1` and `0`:
/// `U_0(t) → U_0(-2-t)†`, `U_k(t) → U_k(-1-t)`, `φ(t) → φ(-1-t)`.
pub fn reflect_links(cfg: &LatticeConfig) -> LatticeConfig {
    let lat = &cfg.lattice;
    let t_ext = lat.dims()[0] as i64;
    let mut out = cfg.clone();
    with_n!(cfg.group, N => {
        for s in 0..lat.volume() {
            let mut x = lat.coords(s);
            let t = x[0] as i64;
            x[0] = (-2 - t).rem_euclid(t_ext) as usize;
            let src = lat.index(&x);
            out.set::<N>(cfg.link_index(s, 0), &cfg.link::<N>(src, 0).adjoint());
            x[0] = (-1 - t).rem_euclid(t_ext) as usize;
            let src = lat.index(&x);
            for k in 1..lat.rank() {
                out.set::<N>(cfg.link_index(s, k), &cfg.link::<N>(src, k));
            }
            if let (Some(m), Some(orig)) = (out.matter.as_mut(), cfg.matter.as_ref()) {
                m[s] = orig[src];
            }
        }
    });
    out
}
