//! Wilson plaquette action with optional charged scalar matter.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{with_n, LatticeConfig};
use super::geometry::Lattice;
use super::links::{re_tr, Mat};
use crate::error::{Error, Result};
use crate::symmetry::GroupKind;

/// Hopping `κ` and quartic `λ` couplings of the scalar field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatterCouplings {
    pub kappa: f64,
    pub lambda: f64,
}

/// `S = β Σ_p (1 − Re tr U_p / N) + Σ_x [|φ|² + λ(|φ|² − 1)² − 2κ Σ_μ Re φ(x)* U_μ(x) φ(x+μ̂)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub beta: f64,
    pub matter: Option<MatterCouplings>,
}

impl Action {
    pub fn pure_gauge(beta: f64) -> Self {
        Self { beta, matter: None }
    }

    pub fn higgs(beta: f64, kappa: f64, lambda: f64) -> Self {
        Self { beta, matter: Some(MatterCouplings { kappa, lambda }) }
    }

    pub fn validate(&self, group: GroupKind) -> Result<()> {
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::Geometry(format!("beta {} must be finite and non-negative", self.beta)));
        }
        if let Some(m) = self.matter {
            if group != GroupKind::U1 {
                return Err(Error::Incompatible("scalar matter is implemented for U(1) only".into()));
            }
            if !m.kappa.is_finite() || !m.lambda.is_finite() || m.lambda < 0.0 {
                return Err(Error::Geometry("matter couplings must be finite with lambda >= 0".into()));
            }
        }
        Ok(())
    }
}

/// `U_μν(x) = U_μ(x) U_ν(x+μ̂) U_μ(x+ν̂)† U_ν(x)†`.
#[inline]
pub fn plaquette<const N: usize>(cfg: &LatticeConfig, site: usize, mu: usize, nu: usize) -> Mat<N> {
    let lat = &cfg.lattice;
    cfg.link::<N>(site, mu) * cfg.link::<N>(lat.up(site, mu), nu) * cfg.link::<N>(lat.up(site, nu), mu).adjoint()
        * cfg.link::<N>(site, nu).adjoint()
}

/// Sum of the staples of `U_μ(x)`: `Σ_{p ∋ U_μ(x)} Re tr U_p = Re tr(U_μ(x) A)`.
pub fn staple<const N: usize>(cfg: &LatticeConfig, site: usize, mu: usize) -> Mat<N> {
    let lat: &Lattice = &cfg.lattice;
    let x_mu = lat.up(site, mu);
    let mut a = Mat::<N>::zeros();
    for nu in 0..lat.rank() {
        if nu == mu {
            continue;
        }
        let x_nu = lat.up(site, nu);
        let x_mnu = lat.down(site, nu);
        let x_mu_mnu = lat.down(x_mu, nu);
        a += cfg.link::<N>(x_mu, nu) * cfg.link::<N>(x_nu, mu).adjoint() * cfg.link::<N>(site, nu).adjoint();
        a += cfg.link::<N>(x_mu_mnu, nu).adjoint() * cfg.link::<N>(x_mnu, mu).adjoint() * cfg.link::<N>(x_mnu, nu);
    }
    a
}

/// `Σ_μ [U_μ(x) φ(x+μ̂) + U_μ(x−μ̂)* φ(x−μ̂)]` for U(1) matter.
pub fn matter_neighbours(cfg: &LatticeConfig, phi: &[Complex64], site: usize) -> Complex64 {
    let lat = &cfg.lattice;
    let mut h = Complex64::new(0.0, 0.0);
    for mu in 0..lat.rank() {
        let up = lat.up(site, mu);
        let dn = lat.down(site, mu);
        h += cfg.link::<1>(site, mu)[(0, 0)] * phi[up];
        h += cfg.link::<1>(dn, mu)[(0, 0)].conj() * phi[dn];
    }
    h
}

pub fn matter_potential(phi: Complex64, lambda: f64) -> f64 {
    let r2 = phi.norm_sqr();
    r2 + lambda * (r2 - 1.0).powi(2)
}

/// Total action; real for every configuration by construction.
pub fn total_action(cfg: &LatticeConfig, action: &Action) -> f64 {
    let lat = &cfg.lattice;
    let mut s = 0.0;
    with_n!(cfg.group, N => {
        for site in 0..lat.volume() {
            for mu in 0..lat.rank() {
                for nu in mu + 1..lat.rank() {
                    s += action.beta * (1.0 - re_tr(&plaquette::<N>(cfg, site, mu, nu)));
                }
            }
        }
    });
    if let (Some(m), Some(phi)) = (action.matter, cfg.matter.as_ref()) {
        for site in 0..lat.volume() {
            s += matter_potential(phi[site], m.lambda);
            for mu in 0..lat.rank() {
                let hop = phi[site].conj() * cfg.link::<1>(site, mu)[(0, 0)] * phi[lat.up(site, mu)];
                s -= 2.0 * m.kappa * hop.re;
            }
        }
    }
    s
}
