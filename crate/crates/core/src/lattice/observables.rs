//! Gauge-invariant site fields: plaquettes, Wilson loops, the clover
//! action density and `|φ|²`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::action::plaquette;
use super::config::{with_n, LatticeConfig};
use super::links::{re_tr, Mat};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};

pub const ACTION_DENSITY: &str = ":F2:";
pub const PHI_SQUARED: &str = "phi2";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Observable {
    /// Clover action density `Σ_{μ<ν} (1 − Re tr Q_μν / 4N)`.
    ActionDensity,
    /// Rectangular `R × T` loop, `R` along spatial directions (averaged), `T` along time.
    WilsonLoop { r: usize, t: usize },
    PhiSquared,
}

impl Observable {
    pub const PLAQUETTE: Observable = Observable::WilsonLoop { r: 1, t: 1 };

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Time extent `[lo, hi]` of the links the value at time `t` depends on,
    /// relative to `t`.
    pub fn footprint(&self) -> (i64, i64) {
        match self {
            Observable::ActionDensity => (-1, 1),
            Observable::WilsonLoop { t, .. } => (0, *t as i64),
            Observable::PhiSquared => (0, 0),
        }
    }

    pub fn needs_matter(&self) -> bool {
        matches!(self, Observable::PhiSquared)
    }

    /// Evaluate on every site.
    pub fn field(&self, cfg: &LatticeConfig) -> Result<Vec<f64>> {
        match *self {
            Observable::ActionDensity => Ok(action_density(cfg)),
            Observable::WilsonLoop { r, t } => wilson_loop_field(cfg, r, t),
            Observable::PhiSquared => {
                let phi = cfg.matter.as_ref().ok_or_else(|| Error::Incompatible("phi2 needs scalar matter".into()))?;
                Ok(phi.iter().map(|p| p.norm_sqr()).collect())
            }
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::ActionDensity => f.write_str(ACTION_DENSITY),
            Observable::WilsonLoop { r, t } => write!(f, "W{r}x{t}"),
            Observable::PhiSquared => f.write_str(PHI_SQUARED),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            ACTION_DENSITY | "F2" => return Ok(Observable::ActionDensity),
            PHI_SQUARED => return Ok(Observable::PhiSquared),
            "plaquette" => return Ok(Observable::PLAQUETTE),
            _ => {}
        }
        let bad = || Error::UnknownLabel(s.into());
        let rest = s.strip_prefix('W').ok_or_else(bad)?;
        let (r, t) = rest.split_once('x').ok_or_else(bad)?;
        let r: usize = r.parse().map_err(|_| bad())?;
        let t: usize = t.parse().map_err(|_| bad())?;
        if r == 0 || t == 0 {
            return Err(bad());
        }
        Ok(Observable::WilsonLoop { r, t })
    }
}

/// `(1/N) Re tr U_μν(x)` per site and plane, planes ordered `(0,1), (0,2), …`.
pub fn plaquette_planes(cfg: &LatticeConfig) -> Vec<Vec<f64>> {
    let lat = &cfg.lattice;
    let mut out = Vec::with_capacity(lat.planes());
    with_n!(cfg.group, N => {
        for mu in 0..lat.rank() {
            for nu in mu + 1..lat.rank() {
                out.push((0..lat.volume()).map(|s| re_tr(&plaquette::<N>(cfg, s, mu, nu))).collect());
            }
        }
    });
    out
}

/// Site, orientation and normalization average of `(1/N) Re tr U_p`.
pub fn plaquette_mean(cfg: &LatticeConfig) -> f64 {
    let planes = plaquette_planes(cfg);
    let n = planes.len() * cfg.lattice.volume();
    planes.iter().flatten().sum::<f64>() / n as f64
}

fn action_density(cfg: &LatticeConfig) -> Vec<f64> {
    let lat = &cfg.lattice;
    let planes = plaquette_planes(cfg);
    let mut out = vec![0.0; lat.volume()];
    let mut p = 0;
    for mu in 0..lat.rank() {
        for nu in mu + 1..lat.rank() {
            let plane = &planes[p];
            for (s, o) in out.iter_mut().enumerate() {
                let a = lat.down(s, mu);
                let b = lat.down(s, nu);
                let c = lat.down(a, nu);
                // the four leaves of the clover share the corner x
                *o += 1.0 - 0.25 * (plane[s] + plane[a] + plane[b] + plane[c]);
            }
            p += 1;
        }
    }
    out
}

fn path_product<const N: usize>(cfg: &LatticeConfig, start: usize, steps: &[(usize, i64)]) -> Mat<N> {
    let lat = &cfg.lattice;
    let mut m = Mat::<N>::identity();
    let mut x = start;
    for &(mu, n) in steps {
        for _ in 0..n.unsigned_abs() {
            if n > 0 {
                m *= cfg.link::<N>(x, mu);
                x = lat.up(x, mu);
            } else {
                x = lat.down(x, mu);
                m *= cfg.link::<N>(x, mu).adjoint();
            }
        }
    }
    m
}

fn wilson_loop_field(cfg: &LatticeConfig, r: usize, t: usize) -> Result<Vec<f64>> {
    let lat = &cfg.lattice;
    let dims = lat.dims();
    if t > dims[0] / 2 || dims[1..].iter().any(|&d| r > d / 2) {
        return Err(Error::SeparationTooLarge { separation: r.max(t), half: dims.iter().min().copied().unwrap_or(0) / 2 });
    }
    let (r, t) = (r as i64, t as i64);
    let spatial = lat.rank() - 1;
    Ok(with_n!(cfg.group, N => {
        (0..lat.volume())
            .map(|s| {
                (1..lat.rank())
                    .map(|k| re_tr(&path_product::<N>(cfg, s, &[(k, r), (0, t), (k, -r), (0, -t)])))
                    .sum::<f64>()
                    / spatial as f64
            })
            .collect()
    }))
}

/// `∫ cos θ e^{β cos θ} dθ / ∫ e^{β cos θ} dθ` by quadrature.
pub fn u1_single_plaquette(beta: f64) -> Result<f64> {
    let opts = QuadOptions { rel_tol: 1e-14, abs_tol: 1e-300, max_evals: 1_000_000 };
    let pi = std::f64::consts::PI;
    // shift the exponent so the integrands stay O(1)
    let num = integrate(|th: f64| th.cos() * (beta * (th.cos() - 1.0)).exp(), -pi, pi, &opts);
    let den = integrate(|th: f64| (beta * (th.cos() - 1.0)).exp(), -pi, pi, &opts);
    if !(num.converged && den.converged) {
        return Err(Error::Quadrature { achieved: num.error.max(den.error), target: 1e-14 });
    }
    Ok(num.value / den.value)
}
