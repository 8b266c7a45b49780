//! Checkerboard Monte Carlo sweeps with per-site random streams.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::action::{matter_neighbours, matter_potential, staple, Action};
use super::config::{with_n, LatticeConfig};
use super::links::{embed, from_element, from_quaternion, haar, quaternion, quaternion_conj, reunitarize, su2_heatbath, sub_quaternion, Mat};
use crate::symmetry::{exp_map, AlgebraElement, GroupKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Su3Update {
    /// SU(2) subgroup heatbath over the three embedded subgroups.
    CabibboMarinari,
    Metropolis,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpdateParams {
    /// U(1): maximal angle step; SU(3) Metropolis: step in the algebra.
    pub link_width: f64,
    pub link_hits: usize,
    pub su3: Su3Update,
    pub matter_width: f64,
    pub matter_hits: usize,
}

impl Default for UpdateParams {
    fn default() -> Self {
        Self { link_width: 1.0, link_hits: 4, su3: Su3Update::CabibboMarinari, matter_width: 0.8, matter_hits: 4 }
    }
}

/// Acceptance bookkeeping of one sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub link_proposed: u64,
    pub link_accepted: u64,
    pub matter_proposed: u64,
    pub matter_accepted: u64,
}

impl SweepStats {
    pub fn link_acceptance(&self) -> f64 {
        ratio(self.link_accepted, self.link_proposed)
    }

    pub fn matter_acceptance(&self) -> f64 {
        ratio(self.matter_accepted, self.matter_proposed)
    }

    pub fn add(&mut self, o: &SweepStats) {
        self.link_proposed += o.link_proposed;
        self.link_accepted += o.link_accepted;
        self.matter_proposed += o.matter_proposed;
        self.matter_accepted += o.matter_accepted;
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one `(sweep, site, slot)` update; slots `0..rank` are link
/// directions, `rank` is the matter field.
pub fn site_stream(seed: u64, sweep: u64, site: usize, slot: usize) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    for v in [sweep, site as u64, slot as u64] {
        h = splitmix(h ^ v);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Metropolis for a U(1) link with local action `−Re(U B)`.
pub fn u1_metropolis<R: Rng + ?Sized>(u: Complex64, b: Complex64, width: f64, hits: usize, rng: &mut R) -> (Complex64, u64) {
    let mut u = u;
    let mut acc = 0;
    for _ in 0..hits {
        let delta: f64 = rng.random_range(-width..=width);
        let v = u * Complex64::from_polar(1.0, delta);
        if u1_accept(u, v, b, rng) {
            u = v;
            acc += 1;
        }
    }
    (u, acc)
}

/// Accept `u → v` against `exp(Re((v − u) B))`.
pub fn u1_accept<R: Rng + ?Sized>(u: Complex64, v: Complex64, b: Complex64, rng: &mut R) -> bool {
    let ds = -((v - u) * b).re;
    ds <= 0.0 || rng.random::<f64>() < (-ds).exp()
}

fn su2_link<R: Rng + ?Sized>(a: &Mat<2>, beta: f64, rng: &mut R) -> Mat<2> {
    let q = quaternion(a);
    let k = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    if k < 1e-14 {
        return haar::<2, R>(GroupKind::SU2, rng);
    }
    let v = q.map(|x| x / k);
    let x = su2_heatbath(beta * k, rng);
    from_quaternion::<2>(x) * from_quaternion::<2>(quaternion_conj(v))
}

const SU3_SUBGROUPS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

fn su3_cabibbo_marinari<R: Rng + ?Sized>(u: &Mat<3>, a: &Mat<3>, beta: f64, rng: &mut R) -> Mat<3> {
    let mut u = *u;
    for (i, j) in SU3_SUBGROUPS {
        let w = u * a;
        let q = sub_quaternion(&w, i, j);
        let k = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = if k < 1e-14 {
            let h = haar::<2, R>(GroupKind::SU2, rng);
            quaternion(&h)
        } else {
            let v = q.map(|x| x / k);
            let x = su2_heatbath(2.0 * beta * k / 3.0, rng);
            super::links::quaternion_mul(x, quaternion_conj(v))
        };
        u = embed::<3>(r, i, j) * u;
    }
    u
}

fn su3_metropolis<R: Rng + ?Sized>(u: &Mat<3>, a: &Mat<3>, beta: f64, width: f64, hits: usize, rng: &mut R) -> (Mat<3>, u64) {
    let mut u = *u;
    let mut acc = 0;
    for _ in 0..hits {
        let coeffs: Vec<f64> = (0..8).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
        let x = AlgebraElement::new(GroupKind::SU3, coeffs).expect("eight coefficients");
        let step = if rng.random::<bool>() { width } else { -width };
        let r = from_element::<3>(&exp_map(&x, step).expect("finite step"));
        let v = r * u;
        let ds = -beta / 3.0 * ((v - u) * a).trace().re;
        if ds <= 0.0 || rng.random::<f64>() < (-ds).exp() {
            u = v;
            acc += 1;
        }
    }
    (u, acc)
}

/// New value of one link and its accepted/proposed counts.
fn update_link<const N: usize>(cfg: &LatticeConfig, action: &Action, params: &UpdateParams, site: usize, mu: usize, rng: &mut ChaCha8Rng) -> (Mat<N>, u64, u64) {
    let u = cfg.link::<N>(site, mu);
    let a = staple::<N>(cfg, site, mu);
    match cfg.group {
        GroupKind::U1 => {
            let mut b = a[(0, 0)] * action.beta;
            if let (Some(m), Some(phi)) = (action.matter, cfg.matter.as_ref()) {
                b += 2.0 * m.kappa * phi[cfg.lattice.up(site, mu)] * phi[site].conj();
            }
            let (v, acc) = u1_metropolis(u[(0, 0)], b, params.link_width, params.link_hits, rng);
            (Mat::<N>::from_element(v), acc, params.link_hits as u64)
        }
        GroupKind::SU2 => {
            let a2 = Mat::<2>::from_fn(|i, j| a[(i, j)]);
            let v = su2_link(&a2, action.beta, rng);
            (Mat::<N>::from_fn(|i, j| v[(i, j)]), 1, 1)
        }
        GroupKind::SU3 => {
            let u3 = Mat::<3>::from_fn(|i, j| u[(i, j)]);
            let a3 = Mat::<3>::from_fn(|i, j| a[(i, j)]);
            let (v, acc, prop) = match params.su3 {
                Su3Update::CabibboMarinari => (su3_cabibbo_marinari(&u3, &a3, action.beta, rng), 1, 1),
                Su3Update::Metropolis => {
                    let (v, acc) = su3_metropolis(&u3, &a3, action.beta, params.link_width, params.link_hits, rng);
                    (v, acc, params.link_hits as u64)
                }
            };
            (Mat::<N>::from_fn(|i, j| v[(i, j)]), acc, prop)
        }
    }
}

fn update_links<const N: usize>(cfg: &mut LatticeConfig, action: &Action, params: &UpdateParams, seed: u64, sweep: u64, stats: &mut SweepStats) {
    let lat = cfg.lattice.clone();
    for mu in 0..lat.rank() {
        for parity in 0..2 {
            let sites = lat.sites_of_parity(parity);
            let snapshot: &LatticeConfig = cfg;
            // links of one direction and parity share no staple
            let updates: Vec<(usize, Mat<N>, u64, u64)> = sites
                .par_iter()
                .map(|&s| {
                    let mut rng = site_stream(seed, sweep, s, mu);
                    let (v, acc, prop) = update_link::<N>(snapshot, action, params, s, mu, &mut rng);
                    (snapshot.link_index(s, mu), v, acc, prop)
                })
                .collect();
            for (l, v, acc, prop) in updates {
                cfg.set::<N>(l, &v);
                stats.link_accepted += acc;
                stats.link_proposed += prop;
            }
        }
    }
}

fn update_matter(cfg: &mut LatticeConfig, action: &Action, params: &UpdateParams, seed: u64, sweep: u64, stats: &mut SweepStats) {
    let (Some(m), Some(_)) = (action.matter, cfg.matter.as_ref()) else {
        return;
    };
    let lat = cfg.lattice.clone();
    for parity in 0..2 {
        let sites = lat.sites_of_parity(parity);
        let snapshot: &LatticeConfig = cfg;
        let phi = snapshot.matter.as_ref().expect("checked above");
        let updates: Vec<(usize, Complex64, u64)> = sites
            .par_iter()
            .map(|&s| {
                let mut rng = site_stream(seed, sweep, s, lat.rank());
                let h = matter_neighbours(snapshot, phi, s);
                let local = |p: Complex64| matter_potential(p, m.lambda) - 2.0 * m.kappa * (p.conj() * h).re;
                let mut cur = phi[s];
                let mut acc = 0;
                for _ in 0..params.matter_hits {
                    let w = params.matter_width;
                    let prop = cur + Complex64::new(rng.random_range(-w..=w), rng.random_range(-w..=w));
                    let ds = local(prop) - local(cur);
                    if ds <= 0.0 || rng.random::<f64>() < (-ds).exp() {
                        cur = prop;
                        acc += 1;
                    }
                }
                (s, cur, acc)
            })
            .collect();
        let field = cfg.matter.as_mut().expect("checked above");
        for (s, v, acc) in updates {
            field[s] = v;
            stats.matter_accepted += acc;
            stats.matter_proposed += params.matter_hits as u64;
        }
    }
}

/// One sweep: every link direction in two checkerboard halves, then the
/// matter field, then re-unitarization.
pub fn sweep(cfg: &mut LatticeConfig, action: &Action, params: &UpdateParams, seed: u64, sweep_index: u64) -> SweepStats {
    let mut stats = SweepStats::default();
    with_n!(cfg.group, N => {
        update_links::<N>(cfg, action, params, seed, sweep_index, &mut stats);
        update_matter(cfg, action, params, seed, sweep_index, &mut stats);
        for l in 0..cfg.lattice.links() {
            let u = reunitarize(&cfg.get::<N>(l));
            cfg.set::<N>(l, &u);
        }
    });
    log::debug!("sweep {sweep_index}: link acceptance {:.3}, matter acceptance {:.3}", stats.link_acceptance(), stats.matter_acceptance());
    stats
}
