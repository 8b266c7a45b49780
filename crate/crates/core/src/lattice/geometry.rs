//! Periodic hypercubic lattices with precomputed neighbour tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct LatticeShape {
    dims: Vec<usize>,
    spacing: f64,
}

/// Periodic lattice; coordinate 0 is time and varies slowest in site order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeShape", into = "LatticeShape")]
pub struct Lattice {
    dims: Vec<usize>,
    spacing: f64,
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl TryFrom<LatticeShape> for Lattice {
    type Error = Error;
    fn try_from(s: LatticeShape) -> Result<Self> {
        Lattice::new(&s.dims, s.spacing)
    }
}

impl From<Lattice> for LatticeShape {
    fn from(l: Lattice) -> Self {
        LatticeShape { dims: l.dims, spacing: l.spacing }
    }
}

impl Lattice {
    /// 2 to 4 directions, each extent even and in `4..=64`.
    pub fn new(dims: &[usize], spacing: f64) -> Result<Self> {
        if !(2..=4).contains(&dims.len()) {
            return Err(Error::Geometry(format!("rank {} outside 2..=4", dims.len())));
        }
        if let Some(&bad) = dims.iter().find(|&&d| !(4..=64).contains(&d) || d % 2 != 0) {
            return Err(Error::Geometry(format!("extent {bad} must be even and within 4..=64")));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::Geometry(format!("spacing {spacing} must be positive")));
        }
        let d = dims.len();
        let volume: usize = dims.iter().product();
        let mut forward = vec![0; volume * d];
        let mut backward = vec![0; volume * d];
        let mut lat = Self { dims: dims.to_vec(), spacing, forward: vec![], backward: vec![] };
        for site in 0..volume {
            let x = lat.coords(site);
            for mu in 0..d {
                let mut y = x.clone();
                y[mu] = (x[mu] + 1) % dims[mu];
                forward[site * d + mu] = lat.index(&y);
                y[mu] = (x[mu] + dims[mu] - 1) % dims[mu];
                backward[site * d + mu] = lat.index(&y);
            }
        }
        lat.forward = forward;
        lat.backward = backward;
        Ok(lat)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn volume(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn links(&self) -> usize {
        self.volume() * self.rank()
    }

    pub fn index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.dims).fold(0, |acc, (xi, d)| acc * d + xi)
    }

    pub fn coords(&self, mut site: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = site % self.dims[k];
            site /= self.dims[k];
        }
        out
    }

    #[inline]
    pub fn up(&self, site: usize, mu: usize) -> usize {
        self.forward[site * self.dims.len() + mu]
    }

    #[inline]
    pub fn down(&self, site: usize, mu: usize) -> usize {
        self.backward[site * self.dims.len() + mu]
    }

    /// Site reached by `steps` (possibly negative) hops along `mu`.
    pub fn hop(&self, site: usize, mu: usize, steps: i64) -> usize {
        let mut x = self.coords(site);
        let d = self.dims[mu] as i64;
        x[mu] = (x[mu] as i64 + steps).rem_euclid(d) as usize;
        self.index(&x)
    }

    /// Site displaced by a vector of steps.
    pub fn shift(&self, site: usize, steps: &[i64]) -> usize {
        let x = self.coords(site);
        let y: Vec<usize> =
            x.iter().zip(steps).zip(&self.dims).map(|((xi, s), d)| (*xi as i64 + s).rem_euclid(*d as i64) as usize).collect();
        self.index(&y)
    }

    pub fn parity(&self, site: usize) -> usize {
        self.coords(site).iter().sum::<usize>() % 2
    }

    pub fn sites_of_parity(&self, parity: usize) -> Vec<usize> {
        (0..self.volume()).filter(|&s| self.parity(s) == parity).collect()
    }

    /// Number of `(μ < ν)` planes.
    pub fn planes(&self) -> usize {
        self.rank() * (self.rank() - 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(Lattice::new(&[4], 1.0).is_err());
        assert!(Lattice::new(&[4, 5], 1.0).is_err());
        assert!(Lattice::new(&[2, 4], 1.0).is_err());
        assert!(Lattice::new(&[4, 4, 4, 4, 4], 1.0).is_err());
        assert!(Lattice::new(&[4, 66], 1.0).is_err());
        assert!(Lattice::new(&[4, 4], 0.0).is_err());
    }

    #[test]
    fn neighbours_wrap() {
        let l = Lattice::new(&[4, 6], 1.0).unwrap();
        let s = l.index(&[3, 5]);
        assert_eq!(l.coords(l.up(s, 0)), vec![0, 5]);
        assert_eq!(l.coords(l.up(s, 1)), vec![3, 0]);
        assert_eq!(l.down(l.up(s, 1), 1), s);
        assert_eq!(l.hop(s, 1, -7), l.index(&[3, 4]));
    }

    #[test]
    fn serde_rebuilds_tables() {
        let l = Lattice::new(&[4, 4, 6], 0.5).unwrap();
        let json = serde_json::to_string(&l).unwrap();
        let back: Lattice = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
    }
}
