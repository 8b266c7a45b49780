//! Parametric spectral models and their fit to time-momentum data.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::correlator::{DifferenceForm, FieldIndex};
use crate::error::{Error, Result};
use crate::linalg::{condition_number, nnls, RMatrix};
use crate::optim::{nelder_mead, SimplexOptions};

/// A single-particle contribution `Z e^{-ωτ}/(2ω)`, `ω = √(p² + μ²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub mass_sq: f64,
    pub weight: f64,
}

/// Tabulated continuum: point weights at fixed `μ²` nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Continuum {
    pub mass_sq: Vec<f64>,
    pub weight: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralModel {
    pub poles: Vec<Pole>,
    pub continuum: Option<Continuum>,
}

impl SpectralModel {
    pub fn new(poles: Vec<Pole>, continuum: Option<Continuum>) -> Result<Self> {
        let model = Self { poles, continuum };
        model.validate()?;
        Ok(model)
    }

    pub fn single(mass: f64, weight: f64) -> Result<Self> {
        Self::new(vec![Pole { mass_sq: mass * mass, weight }], None)
    }

    pub fn validate(&self) -> Result<()> {
        for (m2, w) in self.components() {
            if !m2.is_finite() || !w.is_finite() {
                return Err(Error::NonFinite);
            }
            if m2 < 0.0 || w < 0.0 {
                return Err(Error::Unsupported(format!("spectral component outside the forward cone (μ² = {m2}, weight = {w})")));
            }
        }
        if let Some(c) = &self.continuum {
            if c.mass_sq.len() != c.weight.len() {
                return Err(Error::LengthMismatch("continuum grid and weights".into()));
            }
        }
        Ok(())
    }

    /// Poles followed by continuum nodes, as `(μ², weight)`.
    pub fn components(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self.poles.iter().map(|p| (p.mass_sq, p.weight)).collect();
        if let Some(c) = &self.continuum {
            out.extend(c.mass_sq.iter().copied().zip(c.weight.iter().copied()));
        }
        out
    }

    /// `C(τ; p) = Σ Z e^{-ωτ}/(2ω)`.
    pub fn laplace(&self, tau: f64, p2: f64) -> f64 {
        self.components().iter().map(|&(m2, w)| w * laplace_basis(m2, tau, p2)).sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.poles.iter().map(|p| Pole { mass_sq: p.mass_sq, weight: p.weight * factor }).collect(),
            self.continuum.as_ref().map(|c| Continuum { mass_sq: c.mass_sq.clone(), weight: c.weight.iter().map(|w| w * factor).collect() }),
        )
    }
}

fn laplace_basis(m2: f64, tau: f64, p2: f64) -> f64 {
    let omega = (p2 + m2).sqrt();
    (-omega * tau).exp() / (2.0 * omega)
}

/// Kernel samples `C(τ; p)` on a grid of Euclidean times and momenta.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TimeMomentumData {
    pub taus: Vec<f64>,
    pub momenta: Vec<[f64; 3]>,
    /// `values[k][i]` at `momenta[k]`, `taus[i]`.
    pub values: Vec<Vec<f64>>,
}

impl TimeMomentumData {
    pub fn default_taus() -> Vec<f64> {
        (1..=16).map(|k| 0.25 * k as f64).collect()
    }

    pub fn default_momenta() -> Vec<[f64; 3]> {
        vec![[0.0; 3], [0.5, 0.0, 0.0], [0.0, 1.0, 0.0]]
    }

    pub fn sample(form: &DifferenceForm, idx: &FieldIndex, taus: &[f64], momenta: &[[f64; 3]]) -> Result<Self> {
        if taus.is_empty() || momenta.is_empty() {
            return Err(Error::Unsupported("empty sampling grid".into()));
        }
        if taus.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::Unsupported("Euclidean times must be positive".into()));
        }
        let fam = form.family();
        let mut values = Vec::with_capacity(momenta.len());
        for p in momenta {
            values.push(taus.iter().map(|&t| fam.time_momentum(idx, t, *p)).collect::<Result<Vec<f64>>>()?);
        }
        Ok(Self { taus: taus.to_vec(), momenta: momenta.to_vec(), values })
    }

    /// Exact samples of a model (synthetic-data oracle input).
    pub fn from_model(model: &SpectralModel, taus: &[f64], momenta: &[[f64; 3]]) -> Self {
        let values = momenta
            .iter()
            .map(|p| {
                let p2 = p.iter().map(|v| v * v).sum::<f64>();
                taus.iter().map(|&t| model.laplace(t, p2)).collect()
            })
            .collect();
        Self { taus: taus.to_vec(), momenta: momenta.to_vec(), values }
    }

    fn rows(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        for (k, p) in self.momenta.iter().enumerate() {
            let p2 = p.iter().map(|v| v * v).sum::<f64>();
            for (i, &t) in self.taus.iter().enumerate() {
                out.push((t, p2, self.values[k][i]));
            }
        }
        out
    }
}

/// Free-rate exponential fit `Σ aᵢ e^{-Eᵢτ}` of one momentum slice, with
/// signed amplitudes and unrestricted rates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentialFit {
    pub momentum: [f64; 3],
    pub rates: Vec<f64>,
    pub amplitudes: Vec<f64>,
    /// Root-mean-square residual relative to the data scale.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub max_poles: usize,
    pub continuum_grid: Option<Vec<f64>>,
    /// A model with at most this relative RMS residual is accepted.
    pub residual_tol: f64,
    pub max_condition: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { max_poles: 2, continuum_grid: None, residual_tol: 1e-8, max_condition: 1e12 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralFit {
    pub model: SpectralModel,
    pub residual: f64,
    /// Covariance of `(μ²₁, Z₁, μ²₂, Z₂, …)` from the linearized fit.
    pub covariance: Vec<Vec<f64>>,
    pub condition: f64,
    /// Per-slice free fits with the constraints dropped.
    pub unconstrained: Vec<ExponentialFit>,
}

impl SpectralFit {
    pub fn accepted(&self, opts: &FitOptions) -> bool {
        self.residual <= opts.residual_tol
    }
}

/// Fit a two-point family's time-momentum data.
pub fn fit_spectral(form: &DifferenceForm, idx: &FieldIndex, taus: &[f64], momenta: &[[f64; 3]], opts: &FitOptions) -> Result<SpectralFit> {
    let data = TimeMomentumData::sample(form, idx, taus, momenta)?;
    fit_data(&data, opts)
}

/// Constrained fit: `μ² ≥ 0` by parametrizing `μ² = u²`, weights by NNLS
/// (variable projection), outer search by Nelder-Mead.
pub fn fit_data(data: &TimeMomentumData, opts: &FitOptions) -> Result<SpectralFit> {
    if opts.max_poles == 0 && opts.continuum_grid.is_none() {
        return Err(Error::Unsupported("spectral model with no components".into()));
    }
    let rows = data.rows();
    let scale: Vec<f64> = rows.iter().map(|r| r.2.abs().max(1e-300)).collect();
    let grid = opts.continuum_grid.clone().unwrap_or_default();
    let start_mass_sq = effective_mass_sq(data).unwrap_or(1.0).max(1e-6);

    let unconstrained = data
        .momenta
        .iter()
        .enumerate()
        .map(|(k, p)| fit_exponentials(&data.taus, &data.values[k], opts.max_poles.max(1)).map(|mut f| {
            f.momentum = *p;
            f
        }))
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<(f64, Vec<f64>, DVector<f64>)> = None;
    for n in 0..=opts.max_poles {
        if n == 0 && grid.is_empty() {
            continue;
        }
        let objective = |u: &[f64]| {
            let (res, _) = solve_weights(&rows, &scale, u, &grid);
            res
        };
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        if n > 0 {
            for factor in [1.0, 0.7, 1.5] {
                candidates.push((0..n).map(|i| (start_mass_sq * factor).sqrt() * (1.0 + i as f64)).collect());
            }
        } else {
            candidates.push(Vec::new());
        }
        for start in candidates {
            let u = if n == 0 {
                Vec::new()
            } else {
                let simplex = SimplexOptions { initial_step: 0.2, f_tol: 1e-30, x_tol: 1e-13, max_iter: 40_000 };
                let mut m = nelder_mead(objective, &start, &simplex);
                // restart from the optimum to shake off a collapsed simplex
                m = nelder_mead(objective, &m.x, &SimplexOptions { initial_step: 0.01, ..simplex });
                m.x
            };
            let (res, w) = solve_weights(&rows, &scale, &u, &grid);
            if best.as_ref().is_none_or(|b| res < b.0) {
                best = Some((res, u.clone(), w));
            }
        }
        if let Some(b) = &best {
            if relative_rms(b.0, rows.len()) <= opts.residual_tol {
                break;
            }
        }
    }
    let (res, u, w) = best.ok_or(Error::EmptyBasis)?;
    let residual = relative_rms(res, rows.len());

    let mut poles: Vec<Pole> = u.iter().zip(w.iter()).map(|(ui, &wi)| Pole { mass_sq: ui * ui, weight: wi }).collect();
    poles.sort_by(|a, b| a.mass_sq.total_cmp(&b.mass_sq));
    let continuum = if grid.is_empty() {
        None
    } else {
        Some(Continuum { mass_sq: grid.clone(), weight: w.iter().skip(u.len()).copied().collect() })
    };
    let model = SpectralModel::new(poles.clone(), continuum)?;
    let (covariance, condition) = linearized_covariance(&rows, &scale, &poles, res);
    if condition > opts.max_condition && !poles.is_empty() {
        return Err(Error::IllConditioned { condition, residual });
    }
    Ok(SpectralFit { model, residual, covariance, condition, unconstrained })
}

fn relative_rms(sum_sq: f64, n: usize) -> f64 {
    (sum_sq / n as f64).sqrt()
}

/// NNLS weights for fixed `u` (poles) plus the continuum grid; returns the
/// weighted residual sum of squares.
fn solve_weights(rows: &[(f64, f64, f64)], scale: &[f64], u: &[f64], grid: &[f64]) -> (f64, DVector<f64>) {
    let masses: Vec<f64> = u.iter().map(|v| v * v).chain(grid.iter().copied()).collect();
    let a = RMatrix::from_fn(rows.len(), masses.len(), |r, c| laplace_basis(masses[c], rows[r].0, rows[r].1) / scale[r]);
    let b = DVector::from_iterator(rows.len(), rows.iter().zip(scale).map(|(r, s)| r.2 / s));
    let w = nnls(&a, &b).unwrap_or_else(|_| DVector::zeros(masses.len()));
    let res = (&a * &w - &b).norm_squared();
    (if res.is_finite() { res } else { f64::INFINITY }, w)
}

fn linearized_covariance(rows: &[(f64, f64, f64)], scale: &[f64], poles: &[Pole], sum_sq: f64) -> (Vec<Vec<f64>>, f64) {
    let np = 2 * poles.len();
    if np == 0 {
        return (Vec::new(), 1.0);
    }
    let params: Vec<f64> = poles.iter().flat_map(|p| [p.mass_sq, p.weight]).collect();
    let model = |q: &[f64], r: &(f64, f64, f64)| -> f64 { q.chunks(2).map(|c| c[1] * laplace_basis(c[0].max(0.0), r.0, r.1)).sum() };
    let mut jac = RMatrix::zeros(rows.len(), np);
    for j in 0..np {
        let h = 1e-6 * params[j].abs().max(1e-3);
        let mut up = params.clone();
        let mut dn = params.clone();
        up[j] += h;
        dn[j] -= h;
        for (r, row) in rows.iter().enumerate() {
            jac[(r, j)] = (model(&up, row) - model(&dn, row)) / (2.0 * h * scale[r]);
        }
    }
    let condition = condition_number(&jac);
    let dof = rows.len().saturating_sub(np).max(1) as f64;
    let s2 = sum_sq / dof;
    let jtj = jac.transpose() * &jac;
    let cov = match jtj.try_inverse() {
        Some(inv) => inv * s2,
        None => RMatrix::from_element(np, np, f64::INFINITY),
    };
    ((0..np).map(|i| (0..np).map(|j| cov[(i, j)]).collect()).collect(), condition)
}

/// `μ²` from the late-time effective energy of the lowest-momentum slice.
fn effective_mass_sq(data: &TimeMomentumData) -> Option<f64> {
    let (k, p) = data
        .momenta
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.iter().map(|v| v * v).sum::<f64>().total_cmp(&b.1.iter().map(|v| v * v).sum::<f64>()))?;
    let vals = &data.values[k];
    let n = vals.len();
    if n < 2 || vals[n - 1] == 0.0 || vals[n - 2] == 0.0 || (vals[n - 1] < 0.0) != (vals[n - 2] < 0.0) {
        return None;
    }
    let e = (vals[n - 2] / vals[n - 1]).ln() / (data.taus[n - 1] - data.taus[n - 2]);
    let p2: f64 = p.iter().map(|v| v * v).sum();
    let m2 = e * e - p2;
    if m2.is_finite() && e > 0.0 {
        Some(m2)
    } else {
        None
    }
}

/// Signed exponential fit of one slice with up to `max_terms` terms.
pub fn fit_exponentials(taus: &[f64], values: &[f64], max_terms: usize) -> Result<ExponentialFit> {
    if taus.len() != values.len() || taus.len() < 2 {
        return Err(Error::LengthMismatch("exponential fit needs matching samples".into()));
    }
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    let n = taus.len();
    let e0 = {
        let (a, b) = (values[n - 2], values[n - 1]);
        if a != 0.0 && b != 0.0 && (a < 0.0) == (b < 0.0) {
            (a / b).ln() / (taus[n - 1] - taus[n - 2])
        } else {
            1.0
        }
    };
    let lsq = |rates: &[f64]| -> (f64, Vec<f64>) {
        let a = RMatrix::from_fn(n, rates.len(), |r, c| (-rates[c] * taus[r]).exp() / scale);
        let b = DVector::from_iterator(n, values.iter().map(|v| v / scale));
        match a.clone().svd(true, true).solve(&b, 1e-14) {
            Ok(x) => {
                let res = (&a * &x - &b).norm_squared();
                (if res.is_finite() { res } else { f64::INFINITY }, x.iter().copied().collect())
            }
            Err(_) => (f64::INFINITY, vec![0.0; rates.len()]),
        }
    };
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for terms in 1..=max_terms.max(1) {
        let start: Vec<f64> = (0..terms).map(|i| e0 + i as f64 * e0.abs().max(0.5)).collect();
        let simplex = SimplexOptions { initial_step: 0.2, f_tol: 1e-30, x_tol: 1e-13, max_iter: 40_000 };
        let m = nelder_mead(|r: &[f64]| lsq(r).0, &start, &simplex);
        let (res, amps) = lsq(&m.x);
        let rms = (res / n as f64).sqrt();
        if best.as_ref().is_none_or(|b| rms < 0.5 * b.0) {
            best = Some((rms, m.x.clone(), amps.iter().map(|a| a * scale).collect()));
        }
        if rms < 1e-10 {
            break;
        }
    }
    let (residual, rates, amplitudes) = best.expect("at least one term fitted");
    Ok(ExponentialFit { momentum: [0.0; 3], rates, amplitudes, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplace_of_single_pole() {
        let m = SpectralModel::single(2.0, 1.0).unwrap();
        let v = m.laplace(0.5, 0.0);
        assert!((v - (-1.0f64).exp() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn negative_components_rejected() {
        assert!(SpectralModel::new(vec![Pole { mass_sq: -1.0, weight: 1.0 }], None).is_err());
        assert!(SpectralModel::new(vec![Pole { mass_sq: 1.0, weight: -1.0 }], None).is_err());
    }

    #[test]
    fn exponential_fit_recovers_growing_rate() {
        let taus: Vec<f64> = (1..=10).map(|k| 0.2 * k as f64).collect();
        let values: Vec<f64> = taus.iter().map(|t| 0.5 * (0.8 * t).exp()).collect();
        let fit = fit_exponentials(&taus, &values, 2).unwrap();
        assert!((fit.rates[0] + 0.8).abs() < 1e-8, "{:?}", fit.rates);
    }
}
