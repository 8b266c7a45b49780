//! Temporal support through the recovered Laplace data.

use super::report::{AxiomId, AxiomReport, ReportBuilder};
use crate::continuation::{fit_data, fit_exponentials, FitOptions, TimeMomentumData};
use crate::correlator::{DifferenceForm, FieldIndex};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SupportOptions {
    pub taus: Vec<f64>,
    pub momenta: Vec<[f64; 3]>,
    pub max_terms: usize,
    /// Bound on negative rates and on the relative fit residual.
    pub tolerance: f64,
}

impl Default for SupportOptions {
    fn default() -> Self {
        Self {
            taus: TimeMomentumData::default_taus(),
            momenta: vec![[0.0; 3], [0.5, 0.0, 0.0], [0.0, 1.0, 0.0], [0.6, 0.0, 0.8]],
            max_terms: 2,
            tolerance: 1e-6,
        }
    }
}

/// Fits signed exponentials with free rates to each nonzero-momentum slice;
/// support on the positive semiaxis means every rate is non-negative.
pub fn check_temporal_support(form: &DifferenceForm, idx: &FieldIndex, opts: &SupportOptions) -> Result<AxiomReport> {
    let fam = form.family();
    let mut b = ReportBuilder::new(AxiomId::TemporalSupport, fam);
    if fam.source().is_statistical() {
        return Ok(b.inapplicable("statistical_kernel"));
    }
    let mut slices = Vec::new();
    for p in opts.momenta.iter().filter(|p| p.iter().any(|v| *v != 0.0)) {
        match TimeMomentumData::sample(form, idx, &opts.taus, &[*p]) {
            Ok(d) => slices.push(d),
            Err(Error::Unsupported(msg)) => {
                b.note(format!("slice p = {p:?} skipped: {msg}"));
            }
            Err(e) => return Err(e),
        }
    }
    if slices.is_empty() {
        return Ok(b.inapplicable("no_time_momentum_data"));
    }
    let mut min_rate = f64::INFINITY;
    let mut max_residual: f64 = 0.0;
    let mut min_mass_sq = f64::INFINITY;
    for d in &slices {
        let fit = fit_exponentials(&d.taus, &d.values[0], opts.max_terms)?;
        let p2: f64 = d.momenta[0].iter().map(|v| v * v).sum();
        for (&rate, &amp) in fit.rates.iter().zip(&fit.amplitudes) {
            if amp.abs() < 1e-12 * fit.amplitudes.iter().map(|a| a.abs()).fold(0.0, f64::max) {
                continue;
            }
            min_rate = min_rate.min(rate);
            min_mass_sq = min_mass_sq.min(rate * rate - p2);
        }
        max_residual = max_residual.max(fit.residual);
    }
    b.set("min_rate", min_rate);
    b.set("min_mass_sq", min_mass_sq);
    b.set("max_residual", max_residual);
    b.set("slices", slices.len() as f64);

    // constrained fit over all usable slices, for the report
    let merged = TimeMomentumData {
        taus: opts.taus.clone(),
        momenta: slices.iter().map(|d| d.momenta[0]).collect(),
        values: slices.iter().map(|d| d.values[0].clone()).collect(),
    };
    match fit_data(&merged, &FitOptions { max_poles: opts.max_terms, ..FitOptions::default() }) {
        Ok(fit) => {
            if let Some(p) = fit.model.poles.first() {
                b.set("fitted_mass_sq", p.mass_sq);
                b.set("fitted_weight", p.weight);
            }
            b.set("constrained_residual", fit.residual);
        }
        Err(e) => {
            b.note(format!("constrained spectral fit: {e}"));
        }
    }
    let violation = (-min_rate).max(max_residual).max(-min_mass_sq);
    Ok(b.judge(violation, opts.tolerance, 0.0))
}
