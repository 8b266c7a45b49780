//! Minkowski-side checks on continued two-point models.

use serde_json::json;

use super::report::{AxiomId, AxiomReport, ReportBuilder};
use crate::continuation::{analytic_samples, continue_to_wightman, verify_growth_estimate, BoundaryOptions, SpectralModel};
use crate::correlator::Point;
use crate::error::Result;

fn builder(axiom: AxiomId, model: &SpectralModel, name: &str) -> ReportBuilder {
    ReportBuilder::named(axiom, name, json!({ "kind": "spectral_model", "model": model }))
}

/// Support of the spectral measure in the closed forward cone, and a
/// polynomial envelope of the continuation in the forward tube.
pub fn check_spectral_condition(model: &SpectralModel, name: &str) -> Result<AxiomReport> {
    let mut b = builder(AxiomId::SpectralCondition, model, name);
    let comps = model.components();
    let min_mass_sq = comps.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let min_weight = comps.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    b.set("min_mass_sq", min_mass_sq);
    b.set("min_weight", min_weight);
    if model.validate().is_err() {
        return Ok(b.fail(0.0, 0.0, "support_outside_forward_cone"));
    }
    let samples = analytic_samples(model, &[0.0, 1.0, 2.5], &[0.5, 1.5], &[0.4, 0.2, 0.1])?;
    let env = verify_growth_estimate(&samples, 4, 4)?;
    b.set("envelope_c", env.c);
    b.set("envelope_n", env.n as f64);
    b.set("envelope_m", env.m as f64);
    b.set("envelope_refinement_ratio", env.refinement_ratio);
    b.note("two-point level only; higher-point Minkowski checks are not evaluated");
    if !env.saturated {
        return Ok(b.fail(1.5, 0.0, "tube_envelope_not_saturated"));
    }
    Ok(b.judge((-min_mass_sq).max(-min_weight).max(0.0), 0.0, 0.0))
}

/// `W(x) = W(-x)` at spacelike `x`, i.e. the commutator function vanishes.
pub fn check_local_commutativity(model: &SpectralModel, name: &str, points: &[Point], opts: &BoundaryOptions) -> Result<AxiomReport> {
    let mut b = builder(AxiomId::LocalCommutativity, model, name);
    let mut worst: f64 = 0.0;
    let mut tested = 0usize;
    for x in points {
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        if x[0].abs() >= r {
            continue;
        }
        let w = continue_to_wightman(model, x, opts)?;
        let mirrored = continue_to_wightman(model, &x.map(|v| -v), opts)?;
        worst = worst.max((w - mirrored).norm() / w.norm().max(1e-300));
        tested += 1;
    }
    if tested == 0 {
        return Ok(b.inapplicable("no_spacelike_points"));
    }
    b.set("max_commutator", worst);
    b.set("points", tested as f64);
    b.note("two-point symmetric-kernel form only");
    Ok(b.judge(worst, 1e-8, 0.0))
}
