//! Runs the Euclidean checkers over one family.

use std::sync::Arc;

use rayon::prelude::*;

use super::cluster::{check_cluster, ClusterOptions};
use super::covariance::{check_euclidean_covariance, CovarianceOptions};
use super::gauge::{check_gauge_covariance, GaugeOptions};
use super::grid::{grid_cluster, grid_os_basis, grid_positivity_function, grid_probes};
use super::growth::{check_linear_growth, GrowthOptions};
use super::positivity::{check_reflection_positivity, check_renormalized_positivity};
use super::probes::Probe;
use super::report::{AxiomId, AxiomReport, ReportBuilder};
use super::support::{check_temporal_support, SupportOptions};
use super::symmetry::check_symmetry;
use crate::correlator::{reduce_to_differences, CorrelatorFamily, FieldIndex, TensorKind, TestFunction};
use crate::error::{Error, Result};

/// Inputs for every checker; `None` fields fall back to catalog-derived defaults.
#[derive(Clone, Debug, Default)]
pub struct SuiteInputs {
    pub probes: Option<Vec<Probe>>,
    pub os_basis: Option<Vec<Probe>>,
    /// Label and argument pair for the cluster check.
    pub cluster: Option<(FieldIndex, TestFunction, TestFunction, ClusterOptions)>,
    pub positivity_function: Option<TestFunction>,
    pub growth_probes: Option<Vec<TestFunction>>,
    pub covariance: CovarianceOptions,
    pub support: SupportOptions,
    pub growth: GrowthOptions,
    pub gauge: GaugeOptions,
}

/// First non-composite label, used for default probes.
fn primary_label(fam: &dyn CorrelatorFamily) -> Option<(String, TensorKind)> {
    fam.catalog().fields.iter().find(|f| !f.composite).map(|f| (f.label.clone(), f.tensor))
}

fn g(c: [f64; 4], w: f64) -> TestFunction {
    TestFunction::gaussian(c, w)
}

/// Single-slot indices the defaults are built from: one per component of the
/// primary label, or the gauge slots of a pure gauge family.
fn elementary_slots(fam: &dyn CorrelatorFamily) -> Vec<FieldIndex> {
    match primary_label(fam) {
        Some((label, tensor)) => (0..tensor.components()).map(|c| FieldIndex::matter(&[(&label, c)])).collect(),
        None if fam.catalog().fields.is_empty() => (0..4).map(|mu| FieldIndex::gauge(&[(0, mu)])).collect(),
        None => vec![],
    }
}

/// Partner of a slot in a two-point probe: the opposite charge when the
/// catalog has one.
fn partner(fam: &dyn CorrelatorFamily, slot: &FieldIndex) -> FieldIndex {
    if let Some(m) = slot.matter.first() {
        if let Ok(spec) = fam.catalog().get(&m.label) {
            if spec.charge != 0 {
                if let Some(bar) = fam.catalog().fields.iter().find(|f| f.charge == -spec.charge && !f.composite) {
                    return FieldIndex::matter(&[(&bar.label, m.component)]);
                }
            }
        }
    }
    slot.clone()
}

/// Default degree-2 cluster index.
pub fn default_pair(fam: &dyn CorrelatorFamily) -> Result<FieldIndex> {
    let slots = elementary_slots(fam);
    let first = slots.first().ok_or_else(|| Error::Axiom("family has no elementary slot".into()))?;
    let second = match &fam.catalog().get(first.matter.first().map_or("", |m| m.label.as_str())).map(|s| s.tensor) {
        // the antisymmetric spinor pairing vanishes on equal components
        Ok(TensorKind::Spinor { .. }) => slots.get(1).cloned().unwrap_or_else(|| first.clone()),
        _ => partner(fam, first),
    };
    Ok(first.concat(&second))
}

/// Generic smooth probes: 2-point tuples over slot pairs and, for scalar
/// labels, a 4-point tuple.
pub fn default_probes(fam: &dyn CorrelatorFamily) -> Result<Vec<Probe>> {
    let slots = elementary_slots(fam);
    if slots.is_empty() {
        return Err(Error::Axiom("family has no elementary slot".into()));
    }
    let pts = [([0.1, 0.2, -0.3, 0.0], 0.4), ([0.9, -0.4, 0.5, 0.2], 0.5), ([-0.2, 0.9, 0.4, 0.1], 0.45), ([0.5, -0.6, 0.2, 0.8], 0.4)];
    let mut out = Vec::new();
    for a in &slots {
        for b in &slots {
            out.push(Probe { idx: a.concat(&partner(fam, b)), args: vec![g(pts[0].0, pts[0].1), g(pts[1].0, pts[1].1)] });
        }
    }
    if slots.len() == 1 {
        let a = &slots[0];
        let b = partner(fam, a);
        out.push(Probe { idx: a.concat(&b).concat(a).concat(&b), args: pts.iter().map(|p| g(p.0, p.1)).collect() });
    }
    Ok(out)
}

/// Six positive-time Gaussians per elementary slot (at most two slots).
pub fn default_os_basis(fam: &dyn CorrelatorFamily) -> Result<Vec<Probe>> {
    let slots = elementary_slots(fam);
    if slots.is_empty() {
        return Err(Error::Axiom("family has no elementary slot".into()));
    }
    let mut out = Vec::new();
    for slot in slots.iter().take(2) {
        for t in [1.5, 2.0, 2.6] {
            for x in [0.0, 0.5] {
                out.push(Probe { idx: slot.clone(), args: vec![g([t, x, 0.0, 0.0], 0.2)] });
            }
        }
    }
    Ok(out)
}

fn run_one(fam: &Arc<dyn CorrelatorFamily>, axiom: AxiomId, inputs: &SuiteInputs) -> Result<AxiomReport> {
    let f = fam.as_ref();
    let lattice = f.extents().is_some();
    let probes = || -> Result<Vec<Probe>> {
        match &inputs.probes {
            Some(p) => Ok(p.clone()),
            None if lattice => grid_probes(f),
            None => default_probes(f),
        }
    };
    match axiom {
        AxiomId::EuclideanCovariance => check_euclidean_covariance(f, &probes()?, &inputs.covariance),
        AxiomId::TemporalSupport => {
            if f.source().is_statistical() {
                return Ok(ReportBuilder::new(axiom, f).inapplicable("statistical_kernel"));
            }
            let Some((label, _)) = primary_label(f) else {
                return Ok(ReportBuilder::new(axiom, f).inapplicable("no_elementary_label"));
            };
            let idx = FieldIndex::scalar(&label, 2);
            let form = reduce_to_differences(f, &idx, inputs.covariance.seed)?;
            check_temporal_support(&form, &idx, &inputs.support)
        }
        AxiomId::Symmetry => check_symmetry(f, &probes()?),
        AxiomId::Cluster => {
            let (idx, a, b, opts) = match &inputs.cluster {
                Some(c) => c.clone(),
                None if lattice => grid_cluster(f)?,
                None => (default_pair(f)?, g([0.0; 4], 0.3), g([0.0; 4], 0.3), ClusterOptions::default()),
            };
            check_cluster(f, &idx, &a, &b, &opts)
        }
        AxiomId::LinearGrowth => {
            if f.source().is_statistical() {
                return Ok(ReportBuilder::new(axiom, f).inapplicable("statistical_source"));
            }
            let Some((label, tensor)) = primary_label(f) else {
                return Ok(ReportBuilder::new(axiom, f).inapplicable("no_elementary_label"));
            };
            if tensor != TensorKind::Scalar {
                return Ok(ReportBuilder::new(axiom, f).inapplicable("non_scalar_label"));
            }
            let ps = inputs.growth_probes.clone().unwrap_or_else(|| vec![g([0.0; 4], 0.5), g([0.3, 0.1, 0.0, 0.0], 0.7)]);
            check_linear_growth(f, &label, &ps, &inputs.growth)
        }
        AxiomId::ReflectionPositivity => {
            let basis = match &inputs.os_basis {
                Some(b) => b.clone(),
                None if lattice => grid_os_basis(f)?,
                None => default_os_basis(f)?,
            };
            check_reflection_positivity(f, &basis)
        }
        AxiomId::GaugeCovariance => check_gauge_covariance(fam.clone(), &probes()?, &inputs.gauge),
        AxiomId::RenormalizedPositivity => {
            let pf = match &inputs.positivity_function {
                Some(p) => p.clone(),
                None if lattice => grid_positivity_function(f)?,
                None => inputs.gauge.form_function.clone(),
            };
            check_renormalized_positivity(f, &pf)
        }
        AxiomId::SpectralCondition | AxiomId::LocalCommutativity => {
            Ok(ReportBuilder::new(axiom, f).inapplicable("minkowski_check_needs_continued_model"))
        }
    }
}

/// Checkers run concurrently; results come back in `axioms` order. A
/// checker error becomes a failed report carrying the message, except
/// unsupported evaluations, which are inapplicable.
pub fn run_suite(fam: Arc<dyn CorrelatorFamily>, axioms: &[AxiomId], inputs: &SuiteInputs) -> Vec<AxiomReport> {
    axioms
        .par_iter()
        .map(|&a| match run_one(&fam, a, inputs) {
            Ok(r) => r,
            Err(Error::Unsupported(msg)) => {
                let mut b = ReportBuilder::new(a, fam.as_ref());
                b.note(msg);
                b.inapplicable("unsupported_evaluation")
            }
            Err(e) => {
                let mut b = ReportBuilder::new(a, fam.as_ref());
                b.note(e.to_string());
                b.fail(0.0, 0.0, "checker_error")
            }
        })
        .collect()
}
