//! Gauge covariance: invariant observables, positivity forms and the
//! inhomogeneous shift of gauge slots.

use std::sync::Arc;

use num_complex::Complex64;

use super::positivity::positivity_forms;
use super::probes::Probe;
use super::report::{AxiomId, AxiomReport, ReportBuilder};
use crate::correlator::{smear, Bump, CorrelatorFamily, FieldIndex, TestFunction, ANTISYMMETRIC_PAIRS};
use crate::error::{Error, Result};
use crate::gauge_action::{GaugeTransformed, GaussianPhase};

pub const INVARIANT_TOL: f64 = 1e-12;
pub const FORM_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct GaugeOptions {
    pub phase: GaussianPhase,
    /// Seed of random lattice gauge transformations.
    pub seed: u64,
    /// Real positive-time function for the positivity forms.
    pub form_function: TestFunction,
    /// Argument pairs for the gauge-slot shift.
    pub slot_functions: (TestFunction, TestFunction),
}

impl Default for GaugeOptions {
    fn default() -> Self {
        Self {
            phase: GaussianPhase { amplitude: 0.3, center: [1.2, 0.3, -0.2, 0.1], width: 0.8 },
            seed: 7,
            form_function: TestFunction::gaussian([1.5, 0.0, 0.0, 0.0], 0.2),
            slot_functions: (
                TestFunction::gaussian([1.0, 0.2, 0.0, 0.0], 0.4),
                TestFunction::gaussian([0.4, -0.5, 0.3, 0.0], 0.5),
            ),
        }
    }
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    let s = a.norm().max(b.norm());
    if d == 0.0 {
        0.0
    } else if s == 0.0 {
        f64::INFINITY
    } else {
        d / s
    }
}

/// Probes built only from neutral labels, whose smears the action must not move.
fn neutral_probes(fam: &dyn CorrelatorFamily, probes: &[Probe]) -> Result<Vec<Probe>> {
    let mut out = Vec::new();
    for p in probes {
        if !p.idx.gauge.is_empty() {
            continue;
        }
        let mut neutral = true;
        for s in &p.idx.matter {
            neutral &= fam.catalog().get(&s.label)?.charge == 0;
        }
        if neutral {
            out.push(p.clone());
        }
    }
    let f = TestFunction::gaussian([0.9, 0.1, 0.0, 0.0], 0.3);
    let g = TestFunction::gaussian([-0.4, 0.6, 0.2, 0.0], 0.35);
    for spec in &fam.catalog().fields {
        if spec.charge == 0 && spec.composite {
            out.push(Probe { idx: FieldIndex::scalar(&spec.label, 2), args: vec![f.clone(), g.clone()] });
        }
    }
    Ok(out)
}

/// `∫ f ∂̃_μ ε` by parts, `-∫ (∂_μ f) ε`: an independent route to the slot shift.
pub fn shift_by_parts(phase: &GaussianPhase, mu: usize, f: &TestFunction) -> Result<Complex64> {
    let eps = Bump::gaussian(phase.center, phase.width).scale(Complex64::new(phase.amplitude, 0.0));
    let df = f.derivative(mu)?;
    let total: Complex64 = df.bumps()?.iter().map(|b| -b.product(&eps).integral()).sum();
    Ok(if mu == 0 { total * Complex64::new(0.0, -1.0) } else { total })
}

/// `F_{μν}(f)` as gauge-slot terms `A_ν(-∂̃_μ f) - A_μ(-∂̃_ν f)`.
fn field_strength_terms(c: usize, f: &TestFunction) -> Result<Vec<(usize, TestFunction)>> {
    let (mu, nu) = ANTISYMMETRIC_PAIRS[c];
    let tilde = |k: usize| -> Result<TestFunction> {
        let d = f.derivative(k)?;
        Ok(if k == 0 { d.scale(Complex64::new(0.0, -1.0)) } else { d })
    };
    Ok(vec![(nu, tilde(mu)?.scale(Complex64::new(-1.0, 0.0))), (mu, tilde(nu)?)])
}

fn field_strength_pair(fam: &dyn CorrelatorFamily, c1: usize, f: &TestFunction, c2: usize, g: &TestFunction) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (m1, h1) in field_strength_terms(c1, f)? {
        for (m2, h2) in field_strength_terms(c2, g)? {
            total += smear(fam, &FieldIndex::gauge(&[(0, m1), (0, m2)]), &[h1.clone(), h2])?.value;
        }
    }
    Ok(total)
}

/// Gauge-slot shift against the by-parts oracle, and invariance of the
/// field strength assembled from gauge slots.
fn inhomogeneous_defects(
    base: &dyn CorrelatorFamily,
    moved: &dyn CorrelatorFamily,
    phase: &GaussianPhase,
    f: &TestFunction,
    g: &TestFunction,
) -> Result<(f64, f64)> {
    let mut shift_defect: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let idx = FieldIndex::gauge(&[(0, mu), (0, nu)]);
            let args = [f.clone(), g.clone()];
            let (cf, cg) = (shift_by_parts(phase, mu, f)?, shift_by_parts(phase, nu, g)?);
            let one_f = smear(base, &FieldIndex::gauge(&[(0, mu)]), std::slice::from_ref(f))?.value;
            let one_g = smear(base, &FieldIndex::gauge(&[(0, nu)]), std::slice::from_ref(g))?.value;
            let expected = smear(base, &idx, &args)?.value + cf * one_g + cg * one_f + cf * cg;
            let got = smear(moved, &idx, &args)?.value;
            shift_defect = shift_defect.max((got - expected).norm() / expected.norm().max(1e-300));
        }
    }
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for c1 in 0..6 {
        for c2 in 0..6 {
            let a = field_strength_pair(base, c1, f, c2, g)?;
            let b = field_strength_pair(moved, c1, f, c2, g)?;
            diff = diff.max((a - b).norm());
            scale = scale.max(a.norm());
        }
    }
    let strength_defect = if diff == 0.0 { 0.0 } else { diff / scale };
    Ok((shift_defect, strength_defect))
}

/// Whether the family carries a nonzero gauge-slot two-point function.
fn has_gauge_slots(fam: &dyn CorrelatorFamily) -> bool {
    let f = TestFunction::gaussian([0.0; 4], 0.5);
    smear(fam, &FieldIndex::gauge(&[(0, 1), (0, 1)]), &[f.clone(), f]).is_ok_and(|e| e.value.norm() > 0.0)
}

pub fn check_gauge_covariance(fam: Arc<dyn CorrelatorFamily>, probes: &[Probe], opts: &GaugeOptions) -> Result<AxiomReport> {
    let mut b = ReportBuilder::new(AxiomId::GaugeCovariance, fam.as_ref());
    b.note("defining action on matter labels, adjoint (inhomogeneous) action on gauge slots; other representations untested");

    if let Some(defect) = fam.gauge_invariance_defect(opts.seed)? {
        // configuration-level invariance is exact, never statistical
        b.set("invariant_defect", defect);
        return Ok(b.judge(defect / INVARIANT_TOL, 1.0, 0.0));
    }
    if fam.source().is_statistical() {
        return Ok(b.inapplicable("no_configurations"));
    }
    let moved: Arc<dyn CorrelatorFamily> = match GaugeTransformed::new(fam.clone(), opts.phase) {
        Ok(m) => Arc::new(m),
        Err(Error::Unsupported(_)) => return Ok(b.inapplicable("non_abelian_closed_form_action")),
        Err(e) => return Err(e),
    };

    // (a) invariant smears
    let mut invariant: f64 = 0.0;
    let neutral = neutral_probes(fam.as_ref(), probes)?;
    for p in &neutral {
        let x = smear(fam.as_ref(), &p.idx, &p.args)?.value;
        let y = smear(moved.as_ref(), &p.idx, &p.args)?.value;
        invariant = invariant.max(relative(x, y));
    }
    b.set("invariant_defect", invariant);
    b.set("invariant_probes", neutral.len() as f64);

    // (b) positivity forms before and after
    let mut form_defect: f64 = 0.0;
    match (positivity_forms(fam.as_ref(), &opts.form_function), positivity_forms(moved.as_ref(), &opts.form_function)) {
        (Ok(before), Ok(after)) => {
            for (x, y) in before.iter().zip(&after) {
                form_defect = form_defect.max(relative(x.value, y.value));
            }
            b.set("positivity_forms", before.len() as f64);
        }
        (Err(Error::Unsupported(msg)), _) => {
            b.note(format!("positivity forms not evaluated: {msg}"));
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    }
    b.set("positivity_form_defect", form_defect);

    // (c) inhomogeneous term on gauge slots
    let (mut shift, mut strength) = (0.0, 0.0);
    if has_gauge_slots(fam.as_ref()) {
        let (f, g) = &opts.slot_functions;
        (shift, strength) = inhomogeneous_defects(fam.as_ref(), moved.as_ref(), &opts.phase, f, g)?;
        b.set("inhomogeneous_shift_defect", shift);
        b.set("field_strength_defect", strength);
    } else {
        b.note("no gauge slots: inhomogeneous shift not applicable");
    }

    let violation = (invariant / INVARIANT_TOL).max(form_defect / FORM_TOL).max(shift / FORM_TOL).max(strength / FORM_TOL);
    Ok(b.judge(violation, 1.0, 0.0))
}
