//! Reflection positivity and the renormalized positivity forms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::probes::Probe;
use super::report::{AxiomId, AxiomReport, GramMatrix, ReportBuilder};
use crate::correlator::{smear, smear_samples, CorrelatorFamily, Estimate, FieldIndex, TestFunction};
use crate::error::{Error, Result};
use crate::free_field::FIELD_STRENGTH_SQUARED;
use crate::symmetry::structure_constants;

/// Largest negative-time mass tolerated in a positive-time functional.
pub const LEAKAGE_LIMIT: f64 = 1e-10;

/// Label of each argument slot (matter first, `None` for gauge slots).
pub(crate) fn slot_labels(idx: &FieldIndex) -> Vec<Option<&str>> {
    idx.matter.iter().map(|m| Some(m.label.as_str())).chain(idx.gauge.iter().map(|_| None)).collect()
}

pub(crate) fn check_support(fam: &dyn CorrelatorFamily, p: &Probe) -> Result<()> {
    for (f, label) in p.args.iter().zip(slot_labels(&p.idx)) {
        let leak = fam.negative_time_leakage(label, f)?;
        if leak > LEAKAGE_LIMIT {
            return Err(Error::SupportViolation(format!("negative-time mass {leak:.3e} in a basis functional")));
        }
    }
    Ok(())
}

/// `Θ(f₁ … f_n) = (Θf_n … Θf₁)` on the reversed index.
fn reflected(fam: &dyn CorrelatorFamily, p: &Probe) -> Result<(FieldIndex, Vec<TestFunction>)> {
    let labels = slot_labels(&p.idx);
    let args = p.args.iter().zip(labels).rev().map(|(f, l)| fam.reflect_argument(l, f)).collect::<Result<_>>()?;
    Ok((p.idx.reversed(), args))
}

/// `⟨Θ a, b⟩` with the component reflection signs of `a`.
pub fn os_pair(fam: &dyn CorrelatorFamily, a: &Probe, b: &Probe) -> Result<Estimate> {
    let (ridx, rargs) = reflected(fam, a)?;
    let sign = a.idx.reflection_sign(fam.catalog())?;
    let idx = ridx.concat(&b.idx);
    let args: Vec<TestFunction> = rargs.into_iter().chain(b.args.iter().cloned()).collect();
    Ok(smear(fam, &idx, &args)?.scale(sign))
}

pub(crate) fn os_pair_samples(fam: &dyn CorrelatorFamily, a: &Probe, b: &Probe) -> Result<Option<Vec<Complex64>>> {
    let (ridx, rargs) = reflected(fam, a)?;
    let sign = a.idx.reflection_sign(fam.catalog())?;
    let idx = ridx.concat(&b.idx);
    let args: Vec<TestFunction> = rargs.into_iter().chain(b.args.iter().cloned()).collect();
    Ok(smear_samples(fam, &idx, &args)?.map(|s| s.into_iter().map(|v| v * sign).collect()))
}

/// OS Gram matrix over positive-time functionals.
pub fn os_gram(fam: &dyn CorrelatorFamily, basis: &[Probe]) -> Result<GramMatrix> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    for p in basis {
        check_support(fam, p)?;
    }
    let n = basis.len();
    let mut entries = DMatrix::zeros(n, n);
    let mut reps: Option<Vec<DMatrix<Complex64>>> = None;
    for i in 0..n {
        for j in 0..n {
            entries[(i, j)] = os_pair(fam, &basis[i], &basis[j])?.value;
            if let Some(s) = os_pair_samples(fam, &basis[i], &basis[j])? {
                let r = reps.get_or_insert_with(|| vec![DMatrix::zeros(n, n); s.len()]);
                for (m, v) in r.iter_mut().zip(s) {
                    m[(i, j)] = v;
                }
            }
        }
    }
    let names = basis.iter().enumerate().map(|(k, p)| format!("b{k}:{}", describe_index(&p.idx))).collect();
    Ok(GramMatrix::new(entries, names, reps.as_deref()))
}

pub fn describe_index(idx: &FieldIndex) -> String {
    let m: Vec<String> = idx.matter.iter().map(|s| format!("{}[{}]", s.label, s.component)).collect();
    let g: Vec<String> = idx.gauge.iter().map(|s| format!("A{}_{}", s.alpha, s.mu)).collect();
    [m, g].concat().join(" ")
}

pub fn check_reflection_positivity(fam: &dyn CorrelatorFamily, basis: &[Probe]) -> Result<AxiomReport> {
    let gram = os_gram(fam, basis)?;
    let mut b = ReportBuilder::new(AxiomId::ReflectionPositivity, fam);
    let (min, sigma) = gram.min_eigenvalue();
    let norm = gram.norm();
    b.set("min_eigenvalue", min);
    b.set("min_eigenvalue_error", sigma);
    b.set("max_eigenvalue", *gram.eigenvalues.last().expect("non-empty"));
    b.set("norm", norm);
    b.set("hermiticity_defect", gram.hermiticity_defect);
    b.set("basis_size", gram.dim() as f64);
    let tol = if fam.source().is_statistical() { (1e-10 * norm).max(3.0 * sigma) } else { 1e-10 * norm };
    Ok(b.judge(-min, tol, sigma))
}

/// One evaluated positivity form.
#[derive(Clone, Debug)]
pub struct FormValue {
    pub label: String,
    /// `true` for the field-strength form.
    pub field_strength: bool,
    pub value: Complex64,
    pub stderr: f64,
    /// Structure-constant terms of the field-strength form.
    pub c_terms: Option<f64>,
}

/// Evaluate every composite positivity form the family furnishes.
///
/// Exact sources: `⟨Θ C(f) C(f)⟩` (needs `f` at positive times). Statistical
/// sources: the composite one-point smear `⟨C(f)⟩` with `f ≥ 0`.
pub fn positivity_forms(fam: &dyn CorrelatorFamily, f: &TestFunction) -> Result<Vec<FormValue>> {
    if !f.is_real() {
        return Err(Error::Unsupported("positivity forms need a real test function".into()));
    }
    let composites: Vec<String> = fam.catalog().fields.iter().filter(|s| s.composite).map(|s| s.label.clone()).collect();
    if composites.is_empty() {
        return Err(Error::Unsupported("family furnishes no thin-diagonal composites".into()));
    }
    let mut out = Vec::new();
    for label in composites {
        let field_strength = label == FIELD_STRENGTH_SQUARED;
        let est = if fam.source().is_statistical() {
            smear(fam, &FieldIndex::scalar(&label, 1), std::slice::from_ref(f))?
        } else {
            let p = Probe { idx: FieldIndex::scalar(&label, 1), args: vec![f.clone()] };
            check_support(fam, &p)?;
            os_pair(fam, &p, &p)?
        };
        let c_terms = if field_strength {
            let c = structure_constants::<f64>(fam.group());
            // the bracket terms carry a factor C; with C = 0 they vanish identically
            if c.is_zero() {
                Some(0.0)
            } else {
                None
            }
        } else {
            None
        };
        out.push(FormValue { label, field_strength, value: est.value, stderr: est.stderr, c_terms });
    }
    Ok(out)
}

pub fn check_renormalized_positivity(fam: &dyn CorrelatorFamily, f: &TestFunction) -> Result<AxiomReport> {
    let mut b = ReportBuilder::new(AxiomId::RenormalizedPositivity, fam);
    let forms = match positivity_forms(fam, f) {
        Ok(v) => v,
        Err(Error::Unsupported(msg)) if msg.contains("composites") => return Ok(b.inapplicable("no_composites")),
        Err(e) => return Err(e),
    };
    let mut violation = f64::NEG_INFINITY;
    let mut sigma_max: f64 = 0.0;
    let mut worst_tol = 0.0;
    let mut worst_ratio = f64::NEG_INFINITY;
    for form in &forms {
        let key = if form.field_strength { "pos2" } else { "pos1" };
        b.set(&format!("{key}:{}", form.label), form.value.re);
        b.set(&format!("{key}:{}:imag", form.label), form.value.im);
        b.set(&format!("{key}:{}:stderr", form.label), form.stderr);
        if form.field_strength {
            match form.c_terms {
                Some(c) => {
                    b.set("pos2_c_terms", c);
                }
                None => {
                    b.note("non-abelian bracket terms of the field-strength form are out of scope");
                }
            }
        }
        let tol = if fam.source().is_statistical() {
            (1e-10 * form.value.norm()).max(3.0 * form.stderr)
        } else {
            1e-10 * form.value.norm()
        };
        let v = -form.value.re;
        let ratio = if tol > 0.0 { v / tol } else if v > 0.0 { f64::INFINITY } else { v };
        if ratio > worst_ratio {
            worst_ratio = ratio;
            violation = v;
            worst_tol = tol;
        }
        sigma_max = sigma_max.max(form.stderr);
    }
    b.note("lowest simultaneous order only (j ≤ 2 matter, n ≤ 4 gauge indices); higher combinations not evaluated");
    Ok(b.judge(violation, worst_tol, sigma_max))
}
