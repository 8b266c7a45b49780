//! Spatial Euclidean motions and abelian gauge transformations on sequence vectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sequence::{SequenceVector, Term};
use crate::axioms::probes::{components_of, product_tuples, slot_matrices, with_components};
use crate::correlator::{CorrelatorFamily, FieldIndex, TestFunction};
use crate::error::{Error, Result};
use crate::gauge_action::GaussianPhase;
use crate::symmetry::{vector_rep_matrix, SpacetimeRep};

const SPATIAL_TOL: f64 = 1e-12;

/// Whether `rep` fixes the time axis and the reflection plane.
pub fn is_spatial(rep: &SpacetimeRep<f64>) -> bool {
    match rep {
        SpacetimeRep::Euclidean { translation, u, v } => {
            translation[0] == 0.0 && (u - v).iter().all(|z| z.norm() <= SPATIAL_TOL)
        }
        SpacetimeRep::Lorentz { .. } => false,
    }
}

/// `U(g) v` for a spatial motion `g`; the vacuum is left fixed.
pub fn act_poincare(fam: &dyn CorrelatorFamily, rep: &SpacetimeRep<f64>, v: &SequenceVector) -> Result<SequenceVector> {
    if !is_spatial(rep) {
        return Err(Error::Unsupported("only spatial motions commute with the reflection".into()));
    }
    let r = vector_rep_matrix(rep);
    let a = rep.translation();
    let mut terms = Vec::new();
    for t in &v.terms {
        if t.idx.is_empty() {
            terms.push(t.clone());
            continue;
        }
        let mats = slot_matrices(&t.idx, fam.catalog(), &r, Some(rep))?;
        let comps = components_of(&t.idx);
        let args: Vec<TestFunction> = t.args.iter().map(|f| f.pullback(&r, &a)).collect();
        let dims: Vec<usize> = mats.iter().map(|m| m.nrows()).collect();
        for target in product_tuples(&dims) {
            let coef: Complex64 = target.iter().zip(&comps).zip(&mats).map(|((&ti, &ci), m)| m[(ti, ci)]).product();
            if coef.norm() <= 1e-15 {
                continue;
            }
            terms.push(Term { idx: with_components(&t.idx, &target), coeff: t.coeff * coef, args: args.clone() });
        }
    }
    Ok(SequenceVector { terms })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AbelianGauge {
    /// Global phase `e^{iqθ}`.
    Constant { theta: f64 },
    /// Local phase `e^{iqε(x)}` with a Gaussian `ε`.
    Gaussian(GaussianPhase),
}

/// `U(g) v` and the accumulated Taylor projection error of the phase products.
pub fn act_gauge(fam: &dyn CorrelatorFamily, g: &AbelianGauge, v: &SequenceVector) -> Result<(SequenceVector, f64)> {
    if !fam.group().is_abelian() {
        return Err(Error::Unsupported("gauge action on vectors is abelian only".into()));
    }
    let mut terms = Vec::new();
    let mut projection = 0.0;
    for t in &v.terms {
        let m = t.idx.matter.len();
        let mut coeff = t.coeff;
        let mut matter_args = Vec::with_capacity(m);
        for (slot, f) in t.idx.matter.iter().zip(&t.args) {
            let q = fam.catalog().get(&slot.label)?.charge;
            match g {
                AbelianGauge::Constant { theta } => {
                    coeff *= Complex64::from_polar(1.0, q as f64 * theta);
                    matter_args.push(f.clone());
                }
                AbelianGauge::Gaussian(phase) => {
                    if q != 0 {
                        projection += phase.taylor_order(q)?.1;
                    }
                    matter_args.push(phase.multiply(q, f)?);
                }
            }
        }
        let phase = match g {
            AbelianGauge::Gaussian(p) if !t.idx.gauge.is_empty() => p,
            _ => {
                terms.push(Term { idx: t.idx.clone(), coeff, args: matter_args.into_iter().chain(t.args[m..].iter().cloned()).collect() });
                continue;
            }
        };
        let shifts: Vec<Complex64> =
            t.idx.gauge.iter().zip(&t.args[m..]).map(|(s, f)| phase.slot_shift(s.mu, f)).collect::<Result<_>>()?;
        let n = t.idx.gauge.len();
        for mask in 0u32..(1 << n) {
            let c: Complex64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| shifts[i]).product();
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let kept: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
            let idx = FieldIndex { matter: t.idx.matter.clone(), gauge: kept.iter().map(|&i| t.idx.gauge[i]).collect() };
            let args = matter_args.iter().cloned().chain(kept.iter().map(|&i| t.args[m + i].clone())).collect();
            terms.push(Term { idx, coeff: coeff * c, args });
        }
    }
    Ok((SequenceVector { terms }, projection))
}
