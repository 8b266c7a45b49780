//! Finite sequences of smeared field slots and the field operators acting on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::axioms::Probe;
use crate::correlator::{FieldIndex, GaugeSlot, MatterSlot, TestFunction};
use crate::error::{Error, Result};

/// Default degree cap of sequence vectors.
pub const DEFAULT_DEGREE_CAP: usize = 4;

/// One monomial `c · φ_idx(f₁ ⊗ … ⊗ f_n)`; arguments are ordered matter then gauge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub idx: FieldIndex,
    pub coeff: Complex64,
    pub args: Vec<TestFunction>,
}

impl Term {
    pub fn probe(&self) -> Probe {
        Probe { idx: self.idx.clone(), args: self.args.clone() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SequenceVector {
    pub terms: Vec<Term>,
}

impl SequenceVector {
    /// `Ω`: the degree-zero term with unit coefficient.
    pub fn vacuum() -> Self {
        Self { terms: vec![Term { idx: FieldIndex::empty(), coeff: Complex64::new(1.0, 0.0), args: vec![] }] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(idx: FieldIndex, args: Vec<TestFunction>) -> Result<Self> {
        if idx.degree() != args.len() {
            return Err(Error::LengthMismatch(format!("{} arguments for degree {}", args.len(), idx.degree())));
        }
        Ok(Self { terms: vec![Term { idx, coeff: Complex64::new(1.0, 0.0), args }] })
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.idx.degree()).max().unwrap_or(0)
    }

    pub fn is_vacuum(&self) -> bool {
        *self == Self::vacuum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { terms: self.terms.iter().map(|t| Term { coeff: t.coeff * s, ..t.clone() }).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { terms: self.terms.iter().chain(&other.terms).cloned().collect() }
    }

    /// `Σ_k c_k v_k`.
    pub fn combination(vectors: &[SequenceVector], coeffs: &[Complex64]) -> Result<Self> {
        if vectors.len() != coeffs.len() {
            return Err(Error::LengthMismatch(format!("{} vectors, {} coefficients", vectors.len(), coeffs.len())));
        }
        Ok(vectors.iter().zip(coeffs).fold(Self::zero(), |acc, (v, &c)| acc.add(&v.scale(c))))
    }
}

/// What a field operator prepends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorKind {
    Matter { label: String, component: usize },
    Gauge { alpha: usize, mu: usize },
    /// A thin-diagonal composite label such as `:F2:` or `:phi2:`.
    Composite { label: String },
}

/// `φ(X) {f} = {X ⊗ f}` up to a degree cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldOperator {
    pub kind: OperatorKind,
    pub cap: usize,
}

impl FieldOperator {
    pub fn matter(label: &str, component: usize) -> Self {
        Self { kind: OperatorKind::Matter { label: label.into(), component }, cap: DEFAULT_DEGREE_CAP }
    }

    pub fn gauge(alpha: usize, mu: usize) -> Self {
        Self { kind: OperatorKind::Gauge { alpha, mu }, cap: DEFAULT_DEGREE_CAP }
    }

    pub fn composite(label: &str) -> Self {
        Self { kind: OperatorKind::Composite { label: label.into() }, cap: DEFAULT_DEGREE_CAP }
    }

    pub fn with_cap(self, cap: usize) -> Self {
        Self { cap, ..self }
    }

    pub fn arity(&self) -> usize {
        1
    }
}

/// Prepend the operator's slot, smeared with `x`, to every term of `v`.
pub fn apply_field(op: &FieldOperator, v: &SequenceVector, x: &TestFunction) -> Result<SequenceVector> {
    if v.degree() + op.arity() > op.cap {
        return Err(Error::CapExceeded { cap: op.cap });
    }
    let terms = v
        .terms
        .iter()
        .map(|t| {
            let mut idx = t.idx.clone();
            let mut args = t.args.clone();
            match &op.kind {
                OperatorKind::Matter { label, component } => {
                    idx.matter.insert(0, MatterSlot { label: label.clone(), component: *component });
                    args.insert(0, x.clone());
                }
                OperatorKind::Composite { label } => {
                    idx.matter.insert(0, MatterSlot { label: label.clone(), component: 0 });
                    args.insert(0, x.clone());
                }
                OperatorKind::Gauge { alpha, mu } => {
                    let m = idx.matter.len();
                    idx.gauge.insert(0, GaugeSlot { alpha: *alpha, mu: *mu });
                    args.insert(m, x.clone());
                }
            }
            Term { idx, coeff: t.coeff, args }
        })
        .collect();
    Ok(SequenceVector { terms })
}

/// `φ(x₁) ⋯ φ(x_n) Ω` for a single operator applied repeatedly (`x₁` outermost).
pub fn monomial_on_vacuum(op: &FieldOperator, xs: &[TestFunction]) -> Result<SequenceVector> {
    xs.iter().rev().try_fold(SequenceVector::vacuum(), |v, x| apply_field(op, &v, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(t: f64) -> TestFunction {
        TestFunction::gaussian([t, 0.0, 0.0, 0.0], 0.5)
    }

    #[test]
    fn apply_to_vacuum_gives_degree_one() {
        let v = apply_field(&FieldOperator::matter("phi", 0), &SequenceVector::vacuum(), &g(1.0)).unwrap();
        assert_eq!(v.degree(), 1);
        assert_eq!(v.terms.len(), 1);
        assert_eq!(v.terms[0].args, vec![g(1.0)]);
    }

    #[test]
    fn gauge_slot_goes_after_matter() {
        let v = apply_field(&FieldOperator::matter("phi", 0), &SequenceVector::vacuum(), &g(1.0)).unwrap();
        let w = apply_field(&FieldOperator::gauge(0, 2), &v, &g(2.0)).unwrap();
        assert_eq!(w.terms[0].idx.gauge, vec![GaugeSlot { alpha: 0, mu: 2 }]);
        assert_eq!(w.terms[0].args, vec![g(1.0), g(2.0)]);
    }

    #[test]
    fn cap_is_enforced() {
        let op = FieldOperator::matter("phi", 0).with_cap(2);
        let v = monomial_on_vacuum(&op, &[g(1.0), g(2.0)]).unwrap();
        assert!(matches!(apply_field(&op, &v, &g(3.0)), Err(Error::CapExceeded { cap: 2 })));
    }

    #[test]
    fn monomial_order_is_outermost_first() {
        let v = monomial_on_vacuum(&FieldOperator::matter("phi", 0), &[g(1.0), g(2.0)]).unwrap();
        assert_eq!(v.terms[0].args, vec![g(1.0), g(2.0)]);
    }
}
