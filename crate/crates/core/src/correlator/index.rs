//! Field labels, index tuples and permutation bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symmetry::SpinorIndexSet;

/// Tensor type carried by a matter label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TensorKind {
    Scalar,
    Spinor { set: SpinorIndexSet },
    /// Antisymmetric rank-2 tensor, components ordered 01, 02, 03, 12, 13, 23.
    Antisymmetric,
}

pub const ANTISYMMETRIC_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Component number of the antisymmetric pair (μ, ν) and the sign relating
/// `F_{μν}` to the stored component; `None` on the diagonal.
pub fn antisymmetric_component(mu: usize, nu: usize) -> Option<(usize, f64)> {
    if mu == nu {
        return None;
    }
    let (a, b, s) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    ANTISYMMETRIC_PAIRS.iter().position(|&p| p == (a, b)).map(|c| (c, s))
}

impl TensorKind {
    pub fn components(&self) -> usize {
        match self {
            TensorKind::Scalar => 1,
            TensorKind::Spinor { set } => set.dimension(),
            TensorKind::Antisymmetric => 6,
        }
    }

    /// Sign picked up by a component under `x⁰ ↦ -x⁰`; `None` when the
    /// reflection mixes components (spinors).
    pub fn reflection_sign(&self, component: usize) -> Option<f64> {
        match self {
            TensorKind::Scalar => Some(1.0),
            TensorKind::Antisymmetric => {
                let (a, _) = ANTISYMMETRIC_PAIRS[component];
                Some(if a == 0 { -1.0 } else { 1.0 })
            }
            TensorKind::Spinor { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub label: String,
    pub tensor: TensorKind,
    pub fermionic: bool,
    /// Normal-ordered product living on the thin diagonal.
    pub composite: bool,
    /// Abelian charge under the defining action on matter.
    #[serde(default)]
    pub charge: i32,
}

impl FieldSpec {
    pub fn scalar(label: &str) -> Self {
        Self { label: label.into(), tensor: TensorKind::Scalar, fermionic: false, composite: false, charge: 0 }
    }

    pub fn with_charge(self, charge: i32) -> Self {
        Self { charge, ..self }
    }

    pub fn composite(label: &str) -> Self {
        Self { composite: true, ..Self::scalar(label) }
    }

    pub fn antisymmetric(label: &str) -> Self {
        Self { label: label.into(), tensor: TensorKind::Antisymmetric, fermionic: false, composite: false, charge: 0 }
    }

    /// Statistics follow the spinor parity `l + m` odd.
    pub fn spinor(label: &str, set: SpinorIndexSet) -> Self {
        Self {
            label: label.into(),
            tensor: TensorKind::Spinor { set },
            fermionic: set.is_fermionic(),
            composite: false,
            charge: 0,
        }
    }
}

/// The label set a family understands.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub fields: Vec<FieldSpec>,
}

impl Catalog {
    pub fn new(fields: Vec<FieldSpec>) -> Self {
        Self { fields }
    }

    pub fn get(&self, label: &str) -> Result<&FieldSpec> {
        self.fields.iter().find(|f| f.label == label).ok_or_else(|| Error::UnknownLabel(label.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatterSlot {
    pub label: String,
    pub component: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaugeSlot {
    pub alpha: usize,
    pub mu: usize,
}

/// Matter slots followed by gauge slots; arguments are supplied in that order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldIndex {
    pub matter: Vec<MatterSlot>,
    pub gauge: Vec<GaugeSlot>,
}

impl FieldIndex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `n` copies of a scalar label.
    pub fn scalar(label: &str, n: usize) -> Self {
        Self { matter: vec![MatterSlot { label: label.into(), component: 0 }; n], gauge: vec![] }
    }

    pub fn matter(slots: &[(&str, usize)]) -> Self {
        Self {
            matter: slots.iter().map(|&(l, c)| MatterSlot { label: l.into(), component: c }).collect(),
            gauge: vec![],
        }
    }

    pub fn gauge(slots: &[(usize, usize)]) -> Self {
        Self { matter: vec![], gauge: slots.iter().map(|&(alpha, mu)| GaugeSlot { alpha, mu }).collect() }
    }

    pub fn degree(&self) -> usize {
        self.matter.len() + self.gauge.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree() == 0
    }

    pub fn validate(&self, catalog: &Catalog, dim_algebra: usize) -> Result<()> {
        for s in &self.matter {
            let spec = catalog.get(&s.label)?;
            let dim = spec.tensor.components();
            if s.component >= dim {
                return Err(Error::IndexOutOfRange { index: s.component, dim });
            }
        }
        for g in &self.gauge {
            if g.alpha >= dim_algebra {
                return Err(Error::IndexOutOfRange { index: g.alpha, dim: dim_algebra });
            }
            if g.mu >= 4 {
                return Err(Error::IndexOutOfRange { index: g.mu, dim: 4 });
            }
        }
        Ok(())
    }

    /// Concatenate matter and gauge lists separately, `self` first.
    pub fn concat(&self, other: &Self) -> Self {
        Self {
            matter: self.matter.iter().chain(&other.matter).cloned().collect(),
            gauge: self.gauge.iter().chain(&other.gauge).cloned().collect(),
        }
    }

    /// Reverse both slot lists.
    pub fn reversed(&self) -> Self {
        Self {
            matter: self.matter.iter().rev().cloned().collect(),
            gauge: self.gauge.iter().rev().cloned().collect(),
        }
    }

    /// Sign of the time reflection acting on component indices, or an error
    /// for components the reflection mixes.
    pub fn reflection_sign(&self, catalog: &Catalog) -> Result<f64> {
        let mut sign = 1.0;
        for s in &self.matter {
            sign *= catalog
                .get(&s.label)?
                .tensor
                .reflection_sign(s.component)
                .ok_or_else(|| Error::Unsupported(format!("time reflection of spinor label {}", s.label)))?;
        }
        for g in &self.gauge {
            if g.mu == 0 {
                sign = -sign;
            }
        }
        Ok(sign)
    }

    pub fn fermionic_mask(&self, catalog: &Catalog) -> Result<Vec<bool>> {
        self.matter.iter().map(|s| Ok(catalog.get(&s.label)?.fermionic)).collect()
    }
}

/// Pair of slot permutations; `matter[i]` is the source slot placed at `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    pub matter: Vec<usize>,
    pub gauge: Vec<usize>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

fn parity(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

impl Permutation {
    pub fn identity(idx: &FieldIndex) -> Self {
        Self { matter: (0..idx.matter.len()).collect(), gauge: (0..idx.gauge.len()).collect() }
    }

    pub fn matter_swap(idx: &FieldIndex, i: usize, j: usize) -> Self {
        let mut p = Self::identity(idx);
        p.matter.swap(i, j);
        p
    }

    pub fn gauge_swap(idx: &FieldIndex, i: usize, j: usize) -> Self {
        let mut p = Self::identity(idx);
        p.gauge.swap(i, j);
        p
    }

    pub fn inverse(&self) -> Self {
        let inv = |p: &[usize]| {
            let mut out = vec![0; p.len()];
            for (i, &s) in p.iter().enumerate() {
                out[s] = i;
            }
            out
        };
        Self { matter: inv(&self.matter), gauge: inv(&self.gauge) }
    }

    /// `-1` exactly when the induced permutation of fermionic slots is odd.
    pub fn sign(&self, fermionic: &[bool]) -> f64 {
        let fermi_positions: Vec<usize> = (0..fermionic.len()).filter(|&i| fermionic[i]).collect();
        let rank = |src: usize| fermi_positions.iter().position(|&p| p == src).expect("fermionic slot");
        let induced: Vec<usize> = self.matter.iter().filter(|&&s| fermionic[s]).map(|&s| rank(s)).collect();
        if parity(&induced) {
            -1.0
        } else {
            1.0
        }
    }

    /// Permuted index and arguments (arguments ordered matter then gauge).
    pub fn apply<T: Clone>(&self, idx: &FieldIndex, args: &[T]) -> Result<(FieldIndex, Vec<T>)> {
        let (j, n) = (idx.matter.len(), idx.gauge.len());
        if self.matter.len() != j || self.gauge.len() != n || args.len() != j + n {
            return Err(Error::LengthMismatch(format!(
                "permutation ({}, {}) against index ({j}, {n}) with {} arguments",
                self.matter.len(),
                self.gauge.len(),
                args.len()
            )));
        }
        if !is_permutation(&self.matter) || !is_permutation(&self.gauge) {
            return Err(Error::LengthMismatch("not a permutation".into()));
        }
        let new_idx = FieldIndex {
            matter: self.matter.iter().map(|&s| idx.matter[s].clone()).collect(),
            gauge: self.gauge.iter().map(|&s| idx.gauge[s]).collect(),
        };
        let new_args = self
            .matter
            .iter()
            .map(|&s| args[s].clone())
            .chain(self.gauge.iter().map(|&s| args[j + s].clone()))
            .collect();
        Ok((new_idx, new_args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_counts_only_fermions() {
        let p = Permutation { matter: vec![1, 0, 2], gauge: vec![] };
        assert_eq!(p.sign(&[true, true, false]), -1.0);
        assert_eq!(p.sign(&[true, false, true]), 1.0);
        let cyc = Permutation { matter: vec![1, 2, 0], gauge: vec![] };
        assert_eq!(cyc.sign(&[true, true, true]), 1.0);
    }

    #[test]
    fn inverse_roundtrip() {
        let idx = FieldIndex::scalar("phi", 4);
        let p = Permutation { matter: vec![2, 0, 3, 1], gauge: vec![] };
        let args = vec![10, 11, 12, 13];
        let (i1, a1) = p.apply(&idx, &args).unwrap();
        let (i2, a2) = p.inverse().apply(&i1, &a1).unwrap();
        assert_eq!(i2, idx);
        assert_eq!(a2, args);
    }

    #[test]
    fn antisymmetric_lookup() {
        assert_eq!(antisymmetric_component(2, 1), Some((3, -1.0)));
        assert_eq!(antisymmetric_component(1, 1), None);
    }
}
