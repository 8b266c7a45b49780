//! Gauge-invariant subspace, null quotient and the physical inner product.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::borchers::{build_borchers, pairing, BorchersSpace};
use super::sequence::{apply_field, FieldOperator, SequenceVector, Term, DEFAULT_DEGREE_CAP};
use crate::axioms::positivity::check_support;
use crate::correlator::{CorrelatorFamily, FieldIndex, MatterSlot, TensorKind, TestFunction};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, pivoted_cholesky, CMatrix};

pub const NULL_EPS: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientBackend {
    /// Hermitian eigendecomposition; coordinates along eigenvectors above the cut.
    Eigen,
    /// Pivoted Cholesky factor; orthonormal coordinates.
    PivotedCholesky,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalOptions {
    /// Null directions: eigenvalues below `null_eps · ‖G‖`.
    pub null_eps: f64,
    /// Highest product of neutral elementary fields in the generators.
    pub elementary_degree: usize,
    /// Include single thin-diagonal composites `C(f)Ω`. Their pairings with
    /// elementary products must be evaluable by the family.
    pub composites: bool,
    pub backend: QuotientBackend,
    pub cap: usize,
}

impl Default for PhysicalOptions {
    fn default() -> Self {
        Self { null_eps: NULL_EPS, elementary_degree: 2, composites: false, backend: QuotientBackend::Eigen, cap: DEFAULT_DEGREE_CAP }
    }
}

/// Finite-dimensional quotient `H′/H′₀` with coordinates `y = C c` for a
/// coefficient vector `c` over the basis and inner product `y† M y′`.
#[derive(Debug)]
pub struct PhysicalSpace {
    pub borchers: BorchersSpace,
    /// Gram spectrum, ascending.
    pub spectrum: Vec<f64>,
    pub null_dim: usize,
    pub threshold: f64,
    pub coords: CMatrix,
    pub metric: CMatrix,
    pub vacuum: usize,
    pub backend: QuotientBackend,
}

/// Items a generator slot can carry: label, component.
fn invariant_elementary(fam: &dyn CorrelatorFamily) -> Vec<(String, usize)> {
    fam.catalog()
        .fields
        .iter()
        .filter(|f| !f.composite && f.charge == 0 && !matches!(f.tensor, TensorKind::Spinor { .. }))
        .flat_map(|f| (0..f.tensor.components()).map(move |c| (f.label.clone(), c)))
        .collect()
}

/// Non-decreasing index tuples of length `k` over `0..n`.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for tail in multisets(n, k - 1) {
        let start = tail.last().copied().unwrap_or(0);
        for i in start..n {
            let mut t = tail.clone();
            t.push(i);
            out.push(t);
        }
    }
    out
}

/// `Ω`, products of neutral elementary fields up to `elementary_degree`, and
/// single composites, all smeared with the real test set.
pub fn gauge_invariant_generators(fam: &dyn CorrelatorFamily, tests: &[TestFunction], opts: &PhysicalOptions) -> Result<Vec<SequenceVector>> {
    if tests.iter().any(|f| !f.is_real()) {
        return Err(Error::Unsupported("physical generators need real test functions".into()));
    }
    let mut out = vec![SequenceVector::vacuum()];
    let items: Vec<(String, usize, usize)> =
        invariant_elementary(fam).into_iter().flat_map(|(l, c)| (0..tests.len()).map(move |t| (l.clone(), c, t))).collect();
    for k in 1..=opts.elementary_degree.min(opts.cap) {
        for choice in multisets(items.len(), k) {
            let idx = FieldIndex {
                matter: choice.iter().map(|&i| MatterSlot { label: items[i].0.clone(), component: items[i].1 }).collect(),
                gauge: vec![],
            };
            let args = choice.iter().map(|&i| tests[items[i].2].clone()).collect();
            out.push(SequenceVector::monomial(idx, args)?);
        }
    }
    if opts.composites {
        for spec in fam.catalog().fields.iter().filter(|f| f.composite) {
            for f in tests {
                out.push(apply_field(&FieldOperator::composite(&spec.label), &SequenceVector::vacuum(), f)?);
            }
        }
    }
    Ok(out)
}

pub fn build_physical(family: Arc<dyn CorrelatorFamily>, tests: &[TestFunction], opts: &PhysicalOptions) -> Result<PhysicalSpace> {
    let basis = gauge_invariant_generators(family.as_ref(), tests, opts)?;
    physical_from_basis(family, basis, opts)
}

/// Quotient of the span of `basis`; `Ω` is prepended when absent.
pub fn physical_from_basis(family: Arc<dyn CorrelatorFamily>, mut basis: Vec<SequenceVector>, opts: &PhysicalOptions) -> Result<PhysicalSpace> {
    if !basis.iter().any(|v| v.is_vacuum()) {
        basis.insert(0, SequenceVector::vacuum());
    }
    for v in &basis {
        for t in &v.terms {
            check_support(family.as_ref(), &t.probe())?;
        }
    }
    let borchers = build_borchers(family, basis)?;
    let vacuum = borchers.vacuum_index().expect("inserted above");
    let g = &borchers.gram;
    let (spectrum, vectors) = hermitian_eigen(&g.entries);
    let norm = spectrum.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tolerance = if borchers.family.source().is_statistical() { (1e-10 * norm).max(3.0 * g.eigen_errors[0]) } else { 1e-10 * norm };
    if spectrum[0] < -tolerance {
        return Err(Error::PositivityViolation { eigenvalue: spectrum[0], tolerance });
    }
    let threshold = opts.null_eps * norm;
    let n = borchers.dim();
    let (coords, metric) = match opts.backend {
        QuotientBackend::Eigen => {
            let kept: Vec<usize> = (0..n).filter(|&k| spectrum[k] > threshold).collect();
            let coords = CMatrix::from_fn(kept.len(), n, |r, c| vectors[(c, kept[r])].conj());
            let metric = CMatrix::from_fn(kept.len(), kept.len(), |r, c| if r == c { Complex64::new(spectrum[kept[r]], 0.0) } else { Complex64::new(0.0, 0.0) });
            (coords, metric)
        }
        QuotientBackend::PivotedCholesky => {
            // the quotient dimension is fixed by the spectrum; pivots may sit up to n times lower
            let kept = spectrum.iter().filter(|&&v| v > threshold).count();
            let (perm, l) = pivoted_cholesky(&g.entries, threshold / n as f64);
            let r = kept.min(l.ncols());
            let coords = CMatrix::from_fn(r, n, |row, col| {
                let k = perm.iter().position(|&p| p == col).expect("permutation");
                l[(k, row)].conj()
            });
            (coords, CMatrix::identity(r, r))
        }
    };
    let space = PhysicalSpace { null_dim: n - coords.nrows(), borchers, spectrum, threshold, coords, metric, vacuum, backend: opts.backend };
    let omega = space.unit(vacuum);
    let norm_omega = space.inner(&omega, &omega).re;
    if !(norm_omega > 0.5) {
        return Err(Error::Axiom(format!("vacuum has norm {norm_omega:.3e} in the quotient")));
    }
    Ok(space)
}

impl PhysicalSpace {
    pub fn dim(&self) -> usize {
        self.coords.nrows()
    }

    pub fn family(&self) -> &dyn CorrelatorFamily {
        self.borchers.family.as_ref()
    }

    pub fn basis(&self) -> &[SequenceVector] {
        &self.borchers.basis
    }

    pub fn unit(&self, k: usize) -> Vec<Complex64> {
        (0..self.borchers.dim()).map(|i| if i == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect()
    }

    /// Quotient coordinates of a coefficient vector.
    pub fn project(&self, c: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim()).map(|r| (0..c.len()).map(|k| self.coords[(r, k)] * c[k]).sum()).collect()
    }

    pub fn inner_coords(&self, y: &[Complex64], z: &[Complex64]) -> Complex64 {
        let r = self.dim();
        let mut out = Complex64::new(0.0, 0.0);
        for i in 0..r {
            for j in 0..r {
                out += y[i].conj() * self.metric[(i, j)] * z[j];
            }
        }
        out
    }

    /// Inner product of the classes of two coefficient vectors.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        self.inner_coords(&self.project(a), &self.project(b))
    }

    /// `C† M C`, the Gram matrix seen through the quotient.
    pub fn quotient_gram(&self) -> CMatrix {
        self.coords.adjoint() * &self.metric * &self.coords
    }

    /// Smallest eigenvalue of the quotient inner product.
    pub fn min_metric_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.metric).0.first().copied().unwrap_or(f64::INFINITY)
    }

    pub fn vacuum_norm(&self) -> f64 {
        let o = self.unit(self.vacuum);
        self.inner(&o, &o).re.sqrt()
    }

    /// Rank of the Gram over the generators; equals `dim` when the generators span.
    pub fn gram_rank(&self) -> usize {
        self.spectrum.iter().filter(|&&v| v > self.threshold).count()
    }

    /// Coefficient vectors spanning `H′₀`.
    pub fn null_vectors(&self) -> Vec<Vec<Complex64>> {
        let (values, vectors) = hermitian_eigen(&self.borchers.gram.entries);
        let n = self.borchers.dim();
        (0..n).filter(|&k| values[k] <= self.threshold).map(|k| (0..n).map(|i| vectors[(i, k)]).collect()).collect()
    }

    /// `max |⟨v, w⟩| / ‖w‖` over unit null vectors `v` and basis vectors `w`.
    pub fn cauchy_schwarz_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for v in self.null_vectors() {
            for k in 0..self.borchers.dim() {
                let e = self.unit(k);
                let nw = self.borchers.inner(&e, &e).re.abs().sqrt();
                if nw > 0.0 {
                    worst = worst.max(self.borchers.inner(&v, &e).norm() / nw);
                }
            }
        }
        worst
    }

    /// Largest norm of `op(x)` applied to a unit null vector.
    pub fn operator_on_null_defect(&self, op: &FieldOperator, x: &TestFunction) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for v in self.null_vectors() {
            let vec = self.borchers.vector(&v)?;
            let moved = apply_field(op, &prune(&vec), x)?;
            worst = worst.max(pairing(self.family(), &moved, &moved)?.value.norm().sqrt());
        }
        Ok(worst)
    }
}

fn prune(v: &SequenceVector) -> SequenceVector {
    SequenceVector { terms: v.terms.iter().filter(|t| t.coeff != Complex64::new(0.0, 0.0)).cloned().collect::<Vec<Term>>() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(2, 4).len(), 5);
        assert_eq!(multisets(4, 0), vec![Vec::<usize>::new()]);
    }
}
