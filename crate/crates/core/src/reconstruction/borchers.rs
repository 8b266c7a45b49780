//! The indefinite scalar product on sequence vectors and its Gram matrix.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::sequence::SequenceVector;
use crate::axioms::positivity::os_pair_samples;
use crate::axioms::{os_pair, GramMatrix};
use crate::correlator::{smear, CorrelatorFamily, Estimate};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// `⟨v, w⟩ = Σ c̄_a c_b S(Θ a_rev ⊗ b)` with jackknife replicas for statistical families.
pub fn pairing_samples(fam: &dyn CorrelatorFamily, v: &SequenceVector, w: &SequenceVector) -> Result<(Estimate, Option<Vec<Complex64>>)> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut var = 0.0;
    let mut reps: Option<Vec<Complex64>> = None;
    for a in &v.terms {
        let pa = a.probe();
        for b in &w.terms {
            let c = a.coeff.conj() * b.coeff;
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let pb = b.probe();
            let e = os_pair(fam, &pa, &pb)?;
            value += c * e.value;
            var += (c.norm() * e.stderr).powi(2);
            if let Some(s) = os_pair_samples(fam, &pa, &pb)? {
                let r = reps.get_or_insert_with(|| vec![Complex64::new(0.0, 0.0); s.len()]);
                for (acc, x) in r.iter_mut().zip(s) {
                    *acc += c * x;
                }
            }
        }
    }
    Ok((Estimate { value, stderr: var.sqrt() }, reps))
}

pub fn pairing(fam: &dyn CorrelatorFamily, v: &SequenceVector, w: &SequenceVector) -> Result<Estimate> {
    Ok(pairing_samples(fam, v, w)?.0)
}

/// `⟨Ω, v⟩` through the scalar product.
pub fn vev(fam: &dyn CorrelatorFamily, v: &SequenceVector) -> Result<Estimate> {
    pairing(fam, &SequenceVector::vacuum(), v)
}

/// `Σ c S(f₁ × … × f_n)` smeared directly, bypassing the scalar product.
pub fn direct_smear(fam: &dyn CorrelatorFamily, v: &SequenceVector) -> Result<Estimate> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut var = 0.0;
    for t in &v.terms {
        let e = smear(fam, &t.idx, &t.args)?;
        value += t.coeff * e.value;
        var += (t.coeff.norm() * e.stderr).powi(2);
    }
    Ok(Estimate { value, stderr: var.sqrt() })
}

/// A finite basis of sequence vectors with its (possibly indefinite) Gram matrix.
pub struct BorchersSpace {
    pub family: Arc<dyn CorrelatorFamily>,
    pub basis: Vec<SequenceVector>,
    pub gram: GramMatrix,
    /// Entry-wise errors of the unsymmetrized pairings (zero for exact families).
    pub errors: DMatrix<f64>,
}

impl std::fmt::Debug for BorchersSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BorchersSpace").field("family", &self.family.id()).field("dim", &self.basis.len()).finish()
    }
}

pub fn build_borchers(family: Arc<dyn CorrelatorFamily>, basis: Vec<SequenceVector>) -> Result<BorchersSpace> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let degree = basis.iter().map(|v| v.degree()).max().unwrap_or(0);
    if 2 * degree > family.max_degree() {
        return Err(Error::DegreeCap { degree: 2 * degree, cap: family.max_degree() });
    }
    let n = basis.len();
    let fam = family.as_ref();
    let cells: Vec<(usize, usize, Estimate, Option<Vec<Complex64>>)> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let (e, s) = pairing_samples(fam, &basis[i], &basis[j])?;
            Ok((i, j, e, s))
        })
        .collect::<Result<_>>()?;
    let mut entries = CMatrix::zeros(n, n);
    let mut errors = DMatrix::zeros(n, n);
    let mut reps: Option<Vec<CMatrix>> = None;
    for (i, j, e, s) in cells {
        entries[(i, j)] = e.value;
        errors[(i, j)] = e.stderr;
        if let Some(s) = s {
            let r = reps.get_or_insert_with(|| vec![CMatrix::zeros(n, n); s.len()]);
            for (m, x) in r.iter_mut().zip(s) {
                m[(i, j)] = x;
            }
        }
    }
    let names = (0..n).map(|k| format!("v{k}")).collect();
    let gram = GramMatrix::new(entries, names, reps.as_deref());
    Ok(BorchersSpace { family, basis, gram, errors })
}

impl BorchersSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `a† G b` for coefficient vectors over the basis.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let n = self.dim();
        let mut out = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                out += a[i].conj() * self.gram.entries[(i, j)] * b[j];
            }
        }
        out
    }

    pub fn vector(&self, coeffs: &[Complex64]) -> Result<SequenceVector> {
        SequenceVector::combination(&self.basis, coeffs)
    }

    /// Position of `Ω` in the basis.
    pub fn vacuum_index(&self) -> Option<usize> {
        self.basis.iter().position(|v| v.is_vacuum())
    }
}
