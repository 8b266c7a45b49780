//! Comparison of two reconstructions of the same correlator data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::physical::PhysicalSpace;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_norm, max_abs_diff, CMatrix};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub dim: usize,
    /// `max|L† M_b L - M_a| / ‖M_a‖`.
    pub isometry_defect: f64,
    /// Basis-level defect `max|P_b(L y_a) - G_a| / ‖G_a‖` through both quotients.
    pub gram_defect: f64,
    /// Norm of `L y_a(Ω) - y_b(Ω)` in space `b`.
    pub vacuum_defect: f64,
    /// Position in `b` of each basis vector of `a`.
    pub permutation: Vec<usize>,
    #[serde(skip)]
    pub intertwiner: CMatrix,
    pub spectra: (Vec<f64>, Vec<f64>),
}

/// Map `[v]_a ↦ [v]_b` over a shared generator set and measure how far it is
/// from a unitary that fixes the vacuum.
pub fn verify_uniqueness(a: &PhysicalSpace, b: &PhysicalSpace) -> Result<UniquenessReport> {
    let n = a.basis().len();
    if n != b.basis().len() {
        return Err(Error::LengthMismatch(format!("generator sets of size {n} and {}", b.basis().len())));
    }
    let mut permutation = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for v in a.basis() {
        let k = (0..n)
            .find(|&k| !used[k] && b.basis()[k] == *v)
            .ok_or_else(|| Error::Incompatible("generator sets differ".into()))?;
        used[k] = true;
        permutation.push(k);
    }
    let spectra = (a.spectrum.clone(), b.spectrum.clone());
    if a.dim() != b.dim() {
        log::warn!("quotient dimensions {} and {}: spectra {:?} / {:?}", a.dim(), b.dim(), spectra.0, spectra.1);
        return Err(Error::DimensionMismatchSpaces { a: a.dim(), b: b.dim() });
    }
    // C_b P, the coordinates in b of the basis of a
    let cb = CMatrix::from_fn(b.dim(), n, |r, k| b.coords[(r, permutation[k])]);
    let ca = &a.coords;
    let gram_a = ca * ca.adjoint();
    let inv = gram_a.clone().try_inverse().ok_or(Error::Singular)?;
    let right = ca.adjoint() * inv;
    let l = &cb * &right;

    let pulled = l.adjoint() * &b.metric * &l;
    let isometry_defect = max_abs_diff(&pulled, &a.metric) / hermitian_norm(&a.metric).max(f64::MIN_POSITIVE);
    let ga = a.quotient_gram();
    let gb = cb.adjoint() * &b.metric * &cb;
    let gram_defect = max_abs_diff(&ga, &gb) / hermitian_norm(&ga).max(f64::MIN_POSITIVE);
    let ya = a.project(&a.unit(a.vacuum));
    let yb = b.project(&b.unit(b.vacuum));
    let mapped: Vec<Complex64> = (0..b.dim()).map(|r| (0..a.dim()).map(|c| l[(r, c)] * ya[c]).sum::<Complex64>() - yb[r]).collect();
    let vacuum_defect = b.inner_coords(&mapped, &mapped).re.max(0.0).sqrt();
    Ok(UniquenessReport { dim: a.dim(), isometry_defect, gram_defect, vacuum_defect, permutation, intertwiner: l, spectra })
}
