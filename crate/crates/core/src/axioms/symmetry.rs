//! Permutation symmetry with statistics signs.

use super::probes::Probe;
use super::report::{AxiomId, AxiomReport, ReportBuilder};
use crate::correlator::{apply_permutation, smear, CorrelatorFamily, Permutation};
use crate::error::{Error, Result};

/// Degree above which only transpositions are tried.
const FULL_GROUP_DEGREE: usize = 4;
pub const MAX_SYMMETRY_DEGREE: usize = 6;

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn transpositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(0..n).collect()];
    for i in 0..n {
        for j in i + 1..n {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(i, j);
            out.push(p);
        }
    }
    out
}

/// Permutations tested for a probe: matter and gauge slots separately.
pub fn permutations_for(p: &Probe) -> Vec<Permutation> {
    let (j, n) = (p.idx.matter.len(), p.idx.gauge.len());
    let pick = |k: usize| if p.degree() <= FULL_GROUP_DEGREE { all_permutations(k) } else { transpositions(k) };
    let mut out = Vec::new();
    for m in pick(j) {
        for g in pick(n) {
            out.push(Permutation { matter: m.clone(), gauge: g });
        }
    }
    out
}

pub fn check_symmetry(fam: &dyn CorrelatorFamily, probes: &[Probe]) -> Result<AxiomReport> {
    if probes.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let mut b = ReportBuilder::new(AxiomId::Symmetry, fam);
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut worst = 0.0;
    let mut worst_tol = 0.0;
    let mut worst_sigma = 0.0;
    let mut max_discrepancy: f64 = 0.0;
    let mut tested = 0usize;
    let mut odd_fermionic = 0usize;
    for p in probes {
        if p.degree() > MAX_SYMMETRY_DEGREE {
            b.note(format!("probe of degree {} skipped (cap {MAX_SYMMETRY_DEGREE})", p.degree()));
            continue;
        }
        let base = smear(fam, &p.idx, &p.args)?;
        let mask = p.idx.fermionic_mask(fam.catalog())?;
        for perm in permutations_for(p) {
            let moved = apply_permutation(fam, &p.idx, &perm, &p.args)?;
            if perm.sign(&mask) < 0.0 {
                odd_fermionic += 1;
            }
            let d = (moved.value - base.value).norm();
            let sigma = (moved.stderr.powi(2) + base.stderr.powi(2)).sqrt();
            let tol = (1e-10 * base.value.norm().max(moved.value.norm())).max(3.0 * sigma);
            let ratio = if tol > 0.0 { d / tol } else if d > 0.0 { f64::INFINITY } else { 0.0 };
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst = d;
                worst_tol = tol;
                worst_sigma = sigma;
            }
            max_discrepancy = max_discrepancy.max(d);
            tested += 1;
        }
    }
    if tested == 0 {
        return Ok(b.inapplicable("no_probe_within_degree_cap"));
    }
    b.set("max_discrepancy", max_discrepancy);
    b.set("permutations_tested", tested as f64);
    b.set("odd_fermionic_permutations", odd_fermionic as f64);
    b.note("permutations act within the matter list and within the gauge list");
    Ok(b.judge(worst, worst_tol, worst_sigma))
}
