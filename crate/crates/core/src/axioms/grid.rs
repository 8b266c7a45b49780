//! Default probes for families measured on a lattice.

use num_complex::Complex64;

use super::cluster::ClusterOptions;
use super::probes::Probe;
use crate::correlator::{CorrelatorFamily, FieldIndex, GridFunction, TestFunction};
use crate::error::{Error, Result};
use crate::free_field::FIELD_STRENGTH_SQUARED;

/// Plaquette label used for the plaquette-string basis.
pub const PLAQUETTE_LABEL: &str = "W1x1";

fn extents(fam: &dyn CorrelatorFamily) -> Result<Vec<usize>> {
    fam.extents().ok_or_else(|| Error::Axiom(format!("{} has no lattice extents", fam.id())))
}

/// Action density when the family has it, else its first label.
pub fn grid_label(fam: &dyn CorrelatorFamily) -> Result<String> {
    let fields = &fam.catalog().fields;
    fields
        .iter()
        .find(|f| f.label == FIELD_STRENGTH_SQUARED)
        .or_else(|| fields.first())
        .map(|f| f.label.clone())
        .ok_or_else(|| Error::Axiom("lattice family with an empty catalog".into()))
}

/// Unit weight on the listed sites.
pub fn grid_indicator(dims: &[usize], sites: &[Vec<usize>]) -> TestFunction {
    let mut g = GridFunction::zeros(dims, 1.0);
    for x in sites {
        let i = g.site_index(x);
        g.values[i] += Complex64::new(1.0, 0.0);
    }
    TestFunction::Grid(g)
}

pub fn grid_point(dims: &[usize], x: &[usize]) -> TestFunction {
    grid_indicator(dims, &[x.to_vec()])
}

/// Every site of time slice `t`.
pub fn time_slice(dims: &[usize], t: usize) -> TestFunction {
    let mut g = GridFunction::zeros(dims, 1.0);
    for i in 0..g.values.len() {
        if g.coords(i)[0] == t {
            g.values[i] = Complex64::new(1.0, 0.0);
        }
    }
    TestFunction::Grid(g)
}

fn offset(dims: &[usize], steps: &[usize]) -> Vec<usize> {
    dims.iter().enumerate().map(|(k, d)| steps.get(k).copied().unwrap_or(0) % d).collect()
}

/// One point-pair and one slice-pair two-point probe on the default label.
pub fn grid_probes(fam: &dyn CorrelatorFamily) -> Result<Vec<Probe>> {
    let dims = extents(fam)?;
    let label = grid_label(fam)?;
    let idx = FieldIndex::scalar(&label, 2);
    let a = offset(&dims, &[1, 1, 0, 0]);
    let b = offset(&dims, &[2, 3, 1, 0]);
    Ok(vec![
        Probe { idx: idx.clone(), args: vec![grid_point(&dims, &a), grid_point(&dims, &b)] },
        Probe { idx, args: vec![time_slice(&dims, 0), time_slice(&dims, 2)] },
    ])
}

/// Up to four spatial strings of `label` at successive positive times.
pub fn string_basis(fam: &dyn CorrelatorFamily, label: &str, size: usize) -> Result<Vec<Probe>> {
    let dims = extents(fam)?;
    let mut out = Vec::new();
    for t in 0..dims[0] / 2 {
        let f = time_slice(&dims, t);
        if fam.negative_time_leakage(Some(label), &f)? == 0.0 {
            out.push(Probe { idx: FieldIndex::scalar(label, 1), args: vec![f] });
        }
        if out.len() == size {
            break;
        }
    }
    if out.is_empty() {
        return Err(Error::SupportViolation(format!("no time slice of {label} fits the positive half")));
    }
    Ok(out)
}

/// Plaquette strings when the family measures plaquettes.
pub fn grid_os_basis(fam: &dyn CorrelatorFamily) -> Result<Vec<Probe>> {
    let label = if fam.catalog().get(PLAQUETTE_LABEL).is_ok() { PLAQUETTE_LABEL.to_string() } else { grid_label(fam)? };
    string_basis(fam, &label, 4)
}

pub fn grid_cluster(fam: &dyn CorrelatorFamily) -> Result<(FieldIndex, TestFunction, TestFunction, ClusterOptions)> {
    let dims = extents(fam)?;
    let label = grid_label(fam)?;
    let x = offset(&dims, &[1, 0, 0, 0]);
    let far = (dims[1] / 2).min(10);
    let opts = ClusterOptions { lambdas: (2..=far).map(|l| l as f64).collect(), ..ClusterOptions::default() };
    Ok((FieldIndex::scalar(&label, 2), grid_point(&dims, &x), grid_point(&dims, &x), opts))
}

/// Non-negative 2×2 block at the origin.
pub fn grid_positivity_function(fam: &dyn CorrelatorFamily) -> Result<TestFunction> {
    let dims = extents(fam)?;
    let sites: Vec<Vec<usize>> = [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|p| offset(&dims, p)).collect();
    Ok(grid_indicator(&dims, &sites))
}
