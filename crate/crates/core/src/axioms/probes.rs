//! Probe tuples and component transformation matrices.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlator::{Catalog, FieldIndex, TensorKind, TestFunction, ANTISYMMETRIC_PAIRS};
use crate::error::{Error, Result};
use crate::symmetry::{spinor_rep_matrix, Metric, SpacetimeRep};

/// An index together with the test functions it is smeared against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub idx: FieldIndex,
    pub args: Vec<TestFunction>,
}

impl Probe {
    pub fn new(idx: FieldIndex, args: Vec<TestFunction>) -> Result<Self> {
        if idx.degree() != args.len() {
            return Err(Error::DimensionMismatch(format!("{} arguments for degree {}", args.len(), idx.degree())));
        }
        Ok(Self { idx, args })
    }

    pub fn degree(&self) -> usize {
        self.idx.degree()
    }
}

/// Closed-form Gaussian probes for a scalar label: 2-point and 4-point tuples
/// at generic positions.
pub fn gaussian_scalar_probes(label: &str) -> Vec<Probe> {
    let g = |c: [f64; 4], w: f64| TestFunction::gaussian(c, w);
    vec![
        Probe { idx: FieldIndex::scalar(label, 2), args: vec![g([0.1, 0.2, -0.3, 0.0], 0.4), g([0.9, -0.4, 0.5, 0.2], 0.5)] },
        Probe { idx: FieldIndex::scalar(label, 2), args: vec![g([0.0, 0.0, 0.0, 0.0], 0.3), g([0.2, 1.1, 0.0, -0.6], 0.35)] },
        Probe {
            idx: FieldIndex::scalar(label, 4),
            args: vec![
                g([0.0, 0.0, 0.0, 0.0], 0.4),
                g([0.7, 0.3, 0.0, 0.0], 0.45),
                g([-0.2, 0.9, 0.4, 0.1], 0.5),
                g([0.5, -0.6, 0.2, 0.8], 0.4),
            ],
        },
    ]
}

/// `D[target][source]` such that a slot transforms as `Σ_source D · value`.
pub fn component_matrix(tensor: &TensorKind, r: &Matrix4<f64>, rep: Option<&SpacetimeRep<f64>>) -> Result<DMatrix<Complex64>> {
    let c = |x: f64| Complex64::new(x, 0.0);
    match tensor {
        TensorKind::Scalar => Ok(DMatrix::from_element(1, 1, c(1.0))),
        TensorKind::Antisymmetric => Ok(DMatrix::from_fn(6, 6, |i, j| {
            let (mu, nu) = ANTISYMMETRIC_PAIRS[i];
            let (rho, sigma) = ANTISYMMETRIC_PAIRS[j];
            c(r[(mu, rho)] * r[(nu, sigma)] - r[(mu, sigma)] * r[(nu, rho)])
        })),
        TensorKind::Spinor { set } => match rep {
            Some(rep) => spinor_rep_matrix(*set, rep, Metric::Euclidean),
            None => Err(Error::Unsupported("spinor components under a lattice transformation".into())),
        },
    }
}

/// Per-slot matrices in slot order (matter, then gauge vector indices).
pub fn slot_matrices(
    idx: &FieldIndex,
    catalog: &Catalog,
    r: &Matrix4<f64>,
    rep: Option<&SpacetimeRep<f64>>,
) -> Result<Vec<DMatrix<Complex64>>> {
    let mut out = Vec::new();
    for s in &idx.matter {
        out.push(component_matrix(&catalog.get(&s.label)?.tensor, r, rep)?);
    }
    for _ in &idx.gauge {
        out.push(r.map(|x| Complex64::new(x, 0.0)).resize(4, 4, Complex64::new(0.0, 0.0)));
    }
    Ok(out)
}

/// `idx` with slot components replaced by `comps` (matter components, then gauge μ).
pub fn with_components(idx: &FieldIndex, comps: &[usize]) -> FieldIndex {
    let mut out = idx.clone();
    let m = idx.matter.len();
    for (i, s) in out.matter.iter_mut().enumerate() {
        s.component = comps[i];
    }
    for (i, g) in out.gauge.iter_mut().enumerate() {
        g.mu = comps[m + i];
    }
    out
}

pub fn components_of(idx: &FieldIndex) -> Vec<usize> {
    idx.matter.iter().map(|s| s.component).chain(idx.gauge.iter().map(|g| g.mu)).collect()
}

/// Every tuple in the product of `0..dims[i]`.
pub fn product_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = out.into_iter().flat_map(|t| (0..d).map(move |k| [t.clone(), vec![k]].concat())).collect();
    }
    out
}
