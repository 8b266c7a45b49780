//! Cluster decomposition along a spatial direction.

use num_complex::Complex64;

use super::report::{AxiomId, AxiomReport, ReportBuilder};
use crate::continuation::fit_decay;
use crate::correlator::{smear, smear_samples, CorrelatorFamily, FieldIndex, TestFunction};
use crate::error::{Error, Result};
use crate::stats::jackknife_error;

#[derive(Clone, Debug)]
pub struct ClusterOptions {
    /// Spatial unit vector (time component must vanish).
    pub direction: [f64; 4],
    /// Separations; lattice units for grid families.
    pub lambdas: Vec<f64>,
    /// Final connected value allowed, relative to the first one.
    pub final_relative: f64,
    /// Largest `y(2λ_max)/y(λ_max)` projected by the decay fit for slowly
    /// (power-law) clustering families.
    pub projected_ratio: f64,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        Self { direction: [0.0, 1.0, 0.0, 0.0], lambdas: (4..=20).map(|k| 0.5 * k as f64).collect(), final_relative: 1e-2, projected_ratio: 0.5 }
    }
}

/// `S(f × g_λ) − S(f) S(g)` at one separation, with jackknife error.
struct Connected {
    value: f64,
    sigma: f64,
}

fn shifted(g: &TestFunction, a: &[f64; 4], extents: Option<&[usize]>) -> Result<TestFunction> {
    match g {
        TestFunction::Grid(grid) => {
            let steps: Vec<i64> = a.iter().take(grid.dims.len()).map(|v| v.round() as i64).collect();
            if let Some(ext) = extents {
                for (k, s) in steps.iter().enumerate() {
                    let half = ext[k] / 2;
                    if s.unsigned_abs() as usize > half {
                        return Err(Error::SeparationTooLarge { separation: s.unsigned_abs() as usize, half });
                    }
                }
            }
            Ok(TestFunction::Grid(grid.translate(&steps)))
        }
        TestFunction::Smooth { .. } => Ok(g.translate(a)),
    }
}

/// The two single-slot indices of a degree-2 index.
pub fn split_pair(idx: &FieldIndex) -> Result<(FieldIndex, FieldIndex)> {
    if idx.degree() != 2 {
        return Err(Error::LengthMismatch(format!("cluster index of degree {}", idx.degree())));
    }
    let slot = |k: usize| {
        if k < idx.matter.len() {
            FieldIndex { matter: vec![idx.matter[k].clone()], gauge: vec![] }
        } else {
            FieldIndex { matter: vec![], gauge: vec![idx.gauge[k - idx.matter.len()]] }
        }
    };
    Ok((slot(0), slot(1)))
}

fn connected(
    fam: &dyn CorrelatorFamily,
    idx: &FieldIndex,
    f: &TestFunction,
    g: &TestFunction,
    one_point: (Complex64, Option<Vec<Complex64>>),
    g_one: (Complex64, Option<Vec<Complex64>>),
) -> Result<Connected> {
    let args = [f.clone(), g.clone()];
    let two = smear(fam, idx, &args)?;
    let value = (two.value - one_point.0 * g_one.0).norm();
    let sigma = match (smear_samples(fam, idx, &args)?, one_point.1, g_one.1) {
        (Some(t), Some(a), Some(b)) => {
            let reps: Vec<f64> = t.iter().zip(a.iter().zip(&b)).map(|(t, (a, b))| (t - a * b).re).collect();
            jackknife_error(&reps)
        }
        _ => two.stderr,
    };
    Ok(Connected { value, sigma })
}

fn one_point(fam: &dyn CorrelatorFamily, idx: &FieldIndex, f: &TestFunction) -> Result<(Complex64, Option<Vec<Complex64>>)> {
    let args = std::slice::from_ref(f);
    Ok((smear(fam, idx, args)?.value, smear_samples(fam, idx, args)?))
}

/// `idx` has degree 2; `f` sits in its first slot, the translated `g` in the second.
pub fn check_cluster(fam: &dyn CorrelatorFamily, idx: &FieldIndex, f: &TestFunction, g: &TestFunction, opts: &ClusterOptions) -> Result<AxiomReport> {
    if opts.direction[0] != 0.0 {
        return Err(Error::Unsupported("cluster direction must be spatial".into()));
    }
    if opts.lambdas.len() < 2 {
        return Err(Error::LengthMismatch("cluster schedule needs at least two separations".into()));
    }
    let mut b = ReportBuilder::new(AxiomId::Cluster, fam);
    let extents = fam.extents();
    let (first_slot, second_slot) = split_pair(idx)?;
    let sf = one_point(fam, &first_slot, f)?;
    let sg = one_point(fam, &second_slot, g)?;
    let mut values = Vec::with_capacity(opts.lambdas.len());
    for &l in &opts.lambdas {
        let a = opts.direction.map(|d| d * l);
        let gl = shifted(g, &a, extents.as_deref())?;
        values.push(connected(fam, idx, f, &gl, sf.clone(), sg.clone())?);
    }
    let statistical = fam.source().is_statistical();
    // monotone decrease, up to the noise
    let mut rise: f64 = 0.0;
    for w in values.windows(2) {
        let slack = if statistical { 3.0 * (w[0].sigma.powi(2) + w[1].sigma.powi(2)).sqrt() } else { 1e-12 * w[0].value };
        rise = rise.max(w[1].value - w[0].value - slack);
    }
    let first = values[0].value;
    let last = values.last().expect("non-empty");
    let tol = if statistical { 3.0 * last.sigma } else { opts.final_relative * first };
    b.set("first_connected", first);
    b.set("final_connected", last.value);
    b.set("final_sigma", last.sigma);
    b.set("max_rise", rise);
    b.set("lambda_max", *opts.lambdas.last().expect("non-empty"));
    let lams: Vec<f64> = opts.lambdas.clone();
    let mags: Vec<f64> = values.iter().map(|c| c.value).collect();
    let lmax = *opts.lambdas.last().expect("non-empty");
    let mut projected = f64::INFINITY;
    match fit_decay(&lams, &mags) {
        Ok(fit) => {
            b.set("decay_rate", fit.rate);
            b.set("decay_power", fit.power);
            b.set("decay_fit_residual", fit.residual);
            projected = (-fit.rate * lmax - fit.power * 2f64.ln()).exp();
            b.set("projected_ratio", projected);
        }
        Err(e) => {
            b.note(format!("decay fit: {e}"));
        }
    }
    if rise > 0.0 {
        return Ok(b.fail(tol, last.sigma, "connected_part_not_decreasing"));
    }
    if !statistical && last.value > tol && projected <= opts.projected_ratio {
        b.note("final value above the fixed tolerance; passed on the projected decay");
        return Ok(b.judge(projected, opts.projected_ratio, 0.0));
    }
    Ok(b.judge(last.value, tol, last.sigma))
}
