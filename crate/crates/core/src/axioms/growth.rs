//! Linear growth: the factorial order of the n-point bound constants.

use num_complex::Complex64;

use super::report::{AxiomId, AxiomReport, ReportBuilder};
use crate::correlator::{schwartz_seminorm, smear, CorrelatorFamily, FieldIndex, TestFunction};
use crate::error::{Error, Result};
use crate::special::ln_gamma;

#[derive(Clone, Debug)]
pub struct GrowthOptions {
    /// Largest total degree (even), at most 8.
    pub max_degree: usize,
    /// Seminorm order, used for both argument groups.
    pub order: usize,
    /// Largest RMS residual of the log fit.
    pub residual_tol: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self { max_degree: 8, order: 2, residual_tol: 0.25 }
    }
}

/// Result of fitting `log w_n = a + b n + d L(n)`.
#[derive(Clone, Copy, Debug)]
pub struct GrowthFit {
    pub constant: f64,
    pub linear: f64,
    pub exponent: f64,
    pub residual: f64,
}

/// Least squares in the basis (1, n, L(n)); fewer points drop columns from
/// the right of (1, L, n).
pub fn fit_growth(ns: &[f64], log_w: &[f64], scale: impl Fn(f64) -> f64) -> Result<GrowthFit> {
    let k = ns.len();
    if k == 0 {
        return Err(Error::EmptyBasis);
    }
    if k == 1 {
        return Ok(GrowthFit { constant: log_w[0].exp(), linear: 0.0, exponent: 0.0, residual: 0.0 });
    }
    let cols = k.min(3);
    let a = nalgebra::DMatrix::from_fn(k, cols, |r, c| match c {
        0 => 1.0,
        1 => scale(ns[r]),
        _ => ns[r],
    });
    let y = nalgebra::DVector::from_column_slice(log_w);
    let x = a.clone().svd(true, true).solve(&y, 1e-14).map_err(|e| Error::Unsupported(format!("growth fit: {e}")))?;
    let residual = ((&a * &x - &y).norm_squared() / k as f64).sqrt();
    Ok(GrowthFit { constant: x[0].exp(), exponent: x[1], linear: if cols > 2 { x[2] } else { 0.0 }, residual })
}

/// `ln Γ(n + ½) − ln Γ(½)`, the log of `(2n−1)!!/2ⁿ`.
pub fn half_factorial(n: f64) -> f64 {
    ln_gamma(n + 0.5) - ln_gamma(0.5)
}

pub fn log_factorial(n: f64) -> f64 {
    ln_gamma(n + 1.0)
}

/// `w_n = max_f |S_{2n}(f, …, f)| / |f|_c^{2n}` over the probes.
pub fn growth_constants(fam: &dyn CorrelatorFamily, label: &str, probes: &[TestFunction], opts: &GrowthOptions) -> Result<Vec<(usize, f64)>> {
    if probes.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let norms: Vec<f64> = probes.iter().map(|f| schwartz_seminorm(f, opts.order).map(|s| s.value)).collect::<Result<_>>()?;
    let top = opts.max_degree.min(fam.max_degree()).min(8);
    let mut out = Vec::new();
    for n in 1..=top / 2 {
        let idx = FieldIndex::scalar(label, 2 * n);
        let mut w: f64 = 0.0;
        for (f, &norm) in probes.iter().zip(&norms) {
            let args = vec![f.clone(); 2 * n];
            let v: Complex64 = smear(fam, &idx, &args)?.value;
            w = w.max(v.norm() / norm.powi(2 * n as i32));
        }
        out.push((n, w));
    }
    Ok(out)
}

pub fn check_linear_growth(fam: &dyn CorrelatorFamily, label: &str, probes: &[TestFunction], opts: &GrowthOptions) -> Result<AxiomReport> {
    let mut b = ReportBuilder::new(AxiomId::LinearGrowth, fam);
    if fam.source().is_statistical() {
        return Ok(b.inapplicable("statistical_source"));
    }
    let ws = growth_constants(fam, label, probes, opts)?;
    b.set("seminorm_order_c", opts.order as f64);
    b.set("seminorm_order_c_prime", opts.order as f64);
    for &(n, w) in &ws {
        b.set(&format!("w_{}", 2 * n), w);
    }
    let nonzero: Vec<(f64, f64)> = ws.iter().filter(|(_, w)| *w > 0.0).map(|&(n, w)| (n as f64, w.ln())).collect();
    if ws.iter().any(|(_, w)| !w.is_finite()) {
        return Ok(b.fail(opts.residual_tol, 0.0, "non_finite_bound"));
    }
    if nonzero.is_empty() {
        b.set("C", 0.0);
        b.set("d", 0.0);
        return Ok(b.judge(0.0, opts.residual_tol, 0.0));
    }
    let ns: Vec<f64> = nonzero.iter().map(|p| p.0).collect();
    let lw: Vec<f64> = nonzero.iter().map(|p| p.1).collect();
    let fit = fit_growth(&ns, &lw, half_factorial)?;
    b.set("C", fit.constant);
    b.set("d", fit.exponent);
    b.set("b", fit.linear);
    b.set("fit_residual", fit.residual);
    if let Ok(alt) = fit_growth(&ns, &lw, log_factorial) {
        b.set("d_log_factorial", alt.exponent);
        b.set("C_log_factorial", alt.constant);
    }
    if ns.len() == 1 {
        b.note("single order: bound trivially satisfied, d = 0");
    } else if ns.len() == 2 {
        b.note("two orders: fitted without the geometric term");
    }
    if !fit.exponent.is_finite() {
        return Ok(b.fail(opts.residual_tol, 0.0, "non_finite_exponent"));
    }
    Ok(b.judge(fit.residual, opts.residual_tol, 0.0))
}
