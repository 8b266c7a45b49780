//! Abelian local gauge action on correlator families.
//!
//! `g(x) = exp(iε(x))` with a Gaussian profile `ε`. Matter slots of charge
//! `q` have their test functions multiplied by `exp(iqε)` (a truncated
//! Taylor series for closed-form test functions, exact on grids). Gauge
//! slots pick up the c-number `∫ f ∂̃_μ ε` with `∂̃ = (-i∂₀, ∇)`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::correlator::{
    smear, Bump, Catalog, CorrelatorFamily, Estimate, FieldIndex, Point, Source, SymmetryGroup, TestFunction,
};
use crate::error::{Error, Result};
use crate::symmetry::{GroupKind, Metric};

/// Truncation bound above which a phase multiplication is refused.
pub const PROJECTION_LIMIT: f64 = 1e-6;
const TAYLOR_TARGET: f64 = 1e-16;
const MAX_TAYLOR_ORDER: usize = 80;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPhase {
    pub amplitude: f64,
    pub center: Point,
    pub width: f64,
}

impl GaussianPhase {
    pub fn new(amplitude: f64, center: Point, width: f64) -> Result<Self> {
        if !amplitude.is_finite() || !(width > 0.0 && width.is_finite()) || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Unsupported("gauge profile needs finite amplitude and positive width".into()));
        }
        Ok(Self { amplitude, center, width })
    }

    pub fn identity() -> Self {
        Self { amplitude: 0.0, center: [0.0; 4], width: 1.0 }
    }

    pub fn is_identity(&self) -> bool {
        self.amplitude == 0.0
    }

    pub fn value(&self, x: &Point) -> f64 {
        let d2: f64 = (0..4).map(|k| (x[k] - self.center[k]).powi(2)).sum();
        self.amplitude * (-d2 / (2.0 * self.width * self.width)).exp()
    }

    fn profile(&self) -> Bump {
        Bump::gaussian(self.center, self.width).scale(Complex64::new(self.amplitude, 0.0))
    }

    /// `∂̃_μ ε` at `x`.
    pub fn replaced_derivative(&self, mu: usize, x: &Point) -> Complex64 {
        let d = -(x[mu] - self.center[mu]) / (self.width * self.width) * self.value(x);
        if mu == 0 {
            Complex64::new(0.0, -d)
        } else {
            Complex64::new(d, 0.0)
        }
    }

    /// Taylor order needed for `exp(iqε)` and the resulting sup-norm bound.
    pub fn taylor_order(&self, charge: i32) -> Result<(usize, f64)> {
        let z = (charge as f64 * self.amplitude).abs();
        let mut term = 1.0;
        for k in 0..MAX_TAYLOR_ORDER {
            // |z|^{k+1}/(k+1)! bounds the remainder of a real-argument exponential
            term *= z / (k + 1) as f64;
            if term <= TAYLOR_TARGET {
                return Ok((k, term));
            }
        }
        if term > PROJECTION_LIMIT {
            return Err(Error::ProjectionError(term));
        }
        Ok((MAX_TAYLOR_ORDER - 1, term))
    }

    /// `exp(iqε) f`.
    pub fn multiply(&self, charge: i32, f: &TestFunction) -> Result<TestFunction> {
        if charge == 0 || self.is_identity() {
            return Ok(f.clone());
        }
        match f {
            TestFunction::Grid(g) => {
                let mut out = g.clone();
                for (i, v) in out.values.iter_mut().enumerate() {
                    let c = g.coords(i);
                    let x: Point = std::array::from_fn(|k| c.get(k).map_or(0.0, |&ck| ck as f64 * g.spacing));
                    *v *= Complex64::from_polar(1.0, charge as f64 * self.value(&x));
                }
                Ok(TestFunction::Grid(out))
            }
            TestFunction::Smooth { bumps } => {
                let (order, _) = self.taylor_order(charge)?;
                let q = charge as f64;
                let mut out = bumps.clone();
                let mut coeff = Complex64::new(1.0, 0.0);
                for k in 1..=order {
                    coeff *= Complex64::new(0.0, q) / k as f64;
                    // ε^k is again a Gaussian, of width w/√k
                    let power = Bump::gaussian(self.center, self.width / (k as f64).sqrt())
                        .scale(coeff * self.amplitude.powi(k as i32));
                    out.extend(bumps.iter().map(|b| b.product(&power)));
                }
                Ok(TestFunction::Smooth { bumps: out })
            }
        }
    }

    /// `∫ f ∂̃_μ ε`.
    pub fn slot_shift(&self, mu: usize, f: &TestFunction) -> Result<Complex64> {
        if mu > 3 {
            return Err(Error::IndexOutOfRange { index: mu, dim: 4 });
        }
        if self.is_identity() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let d = self.profile().derivative(mu);
        let total: Complex64 = match f {
            TestFunction::Smooth { bumps } => bumps.iter().map(|b| b.product(&d).integral()).sum(),
            TestFunction::Grid(g) => {
                let vol = g.spacing.powi(g.dims.len() as i32);
                g.values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let c = g.coords(i);
                        let x: Point = std::array::from_fn(|k| c.get(k).map_or(0.0, |&ck| ck as f64 * g.spacing));
                        v * d.eval(&x) * vol
                    })
                    .sum()
            }
        };
        Ok(if mu == 0 { total * Complex64::new(0.0, -1.0) } else { total })
    }
}

/// `idx` with the gauge slots in `keep` retained (matter slots untouched),
/// for every subset of gauge slots.
fn gauge_subsets(idx: &FieldIndex) -> impl Iterator<Item = (FieldIndex, Vec<usize>, Vec<usize>)> + '_ {
    let n = idx.gauge.len();
    (0u32..(1 << n)).map(move |mask| {
        let kept: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        let shifted: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub = FieldIndex { matter: idx.matter.clone(), gauge: kept.iter().map(|&i| idx.gauge[i]).collect() };
        (sub, kept, shifted)
    })
}

/// A family seen through an abelian gauge transformation.
pub struct GaugeTransformed {
    inner: Arc<dyn CorrelatorFamily>,
    phase: GaussianPhase,
}

impl GaugeTransformed {
    pub fn new(inner: Arc<dyn CorrelatorFamily>, phase: GaussianPhase) -> Result<Self> {
        if !inner.group().is_abelian() {
            return Err(Error::Unsupported("closed-form gauge action is abelian only".into()));
        }
        Ok(Self { inner, phase })
    }

    pub fn phase(&self) -> &GaussianPhase {
        &self.phase
    }

    fn charge(&self, label: &str) -> Result<i32> {
        Ok(self.inner.catalog().get(label)?.charge)
    }
}

impl CorrelatorFamily for GaugeTransformed {
    fn id(&self) -> String {
        format!("gauge({}, ε={:?})", self.inner.id(), self.phase)
    }
    fn metric(&self) -> Metric {
        self.inner.metric()
    }
    fn source(&self) -> Source {
        self.inner.source()
    }
    fn catalog(&self) -> &Catalog {
        self.inner.catalog()
    }
    fn group(&self) -> GroupKind {
        self.inner.group()
    }
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }
    fn translation_invariant(&self) -> bool {
        self.phase.is_identity() && self.inner.translation_invariant()
    }
    fn symmetry_group(&self) -> SymmetryGroup {
        self.inner.symmetry_group()
    }

    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        let m = idx.matter.len();
        let mut moved: Vec<TestFunction> = Vec::with_capacity(fs.len());
        for (slot, f) in idx.matter.iter().zip(fs) {
            moved.push(self.phase.multiply(self.charge(&slot.label)?, f)?);
        }
        let shifts: Vec<Complex64> =
            idx.gauge.iter().zip(&fs[m..]).map(|(g, f)| self.phase.slot_shift(g.mu, f)).collect::<Result<_>>()?;
        let mut value = Complex64::new(0.0, 0.0);
        let mut var = 0.0;
        for (sub, kept, shifted) in gauge_subsets(idx) {
            let c: Complex64 = shifted.iter().map(|&i| shifts[i]).product();
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let args: Vec<TestFunction> = moved.iter().cloned().chain(kept.iter().map(|&i| fs[m + i].clone())).collect();
            let e = smear(self.inner.as_ref(), &sub, &args)?;
            value += c * e.value;
            var += (c.norm() * e.stderr).powi(2);
        }
        Ok(Estimate { value, stderr: var.sqrt() })
    }

    fn pointwise(&self, idx: &FieldIndex, points: &[Point]) -> Result<Estimate> {
        let m = idx.matter.len();
        let mut phase = Complex64::new(1.0, 0.0);
        for (slot, x) in idx.matter.iter().zip(points) {
            phase *= Complex64::from_polar(1.0, self.charge(&slot.label)? as f64 * self.phase.value(x));
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut var = 0.0;
        for (sub, kept, shifted) in gauge_subsets(idx) {
            let c: Complex64 = shifted.iter().map(|&i| self.phase.replaced_derivative(idx.gauge[i].mu, &points[m + i])).product();
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let pts: Vec<Point> = points[..m].iter().copied().chain(kept.iter().map(|&i| points[m + i])).collect();
            let e = if sub.is_empty() { Estimate::real(1.0) } else { self.inner.pointwise(&sub, &pts)? };
            value += c * e.value;
            var += (c.norm() * e.stderr).powi(2);
        }
        Ok(Estimate { value: value * phase, stderr: var.sqrt() })
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "kind": "gauge_transformed", "phase": self.phase, "inner": self.inner.describe() })
    }
}
