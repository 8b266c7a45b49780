//! Exact Gaussian correlator families and a few constructed variants.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::json;

use super::heat::{HeatKernelSmear, ProperTimeWeight};
use super::kernel::{maxwell_component_2pt, radial_propagator};
use super::wick::{wick_sum, DEFAULT_PAIRING_CAP};
use crate::correlator::{
    Catalog, CorrelatorFamily, Estimate, FieldIndex, FieldSpec, Point, Source, SymmetryGroup, TestFunction,
    ANTISYMMETRIC_PAIRS,
};
use crate::error::{Error, Result};
use crate::symmetry::{GroupKind, SpinorIndexSet};

pub const PHI: &str = "phi";
pub const PHI_BAR: &str = "phibar";
pub const PHI_SQUARED: &str = ":phi2:";
pub const CHARGE_DENSITY: &str = ":phibar phi:";
pub const FIELD_STRENGTH: &str = "F";
pub const FIELD_STRENGTH_SQUARED: &str = ":F2:";
pub const SPINOR: &str = "psi";

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One slot of a concatenated index (matter slots first).
#[derive(Clone, Debug, PartialEq)]
pub enum Slot {
    Matter { label: String, component: usize },
    Gauge { alpha: usize, mu: usize },
}

pub fn slots(idx: &FieldIndex) -> Vec<Slot> {
    idx.matter
        .iter()
        .map(|m| Slot::Matter { label: m.label.clone(), component: m.component })
        .chain(idx.gauge.iter().map(|g| Slot::Gauge { alpha: g.alpha, mu: g.mu }))
        .collect()
}

fn distance(a: &Point, b: &Point) -> f64 {
    (0..4).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>().sqrt()
}

fn difference(a: &Point, b: &Point) -> Point {
    std::array::from_fn(|k| b[k] - a[k])
}

/// Shared evaluation for Gaussian families: elementary slots are Wick
/// paired; normal-ordered composites are supported alone (vanishing VEV) or
/// as a composite pair.
struct GaussianRules<'a> {
    catalog: &'a Catalog,
    cap: usize,
}

impl GaussianRules<'_> {
    /// `pair(i, slot_i, j, slot_j)` for elementary slots; `composite_pair(i, j)`
    /// for a lone pair of composites.
    fn evaluate<P, C>(&self, idx: &FieldIndex, pair: P, composite_pair: C) -> Result<Complex64>
    where
        P: Fn(usize, &Slot, usize, &Slot) -> Result<Complex64>,
        C: Fn(usize, usize) -> Result<Complex64>,
    {
        let sl = slots(idx);
        let mut composite = Vec::new();
        let mut fermionic = Vec::new();
        for s in &sl {
            match s {
                Slot::Matter { label, .. } => {
                    let spec = self.catalog.get(label)?;
                    composite.push(spec.composite);
                    fermionic.push(spec.fermionic);
                }
                Slot::Gauge { .. } => {
                    composite.push(false);
                    fermionic.push(false);
                }
            }
        }
        let n_comp = composite.iter().filter(|&&c| c).count();
        if n_comp == 0 {
            return wick_sum(sl.len(), &fermionic, self.cap, |i, j| pair(i, &sl[i], j, &sl[j]));
        }
        let n_elem = sl.len() - n_comp;
        if n_elem % 2 == 1 || (n_comp == 1 && n_elem == 0) {
            return Ok(ZERO);
        }
        if n_comp == 2 && n_elem == 0 {
            return composite_pair(0, 1);
        }
        Err(Error::Unsupported(format!(
            "normal-ordered composites mixed with {n_elem} elementary slots or {n_comp} composites"
        )))
    }
}

/// How a scalar variant deviates from the free kernel.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ScalarVariant {
    Standard,
    /// Kernel `-S`.
    SignFlipped,
    /// Same position-space kernel, but the Laplace data are read at `-τ`.
    TimeReflected,
    /// Kernel `S + c`.
    ConstantShift { shift: f64 },
}

/// Free real scalar of mass `m > 0` with the composite `:φ²:`.
#[derive(Debug)]
pub struct FreeScalar {
    mass: f64,
    variant: ScalarVariant,
    catalog: Catalog,
    engine: HeatKernelSmear,
    cap: usize,
}

impl FreeScalar {
    pub fn new(mass: f64) -> Result<Self> {
        Self::with_variant(mass, ScalarVariant::Standard)
    }

    pub fn with_variant(mass: f64, variant: ScalarVariant) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Incompatible(format!("scalar mass must be positive, got {mass}")));
        }
        Ok(Self {
            mass,
            variant,
            catalog: Catalog::new(vec![FieldSpec::scalar(PHI), FieldSpec::composite(PHI_SQUARED)]),
            engine: HeatKernelSmear::new(),
            cap: DEFAULT_PAIRING_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn variant(&self) -> ScalarVariant {
        self.variant
    }

    fn kernel_sign(&self) -> f64 {
        if self.variant == ScalarVariant::SignFlipped {
            -1.0
        } else {
            1.0
        }
    }

    /// Smeared propagator `∫∫ f(x) S(x - y) g(y)` of the variant.
    pub fn two_point(&self, f: &TestFunction, g: &TestFunction) -> Result<Complex64> {
        let base = self.engine.smear(f, g, ProperTimeWeight::Propagator { mass: self.mass })? * self.kernel_sign();
        Ok(match self.variant {
            ScalarVariant::ConstantShift { shift } => base + f.integral() * g.integral() * shift,
            _ => base,
        })
    }

    pub fn composite_two_point(&self, f: &TestFunction, g: &TestFunction) -> Result<Complex64> {
        self.engine.smear(f, g, ProperTimeWeight::PairDensity { mass: self.mass })
    }

    fn point_kernel(&self, r: f64) -> f64 {
        let s = radial_propagator(self.mass, r) * self.kernel_sign();
        match self.variant {
            ScalarVariant::ConstantShift { shift } => s + shift,
            _ => s,
        }
    }
}

impl CorrelatorFamily for FreeScalar {
    fn id(&self) -> String {
        match self.variant {
            ScalarVariant::Standard => format!("free_scalar(m={})", self.mass),
            ScalarVariant::SignFlipped => format!("sign_flipped_scalar(m={})", self.mass),
            ScalarVariant::TimeReflected => format!("time_reflected_scalar(m={})", self.mass),
            ScalarVariant::ConstantShift { shift } => format!("constant_shift_scalar(m={}, c={shift})", self.mass),
        }
    }

    fn source(&self) -> Source {
        Source::ExactFree
    }

    fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    fn max_degree(&self) -> usize {
        self.cap
    }

    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        let rules = GaussianRules { catalog: &self.catalog, cap: self.cap };
        let v = rules.evaluate(
            idx,
            |i, _, j, _| self.two_point(&fs[i], &fs[j]),
            |i, j| self.composite_two_point(&fs[i], &fs[j]),
        )?;
        Ok(Estimate::exact(v))
    }

    fn pointwise(&self, idx: &FieldIndex, points: &[Point]) -> Result<Estimate> {
        check_points(idx, points)?;
        let rules = GaussianRules { catalog: &self.catalog, cap: self.cap };
        let dist = |i: usize, j: usize| distance(&points[i], &points[j]);
        let v = rules.evaluate(
            idx,
            |i, _, j, _| Ok(Complex64::new(self.point_kernel(dist(i, j)), 0.0)),
            |i, j| {
                let s = radial_propagator(self.mass, dist(i, j));
                Ok(Complex64::new(2.0 * s * s, 0.0))
            },
        )?;
        Ok(Estimate::exact(v))
    }

    fn time_momentum(&self, idx: &FieldIndex, tau: f64, p: [f64; 3]) -> Result<f64> {
        if *idx != FieldIndex::scalar(PHI, 2) {
            return Err(Error::Unsupported("time-momentum data only for phi-phi".into()));
        }
        let p2: f64 = p.iter().map(|v| v * v).sum();
        let omega = (p2 + self.mass * self.mass).sqrt();
        let base = (-omega * tau.abs()).exp() / (2.0 * omega);
        match self.variant {
            ScalarVariant::Standard => Ok(base),
            ScalarVariant::SignFlipped => Ok(-base),
            ScalarVariant::TimeReflected => Ok((omega * tau.abs()).exp() / (2.0 * omega)),
            ScalarVariant::ConstantShift { .. } => {
                if p2 == 0.0 {
                    Err(Error::Unsupported("constant term is a delta function at zero momentum".into()))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "kind": "free_scalar", "id": self.id(), "mass": self.mass, "variant": self.variant, "source": self.source() })
    }
}

fn check_points(idx: &FieldIndex, points: &[Point]) -> Result<()> {
    if points.len() != idx.degree() {
        return Err(Error::LengthMismatch(format!("{} points for degree {}", points.len(), idx.degree())));
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if distance(&points[i], &points[j]) == 0.0 {
                return Err(Error::Singular);
            }
        }
    }
    Ok(())
}

/// Free complex scalar: `⟨φ φ̄⟩ = S`, with the charge density `:φ̄φ:`.
#[derive(Debug)]
pub struct ChargedScalar {
    mass: f64,
    catalog: Catalog,
    engine: HeatKernelSmear,
}

impl ChargedScalar {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Incompatible(format!("scalar mass must be positive, got {mass}")));
        }
        Ok(Self {
            mass,
            catalog: Catalog::new(vec![
                FieldSpec::scalar(PHI).with_charge(1),
                FieldSpec::scalar(PHI_BAR).with_charge(-1),
                FieldSpec::composite(CHARGE_DENSITY),
            ]),
            engine: HeatKernelSmear::new(),
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

fn charged_pair(a: &Slot, b: &Slot) -> bool {
    matches!((a, b), (Slot::Matter { label: la, .. }, Slot::Matter { label: lb, .. })
        if (la == PHI && lb == PHI_BAR) || (la == PHI_BAR && lb == PHI))
}

impl CorrelatorFamily for ChargedScalar {
    fn id(&self) -> String {
        format!("charged_scalar(m={})", self.mass)
    }

    fn source(&self) -> Source {
        Source::ExactFree
    }

    fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    fn max_degree(&self) -> usize {
        DEFAULT_PAIRING_CAP
    }

    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        let rules = GaussianRules { catalog: &self.catalog, cap: DEFAULT_PAIRING_CAP };
        let w = ProperTimeWeight::Propagator { mass: self.mass };
        let v = rules.evaluate(
            idx,
            |i, a, j, b| if charged_pair(a, b) { self.engine.smear(&fs[i], &fs[j], w) } else { Ok(ZERO) },
            |i, j| Ok(self.engine.smear(&fs[i], &fs[j], ProperTimeWeight::PairDensity { mass: self.mass })? * 0.5),
        )?;
        Ok(Estimate::exact(v))
    }

    fn pointwise(&self, idx: &FieldIndex, points: &[Point]) -> Result<Estimate> {
        check_points(idx, points)?;
        let rules = GaussianRules { catalog: &self.catalog, cap: DEFAULT_PAIRING_CAP };
        let dist = |i: usize, j: usize| distance(&points[i], &points[j]);
        let v = rules.evaluate(
            idx,
            |i, a, j, b| {
                Ok(if charged_pair(a, b) {
                    Complex64::new(radial_propagator(self.mass, dist(i, j)), 0.0)
                } else {
                    ZERO
                })
            },
            |i, j| {
                let s = radial_propagator(self.mass, dist(i, j));
                Ok(Complex64::new(s * s, 0.0))
            },
        )?;
        Ok(Estimate::exact(v))
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "kind": "charged_scalar", "id": self.id(), "mass": self.mass, "source": self.source() })
    }
}

/// Free photon restricted to field-strength components and `:F²:`.
#[derive(Debug)]
pub struct FreeMaxwell {
    catalog: Catalog,
    engine: HeatKernelSmear,
}

impl Default for FreeMaxwell {
    fn default() -> Self {
        Self::new()
    }
}

impl FreeMaxwell {
    pub fn new() -> Self {
        Self {
            catalog: Catalog::new(vec![
                FieldSpec::antisymmetric(FIELD_STRENGTH),
                FieldSpec::composite(FIELD_STRENGTH_SQUARED),
            ]),
            engine: HeatKernelSmear::new(),
        }
    }

    /// `⟨F_{c1}(f) F_{c2}(g)⟩` on stored antisymmetric components.
    pub fn field_strength_pair(&self, c1: usize, f: &TestFunction, c2: usize, g: &TestFunction) -> Result<Complex64> {
        let (mu, nu) = ANTISYMMETRIC_PAIRS[c1];
        let (rho, sigma) = ANTISYMMETRIC_PAIRS[c2];
        let w = ProperTimeWeight::Propagator { mass: 0.0 };
        let mut total = ZERO;
        // δ_νσ S(∂_μ f, ∂_ρ g) - δ_νρ S(∂_μ f, ∂_σ g) - δ_μσ S(∂_ν f, ∂_ρ g) + δ_μρ S(∂_ν f, ∂_σ g)
        let terms = [(nu, sigma, mu, rho, 1.0), (nu, rho, mu, sigma, -1.0), (mu, sigma, nu, rho, -1.0), (mu, rho, nu, sigma, 1.0)];
        for (a, b, df, dg, sign) in terms {
            if a == b {
                total += self.engine.smear(&f.derivative(df)?, &g.derivative(dg)?, w)? * sign;
            }
        }
        Ok(total)
    }

    pub fn composite_two_point(&self, f: &TestFunction, g: &TestFunction) -> Result<Complex64> {
        self.engine.smear(f, g, ProperTimeWeight::FieldStrengthDensity)
    }
}

impl CorrelatorFamily for FreeMaxwell {
    fn id(&self) -> String {
        "free_maxwell".into()
    }

    fn source(&self) -> Source {
        Source::ExactFree
    }

    fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    fn max_degree(&self) -> usize {
        DEFAULT_PAIRING_CAP
    }

    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        let rules = GaussianRules { catalog: &self.catalog, cap: DEFAULT_PAIRING_CAP };
        let v = rules.evaluate(
            idx,
            |i, a, j, b| match (a, b) {
                (Slot::Matter { component: c1, .. }, Slot::Matter { component: c2, .. }) => {
                    self.field_strength_pair(*c1, &fs[i], *c2, &fs[j])
                }
                _ => Ok(ZERO),
            },
            |i, j| self.composite_two_point(&fs[i], &fs[j]),
        )?;
        Ok(Estimate::exact(v))
    }

    fn pointwise(&self, idx: &FieldIndex, points: &[Point]) -> Result<Estimate> {
        check_points(idx, points)?;
        let rules = GaussianRules { catalog: &self.catalog, cap: DEFAULT_PAIRING_CAP };
        let v = rules.evaluate(
            idx,
            |i, a, j, b| match (a, b) {
                (Slot::Matter { component: c1, .. }, Slot::Matter { component: c2, .. }) => Ok(Complex64::new(
                    maxwell_component_2pt(*c1, *c2, &difference(&points[i], &points[j]))?,
                    0.0,
                )),
                _ => Ok(ZERO),
            },
            |i, j| {
                // F² = Σ_{μν} F_{μν}F_{μν} = 2 Σ_c F_c², so ⟨:F²::F²:⟩ = 8 Σ_{c,c'} K_{cc'}²
                let z = difference(&points[i], &points[j]);
                let mut s = 0.0;
                for c1 in 0..6 {
                    for c2 in 0..6 {
                        s += maxwell_component_2pt(c1, c2, &z)?.powi(2);
                    }
                }
                Ok(Complex64::new(8.0 * s, 0.0))
            },
        )?;
        Ok(Estimate::exact(v))
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "kind": "free_maxwell", "id": self.id(), "source": self.source() })
    }
}

/// Euclidean Feynman-gauge photon `⟨A_μ A_ν⟩ = δ_{μν} D`: gauge-variant
/// data, used for indefiniteness and inhomogeneous-shift checks.
#[derive(Debug)]
pub struct FeynmanPhoton {
    catalog: Catalog,
    engine: HeatKernelSmear,
}

impl Default for FeynmanPhoton {
    fn default() -> Self {
        Self::new()
    }
}

impl FeynmanPhoton {
    pub fn new() -> Self {
        Self { catalog: Catalog::default(), engine: HeatKernelSmear::new() }
    }
}

impl CorrelatorFamily for FeynmanPhoton {
    fn id(&self) -> String {
        "feynman_photon".into()
    }

    fn source(&self) -> Source {
        Source::ExactFree
    }

    fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    fn max_degree(&self) -> usize {
        DEFAULT_PAIRING_CAP
    }

    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        let rules = GaussianRules { catalog: &self.catalog, cap: DEFAULT_PAIRING_CAP };
        let w = ProperTimeWeight::Propagator { mass: 0.0 };
        let v = rules.evaluate(
            idx,
            |i, a, j, b| match (a, b) {
                (Slot::Gauge { mu: m1, .. }, Slot::Gauge { mu: m2, .. }) if m1 == m2 => self.engine.smear(&fs[i], &fs[j], w),
                _ => Ok(ZERO),
            },
            |_, _| Err(Error::Unsupported("photon family has no composites".into())),
        )?;
        Ok(Estimate::exact(v))
    }

    fn pointwise(&self, idx: &FieldIndex, points: &[Point]) -> Result<Estimate> {
        check_points(idx, points)?;
        let rules = GaussianRules { catalog: &self.catalog, cap: DEFAULT_PAIRING_CAP };
        let dist = |i: usize, j: usize| distance(&points[i], &points[j]);
        let v = rules.evaluate(
            idx,
            |i, a, j, b| match (a, b) {
                (Slot::Gauge { mu: m1, .. }, Slot::Gauge { mu: m2, .. }) if m1 == m2 => {
                    Ok(Complex64::new(radial_propagator(0.0, dist(i, j)), 0.0))
                }
                _ => Ok(ZERO),
            },
            |_, _| Err(Error::Unsupported("photon family has no composites".into())),
        )?;
        Ok(Estimate::exact(v))
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "kind": "feynman_photon", "id": self.id(), "source": self.source() })
    }
}

/// Symbolic two-component anticommuting field, `⟨ψ_a ψ_b⟩ = ε_{ab} S`.
#[derive(Debug)]
pub struct SpinorToy {
    mass: f64,
    catalog: Catalog,
    engine: HeatKernelSmear,
}

impl SpinorToy {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Incompatible(format!("mass must be positive, got {mass}")));
        }
        let set = SpinorIndexSet { undotted: 1, dotted: 0 };
        Ok(Self { mass, catalog: Catalog::new(vec![FieldSpec::spinor(SPINOR, set)]), engine: HeatKernelSmear::new() })
    }
}

fn epsilon(a: usize, b: usize) -> f64 {
    match (a, b) {
        (0, 1) => 1.0,
        (1, 0) => -1.0,
        _ => 0.0,
    }
}

impl CorrelatorFamily for SpinorToy {
    fn id(&self) -> String {
        format!("spinor_toy(m={})", self.mass)
    }

    fn source(&self) -> Source {
        Source::ExactFree
    }

    fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    fn max_degree(&self) -> usize {
        DEFAULT_PAIRING_CAP
    }

    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        let rules = GaussianRules { catalog: &self.catalog, cap: DEFAULT_PAIRING_CAP };
        let w = ProperTimeWeight::Propagator { mass: self.mass };
        let v = rules.evaluate(
            idx,
            |i, a, j, b| match (a, b) {
                (Slot::Matter { component: ca, .. }, Slot::Matter { component: cb, .. }) => {
                    let e = epsilon(*ca, *cb);
                    if e == 0.0 {
                        Ok(ZERO)
                    } else {
                        Ok(self.engine.smear(&fs[i], &fs[j], w)? * e)
                    }
                }
                _ => Ok(ZERO),
            },
            |_, _| Err(Error::Unsupported("no composites".into())),
        )?;
        Ok(Estimate::exact(v))
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "kind": "spinor_toy", "id": self.id(), "mass": self.mass, "source": self.source() })
    }
}

/// Every non-trivial value multiplied by a constant.
pub struct Scaled {
    inner: Arc<dyn CorrelatorFamily>,
    factor: f64,
}

impl Scaled {
    pub fn new(inner: Arc<dyn CorrelatorFamily>, factor: f64) -> Self {
        Self { inner, factor }
    }
}

impl CorrelatorFamily for Scaled {
    fn id(&self) -> String {
        format!("scaled({}, {})", self.inner.id(), self.factor)
    }
    fn metric(&self) -> crate::symmetry::Metric {
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
    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        Ok(self.inner.evaluate(idx, fs)?.scale(self.factor))
    }
    fn jackknife_samples(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Option<Vec<Complex64>>> {
        Ok(self.inner.jackknife_samples(idx, fs)?.map(|s| s.into_iter().map(|v| v * self.factor).collect()))
    }
    fn site_offset(&self) -> f64 {
        self.inner.site_offset()
    }
    fn extents(&self) -> Option<Vec<usize>> {
        self.inner.extents()
    }
    fn gauge_invariance_defect(&self, seed: u64) -> Result<Option<f64>> {
        self.inner.gauge_invariance_defect(seed)
    }
    fn reflect_argument(&self, label: Option<&str>, f: &TestFunction) -> Result<TestFunction> {
        self.inner.reflect_argument(label, f)
    }
    fn negative_time_leakage(&self, label: Option<&str>, f: &TestFunction) -> Result<f64> {
        self.inner.negative_time_leakage(label, f)
    }
    fn pointwise(&self, idx: &FieldIndex, points: &[Point]) -> Result<Estimate> {
        Ok(self.inner.pointwise(idx, points)?.scale(self.factor))
    }
    fn time_momentum(&self, idx: &FieldIndex, tau: f64, p: [f64; 3]) -> Result<f64> {
        Ok(self.inner.time_momentum(idx, tau, p)? * self.factor)
    }
    fn translation_invariant(&self) -> bool {
        self.inner.translation_invariant()
    }
    fn symmetry_group(&self) -> SymmetryGroup {
        self.inner.symmetry_group()
    }
    fn describe(&self) -> serde_json::Value {
        json!({ "kind": "scaled", "factor": self.factor, "inner": self.inner.describe() })
    }
}

/// A constant classical field: `S(f₁, …, f_n) = Π_i v ∫ f_i`.
#[derive(Debug)]
pub struct Factorized {
    value: f64,
    catalog: Catalog,
}

impl Factorized {
    pub fn new(value: f64) -> Self {
        Self { value, catalog: Catalog::new(vec![FieldSpec::scalar(PHI)]) }
    }
}

impl CorrelatorFamily for Factorized {
    fn id(&self) -> String {
        format!("factorized(v={})", self.value)
    }
    fn source(&self) -> Source {
        Source::ExactFree
    }
    fn catalog(&self) -> &Catalog {
        &self.catalog
    }
    fn max_degree(&self) -> usize {
        DEFAULT_PAIRING_CAP
    }
    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        if !idx.gauge.is_empty() {
            return Err(Error::Unsupported("factorized family has no gauge slots".into()));
        }
        Ok(Estimate::exact(fs.iter().fold(Complex64::new(1.0, 0.0), |acc, f| acc * (f.integral() * self.value))))
    }
    fn pointwise(&self, idx: &FieldIndex, _points: &[Point]) -> Result<Estimate> {
        Ok(Estimate::real(self.value.powi(idx.degree() as i32)))
    }
    fn describe(&self) -> serde_json::Value {
        json!({ "kind": "factorized", "value": self.value, "source": self.source() })
    }
}

/// `⟨:F²:(x) :F²:(y)⟩ = 48 / (π⁴ |x - y|⁸)`.
pub fn field_strength_composite_kernel(r: f64) -> f64 {
    48.0 / (PI.powi(4) * r.powi(8))
}
