//! The correlator-family interface and the operations built on it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::index::{Catalog, FieldIndex, Permutation};
use super::testfn::{Point, TestFunction};
use crate::error::{Error, Result};
use crate::symmetry::{GroupKind, Metric};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ExactFree,
    LatticeEstimate,
    Reconstructed,
}

impl Source {
    pub fn is_statistical(self) -> bool {
        self == Source::LatticeEstimate
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Self { value, stderr: 0.0 }
    }

    pub fn real(value: f64) -> Self {
        Self::exact(Complex64::new(value, 0.0))
    }

    pub fn scale(self, s: f64) -> Self {
        Self { value: self.value * s, stderr: self.stderr * s.abs() }
    }
}

/// Which Euclidean transformations a family is expected to respect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryGroup {
    /// All of SO(4) and ℝ⁴ translations.
    Continuous,
    /// 90° rotations and lattice translations.
    Hypercubic,
}

/// An indexed family of smeared correlation functions.
pub trait CorrelatorFamily: Send + Sync {
    fn id(&self) -> String;

    fn metric(&self) -> Metric {
        Metric::Euclidean
    }

    fn source(&self) -> Source;

    fn catalog(&self) -> &Catalog;

    fn group(&self) -> GroupKind {
        GroupKind::U1
    }

    /// Largest total degree the evaluator accepts.
    fn max_degree(&self) -> usize;

    /// Smear; callers go through [`smear`], which handles the empty index
    /// and argument validation.
    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate>;

    /// Leave-one-bin-out estimates for statistical sources.
    fn jackknife_samples(&self, _idx: &FieldIndex, _fs: &[TestFunction]) -> Result<Option<Vec<Complex64>>> {
        Ok(None)
    }

    /// Unsmeared kernel at distinct points.
    fn pointwise(&self, _idx: &FieldIndex, _points: &[Point]) -> Result<Estimate> {
        Err(Error::Unsupported(format!("{}: pointwise kernel", self.id())))
    }

    /// Spatial Fourier transform of the 2-point kernel at Euclidean time
    /// `tau > 0` and spatial momentum `p`.
    fn time_momentum(&self, _idx: &FieldIndex, _tau: f64, _p: [f64; 3]) -> Result<f64> {
        Err(Error::Unsupported(format!("{}: time-momentum representation", self.id())))
    }

    fn translation_invariant(&self) -> bool {
        true
    }

    fn symmetry_group(&self) -> SymmetryGroup {
        SymmetryGroup::Continuous
    }

    /// Grid sites sit at `x + site_offset` in each direction (½ for
    /// plaquette-centred observables); used by hypercubic transformations.
    fn site_offset(&self) -> f64 {
        0.0
    }

    /// Lattice extents for statistical families.
    fn extents(&self) -> Option<Vec<usize>> {
        None
    }

    /// Largest relative change of the family's gauge-invariant observables
    /// under random local gauge transformations of the underlying
    /// configurations, when the family has configurations.
    fn gauge_invariance_defect(&self, _seed: u64) -> Result<Option<f64>> {
        Ok(None)
    }

    /// `Θ` on an argument attached to a matter label (`None` for gauge slots).
    fn reflect_argument(&self, _label: Option<&str>, f: &TestFunction) -> Result<TestFunction> {
        Ok(f.theta())
    }

    /// Relative mass of an argument outside the positive-time half.
    fn negative_time_leakage(&self, _label: Option<&str>, f: &TestFunction) -> Result<f64> {
        Ok(f.negative_time_leakage())
    }

    /// JSON description (kind tag plus parameters).
    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "id": self.id(), "source": self.source() })
    }
}

fn check_args(fam: &dyn CorrelatorFamily, idx: &FieldIndex, fs: &[TestFunction]) -> Result<()> {
    if fs.len() != idx.degree() {
        return Err(Error::DimensionMismatch(format!(
            "{} test functions for an index of degree {}",
            fs.len(),
            idx.degree()
        )));
    }
    if let Some(first) = fs.first() {
        let d = first.dimension();
        if fs.iter().any(|f| f.dimension() != d) {
            return Err(Error::DimensionMismatch("test functions of differing dimension".into()));
        }
    }
    if idx.degree() > fam.max_degree() {
        return Err(Error::DegreeCap { degree: idx.degree(), cap: fam.max_degree() });
    }
    idx.validate(fam.catalog(), fam.group().dim_algebra())
}

/// Pair `fam` with a tuple of test functions.
pub fn smear(fam: &dyn CorrelatorFamily, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
    if idx.is_empty() && fs.is_empty() {
        return Ok(Estimate::real(1.0));
    }
    check_args(fam, idx, fs)?;
    fam.evaluate(idx, fs)
}

/// Jackknife samples of a smear, or `None` for exact sources.
pub fn smear_samples(fam: &dyn CorrelatorFamily, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Option<Vec<Complex64>>> {
    if idx.is_empty() && fs.is_empty() {
        return Ok(None);
    }
    check_args(fam, idx, fs)?;
    fam.jackknife_samples(idx, fs)
}

/// Evaluate at permuted slots and apply the statistics sign.
pub fn apply_permutation(
    fam: &dyn CorrelatorFamily,
    idx: &FieldIndex,
    perm: &Permutation,
    args: &[TestFunction],
) -> Result<Estimate> {
    let (pidx, pargs) = perm.apply(idx, args)?;
    let sign = perm.sign(&idx.fermionic_mask(fam.catalog())?);
    Ok(smear(fam, &pidx, &pargs)?.scale(sign))
}

/// Translation-reduced view of a family: kernels as functions of the
/// successive differences of the concatenated argument list.
pub struct DifferenceForm<'a> {
    family: &'a dyn CorrelatorFamily,
}

impl<'a> DifferenceForm<'a> {
    pub fn family(&self) -> &'a dyn CorrelatorFamily {
        self.family
    }

    /// Kernel at differences `diffs[i] = z_{i+1} - z_i` (with `z_0 = 0`).
    pub fn at(&self, idx: &FieldIndex, diffs: &[Point]) -> Result<Estimate> {
        if diffs.len() + 1 != idx.degree() {
            return Err(Error::LengthMismatch(format!(
                "{} differences for an index of degree {}",
                diffs.len(),
                idx.degree()
            )));
        }
        self.family.pointwise(idx, &absolute_points(&[0.0; 4], diffs))
    }
}

/// `z_0 = base`, `z_{i+1} = z_i + diffs[i]`.
pub fn absolute_points(base: &Point, diffs: &[Point]) -> Vec<Point> {
    let mut pts = vec![*base];
    for d in diffs {
        let last = *pts.last().expect("non-empty");
        pts.push(std::array::from_fn(|k| last[k] + d[k]));
    }
    pts
}

/// Build the difference form after a randomized translation test (5σ, or
/// 1e-10 relative for exact sources) on a probe `idx` of degree ≥ 2.
pub fn reduce_to_differences<'a>(
    fam: &'a dyn CorrelatorFamily,
    idx: &FieldIndex,
    seed: u64,
) -> Result<DifferenceForm<'a>> {
    if !fam.translation_invariant() {
        return Err(Error::NotTranslationInvariant { sigmas: f64::INFINITY });
    }
    if idx.degree() >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let diffs: Vec<Point> = (1..idx.degree())
            .map(|_| std::array::from_fn(|k| if k == 0 { 0.6 } else { rng.random_range(-0.5..0.5) }))
            .collect();
        let shift: Point = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let a = fam.pointwise(idx, &absolute_points(&[0.0; 4], &diffs))?;
        let b = fam.pointwise(idx, &absolute_points(&shift, &diffs))?;
        let diff = (a.value - b.value).norm();
        let sigma = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        let violated = if fam.source().is_statistical() {
            diff > 5.0 * sigma
        } else {
            diff > 1e-10 * a.value.norm().max(1e-300)
        };
        if violated {
            return Err(Error::NotTranslationInvariant { sigmas: if sigma > 0.0 { diff / sigma } else { f64::INFINITY } });
        }
    }
    Ok(DifferenceForm { family: fam })
}
