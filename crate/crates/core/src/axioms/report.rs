//! Axiom reports and Gram matrices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::correlator::CorrelatorFamily;
use crate::linalg::{hermitian_eigenvalues, hermitian_norm, hermitize, CMatrix};
use crate::stats::jackknife_error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomId {
    EuclideanCovariance,
    TemporalSupport,
    Symmetry,
    Cluster,
    LinearGrowth,
    ReflectionPositivity,
    GaugeCovariance,
    RenormalizedPositivity,
    SpectralCondition,
    LocalCommutativity,
}

impl AxiomId {
    pub const EUCLIDEAN: [AxiomId; 8] = [
        AxiomId::EuclideanCovariance,
        AxiomId::TemporalSupport,
        AxiomId::Symmetry,
        AxiomId::Cluster,
        AxiomId::LinearGrowth,
        AxiomId::ReflectionPositivity,
        AxiomId::GaugeCovariance,
        AxiomId::RenormalizedPositivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::EuclideanCovariance => "euclidean_covariance",
            AxiomId::TemporalSupport => "temporal_support",
            AxiomId::Symmetry => "symmetry",
            AxiomId::Cluster => "cluster",
            AxiomId::LinearGrowth => "linear_growth",
            AxiomId::ReflectionPositivity => "reflection_positivity",
            AxiomId::GaugeCovariance => "gauge_covariance",
            AxiomId::RenormalizedPositivity => "renormalized_positivity",
            AxiomId::SpectralCondition => "spectral_condition",
            AxiomId::LocalCommutativity => "local_commutativity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        AxiomId::EUCLIDEAN
            .iter()
            .chain(&[AxiomId::SpectralCondition, AxiomId::LocalCommutativity])
            .copied()
            .find(|a| a.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

/// Exact sources are judged relative to a scale, statistical ones in σ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    Exact { relative: f64 },
    Statistical { sigmas: f64 },
}

impl Regime {
    pub const EXACT: Regime = Regime::Exact { relative: 1e-10 };
    pub const THREE_SIGMA: Regime = Regime::Statistical { sigmas: 3.0 };

    /// Allowed violation for a quantity of magnitude `scale` with error `sigma`.
    pub fn allowance(&self, scale: f64, sigma: f64) -> f64 {
        match *self {
            Regime::Exact { relative } => relative * scale,
            Regime::Statistical { sigmas } => sigmas * sigma,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub family: String,
    pub quantities: BTreeMap<String, f64>,
    /// The violation bound the verdict was judged against.
    pub tolerance: f64,
    pub sigma: f64,
    pub regime: Regime,
    pub verdict: Verdict,
    /// Machine-readable reason for inapplicable verdicts and failures.
    pub reason: Option<String>,
    pub notes: Vec<String>,
    pub provenance_hash: String,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.get(name).copied()
    }
}

/// Accumulates quantities and settles the verdict.
pub struct ReportBuilder {
    axiom: AxiomId,
    family: String,
    description: serde_json::Value,
    quantities: BTreeMap<String, f64>,
    regime: Regime,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub fn new(axiom: AxiomId, fam: &dyn CorrelatorFamily) -> Self {
        let regime = if fam.source().is_statistical() { Regime::THREE_SIGMA } else { Regime::EXACT };
        Self { axiom, family: fam.id(), description: fam.describe(), quantities: BTreeMap::new(), regime, notes: vec![] }
    }

    /// Report on an object that is not a correlator family (a spectral model).
    pub fn named(axiom: AxiomId, family: &str, description: serde_json::Value) -> Self {
        Self { axiom, family: family.into(), description, quantities: BTreeMap::new(), regime: Regime::EXACT, notes: vec![] }
    }

    pub fn regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    pub fn current_regime(&self) -> Regime {
        self.regime
    }

    pub fn set(&mut self, name: &str, value: f64) -> &mut Self {
        self.quantities.insert(name.into(), value);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    fn build(self, tolerance: f64, sigma: f64, verdict: Verdict, reason: Option<String>) -> AxiomReport {
        let mut hasher = Sha256::new();
        hasher.update(self.axiom.name().as_bytes());
        hasher.update(self.description.to_string().as_bytes());
        for (k, v) in &self.quantities {
            hasher.update(k.as_bytes());
            hasher.update(v.to_bits().to_le_bytes());
        }
        hasher.update(tolerance.to_bits().to_le_bytes());
        hasher.update(format!("{verdict:?}").as_bytes());
        let provenance_hash = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
        AxiomReport {
            axiom: self.axiom,
            family: self.family,
            quantities: self.quantities,
            tolerance,
            sigma,
            regime: self.regime,
            verdict,
            reason,
            notes: self.notes,
            provenance_hash,
        }
    }

    /// Pass iff `violation ≤ tolerance` (NaN fails).
    pub fn judge(mut self, violation: f64, tolerance: f64, sigma: f64) -> AxiomReport {
        self.quantities.insert("violation".into(), violation);
        if violation <= tolerance {
            self.build(tolerance, sigma, Verdict::Pass, None)
        } else {
            self.build(tolerance, sigma, Verdict::Fail, Some("violation_exceeds_tolerance".into()))
        }
    }

    pub fn fail(self, tolerance: f64, sigma: f64, reason: &str) -> AxiomReport {
        self.build(tolerance, sigma, Verdict::Fail, Some(reason.into()))
    }

    pub fn inapplicable(self, reason: &str) -> AxiomReport {
        self.build(0.0, 0.0, Verdict::Inapplicable, Some(reason.into()))
    }
}

/// Hermitian Gram matrix over a described basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GramMatrix {
    pub entries: CMatrix,
    pub basis: Vec<String>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Jackknife errors of the sorted eigenvalues (zeros for exact data).
    pub eigen_errors: Vec<f64>,
    /// Anti-Hermitian part removed by symmetrization (max-abs entry).
    pub hermiticity_defect: f64,
}

impl GramMatrix {
    /// Symmetrizes `entries`; `samples` are jackknife replicas of the matrix.
    pub fn new(entries: CMatrix, basis: Vec<String>, samples: Option<&[CMatrix]>) -> Self {
        let (entries, hermiticity_defect) = hermitize(&entries);
        let eigenvalues = hermitian_eigenvalues(&entries);
        let eigen_errors = match samples {
            Some(reps) if reps.len() > 1 => {
                let per: Vec<Vec<f64>> = reps.iter().map(|m| hermitian_eigenvalues(&hermitize(m).0)).collect();
                (0..eigenvalues.len())
                    .map(|k| jackknife_error(&per.iter().map(|e| e[k]).collect::<Vec<_>>()))
                    .collect()
            }
            _ => vec![0.0; eigenvalues.len()],
        };
        Self { entries, basis, eigenvalues, eigen_errors, hermiticity_defect }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn norm(&self) -> f64 {
        hermitian_norm(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> (f64, f64) {
        (self.eigenvalues[0], self.eigen_errors[0])
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Real matrix view for callers that know the entries are real.
pub fn real_part(m: &CMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}
