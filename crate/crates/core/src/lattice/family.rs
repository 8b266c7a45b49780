//! Ensemble measurements exposed as a statistical correlator family.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{gauge_transform, GaugeField, LatticeConfig};
use super::ensemble::Ensemble;
use super::observables::Observable;
use crate::correlator::{Catalog, CorrelatorFamily, Estimate, FieldIndex, FieldSpec, GridFunction, Source, SymmetryGroup, TestFunction};
use crate::error::{Error, Result};
use crate::stats::{jackknife_error, jackknife_vec, DEFAULT_BINS};
use crate::symmetry::GroupKind;

/// Full correlators `⟨Π_k O_k(f_k)⟩` of gauge-invariant site fields,
/// estimated over an ensemble with binned jackknife errors.
pub struct LatticeFamily {
    ensemble: Arc<Ensemble>,
    observables: Vec<Observable>,
    /// `fields[o][c][site]`.
    fields: Vec<Vec<Vec<f64>>>,
    catalog: Catalog,
    bins: usize,
}

/// Translation-averaged two-point function at one separation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationPoint {
    pub separation: Vec<i64>,
    pub full: f64,
    pub full_error: f64,
    pub connected: f64,
    pub connected_error: f64,
}

impl LatticeFamily {
    pub fn new(ensemble: Arc<Ensemble>, observables: &[Observable]) -> Result<Self> {
        if ensemble.is_empty() {
            return Err(Error::TooFewConfigs { configs: 0, bins: DEFAULT_BINS });
        }
        let mut fields = Vec::with_capacity(observables.len());
        let mut specs = Vec::with_capacity(observables.len());
        for o in observables {
            if o.needs_matter() && !ensemble.has_matter() {
                return Err(Error::Incompatible(format!("{o} needs scalar matter")));
            }
            fields.push(ensemble.configs.iter().map(|c| o.field(c)).collect::<Result<Vec<_>>>()?);
            specs.push(match o {
                Observable::WilsonLoop { .. } => FieldSpec::scalar(&o.label()),
                _ => FieldSpec::composite(&o.label()),
            });
        }
        Ok(Self { ensemble, observables: observables.to_vec(), fields, catalog: Catalog::new(specs), bins: DEFAULT_BINS })
    }

    /// Action density, plaquette and, with matter, `|φ|²`.
    pub fn standard(ensemble: Arc<Ensemble>) -> Result<Self> {
        let mut obs = vec![Observable::ActionDensity, Observable::PLAQUETTE];
        if ensemble.has_matter() {
            obs.push(Observable::PhiSquared);
        }
        Self::new(ensemble, &obs)
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.bins = bins;
        self
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    fn slot(&self, label: &str) -> Result<usize> {
        self.observables.iter().position(|o| o.label() == label).ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    pub fn observable(&self, label: &str) -> Result<Observable> {
        Ok(self.observables[self.slot(label)?])
    }

    /// Per-configuration values of one observable.
    pub fn field(&self, label: &str) -> Result<&[Vec<f64>]> {
        Ok(&self.fields[self.slot(label)?])
    }

    fn sparse(&self, f: &TestFunction) -> Result<Vec<(usize, Complex64)>> {
        let g = f.grid()?;
        if g.dims != self.ensemble.lattice().dims() {
            return Err(Error::DimensionMismatch(format!("grid {:?} on a {:?} lattice", g.dims, self.ensemble.lattice().dims())));
        }
        Ok(g.values.iter().enumerate().filter(|(_, v)| **v != Complex64::new(0.0, 0.0)).map(|(i, v)| (i, *v)).collect())
    }

    /// `Π_k Σ_x f_k(x) O_k(x)` on every configuration.
    fn products(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Vec<Complex64>> {
        if !idx.gauge.is_empty() {
            return Err(Error::Incompatible("lattice families measure gauge-invariant fields only".into()));
        }
        let slots = idx.matter.iter().map(|m| self.slot(&m.label)).collect::<Result<Vec<_>>>()?;
        let sparse = fs.iter().map(|f| self.sparse(f)).collect::<Result<Vec<_>>>()?;
        Ok((0..self.ensemble.len())
            .map(|c| {
                slots
                    .iter()
                    .zip(&sparse)
                    .map(|(&o, sp)| sp.iter().map(|&(x, w)| w * self.fields[o][c][x]).sum::<Complex64>())
                    .product()
            })
            .collect())
    }

    fn binned(&self, values: &[Complex64]) -> Result<(Complex64, Vec<Complex64>)> {
        let rows: Vec<Vec<f64>> = values.iter().map(|v| vec![v.re, v.im]).collect();
        let (re, re_s) = jackknife_vec(&rows, self.bins, |m| m[0])?;
        let (im, im_s) = jackknife_vec(&rows, self.bins, |m| m[1])?;
        Ok((Complex64::new(re, im), re_s.into_iter().zip(im_s).map(|(a, b)| Complex64::new(a, b)).collect()))
    }

    /// `(1/|S|) Σ_{x∈S} ⟨O(x) O(x+r)⟩` and its connected part, with `S` all
    /// sites or the time slice `anchor`.
    pub fn separation_correlator(&self, label: &str, separations: &[Vec<i64>], anchor: Option<usize>) -> Result<Vec<SeparationPoint>> {
        let o = self.slot(label)?;
        let lat = self.ensemble.lattice();
        let dims = lat.dims();
        let sites: Vec<usize> = match anchor {
            None => (0..lat.volume()).collect(),
            Some(t) if t < dims[0] => (0..lat.volume()).filter(|&s| lat.coords(s)[0] == t).collect(),
            Some(t) => return Err(Error::Geometry(format!("anchor time {t} outside the lattice"))),
        };
        let mut out = Vec::with_capacity(separations.len());
        for r in separations {
            if r.len() != dims.len() {
                return Err(Error::DimensionMismatch(format!("separation of rank {} on a rank-{} lattice", r.len(), dims.len())));
            }
            for (k, &rk) in r.iter().enumerate() {
                if rk.unsigned_abs() as usize > dims[k] / 2 {
                    return Err(Error::SeparationTooLarge { separation: rk.unsigned_abs() as usize, half: dims[k] / 2 });
                }
            }
            let partner: Vec<usize> = sites.iter().map(|&s| lat.shift(s, r)).collect();
            let rows: Vec<Vec<f64>> = self.fields[o]
                .iter()
                .map(|f| {
                    let pair = sites.iter().zip(&partner).map(|(&a, &b)| f[a] * f[b]).sum::<f64>() / sites.len() as f64;
                    let mean = f.iter().sum::<f64>() / f.len() as f64;
                    vec![pair, mean]
                })
                .collect();
            let (full, fs) = jackknife_vec(&rows, self.bins, |m| m[0])?;
            let (conn, cs) = jackknife_vec(&rows, self.bins, |m| m[0] - m[1] * m[1])?;
            out.push(SeparationPoint {
                separation: r.clone(),
                full,
                full_error: jackknife_error(&fs),
                connected: conn,
                connected_error: jackknife_error(&cs),
            });
        }
        Ok(out)
    }

    /// Largest relative change of every measured field on `configs` under
    /// independent random gauge transformations.
    pub fn gauge_defect_on(&self, configs: &[usize], seed: u64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &c in configs {
            let cfg = self.ensemble.configs.get(c).ok_or_else(|| Error::Geometry(format!("no configuration {c}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let g = GaugeField::random(&cfg.lattice, cfg.group, &mut rng);
            worst = worst.max(observable_defect(cfg, &gauge_transform(cfg, &g)?, &self.observables)?);
        }
        Ok(worst)
    }
}

/// Largest relative difference of the given fields between two configurations.
pub fn observable_defect(a: &LatticeConfig, b: &LatticeConfig, observables: &[Observable]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for o in observables {
        let fa = o.field(a)?;
        let fb = o.field(b)?;
        let scale = fa.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let diff = fa.iter().zip(&fb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
    }
    Ok(worst)
}

/// Time reflection of a grid argument attached to an observable with the
/// given time footprint: `t ↦ −1 − lo − hi − t`, values conjugated.
pub fn reflect_grid(g: &GridFunction, footprint: (i64, i64)) -> GridFunction {
    let t_ext = g.dims[0] as i64;
    let mut out = GridFunction::zeros(&g.dims, g.spacing);
    for (i, v) in g.values.iter().enumerate() {
        let mut x = g.coords(i);
        x[0] = (-1 - footprint.0 - footprint.1 - x[0] as i64).rem_euclid(t_ext) as usize;
        let j = out.site_index(&x);
        out.values[j] = v.conj();
    }
    out
}

/// Fraction of `|f|` on sites whose footprint leaves the slab `0 ≤ t < T/2`.
pub fn grid_leakage(g: &GridFunction, footprint: (i64, i64)) -> f64 {
    let half = (g.dims[0] / 2) as i64;
    let mut out = 0.0;
    let mut all = 0.0;
    for (i, v) in g.values.iter().enumerate() {
        let t = g.coords(i)[0] as i64;
        all += v.norm();
        if t + footprint.0 < 0 || t + footprint.1 > half - 1 {
            out += v.norm();
        }
    }
    if all == 0.0 {
        0.0
    } else {
        out / all
    }
}

impl CorrelatorFamily for LatticeFamily {
    fn id(&self) -> String {
        let p = &self.ensemble.provenance.params;
        let dims: Vec<String> = p.dims.iter().map(|d| d.to_string()).collect();
        let mut id = format!("lattice:{}:{}:beta={}", p.group.name(), dims.join("x"), p.action.beta);
        if let Some(m) = p.action.matter {
            id.push_str(&format!(":kappa={}:lambda={}", m.kappa, m.lambda));
        }
        id
    }

    fn source(&self) -> Source {
        Source::LatticeEstimate
    }

    fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    fn group(&self) -> GroupKind {
        self.ensemble.group()
    }

    fn max_degree(&self) -> usize {
        8
    }

    fn evaluate(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Estimate> {
        let (value, samples) = self.binned(&self.products(idx, fs)?)?;
        let err = jackknife_error(&samples.iter().map(|s| s.re).collect::<Vec<_>>())
            .hypot(jackknife_error(&samples.iter().map(|s| s.im).collect::<Vec<_>>()));
        Ok(Estimate { value, stderr: err })
    }

    fn jackknife_samples(&self, idx: &FieldIndex, fs: &[TestFunction]) -> Result<Option<Vec<Complex64>>> {
        Ok(Some(self.binned(&self.products(idx, fs)?)?.1))
    }

    fn symmetry_group(&self) -> SymmetryGroup {
        SymmetryGroup::Hypercubic
    }

    fn extents(&self) -> Option<Vec<usize>> {
        Some(self.ensemble.lattice().dims().to_vec())
    }

    fn gauge_invariance_defect(&self, seed: u64) -> Result<Option<f64>> {
        let n = self.ensemble.len();
        let picks: Vec<usize> = (0..n.min(16)).map(|k| k * n / n.min(16)).collect();
        self.gauge_defect_on(&picks, seed).map(Some)
    }

    fn reflect_argument(&self, label: Option<&str>, f: &TestFunction) -> Result<TestFunction> {
        let o = self.observable(label.ok_or_else(|| Error::Incompatible("gauge slot on a lattice family".into()))?)?;
        Ok(TestFunction::Grid(reflect_grid(f.grid()?, o.footprint())))
    }

    fn negative_time_leakage(&self, label: Option<&str>, f: &TestFunction) -> Result<f64> {
        let o = self.observable(label.ok_or_else(|| Error::Incompatible("gauge slot on a lattice family".into()))?)?;
        Ok(grid_leakage(f.grid()?, o.footprint()))
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id(),
            "kind": "lattice",
            "source": self.source(),
            "params": self.ensemble.provenance.params,
            "content_hash": self.ensemble.provenance.content_hash,
            "observables": self.observables.iter().map(|o| o.label()).collect::<Vec<_>>(),
            "bins": self.bins,
            "restriction": "grid-function working set only",
        })
    }
}
