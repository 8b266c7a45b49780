//! Ensemble generation with adaptive thermalization and full provenance.

use serde::{Deserialize, Serialize};

use super::action::Action;
use super::config::LatticeConfig;
use super::geometry::Lattice;
use super::observables::plaquette_mean;
use super::store::content_hash;
use super::update::{site_stream, sweep, SweepStats, UpdateParams};
use crate::error::{Error, Result};
use crate::stats::{integrated_autocorrelation, jackknife_mean, DEFAULT_BINS};
use crate::symmetry::GroupKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    Cold,
    Hot,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Thermalization {
    Fixed { sweeps: usize },
    /// Run `pilot` sweeps, then extend to `factor · τ_int` of the plaquette
    /// (at least `min_sweeps`).
    Adaptive { min_sweeps: usize, pilot: usize, factor: f64 },
}

impl Default for Thermalization {
    fn default() -> Self {
        Thermalization::Adaptive { min_sweeps: 100, pilot: 200, factor: 10.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub dims: Vec<usize>,
    #[serde(default = "unit")]
    pub spacing: f64,
    pub group: GroupKind,
    pub action: Action,
    #[serde(default)]
    pub update: UpdateParams,
    pub seed: u64,
    pub start: Start,
    #[serde(default)]
    pub thermalization: Thermalization,
    pub sweeps_per_config: usize,
    pub n_configs: usize,
}

fn unit() -> f64 {
    1.0
}

impl RunParams {
    pub fn new(dims: &[usize], group: GroupKind, action: Action, seed: u64, n_configs: usize) -> Self {
        Self {
            dims: dims.to_vec(),
            spacing: 1.0,
            group,
            action,
            update: UpdateParams::default(),
            seed,
            start: Start::Hot,
            thermalization: Thermalization::default(),
            sweeps_per_config: 1,
            n_configs,
        }
    }

    pub fn validate(&self) -> Result<Lattice> {
        let lat = Lattice::new(&self.dims, self.spacing)?;
        self.action.validate(self.group)?;
        if self.sweeps_per_config == 0 || self.n_configs == 0 {
            return Err(Error::Geometry("sweeps_per_config and n_configs must be positive".into()));
        }
        if let Thermalization::Adaptive { factor, .. } = self.thermalization {
            if !(factor > 0.0) {
                return Err(Error::Geometry("thermalization factor must be positive".into()));
            }
        }
        Ok(lat)
    }
}

/// Everything needed to regenerate an ensemble bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub params: RunParams,
    pub thermalization_sweeps: usize,
    pub tau_int_plaquette: Option<f64>,
    pub total_sweeps: u64,
    pub link_acceptance: f64,
    pub matter_acceptance: Option<f64>,
    /// SHA-256 of the stored configuration body, hex.
    pub content_hash: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub provenance: Provenance,
    pub configs: Vec<LatticeConfig>,
}

impl Ensemble {
    pub fn lattice(&self) -> &Lattice {
        &self.configs[0].lattice
    }

    pub fn group(&self) -> GroupKind {
        self.provenance.params.group
    }

    pub fn has_matter(&self) -> bool {
        self.configs.first().is_some_and(|c| c.matter.is_some())
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// Regenerate from the recorded provenance with the thermalization fixed
    /// to the recorded length.
    pub fn regenerate(prov: &Provenance) -> Result<Self> {
        let mut params = prov.params.clone();
        params.thermalization = Thermalization::Fixed { sweeps: prov.thermalization_sweeps };
        let mut ens = generate(&params)?;
        ens.provenance.params.thermalization = prov.params.thermalization;
        ens.provenance.tau_int_plaquette = prov.tau_int_plaquette;
        Ok(ens)
    }
}

/// Run the Markov chain: thermalize, then keep one configuration every
/// `sweeps_per_config` sweeps.
pub fn generate(params: &RunParams) -> Result<Ensemble> {
    let lat = params.validate()?;
    let matter = params.action.matter.is_some();
    let mut cfg = match params.start {
        Start::Cold => LatticeConfig::cold(&lat, params.group, matter),
        Start::Hot => {
            let mut rng = site_stream(params.seed, u64::MAX, 0, 0);
            LatticeConfig::hot(&lat, params.group, matter, &mut rng)
        }
    };
    let mut counter: u64 = 0;
    let mut stats = SweepStats::default();
    let mut step = |cfg: &mut LatticeConfig, stats: &mut SweepStats| {
        let s = sweep(cfg, &params.action, &params.update, params.seed, counter);
        counter += 1;
        stats.add(&s);
    };

    let (therm, tau) = match params.thermalization {
        Thermalization::Fixed { sweeps } => {
            for _ in 0..sweeps {
                step(&mut cfg, &mut stats);
            }
            (sweeps, None)
        }
        Thermalization::Adaptive { min_sweeps, pilot, factor } => {
            let mut series = Vec::with_capacity(pilot);
            for _ in 0..pilot {
                step(&mut cfg, &mut stats);
                series.push(plaquette_mean(&cfg));
            }
            let tau = integrated_autocorrelation(&series[series.len() / 2..]);
            let target = min_sweeps.max((factor * tau).ceil() as usize).max(pilot);
            for _ in pilot..target {
                step(&mut cfg, &mut stats);
            }
            log::info!("thermalization: tau_int {tau:.2}, {target} sweeps discarded");
            (target, Some(tau))
        }
    };

    let mut configs = Vec::with_capacity(params.n_configs);
    for _ in 0..params.n_configs {
        for _ in 0..params.sweeps_per_config {
            step(&mut cfg, &mut stats);
        }
        configs.push(cfg.clone());
    }
    let provenance = Provenance {
        params: params.clone(),
        thermalization_sweeps: therm,
        tau_int_plaquette: tau,
        total_sweeps: counter,
        link_acceptance: stats.link_acceptance(),
        matter_acceptance: matter.then(|| stats.matter_acceptance()),
        content_hash: content_hash(&configs),
    };
    Ok(Ensemble { provenance, configs })
}

/// Jackknife mean and error of `(1/N) Re tr U_p` over sites, orientations
/// and configurations.
pub fn plaquette_average(ens: &Ensemble) -> Result<(f64, f64)> {
    plaquette_average_binned(ens, DEFAULT_BINS)
}

pub fn plaquette_average_binned(ens: &Ensemble, bins: usize) -> Result<(f64, f64)> {
    let series: Vec<f64> = ens.configs.iter().map(plaquette_mean).collect();
    let jk = jackknife_mean(&series, bins)?;
    Ok((jk.value, jk.error))
}
