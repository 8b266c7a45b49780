//! Monte Carlo gauge ensembles and their gauge-invariant measurements.

pub mod action;
pub mod config;
pub mod ensemble;
pub mod family;
pub mod geometry;
pub mod links;
pub mod observables;
pub mod store;
pub mod update;

pub use action::{plaquette, staple, total_action, Action, MatterCouplings};
pub use config::{gauge_transform, reflect_links, GaugeField, LatticeConfig};
pub use ensemble::{generate, plaquette_average, plaquette_average_binned, Ensemble, Provenance, RunParams, Start, Thermalization};
pub use family::{grid_leakage, observable_defect, reflect_grid, LatticeFamily, SeparationPoint};
pub use geometry::Lattice;
pub use observables::{plaquette_mean, plaquette_planes, u1_single_plaquette, Observable, ACTION_DENSITY, PHI_SQUARED};
pub use store::{read_ensemble, sidecar_path, write_ensemble, MAGIC};
pub use update::{site_stream, sweep, u1_accept, u1_metropolis, Su3Update, SweepStats, UpdateParams};
