//! One checker per axiom, each producing a quantitative [`AxiomReport`].

pub mod cluster;
pub mod covariance;
pub mod gauge;
pub mod grid;
pub mod growth;
pub mod minkowski;
pub mod positivity;
pub mod probes;
pub mod report;
pub mod suite;
pub mod support;
pub mod symmetry;

pub use cluster::{check_cluster, split_pair, ClusterOptions};
pub use covariance::{check_euclidean_covariance, CovarianceOptions};
pub use gauge::{check_gauge_covariance, shift_by_parts, GaugeOptions};
pub use growth::{check_linear_growth, fit_growth, growth_constants, half_factorial, log_factorial, GrowthFit, GrowthOptions};
pub use minkowski::{check_local_commutativity, check_spectral_condition};
pub use positivity::{check_reflection_positivity, check_renormalized_positivity, os_gram, os_pair, positivity_forms, FormValue};
pub use probes::{gaussian_scalar_probes, Probe};
pub use report::{real_part, AxiomId, AxiomReport, GramMatrix, Regime, ReportBuilder, Verdict};
pub use suite::{default_os_basis, default_pair, default_probes, run_suite, SuiteInputs};
pub use support::{check_temporal_support, SupportOptions};
pub use symmetry::{check_symmetry, permutations_for};
