//! Euclidean to relativistic continuation of two-point data.

pub mod cone;
pub mod growth;
pub mod spectral;
pub mod transport;
pub mod wightman;

pub use cone::cone_member;
pub use growth::{analytic_samples, verify_growth_estimate, AnalyticSample, GrowthEnvelope};
pub use spectral::{
    fit_data, fit_exponentials, fit_spectral, Continuum, ExponentialFit, FitOptions, Pole, SpectralFit, SpectralModel,
    TimeMomentumData,
};
pub use transport::{fit_decay, minkowski_cluster_fit, transport_gram, DecayFit};
pub use wightman::{analytic_two_point, continue_to_wightman, delta_plus_damped, BoundaryOptions, Damped};
