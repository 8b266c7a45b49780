pub mod axioms;
pub mod continuation;
pub mod correlator;
pub mod error;
pub mod free_field;
pub mod gauge_action;
pub mod lattice;
pub mod linalg;
pub mod optim;
pub mod quad;
pub mod reconstruction;
pub mod scalar;
pub mod special;
pub mod stats;
pub mod symmetry;

pub use error::{Error, Result};
pub use scalar::Real;

pub type GroupElement64 = symmetry::GroupElement<f64>;
pub type GroupElement32 = symmetry::GroupElement<f32>;
pub type AlgebraElement64 = symmetry::AlgebraElement<f64>;
pub type AlgebraElement32 = symmetry::AlgebraElement<f32>;
pub type SpacetimeRep64 = symmetry::SpacetimeRep<f64>;
pub type SpacetimeRep32 = symmetry::SpacetimeRep<f32>;
