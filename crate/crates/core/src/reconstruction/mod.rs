//! Hilbert space reconstruction from Schwinger functions: sequence vectors,
//! the reflection-twisted scalar product, the null quotient and the symmetry
//! actions on it.

pub mod actions;
pub mod borchers;
pub mod physical;
pub mod sequence;
pub mod uniqueness;

pub use actions::{act_gauge, act_poincare, is_spatial, AbelianGauge};
pub use borchers::{build_borchers, direct_smear, pairing, vev, BorchersSpace};
pub use physical::{build_physical, gauge_invariant_generators, physical_from_basis, PhysicalOptions, PhysicalSpace, QuotientBackend};
pub use sequence::{apply_field, monomial_on_vacuum, FieldOperator, OperatorKind, SequenceVector, Term, DEFAULT_DEGREE_CAP};
pub use uniqueness::{verify_uniqueness, UniquenessReport};
