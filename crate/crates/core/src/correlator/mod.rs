//! Test functions, field indices and the correlator-family interface.

pub mod family;
pub mod index;
pub mod seminorm;
pub mod testfn;

pub use family::{
    absolute_points, apply_permutation, reduce_to_differences, smear, smear_samples, CorrelatorFamily,
    DifferenceForm, Estimate, Source, SymmetryGroup,
};
pub use index::{
    antisymmetric_component, Catalog, FieldIndex, FieldSpec, GaugeSlot, MatterSlot, Permutation, TensorKind,
    ANTISYMMETRIC_PAIRS,
};
pub use seminorm::{schwartz_seminorm, Seminorm};
pub use testfn::{Bump, GridFunction, HypercubicElement, Point, Poly, TestFunction};
