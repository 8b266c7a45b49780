//! Gauge groups and spacetime symmetry representations.

pub mod gauge;
pub mod spacetime;

pub use gauge::{
    adjoint_generator, algebra_coordinates, exp_map, generators, haar_sample, structure_constants,
    AlgebraElement, CMat, GroupElement, GroupKind, StructureConstants,
};
pub use spacetime::{
    metric_defect, random_euclidean, random_lorentz, random_spatial, spinor_rep_matrix,
    vector_rep_matrix, Metric, SpacetimeRep, SpinorIndexSet,
};
