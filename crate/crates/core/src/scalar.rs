//! Scalar abstraction for the generic parts of the numerical core.
//!
//! The Lie-group layer is written once over [`Real`] and instantiated for
//! `f32` and `f64`. Everything downstream of the Monte Carlo and the axiom
//! checks runs in `f64`; their tolerances are stated for double precision.

use nalgebra::RealField;
use num_traits::FromPrimitive;

pub trait Real: RealField + Copy + FromPrimitive {
    /// Matrix identities (unitarity, brackets) hold to this absolute tolerance.
    const MATRIX_TOL: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64;
}

impl Real for f64 {
    const MATRIX_TOL: f64 = 1e-12;

    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const MATRIX_TOL: f64 = 5e-6;

    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}
