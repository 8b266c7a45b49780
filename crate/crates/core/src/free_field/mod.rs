//! Exact free-field correlators: kernels, smearing and Gaussian families.

pub mod families;
pub mod heat;
pub mod kernel;
pub mod wick;

pub use families::{
    slots, ChargedScalar, Factorized, FeynmanPhoton, FreeMaxwell, FreeScalar, ScalarVariant, Scaled, Slot, SpinorToy,
    CHARGE_DENSITY, FIELD_STRENGTH, FIELD_STRENGTH_SQUARED, PHI, PHI_BAR, PHI_SQUARED, SPINOR,
};
pub use heat::{HeatKernelSmear, ProperTimeWeight};
pub use kernel::{maxwell_f_schwinger_2pt, radial_propagator, scalar_schwinger_2pt, scalar_wightman_2pt};
pub use wick::{wick_sum, DEFAULT_PAIRING_CAP};
