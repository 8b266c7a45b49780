use thiserror::Error;

/// Errors raised across the crate. Messages carry the module they originate from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symmetry: index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("symmetry: non-finite input")]
    NonFinite,
    #[error("symmetry: representation metric mismatch (expected {expected}, got {got})")]
    MetricMismatch { expected: &'static str, got: &'static str },

    #[error("correlator: length mismatch: {0}")]
    LengthMismatch(String),
    #[error("correlator: dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("correlator: grid too coarse for derivative order {order} (stencil supports {supported})")]
    GridTooCoarse { order: usize, supported: usize },
    #[error("correlator: family is not translation invariant (deviation {sigmas:.2} sigma)")]
    NotTranslationInvariant { sigmas: f64 },
    #[error("correlator: unsupported evaluation: {0}")]
    Unsupported(String),
    #[error("correlator: unknown field label `{0}`")]
    UnknownLabel(String),

    #[error("free_field: kernel singular at coincident points")]
    Singular,
    #[error("free_field: degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("quadrature: not converged (achieved error {achieved:.3e}, target {target:.3e})")]
    Quadrature { achieved: f64, target: f64 },

    #[error("lattice: invalid geometry: {0}")]
    Geometry(String),
    #[error("lattice: fewer configurations ({configs}) than jackknife bins ({bins})")]
    TooFewConfigs { configs: usize, bins: usize },
    #[error("lattice: separation {separation} exceeds half extent {half}")]
    SeparationTooLarge { separation: usize, half: usize },
    #[error("functional support touches the reflection plane: {0}")]
    SupportViolation(String),
    #[error("lattice: observable incompatible with theory: {0}")]
    Incompatible(String),
    #[error("lattice: ensemble store: {0}")]
    Store(String),

    #[error("axioms: {0}")]
    Axiom(String),

    #[error("reconstruction: degree cap {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("reconstruction: gram has eigenvalue {eigenvalue:.3e} below -{tolerance:.3e} (positivity violation)")]
    PositivityViolation { eigenvalue: f64, tolerance: f64 },
    #[error("reconstruction: physical dimension mismatch ({a} vs {b})")]
    DimensionMismatchSpaces { a: usize, b: usize },
    #[error("reconstruction: gauge projection error {0:.3e} exceeds 1e-6")]
    ProjectionError(f64),
    #[error("reconstruction: empty basis")]
    EmptyBasis,

    #[error("continuation: zero vector")]
    ZeroVector,
    #[error("continuation: ill-conditioned fit (condition number {condition:.3e}, residual {residual:.3e})")]
    IllConditioned { condition: f64, residual: f64 },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
