use thiserror::Error;

/// Errors raised by the geometry kernels, the transport solver and the
/// particle dynamics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("antipodal pair: distance {distance} lies within the cut-locus guard")]
    AntipodalPair { distance: f64 },

    #[error("tangent vector of norm {norm} exceeds the injectivity guard {limit}")]
    ExceedsInjectivity { norm: f64, limit: f64 },

    #[error("off manifold: {0}")]
    OffManifold(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sampling radius {radius} is not below the convexity radius {limit}")]
    RadiusTooLarge { radius: f64, limit: f64 },

    #[error("diameter guard: diameter {delta} violates the curvature bound {limit}")]
    DiameterTooLarge { delta: f64, limit: f64 },

    #[error("profile `{0}` carries no global constant A_g'")]
    MissingGlobalConstant(String),

    #[error("profile `{0}` is not attractive")]
    NotAttractive(String),

    #[error("invalid potential profile: {0}")]
    InvalidProfile(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("time grid mismatch: {0}")]
    GridMismatch(String),

    #[error("diameter guard violated at t = {time}: support diameter {diameter} plus margin {margin} reaches {limit}")]
    DiameterViolation {
        time: f64,
        diameter: f64,
        margin: f64,
        limit: f64,
    },

    #[error("no contraction: C(T)*Lambda = {factor} >= 1, shrink the horizon")]
    NoContraction { factor: f64 },

    #[error("picard iteration did not converge in {iterations} iterations (last distance {last})")]
    MaxIterExceeded { iterations: usize, last: f64 },

    #[error("invalid flow configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for errors raised by a geometric or diameter guard rather than by
    /// malformed input.
    pub fn is_guard_violation(&self) -> bool {
        matches!(
            self,
            Error::AntipodalPair { .. }
                | Error::ExceedsInjectivity { .. }
                | Error::DiameterTooLarge { .. }
                | Error::DiameterViolation { .. }
                | Error::RadiusTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
