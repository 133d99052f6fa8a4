use thiserror::Error;

use crate::frac_ops::SampledFunction;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series did not converge within {terms} terms (best partial value {best})")]
    SeriesNotConverged { best: f64, terms: usize },

    #[error("pochhammer symbol overflowed at tau = {tau}")]
    PochhammerOverflow { tau: u32 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("kernel exponent {theta} is not integrable (must be > 0)")]
    NonIntegrableKernel { theta: f64 },

    #[error("kernel evaluation failed: {0}")]
    KernelEvaluation(String),

    #[error("composition count {count} exceeds the configured bound {bound}")]
    TooManyCompositions { count: f64, bound: usize },

    #[error("outer series diverged: layer contributions grew for 3 consecutive layers (stopped at l = {layer})")]
    Diverged {
        layer: usize,
        partial: Box<SampledFunction>,
    },

    #[error("outer series did not reach tolerance within {layers} layers")]
    LayersExhausted {
        layers: usize,
        partial: Box<SampledFunction>,
    },

    #[error("unsupported spatial dimension n = {n}: {reason}")]
    UnsupportedDimension { n: u32, reason: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Laplace tail bound exceeded at s = {s}: horizon must be at least {required_horizon}")]
    TailTooLarge { s: f64, required_horizon: f64 },

    #[error("numerical Laplace inversion did not converge at t = {t}: {reason}")]
    InversionNotConverged { t: f64, reason: String },

    #[error("quadrature did not reach tolerance (estimate {value}, error {error})")]
    QuadratureNotConverged { value: f64, error: f64 },

    #[error("grid under-resolved: residual {fine} at h/2 did not improve on {coarse} at h")]
    UnderResolved { coarse: f64, fine: f64 },

    #[error("singular linear system at node {index}")]
    SingularSystem { index: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
