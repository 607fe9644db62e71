use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not hermitian (max |M - M^dag| = {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error(
        "eigensolver did not converge after {iterations} iterations (residual {residual:.3e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("sweep grid too coarse at point {index}: overlap {overlap:.3e}")]
    GridTooCoarse { index: usize, overlap: f64 },
    #[error("subspace mismatch: smallest singular value {min_singular:.3e} < 0.5")]
    SubspaceMismatch { min_singular: f64 },
    #[error("no anti-crossing between {which} in flux range [0, 0.5]")]
    NoAnticrossing { which: String },
    #[error("perturbation theory invalid: detuning {detuning:.4e} rad/s vs coupling {coupling:.4e} rad/s")]
    Resonance { detuning: f64, coupling: f64 },
    #[error("propagator drifted from unitarity by {drift:.3e}; reduce the step size")]
    StepSize { drift: f64 },
    #[error("zero rate: {0}")]
    ZeroRate(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("at {axis} = {value}: {source}")]
    AtPoint {
        axis: String,
        value: f64,
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::NoConvergence { .. } => "no_convergence",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::SubspaceMismatch { .. } => "subspace_mismatch",
            Error::NoAnticrossing { .. } => "no_anticrossing",
            Error::Resonance { .. } => "resonance",
            Error::StepSize { .. } => "step_size",
            Error::ZeroRate(_) => "zero_rate",
            Error::Config { .. } => "config",
            Error::AtPoint { source, .. } => source.code(),
            Error::Io(_) => "io",
        }
    }
}
