use thiserror::Error;

/// Errors reported by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("phase must be finite, got {0}")]
    NonFinitePhase(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("cannot collapse onto an outcome with probability {probability:.3e}")]
    DegenerateCollapse { probability: f64 },

    #[error("invalid spectral profile: {0}")]
    InvalidSpectrum(String),

    #[error("retardation must be finite and non-negative, got {0}")]
    InvalidRetardation(f64),

    #[error("tilt phase must be finite, got {0}")]
    NonFiniteTilt(f64),

    #[error("quadrature needs at least {min} nodes, got {got}")]
    TooFewQuadratureNodes { min: usize, got: usize },

    #[error("envelope minimum does not cross -1 inside [{lo}, {hi}] waves")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("flip probability must lie in [0, 1], got {0}")]
    InvalidFlipProbability(f64),

    #[error("monte carlo needs at least one trial")]
    ZeroTrials,

    #[error("observed correlator must lie in [-1, 1], got {0}")]
    CorrelatorOutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
