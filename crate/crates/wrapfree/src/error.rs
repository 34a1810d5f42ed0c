use std::path::PathBuf;

/// Errors raised by measure construction, transform evaluation and inversion.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("negative mass")]
    NegativeMass,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no-convergence (residual {residual:.3e} after {iterations} iterations)")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("left-domain")]
    LeftDomain,
    #[error("eta-derivative-zero")]
    EtaDerivativeZero,
    #[error("nan-in-evaluation")]
    NanInEvaluation,
    #[error("window-too-small (captured mass {captured:.6})")]
    WindowTooSmall { captured: f64 },
    #[error("insufficient-mass (captured mass {captured:.6})")]
    InsufficientMass { captured: f64 },
    #[error("fixed-point-stall (last step {step:.3e})")]
    FixedPointStall { step: f64 },
    #[error("kind-mismatch")]
    KindMismatch,
    #[error("ode-step-rejected at t = {t}")]
    OdeStepRejected { t: f64 },
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
