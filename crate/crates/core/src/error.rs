use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {z} lies outside the safe evaluation disk |z| <= {radius}")]
    OutsideSafeDisk { z: Complex64, radius: f64 },

    #[error("derivative of order {order} exceeds truncation order {truncation}")]
    DerivativeOrder { order: usize, truncation: usize },

    #[error("all coefficients are below the relative tolerance {tol:e}; the function is constant")]
    ConstantFunction { tol: f64 },

    #[error("boundary data has nonzero mean: |g(0)| = {mean:e} exceeds tolerance {tol:e}")]
    NonzeroMean { mean: f64, tol: f64 },

    #[error("linear system is singular or ill-conditioned (condition number {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("angles {first} and {second} coincide modulo 2*pi")]
    CoincidentAngles { first: f64, second: f64 },

    #[error("grid of {samples} points does not resolve mollifier width {width:e}; need at least {required}")]
    UnderResolvedGrid {
        samples: usize,
        width: f64,
        required: usize,
    },

    #[error("gradient {gradient:e} at {z} is below tolerance; use the critical-point formula")]
    CriticalPoint { z: Complex64, gradient: f64 },

    #[error("branch index {q} out of range 0..{count}")]
    InvalidBranch { q: usize, count: usize },

    #[error("tracing step collapsed below {min_step:e} near {z}")]
    StepCollapse { z: Complex64, min_step: f64 },

    #[error("tracing exceeded {steps} steps without leaving the disk or closing")]
    TraceExhausted { steps: usize },

    #[error("point {z} is a singular point of the function")]
    SingularPoint { z: Complex64 },

    #[error("sampled boundary has every value below tolerance {tol:e}")]
    AllBelowTolerance { tol: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
