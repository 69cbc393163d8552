//! Boundary data on the unit circle and its harmonic extension.
//!
//! Fourier coefficients use `g^(k) = (1/2pi) int g(theta) e^{-ik theta} dtheta`.
//! For the distributional data (combs) the same formula is read as a pairing
//! with `e^{-ik theta}`; derivatives follow `(D^j delta)(f) = (-1)^j f^{(j)}`.

mod comb;
mod derivative_comb;
mod mollify;
mod sampled;
mod step;

pub use comb::{solve_delta_comb, DiracComb};
pub use derivative_comb::{solve_derivative_comb, DerivativeComb};
pub use mollify::{
    bump, bump_cdf, bump_multiplier, bump_multipliers, mollify, required_samples, Mollifiable, Mollified, MollifierSpec,
};
pub use sampled::SampledBoundary;
pub use step::{solve_step_function, StepBoundary};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Relative tolerance on `|g^(0)|` for the zero-mean requirement of [`poisson_extend`].
pub const ZERO_MEAN_TOL: f64 = 1e-10;

/// Anything with Fourier coefficients on the circle.
pub trait FourierCoefficients {
    /// `g^(k)` for `k >= 0`.
    fn fourier_coefficient(&self, k: usize) -> Complex64;

    /// `g^(0..=k_max)`.
    fn fourier_coefficients(&self, k_max: usize) -> Vec<Complex64> {
        (0..=k_max).map(|k| self.fourier_coefficient(k)).collect()
    }
}

/// Any of the supported kinds of boundary data, tagged by `"type"` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Boundary {
    DiracComb(DiracComb),
    DerivativeComb(DerivativeComb),
    Step(StepBoundary),
    Sampled(SampledBoundary),
}

impl Boundary {
    /// Checks the invariants that deserialization cannot express.
    pub fn validate(self) -> Result<Self> {
        Ok(match self {
            Boundary::DiracComb(c) => Boundary::DiracComb(DiracComb::new(c.atoms)?),
            Boundary::DerivativeComb(c) => Boundary::DerivativeComb(DerivativeComb::new(c.phi0, c.b)?),
            Boundary::Step(s) => Boundary::Step(StepBoundary::new(s.beta, s.d)?),
            Boundary::Sampled(s) => Boundary::Sampled(SampledBoundary::new(s.values)?),
        })
    }
}

impl FourierCoefficients for Boundary {
    fn fourier_coefficient(&self, k: usize) -> Complex64 {
        match self {
            Boundary::DiracComb(b) => b.fourier_coefficient(k),
            Boundary::DerivativeComb(b) => b.fourier_coefficient(k),
            Boundary::Step(b) => b.fourier_coefficient(k),
            Boundary::Sampled(b) => b.fourier_coefficient(k),
        }
    }

    fn fourier_coefficients(&self, k_max: usize) -> Vec<Complex64> {
        match self {
            Boundary::DiracComb(b) => b.fourier_coefficients(k_max),
            Boundary::DerivativeComb(b) => b.fourier_coefficients(k_max),
            Boundary::Step(b) => b.fourier_coefficients(k_max),
            Boundary::Sampled(b) => b.fourier_coefficients(k_max),
        }
    }
}

pub fn fourier_coefficient<B: FourierCoefficients + ?Sized>(boundary: &B, k: usize) -> Complex64 {
    boundary.fourier_coefficient(k)
}

/// Taylor coefficients of the holomorphic `w` with `Re w` the Poisson
/// extension of the boundary data: `c_k = 2 g^(k)` for `1 <= k <= K`, `c_0 = 0`.
pub fn poisson_extend<B: FourierCoefficients + ?Sized>(boundary: &B, truncation: usize) -> Result<PowerSeries> {
    if truncation == 0 {
        return Err(Error::InvalidInput("truncation order must be at least 1".into()));
    }
    let mut coeffs = boundary.fourier_coefficients(truncation);
    let scale = coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mean = coeffs[0].norm();
    if mean > ZERO_MEAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonzeroMean {
            mean,
            tol: ZERO_MEAN_TOL * scale,
        });
    }
    coeffs[0] = Complex64::new(0.0, 0.0);
    coeffs[1..].iter_mut().for_each(|c| *c *= 2.0);
    PowerSeries::new(coeffs)
}

/// Wraps an angle into `[0, 2pi)`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(std::f64::consts::TAU);
    if t >= std::f64::consts::TAU {
        0.0
    } else {
        t
    }
}
