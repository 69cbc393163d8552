use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::FourierCoefficients;
use crate::error::{Error, Result};

/// Smallest accepted grid.
pub const MIN_SAMPLES: usize = 256;

/// Values `g(theta_m)` at `theta_m = 2 pi m / M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledBoundary {
    pub values: Vec<f64>,
}

impl SampledBoundary {
    /// `M` must be a power of two and at least [`MIN_SAMPLES`].
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        if m < MIN_SAMPLES || !m.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "sampled boundary needs a power-of-two number of samples >= {MIN_SAMPLES}, got {m}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sampled boundary values must be finite".into()));
        }
        Ok(Self { values })
    }

    /// Samples `g` on the uniform grid of size `m`.
    pub fn from_fn(m: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..m).map(|j| g(TAU * j as f64 / m as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn angle(&self, m: usize) -> f64 {
        TAU * m as f64 / self.values.len() as f64
    }
}

impl FourierCoefficients for SampledBoundary {
    fn fourier_coefficient(&self, k: usize) -> Complex64 {
        let m = self.values.len();
        let step = Complex64::from_polar(1.0, -TAU * (k % m) as f64 / m as f64);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for &v in &self.values {
            total += phase * v;
            phase *= step;
        }
        total / m as f64
    }

    fn fourier_coefficients(&self, k_max: usize) -> Vec<Complex64> {
        let m = self.values.len();
        let mut buffer: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buffer);
        (0..=k_max).map(|k| buffer[k % m] / m as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(SampledBoundary::new(vec![0.0; 300]).is_err());
        assert!(SampledBoundary::new(vec![0.0; 128]).is_err());
        assert!(SampledBoundary::new(vec![0.0; 256]).is_ok());
    }

    #[test]
    fn fft_matches_direct_sum() {
        let s = SampledBoundary::from_fn(512, |t| (3.0 * t).sin() + 0.25 * t.cos().powi(3)).unwrap();
        let fft = s.fourier_coefficients(20);
        for (k, c) in fft.iter().enumerate() {
            assert!((c - s.fourier_coefficient(k)).norm() < 1e-13);
        }
        // cos^3 = (3 cos t + cos 3t) / 4
        assert!((fft[3] - Complex64::new(0.25 / 8.0, -0.5)).norm() < 1e-14);
    }
}
