use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FourierCoefficients;
use crate::error::{Error, Result};
use crate::linalg;

/// `T = sum_{j=1}^{2n} b_j D^j delta_{phi0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeComb {
    pub phi0: f64,
    /// `b_1..b_{2n}`; `b[0]` multiplies the first derivative.
    pub b: Vec<f64>,
}

impl DerivativeComb {
    pub fn new(phi0: f64, b: Vec<f64>) -> Result<Self> {
        if b.is_empty() || !b.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "derivative comb needs an even, nonzero number of weights, got {}",
                b.len()
            )));
        }
        if !phi0.is_finite() || b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("derivative comb parameters must be finite".into()));
        }
        Ok(Self { phi0, b })
    }

    /// `T(zeta^{-k}) = sum_j b_j (ik)^j e^{-ik phi0}`.
    pub fn pairing(&self, k: usize) -> Complex64 {
        let ik = Complex64::new(0.0, k as f64);
        let mut power = Complex64::new(1.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for &bj in &self.b {
            power *= ik;
            total += power * bj;
        }
        total * Complex64::from_polar(1.0, -(k as f64) * self.phi0)
    }
}

impl FourierCoefficients for DerivativeComb {
    fn fourier_coefficient(&self, k: usize) -> Complex64 {
        self.pairing(k) / TAU
    }
}

/// Weights `b_1..b_{2n}` with `T(zeta^{-k}) = 0` for `1 <= k < n` and
/// `T(zeta^{-n}) = pi`, so that the extension has `c_n = 1`.
///
/// Even and odd orders decouple: with `x_m = (-1)^m b_{2m}` and
/// `y_m = (-1)^{m-1} b_{2m-1}`, rows `k = 1..n` read
/// `sum_m k^{2m} x_m = pi cos(n phi0) [k = n]` and
/// `sum_m k^{2m-1} y_m = pi sin(n phi0) [k = n]`.
pub fn solve_derivative_comb(n: usize, phi0: f64) -> Result<DerivativeComb> {
    if n == 0 {
        return Err(Error::InvalidInput("vanishing order must be at least 1".into()));
    }
    let nodes: Vec<f64> = (1..=n).map(|k| k as f64).collect();
    let even_rows: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&k| (1..=n).map(|m| k.powi(2 * m as i32)).collect())
        .collect();
    let odd_rows: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&k| (1..=n).map(|m| k.powi(2 * m as i32 - 1)).collect())
        .collect();
    let mut even_rhs = vec![0.0; n];
    let mut odd_rhs = vec![0.0; n];
    even_rhs[n - 1] = PI * (n as f64 * phi0).cos();
    odd_rhs[n - 1] = PI * (n as f64 * phi0).sin();
    let x = linalg::solve(&even_rows, &even_rhs)?;
    let y = linalg::solve(&odd_rows, &odd_rhs)?;

    let mut b = vec![0.0; 2 * n];
    for m in 1..=n {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        b[2 * m - 1] = sign * x[m - 1];
        b[2 * m - 2] = -sign * y[m - 1];
    }
    DerivativeComb::new(phi0, b)
}
