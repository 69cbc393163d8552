use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FourierCoefficients;
use crate::error::{Error, Result};
use crate::linalg;

/// Piecewise constant `h = sum_j d_j 1_[beta_j, beta_{j+1})`, extended
/// 2pi-periodically with `beta_{m+1} = beta_1 + 2pi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepBoundary {
    pub beta: Vec<f64>,
    pub d: Vec<f64>,
}

impl StepBoundary {
    pub fn new(beta: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        if beta.len() < 2 || beta.len() != d.len() {
            return Err(Error::InvalidInput(format!(
                "step function needs matching breakpoints and levels (got {} and {})",
                beta.len(),
                d.len()
            )));
        }
        if beta.iter().chain(&d).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("step function parameters must be finite".into()));
        }
        let increasing = beta.windows(2).all(|w| w[0] < w[1]);
        if !increasing || beta[beta.len() - 1] >= beta[0] + TAU {
            return Err(Error::InvalidInput(
                "breakpoints must increase strictly within one period".into(),
            ));
        }
        Ok(Self { beta, d })
    }

    /// Interval `[beta_j, beta_{j+1})` with the periodic closing interval.
    pub(crate) fn interval(&self, j: usize) -> (f64, f64) {
        let next = if j + 1 == self.beta.len() {
            self.beta[0] + TAU
        } else {
            self.beta[j + 1]
        };
        (self.beta[j], next)
    }

    /// `h(theta)`.
    pub fn value(&self, theta: f64) -> f64 {
        let t = self.beta[0] + (theta - self.beta[0]).rem_euclid(TAU);
        let j = self.beta.partition_point(|&b| b <= t);
        self.d[j.max(1) - 1]
    }
}

impl FourierCoefficients for StepBoundary {
    fn fourier_coefficient(&self, k: usize) -> Complex64 {
        let total: Complex64 = (0..self.d.len())
            .map(|j| {
                let (a, b) = self.interval(j);
                if k == 0 {
                    Complex64::new(self.d[j] * (b - a), 0.0)
                } else {
                    let k = k as f64;
                    let diff = Complex64::from_polar(1.0, -k * b) - Complex64::from_polar(1.0, -k * a);
                    Complex64::new(0.0, 1.0 / k) * diff * self.d[j]
                }
            })
            .sum();
        total / TAU
    }
}

/// Levels `d_1..d_{2n}` on the given breakpoints with `h^(k) = 0` for
/// `0 <= k < n` and `Re h^(n) = 1`.
///
/// Rows: `sum d_j (beta_{j+1} - beta_j) = 0`; for `1 <= k < n` both
/// `sum d_j (sin k beta_{j+1} - sin k beta_j) = 0` and the cosine analogue;
/// finally `sum d_j (sin n beta_{j+1} - sin n beta_j) = 2 pi n`.
pub fn solve_step_function(n: usize, breakpoints: &[f64]) -> Result<StepBoundary> {
    if n == 0 {
        return Err(Error::InvalidInput("vanishing order must be at least 1".into()));
    }
    if breakpoints.len() != 2 * n {
        return Err(Error::InvalidInput(format!(
            "expected {} breakpoints for n = {n}, got {}",
            2 * n,
            breakpoints.len()
        )));
    }
    let shape = StepBoundary::new(breakpoints.to_vec(), vec![0.0; 2 * n])?;
    let intervals: Vec<(f64, f64)> = (0..2 * n).map(|j| shape.interval(j)).collect();

    let mut rows = vec![intervals.iter().map(|(a, b)| b - a).collect::<Vec<_>>()];
    let mut rhs = vec![0.0];
    for k in 1..=n {
        let k_f = k as f64;
        rows.push(
            intervals
                .iter()
                .map(|(a, b)| (k_f * b).sin() - (k_f * a).sin())
                .collect(),
        );
        rhs.push(if k == n { TAU * n as f64 } else { 0.0 });
        if k < n {
            rows.push(
                intervals
                    .iter()
                    .map(|(a, b)| (k_f * b).cos() - (k_f * a).cos())
                    .collect(),
            );
            rhs.push(0.0);
        }
    }
    let solution = linalg::solve(&rows, &rhs)?;
    StepBoundary::new(breakpoints.to_vec(), solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Composite Simpson quadrature of `h e^{-ik theta}` over each constant piece.
    fn quadrature(h: &StepBoundary, k: usize) -> Complex64 {
        let panels = 4000;
        let f = |t: f64| Complex64::from_polar(1.0, -(k as f64) * t);
        (0..h.d.len())
            .map(|j| {
                let (a, b) = h.interval(j);
                let dx = (b - a) / panels as f64;
                let inner: Complex64 = (1..panels)
                    .map(|i| f(a + i as f64 * dx) * if i % 2 == 1 { 4.0 } else { 2.0 })
                    .sum();
                (f(a) + f(b) + inner) * (dx / 3.0) * h.d[j]
            })
            .sum::<Complex64>()
            / TAU
    }

    #[test]
    fn square_wave_example() {
        let h = solve_step_function(1, &[-PI / 2.0, PI / 2.0]).unwrap();
        assert!((h.d[0] - PI / 2.0).abs() < 1e-12);
        assert!((h.d[1] + PI / 2.0).abs() < 1e-12);
        let c1 = h.fourier_coefficient(1);
        assert!((c1 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((quadrature(&h, 1) - c1).norm() < 1e-8);
    }

    #[test]
    fn value_respects_periodic_intervals() {
        let h = StepBoundary::new(vec![-1.0, 1.0], vec![2.0, -3.0]).unwrap();
        assert_eq!(h.value(0.0), 2.0);
        assert_eq!(h.value(2.0), -3.0);
        assert_eq!(h.value(-2.0), -3.0);
        assert_eq!(h.value(TAU), 2.0);
    }

    #[test]
    fn near_equispaced_order_two_alternates() {
        let eps0 = 0.125;
        let alpha0 = 0.4;
        let alphas: Vec<f64> = (1..=5).map(|j| alpha0 + (j as f64 - 3.0) * eps0).collect();
        let beta: Vec<f64> = alphas.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let h = solve_step_function(2, &beta).unwrap();
        assert!(h.fourier_coefficient(0).norm() < 1e-12);
        assert!(h.fourier_coefficient(1).norm() < 1e-9);
        assert!((h.fourier_coefficient(2).re - 1.0).abs() < 1e-9);
        for j in 0..4 {
            assert!(h.d[j] * h.d[(j + 3) % 4] < 0.0, "{:?}", h.d);
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let h = StepBoundary::new(vec![0.1, 1.3, 2.0, 4.5], vec![1.0, -2.0, 0.5, -0.25]).unwrap();
        for k in 0..6 {
            assert!((h.fourier_coefficient(k) - quadrature(&h, k)).norm() < 1e-8);
        }
    }
}
