//! Truncated power series of holomorphic functions `w` at the origin.
//!
//! A harmonic function on the disk is carried around as `u = Re w` with
//! `w(z) = sum_k c_k z^k`. Everything downstream (curvature, frequency,
//! tracing) reads `u` and its derivatives through [`HolomorphicFunction`],
//! which is implemented here for [`PowerSeries`] and elsewhere for closed-form
//! functions that are singular on the unit circle.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of retained coefficients beyond the constant term.
pub const DEFAULT_TRUNCATION: usize = 64;
/// Distance kept from the unit circle when evaluating a series.
pub const DEFAULT_BOUNDARY_MARGIN: f64 = 0.02;
/// Relative tolerance used by [`PowerSeries::vanishing_order`].
pub const DEFAULT_VANISHING_TOL: f64 = 1e-10;

/// Value together with first and second complex derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub first: Complex64,
    pub second: Complex64,
}

impl Jet {
    /// `u = Re w`.
    pub fn harmonic_value(&self) -> f64 {
        self.value.re
    }

    /// `(u_x, u_y)`, using `w' = u_x - i u_y`.
    pub fn gradient(&self) -> (f64, f64) {
        (self.first.re, -self.first.im)
    }
}

/// A holomorphic function on (part of) the unit disk whose real part is the
/// harmonic function under study.
pub trait HolomorphicFunction: Sync {
    /// `w`, `w'` and `w''` at `z`. Callers are responsible for staying inside
    /// [`HolomorphicFunction::domain_radius`].
    fn jet(&self, z: Complex64) -> Jet;

    /// Radius of the closed disk on which [`HolomorphicFunction::jet`] is trustworthy.
    fn domain_radius(&self) -> f64;

    /// Taylor coefficients `c_0..=c_k` at the origin.
    fn taylor_coefficients(&self, order: usize) -> Vec<Complex64>;

    fn value(&self, z: Complex64) -> Complex64 {
        self.jet(z).value
    }

    fn harmonic_value(&self, z: Complex64) -> f64 {
        self.jet(z).value.re
    }
}

fn default_safe_radius() -> f64 {
    1.0 - DEFAULT_BOUNDARY_MARGIN
}

/// Truncated Taylor expansion `w(z) = sum_{k=0}^{K} c_k z^k`.
///
/// `c_k = a_k e^{i theta_k}`; modulus and phase are available through
/// [`PowerSeries::modulus`] and [`PowerSeries::phase`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    #[serde(skip, default = "default_safe_radius")]
    safe_radius: f64,
}

impl PowerSeries {
    /// Builds a series from `c_0..=c_K`. An empty vector is rejected.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "power series needs at least one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("power series coefficients must be finite".into()));
        }
        Ok(Self {
            coeffs,
            safe_radius: default_safe_radius(),
        })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The monomial `scale * z^n`.
    pub fn monomial(n: usize, scale: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = scale;
        Self {
            coeffs,
            safe_radius: default_safe_radius(),
        }
    }

    /// Overrides the evaluation radius. Polynomials are exact everywhere, so
    /// callers may widen it for them; truncated infinite series should keep
    /// the default margin.
    pub fn with_safe_radius(mut self, radius: f64) -> Self {
        self.safe_radius = radius;
        self
    }

    pub fn safe_radius(&self) -> f64 {
        self.safe_radius
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `K`, the index of the last stored coefficient.
    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_k`, or zero past the truncation.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `a_k = |c_k|`.
    pub fn modulus(&self, k: usize) -> f64 {
        self.coeff(k).norm()
    }

    /// `theta_k = arg c_k`.
    pub fn phase(&self, k: usize) -> f64 {
        self.coeff(k).arg()
    }

    /// `w^{(k)}(0) = k! c_k`.
    pub fn derivative_at_origin(&self, k: usize) -> Complex64 {
        self.coeff(k) * factorial(k)
    }

    fn check_point(&self, z: Complex64) -> Result<()> {
        if z.norm() > self.safe_radius + 1e-15 {
            return Err(Error::OutsideSafeDisk {
                z,
                radius: self.safe_radius,
            });
        }
        Ok(())
    }

    /// `w(z)` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(u_x, u_y)` for `u = Re w`.
    pub fn gradient(&self, z: Complex64) -> Result<(f64, f64)> {
        self.check_point(z)?;
        Ok(self.jet(z).gradient())
    }

    /// Series of the `order`-th derivative `w^{(order)}`.
    pub fn derivative(&self, order: usize) -> Result<PowerSeries> {
        let truncation = self.truncation_order();
        if order == 0 {
            return Ok(self.clone());
        }
        if order > truncation {
            return Err(Error::DerivativeOrder { order, truncation });
        }
        let coeffs = (order..=truncation)
            .map(|k| self.coeffs[k] * falling_factorial(k, order))
            .collect();
        Ok(Self {
            coeffs,
            safe_radius: self.safe_radius,
        })
    }

    /// Smallest `k >= 1` with `|c_k| > tol * max_j |c_j|`.
    pub fn vanishing_order(&self, tol: f64) -> Result<usize> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        if scale == 0.0 {
            return Err(Error::ConstantFunction { tol });
        }
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| c.norm() > tol * scale)
            .map(|(k, _)| k)
            .ok_or(Error::ConstantFunction { tol })
    }

    /// Keeps `c_0..=c_order`, padding with zeros if needed.
    pub fn truncate(&self, order: usize) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self {
            coeffs,
            safe_radius: self.safe_radius,
        }
    }

    /// `z -> w(e^{i alpha} z)`.
    pub fn rotate(&self, alpha: f64) -> PowerSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * Complex64::from_polar(1.0, alpha * k as f64))
            .collect();
        Self {
            coeffs,
            safe_radius: self.safe_radius,
        }
    }

    /// `z -> w(r z)`.
    pub fn dilate(&self, r: f64) -> PowerSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * r.powi(k as i32))
            .collect();
        Self {
            coeffs,
            safe_radius: self.safe_radius,
        }
    }

    /// Truncated product, keeping terms up to `order`.
    pub fn mul_truncated(&self, other: &PowerSeries, order: usize) -> PowerSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self {
            coeffs,
            safe_radius: self.safe_radius.min(other.safe_radius),
        }
    }

    /// Coefficients of `self(inner(z))` up to `order`, by Horner's rule in the
    /// ring of truncated series. `inner` may have a nonzero constant term as
    /// long as it stays inside the disk of convergence of `self`.
    pub fn compose(&self, inner: &PowerSeries, order: usize) -> PowerSeries {
        let mut acc = PowerSeries {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
            safe_radius: inner.safe_radius,
        };
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_truncated(inner, order);
            acc.coeffs[0] += c;
        }
        acc.safe_radius = inner.safe_radius;
        acc
    }
}

impl HolomorphicFunction for PowerSeries {
    fn jet(&self, z: Complex64) -> Jet {
        let zero = Complex64::new(0.0, 0.0);
        let (mut value, mut first, mut second) = (zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            second = second * z + first * 2.0;
            first = first * z + value;
            value = value * z + c;
        }
        Jet { value, first, second }
    }

    fn domain_radius(&self) -> f64 {
        self.safe_radius
    }

    fn taylor_coefficients(&self, order: usize) -> Vec<Complex64> {
        (0..=order).map(|k| self.coeff(k)).collect()
    }
}

impl Add for PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: PowerSeries) -> PowerSeries {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        PowerSeries {
            coeffs,
            safe_radius: self.safe_radius.min(rhs.safe_radius),
        }
    }
}

impl Sub for PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: PowerSeries) -> PowerSeries {
        self + (-rhs)
    }
}

impl Neg for PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        self * -1.0
    }
}

impl Mul<Complex64> for PowerSeries {
    type Output = PowerSeries;

    fn mul(mut self, rhs: Complex64) -> PowerSeries {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
        self
    }
}

impl Mul<f64> for PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: f64) -> PowerSeries {
        self * Complex64::new(rhs, 0.0)
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `k (k-1) ... (k-order+1)`.
pub(crate) fn falling_factorial(k: usize, order: usize) -> f64 {
    (0..order).map(|j| (k - j) as f64).product()
}

/// Binomial coefficient as a float; exact for the sizes used here.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}
