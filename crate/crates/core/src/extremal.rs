//! Extremal functions for the curvature bound and the smoothed sequences that
//! approach it from admissible boundary data.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{
    poisson_extend, required_samples, solve_delta_comb, solve_step_function, DiracComb, FourierCoefficients,
    Mollifiable, Mollified, MollifierSpec, SampledBoundary, StepBoundary,
};
use crate::error::{Error, Result};
use crate::geometry::{curvature_at_origin, curvature_report, parity_constant, CurvatureReport};
use crate::series::{binomial, HolomorphicFunction, Jet, PowerSeries};

const PHI0_TOL: f64 = 1e-12;

/// The `n` admissible base angles `k pi / n + l pi / (2n(n+1))`, `k = 0..n`,
/// with `l = 0` for odd `n` and `l = 1` for even `n`.
pub fn admissible_phi0(n: usize) -> Vec<f64> {
    let n_f = n as f64;
    (0..n).map(|k| k as f64 * PI / n_f + parity_constant(n)).collect()
}

/// Order `n` and base angle of an extremal function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub n: usize,
    pub phi0: f64,
    /// Position of `phi0` in [`admissible_phi0`].
    pub k_index: usize,
}

impl ExtremalSpec {
    /// Rejects base angles that are not admissible for `n`.
    pub fn new(n: usize, phi0: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("vanishing order must be at least 1".into()));
        }
        admissible_phi0(n)
            .iter()
            .position(|a| (a - phi0).abs() <= PHI0_TOL)
            .map(|k_index| Self { n, phi0, k_index })
            .ok_or_else(|| Error::InvalidInput(format!("phi0 = {phi0} is not admissible for n = {n}")))
    }

    pub fn from_index(n: usize, k_index: usize) -> Result<Self> {
        if n == 0 || k_index >= n {
            return Err(Error::InvalidInput(format!(
                "phi0 index {k_index} out of range for n = {n}"
            )));
        }
        Ok(Self {
            n,
            phi0: admissible_phi0(n)[k_index],
            k_index,
        })
    }

    /// `k_index = 0`.
    pub fn first(n: usize) -> Self {
        Self::from_index(n, 0).expect("n >= 1")
    }

    /// `a = e^{-i phi0}`.
    fn a(&self) -> Complex64 {
        Complex64::from_polar(1.0, -self.phi0)
    }

    /// `2 cos(n phi0) e^{-i(n+1) phi0}`.
    fn second_weight(&self) -> Complex64 {
        let n = self.n as f64;
        Complex64::from_polar(2.0 * (n * self.phi0).cos(), -(n + 1.0) * self.phi0)
    }

    /// The branch through the origin that attains the bound:
    /// `q = n - (n+1)/2 + k` for odd `n`, `q = n - n/2 + k` for even `n`.
    pub fn attaining_branch(&self) -> usize {
        let n = self.n;
        if n % 2 == 1 {
            n - n.div_ceil(2) + self.k_index
        } else {
            n - n / 2 + self.k_index
        }
    }
}

/// Taylor coefficients of
/// `w(z) = z^n / (1 - az)^{2n} + 2 cos(n phi0) e^{-i(n+1) phi0} z^{n+1} / (1 - az)^{2n+1}`
/// up to `z^K`, from the binomial series.
pub fn extremal_series(spec: &ExtremalSpec, truncation: usize) -> Result<PowerSeries> {
    let n = spec.n;
    if truncation < n + 1 {
        return Err(Error::InvalidInput(format!(
            "truncation {truncation} must be at least n + 1 = {}",
            n + 1
        )));
    }
    let a = spec.a();
    let weight = spec.second_weight();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); truncation + 1];
    let mut a_pow = Complex64::new(1.0, 0.0);
    for j in 0..=truncation - n {
        coeffs[n + j] += a_pow * binomial(j + 2 * n - 1, j);
        if n + 1 + j <= truncation {
            coeffs[n + 1 + j] += weight * a_pow * binomial(j + 2 * n, j);
        }
        a_pow *= a;
    }
    PowerSeries::new(coeffs)
}

/// Closed-form evaluation of the extremal function, valid up to the
/// singular point `e^{i phi0}` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalFunction {
    pub spec: ExtremalSpec,
    radius: f64,
}

impl ExtremalFunction {
    /// Radius up to which the closed form is evaluated.
    pub const DEFAULT_RADIUS: f64 = 0.9999;

    pub fn new(spec: ExtremalSpec) -> Self {
        Self {
            spec,
            radius: Self::DEFAULT_RADIUS,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }
}

/// Value and two derivatives of `z^m (1 - az)^{-p}`.
fn monomial_over_power(z: Complex64, a: Complex64, m: usize, p: usize) -> [Complex64; 3] {
    let one = Complex64::new(1.0, 0.0);
    let (m_f, p_f) = (m as f64, p as f64);
    let base = one - a * z;
    let inv = base.inv();
    let d0 = inv.powi(p as i32);
    let d1 = d0 * inv * (a * p_f);
    let d2 = d1 * inv * (a * (p_f + 1.0));
    let zp = |k: usize| {
        if k > m {
            Complex64::new(0.0, 0.0)
        } else {
            z.powi((m - k) as i32)
        }
    };
    let z0 = zp(0);
    let z1 = zp(1) * m_f;
    let z2 = zp(2) * (m_f * (m_f - 1.0));
    [z0 * d0, z1 * d0 + z0 * d1, z2 * d0 + z1 * d1 * 2.0 + z0 * d2]
}

impl HolomorphicFunction for ExtremalFunction {
    fn jet(&self, z: Complex64) -> Jet {
        let n = self.spec.n;
        let a = self.spec.a();
        let w = self.spec.second_weight();
        let first = monomial_over_power(z, a, n, 2 * n);
        let second = monomial_over_power(z, a, n + 1, 2 * n + 1);
        Jet {
            value: first[0] + w * second[0],
            first: first[1] + w * second[1],
            second: first[2] + w * second[2],
        }
    }

    fn domain_radius(&self) -> f64 {
        self.radius
    }

    fn taylor_coefficients(&self, order: usize) -> Vec<Complex64> {
        extremal_series(&self.spec, order.max(self.spec.n + 1))
            .expect("truncation checked")
            .coeffs()[..=order]
            .to_vec()
    }
}

/// Branch curvatures at the origin of the extremal function, with the branch
/// that attains the bound recorded in `attaining_branch`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub spec: ExtremalSpec,
    pub report: CurvatureReport,
    pub attaining_branch: usize,
    /// `|kappa|` on the attaining branch.
    pub attained: f64,
    /// `bound - attained`.
    pub gap: f64,
}

/// Evaluates the branch curvatures at the origin of the extremal function.
/// Only `c_n` and `c_{n+1}` enter, and the binomial expansion gives them exactly.
pub fn verify_extremal_curvature(spec: &ExtremalSpec) -> Result<ExtremalReport> {
    let series = extremal_series(spec, spec.n + 1)?;
    let report = curvature_report(&series, 1.0)?;
    let q = spec.attaining_branch();
    let attained = curvature_at_origin(&series, q)?.abs();
    Ok(ExtremalReport {
        spec: *spec,
        gap: report.bound - attained,
        report,
        attaining_branch: q,
        attained,
    })
}

/// The harmonic function of the order-one derivative comb concentrated at
/// `z = 1`, written as a rational function of `(x, y)`:
/// `2(1 - x^2 - y^2)(x(1 - 2x + x^2 + y^2) - 4y^2) / (x^2 - 2x + y^2 + 1)^3`,
/// which is `2 Re(z(1+z)/(1-z)^3)`. With `+4y^2` in the last factor the
/// expression is not harmonic.
pub fn rational_extremal_eval(x: f64, y: f64) -> Result<f64> {
    let denom = x * x - 2.0 * x + y * y + 1.0;
    if denom <= 1e-300 {
        return Err(Error::SingularPoint {
            z: Complex64::new(x, y),
        });
    }
    let r2 = x * x + y * y;
    Ok(2.0 * (1.0 - r2) * (x * (1.0 - 2.0 * x + r2) - 4.0 * y * y) / denom.powi(3))
}

/// Boundary data of one member of the sharpness sequence: a Dirac comb on
/// `2n+1` equispaced angles around `alpha_0` plus `lambda` times a step
/// function changing sign between consecutive atoms, both mollified.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessConstruction {
    pub n: usize,
    pub spec: MollifierSpec,
    pub comb: DiracComb,
    pub step: StepBoundary,
}

impl SharpnessConstruction {
    /// Atoms at `alpha_j = alpha_0 + (j - n - 1) epsilon_0`, `j = 1..=2n+1`,
    /// breakpoints at the midpoints between consecutive atoms.
    pub fn new(n: usize, spec: MollifierSpec) -> Result<Self> {
        spec.check_order(n)?;
        let alpha0 = parity_constant(n);
        let angles: Vec<f64> = (1..=2 * n + 1)
            .map(|j| alpha0 + (j as f64 - n as f64 - 1.0) * spec.epsilon0)
            .collect();
        let comb = solve_delta_comb(n, &angles)?;
        let breakpoints: Vec<f64> = angles.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let mut step = solve_step_function(n, &breakpoints)?;
        // The piece [beta_j, beta_{j+1}) holds atom j+1; match its sign so the
        // perturbation only fills the gaps the mollified comb leaves at zero.
        if step.d[0] * comb.atoms[1].1 < 0.0 {
            step.d.iter_mut().for_each(|d| *d = -*d);
        }
        Ok(Self { n, spec, comb, step })
    }

    /// `phi_eps * (g + lambda h)` on a grid that resolves the mollifier.
    pub fn sampled_boundary(&self) -> Result<SampledBoundary> {
        let eps = self.spec.epsilon;
        self.comb.check_width(eps)?;
        self.step.check_width(eps)?;
        let lambda = self.spec.lambda;
        SampledBoundary::from_fn(required_samples(eps), |t| {
            self.comb.mollified_value(t, eps) + lambda * self.step.mollified_value(t, eps)
        })
    }

    /// Taylor coefficients `c_k = 2 m_eps(k) (g^(k) + lambda h^(k))`.
    pub fn series(&self, truncation: usize) -> Result<PowerSeries> {
        poisson_extend(self, truncation)
    }
}

impl FourierCoefficients for SharpnessConstruction {
    fn fourier_coefficient(&self, k: usize) -> Complex64 {
        let eps = self.spec.epsilon;
        let g = Mollified {
            boundary: &self.comb,
            epsilon: eps,
        };
        let h = Mollified {
            boundary: &self.step,
            epsilon: eps,
        };
        g.fourier_coefficient(k) + h.fourier_coefficient(k) * self.spec.lambda
    }
}

/// Series of `u_{eps,lambda}` truncated at `K`.
pub fn sharpness_sequence(n: usize, spec: &MollifierSpec, truncation: usize) -> Result<PowerSeries> {
    SharpnessConstruction::new(n, *spec)?.series(truncation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::solve_derivative_comb;
    use crate::geometry::{count_sign_changes, curvature_bound};
    use approx::assert_abs_diff_eq;

    #[test]
    fn admissible_angles() {
        assert_eq!(admissible_phi0(1), vec![0.0]);
        let two = admissible_phi0(2);
        assert_abs_diff_eq!(two[0], PI / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(two[1], 7.0 * PI / 12.0, epsilon = 1e-15);
        let three = admissible_phi0(3);
        for (got, want) in three.iter().zip([0.0, PI / 3.0, 2.0 * PI / 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        assert!(ExtremalSpec::new(2, 0.0).is_err());
    }

    #[test]
    fn order_one_coefficients_are_squares() {
        let s = extremal_series(&ExtremalSpec::first(1), 30).unwrap();
        for k in 0..=30 {
            assert_abs_diff_eq!(
                (s.coeff(k) - Complex64::new((k * k) as f64, 0.0)).norm(),
                0.0,
                epsilon = 1e-9
            );
        }
        assert_abs_diff_eq!(s.derivative(2).unwrap().eval(Complex64::new(0.0, 0.0)).unwrap().re, 8.0);
        let v = extremal_series(&ExtremalSpec::first(1), 200)
            .unwrap()
            .eval(Complex64::new(0.5, 0.0))
            .unwrap();
        assert_abs_diff_eq!(v.re, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn leading_coefficient_is_one() {
        for n in 1..=5 {
            for spec in (0..n).map(|k| ExtremalSpec::from_index(n, k).unwrap()) {
                let s = extremal_series(&spec, 20).unwrap();
                assert_eq!(s.vanishing_order(1e-10).unwrap(), n);
                assert_abs_diff_eq!((s.coeff(n) - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn derivative_comb_extension_matches_expansion() {
        for n in 1..=4 {
            for spec in (0..n).map(|k| ExtremalSpec::from_index(n, k).unwrap()) {
                let from_comb = poisson_extend(&solve_derivative_comb(n, spec.phi0).unwrap(), 40).unwrap();
                let expanded = extremal_series(&spec, 40).unwrap();
                for k in 1..=40 {
                    let scale = (k as f64).powi(2 * n as i32);
                    assert!(
                        (from_comb.coeff(k) - expanded.coeff(k)).norm() <= 1e-10 * scale,
                        "n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_series() {
        for n in 1..=3 {
            let spec = ExtremalSpec::first(n);
            let f = ExtremalFunction::new(spec);
            let s = extremal_series(&spec, 400).unwrap();
            for z in [
                Complex64::new(0.2, 0.1),
                Complex64::new(-0.4, 0.3),
                Complex64::new(0.1, -0.5),
            ] {
                let a = f.jet(z);
                let b = s.jet(z);
                assert!((a.value - b.value).norm() < 1e-9 * b.value.norm().max(1.0));
                assert!((a.first - b.first).norm() < 1e-9 * b.first.norm().max(1.0));
                assert!((a.second - b.second).norm() < 1e-9 * b.second.norm().max(1.0));
            }
        }
    }

    #[test]
    fn attains_bound_for_small_orders() {
        for (n, want) in [
            (1, 8.0),
            (2, 3.0 * 3f64.sqrt()),
            (3, 16.0 / 3.0),
            (4, 5.0 * (PI / 10.0).cos()),
        ] {
            for k in 0..n {
                let r = verify_extremal_curvature(&ExtremalSpec::from_index(n, k).unwrap()).unwrap();
                assert_abs_diff_eq!(r.attained, want, epsilon = 1e-12);
                assert_abs_diff_eq!(r.report.max_abs_curvature(), want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rational_formula_examples() {
        assert_abs_diff_eq!(rational_extremal_eval(0.5, 0.0).unwrap(), 12.0, epsilon = 1e-12);
        assert_eq!(rational_extremal_eval(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(rational_extremal_eval(-1.0, 0.0).unwrap(), 0.0);
        assert!(matches!(
            rational_extremal_eval(1.0, 0.0),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn rational_formula_is_harmonic() {
        let h = 1e-3;
        for (x, y) in [(0.2, 0.4), (0.0, 0.3), (-0.3, 0.1), (0.5, -0.5)] {
            let u = |a: f64, b: f64| rational_extremal_eval(a, b).unwrap();
            let lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h);
            assert!(lap.abs() < 1e-2, "laplacian {lap} at ({x}, {y})");
        }
    }

    #[test]
    fn sharpness_member_has_2n_sign_changes() {
        for n in 1..=2 {
            let eps0 = 1.0 / (4.0 * n as f64);
            let spec = MollifierSpec::new(eps0 / 8.0, eps0, 1e-3).unwrap();
            let c = SharpnessConstruction::new(n, spec).unwrap();
            let g = c.sampled_boundary().unwrap();
            assert_eq!(count_sign_changes(&g, 1e-12).unwrap(), 2 * n);
        }
    }

    #[test]
    fn sharpness_member_stays_below_bound() {
        let eps0 = 0.25;
        let spec = MollifierSpec::new(eps0 / 32.0, eps0, 1e-4).unwrap();
        let s = sharpness_sequence(1, &spec, 16).unwrap();
        let r = curvature_report(&s, 1.0).unwrap();
        assert!(r.max_abs_curvature() < curvature_bound(1, 1.0));
        assert!(r.gap / curvature_bound(1, 1.0) < 0.05);
    }
}
