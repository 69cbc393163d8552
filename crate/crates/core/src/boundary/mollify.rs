use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{DiracComb, FourierCoefficients, SampledBoundary, StepBoundary};
use crate::error::{Error, Result};

const NORMALIZATION_PANELS: usize = 1 << 14;
const CDF_NODES: usize = 4096;
const MULTIPLIER_PANELS: usize = 1024;
/// Samples required per unit of `2 pi / epsilon`.
const SAMPLES_PER_WIDTH: f64 = 64.0;

fn raw_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        // the integrand vanishes to all orders at +-1, so the trapezoid rule is spectrally accurate
        let h = 2.0 / NORMALIZATION_PANELS as f64;
        (1..NORMALIZATION_PANELS)
            .map(|i| raw_bump(-1.0 + i as f64 * h))
            .sum::<f64>()
            * h
    })
}

/// Unit-mass bump `phi(x) = C exp(-1/(1-x^2))` supported on `(-1, 1)`.
pub fn bump(x: f64) -> f64 {
    raw_bump(x) / bump_mass()
}

fn cdf_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let h = 2.0 / (CDF_NODES - 1) as f64;
        // 3-point Gauss-Legendre per cell
        let nodes = [-(0.6_f64).sqrt(), 0.0, (0.6_f64).sqrt()];
        let weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        let mut table = Vec::with_capacity(CDF_NODES);
        let mut acc = 0.0;
        table.push(0.0);
        for i in 0..CDF_NODES - 1 {
            let mid = -1.0 + (i as f64 + 0.5) * h;
            acc += nodes
                .iter()
                .zip(weights)
                .map(|(t, w)| w * bump(mid + 0.5 * h * t))
                .sum::<f64>()
                * 0.5
                * h;
            table.push(acc);
        }
        table
    })
}

/// `Phi(x) = int_{-1}^{x} phi`, by cubic Hermite interpolation of a
/// precomputed table using `phi` itself as the derivative.
pub fn bump_cdf(x: f64) -> f64 {
    if x <= -1.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let table = cdf_table();
    let h = 2.0 / (CDF_NODES - 1) as f64;
    let pos = (x + 1.0) / h;
    let i = (pos.floor() as usize).min(CDF_NODES - 2);
    let t = pos - i as f64;
    let (x0, x1) = (-1.0 + i as f64 * h, -1.0 + (i + 1) as f64 * h);
    let (p0, p1) = (table[i], table[i + 1]);
    let (m0, m1) = (bump(x0) * h, bump(x1) * h);
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1
}

fn bump_samples() -> &'static [f64] {
    static SAMPLES: OnceLock<Vec<f64>> = OnceLock::new();
    SAMPLES.get_or_init(|| {
        let h = 2.0 / MULTIPLIER_PANELS as f64;
        (1..MULTIPLIER_PANELS).map(|i| bump(-1.0 + i as f64 * h)).collect()
    })
}

/// `int phi_eps(t) e^{-ikt} dt = int phi(x) cos(k eps x) dx`, the factor by
/// which mollification multiplies the k-th Fourier coefficient.
pub fn bump_multiplier(epsilon: f64, k: usize) -> f64 {
    let h = 2.0 / MULTIPLIER_PANELS as f64;
    let freq = k as f64 * epsilon;
    bump_samples()
        .iter()
        .enumerate()
        .map(|(i, b)| b * (freq * (-1.0 + (i + 1) as f64 * h)).cos())
        .sum::<f64>()
        * h
}

/// [`bump_multiplier`] for `k = 0..=k_max`, using the Chebyshev recurrence
/// `cos((k+1)x) = 2 cos(x) cos(kx) - cos((k-1)x)` at each node.
pub fn bump_multipliers(epsilon: f64, k_max: usize) -> Vec<f64> {
    let h = 2.0 / MULTIPLIER_PANELS as f64;
    let mut out = vec![0.0; k_max + 1];
    for (i, &b) in bump_samples().iter().enumerate() {
        let x = -1.0 + (i + 1) as f64 * h;
        let c1 = (epsilon * x).cos();
        let (mut prev, mut cur) = (c1, 1.0);
        for slot in out.iter_mut() {
            *slot += b * cur;
            let next = 2.0 * c1 * cur - prev;
            prev = cur;
            cur = next;
        }
    }
    out.iter_mut().for_each(|v| *v *= h);
    out
}

/// Parameters of the smoothing used in the sharpness construction: mollifier
/// width `epsilon`, comb spacing `epsilon0` and perturbation weight `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MollifierSpec {
    pub epsilon: f64,
    pub epsilon0: f64,
    pub lambda: f64,
}

impl MollifierSpec {
    /// Requires `0 < epsilon < epsilon0 / 4` and `lambda > 0`.
    pub fn new(epsilon: f64, epsilon0: f64, lambda: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < epsilon0 / 4.0) {
            return Err(Error::InvalidInput(format!(
                "mollifier width {epsilon} must lie in (0, epsilon0/4) with epsilon0 = {epsilon0}"
            )));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self {
            epsilon,
            epsilon0,
            lambda,
        })
    }

    /// Additionally requires `epsilon0 <= 1/(2n)`.
    pub fn check_order(&self, n: usize) -> Result<()> {
        if self.epsilon0 > 1.0 / (2.0 * n as f64) + 1e-15 {
            return Err(Error::InvalidInput(format!(
                "comb spacing {} exceeds 1/(2n) for n = {n}",
                self.epsilon0
            )));
        }
        Ok(())
    }
}

/// Smallest power-of-two grid that resolves a mollifier of width `epsilon`.
pub fn required_samples(epsilon: f64) -> usize {
    ((SAMPLES_PER_WIDTH * TAU / epsilon).ceil() as usize)
        .next_power_of_two()
        .max(super::sampled::MIN_SAMPLES)
}

/// Boundary data that can be convolved with the bump.
pub trait Mollifiable: FourierCoefficients {
    /// `(phi_eps * g)(theta)`.
    fn mollified_value(&self, theta: f64, epsilon: f64) -> f64;

    /// Checks that the mollifier does not merge features of the data.
    fn check_width(&self, epsilon: f64) -> Result<()>;
}

/// Signed distance from `b` to `a` wrapped into `(-pi, pi]`.
fn wrapped_offset(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

impl Mollifiable for DiracComb {
    fn mollified_value(&self, theta: f64, epsilon: f64) -> f64 {
        self.atoms
            .iter()
            .map(|&(alpha, c)| c * bump(wrapped_offset(theta, alpha) / epsilon) / epsilon)
            .sum()
    }

    fn check_width(&self, epsilon: f64) -> Result<()> {
        if epsilon >= PI {
            return Err(Error::InvalidInput("mollifier wider than the circle".into()));
        }
        Ok(())
    }
}

impl Mollifiable for StepBoundary {
    fn mollified_value(&self, theta: f64, epsilon: f64) -> f64 {
        let m = self.beta.len();
        for j in 0..m {
            let t = wrapped_offset(theta, self.beta[j]);
            if t.abs() < epsilon {
                let before = self.d[(j + m - 1) % m];
                return before + (self.d[j] - before) * bump_cdf(t / epsilon);
            }
        }
        self.value(theta)
    }

    fn check_width(&self, epsilon: f64) -> Result<()> {
        let shortest = (0..self.beta.len())
            .map(|j| {
                let (a, b) = self.interval(j);
                b - a
            })
            .fold(f64::INFINITY, f64::min);
        if shortest <= 2.0 * epsilon {
            return Err(Error::InvalidInput(format!(
                "mollifier width {epsilon} overlaps neighbouring breakpoints (shortest piece {shortest})"
            )));
        }
        Ok(())
    }
}

/// Exact Fourier coefficients of `phi_eps * g`.
#[derive(Debug, Clone)]
pub struct Mollified<'a, B: ?Sized> {
    pub boundary: &'a B,
    pub epsilon: f64,
}

impl<B: FourierCoefficients + ?Sized> FourierCoefficients for Mollified<'_, B> {
    fn fourier_coefficient(&self, k: usize) -> Complex64 {
        self.boundary.fourier_coefficient(k) * bump_multiplier(self.epsilon, k)
    }

    fn fourier_coefficients(&self, k_max: usize) -> Vec<Complex64> {
        self.boundary
            .fourier_coefficients(k_max)
            .into_iter()
            .zip(bump_multipliers(self.epsilon, k_max))
            .map(|(c, m)| c * m)
            .collect()
    }
}

/// Samples `phi_eps * g` on `samples` equispaced angles.
pub fn mollify<B: Mollifiable + ?Sized>(boundary: &B, spec: &MollifierSpec, samples: usize) -> Result<SampledBoundary> {
    let required = required_samples(spec.epsilon);
    if samples < required || !samples.is_power_of_two() {
        return Err(Error::UnderResolvedGrid {
            samples,
            width: spec.epsilon,
            required,
        });
    }
    boundary.check_width(spec.epsilon)?;
    SampledBoundary::from_fn(samples, |t| boundary.mollified_value(t, spec.epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{solve_delta_comb, solve_step_function};
    use crate::geometry::count_sign_changes;

    #[test]
    fn bump_has_unit_mass_and_cdf_is_consistent() {
        let n = 20000;
        let h = 2.0 / n as f64;
        let mass: f64 = (0..n).map(|i| bump(-1.0 + (i as f64 + 0.5) * h)).sum::<f64>() * h;
        assert!((mass - 1.0).abs() < 1e-10);
        assert!((bump_cdf(0.0) - 0.5).abs() < 1e-12);
        assert!((bump_cdf(0.3) + bump_cdf(-0.3) - 1.0).abs() < 1e-12);
        // Simpson on [-1, 0.5]
        let panels = 30000;
        let hs = 1.5 / panels as f64;
        let partial: f64 = (0..=panels)
            .map(|i| {
                let w = if i == 0 || i == panels {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * bump(-1.0 + i as f64 * hs)
            })
            .sum::<f64>()
            * hs
            / 3.0;
        assert!(
            (bump_cdf(0.5) - partial).abs() < 1e-10,
            "{} vs {partial}",
            bump_cdf(0.5)
        );
    }

    #[test]
    fn multiplier_tends_to_one() {
        for k in 0..=8 {
            let mut previous_gap = f64::INFINITY;
            for eps in [0.1, 0.01, 0.001] {
                let gap = (1.0 - bump_multiplier(eps, k)).abs();
                assert!(gap <= previous_gap);
                previous_gap = gap;
            }
            assert!(previous_gap < 1e-4);
        }
    }

    #[test]
    fn recurrence_matches_direct_multipliers() {
        let all = bump_multipliers(0.05, 200);
        for k in [0, 1, 7, 64, 199, 200] {
            assert!((all[k] - bump_multiplier(0.05, k)).abs() < 1e-12);
        }
    }

    #[test]
    fn multiplier_quadrature_is_converged() {
        // a much finer trapezoid rule agrees
        let fine = |eps: f64, k: usize| {
            let n = 40000;
            let h = 2.0 / n as f64;
            (1..n)
                .map(|i| {
                    let x = -1.0 + i as f64 * h;
                    bump(x) * (k as f64 * eps * x).cos()
                })
                .sum::<f64>()
                * h
        };
        for (eps, k) in [(0.1, 100), (0.06, 200), (0.01, 5)] {
            assert!((bump_multiplier(eps, k) - fine(eps, k)).abs() < 1e-12);
        }
    }

    #[test]
    fn mollified_unit_mass_integrates_to_one() {
        let comb = DiracComb::new(vec![(0.0, TAU)]).unwrap();
        let spec = MollifierSpec::new(0.05, 0.25, 1.0).unwrap();
        let samples = required_samples(spec.epsilon);
        let g = mollify(&comb, &spec, samples).unwrap();
        let integral: f64 = g.values.iter().sum::<f64>() / samples as f64;
        assert!((integral - 1.0).abs() < 1e-8, "{integral}");
    }

    #[test]
    fn sampled_coefficients_match_multiplier() {
        let comb = solve_delta_comb(1, &[-0.25, 0.0, 0.25]).unwrap();
        let spec = MollifierSpec::new(0.05, 0.25, 1.0).unwrap();
        let g = mollify(&comb, &spec, required_samples(spec.epsilon)).unwrap();
        let exact = Mollified {
            boundary: &comb,
            epsilon: spec.epsilon,
        };
        let fft = g.fourier_coefficients(12);
        for (k, c) in fft.iter().enumerate() {
            assert!((c - exact.fourier_coefficient(k)).norm() < 1e-8, "k = {k}");
        }
    }

    #[test]
    fn mollified_step_coefficients_match_multiplier() {
        let step = solve_step_function(1, &[-0.125, 0.125]).unwrap();
        let spec = MollifierSpec::new(0.02, 0.25, 1.0).unwrap();
        let g = mollify(&step, &spec, required_samples(spec.epsilon)).unwrap();
        let exact = Mollified {
            boundary: &step,
            epsilon: spec.epsilon,
        };
        let fft = g.fourier_coefficients(10);
        for (k, c) in fft.iter().enumerate() {
            assert!((c - exact.fourier_coefficient(k)).norm() < 1e-8, "k = {k}");
        }
    }

    #[test]
    fn mollified_order_one_comb_changes_sign_twice() {
        let comb = solve_delta_comb(1, &[-0.25, 0.0, 0.25]).unwrap();
        let spec = MollifierSpec::new(0.25 / 8.0, 0.25, 1e-3).unwrap();
        let g = mollify(&comb, &spec, required_samples(spec.epsilon)).unwrap();
        assert_eq!(count_sign_changes(&g, 1e-12).unwrap(), 2);
    }

    #[test]
    fn under_resolved_grid_is_rejected() {
        let comb = DiracComb::new(vec![(0.0, 1.0)]).unwrap();
        let spec = MollifierSpec::new(0.01, 0.25, 1.0).unwrap();
        let err = mollify(&comb, &spec, 1024).unwrap_err();
        assert!(matches!(err, Error::UnderResolvedGrid { .. }));
    }
}
