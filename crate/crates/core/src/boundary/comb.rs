use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{wrap_angle, FourierCoefficients};
use crate::error::{Error, Result};
use crate::linalg;

const ANGLE_TOL: f64 = 1e-12;

/// Finite sum of point masses `sum_j c_j delta_{alpha_j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracComb {
    /// `(alpha_j, c_j)` pairs.
    pub atoms: Vec<(f64, f64)>,
}

impl DiracComb {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("Dirac comb needs at least one atom".into()));
        }
        if atoms.iter().any(|(a, c)| !a.is_finite() || !c.is_finite()) {
            return Err(Error::InvalidInput("Dirac comb atoms must be finite".into()));
        }
        let angles: Vec<f64> = atoms.iter().map(|a| a.0).collect();
        check_distinct(&angles)?;
        Ok(Self { atoms })
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.0)
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.1)
    }

    /// True when consecutive weights (in the given order) have opposite signs,
    /// the sign pattern of data that changes sign between every pair of atoms.
    pub fn alternates(&self) -> bool {
        self.atoms.windows(2).all(|w| w[0].1 * w[1].1 < 0.0)
    }
}

impl FourierCoefficients for DiracComb {
    fn fourier_coefficient(&self, k: usize) -> Complex64 {
        let k = k as f64;
        self.atoms
            .iter()
            .map(|&(alpha, c)| c * Complex64::from_polar(1.0, -k * alpha))
            .sum::<Complex64>()
            / TAU
    }
}

pub(super) fn check_distinct(angles: &[f64]) -> Result<()> {
    for (i, &a) in angles.iter().enumerate() {
        for &b in &angles[i + 1..] {
            let d = wrap_angle(a - b);
            if d < ANGLE_TOL || TAU - d < ANGLE_TOL {
                return Err(Error::CoincidentAngles { first: a, second: b });
            }
        }
    }
    Ok(())
}

/// Weights of the comb on `2n+1` given angles whose Fourier coefficients vanish
/// for `0 <= k < n` and satisfy `2pi g^(n) = 1`.
///
/// The real system has rows `sum c_j = 0`, `sum c_j cos(k alpha_j) = 0` and
/// `sum c_j sin(k alpha_j) = 0` for `1 <= k < n`, then
/// `sum c_j cos(n alpha_j) = 1` and `sum c_j sin(n alpha_j) = 0`.
pub fn solve_delta_comb(n: usize, angles: &[f64]) -> Result<DiracComb> {
    if n == 0 {
        return Err(Error::InvalidInput("vanishing order must be at least 1".into()));
    }
    if angles.len() != 2 * n + 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} angles for n = {n}, got {}",
            2 * n + 1,
            angles.len()
        )));
    }
    check_distinct(angles)?;
    let mut rows = vec![vec![1.0; angles.len()]];
    let mut rhs = vec![0.0];
    for k in 1..=n {
        let k_f = k as f64;
        rows.push(angles.iter().map(|a| (k_f * a).cos()).collect());
        rhs.push(if k == n { 1.0 } else { 0.0 });
        rows.push(angles.iter().map(|a| (k_f * a).sin()).collect());
        rhs.push(0.0);
    }
    let solution = linalg::solve(&rows, &rhs)?;
    DiracComb::new(angles.iter().copied().zip(solution).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Weights from the inverse-Vandermonde closed form:
    /// e^{in alpha_j} c_j = (1 + prod_{m != j} e^{-i alpha_m}) / prod_{m != j} (e^{-i alpha_j} - e^{-i alpha_m}).
    fn closed_form(n: usize, angles: &[f64]) -> Vec<f64> {
        let e = |a: f64| Complex64::from_polar(1.0, -a);
        (0..angles.len())
            .map(|j| {
                let others = (0..angles.len()).filter(|&m| m != j);
                let prod: Complex64 = others.clone().map(|m| e(angles[m])).product();
                let denom: Complex64 = others.map(|m| e(angles[j]) - e(angles[m])).product();
                let value =
                    (Complex64::new(1.0, 0.0) + prod) / denom * Complex64::from_polar(1.0, -(n as f64) * angles[j]);
                value.re
            })
            .collect()
    }

    #[test]
    fn three_atom_example() {
        let comb = solve_delta_comb(1, &[-PI / 3.0, 0.0, PI / 3.0]).unwrap();
        let w: Vec<f64> = comb.weights().collect();
        for (got, want) in w.iter().zip([-1.0, 2.0, -1.0]) {
            assert!((got - want).abs() < 1e-12, "{w:?}");
        }
        assert!(comb.alternates());
    }

    #[test]
    fn coincident_angles_are_rejected() {
        let err = solve_delta_comb(1, &[0.0, 1.0, TAU]).unwrap_err();
        assert!(matches!(err, Error::CoincidentAngles { .. }));
    }

    #[test]
    fn closed_form_matches_solve_on_equispaced_n2() {
        let angles: Vec<f64> = (0..5).map(|j| 0.3 + 0.2 * j as f64).collect();
        let solved: Vec<f64> = solve_delta_comb(2, &angles).unwrap().weights().collect();
        for (a, b) in solved.iter().zip(closed_form(2, &angles)) {
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
        }
    }

    fn arb_angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.2..1.0f64, 2 * n + 1).prop_map(|gaps| {
            let total: f64 = gaps.iter().sum();
            let mut acc = 0.0;
            gaps.iter()
                .map(|g| {
                    acc += g / total * (TAU - 0.3);
                    acc
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn defining_equations_hold(n in 1usize..=3, seed_angles in arb_angles(3)) {
            let angles = &seed_angles[..2 * n + 1];
            let comb = solve_delta_comb(n, angles).unwrap();
            let sum: f64 = comb.weights().sum();
            let scale: f64 = comb.weights().map(f64::abs).sum();
            prop_assert!(sum.abs() <= 1e-12 * scale.max(1.0));
            for k in 1..n {
                prop_assert!(comb.fourier_coefficient(k).norm() <= 1e-12 * scale.max(1.0));
            }
            let top = comb.fourier_coefficient(n) * TAU;
            prop_assert!((top - Complex64::new(1.0, 0.0)).norm() <= 1e-10 * scale.max(1.0));
        }

        #[test]
        fn closed_form_agrees(n in 1usize..=3, seed_angles in arb_angles(3)) {
            let angles = &seed_angles[..2 * n + 1];
            let solved: Vec<f64> = solve_delta_comb(n, angles).unwrap().weights().collect();
            let scale = solved.iter().map(|c| c.abs()).fold(1.0, f64::max);
            for (a, b) in solved.iter().zip(closed_form(n, angles)) {
                prop_assert!((a - b).abs() <= 1e-10 * scale);
            }
        }

        #[test]
        fn next_coefficient_identity(n in 1usize..=3, seed_angles in arb_angles(3)) {
            // 2pi g^(n+1) = sum_j e^{-i alpha_j} + e^{-i sum_j alpha_j}
            let angles = &seed_angles[..2 * n + 1];
            let comb = solve_delta_comb(n, angles).unwrap();
            let lhs = comb.fourier_coefficient(n + 1) * TAU;
            let rhs: Complex64 = angles.iter().map(|&a| Complex64::from_polar(1.0, -a)).sum::<Complex64>()
                + Complex64::from_polar(1.0, -angles.iter().sum::<f64>());
            let scale = comb.weights().map(f64::abs).sum::<f64>().max(1.0);
            prop_assert!((lhs - rhs).norm() <= 1e-9 * scale, "{lhs} vs {rhs}");
        }
    }
}
