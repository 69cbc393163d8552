//! Disk automorphisms `psi(z) = e^{i theta} (z - p) / (1 - conj(p) z)` and the
//! transport of curvature bounds from the origin to an arbitrary point.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::ExtremalSpec;
use crate::geometry::{curvature_at_origin_gradient_normal, parity_constant};
use crate::series::{binomial, factorial, PowerSeries, DEFAULT_VANISHING_TOL};

/// Above this `|p|` the geometric expansion of `psi^{-1}` converges slowly and
/// [`pullback_series`] loses accuracy at moderate truncation orders.
pub const PULLBACK_WARNING_RADIUS: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

/// Automorphism of the unit disk sending `p` to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub p: Complex64,
    pub theta: f64,
}

impl MobiusMap {
    pub fn new(p: Complex64, theta: f64) -> Result<Self> {
        if !(p.norm() < 1.0) || !theta.is_finite() {
            return Err(Error::InvalidInput(format!("Mobius map needs |p| < 1, got p = {p}")));
        }
        Ok(Self { p, theta })
    }

    pub fn identity() -> Self {
        Self {
            p: Complex64::new(0.0, 0.0),
            theta: 0.0,
        }
    }

    /// The automorphism `psi^{-1}`, written in the same normal form:
    /// `p' = -p e^{i theta}`, `theta' = -theta`.
    pub fn inverse(&self) -> Self {
        Self {
            p: -self.p * self.rotation(),
            theta: -self.theta,
        }
    }

    fn rotation(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// Taylor coefficients of `t -> psi(p + t)` up to `t^order`; no constant term.
    pub fn local_expansion(&self, order: usize) -> PowerSeries {
        let s = 1.0 - self.p.norm_sqr();
        let ratio = self.p.conj() / s;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        let mut term = self.rotation() / s;
        for c in coeffs.iter_mut().skip(1) {
            *c = term;
            term *= ratio;
        }
        PowerSeries::new(coeffs).expect("finite coefficients")
    }

    /// Taylor coefficients of `psi^{-1}` at 0 up to `zeta^order`:
    /// `p` followed by `b (1 - |p|^2) (-conj(p) b)^{k-1}` with `b = e^{-i theta}`.
    pub fn inverse_expansion(&self, order: usize) -> PowerSeries {
        let b = self.rotation().conj();
        let ratio = -self.p.conj() * b;
        let mut coeffs = vec![self.p; order + 1];
        let mut term = b * (1.0 - self.p.norm_sqr());
        for c in coeffs.iter_mut().skip(1) {
            *c = term;
            term *= ratio;
        }
        PowerSeries::new(coeffs).expect("finite coefficients")
    }
}

/// `psi(z)` or `psi^{-1}(z)` for `|z| <= 1`.
pub fn apply(map: &MobiusMap, z: Complex64, direction: Direction) -> Result<Complex64> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::OutsideSafeDisk { z, radius: 1.0 });
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(match direction {
        Direction::Forward => map.rotation() * (z - map.p) / (one - map.p.conj() * z),
        Direction::Inverse => {
            let w = map.rotation().conj() * z;
            (w + map.p) / (one + map.p.conj() * w)
        }
    })
}

/// `4(n+1) r0 cos(n alpha_0) / ((r0^2 - |p|^2) n) + 2|p| / (r0^2 - |p|^2)`.
pub fn transported_bound(n: usize, p: Complex64, r0: f64) -> Result<f64> {
    let rho = p.norm();
    if n == 0 || !(rho < r0) {
        return Err(Error::InvalidInput(format!(
            "need n >= 1 and |p| < r0, got n = {n}, |p| = {rho}, r0 = {r0}"
        )));
    }
    let n_f = n as f64;
    let d = r0 * r0 - rho * rho;
    Ok((4.0 * (n_f + 1.0) * r0 * (n_f * parity_constant(n)).cos() / n_f + 2.0 * rho) / d)
}

/// Taylor coefficients at 0 of `w o psi^{-1}`, by Horner composition with the
/// geometric expansion of `psi^{-1}`. Accuracy degrades for `|p|` above
/// [`PULLBACK_WARNING_RADIUS`]; see [`pullback_loses_accuracy`].
pub fn pullback_series(series: &PowerSeries, map: &MobiusMap, truncation: usize) -> Result<PowerSeries> {
    if truncation > series.truncation_order() {
        return Err(Error::DerivativeOrder {
            order: truncation,
            truncation: series.truncation_order(),
        });
    }
    let inner = map.inverse_expansion(truncation);
    Ok(series
        .compose(&inner, truncation)
        .with_safe_radius(series.safe_radius()))
}

pub fn pullback_loses_accuracy(map: &MobiusMap) -> bool {
    map.p.norm() > PULLBACK_WARNING_RADIUS
}

/// Taylor coefficients of `t -> w(psi(p + t))`, the function `w o psi`
/// expanded about `p`. Exact in the first `order` coefficients because the
/// inner series has no constant term.
pub fn local_series_at(series: &PowerSeries, map: &MobiusMap, order: usize) -> PowerSeries {
    series.compose(&map.local_expansion(order), order)
}

/// Same leading data as [`local_series_at`] from the chain rule alone:
/// `W^{(n)}(p) = w^{(n)}(0) psi'^n` and
/// `W^{(n+1)}(p) = w^{(n+1)}(0) psi'^{n+1} + C(n+1, 2) w^{(n)}(0) psi'^{n-1} psi''`
/// with `psi'(p) = e^{i theta}/(1-|p|^2)` and `psi''(p) = 2 conj(p) e^{i theta}/(1-|p|^2)^2`.
/// Valid when `w` vanishes to order `n` at the origin.
pub fn chain_rule_series(series: &PowerSeries, map: &MobiusMap) -> Result<PowerSeries> {
    let n = series.vanishing_order(DEFAULT_VANISHING_TOL)?;
    let s = 1.0 - map.p.norm_sqr();
    let d1 = map.rotation() / s;
    let d2 = map.p.conj() * map.rotation() * (2.0 / (s * s));
    let wn = series.derivative_at_origin(n);
    let wn1 = series.derivative_at_origin(n + 1);
    let top = wn * d1.powi(n as i32);
    let next = wn1 * d1.powi(n as i32 + 1) + wn * d1.powi(n as i32 - 1) * d2 * binomial(n + 1, 2);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 2];
    coeffs[n] = top / factorial(n);
    coeffs[n + 1] = next / factorial(n + 1);
    PowerSeries::new(coeffs)
}

/// `theta = -j pi - arg p + (n+1)(q pi + pi/2)/n`.
pub fn equality_theta(n: usize, p: Complex64, q: usize, j: i64) -> f64 {
    let n_f = n as f64;
    let arg = if p == Complex64::new(0.0, 0.0) { 0.0 } else { p.arg() };
    -(j as f64) * PI - arg + (n_f + 1.0) * (q as f64 * PI + PI / 2.0) / n_f
}

/// Map placing the extremal function's attaining branch at `p` so that the
/// transported bound is attained: `q` is the attaining branch and `j` is
/// chosen with `(-1)^{j-1}` equal to the sign of its curvature against the
/// gradient.
pub fn equality_map(spec: &ExtremalSpec, series: &PowerSeries, p: Complex64) -> Result<MobiusMap> {
    let q = spec.attaining_branch();
    let kappa = curvature_at_origin_gradient_normal(series, q)?;
    let j = if kappa >= 0.0 { 1 } else { 2 };
    MobiusMap::new(p, equality_theta(spec.n, p, q, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curvature_at_origin;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn apply_examples() {
        let z = Complex64::new(0.3, -0.2);
        assert_eq!(apply(&MobiusMap::identity(), z, Direction::Forward).unwrap(), z);
        let m = MobiusMap::new(Complex64::new(0.2, 0.4), 1.1).unwrap();
        assert!(apply(&m, m.p, Direction::Forward).unwrap().norm() < 1e-16);
        let m = MobiusMap::new(Complex64::from_polar(0.5, 0.3), 0.0).unwrap();
        let image = apply(&m, Complex64::from_polar(1.0, PI / 3.0), Direction::Forward).unwrap();
        assert_abs_diff_eq!(image.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bound_examples() {
        assert_abs_diff_eq!(transported_bound(1, Complex64::new(0.0, 0.0), 1.0).unwrap(), 8.0);
        assert_abs_diff_eq!(
            transported_bound(1, Complex64::new(0.5, 0.0), 1.0).unwrap(),
            12.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            transported_bound(2, Complex64::new(0.0, 0.0), 1.0).unwrap(),
            3.0 * 3f64.sqrt(),
            epsilon = 1e-14
        );
        assert!(transported_bound(1, Complex64::new(0.5, 0.0), 0.5).is_err());
    }

    #[test]
    fn theta_examples() {
        let p = Complex64::new(0.4, 0.0);
        assert_abs_diff_eq!(equality_theta(1, p, 0, 1), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(equality_theta(1, p, 1, 2), PI, epsilon = 1e-15);
        let q = Complex64::new(0.1, -0.3);
        assert_abs_diff_eq!(
            equality_theta(2, -q, 1, 0),
            equality_theta(2, q, 1, 0) - PI,
            epsilon = 1e-14
        );
    }

    #[test]
    fn pullback_by_identity_and_rotation() {
        let s = PowerSeries::from_real(&[0.0, 0.0, 1.0, 0.5, -0.25]).unwrap();
        let same = pullback_series(&s, &MobiusMap::identity(), 4).unwrap();
        assert_eq!(same.coeffs(), s.coeffs());
        let rot = pullback_series(&s, &MobiusMap::new(Complex64::new(0.0, 0.0), 0.8).unwrap(), 4).unwrap();
        for k in 0..=4 {
            let want = s.coeff(k) * Complex64::from_polar(1.0, -0.8 * k as f64);
            assert!((rot.coeff(k) - want).norm() < 1e-14);
        }
        assert_eq!(rot.vanishing_order(1e-10).unwrap(), 2);
    }

    #[test]
    fn pullback_matches_pointwise_composition() {
        let s = PowerSeries::from_real(&(0..=80).map(|k| 0.7f64.powi(k)).collect::<Vec<_>>()).unwrap();
        let m = MobiusMap::new(Complex64::new(0.2, -0.1), 0.5).unwrap();
        let pulled = pullback_series(&s, &m, 80).unwrap();
        for z in [Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.05)] {
            let direct = s.eval(apply(&m, z, Direction::Inverse).unwrap()).unwrap();
            assert!((pulled.eval(z).unwrap() - direct).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_map_undoes_forward() {
        let m = MobiusMap::new(Complex64::new(0.3, -0.4), 0.9).unwrap();
        let inv = m.inverse();
        for z in [Complex64::new(0.1, 0.2), Complex64::new(-0.7, 0.1)] {
            let fwd = apply(&m, z, Direction::Forward).unwrap();
            assert!((apply(&inv, fwd, Direction::Forward).unwrap() - z).norm() < 1e-14);
        }
    }

    #[test]
    fn transported_extremizer_attains_bound() {
        let spec = ExtremalSpec::first(1);
        let w = crate::extremal::extremal_series(&spec, 128).unwrap();
        let p = Complex64::new(0.5, 0.0);
        let m = equality_map(&spec, &w, p).unwrap();
        let local = local_series_at(&w, &m, 8);
        let best = (0..2)
            .map(|q| curvature_at_origin(&local, q).unwrap().abs())
            .fold(0.0, f64::max);
        assert_abs_diff_eq!(best, 12.0, epsilon = 1e-9);
    }

    fn arb_series() -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4..10).prop_map(|v| {
            let mut c: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            c[0] = Complex64::new(0.0, 0.0);
            PowerSeries::new(c).unwrap()
        })
    }

    proptest! {
        #[test]
        fn roundtrip(px in -0.6..0.6f64, py in -0.6..0.6f64, theta in 0.0..6.3f64,
                     r in 0.0..1.0f64, t in 0.0..6.3f64) {
            let m = MobiusMap::new(Complex64::new(px, py), theta).unwrap();
            let z = Complex64::from_polar(r, t);
            let back = apply(&m, apply(&m, z, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
            prop_assert!((back - z).norm() <= 1e-12);
        }

        #[test]
        fn composition_agrees_with_chain_rule(s in arb_series(), rho in 0.0..0.5f64, a in 0.0..6.3f64,
                                              theta in 0.0..6.3f64) {
            let m = MobiusMap::new(Complex64::from_polar(rho, a), theta).unwrap();
            let local = local_series_at(&s, &m, 10);
            let chain = chain_rule_series(&s, &m).unwrap();
            let n = chain.vanishing_order(1e-10).unwrap();
            for q in 0..2 * n {
                let x = curvature_at_origin(&local, q).unwrap();
                let y = curvature_at_origin(&chain, q).unwrap();
                prop_assert!((x - y).abs() <= 1e-8 * (1.0 + y.abs()));
            }
        }
    }
}
