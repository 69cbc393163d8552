use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{HolomorphicFunction, PowerSeries, DEFAULT_VANISHING_TOL};

/// Below this `|w'(z)|` a point is treated as critical.
pub const GRAD_TOL: f64 = 1e-12;

/// `alpha_0`: zero for odd `n`, `pi / (2n(n+1))` for even `n`.
pub fn parity_constant(n: usize) -> f64 {
    if n % 2 == 1 {
        0.0
    } else {
        PI / (2.0 * n as f64 * (n as f64 + 1.0))
    }
}

/// `(4(n+1) / (n r0)) cos(n alpha_0)`: the largest curvature a nodal curve
/// through a point of vanishing order `n` can have, for functions with `2n`
/// boundary sign changes on the circle of radius `r0` about that point.
pub fn curvature_bound(n: usize, r0: f64) -> f64 {
    let n_f = n as f64;
    4.0 * (n_f + 1.0) / (n_f * r0) * (n_f * parity_constant(n)).cos()
}

/// Curvature of the nodal curve of `Re w` through a regular point `z`:
/// `|w'| Re(w'' / w'^2)`. Positive when the curve bends towards `{u > 0}`.
pub fn curvature_regular<F: HolomorphicFunction + ?Sized>(f: &F, z: Complex64) -> Result<f64> {
    let jet = f.jet(z);
    let speed = jet.first.norm();
    if speed <= GRAD_TOL {
        return Err(Error::CriticalPoint { z, gradient: speed });
    }
    Ok(speed * (jet.second / (jet.first * jet.first)).re)
}

/// `eta_q = (q pi + pi/2 - arg w^{(n)}(0)) / n` for `q = 0..2n`, unsorted.
pub(crate) fn raw_angles(series: &PowerSeries, n: usize) -> Vec<f64> {
    let arg = series.coeff(n).arg();
    (0..2 * n)
        .map(|q| ((q as f64 * PI + FRAC_PI_2 - arg) / n as f64).rem_euclid(TAU))
        .collect()
}

/// Directions in which the `2n` nodal branches leave the origin, sorted in `[0, 2pi)`.
pub fn tangent_angles(series: &PowerSeries) -> Result<Vec<f64>> {
    let n = series.vanishing_order(DEFAULT_VANISHING_TOL)?;
    let mut angles = raw_angles(series, n);
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Branch curvature at the origin measured against the gradient of `u`, the
/// limit of [`curvature_regular`] along branch `q`:
/// `-(2/(n^2+n)) Re(e^{i(n+1) eta_q} w^{(n+1)}(0)) / |w^{(n)}(0)|`.
pub fn curvature_at_origin_gradient_normal(series: &PowerSeries, q: usize) -> Result<f64> {
    let n = series.vanishing_order(DEFAULT_VANISHING_TOL)?;
    if q >= 2 * n {
        return Err(Error::InvalidBranch { q, count: 2 * n });
    }
    let eta = raw_angles(series, n)[q];
    let n_f = n as f64;
    let lead = series.derivative_at_origin(n).norm();
    let next = series.derivative_at_origin(n + 1);
    let rotated = Complex64::from_polar(1.0, (n_f + 1.0) * eta) * next;
    Ok(-2.0 / (n_f * n_f + n_f) * rotated.re / lead)
}

/// Curvature at the origin of branch `q`, oriented along the branch as it
/// leaves the origin and measured against the normal to its right.
///
/// The gradient of `u` lies to the right of branch 0 and alternates sides
/// from one branch to the next, so this is `(-1)^q` times
/// [`curvature_at_origin_gradient_normal`]. With this orientation the two
/// halves `q` and `q+n` of one curve through the origin always report
/// opposite values.
pub fn curvature_at_origin(series: &PowerSeries, q: usize) -> Result<f64> {
    let kappa = curvature_at_origin_gradient_normal(series, q)?;
    Ok(if q.is_multiple_of(2) { kappa } else { -kappa })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCurvature {
    pub q: usize,
    pub eta: f64,
    pub kappa: f64,
}

/// `(q, eta_q, kappa_q)` for every branch, in branch order.
pub fn branch_curvatures(series: &PowerSeries) -> Result<Vec<BranchCurvature>> {
    let n = series.vanishing_order(DEFAULT_VANISHING_TOL)?;
    let etas = raw_angles(series, n);
    (0..2 * n)
        .map(|q| {
            Ok(BranchCurvature {
                q,
                eta: etas[q],
                kappa: curvature_at_origin(series, q)?,
            })
        })
        .collect()
}

/// Branch curvatures at the origin compared against [`curvature_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub n: usize,
    pub branches: Vec<BranchCurvature>,
    pub bound: f64,
    pub alpha0: f64,
    /// `bound - max_q |kappa_q|`.
    pub gap: f64,
}

impl CurvatureReport {
    pub fn max_abs_curvature(&self) -> f64 {
        self.branches.iter().map(|b| b.kappa.abs()).fold(0.0, f64::max)
    }
}

pub fn curvature_report(series: &PowerSeries, r0: f64) -> Result<CurvatureReport> {
    let branches = branch_curvatures(series)?;
    let n = branches.len() / 2;
    let bound = curvature_bound(n, r0);
    let max = branches.iter().map(|b| b.kappa.abs()).fold(0.0, f64::max);
    Ok(CurvatureReport {
        n,
        branches,
        bound,
        alpha0: parity_constant(n),
        gap: bound - max,
    })
}
