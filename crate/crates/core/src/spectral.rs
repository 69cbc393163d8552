//! Coefficient growth, frequency, doubling index, and sign-region areas.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{HolomorphicFunction, PowerSeries, DEFAULT_VANISHING_TOL};

/// Angular samples per circle in [`doubling_index`].
pub const DOUBLING_SAMPLES: usize = 720;
/// Relative slack allowed by [`growth_bound_check`].
pub const GROWTH_TOL: f64 = 1e-9;
/// Smallest grid accepted by [`area_ratio`].
pub const MIN_AREA_RESOLUTION: usize = 64;

/// Outcome of comparing `|a_k|` with `2^{n+2} n A_n k^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub n: usize,
    /// `A_n = max_{1 <= l <= n} |a_l|`.
    pub a_n: f64,
    /// `max_{n < k <= K} |a_k| / (2^{n+2} n A_n k^{2n})`.
    pub worst_ratio: f64,
    /// Index attaining `worst_ratio`, if any coefficient was checked.
    pub worst_k: Option<usize>,
    pub passed: bool,
}

/// Checks the polynomial growth bound on coefficients `n < k <= K`.
pub fn growth_bound_check(series: &PowerSeries, truncation: usize) -> Result<GrowthReport> {
    let n = series.vanishing_order(DEFAULT_VANISHING_TOL)?;
    let a_n = (1..=n).map(|l| series.modulus(l)).fold(0.0, f64::max);
    let prefactor = 2f64.powi(n as i32 + 2) * n as f64 * a_n;
    let mut worst_ratio = 0.0;
    let mut worst_k = None;
    for k in n + 1..=truncation.min(series.truncation_order()) {
        let ratio = series.modulus(k) / (prefactor * (k as f64).powi(2 * n as i32));
        if worst_k.is_none() || ratio > worst_ratio {
            worst_ratio = ratio;
            worst_k = Some(k);
        }
    }
    Ok(GrowthReport {
        n,
        a_n,
        worst_ratio,
        worst_k,
        passed: worst_ratio <= 1.0 + GROWTH_TOL,
    })
}

/// `beta(r) = sum k a_k^2 r^{2k} / sum a_k^2 r^{2k}` over `1 <= k <= K`.
///
/// Truncating at `K` drops terms bounded by `sum_{k>K} k a_k^2 r^{2k}`, which is
/// negligible whenever the coefficients grow polynomially and `r^{2K}` is tiny.
pub fn frequency(series: &PowerSeries, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidInput(format!("frequency radius {r} must lie in (0, 1)")));
    }
    let (mut num, mut den) = (0.0, 0.0);
    let r2 = r * r;
    let mut power = 1.0;
    for (k, c) in series.coeffs().iter().enumerate().skip(1) {
        power *= r2;
        let w = c.norm_sqr() * power;
        num += k as f64 * w;
        den += w;
    }
    if den == 0.0 {
        return Err(Error::ConstantFunction { tol: 0.0 });
    }
    Ok(num / den)
}

/// `sup |u|` over the disk of radius `rho`, sampled on circles of radius
/// `0.5 rho`, `0.75 rho` and `rho`.
fn disk_sup<F: HolomorphicFunction + ?Sized>(f: &F, rho: f64) -> f64 {
    [0.5 * rho, 0.75 * rho, rho]
        .iter()
        .flat_map(|&radius| {
            (0..DOUBLING_SAMPLES).map(move |j| {
                let theta = std::f64::consts::TAU * j as f64 / DOUBLING_SAMPLES as f64;
                Complex64::from_polar(radius, theta)
            })
        })
        .map(|z| f.harmonic_value(z).abs())
        .fold(0.0, f64::max)
}

/// `log2(sup_{B_2r} |u| / sup_{B_r} |u|)`.
pub fn doubling_index<F: HolomorphicFunction + ?Sized>(f: &F, r: f64) -> Result<f64> {
    if !(r > 0.0) || 2.0 * r > f.domain_radius() + 1e-15 {
        return Err(Error::OutsideSafeDisk {
            z: Complex64::new(2.0 * r, 0.0),
            radius: f.domain_radius(),
        });
    }
    let inner = disk_sup(f, r);
    if inner == 0.0 {
        return Err(Error::ConstantFunction { tol: 0.0 });
    }
    Ok((disk_sup(f, 2.0 * r) / inner).log2())
}

/// Largest `r <= 1/2` with `sum_{k >= N} k a_k^2 r^{2k} <= r^{2N-2} A_{N-1}^2`,
/// `A_{N-1} = max_{1 <= l < N} |a_l|`, found by bisection.
///
/// Dividing by `r^{2N-2}` makes the left side increasing in `r`, so the set of
/// admissible radii is an interval starting at 0. Returns 0 when
/// `A_{N-1} = 0`, since then no positive radius qualifies.
pub fn tail_radius(series: &PowerSeries, big_n: usize) -> Result<f64> {
    if big_n < 2 {
        return Err(Error::InvalidInput(format!("N = {big_n} must be at least 2")));
    }
    let head = (1..big_n).map(|l| series.modulus(l)).fold(0.0, f64::max).powi(2);
    let excess = |r: f64| -> f64 {
        let r2 = r * r;
        let mut power = 1.0;
        let mut tail = 0.0;
        for k in big_n..=series.truncation_order() {
            power *= r2;
            tail += k as f64 * series.modulus(k).powi(2) * power;
        }
        tail - head
    };
    if excess(0.5) <= 0.0 {
        return Ok(0.5);
    }
    if head == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 0.5);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Measure of `{u > 0}` and `{u < 0}` inside `B_{r0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    pub r0: f64,
    pub positive_area: f64,
    pub negative_area: f64,
    /// `positive_area / negative_area`.
    pub ratio: f64,
    pub resolution: usize,
}

/// Midpoint-rule areas on a `resolution x resolution` grid over the square
/// `[-r0, r0]^2`, keeping cells whose centre lies in the disk.
pub fn area_ratio<F: HolomorphicFunction + ?Sized>(f: &F, r0: f64, resolution: usize) -> Result<AreaReport> {
    if resolution < MIN_AREA_RESOLUTION {
        return Err(Error::InvalidInput(format!(
            "area resolution {resolution} is below the minimum {MIN_AREA_RESOLUTION}"
        )));
    }
    if !(r0 > 0.0) || r0 > f.domain_radius() {
        return Err(Error::OutsideSafeDisk {
            z: Complex64::new(r0, 0.0),
            radius: f.domain_radius(),
        });
    }
    let h = 2.0 * r0 / resolution as f64;
    let rows: Vec<(usize, usize)> = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let y = -r0 + (j as f64 + 0.5) * h;
            let mut counts = (0, 0);
            for i in 0..resolution {
                let z = Complex64::new(-r0 + (i as f64 + 0.5) * h, y);
                if z.norm() > r0 {
                    continue;
                }
                let u = f.harmonic_value(z);
                if u > 0.0 {
                    counts.0 += 1;
                } else if u < 0.0 {
                    counts.1 += 1;
                }
            }
            counts
        })
        .collect();
    let (pos, neg) = rows.iter().fold((0, 0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    let cell = h * h;
    let positive_area = pos as f64 * cell;
    let negative_area = neg as f64 * cell;
    Ok(AreaReport {
        r0,
        positive_area,
        negative_area,
        ratio: positive_area / negative_area,
        resolution,
    })
}

/// Frequency and doubling index on a set of radii, with the growth check and
/// the tail radius for a given `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub growth: GrowthReport,
    /// `(r, beta(r))`.
    pub frequency: Vec<(f64, f64)>,
    /// `(r, N(r))` for radii with `2r` inside the safe disk.
    pub doubling: Vec<(f64, f64)>,
    pub big_n: usize,
    pub tail_radius: f64,
    pub frequency_at_tail_radius: f64,
}

pub fn spectral_report(series: &PowerSeries, radii: &[f64], big_n: usize) -> Result<SpectralReport> {
    let growth = growth_bound_check(series, series.truncation_order())?;
    let frequency_samples = radii
        .iter()
        .map(|&r| Ok((r, frequency(series, r)?)))
        .collect::<Result<Vec<_>>>()?;
    let doubling = radii
        .iter()
        .filter(|&&r| 2.0 * r <= series.safe_radius())
        .map(|&r| Ok((r, doubling_index(series, r)?)))
        .collect::<Result<Vec<_>>>()?;
    let tail = tail_radius(series, big_n)?;
    let frequency_at_tail_radius = if tail > 0.0 { frequency(series, tail)? } else { f64::NAN };
    Ok(SpectralReport {
        growth,
        frequency: frequency_samples,
        doubling,
        big_n,
        tail_radius: tail,
        frequency_at_tail_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{extremal_series, ExtremalSpec};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn real(coeffs: &[f64]) -> PowerSeries {
        PowerSeries::from_real(coeffs).unwrap()
    }

    #[test]
    fn growth_examples() {
        let m = growth_bound_check(&real(&[0.0, 0.0, 1.0, 0.0, 0.0]), 4).unwrap();
        assert_eq!(m.worst_ratio, 0.0);
        assert!(m.passed);

        let e = growth_bound_check(&extremal_series(&ExtremalSpec::first(1), 200).unwrap(), 200).unwrap();
        assert_abs_diff_eq!(e.worst_ratio, 0.125, epsilon = 1e-12);
        assert!(e.passed);

        let geometric: Vec<f64> = (0..=20).map(|k| if k == 0 { 0.0 } else { 3f64.powi(k) }).collect();
        let g = growth_bound_check(&real(&geometric), 20).unwrap();
        assert_eq!(g.n, 1);
        assert!(!g.passed);
    }

    #[test]
    fn frequency_examples() {
        let mono = real(&[0.0, 0.0, 0.0, 2.0]);
        assert_abs_diff_eq!(frequency(&mono, 0.37).unwrap(), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(frequency(&real(&[0.0, 1.0, 1.0]), 0.5).unwrap(), 1.2, epsilon = 1e-14);
        assert!(matches!(
            frequency(&real(&[0.0, 0.0]), 0.5),
            Err(Error::ConstantFunction { .. })
        ));
    }

    #[test]
    fn doubling_examples() {
        let mono = real(&[0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(doubling_index(&mono, 0.3).unwrap(), 2.0, epsilon = 1e-12);
        let d = doubling_index(&real(&[0.0, 1.0, 1.0]), 0.25).unwrap();
        assert_abs_diff_eq!(d, (0.75f64 / 0.3125).log2(), epsilon = 1e-12);
        assert!(doubling_index(&mono, 0.6).is_err());
    }

    #[test]
    fn tail_radius_examples() {
        assert_eq!(tail_radius(&real(&[0.0, 1.0, 0.0, 0.0]), 2).unwrap(), 0.5);
        let s = extremal_series(&ExtremalSpec::first(1), 200).unwrap();
        let r = tail_radius(&s, 2).unwrap();
        assert!(r > 1e-3 && r < 0.5);
        assert!(frequency(&s, r).unwrap() <= 2.0 + 1e-9);
    }

    #[test]
    fn tail_radius_shrinks_with_tail_mass() {
        let s = real(&[0.0, 1.0, 0.5, 0.8, 2.0, 1.0]);
        let mut heavier = s.clone().into_coeffs();
        heavier[3..].iter_mut().for_each(|c| *c *= 2.0);
        let heavier = PowerSeries::new(heavier).unwrap();
        assert!(tail_radius(&heavier, 3).unwrap() < tail_radius(&s, 3).unwrap());
    }

    #[test]
    fn symmetric_areas() {
        for s in [real(&[0.0, 1.0]), real(&[0.0, 0.0, 1.0])] {
            for r0 in [0.3, 0.9] {
                let a = area_ratio(&s, r0, 128).unwrap();
                assert_eq!(a.ratio, 1.0);
            }
        }
        assert!(area_ratio(&real(&[0.0, 1.0]), 0.5, 32).is_err());
    }

    #[test]
    fn extremal_area_is_stable_under_refinement() {
        let s = extremal_series(&ExtremalSpec::first(1), 64).unwrap();
        let coarse = area_ratio(&s, 0.4, 256).unwrap();
        let fine = area_ratio(&s, 0.4, 512).unwrap();
        assert!(coarse.positive_area > 0.0 && coarse.negative_area > 0.0);
        assert!((coarse.ratio / fine.ratio - 1.0).abs() < 0.02);
    }

    proptest! {
        #[test]
        fn frequency_is_nondecreasing(coeffs in prop::collection::vec(-1.0..1.0f64, 2..12)) {
            let mut c = coeffs;
            c[0] = 0.0;
            prop_assume!(c.iter().any(|v| v.abs() > 1e-3));
            let s = real(&c);
            let n = s.vanishing_order(1e-10).unwrap() as f64;
            let mut previous = 0.0;
            for i in 1..=32 {
                let beta = frequency(&s, 0.95 * i as f64 / 32.0).unwrap();
                prop_assert!(beta >= previous - 1e-12);
                prop_assert!(beta >= n - 1e-12);
                prop_assert!(beta <= s.truncation_order() as f64 + 1e-12);
                previous = beta;
            }
        }
    }
}
