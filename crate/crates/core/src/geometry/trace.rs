use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curvature::{curvature_at_origin, raw_angles, GRAD_TOL};
use crate::error::{Error, Result};
use crate::series::{HolomorphicFunction, PowerSeries};

/// Highest Taylor order inspected when locating the branches through the origin.
const ORIGIN_PROBE_ORDER: usize = 32;
const CLOSURE_MIN_STEPS: usize = 10;
/// Keeps consecutive vertex spacings comparable so three-point curvature stays second order.
const MAX_STEP_GROWTH: f64 = 1.25;
/// Interior vertices moved when the clipped final segment is short.
const TAIL_RESPACE: usize = 4;

/// Numerical parameters of [`trace_nodal_set`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TraceConfig {
    /// Largest step; the actual step is `min(base_step, 0.1 / |kappa|)`.
    pub base_step: f64,
    pub min_step: f64,
    /// Tracing stops on this circle. Defaults to the function's domain radius.
    pub stop_radius: Option<f64>,
    /// Distance from the origin at which branches through it are started.
    pub launch_radius: f64,
    /// Side of the sign-change seed grid; 0 disables seeding.
    pub seed_grid: usize,
    /// Corrector stops once `|u| < newton_tol |grad u|`.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub max_steps: usize,
    /// `u(0)` counts as zero when `|u(0)| <= origin_tol * max_k |c_k|`.
    pub origin_tol: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            base_step: 1e-3,
            min_step: 1e-9,
            stop_radius: None,
            launch_radius: 1e-4,
            seed_grid: 64,
            newton_tol: 1e-12,
            newton_max_iter: 20,
            max_steps: 2_000_000,
            origin_tol: 1e-10,
        }
    }
}

/// A traced nodal curve as a polyline.
///
/// `curvatures[i]` is the signed curvature at `points[i]`, positive when the
/// curve turns left in the direction of traversal. Curves through the origin
/// are traversed in along branch `q + n` and out along branch `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalCurve {
    pub points: Vec<Complex64>,
    pub arc_lengths: Vec<f64>,
    pub curvatures: Vec<f64>,
    pub branch_q: Option<usize>,
    pub closed: bool,
}

impl NodalCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn passes_through_origin(&self) -> bool {
        self.branch_q.is_some()
    }

    /// First and last vertex.
    pub fn ends(&self) -> (Complex64, Complex64) {
        (self.points[0], self.points[self.points.len() - 1])
    }

    pub fn total_length(&self) -> f64 {
        self.arc_lengths.last().copied().unwrap_or(0.0)
    }

    /// Index of the vertex at the origin, if the curve passes through it.
    pub fn origin_index(&self) -> Option<usize> {
        self.branch_q?;
        self.points.iter().position(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn max_abs_curvature(&self) -> f64 {
        self.curvatures.iter().map(|k| k.abs()).fold(0.0, f64::max)
    }
}

/// Signed curvature of the circle through three points, positive for a left turn.
pub fn menger_curvature(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let u = b - a;
    let v = c - b;
    let cross = u.re * v.im - u.im * v.re;
    2.0 * cross / (u.norm() * v.norm() * (c - a).norm())
}

struct Tracer<'a, F: ?Sized> {
    f: &'a F,
    cfg: TraceConfig,
    stop: f64,
}

impl<F: HolomorphicFunction + ?Sized> Tracer<'_, F> {
    /// Newton iteration on `u` along the gradient direction.
    fn correct(&self, mut z: Complex64) -> Option<Complex64> {
        for _ in 0..self.cfg.newton_max_iter {
            let jet = self.f.jet(z);
            let grad = jet.first.conj();
            let g2 = grad.norm_sqr();
            if g2 == 0.0 || !g2.is_finite() {
                return None;
            }
            let u = jet.value.re;
            if u.abs() <= self.cfg.newton_tol * g2.sqrt() {
                return Some(z);
            }
            let dz = grad * (u / g2);
            z -= dz;
            if dz.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
                return Some(z);
            }
        }
        // accept iterates stalled by rounding a little above the target
        let jet = self.f.jet(z);
        (jet.value.re.abs() <= 1e3 * self.cfg.newton_tol * jet.first.norm()).then_some(z)
    }

    fn unit_tangent(&self, z: Complex64, previous: Complex64) -> Result<(Complex64, f64)> {
        let jet = self.f.jet(z);
        let speed = jet.first.norm();
        if speed <= GRAD_TOL {
            return Err(Error::CriticalPoint { z, gradient: speed });
        }
        let mut t = Complex64::i() * jet.first.conj() / speed;
        if (t * previous.conj()).re < 0.0 {
            t = -t;
        }
        let kappa = speed * (jet.second / (jet.first * jet.first)).re;
        Ok((t, kappa))
    }

    /// Spreads a short final segment over the last few vertices, keeping
    /// consecutive spacings within `MAX_STEP_GROWTH` of each other.
    fn respace_tail(&self, points: &mut [Complex64]) {
        let len = points.len();
        if len < 3 {
            return;
        }
        let last = (points[len - 1] - points[len - 2]).norm();
        let before = (points[len - 2] - points[len - 3]).norm();
        if last >= before / MAX_STEP_GROWTH {
            return;
        }
        let moved = TAIL_RESPACE.min(len - 2);
        let tail = &points[len - 2 - moved..];
        let mut cumulative = vec![0.0];
        for w in tail.windows(2) {
            cumulative.push(cumulative.last().unwrap() + (w[1] - w[0]).norm());
        }
        let total = *cumulative.last().unwrap();
        let mut placed = Vec::with_capacity(moved);
        for j in 1..=moved {
            let target = total * j as f64 / (moved + 1) as f64;
            let i = cumulative.partition_point(|&c| c <= target).clamp(1, tail.len() - 1);
            let frac = (target - cumulative[i - 1]) / (cumulative[i] - cumulative[i - 1]);
            let guess = tail[i - 1] + (tail[i] - tail[i - 1]) * frac;
            match self.correct(guess) {
                Some(z) if z.norm() < self.stop => placed.push(z),
                _ => return,
            }
        }
        points[len - 1 - moved..len - 1].copy_from_slice(&placed);
    }

    /// Point where the curve continued from `p` along `t` meets the stop circle.
    fn clip(&self, p: Complex64, t: Complex64, h: f64) -> Complex64 {
        let (mut lo, mut hi) = (0.0, h);
        let mut best = p + t * h;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let z = self.correct(p + t * mid).unwrap_or(p + t * mid);
            if z.norm() < self.stop {
                lo = mid;
            } else {
                hi = mid;
                best = z;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        // land exactly on the circle; the radial move is far below the corrector tolerance
        best * (self.stop / best.norm())
    }

    /// Follows the curve from `start` in direction `dir` until it leaves the
    /// stop disk or closes. Returns the vertices and whether it closed.
    /// Each step is at most `MAX_STEP_GROWTH` times the previous one, starting from `last_step`.
    fn march(&self, start: Complex64, dir: Complex64, last_step: f64) -> Result<(Vec<Complex64>, bool)> {
        let mut points = vec![start];
        let mut p = start;
        let mut d = dir / dir.norm();
        let mut last_step = last_step;
        for step in 0..self.cfg.max_steps {
            let (t, kappa) = self.unit_tangent(p, d)?;
            let mut h = self
                .cfg
                .base_step
                .min(0.1 / kappa.abs())
                .min(MAX_STEP_GROWTH * last_step);
            let q = loop {
                if h < self.cfg.min_step {
                    return Err(Error::StepCollapse {
                        z: p,
                        min_step: self.cfg.min_step,
                    });
                }
                let predicted = p + t * h;
                match self.correct(predicted) {
                    Some(q) if (q - p).norm() <= 2.0 * h && (q - predicted).norm() <= 0.5 * h => break q,
                    _ => h *= 0.5,
                }
            };
            if q.norm() >= self.stop {
                points.push(self.clip(p, t, h));
                self.respace_tail(&mut points);
                return Ok((points, false));
            }
            points.push(q);
            last_step = (q - p).norm();
            d = (q - p) / last_step;
            p = q;
            if step + 1 >= CLOSURE_MIN_STEPS && (q - start).norm() < 2.0 * h {
                points.push(start);
                return Ok((points, true));
            }
        }
        Err(Error::TraceExhausted {
            steps: self.cfg.max_steps,
        })
    }

    fn finish(
        &self,
        points: Vec<Complex64>,
        branch: Option<(usize, &PowerSeries)>,
        closed: bool,
    ) -> Result<NodalCurve> {
        let mut arc_lengths = Vec::with_capacity(points.len());
        let mut total = 0.0;
        for (i, z) in points.iter().enumerate() {
            if i > 0 {
                total += (z - points[i - 1]).norm();
            }
            arc_lengths.push(total);
        }
        let last = points.len() - 1;
        let curvatures = (0..points.len())
            .map(|i| {
                let z = points[i];
                if let (Some((q, series)), true) = (branch, z == Complex64::new(0.0, 0.0)) {
                    return curvature_at_origin(series, q).map(|k| -k);
                }
                let before = if i > 0 { points[i - 1] } else { z };
                let after = if i < last { points[i + 1] } else { z };
                let jet = self.f.jet(z);
                let speed = jet.first.norm();
                if speed <= GRAD_TOL {
                    return Err(Error::CriticalPoint { z, gradient: speed });
                }
                let kappa = speed * (jet.second / (jet.first * jet.first)).re;
                let left = Complex64::i() * (after - before);
                let towards_gradient = (jet.first.conj() * left.conj()).re;
                Ok(if towards_gradient >= 0.0 { kappa } else { -kappa })
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(NodalCurve {
            points,
            arc_lengths,
            curvatures,
            branch_q: branch.map(|b| b.0),
            closed,
        })
    }
}

/// Inserts vertices into a uniform bucket grid for proximity queries.
struct ProximityIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<Complex64>>,
}

impl ProximityIndex {
    fn new(cell: f64) -> Self {
        Self {
            cell,
            buckets: HashMap::new(),
        }
    }

    fn key(&self, z: Complex64) -> (i64, i64) {
        ((z.re / self.cell).floor() as i64, (z.im / self.cell).floor() as i64)
    }

    fn insert_all(&mut self, points: &[Complex64]) {
        for &z in points {
            let key = self.key(z);
            self.buckets.entry(key).or_default().push(z);
        }
    }

    fn near(&self, z: Complex64) -> bool {
        let (i, j) = self.key(z);
        (i - 1..=i + 1).any(|a| {
            (j - 1..=j + 1).any(|b| {
                self.buckets
                    .get(&(a, b))
                    .is_some_and(|pts| pts.iter().any(|p| (p - z).norm() < self.cell))
            })
        })
    }
}

/// Branch structure at the origin when `u(0) = 0`: the local series and the
/// vanishing order.
fn origin_structure<F: HolomorphicFunction + ?Sized>(f: &F, tol: f64) -> Option<(PowerSeries, usize)> {
    let mut coeffs = f.taylor_coefficients(ORIGIN_PROBE_ORDER);
    let scale = coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 || coeffs[0].re.abs() > tol * scale {
        return None;
    }
    coeffs[0] = Complex64::new(0.0, 0.0);
    let series = PowerSeries::new(coeffs).ok()?;
    let n = series.vanishing_order(crate::series::DEFAULT_VANISHING_TOL).ok()?;
    Some((series, n))
}

/// Traces the nodal set of `Re f` inside the stop disk.
///
/// Curves through the origin come first, one per pair of opposite branches
/// `(q, q + n)` with `q < n`; then curves found from sign changes on the seed
/// grid, in grid order.
pub fn trace_nodal_set<F: HolomorphicFunction + ?Sized>(f: &F, config: &TraceConfig) -> Result<Vec<NodalCurve>> {
    let stop = config.stop_radius.unwrap_or_else(|| f.domain_radius());
    if !(stop > 0.0) || stop > f.domain_radius() + 1e-12 {
        return Err(Error::InvalidInput(format!(
            "stop radius {stop} must lie in (0, {}]",
            f.domain_radius()
        )));
    }
    let tracer = Tracer { f, cfg: *config, stop };
    let mut curves = Vec::new();

    if let Some((series, n)) = origin_structure(f, config.origin_tol) {
        let etas = raw_angles(&series, n);
        let through_origin: Vec<NodalCurve> = (0..n)
            .into_par_iter()
            .map(|q| {
                let half = |eta: f64| -> Result<Vec<Complex64>> {
                    let dir = Complex64::from_polar(1.0, eta);
                    let launch = dir * config.launch_radius;
                    let start = tracer.correct(launch).ok_or(Error::CriticalPoint {
                        z: launch,
                        gradient: f.jet(launch).first.norm(),
                    })?;
                    Ok(tracer.march(start, dir, start.norm())?.0)
                };
                let outgoing = half(etas[q])?;
                let incoming = half(etas[q + n])?;
                let mut points: Vec<Complex64> = incoming.into_iter().rev().collect();
                points.push(Complex64::new(0.0, 0.0));
                points.extend(outgoing);
                tracer.finish(points, Some((q, &series)), false)
            })
            .collect::<Result<_>>()?;
        curves.extend(through_origin);
    }

    if config.seed_grid >= 2 {
        let mut index = ProximityIndex::new(4.0 * config.base_step);
        for c in &curves {
            index.insert_all(&c.points);
        }
        for seed in seed_points(&tracer, config.seed_grid) {
            if index.near(seed) {
                continue;
            }
            let jet = f.jet(seed);
            let tangent = Complex64::i() * jet.first.conj();
            let (forward, closed) = tracer.march(seed, tangent, config.base_step)?;
            let points = if closed {
                forward
            } else {
                let (backward, _) = tracer.march(seed, -tangent, config.base_step)?;
                let mut pts: Vec<Complex64> = backward.into_iter().rev().collect();
                pts.extend(forward.into_iter().skip(1));
                pts
            };
            let curve = tracer.finish(points, None, closed)?;
            index.insert_all(&curve.points);
            curves.push(curve);
        }
    }
    Ok(curves)
}

/// Zeros of `u` on the edges of a square grid covering the stop disk,
/// corrected onto the nodal set.
fn seed_points<F: HolomorphicFunction + ?Sized>(tracer: &Tracer<'_, F>, side: usize) -> Vec<Complex64> {
    let r = tracer.stop;
    let spacing = 2.0 * r / (side - 1) as f64;
    let node = |i: usize, j: usize| Complex64::new(-r + i as f64 * spacing, -r + j as f64 * spacing);
    let inside = |z: Complex64| z.norm() < r * (1.0 - 1e-9);
    let values: Vec<Vec<Option<f64>>> = (0..side)
        .into_par_iter()
        .map(|j| {
            (0..side)
                .map(|i| {
                    let z = node(i, j);
                    inside(z).then(|| tracer.f.harmonic_value(z))
                })
                .collect()
        })
        .collect();
    let mut seeds = Vec::new();
    for j in 0..side {
        for i in 0..side {
            let Some(u0) = values[j][i] else { continue };
            for (a, b) in [(i + 1, j), (i, j + 1)] {
                if a >= side || b >= side {
                    continue;
                }
                let Some(u1) = values[b][a] else { continue };
                if u0 * u1 < 0.0 {
                    let (z0, z1) = (node(i, j), node(a, b));
                    let guess = z0 + (z1 - z0) * (u0 / (u0 - u1));
                    if let Some(z) = tracer.correct(guess) {
                        if inside(z) && (z - guess).norm() < spacing {
                            seeds.push(z);
                        }
                    }
                }
            }
        }
    }
    seeds
}
