use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::trace::{trace_nodal_set, TraceConfig};
use crate::boundary::SampledBoundary;
use crate::error::{Error, Result};
use crate::series::HolomorphicFunction;

/// Largest curvature found on the nodal set inside a disk about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureScan {
    pub max_curvature: f64,
    /// Vertex attaining the maximum; `None` if the disk meets no nodal curve.
    pub point: Option<Complex64>,
}

/// `max |kappa|` over the traced nodal set in `B_c` minus the origin.
pub fn uniform_curvature_scan<F: HolomorphicFunction + ?Sized>(
    f: &F,
    c: f64,
    config: &TraceConfig,
) -> Result<CurvatureScan> {
    if !(c > 0.0 && c < f.domain_radius()) {
        return Err(Error::InvalidInput(format!(
            "scan radius {c} must lie in (0, {})",
            f.domain_radius()
        )));
    }
    let cfg = TraceConfig {
        stop_radius: Some(c),
        ..*config
    };
    let mut best = CurvatureScan {
        max_curvature: 0.0,
        point: None,
    };
    for curve in trace_nodal_set(f, &cfg)? {
        for (z, k) in curve.points.iter().zip(&curve.curvatures) {
            if *z != Complex64::new(0.0, 0.0) && k.abs() > best.max_curvature {
                best = CurvatureScan {
                    max_curvature: k.abs(),
                    point: Some(*z),
                };
            }
        }
    }
    Ok(best)
}

/// Number of sign alternations of `g` around the circle, skipping samples with
/// `|g| < tol * max |g|`.
pub fn count_sign_changes(boundary: &SampledBoundary, tol: f64) -> Result<usize> {
    let scale = boundary.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let signs: Vec<bool> = boundary
        .values
        .iter()
        .filter(|v| v.abs() > tol * scale && v.abs() > 0.0)
        .map(|v| *v > 0.0)
        .collect();
    if signs.is_empty() {
        return Err(Error::AllBelowTolerance { tol });
    }
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let wrap = usize::from(signs[0] != signs[signs.len() - 1]);
    Ok(changes + wrap)
}
