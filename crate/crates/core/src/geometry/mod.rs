//! Tangent directions and curvature of nodal curves, curve tracing, and the
//! curvature bound at a point of given vanishing order.

mod curvature;
mod scan;
mod trace;

pub use curvature::{
    branch_curvatures, curvature_at_origin, curvature_at_origin_gradient_normal, curvature_bound, curvature_regular,
    curvature_report, parity_constant, tangent_angles, BranchCurvature, CurvatureReport, GRAD_TOL,
};
pub use scan::{count_sign_changes, uniform_curvature_scan, CurvatureScan};
pub use trace::{menger_curvature, trace_nodal_set, NodalCurve, TraceConfig};
