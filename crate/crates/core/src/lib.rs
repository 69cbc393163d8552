//! Numerical analysis of nodal sets of harmonic functions on the unit disk.
//!
//! A harmonic function is represented as `u = Re w` for a holomorphic `w`
//! given by its Taylor series at the origin ([`PowerSeries`]). On top of that
//! the crate provides boundary data and its Poisson extension, curvature of
//! nodal curves (including at critical points) and curve tracing, the extremal
//! functions for the curvature bound, frequency / doubling index / area
//! measurements, and disk automorphisms.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissible;
pub mod boundary;
pub mod error;
pub mod export;
pub mod extremal;
pub mod geometry;
mod linalg;
pub mod mobius;
pub mod series;
pub mod spectral;

pub use admissible::{admissible_family, AdmissibleFamily, AdmissibleSample};
pub use boundary::{
    fourier_coefficient, mollify, poisson_extend, solve_delta_comb, solve_derivative_comb, solve_step_function,
    Boundary, DerivativeComb, DiracComb, FourierCoefficients, MollifierSpec, SampledBoundary, StepBoundary,
};
pub use error::{Error, Result};
pub use export::{curve_csv, render_svg};
pub use extremal::{
    admissible_phi0, extremal_series, rational_extremal_eval, sharpness_sequence, verify_extremal_curvature,
    ExtremalFunction, ExtremalReport, ExtremalSpec, SharpnessConstruction,
};
pub use geometry::{
    count_sign_changes, curvature_at_origin, curvature_bound, curvature_regular, tangent_angles, trace_nodal_set,
    uniform_curvature_scan, CurvatureReport, NodalCurve, TraceConfig,
};
pub use mobius::{
    apply, chain_rule_series, equality_map, equality_theta, local_series_at, pullback_series, transported_bound,
    Direction, MobiusMap,
};
pub use series::{HolomorphicFunction, Jet, PowerSeries};
pub use spectral::{
    area_ratio, doubling_index, frequency, growth_bound_check, spectral_report, tail_radius, AreaReport, GrowthReport,
    SpectralReport,
};
