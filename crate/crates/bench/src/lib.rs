//! Shared inputs for the benchmarks in `benches/`.

use nodal_atlas::{admissible_phi0, extremal_series, ExtremalSpec, PowerSeries};

/// Extremal series of order `n` at the first admissible base angle.
pub fn extremal_fixture(n: usize, truncation: usize) -> PowerSeries {
    let phi0 = admissible_phi0(n)[0];
    extremal_series(&ExtremalSpec::new(n, phi0).expect("admissible spec"), truncation).expect("expansion")
}
