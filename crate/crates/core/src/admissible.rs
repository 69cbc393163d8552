//! Seeded random harmonic functions with exactly `2n` boundary sign changes
//! and vanishing order `n` at the origin.
//!
//! Each sample places `2n+1` atoms at jittered, nearly equispaced angles,
//! solves for comb weights with vanishing moments below `n`, keeps it only if
//! the weights alternate in sign, and mollifies with width `epsilon0 / 8`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{
    poisson_extend, required_samples, solve_delta_comb, DiracComb, Mollifiable, Mollified, SampledBoundary,
};
use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Relative jitter applied to each atom position.
pub const JITTER: f64 = 0.15;
const MAX_ATTEMPTS: usize = 1000;

/// One random admissible function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleSample {
    pub n: usize,
    pub epsilon0: f64,
    /// Mollifier width.
    pub epsilon: f64,
    pub comb: DiracComb,
    pub series: PowerSeries,
}

impl AdmissibleSample {
    /// The mollified boundary values.
    pub fn sampled_boundary(&self) -> Result<SampledBoundary> {
        SampledBoundary::from_fn(required_samples(self.epsilon), |t| {
            self.comb.mollified_value(t, self.epsilon)
        })
    }
}

/// Deterministic stream of admissible samples for a fixed `n`.
#[derive(Debug, Clone)]
pub struct AdmissibleFamily {
    n: usize,
    truncation: usize,
    rng: ChaCha8Rng,
}

impl AdmissibleFamily {
    pub fn new(n: usize, truncation: usize, seed: u64) -> Result<Self> {
        if n == 0 || truncation < n + 1 {
            return Err(Error::InvalidInput(format!(
                "admissible family needs n >= 1 and truncation > n (n = {n}, K = {truncation})"
            )));
        }
        Ok(Self {
            n,
            truncation,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn sample(&mut self) -> Result<AdmissibleSample> {
        let n = self.n;
        for _ in 0..MAX_ATTEMPTS {
            let alpha0 = self.rng.random_range(0.0..TAU);
            let epsilon0 = self.rng.random_range(0.5..=1.0) / (2.0 * n as f64);
            let angles: Vec<f64> = (1..=2 * n + 1)
                .map(|j| {
                    let jitter = self.rng.random_range(-JITTER..=JITTER) * epsilon0;
                    alpha0 + (j as f64 - n as f64 - 1.0) * epsilon0 + jitter
                })
                .collect();
            let comb = match solve_delta_comb(n, &angles) {
                Ok(c) if c.alternates() => c,
                Ok(_) | Err(Error::SingularSystem { .. }) => continue,
                Err(e) => return Err(e),
            };
            let epsilon = epsilon0 / 8.0;
            let series = poisson_extend(
                &Mollified {
                    boundary: &comb,
                    epsilon,
                },
                self.truncation,
            )?;
            return Ok(AdmissibleSample {
                n,
                epsilon0,
                epsilon,
                comb,
                series,
            });
        }
        Err(Error::InvalidInput(format!(
            "no alternating comb found in {MAX_ATTEMPTS} attempts for n = {n}"
        )))
    }
}

impl Iterator for AdmissibleFamily {
    type Item = Result<AdmissibleSample>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.sample())
    }
}

/// `count` samples of order `n` from `seed`.
pub fn admissible_family(n: usize, count: usize, truncation: usize, seed: u64) -> Result<Vec<AdmissibleSample>> {
    AdmissibleFamily::new(n, truncation, seed)?.take(count).collect()
}
