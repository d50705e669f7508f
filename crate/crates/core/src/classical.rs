//! The macrorealist counter-model: the system is always in exactly one of
//! the two diagonal states and flips between consecutive measurement times
//! with a fixed probability. Its correlator combinations satisfy
//! K₋ + 1 = 4p² and K₊ + 1 = 4(p−1)², so neither inequality is ever
//! violated, for any flip probability.
//!
//! The flip probability is named `p` here; the delay between the rays in
//! the dephasing model (also written α in the optics context) is unrelated.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lg::{CorrelatorSet, LGResult};

/// Two-state Markov flip dynamics with equal per-stage flip probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipModel {
    p: f64,
}

impl FlipModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidFlipProbability(p));
        }
        Ok(Self { p })
    }

    pub fn flip_probability(&self) -> f64 {
        self.p
    }
}

/// Analytic correlators of the flip model: K₁₂ = K₂₃ = 1 − 2p and
/// K₁₃ = 4p² − 4p + 1.
pub fn classical_correlators(model: &FlipModel) -> CorrelatorSet {
    let p = model.p;
    let k12 = 1.0 - 2.0 * p;
    CorrelatorSet::new(k12, k12, 4.0 * p * p - 4.0 * p + 1.0)
}

/// Inequality combinations in closed form: K₋ = 4p² − 1 and
/// K₊ = 4(p−1)² − 1, both ≥ −1 for every p. The violation flags are
/// therefore always false.
pub fn classical_lg(model: &FlipModel) -> LGResult {
    let p = model.p;
    let k_minus = 4.0 * p * p - 1.0;
    let q = p - 1.0;
    let k_plus = 4.0 * q * q - 1.0;
    LGResult::from_parts(classical_correlators(model), k_minus, k_plus)
}

/// Stochastic oracle for the analytic model: `n_trials` two-step
/// trajectories starting from Q(t₁) = +1, each step flipping with
/// probability p. Deterministic for a given seed.
pub fn monte_carlo_classical(
    model: &FlipModel,
    n_trials: u64,
    seed: u64,
) -> Result<CorrelatorSet> {
    if n_trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = model.p;
    let mut sum12: i64 = 0;
    let mut sum23: i64 = 0;
    let mut sum13: i64 = 0;
    for _ in 0..n_trials {
        let q2: i64 = if unit_uniform(&mut rng) < p { -1 } else { 1 };
        let q3 = if unit_uniform(&mut rng) < p { -q2 } else { q2 };
        // Q(t₁) = +1 throughout.
        sum12 += q2;
        sum23 += q2 * q3;
        sum13 += q3;
    }
    let n = n_trials as f64;
    Ok(CorrelatorSet::new(
        sum12 as f64 / n,
        sum23 as f64 / n,
        sum13 as f64 / n,
    ))
}

/// Macrorealist model best matching an observed K₁₂: p = (1 − K₁₂)/2.
pub fn fit_flip_probability(k12_observed: f64) -> Result<FlipModel> {
    if !k12_observed.is_finite() || k12_observed.abs() > 1.0 + 1e-9 {
        return Err(Error::CorrelatorOutOfRange(k12_observed));
    }
    FlipModel::new((0.5 * (1.0 - k12_observed)).clamp(0.0, 1.0))
}

// Uniform in [0, 1) from the top 53 bits of the generator output.
fn unit_uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}
