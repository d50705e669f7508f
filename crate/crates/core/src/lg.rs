//! Two-time correlators of the diagonal-basis polarization observable, the
//! two Wigner-type Leggett-Garg combinations built from them, and the search
//! for the retardation at which their envelopes stop violating the classical
//! bound.
//!
//! The three correlators are produced exactly the way the optical circuit
//! measures them: K(t₁,t₂) and K(t₁,t₃) by projective readout after one and
//! two environment passes, K(t₂,t₃) by copying Q(t₂) onto the path ancilla
//! with a CNOT before the second pass. A stepwise collapse bookkeeping route
//! doubles as an independent oracle for the CNOT protocol.
//!
//! K(t₁,t₃) averages the frequency-dependent phase over *both* passes
//! jointly (one photon keeps one frequency), giving the doubled-delay
//! contraction exp(−¼d²σ²) rather than the square of the single-stage
//! factor; the independent-environment composition is exposed separately
//! for contrast.

use crate::dephasing::{
    apply_stage_on_system, decay_factor, dephase_channel, DephasingStage, SpectralProfile,
};
use crate::error::{Error, Result};
use crate::qubit::{
    apply_cnot, collapse_diag, joint_diag_path_probabilities, measure_diag_basis, tensor, Outcome,
    QubitState, COLLAPSE_FLOOR,
};

use std::f64::consts::PI;

/// A correlator combination is flagged as violating once it falls below
/// −1 − VIOLATION_TOL.
pub const VIOLATION_TOL: f64 = 1e-9;

/// |envelope_min + 1| at which the transition search stops.
pub const TRANSITION_RESIDUAL_TOL: f64 = 1e-9;

/// Retardation bracket (waves) searched for the transition.
pub const TRANSITION_BRACKET: (f64, f64) = (0.0, 200.0);

/// Default number of phase samples for envelope scans.
pub const DEFAULT_TILT_SAMPLES: usize = 3600;

/// Which of the two inequality combinations is under consideration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    /// K₋ = K₁₃ − K₁₂ − K₂₃ ≥ −1
    Minus,
    /// K₊ = K₁₃ + K₁₂ + K₂₃ ≥ −1
    Plus,
}

/// A full experiment setting: photon spectrum plus the two identical
/// environment passes (U = U′ is structural; one retardation and one tilt
/// serve both).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    spectrum: SpectralProfile,
    retardation_waves: f64,
    tilt_phase: f64,
}

impl ExperimentConfig {
    pub fn new(spectrum: SpectralProfile, retardation_waves: f64, tilt_phase: f64) -> Result<Self> {
        // Validation is shared with the stage constructor.
        DephasingStage::new(retardation_waves, tilt_phase)?;
        Ok(Self {
            spectrum,
            retardation_waves,
            tilt_phase,
        })
    }

    pub fn spectrum(&self) -> &SpectralProfile {
        &self.spectrum
    }

    pub fn retardation_waves(&self) -> f64 {
        self.retardation_waves
    }

    pub fn tilt_phase(&self) -> f64 {
        self.tilt_phase
    }

    /// The environment pass used between consecutive measurement times.
    pub fn stage(&self) -> DephasingStage {
        DephasingStage::new(self.retardation_waves, self.tilt_phase)
            .expect("validated at construction")
    }

    // Both passes seen by one photon at one frequency: doubled delay and
    // doubled tilt in a single frequency average.
    fn joint_stage(&self) -> DephasingStage {
        DephasingStage::new(2.0 * self.retardation_waves, 2.0 * self.tilt_phase)
            .expect("validated at construction")
    }
}

/// The three measured two-time correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    pub k12: f64,
    pub k23: f64,
    pub k13: f64,
}

impl CorrelatorSet {
    pub fn new(k12: f64, k23: f64, k13: f64) -> Self {
        for k in [k12, k23, k13] {
            debug_assert!(
                (-1.0 - 1e-9..=1.0 + 1e-9).contains(&k),
                "correlator {k} outside [-1, 1]"
            );
        }
        Self { k12, k23, k13 }
    }
}

/// Both inequality combinations plus violation flags against the −1 bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LGResult {
    pub correlators: CorrelatorSet,
    pub k_minus: f64,
    pub k_plus: f64,
    pub violates_minus: bool,
    pub violates_plus: bool,
}

impl LGResult {
    pub fn from_correlators(correlators: CorrelatorSet) -> Self {
        let CorrelatorSet { k12, k23, k13 } = correlators;
        let k_minus = k13 - k12 - k23;
        let k_plus = k13 + k12 + k23;
        Self {
            correlators,
            k_minus,
            k_plus,
            violates_minus: k_minus < -1.0 - VIOLATION_TOL,
            violates_plus: k_plus < -1.0 - VIOLATION_TOL,
        }
    }

    pub(crate) fn from_parts(correlators: CorrelatorSet, k_minus: f64, k_plus: f64) -> Self {
        Self {
            correlators,
            k_minus,
            k_plus,
            violates_minus: k_minus < -1.0 - VIOLATION_TOL,
            violates_plus: k_plus < -1.0 - VIOLATION_TOL,
        }
    }
}

/// K(t₁,t₂): prepare |H̄⟩, one environment pass, projective diagonal-basis
/// readout. Q(t₁) = +1 deterministically, so this is ⟨Q(t₂)⟩.
pub fn correlator_12(cfg: &ExperimentConfig) -> f64 {
    let state = dephase_channel(&QubitState::plus_state(), &cfg.stage(), cfg.spectrum());
    let (ph, pv) = measure_diag_basis(&state);
    ph - pv
}

/// K(t₁,t₃): both passes traversed by one photon, so the frequency average
/// runs over the accumulated phase 2ωd (a single doubled-delay stage).
pub fn correlator_13(cfg: &ExperimentConfig) -> f64 {
    let state = dephase_channel(&QubitState::plus_state(), &cfg.joint_stage(), cfg.spectrum());
    let (ph, pv) = measure_diag_basis(&state);
    ph - pv
}

/// K(t₁,t₃) if the two passes averaged over independent frequencies:
/// composition of two dephasing channels, contracting by decay(d)² instead
/// of decay(2d). Kept for contrast with the joint model; the harness does
/// not use it.
pub fn correlator_13_independent_environments(cfg: &ExperimentConfig) -> f64 {
    let stage = cfg.stage();
    let spec = cfg.spectrum();
    let once = dephase_channel(&QubitState::plus_state(), &stage, spec);
    let twice = dephase_channel(&once, &stage, spec);
    let (ph, pv) = measure_diag_basis(&twice);
    ph - pv
}

/// K(t₂,t₃) through the measurement circuit: the ancilla records Q(t₂) via
/// the CNOT, the second pass acts on the polarization alone, and the joint
/// readout correlates the path-encoded Q(t₂) with Q(t₃).
pub fn correlator_23_cnot(cfg: &ExperimentConfig) -> f64 {
    let stage = cfg.stage();
    let spec = cfg.spectrum();
    let joint = tensor(&QubitState::plus_state(), &QubitState::ground());
    let joint = apply_stage_on_system(&joint, &stage, spec);
    let joint = apply_cnot(&joint);
    let joint = apply_stage_on_system(&joint, &stage, spec);
    let p = joint_diag_path_probabilities(&joint);
    // path 0 records Q(t₂) = +1, path 1 records −1
    p.plus_path0 - p.plus_path1 - p.minus_path0 + p.minus_path1
}

/// K(t₂,t₃) by stepwise bookkeeping: measure at t₂, collapse each branch,
/// evolve again, recombine. Oracle for `correlator_23_cnot`; a branch of
/// zero probability contributes zero.
pub fn correlator_23_stepwise(cfg: &ExperimentConfig) -> f64 {
    let stage = cfg.stage();
    let spec = cfg.spectrum();
    let mid = dephase_channel(&QubitState::plus_state(), &stage, spec);
    let (ph, pv) = measure_diag_basis(&mid);

    let mut k = 0.0;
    if ph > COLLAPSE_FLOOR {
        let branch = collapse_diag(&mid, Outcome::Plus).expect("branch probability checked");
        let (qh, qv) = measure_diag_basis(&dephase_channel(&branch, &stage, spec));
        k += ph * (qh - qv);
    }
    if pv > COLLAPSE_FLOOR {
        let branch = collapse_diag(&mid, Outcome::Minus).expect("branch probability checked");
        let (qh, qv) = measure_diag_basis(&dephase_channel(&branch, &stage, spec));
        k += pv * (qv - qh);
    }
    k
}

/// Assemble all three correlators through the measurement protocol and form
/// K₋ and K₊.
pub fn evaluate_lg(cfg: &ExperimentConfig) -> LGResult {
    let set = CorrelatorSet::new(
        correlator_12(cfg),
        correlator_23_cnot(cfg),
        correlator_13(cfg),
    );
    LGResult::from_correlators(set)
}

/// Coherent closed form K₋(δ) = cos 2δ − 2 cos δ; minimum −1.5 at δ = π/3.
pub fn closed_form_k_minus(delta: f64) -> f64 {
    (2.0 * delta).cos() - 2.0 * delta.cos()
}

/// Coherent closed form K₊(δ) = cos 2δ + 2 cos δ; minimum −1.5 at δ = 2π/3.
pub fn closed_form_k_plus(delta: f64) -> f64 {
    (2.0 * delta).cos() + 2.0 * delta.cos()
}

// Decay envelopes of one retardation setting; the phase is scanned cheaply
// against fixed contractions.
struct DecayEnvelope {
    single: f64,
    double: f64,
}

impl DecayEnvelope {
    fn new(retardation_waves: f64, spectrum: &SpectralProfile) -> Self {
        let d = spectrum.retardation_delay(retardation_waves);
        Self {
            single: decay_factor(d, spectrum),
            double: decay_factor(2.0 * d, spectrum),
        }
    }

    fn k(&self, which: Inequality, phi: f64) -> f64 {
        let first = (2.0 * phi).cos() * self.double;
        let second = 2.0 * phi.cos() * self.single;
        match which {
            Inequality::Minus => first - second,
            Inequality::Plus => first + second,
        }
    }
}

/// Decohered closed forms at total per-stage phase φ = ω₀d + δ:
/// K∓ = cos(2φ)·exp(−¼d²σ²) ∓ 2cos(φ)·exp(−d²σ²/16). The tilt shifts the
/// phase but not the envelope.
pub fn closed_form_decohered(
    retardation_waves: f64,
    delta: f64,
    spectrum: &SpectralProfile,
) -> (f64, f64) {
    let env = DecayEnvelope::new(retardation_waves, spectrum);
    let phi = spectrum.omega0() * spectrum.retardation_delay(retardation_waves) + delta;
    (
        env.k(Inequality::Minus, phi),
        env.k(Inequality::Plus, phi),
    )
}

/// Extrema of one inequality over the full phase circle at fixed retardation.
#[derive(Debug, Clone, Copy)]
pub struct EnvelopeExtrema {
    pub min: f64,
    pub max: f64,
    /// Total phase φ ∈ [0, 2π) at which the minimum is attained.
    pub argmin_phase: f64,
}

/// `envelope_extrema_with_samples` at the default grid density.
pub fn envelope_extrema(
    retardation_waves: f64,
    spectrum: &SpectralProfile,
    which: Inequality,
) -> EnvelopeExtrema {
    envelope_extrema_with_samples(retardation_waves, spectrum, which, DEFAULT_TILT_SAMPLES)
}

/// Global extrema of the decohered closed form over φ ∈ [0, 2π): dense grid
/// of `samples` points plus golden-section refinement to 1e−10 in φ.
pub fn envelope_extrema_with_samples(
    retardation_waves: f64,
    spectrum: &SpectralProfile,
    which: Inequality,
    samples: usize,
) -> EnvelopeExtrema {
    let env = DecayEnvelope::new(retardation_waves, spectrum);
    let f = |phi: f64| env.k(which, phi);

    let n = samples.max(8);
    let step = 2.0 * PI / n as f64;
    let mut min_phi = 0.0;
    let mut min_val = f64::INFINITY;
    let mut max_phi = 0.0;
    let mut max_val = f64::NEG_INFINITY;
    for i in 0..n {
        let phi = i as f64 * step;
        let v = f(phi);
        if v < min_val {
            min_val = v;
            min_phi = phi;
        }
        if v > max_val {
            max_val = v;
            max_phi = phi;
        }
    }

    let (argmin, min) = golden_minimize(&f, min_phi - step, min_phi + step, 1e-10);
    let (_, neg_max) = golden_minimize(&|x| -f(x), max_phi - step, max_phi + step, 1e-10);
    let min = min.min(min_val);
    let max = (-neg_max).max(max_val);
    debug_assert!(min >= -1.5 - 1e-9, "below the quantum bound: {min}");

    EnvelopeExtrema {
        min,
        max,
        argmin_phase: argmin.rem_euclid(2.0 * PI),
    }
}

// Golden-section search for the minimum of a unimodal-on-bracket function;
// returns the best evaluated point.
fn golden_minimize<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut best_x = a;
    let mut best_v = f(a);
    let fb = f(b);
    if fb < best_v {
        best_x = b;
        best_v = fb;
    }

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        let (x, v) = if fc < fd { (c, fc) } else { (d, fd) };
        if v < best_v {
            best_x = x;
            best_v = v;
        }
    }
    (best_x, best_v)
}

/// Smallest retardation at which the envelope minimum has climbed back to
/// the classical bound −1, located by bisection on [0, 200] waves to a
/// residual of 1e−9.
pub fn find_transition(spectrum: &SpectralProfile, which: Inequality) -> Result<f64> {
    let g = |r: f64| envelope_extrema(r, spectrum, which).min + 1.0;
    let (mut lo, mut hi) = TRANSITION_BRACKET;
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo >= 0.0 || g_hi <= 0.0 {
        return Err(Error::BracketFailure { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid.abs() <= TRANSITION_RESIDUAL_TOL {
            return Ok(mid);
        }
        if g_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dephasing::SPEED_OF_LIGHT;
    use rand_chacha::rand_core::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const LAMBDA0: f64 = 0.78e-6;
    const SIGMA: f64 = 3.56e13;

    fn spectrum() -> SpectralProfile {
        SpectralProfile::new(LAMBDA0, SIGMA).unwrap()
    }

    fn cfg(retardation: f64, tilt: f64) -> ExperimentConfig {
        ExperimentConfig::new(spectrum(), retardation, tilt).unwrap()
    }

    fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    fn random_cfg(rng: &mut ChaCha8Rng) -> ExperimentConfig {
        cfg(60.0 * uniform(rng), 2.0 * PI * uniform(rng))
    }

    // Tilt making the total per-stage phase ≡ 0 (mod 2π).
    fn cancelling_tilt(retardation: f64) -> f64 {
        let spec = spectrum();
        (-(spec.omega0() * spec.retardation_delay(retardation))).rem_euclid(2.0 * PI)
    }

    // Closed-form envelope extrema derived by calculus: with contraction
    // x = exp(−d²σ²/16), the interior critical point cos φ* = 1/(2x³)
    // exists for 2x³ ≥ 1 and gives −1/(2x²) − x⁴; otherwise the minimum
    // sits at the φ = 0 endpoint, x⁴ − 2x. The maximum is x⁴ + 2x at φ = π.
    fn analytic_envelope_min(x: f64) -> f64 {
        if 2.0 * x.powi(3) >= 1.0 {
            -0.5 / (x * x) - x.powi(4)
        } else {
            x.powi(4) - 2.0 * x
        }
    }

    fn analytic_envelope_max(x: f64) -> f64 {
        x.powi(4) + 2.0 * x
    }

    // Transition oracle: at the crossing the minimum is the endpoint value,
    // so x⁴ − 2x = −1 with nontrivial root x³ + x² + x = 1, and
    // R = 4√(−ln x)·c/(σλ₀).
    fn transition_oracle(spec: &SpectralProfile) -> f64 {
        let f = |x: f64| x * x * x + x * x + x - 1.0;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        4.0 * (-x.ln()).sqrt() * SPEED_OF_LIGHT / (spec.sigma() * spec.lambda0())
    }

    #[test]
    fn correlator_12_coherent() {
        assert!((correlator_12(&cfg(0.0, 0.0)) - 1.0).abs() < 1e-15);
        for delta in [0.3, PI / 3.0, 2.0, 5.5] {
            let k = correlator_12(&cfg(0.0, delta));
            assert!((k - delta.cos()).abs() < 1e-12, "K12({delta}) = {k}");
        }
    }

    #[test]
    fn correlator_12_decay_at_cancelled_phase() {
        let spec = spectrum();
        for r in [5.0, 20.0, 33.0, 50.0] {
            let k = correlator_12(&cfg(r, cancelling_tilt(r)));
            let want = decay_factor(spec.retardation_delay(r), &spec);
            assert!((k - want).abs() < 1e-12);
        }
    }

    #[test]
    fn correlator_13_coherent() {
        for delta in [0.0, 0.7, PI / 3.0, 4.0] {
            let k = correlator_13(&cfg(0.0, delta));
            assert!((k - (2.0 * delta).cos()).abs() < 1e-12);
        }
        assert!((correlator_13(&cfg(0.0, PI / 2.0)) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlator_13_joint_vs_independent_contraction() {
        let spec = spectrum();
        for r in [10.0, 25.0, 40.0] {
            let c = cfg(r, cancelling_tilt(r));
            let d = spec.retardation_delay(r);
            let single = decay_factor(d, &spec);

            // Joint frequency average: decay(2d) = decay(d)⁴.
            let joint = correlator_13(&c);
            assert!((joint - decay_factor(2.0 * d, &spec)).abs() < 1e-12);
            assert!((joint - single.powi(4)).abs() < 1e-12);

            // Independent environments compose to decay(d)².
            let indep = correlator_13_independent_environments(&c);
            assert!((indep - single.powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn correlator_23_cnot_coherent() {
        assert!((correlator_23_cnot(&cfg(0.0, 0.0)) - 1.0).abs() < 1e-15);
        for delta in [0.4, PI / 3.0, 2.9] {
            let k = correlator_23_cnot(&cfg(0.0, delta));
            assert!((k - delta.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn stationarity_of_cnot_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..200 {
            let c = random_cfg(&mut rng);
            let diff = (correlator_23_cnot(&c) - correlator_12(&c)).abs();
            assert!(diff <= 1e-12, "stationarity residual {diff:.3e}");
        }
    }

    #[test]
    fn stepwise_oracle_matches_cnot() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for _ in 0..100 {
            let c = random_cfg(&mut rng);
            let diff = (correlator_23_cnot(&c) - correlator_23_stepwise(&c)).abs();
            assert!(diff <= 1e-12, "oracle residual {diff:.3e}");
        }
    }

    #[test]
    fn stepwise_handles_degenerate_branch() {
        // Tilt π sends |H̄⟩ to |V̄⟩ with certainty: the H̄ branch at t₂ has
        // probability 0 and the second flip returns |H̄⟩, so ⟨Q₂Q₃⟩ = −1.
        let k = correlator_23_stepwise(&cfg(0.0, PI));
        assert!((k + 1.0).abs() < 1e-12);
        assert!((correlator_23_stepwise(&cfg(0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_lg_coherent_minima() {
        let res = evaluate_lg(&cfg(0.0, PI / 3.0));
        assert!((res.k_minus + 1.5).abs() < 1e-12);
        assert!(res.violates_minus);

        let res = evaluate_lg(&cfg(0.0, 2.0 * PI / 3.0));
        assert!((res.k_plus + 1.5).abs() < 1e-12);
        assert!(res.violates_plus);

        let res = evaluate_lg(&cfg(0.0, 0.0));
        assert!((res.k_minus + 1.0).abs() < 1e-15);
        assert!((res.k_plus - 3.0).abs() < 1e-15);
        assert!(!res.violates_minus && !res.violates_plus);
    }

    #[test]
    fn lg_result_combination_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for _ in 0..100 {
            let res = evaluate_lg(&random_cfg(&mut rng));
            let CorrelatorSet { k12, k23, k13 } = res.correlators;
            assert!((res.k_minus - (k13 - k12 - k23)).abs() <= 1e-12);
            assert!((res.k_plus - (k13 + k12 + k23)).abs() <= 1e-12);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_k_minus(PI / 3.0) + 1.5).abs() < 1e-15);
        assert!((closed_form_k_plus(2.0 * PI / 3.0) + 1.5).abs() < 1e-15);
        assert!((closed_form_k_minus(0.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn mirror_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        for _ in 0..1000 {
            let delta = 2.0 * PI * uniform(&mut rng);
            let diff = (closed_form_k_plus(delta) - closed_form_k_minus(PI - delta)).abs();
            assert!(diff <= 1e-12);
        }
    }

    #[test]
    fn decohered_reduces_to_coherent_at_zero_retardation() {
        let spec = spectrum();
        for i in 0..64 {
            let delta = i as f64 * (2.0 * PI / 64.0);
            let (km, kp) = closed_form_decohered(0.0, delta, &spec);
            assert!((km - closed_form_k_minus(delta)).abs() < 1e-15);
            assert!((kp - closed_form_k_plus(delta)).abs() < 1e-15);
        }
    }

    #[test]
    fn protocol_matches_closed_form() {
        // The matrix pipeline and the trig closed form must agree for every
        // setting, coherent or decohered.
        let spec = spectrum();
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for _ in 0..200 {
            let r = 60.0 * uniform(&mut rng);
            let delta = 2.0 * PI * uniform(&mut rng);
            let res = evaluate_lg(&cfg(r, delta));
            let (km, kp) = closed_form_decohered(r, delta, &spec);
            assert!((res.k_minus - km).abs() <= 1e-12);
            assert!((res.k_plus - kp).abs() <= 1e-12);
        }
    }

    #[test]
    fn envelope_extrema_coherent() {
        let e = envelope_extrema(0.0, &spectrum(), Inequality::Minus);
        assert!((e.min + 1.5).abs() <= 1e-9);
        assert!((e.max - 3.0).abs() <= 1e-9);
        assert!((e.argmin_phase - PI / 3.0).abs() <= 1e-6);

        let e = envelope_extrema(0.0, &spectrum(), Inequality::Plus);
        assert!((e.min + 1.5).abs() <= 1e-9);
        assert!((e.argmin_phase - 2.0 * PI / 3.0).abs() <= 1e-6);
    }

    #[test]
    fn envelope_extrema_decayed_limit() {
        let e = envelope_extrema(200.0, &spectrum(), Inequality::Minus);
        assert!(e.min.abs() < 1e-8 && e.max.abs() < 1e-8);
    }

    #[test]
    fn envelope_extrema_partial_decoherence() {
        // At 20 waves the minimum is strictly between −1.5 and −1; the
        // interior critical point gives −1/(2x²) − x⁴ ≈ −1.19187.
        let e = envelope_extrema(20.0, &spectrum(), Inequality::Minus);
        assert!(e.min > -1.5 && e.min < -1.0);
        assert!((e.min + 1.191872).abs() < 1e-5, "min {}", e.min);

        // Just below the crossing the violation is marginal.
        let e = envelope_extrema(33.0, &spectrum(), Inequality::Minus);
        assert!((e.min + 1.0187).abs() < 1e-3, "min {}", e.min);
    }

    #[test]
    fn envelope_matches_analytic_extrema() {
        let spec = spectrum();
        for i in 0..=120 {
            let r = 0.5 * i as f64;
            let x = decay_factor(spec.retardation_delay(r), &spec);
            for which in [Inequality::Minus, Inequality::Plus] {
                let e = envelope_extrema(r, &spec, which);
                assert!(
                    (e.min - analytic_envelope_min(x)).abs() <= 1e-9,
                    "min at R = {r}: {} vs {}",
                    e.min,
                    analytic_envelope_min(x)
                );
                assert!((e.max - analytic_envelope_max(x)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn envelope_symmetry_between_inequalities() {
        let spec = spectrum();
        for i in 0..=60 {
            let r = i as f64;
            let minus = envelope_extrema(r, &spec, Inequality::Minus);
            let plus = envelope_extrema(r, &spec, Inequality::Plus);
            assert!((minus.min - plus.min).abs() <= 1e-9);
            assert!((minus.max - plus.max).abs() <= 1e-9);
        }
    }

    #[test]
    fn envelope_minimum_is_monotone() {
        let spec = spectrum();
        let mut last = f64::NEG_INFINITY;
        for i in 0..200 {
            let r = 60.0 * i as f64 / 199.0;
            let min = envelope_extrema(r, &spec, Inequality::Minus).min;
            assert!(min >= last - 1e-12, "envelope dipped at R = {r}");
            last = min;
        }
    }

    #[test]
    fn quantum_bound_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(127);
        for _ in 0..300 {
            let res = evaluate_lg(&random_cfg(&mut rng));
            assert!(res.k_minus >= -1.5 - 1e-9);
            assert!(res.k_plus >= -1.5 - 1e-9);
        }
    }

    #[test]
    fn transition_matches_analytic_oracle() {
        let spec = spectrum();
        let r_star = find_transition(&spec, Inequality::Minus).unwrap();
        let oracle = transition_oracle(&spec);
        assert!(
            (r_star - oracle).abs() <= 1e-6,
            "bisection {r_star} vs oracle {oracle}"
        );
        assert!((33.2..=34.2).contains(&r_star), "R* = {r_star}");
    }

    #[test]
    fn transition_same_for_both_inequalities() {
        let spec = spectrum();
        let minus = find_transition(&spec, Inequality::Minus).unwrap();
        let plus = find_transition(&spec, Inequality::Plus).unwrap();
        assert!((minus - plus).abs() <= 1e-6);
    }

    #[test]
    fn transition_scales_inversely_with_sigma() {
        let base = find_transition(&spectrum(), Inequality::Minus).unwrap();
        let doubled = SpectralProfile::new(LAMBDA0, 2.0 * SIGMA).unwrap();
        let r2 = find_transition(&doubled, Inequality::Minus).unwrap();
        assert!((r2 * 2.0 - base).abs() / base < 0.01);
    }

    #[test]
    fn transition_needs_a_crossing() {
        // Nearly coherent spectrum: no decay inside the bracket.
        let spec = SpectralProfile::new(LAMBDA0, 1.0).unwrap();
        assert!(matches!(
            find_transition(&spec, Inequality::Minus),
            Err(Error::BracketFailure { .. })
        ));
    }

    #[test]
    fn config_rejects_bad_values() {
        assert!(ExperimentConfig::new(spectrum(), -1.0, 0.0).is_err());
        assert!(ExperimentConfig::new(spectrum(), 1.0, f64::NAN).is_err());
    }
}
