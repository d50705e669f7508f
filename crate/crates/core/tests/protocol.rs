//! Cross-module flows through the public API: the measurement circuit
//! against its closed forms, both frequency-averaging routes, and the
//! transition search.

use std::f64::consts::PI;

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lgsim_core::dephasing::{apply_stage_on_system, decay_factor, dephase_channel};
use lgsim_core::lg::{
    closed_form_decohered, correlator_13, correlator_13_independent_environments,
    correlator_23_cnot, evaluate_lg,
};
use lgsim_core::qubit::{
    apply_cnot, joint_diag_path_probabilities, measure_diag_basis, tensor,
};
use lgsim_core::{DephasingStage, ExperimentConfig, Inequality, QubitState, SpectralProfile};

fn spectrum() -> SpectralProfile {
    SpectralProfile::new(0.78e-6, 3.56e13).unwrap()
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

#[test]
fn circuit_matches_manual_composition() {
    // Manually walk the measurement circuit and compare with the engine's
    // K(t2,t3) in one shot.
    let spec = spectrum();
    let mut rng = ChaCha8Rng::seed_from_u64(2211);
    for _ in 0..50 {
        let r = 60.0 * uniform(&mut rng);
        let tilt = 2.0 * PI * uniform(&mut rng);
        let stage = DephasingStage::new(r, tilt).unwrap();

        let joint = tensor(&QubitState::plus_state(), &QubitState::ground());
        let joint = apply_stage_on_system(&joint, &stage, &spec);
        let joint = apply_cnot(&joint);
        let joint = apply_stage_on_system(&joint, &stage, &spec);
        let p = joint_diag_path_probabilities(&joint);
        let manual = p.plus_path0 - p.plus_path1 - p.minus_path0 + p.minus_path1;

        let cfg = ExperimentConfig::new(spec, r, tilt).unwrap();
        assert!((manual - correlator_23_cnot(&cfg)).abs() <= 1e-15);
    }
}

#[test]
fn joint_average_beats_independent_composition() {
    // One photon, one frequency: K(t1,t3) keeps more coherence than two
    // independently averaged passes would, decay(2d) < decay(d)² for d > 0.
    let spec = spectrum();
    for r in [10.0, 20.0, 40.0] {
        let tilt = {
            let base = spec.omega0() * spec.retardation_delay(r);
            (-base).rem_euclid(2.0 * PI)
        };
        let cfg = ExperimentConfig::new(spec, r, tilt).unwrap();
        let joint = correlator_13(&cfg);
        let independent = correlator_13_independent_environments(&cfg);
        assert!(
            joint < independent,
            "joint {joint} should lie below independent {independent} at R = {r}"
        );
        let d = spec.retardation_delay(r);
        assert!((joint - decay_factor(2.0 * d, &spec)).abs() <= 1e-12);
        assert!((independent - decay_factor(d, &spec).powi(2)).abs() <= 1e-12);
    }
}

#[test]
fn engine_results_track_closed_forms_everywhere() {
    let spec = spectrum();
    let mut rng = ChaCha8Rng::seed_from_u64(2213);
    for _ in 0..300 {
        let r = 60.0 * uniform(&mut rng);
        let tilt = 2.0 * PI * uniform(&mut rng);
        let res = evaluate_lg(&ExperimentConfig::new(spec, r, tilt).unwrap());
        let (km, kp) = closed_form_decohered(r, tilt, &spec);
        assert!((res.k_minus - km).abs() <= 1e-12);
        assert!((res.k_plus - kp).abs() <= 1e-12);
        assert_eq!(res.violates_minus, res.k_minus < -1.0 - 1e-9);
    }
}

#[test]
fn violation_region_ends_at_the_transition() {
    use lgsim_core::lg::{envelope_extrema, find_transition};
    let spec = spectrum();
    let r_star = find_transition(&spec, Inequality::Minus).unwrap();
    let before = envelope_extrema(r_star - 1.0, &spec, Inequality::Minus).min;
    let after = envelope_extrema(r_star + 1.0, &spec, Inequality::Minus).min;
    assert!(before < -1.0, "still violating just below R*: {before}");
    assert!(after > -1.0, "no violation above R*: {after}");
}

#[test]
fn channel_and_circuit_compose_without_breaking_states() {
    let spec = spectrum();
    let stage = DephasingStage::new(33.0, 0.7).unwrap();
    let mut state = QubitState::plus_state();
    for _ in 0..40 {
        state = dephase_channel(&state, &stage, &spec);
        assert!(state.hermiticity_residual() <= 1e-12);
        assert!(state.trace_residual() <= 1e-12);
        assert!(state.min_eigenvalue() >= -1e-10);
    }
    // After many passes the state is nearly maximally mixed in the H/V
    // coherence sense: the diagonal never moved, the coherence is gone.
    assert!(state.element(1, 0).norm() < 1e-8);
    let (ph, pv) = measure_diag_basis(&state);
    assert!((ph - 0.5).abs() < 1e-8 && (pv - 0.5).abs() < 1e-8);
}
