//! Runtime verification of every module invariant, with the measured
//! residual reported per check. Randomized checks draw from the configured
//! seed, so a run is reproducible end to end.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lgsim_core::classical::{classical_correlators, classical_lg, monte_carlo_classical, FlipModel};
use lgsim_core::dephasing::{
    apply_stage_on_system, decay_factor, dephase_channel, dephase_channel_quadrature,
    DephasingStage, SpectralProfile, SPEED_OF_LIGHT,
};
use lgsim_core::lg::{
    closed_form_decohered, closed_form_k_minus, closed_form_k_plus, correlator_12,
    correlator_23_cnot, correlator_23_stepwise, envelope_extrema, evaluate_lg, find_transition,
    ExperimentConfig, Inequality,
};
use lgsim_core::qubit::{
    apply_cnot, apply_on_system, birefringent_phase, collapse_diag, measure_diag_basis, tensor,
    BipartiteState, Outcome, QubitState, COLLAPSE_FLOOR,
};

use crate::config::{PartialConfig, SweepConfig};
use crate::output::{csv_string, svg_string};
use crate::sweep::run_envelope_sweep;

/// One verified invariant: the worst residual observed and the bound it
/// must stay under.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Run every invariant of every module.
pub fn run_verification(cfg: &SweepConfig) -> Vec<CheckOutcome> {
    let spec = &cfg.spectrum;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    vec![
        check_state_invariants(spec, &mut rng),
        check_phase_additivity(&mut rng),
        check_cnot_involution(&mut rng),
        check_ancilla_record(&mut rng),
        check_collapse_then_measure(&mut rng),
        check_channel_cptp(spec, &mut rng),
        check_stage_composition(spec, &mut rng),
        check_coherent_limit(spec, &mut rng),
        check_quadrature_oracle(spec, &mut rng),
        check_monotone_decoherence(spec, &mut rng),
        check_stationarity(spec, &mut rng),
        check_stepwise_oracle(spec, &mut rng),
        check_closed_form_coherent(spec, &mut rng),
        check_closed_form_decohered(spec, &mut rng),
        check_quantum_bound(spec, &mut rng),
        check_envelope_monotone(spec),
        check_mirror_symmetry(&mut rng),
        check_transition_oracle(spec),
        check_classical_never_violates(),
        check_classical_identities(),
        check_classical_stationarity(),
        check_classical_monte_carlo(cfg.seed),
        check_harness_determinism(),
        check_single_crossing(spec),
    ]
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

fn random_qubit_state(rng: &mut ChaCha8Rng) -> QubitState {
    let zero = Complex64::new(0.0, 0.0);
    let mut a = [[zero; 2]; 2];
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v = Complex64::new(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0);
        }
    }
    let mut g = [[zero; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            for k in 0..2 {
                g[r][c] += a[r][k] * a[c][k].conj();
            }
        }
    }
    let tr = (g[0][0] + g[1][1]).re;
    for row in g.iter_mut() {
        for v in row.iter_mut() {
            *v /= tr;
        }
    }
    QubitState::new(g).expect("Gram construction yields a density matrix")
}

fn random_bipartite_state(rng: &mut ChaCha8Rng) -> BipartiteState {
    let zero = Complex64::new(0.0, 0.0);
    let mut a = [[zero; 4]; 4];
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v = Complex64::new(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0);
        }
    }
    let mut g = [[zero; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            for k in 0..4 {
                g[r][c] += a[r][k] * a[c][k].conj();
            }
        }
    }
    let tr = (g[0][0] + g[1][1] + g[2][2] + g[3][3]).re;
    for row in g.iter_mut() {
        for v in row.iter_mut() {
            *v /= tr;
        }
    }
    BipartiteState::new(g).expect("Gram construction yields a density matrix")
}

fn random_config(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> ExperimentConfig {
    ExperimentConfig::new(*spec, 60.0 * uniform(rng), 2.0 * PI * uniform(rng))
        .expect("sampled setting is valid")
}

fn max_diff_2(a: &QubitState, b: &QubitState) -> f64 {
    let (ma, mb) = (a.matrix(), b.matrix());
    let mut worst = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            worst = worst.max((ma[r][c] - mb[r][c]).norm());
        }
    }
    worst
}

fn max_diff_4(a: &BipartiteState, b: &BipartiteState) -> f64 {
    let (ma, mb) = (a.matrix(), b.matrix());
    let mut worst = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            worst = worst.max((ma[r][c] - mb[r][c]).norm());
        }
    }
    worst
}

fn density_residual_2(s: &QubitState) -> f64 {
    s.hermiticity_residual()
        .max(s.trace_residual())
        .max((-s.min_eigenvalue()).max(0.0))
}

fn density_residual_4(s: &BipartiteState) -> f64 {
    s.hermiticity_residual()
        .max(s.trace_residual())
        .max((-s.min_eigenvalue()).max(0.0))
}

fn check_state_invariants(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let rho = random_qubit_state(rng);
        let phase = 4.0 * PI * (2.0 * uniform(rng) - 1.0);
        let stage = DephasingStage::new(60.0 * uniform(rng), 2.0 * PI * uniform(rng)).unwrap();

        let evolved = birefringent_phase(&rho, phase).unwrap();
        worst = worst.max(density_residual_2(&evolved));

        let joint = tensor(&evolved, &QubitState::ground());
        let joint = apply_stage_on_system(&joint, &stage, spec);
        let joint = apply_cnot(&joint);
        let joint = apply_on_system(&joint, phase).unwrap();
        worst = worst.max(density_residual_4(&joint));
        worst = worst.max(density_residual_2(&joint.trace_out_path()));
    }
    CheckOutcome {
        name: "quantum-core/invariant-preservation",
        residual: worst,
        tolerance: 1e-10,
    }
}

fn check_phase_additivity(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let rho = random_qubit_state(rng);
        let a = 4.0 * PI * (2.0 * uniform(rng) - 1.0);
        let b = 4.0 * PI * (2.0 * uniform(rng) - 1.0);
        let chained = birefringent_phase(&birefringent_phase(&rho, a).unwrap(), b).unwrap();
        let direct = birefringent_phase(&rho, a + b).unwrap();
        worst = worst.max(max_diff_2(&chained, &direct));
    }
    CheckOutcome {
        name: "quantum-core/phase-additivity",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_cnot_involution(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rho = random_bipartite_state(rng);
        worst = worst.max(max_diff_4(&apply_cnot(&apply_cnot(&rho)), &rho));
    }
    CheckOutcome {
        name: "quantum-core/cnot-involution",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_ancilla_record(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let rho = random_qubit_state(rng);
        let (ph, pv) = measure_diag_basis(&rho);
        let joint = apply_cnot(&tensor(&rho, &QubitState::ground()));
        let (p0, p1) = joint.path_probabilities();
        worst = worst.max((p0 - ph).abs()).max((p1 - pv).abs());
    }
    CheckOutcome {
        name: "quantum-core/ancilla-faithful-record",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_collapse_then_measure(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let rho = random_qubit_state(rng);
        let (ph, pv) = measure_diag_basis(&rho);
        if ph > COLLAPSE_FLOOR {
            let (h, _) = measure_diag_basis(&collapse_diag(&rho, Outcome::Plus).unwrap());
            worst = worst.max((h - 1.0).abs());
        }
        if pv > COLLAPSE_FLOOR {
            let (_, v) = measure_diag_basis(&collapse_diag(&rho, Outcome::Minus).unwrap());
            worst = worst.max((v - 1.0).abs());
        }
    }
    CheckOutcome {
        name: "quantum-core/collapse-then-measure",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_channel_cptp(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let rho = random_qubit_state(rng);
        let stage = DephasingStage::new(60.0 * uniform(rng), 2.0 * PI * uniform(rng)).unwrap();
        worst = worst.max(density_residual_2(&dephase_channel(&rho, &stage, spec)));
    }
    CheckOutcome {
        name: "dephasing/channel-cptp",
        residual: worst,
        tolerance: 1e-10,
    }
}

fn check_stage_composition(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    // Two identical passes contract coherences by decay(d)²; one doubled
    // plate contracts by decay(2d) = decay(d)⁴.
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rho = random_qubit_state(rng);
        let r = 60.0 * uniform(rng);
        let tilt = 2.0 * PI * uniform(rng);
        let stage = DephasingStage::new(r, tilt).unwrap();
        let double = DephasingStage::new(2.0 * r, 2.0 * tilt).unwrap();

        let d = stage.delay(spec);
        let phase = Complex64::from_polar(1.0, 2.0 * (spec.omega0() * d + tilt));
        let base = rho.element(1, 0);

        let twice = dephase_channel(&dephase_channel(&rho, &stage, spec), &stage, spec);
        let want = base * decay_factor(d, spec).powi(2) * phase;
        worst = worst.max((twice.element(1, 0) - want).norm());

        let single = dephase_channel(&rho, &double, spec);
        let want = base * decay_factor(2.0 * d, spec) * phase;
        worst = worst.max((single.element(1, 0) - want).norm());
    }
    CheckOutcome {
        name: "dephasing/stage-composition",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_coherent_limit(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    // Thin-plate limit: contraction indistinguishable from 1, channel equals
    // the pure rotation by the total phase ω₀·d + tilt.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let rho = random_qubit_state(rng);
        let tilt = 2.0 * PI * uniform(rng);
        for r in [0.0, 1e-9, 1e-6] {
            let stage = DephasingStage::new(r, tilt).unwrap();
            let chan = dephase_channel(&rho, &stage, spec);
            let total = spec.omega0() * stage.delay(spec) + tilt;
            let pure = birefringent_phase(&rho, total).unwrap();
            worst = worst.max(max_diff_2(&chan, &pure));
        }
    }
    CheckOutcome {
        name: "dephasing/coherent-limit",
        residual: worst,
        tolerance: 1e-9,
    }
}

fn check_quadrature_oracle(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rho = random_qubit_state(rng);
        let stage = DephasingStage::new(60.0 * uniform(rng), 2.0 * PI * uniform(rng)).unwrap();
        let analytic = dephase_channel(&rho, &stage, spec);
        let quad = dephase_channel_quadrature(&rho, &stage, spec, 2048).unwrap();
        worst = worst.max(max_diff_2(&analytic, &quad));
    }
    // The contraction itself must also come out of the integral.
    let plus = QubitState::plus_state();
    for r in [10.0, 33.0, 50.0] {
        let stage = DephasingStage::new(r, 0.0).unwrap();
        let quad = dephase_channel_quadrature(&plus, &stage, spec, 2048).unwrap();
        let ratio = quad.element(1, 0).norm() / plus.element(1, 0).norm();
        worst = worst.max((ratio - decay_factor(stage.delay(spec), spec)).abs());
    }
    CheckOutcome {
        name: "dephasing/quadrature-oracle",
        residual: worst,
        tolerance: 1e-6,
    }
}

fn check_monotone_decoherence(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let rho = random_qubit_state(rng);
        let mut last = f64::INFINITY;
        for i in 0..=60 {
            let stage = DephasingStage::new(i as f64, 0.0).unwrap();
            let mag = dephase_channel(&rho, &stage, spec).element(1, 0).norm();
            worst = worst.max((mag - last).max(0.0));
            last = mag;
        }
    }
    CheckOutcome {
        name: "dephasing/monotone-decoherence",
        residual: worst,
        tolerance: 1e-15,
    }
}

fn check_stationarity(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let cfg = random_config(spec, rng);
        worst = worst.max((correlator_23_cnot(&cfg) - correlator_12(&cfg)).abs());
    }
    CheckOutcome {
        name: "lg-engine/stationarity",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_stepwise_oracle(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let cfg = random_config(spec, rng);
        worst = worst.max((correlator_23_cnot(&cfg) - correlator_23_stepwise(&cfg)).abs());
    }
    CheckOutcome {
        name: "lg-engine/stepwise-oracle",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_closed_form_coherent(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let delta = 2.0 * PI * uniform(rng);
        let res = evaluate_lg(&ExperimentConfig::new(*spec, 0.0, delta).unwrap());
        worst = worst.max((res.k_minus - closed_form_k_minus(delta)).abs());
        worst = worst.max((res.k_plus - closed_form_k_plus(delta)).abs());
    }
    CheckOutcome {
        name: "lg-engine/closed-form-coherent",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_closed_form_decohered(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let cfg = random_config(spec, rng);
        let res = evaluate_lg(&cfg);
        let (km, kp) = closed_form_decohered(cfg.retardation_waves(), cfg.tilt_phase(), spec);
        worst = worst.max((res.k_minus - km).abs()).max((res.k_plus - kp).abs());
    }
    CheckOutcome {
        name: "lg-engine/closed-form-decohered",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_quantum_bound(spec: &SpectralProfile, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let res = evaluate_lg(&random_config(spec, rng));
        worst = worst.max(-1.5 - res.k_minus).max(-1.5 - res.k_plus);
    }
    for i in 0..=60 {
        let e = envelope_extrema(i as f64, spec, Inequality::Minus);
        worst = worst.max(-1.5 - e.min);
    }
    CheckOutcome {
        name: "lg-engine/quantum-bound",
        residual: worst.max(0.0),
        tolerance: 1e-9,
    }
}

fn check_envelope_monotone(spec: &SpectralProfile) -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut last = f64::NEG_INFINITY;
    for i in 0..200 {
        let r = 60.0 * i as f64 / 199.0;
        let min = envelope_extrema(r, spec, Inequality::Minus).min;
        worst = worst.max(last - min);
        last = min;
    }
    CheckOutcome {
        name: "lg-engine/envelope-monotone",
        residual: worst.max(0.0),
        tolerance: 1e-12,
    }
}

fn check_mirror_symmetry(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let delta = 2.0 * PI * uniform(rng);
        worst = worst.max((closed_form_k_plus(delta) - closed_form_k_minus(PI - delta)).abs());
    }
    CheckOutcome {
        name: "lg-engine/mirror-symmetry",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn check_transition_oracle(spec: &SpectralProfile) -> CheckOutcome {
    // Analytic crossing: x⁴ − 2x = −1 at the nontrivial root of
    // x³ + x² + x = 1, so R* = 4√(−ln x)·c/(σλ₀).
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
    let oracle = 4.0 * (-x.ln()).sqrt() * SPEED_OF_LIGHT / (spec.sigma() * spec.lambda0());

    let residual = match (
        find_transition(spec, Inequality::Minus),
        find_transition(spec, Inequality::Plus),
    ) {
        (Ok(minus), Ok(plus)) => (minus - oracle).abs().max((plus - oracle).abs()),
        _ => f64::INFINITY,
    };
    CheckOutcome {
        name: "lg-engine/transition-oracle",
        residual,
        tolerance: 1e-6,
    }
}

fn check_classical_never_violates() -> CheckOutcome {
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let p = i as f64 / 9_999.0;
        let res = classical_lg(&FlipModel::new(p).unwrap());
        worst = worst.max(-1.0 - res.k_minus).max(-1.0 - res.k_plus);
    }
    CheckOutcome {
        name: "classical-realist/no-violation",
        residual: worst.max(0.0),
        tolerance: 0.0,
    }
}

fn check_classical_identities() -> CheckOutcome {
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let p = i as f64 / 9_999.0;
        let res = classical_lg(&FlipModel::new(p).unwrap());
        worst = worst.max((res.k_minus + 1.0 - 4.0 * p * p).abs());
        let q = p - 1.0;
        worst = worst.max((res.k_plus + 1.0 - 4.0 * q * q).abs());
    }
    CheckOutcome {
        name: "classical-realist/quadratic-identities",
        residual: worst,
        tolerance: 1e-15,
    }
}

fn check_classical_stationarity() -> CheckOutcome {
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let p = i as f64 / 9_999.0;
        let c = classical_correlators(&FlipModel::new(p).unwrap());
        worst = worst.max((c.k12 - c.k23).abs());
    }
    CheckOutcome {
        name: "classical-realist/stationarity",
        residual: worst,
        tolerance: 0.0,
    }
}

fn check_classical_monte_carlo(seed: u64) -> CheckOutcome {
    const TRIALS: u64 = 1_000_000;
    let mut worst = 0.0f64;
    for s in 0..20u64 {
        for tenths in 1..=9u64 {
            let p = tenths as f64 / 10.0;
            let model = FlipModel::new(p).unwrap();
            let mc = monte_carlo_classical(&model, TRIALS, seed.wrapping_add(s)).unwrap();
            let exact = classical_correlators(&model);
            worst = worst
                .max((mc.k12 - exact.k12).abs())
                .max((mc.k23 - exact.k23).abs())
                .max((mc.k13 - exact.k13).abs());
        }
    }
    CheckOutcome {
        name: "classical-realist/monte-carlo",
        residual: worst,
        tolerance: 4.0 / (TRIALS as f64).sqrt(),
    }
}

fn check_harness_determinism() -> CheckOutcome {
    let cfg: SweepConfig = PartialConfig {
        r_max: Some(8.0),
        r_step: Some(0.5),
        tilt_samples: Some(720),
        ..Default::default()
    }
    .into_config()
    .expect("small config is valid");

    let rows_a = run_envelope_sweep(&cfg);
    let rows_b = run_envelope_sweep(&cfg);
    let csv_diff = bytes_differing(csv_string(&rows_a).as_bytes(), csv_string(&rows_b).as_bytes());
    let svg_diff = bytes_differing(svg_string(&rows_a).as_bytes(), svg_string(&rows_b).as_bytes());
    CheckOutcome {
        name: "sweep-harness/determinism",
        residual: (csv_diff + svg_diff) as f64,
        tolerance: 0.0,
    }
}

fn bytes_differing(a: &[u8], b: &[u8]) -> usize {
    if a == b {
        0
    } else {
        a.len().abs_diff(b.len())
            + a.iter()
                .zip(b.iter())
                .filter(|(x, y)| x != y)
                .count()
                .max(1)
    }
}

fn check_single_crossing(spec: &SpectralProfile) -> CheckOutcome {
    let mut crossings = 0u32;
    let mut last = envelope_extrema(0.0, spec, Inequality::Minus).min + 1.0;
    for i in 1..=200 {
        let g = envelope_extrema(i as f64, spec, Inequality::Minus).min + 1.0;
        if (last < 0.0) != (g < 0.0) {
            crossings += 1;
        }
        last = g;
    }
    CheckOutcome {
        name: "sweep-harness/single-crossing",
        residual: (crossings as f64 - 1.0).abs(),
        tolerance: 0.0,
    }
}
