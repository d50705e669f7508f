//! Sweep drivers: the envelope sweep over retardation, single-retardation
//! tilt scans, the transition search, and the classical-model curves.

use lgsim_core::classical::{classical_lg, FlipModel};
use lgsim_core::lg::{
    closed_form_decohered, envelope_extrema_with_samples, find_transition, Inequality,
};
use lgsim_core::SpectralProfile;

use std::f64::consts::PI;

use crate::config::SweepConfig;
use crate::HarnessError;

/// Bound below which a macrorealist description is excluded.
pub const CLASSICAL_BOUND: f64 = -1.0;
/// Quantum-mechanical floor of both combinations.
pub const QUANTUM_BOUND: f64 = -1.5;

/// One retardation grid point of the envelope sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub retardation: f64,
    pub env_min_minus: f64,
    pub env_max_minus: f64,
    pub env_min_plus: f64,
    pub env_max_plus: f64,
}

/// One tilt grid point: both inequalities at the same tilt phase.
#[derive(Debug, Clone, Copy)]
pub struct TiltRow {
    pub delta: f64,
    pub k_minus: f64,
    pub k_plus: f64,
}

/// One flip-probability grid point of the classical curves.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalRow {
    pub p: f64,
    pub k12: f64,
    pub k23: f64,
    pub k13: f64,
    pub k_minus: f64,
    pub k_plus: f64,
}

/// Transition retardations for both inequalities, plus the spectrum they
/// were computed for.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdSummary {
    pub r_star_minus: f64,
    pub r_star_plus: f64,
    pub sigma: f64,
    pub lambda0: f64,
}

/// The inclusive retardation grid start, start+step, …, stop.
pub fn retardation_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let slack = step * 1e-9;
    let mut i = 0u64;
    loop {
        let r = start + i as f64 * step;
        if r > stop + slack {
            break;
        }
        grid.push(r);
        i += 1;
    }
    grid
}

/// Envelope extrema of both inequalities at every grid retardation.
pub fn run_envelope_sweep(cfg: &SweepConfig) -> Vec<SweepRow> {
    retardation_grid(cfg.r_min, cfg.r_max, cfg.r_step)
        .into_iter()
        .map(|r| {
            let minus =
                envelope_extrema_with_samples(r, &cfg.spectrum, Inequality::Minus, cfg.tilt_samples);
            let plus =
                envelope_extrema_with_samples(r, &cfg.spectrum, Inequality::Plus, cfg.tilt_samples);
            SweepRow {
                retardation: r,
                env_min_minus: minus.min,
                env_max_minus: minus.max,
                env_min_plus: plus.min,
                env_max_plus: plus.max,
            }
        })
        .collect()
}

/// Dense (δ, K) scan of one inequality over the tilt phase at fixed
/// retardation. The refined extremal phase is folded into the list so the
/// scan minimum matches the envelope minimum.
pub fn run_tilt_scan(
    retardation: f64,
    spectrum: &SpectralProfile,
    which: Inequality,
    samples: usize,
) -> Vec<(f64, f64)> {
    let pick = |pair: (f64, f64)| match which {
        Inequality::Minus => pair.0,
        Inequality::Plus => pair.1,
    };
    let mut points: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let delta = 2.0 * PI * i as f64 / samples as f64;
            (delta, pick(closed_form_decohered(retardation, delta, spectrum)))
        })
        .collect();

    let extrema = envelope_extrema_with_samples(retardation, spectrum, which, samples);
    let base = spectrum.omega0() * spectrum.retardation_delay(retardation);
    let delta_min = (extrema.argmin_phase - base).rem_euclid(2.0 * PI);
    points.push((
        delta_min,
        pick(closed_form_decohered(retardation, delta_min, spectrum)),
    ));
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    points
}

/// Both inequalities over one tilt grid: the scan grid plus the refined
/// minimizing phases of both combinations.
pub fn run_tilt_table(
    retardation: f64,
    spectrum: &SpectralProfile,
    samples: usize,
) -> Vec<TiltRow> {
    let mut deltas: Vec<f64> = (0..samples)
        .map(|i| 2.0 * PI * i as f64 / samples as f64)
        .collect();
    let base = spectrum.omega0() * spectrum.retardation_delay(retardation);
    for which in [Inequality::Minus, Inequality::Plus] {
        let extrema = envelope_extrema_with_samples(retardation, spectrum, which, samples);
        deltas.push((extrema.argmin_phase - base).rem_euclid(2.0 * PI));
    }
    deltas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    deltas
        .into_iter()
        .map(|delta| {
            let (k_minus, k_plus) = closed_form_decohered(retardation, delta, spectrum);
            TiltRow {
                delta,
                k_minus,
                k_plus,
            }
        })
        .collect()
}

/// Transition retardations for both inequalities.
pub fn run_threshold(cfg: &SweepConfig) -> Result<ThresholdSummary, HarnessError> {
    Ok(ThresholdSummary {
        r_star_minus: find_transition(&cfg.spectrum, Inequality::Minus)?,
        r_star_plus: find_transition(&cfg.spectrum, Inequality::Plus)?,
        sigma: cfg.spectrum.sigma(),
        lambda0: cfg.spectrum.lambda0(),
    })
}

/// Flip-model correlators and combinations on a uniform p grid with
/// `steps` intervals (steps+1 rows).
pub fn classical_curve(steps: usize) -> Vec<ClassicalRow> {
    (0..=steps)
        .map(|i| {
            let p = i as f64 / steps as f64;
            let res = classical_lg(&FlipModel::new(p).expect("grid p lies in [0,1]"));
            ClassicalRow {
                p,
                k12: res.correlators.k12,
                k23: res.correlators.k23,
                k13: res.correlators.k13,
                k_minus: res.k_minus,
                k_plus: res.k_plus,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PartialConfig;

    fn small_cfg() -> SweepConfig {
        PartialConfig {
            r_min: Some(0.0),
            r_max: Some(2.0),
            r_step: Some(1.0),
            tilt_samples: Some(720),
            ..Default::default()
        }
        .into_config()
        .unwrap()
    }

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(retardation_grid(0.0, 60.0, 0.25).len(), 241);
        assert_eq!(retardation_grid(0.0, 0.0, 1.0), vec![0.0]);
        let g = retardation_grid(1.0, 2.0, 0.5);
        assert_eq!(g, vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn sweep_row_at_zero_retardation() {
        let rows = run_envelope_sweep(&small_cfg());
        assert_eq!(rows.len(), 3);
        assert!((rows[0].env_min_minus - QUANTUM_BOUND).abs() <= 1e-9);
        assert!((rows[0].env_max_minus - 3.0).abs() <= 1e-9);
        assert!((rows[0].env_min_plus - QUANTUM_BOUND).abs() <= 1e-9);
        for w in rows.windows(2) {
            assert!(w[1].env_min_minus >= w[0].env_min_minus - 1e-12);
        }
    }

    #[test]
    fn tilt_scan_minimum_at_zero_retardation() {
        let cfg = small_cfg();
        let scan = run_tilt_scan(0.0, &cfg.spectrum, Inequality::Minus, cfg.tilt_samples);
        let (dmin, vmin) = scan
            .iter()
            .copied()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert!((vmin - QUANTUM_BOUND).abs() <= 1e-9, "min {vmin}");
        assert!((dmin - PI / 3.0).abs() <= 1e-6, "argmin {dmin}");

        let scan = run_tilt_scan(0.0, &cfg.spectrum, Inequality::Plus, cfg.tilt_samples);
        let (dmin, vmin) = scan
            .iter()
            .copied()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert!((vmin - QUANTUM_BOUND).abs() <= 1e-9);
        assert!((dmin - 2.0 * PI / 3.0).abs() <= 1e-6);
    }

    #[test]
    fn tilt_scan_decays_at_large_retardation() {
        let cfg = small_cfg();
        let scan = run_tilt_scan(200.0, &cfg.spectrum, Inequality::Minus, 720);
        for (_, v) in scan {
            assert!(v.abs() <= 1e-3);
        }
    }

    #[test]
    fn threshold_summary_matches_both_ways() {
        let summary = run_threshold(&SweepConfig::default()).unwrap();
        assert!((summary.r_star_minus - summary.r_star_plus).abs() <= 1e-6);
        assert!((33.2..=34.2).contains(&summary.r_star_minus));
    }

    #[test]
    fn classical_curve_endpoints() {
        let rows = classical_curve(10);
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0].k_minus, -1.0);
        assert_eq!(rows[0].k_plus, 3.0);
        assert_eq!(rows[10].k_minus, 3.0);
        assert_eq!(rows[10].k_plus, -1.0);
        for row in rows {
            assert!(row.k_minus >= CLASSICAL_BOUND && row.k_plus >= CLASSICAL_BOUND);
        }
    }
}
