//! The quartz-plate environment: retardation maps to a frequency-averaged
//! birefringent phase, contracting the |H⟩/|V⟩ coherences.
//!
//! The photon spectrum is Gaussian around the central angular frequency ω₀.
//! A plate with retardation R (in units of the central wavelength λ₀) delays
//! the extraordinary ray by d = R·λ₀/c, so frequency ω acquires phase ω·d.
//! Averaged over the spectrum, the off-diagonal elements contract by
//! exp(−d²σ²/16) and rotate by ω₀·d plus the tilt phase of the adjustable
//! plates. The convention tying σ to the power-spectrum width is fixed so
//! the single-stage exponent is exactly −d²σ²/16.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubit::{birefringent_phase, BipartiteState, QubitState};

/// Speed of light in vacuum, m/s (defined constant).
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;

/// Default |n_e − n_o| of crystal quartz near 780 nm, used only when a plate
/// is specified by physical thickness instead of retardation.
pub const QUARTZ_BIREFRINGENCE: f64 = 0.00891;

/// Minimum node count accepted by the quadrature oracle.
pub const MIN_QUADRATURE_NODES: usize = 64;

/// Default node count for the quadrature oracle.
pub const DEFAULT_QUADRATURE_NODES: usize = 2048;

/// Gaussian photon spectrum: central angular frequency ω₀ = 2πc/λ₀ and
/// spread σ, both in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProfile {
    omega0: f64,
    sigma: f64,
    lambda0: f64,
}

impl SpectralProfile {
    /// Build from the central wavelength (m) and spectral spread (rad/s);
    /// ω₀ is derived from λ₀.
    pub fn new(lambda0: f64, sigma: f64) -> Result<Self> {
        if !(lambda0.is_finite() && lambda0 > 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "central wavelength must be positive, got {lambda0}"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "spectral spread must be positive, got {sigma}"
            )));
        }
        let omega0 = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / lambda0;
        Ok(Self {
            omega0,
            sigma,
            lambda0,
        })
    }

    /// Build from explicit parts, checking ω₀ against 2πc/λ₀.
    pub fn from_parts(omega0: f64, sigma: f64, lambda0: f64) -> Result<Self> {
        let profile = Self::new(lambda0, sigma)?;
        let rel = (omega0 - profile.omega0).abs() / profile.omega0;
        if !(omega0.is_finite() && omega0 > 0.0) || rel > 1e-9 {
            return Err(Error::InvalidSpectrum(format!(
                "omega0 {omega0} inconsistent with 2*pi*c/lambda0 = {}",
                profile.omega0
            )));
        }
        Ok(Self { omega0, ..profile })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    /// Delay in seconds accumulated by a plate of the given retardation.
    pub fn retardation_delay(&self, retardation_waves: f64) -> f64 {
        retardation_waves * self.lambda0 / SPEED_OF_LIGHT
    }

    // Standard deviation of the Gaussian *power* spectrum. σ/(2√2) is the
    // unique width for which ⟨e^{iωd}⟩ contracts by exp(−d²σ²/16).
    fn power_spectrum_std(&self) -> f64 {
        self.sigma / (2.0 * std::f64::consts::SQRT_2)
    }
}

/// One environment pass: a fixed plate of `retardation_waves` plus a
/// tiltable pair contributing the adjustable phase `tilt_phase`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingStage {
    retardation_waves: f64,
    tilt_phase: f64,
}

impl DephasingStage {
    pub fn new(retardation_waves: f64, tilt_phase: f64) -> Result<Self> {
        if !(retardation_waves.is_finite() && retardation_waves >= 0.0) {
            return Err(Error::InvalidRetardation(retardation_waves));
        }
        if !tilt_phase.is_finite() {
            return Err(Error::NonFiniteTilt(tilt_phase));
        }
        Ok(Self {
            retardation_waves,
            tilt_phase,
        })
    }

    /// Convert a physical plate thickness (m) with birefringence Δn into a
    /// stage; thickness is metadata only, retardation R = L·Δn/λ₀ is what
    /// the model consumes.
    pub fn from_thickness(
        thickness: f64,
        delta_n: f64,
        tilt_phase: f64,
        spectrum: &SpectralProfile,
    ) -> Result<Self> {
        if !(thickness.is_finite() && thickness >= 0.0 && delta_n.is_finite() && delta_n > 0.0) {
            return Err(Error::InvalidRetardation(thickness));
        }
        Self::new(thickness * delta_n / spectrum.lambda0(), tilt_phase)
    }

    pub fn retardation_waves(&self) -> f64 {
        self.retardation_waves
    }

    pub fn tilt_phase(&self) -> f64 {
        self.tilt_phase
    }

    /// Optical delay d = R·λ₀/c in seconds; zero iff the retardation is zero.
    pub fn delay(&self, spectrum: &SpectralProfile) -> f64 {
        spectrum.retardation_delay(self.retardation_waves)
    }
}

/// Single-stage coherence envelope exp(−d²σ²/16) for delay d ≥ 0.
pub fn decay_factor(delay: f64, spectrum: &SpectralProfile) -> f64 {
    debug_assert!(delay >= 0.0);
    let x = delay * spectrum.sigma();
    (-x * x / 16.0).exp()
}

// Off-diagonal multiplier of one stage: the |V⟩⟨H| element gains this
// factor, the |H⟩⟨V| element its conjugate.
fn stage_factor(stage: &DephasingStage, spectrum: &SpectralProfile) -> Complex64 {
    let delay = stage.delay(spectrum);
    let contraction = decay_factor(delay, spectrum);
    Complex64::from_polar(contraction, spectrum.omega0() * delay + stage.tilt_phase())
}

/// Frequency-averaged birefringent phase: diagonal |H⟩/|V⟩ elements are
/// unchanged, coherences contract by the decay factor and rotate by
/// ω₀·d + tilt.
pub fn dephase_channel(
    state: &QubitState,
    stage: &DephasingStage,
    spectrum: &SpectralProfile,
) -> QubitState {
    let f = stage_factor(stage, spectrum);
    let mut m = state.matrix();
    m[1][0] *= f;
    m[0][1] *= f.conj();
    QubitState::from_matrix_unchecked(m)
}

/// Independent oracle for `dephase_channel`: averages the phase-rotated
/// state over the Gaussian power spectrum by fixed-node midpoint quadrature
/// on ω₀ ± 8 power-spectrum standard deviations.
pub fn dephase_channel_quadrature(
    state: &QubitState,
    stage: &DephasingStage,
    spectrum: &SpectralProfile,
    n_points: usize,
) -> Result<QubitState> {
    if n_points < MIN_QUADRATURE_NODES {
        return Err(Error::TooFewQuadratureNodes {
            min: MIN_QUADRATURE_NODES,
            got: n_points,
        });
    }
    let delay = stage.delay(spectrum);
    if delay == 0.0 {
        // Every node rotates by exactly the tilt phase, so the average is
        // the pure rotation itself.
        return birefringent_phase(state, stage.tilt_phase());
    }

    let std = spectrum.power_spectrum_std();
    let lo = spectrum.omega0() - 8.0 * std;
    let width = 16.0 * std;
    let h = width / n_points as f64;

    let zero = Complex64::new(0.0, 0.0);
    let mut acc = [[zero; 2]; 2];
    let mut weight_sum = 0.0;
    for i in 0..n_points {
        let omega = lo + (i as f64 + 0.5) * h;
        let offset = (omega - spectrum.omega0()) / std;
        let weight = (-0.5 * offset * offset).exp();
        let rotated = birefringent_phase(state, omega * delay + stage.tilt_phase())?;
        let m = rotated.matrix();
        for r in 0..2 {
            for c in 0..2 {
                acc[r][c] += m[r][c] * weight;
            }
        }
        weight_sum += weight;
    }
    for row in acc.iter_mut() {
        for v in row.iter_mut() {
            *v /= weight_sum;
        }
    }
    Ok(QubitState::from_matrix_unchecked(acc))
}

/// The dephasing channel lifted to the polarization factor of the pair;
/// identity on the path. Coherences entangled with the path contract by the
/// same factor.
pub fn apply_stage_on_system(
    state: &BipartiteState,
    stage: &DephasingStage,
    spectrum: &SpectralProfile,
) -> BipartiteState {
    let f = stage_factor(stage, spectrum);
    let mut m = state.matrix();
    for a in 0..2 {
        for b in 0..2 {
            m[2 + a][b] *= f;
            m[a][2 + b] *= f.conj();
        }
    }
    BipartiteState::from_matrix_unchecked(m)
}
