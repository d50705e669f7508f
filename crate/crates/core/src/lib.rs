//! Simulation of a Leggett-Garg test on a single polarization qubit.
//!
//! A photon prepared in the +45° state |H̄⟩ evolves through two identical
//! environment passes, each a birefringent quartz plate (retardation, in
//! units of the central wavelength) plus a tiltable plate pair adding a
//! tunable phase. Measuring the ±45° observable Q at three times yields the
//! two-time correlators K(t₁,t₂), K(t₂,t₃), K(t₁,t₃); the Wigner-type
//! combinations
//!
//! ```text
//! K₋ = K₁₃ − K₁₂ − K₂₃ ≥ −1      K₊ = K₁₃ + K₁₂ + K₂₃ ≥ −1
//! ```
//!
//! hold for every macrorealist model but reach −1.5 quantum mechanically.
//! K₂₃ is measured noninvasively by copying Q(t₂) onto a path ancilla with
//! a CNOT gate. Averaging the plate phase over the photon's Gaussian
//! spectrum dephases the qubit; as the retardation grows the violation
//! weakens and disappears near 34 waves for the default spectrum, marking
//! the transition to dynamics a classical flip model can reproduce.
//!
//! Modules:
//! * [`qubit`] — exact 2×2/4×4 density-matrix algebra and the CNOT circuit;
//! * [`dephasing`] — the quartz-plate environment and its quadrature oracle;
//! * [`lg`] — correlators, inequalities, envelopes, transition search;
//! * [`classical`] — the macrorealist flip model and its Monte Carlo check.

// Fixed 2x2/4x4 kernels read better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod classical;
pub mod dephasing;
pub mod error;
pub mod lg;
pub mod qubit;

pub use classical::FlipModel;
pub use dephasing::{DephasingStage, SpectralProfile, SPEED_OF_LIGHT};
pub use error::{Error, Result};
pub use lg::{CorrelatorSet, EnvelopeExtrema, ExperimentConfig, Inequality, LGResult};
pub use qubit::{BipartiteState, Outcome, QubitState};
