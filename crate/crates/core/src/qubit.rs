//! Finite-dimensional quantum state algebra for the polarization qubit and
//! the polarization ⊗ path pair used by the noninvasive-measurement circuit.
//!
//! Basis conventions, inherited by every other module:
//! * single qubit: index 0 = |H⟩ (horizontal), index 1 = |V⟩ (vertical);
//! * diagonal basis: |H̄⟩ = (|H⟩+|V⟩)/√2 (+45°), |V̄⟩ = (|H⟩−|V⟩)/√2 (−45°);
//! * pair ordering: (polarization ⊗ path), path index 0 = |0⟩ₐ, 1 = |1⟩ₐ.

use num_complex::Complex64;

use crate::error::{Error, Result};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Elementwise tolerance for the Hermiticity check on construction.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerance for |trace − 1| on construction.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues may dip this far below zero before a state is rejected.
pub const PSD_TOL: f64 = 1e-12;
/// Probabilities further than this outside [0, 1] indicate a bug, not rounding.
pub const PROBABILITY_SLACK: f64 = 1e-9;
/// Outcomes with probability at or below this floor cannot be collapsed onto.
pub const COLLAPSE_FLOOR: f64 = 1e-12;

/// Result of a dichotomic measurement in the diagonal basis: +1 for |H̄⟩, −1 for |V̄⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> i32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn sign(self) -> f64 {
        self.value() as f64
    }
}

/// A 2×2 density matrix in the |H⟩/|V⟩ basis (row/column 0 = |H⟩).
///
/// Also serves as the state of the path ancilla, whose computational basis
/// |0⟩ₐ/|1⟩ₐ takes the place of |H⟩/|V⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    m: [[Complex64; 2]; 2],
}

/// A 4×4 density matrix over (polarization ⊗ path), index = 2·pol + path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteState {
    m: [[Complex64; 4]; 4],
}

/// Joint readout distribution: polarization in the diagonal basis, path in
/// the computational basis. `plus` ↔ |H̄⟩ (Q = +1), `minus` ↔ |V̄⟩ (Q = −1).
#[derive(Debug, Clone, Copy)]
pub struct JointProbabilities {
    pub plus_path0: f64,
    pub plus_path1: f64,
    pub minus_path0: f64,
    pub minus_path1: f64,
}

impl JointProbabilities {
    pub fn path0_marginal(&self) -> f64 {
        self.plus_path0 + self.minus_path0
    }

    pub fn path1_marginal(&self) -> f64 {
        self.plus_path1 + self.minus_path1
    }
}

impl QubitState {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(matrix: [[Complex64; 2]; 2]) -> Result<Self> {
        validate_density(&matrix)?;
        let min = hermitian_eigenvalues_2x2(&matrix)[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { m: matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: [[Complex64; 2]; 2]) -> Self {
        Self { m: matrix }
    }

    /// The pure diagonal state |H̄⟩⟨H̄| used as the initial input.
    pub fn plus_state() -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self {
            m: [[h, h], [h, h]],
        }
    }

    /// The orthogonal diagonal state |V̄⟩⟨V̄|.
    pub fn minus_state() -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self {
            m: [[h, -h], [-h, h]],
        }
    }

    /// Computational-basis ground state |0⟩⟨0| (|H⟩⟨H| for polarization,
    /// |0⟩ₐ⟨0ₐ| for the path ancilla).
    pub fn ground() -> Self {
        Self {
            m: [[C_ONE, C_ZERO], [C_ZERO, C_ZERO]],
        }
    }

    pub fn maximally_mixed() -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self {
            m: [[h, C_ZERO], [C_ZERO, h]],
        }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// tr(ρ²); 1 for pure states.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                acc += (self.m[r][c] * self.m[c][r]).re;
            }
        }
        acc
    }

    /// max |ρ(r,c) − conj(ρ(c,r))| over all elements.
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.m)
    }

    pub fn trace_residual(&self) -> f64 {
        (self.trace() - C_ONE).norm()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues_2x2(&self.m)[0]
    }
}

impl BipartiteState {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(matrix: [[Complex64; 4]; 4]) -> Result<Self> {
        validate_density(&matrix)?;
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { m: matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: [[Complex64; 4]; 4]) -> Self {
        Self { m: matrix }
    }

    pub fn matrix(&self) -> [[Complex64; 4]; 4] {
        self.m
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2] + self.m[3][3]
    }

    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                acc += (self.m[r][c] * self.m[c][r]).re;
            }
        }
        acc
    }

    /// Partial trace over the path ancilla, leaving the polarization state.
    pub fn trace_out_path(&self) -> QubitState {
        let mut out = [[C_ZERO; 2]; 2];
        for p in 0..2 {
            for q in 0..2 {
                for a in 0..2 {
                    out[p][q] += self.m[2 * p + a][2 * q + a];
                }
            }
        }
        QubitState::from_matrix_unchecked(out)
    }

    /// Marginal probabilities of finding the path ancilla in |0⟩ₐ / |1⟩ₐ.
    pub fn path_probabilities(&self) -> (f64, f64) {
        let p0 = (self.m[0][0] + self.m[2][2]).re;
        let p1 = (self.m[1][1] + self.m[3][3]).re;
        (clamp_probability(p0), clamp_probability(p1))
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.m)
    }

    pub fn trace_residual(&self) -> f64 {
        (self.trace() - C_ONE).norm()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.m)[0]
    }
}

/// U ρ U† with U = diag(1, e^{iφ}) in the |H⟩/|V⟩ basis: |V⟩ picks up e^{iφ}.
pub fn birefringent_phase(state: &QubitState, phase: f64) -> Result<QubitState> {
    if !phase.is_finite() {
        return Err(Error::NonFinitePhase(phase));
    }
    let u = Complex64::from_polar(1.0, phase);
    let mut m = state.m;
    m[1][0] *= u;
    m[0][1] *= u.conj();
    Ok(QubitState::from_matrix_unchecked(m))
}

/// Projective measurement in the diagonal basis: (P(|H̄⟩), P(|V̄⟩)).
pub fn measure_diag_basis(state: &QubitState) -> (f64, f64) {
    let m = &state.m;
    let cross = (m[0][1] + m[1][0]).re;
    let diag = (m[0][0] + m[1][1]).re;
    let ph = clamp_probability(0.5 * (diag + cross));
    let pv = clamp_probability(0.5 * (diag - cross));
    debug_assert!((ph + pv - 1.0).abs() <= 1e-12);
    (ph, pv)
}

/// Post-measurement state P ρ P / tr(P ρ P) for the diagonal-basis projector
/// selected by `outcome`. Rank-1 projection makes the result the pure
/// diagonal state itself.
pub fn collapse_diag(state: &QubitState, outcome: Outcome) -> Result<QubitState> {
    let (ph, pv) = measure_diag_basis(state);
    let probability = match outcome {
        Outcome::Plus => ph,
        Outcome::Minus => pv,
    };
    if probability <= COLLAPSE_FLOOR {
        return Err(Error::DegenerateCollapse { probability });
    }
    Ok(match outcome {
        Outcome::Plus => QubitState::plus_state(),
        Outcome::Minus => QubitState::minus_state(),
    })
}

/// Kronecker product in (polarization ⊗ path) ordering.
pub fn tensor(system: &QubitState, ancilla: &QubitState) -> BipartiteState {
    let mut out = [[C_ZERO; 4]; 4];
    for p in 0..2 {
        for q in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    out[2 * p + a][2 * q + b] = system.m[p][q] * ancilla.m[a][b];
                }
            }
        }
    }
    BipartiteState::from_matrix_unchecked(out)
}

// CNOT with control = polarization in the diagonal basis, target = path:
// |H̄⟩|a⟩ → |H̄⟩|a⟩ and |V̄⟩|a⟩ → |V̄⟩|a⊕1⟩. Hermitian, hence an involution.
const CNOT_DIAG: [[f64; 4]; 4] = [
    [0.5, 0.5, 0.5, -0.5],
    [0.5, 0.5, -0.5, 0.5],
    [0.5, -0.5, 0.5, 0.5],
    [-0.5, 0.5, 0.5, 0.5],
];

/// Conjugation by the diagonal-basis CNOT of the measurement circuit.
pub fn apply_cnot(state: &BipartiteState) -> BipartiteState {
    // U ρ U† with real symmetric U.
    let mut tmp = [[C_ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = C_ZERO;
            for k in 0..4 {
                acc += state.m[r][k] * CNOT_DIAG[c][k];
            }
            tmp[r][c] = acc;
        }
    }
    let mut out = [[C_ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = C_ZERO;
            for k in 0..4 {
                acc += Complex64::new(CNOT_DIAG[r][k], 0.0) * tmp[k][c];
            }
            out[r][c] = acc;
        }
    }
    BipartiteState::from_matrix_unchecked(out)
}

/// Birefringent phase on the polarization factor, identity on the path.
pub fn apply_on_system(state: &BipartiteState, phase: f64) -> Result<BipartiteState> {
    if !phase.is_finite() {
        return Err(Error::NonFinitePhase(phase));
    }
    let u = Complex64::from_polar(1.0, phase);
    let mut m = state.m;
    for a in 0..2 {
        for b in 0..2 {
            m[2 + a][b] *= u; // (V,·)(H,·) block
            m[a][2 + b] *= u.conj(); // (H,·)(V,·) block
        }
    }
    Ok(BipartiteState::from_matrix_unchecked(m))
}

/// Final joint readout: polarization in the diagonal basis, path in the
/// computational basis.
pub fn joint_diag_path_probabilities(state: &BipartiteState) -> JointProbabilities {
    let m = &state.m;
    let probe = |a: usize, plus: bool| {
        let cross = (m[a][2 + a] + m[2 + a][a]).re;
        let diag = (m[a][a] + m[2 + a][2 + a]).re;
        let signed = if plus { cross } else { -cross };
        clamp_probability(0.5 * (diag + signed))
    };
    let p = JointProbabilities {
        plus_path0: probe(0, true),
        plus_path1: probe(1, true),
        minus_path0: probe(0, false),
        minus_path1: probe(1, false),
    };
    debug_assert!(
        (p.plus_path0 + p.plus_path1 + p.minus_path0 + p.minus_path1 - 1.0).abs() <= 1e-12
    );
    p
}

/// Clamp a probability into [0, 1], allowing only rounding-level excursions.
fn clamp_probability(p: f64) -> f64 {
    assert!(
        p > -PROBABILITY_SLACK && p < 1.0 + PROBABILITY_SLACK,
        "probability {p} outside [0, 1] beyond numerical slack"
    );
    p.clamp(0.0, 1.0)
}

fn hermiticity_residual<const N: usize>(m: &[[Complex64; N]; N]) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..N {
        for c in 0..N {
            worst = worst.max((m[r][c] - m[c][r].conj()).norm());
        }
    }
    worst
}

fn validate_density<const N: usize>(m: &[[Complex64; N]; N]) -> Result<()> {
    for row in m.iter() {
        for v in row.iter() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidDensityMatrix(
                    "non-finite element".to_string(),
                ));
            }
        }
    }
    let herm = hermiticity_residual(m);
    if herm > HERMITICITY_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "hermiticity residual {herm:.3e}"
        )));
    }
    let mut trace = C_ZERO;
    for i in 0..N {
        trace += m[i][i];
    }
    let dev = (trace - C_ONE).norm();
    if dev > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace deviates from 1 by {dev:.3e}"
        )));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian 2×2 matrix, ascending, in closed form.
pub(crate) fn hermitian_eigenvalues_2x2(m: &[[Complex64; 2]; 2]) -> [f64; 2] {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let mid = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let rad = (half_diff * half_diff + m[0][1].norm_sqr()).sqrt();
    [mid - rad, mid + rad]
}

/// Eigenvalues of a Hermitian N×N matrix, ascending, by cyclic Jacobi
/// rotations with phase-adjusted pivots.
pub(crate) fn hermitian_eigenvalues<const N: usize>(matrix: &[[Complex64; N]; N]) -> [f64; N] {
    let mut a = *matrix;
    let mut scale = 0.0f64;
    for row in a.iter() {
        for v in row.iter() {
            scale = scale.max(v.norm());
        }
    }
    if scale == 0.0 {
        return [0.0; N];
    }
    let tol = scale * 1e-15;

    for _ in 0..60 {
        let mut off = 0.0f64;
        for p in 0..N {
            for q in (p + 1)..N {
                off = off.max(a[p][q].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                let r = apq.norm();
                if r < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sp = phase * s; // s·e^{iα}

                // B = A·J, with J[p][p]=c, J[p][q]=s e^{iα}, J[q][p]=−s e^{−iα}, J[q][q]=c
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp * c - akq * sp.conj();
                    a[k][q] = akp * sp + akq * c;
                }
                // A' = J†·B
                for l in 0..N {
                    let apl = a[p][l];
                    let aql = a[q][l];
                    a[p][l] = apl * c - aql * sp;
                    a[q][l] = apl * sp.conj() + aql * c;
                }
            }
        }
    }

    let mut eigs = [0.0f64; N];
    for i in 0..N {
        eigs[i] = a[i][i].re;
    }
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}
