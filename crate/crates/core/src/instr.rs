//! The phase-space instruction set: parameterized qubit rotations
//! `R_φ(θ) = exp(−i θ/2 σ_φ)`, conditional displacements
//! `CD(β, σ_φ) = exp[(β a† − β* a) ⊗ σ_φ]`, unconditional displacements,
//! resets and measurements, plus the amplitude-proportional duration model.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{quadrature_eig, FockBasisConfig, HybridState};
use crate::CMat;

/// One gate or channel of the instruction set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Instruction {
    /// `R_φ(θ) = exp(−i θ/2 σ_φ)`, `σ_φ = cos φ σx + sin φ σy`.
    QubitRotation { phi: f64, theta: f64, qubit: usize },
    /// `R_Z(θ) = exp(−i θ/2 σz)`.
    RotationZ { theta: f64, qubit: usize },
    /// `CD(β, σ_φ) = exp[(β a† − β* a) ⊗ σ_φ]` on one mode and one qubit.
    ConditionalDisplacement { beta: C64, phi: f64, mode: usize, qubit: usize },
    /// `D(α) = exp(α a† − α* a)` on one mode.
    UnconditionalDisplacement { alpha: C64, mode: usize },
    /// Measure σz and re-prepare `|g⟩`.
    Reset { qubit: usize },
    /// Projective σz measurement (sampled).
    MeasureZ { qubit: usize },
    /// Projective σy measurement (sampled).
    MeasureY { qubit: usize },
}

impl Instruction {
    /// Conditional displacement about the σz axis is not equatorial; expose
    /// it through the generic axis by conjugation where needed. Native σz
    /// conditioning is still representable: `phi` is ignored and `qubit`
    /// rotations are synthesized by the caller. Here we keep σ_φ equatorial
    /// plus an explicit variant-free σz option via `phi = f64::NAN` being
    /// disallowed; use [`Instruction::cd_z`] instead.
    pub fn cd(beta: C64, phi: f64, mode: usize, qubit: usize) -> Self {
        Instruction::ConditionalDisplacement { beta, phi, mode, qubit }
    }

    /// σz-conditioned displacement, encoded as an equatorial CD conjugated by
    /// qubit rotations at application time. Stored compactly with the axis
    /// tag `Z_AXIS`.
    pub fn cd_z(beta: C64, mode: usize, qubit: usize) -> Self {
        Instruction::ConditionalDisplacement { beta, phi: Z_AXIS, mode, qubit }
    }
}

/// Sentinel axis value meaning "conditioned on σz".
pub const Z_AXIS: f64 = f64::MAX;

/// An ordered list of instructions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub instructions: Vec<Instruction>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self { instructions: Vec::new() }
    }

    pub fn from_vec(instructions: Vec<Instruction>) -> Self {
        Self { instructions }
    }

    pub fn push(&mut self, i: Instruction) {
        self.instructions.push(i);
    }

    pub fn extend(&mut self, other: &PulseSequence) {
        self.instructions.extend(other.instructions.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Bit-exact JSON round trip.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pulse sequences always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("bad sequence JSON: {e}")))
    }
}

/// Gate-time accounting: conditional displacements cost
/// `max(|β|·τ, min_cd_time)`, qubit rotations cost `rotation_time`.
/// Times are in µs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DurationModel {
    /// µs per unit of conditional-displacement amplitude (default 1).
    pub tau_per_unit_amplitude: f64,
    /// Fixed cost of a qubit rotation in µs (default 0, hardware ≈ 0.024).
    pub rotation_time: f64,
    /// Floor on any conditional displacement in µs (default 0.048).
    pub min_cd_time: f64,
}

impl Default for DurationModel {
    fn default() -> Self {
        Self { tau_per_unit_amplitude: 1.0, rotation_time: 0.0, min_cd_time: 0.048 }
    }
}

impl DurationModel {
    /// Pure amplitude-proportional model (no floors); the natural measure of
    /// circuit duration when comparing pulse families analytically.
    pub fn amplitude_only() -> Self {
        Self { tau_per_unit_amplitude: 1.0, rotation_time: 0.0, min_cd_time: 0.0 }
    }

    pub fn instruction_duration(&self, inst: &Instruction) -> f64 {
        match inst {
            Instruction::ConditionalDisplacement { beta, .. } => {
                (beta.norm() * self.tau_per_unit_amplitude).max(self.min_cd_time)
            }
            Instruction::UnconditionalDisplacement { alpha, .. } => {
                (alpha.norm() * self.tau_per_unit_amplitude).max(self.min_cd_time)
            }
            Instruction::QubitRotation { .. } | Instruction::RotationZ { .. } => self.rotation_time,
            Instruction::Reset { .. } | Instruction::MeasureZ { .. } | Instruction::MeasureY { .. } => 0.0,
        }
    }
}

/// Total duration of a sequence in µs.
pub fn duration(seq: &PulseSequence, model: &DurationModel) -> f64 {
    seq.instructions.iter().map(|i| model.instruction_duration(i)).sum()
}

/// The Hermitian phase-space vector pair generated by a CD amplitude:
/// `v = Im(β) x − Re(β) p` and `v⊥ = Re(β) x + Im(β) p`; `CD(β, σφ) =
/// exp(i 2 v ⊗ σφ)`.
#[derive(Clone, Copy, Debug)]
pub struct PhaseSpaceVector {
    pub beta: C64,
}

impl PhaseSpaceVector {
    pub fn new(beta: C64) -> Self {
        Self { beta }
    }

    /// Coefficients `(cx, cp)` of `v = cx·x + cp·p`.
    pub fn v_coefficients(&self) -> (f64, f64) {
        (self.beta.im, -self.beta.re)
    }

    /// Coefficients of `v⊥`.
    pub fn v_perp_coefficients(&self) -> (f64, f64) {
        (self.beta.re, self.beta.im)
    }

    /// The amplitude whose `v` equals this one's `v⊥` (i.e. `β → iβ`).
    pub fn perp(&self) -> Self {
        Self { beta: self.beta * C64::new(0.0, 1.0) }
    }
}

/// Build the conditional rotation `R_φ(−4v) = CD(β, σφ) = exp(i 2 v σφ)` for
/// the phase-space vector generated by `β`.
pub fn conditional_rotation_from_vector(beta: C64, phi: f64) -> Result<Instruction> {
    if beta.norm() == 0.0 {
        return Err(Error::InvalidParameter("zero phase-space vector".into()));
    }
    Ok(Instruction::cd(beta, phi, 0, 0))
}

/// Outcome of a sampled measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

/// Result of applying one instruction: measurements record their outcome and
/// pre-collapse probability.
#[derive(Clone, Copy, Debug, Default)]
pub struct ApplyRecord {
    pub outcome: Option<Outcome>,
    pub probability: Option<f64>,
}

pub(crate) fn qubit_matrix_sigma_phi(phi: f64) -> Array2<C64> {
    let e = C64::from_polar(1.0, phi);
    ndarray::array![[C64::new(0.0, 0.0), e.conj()], [e, C64::new(0.0, 0.0)]]
}

/// `R_φ(θ)` as a 2×2 matrix.
pub fn rotation_matrix(phi: f64, theta: f64) -> Array2<C64> {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let sig = qubit_matrix_sigma_phi(phi);
    ndarray::array![
        [C64::new(c, 0.0) - C64::new(0.0, s) * sig[(0, 0)], -C64::new(0.0, s) * sig[(0, 1)]],
        [-C64::new(0.0, s) * sig[(1, 0)], C64::new(c, 0.0) - C64::new(0.0, s) * sig[(1, 1)]]
    ]
}

/// `R_Z(θ)` as a 2×2 matrix.
pub fn rotation_z_matrix(theta: f64) -> Array2<C64> {
    ndarray::array![
        [C64::from_polar(1.0, -theta / 2.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::from_polar(1.0, theta / 2.0)]
    ]
}

fn apply_qubit_matrix(state: &mut HybridState, qubit: usize, m: &Array2<C64>) -> Result<()> {
    if qubit >= state.num_qubits {
        return Err(Error::Index(format!("qubit {qubit} of {}", state.num_qubits)));
    }
    let dtot = state.dtot();
    let mask = 1usize << qubit;
    let n = state.dim();
    let mut idx = 0usize;
    while idx < n {
        let qb = idx / dtot;
        if qb & mask == 0 {
            let j = (qb | mask) * dtot + idx % dtot;
            let a = state.amp[idx];
            let b = state.amp[j];
            state.amp[idx] = m[(0, 0)] * a + m[(0, 1)] * b;
            state.amp[j] = m[(1, 0)] * a + m[(1, 1)] * b;
        }
        idx += 1;
    }
    Ok(())
}

fn apply_mode_displacement(state: &mut HybridState, mode: usize, beta: C64) -> Result<()> {
    if mode >= state.fock_dims.len() {
        return Err(Error::Index(format!("mode {mode} of {}", state.fock_dims.len())));
    }
    let d = state.fock_dims[mode];
    let eig = quadrature_eig(d);
    let stride: usize = state.fock_dims[..mode].iter().product();
    let dtot = state.dtot();
    let outer = state.dim() / (d * stride);
    let mut slice = vec![C64::new(0.0, 0.0); d];
    let mut scratch = vec![C64::new(0.0, 0.0); d];
    let _ = dtot;
    for o in 0..outer {
        for s in 0..stride {
            let base = o * d * stride + s;
            for k in 0..d {
                slice[k] = state.amp[base + k * stride];
            }
            eig.apply_displacement(beta, &mut slice, &mut scratch);
            for k in 0..d {
                state.amp[base + k * stride] = slice[k];
            }
        }
    }
    Ok(())
}

/// Apply a conditional displacement by rotating the qubit into the σ_φ
/// eigenbasis, displacing each branch by ±β, and rotating back.
fn apply_cd(state: &mut HybridState, beta: C64, phi: f64, mode: usize, qubit: usize) -> Result<()> {
    if qubit >= state.num_qubits {
        return Err(Error::Index(format!("qubit {qubit} of {}", state.num_qubits)));
    }
    let sq2 = std::f64::consts::FRAC_1_SQRT_2;
    let (w, wdag);
    if phi == Z_AXIS {
        w = None;
        wdag = None;
    } else {
        // columns of W are the ±σφ eigenvectors (|g⟩ ± e^{iφ}|e⟩)/√2
        let e = C64::from_polar(1.0, phi);
        let m = ndarray::array![
            [C64::new(sq2, 0.0), C64::new(sq2, 0.0)],
            [e * sq2, -e * sq2]
        ];
        let md = ndarray::array![
            [m[(0, 0)].conj(), m[(1, 0)].conj()],
            [m[(0, 1)].conj(), m[(1, 1)].conj()]
        ];
        w = Some(m);
        wdag = Some(md);
    }
    if let Some(md) = &wdag {
        apply_qubit_matrix(state, qubit, md)?;
    }
    // displace the two qubit branches by ±β (branch bit 0 ↔ +1 eigenvalue)
    let dtot = state.dtot();
    let mask = 1usize << qubit;
    let d = state.fock_dims[mode];
    let stride: usize = state.fock_dims[..mode].iter().product();
    let eig = quadrature_eig(d);
    let mut slice = vec![C64::new(0.0, 0.0); d];
    let mut scratch = vec![C64::new(0.0, 0.0); d];
    let n = state.dim();
    let blocks = n / (d * stride);
    for o in 0..blocks {
        for s in 0..stride {
            let base = o * d * stride + s;
            let qb = base / dtot;
            let sign = if qb & mask == 0 { 1.0 } else { -1.0 };
            for k in 0..d {
                slice[k] = state.amp[base + k * stride];
            }
            eig.apply_displacement(beta * sign, &mut slice, &mut scratch);
            for k in 0..d {
                state.amp[base + k * stride] = slice[k];
            }
        }
    }
    if let Some(m) = &w {
        apply_qubit_matrix(state, qubit, m)?;
    }
    Ok(())
}

/// Measure one qubit in the given 2×2 eigenbasis (columns = eigenvectors of
/// outcomes +, −), collapse, renormalize, and return outcome + probability.
fn measure_in_basis(
    state: &mut HybridState,
    qubit: usize,
    basis: &Array2<C64>,
    rng: &mut impl Rng,
) -> Result<(Outcome, f64)> {
    let bdag = ndarray::array![
        [basis[(0, 0)].conj(), basis[(1, 0)].conj()],
        [basis[(0, 1)].conj(), basis[(1, 1)].conj()]
    ];
    apply_qubit_matrix(state, qubit, &bdag)?;
    let p_plus = state.qubit_branch_weight(qubit, 0);
    let r: f64 = rng.gen();
    let (outcome, bit, p) =
        if r < p_plus { (Outcome::Plus, 0, p_plus) } else { (Outcome::Minus, 1, 1.0 - p_plus) };
    if p < 1e-12 {
        return Err(Error::ZeroProbability(p));
    }
    state.project_qubit(qubit, bit);
    state.normalize();
    apply_qubit_matrix(state, qubit, basis)?;
    Ok((outcome, p))
}

/// Apply one instruction to a pure state. Measurements sample with `rng`.
pub fn apply(
    state: &mut HybridState,
    inst: &Instruction,
    cfg: &FockBasisConfig,
    rng: &mut impl Rng,
) -> Result<ApplyRecord> {
    let mut rec = ApplyRecord::default();
    match inst {
        Instruction::QubitRotation { phi, theta, qubit } => {
            apply_qubit_matrix(state, *qubit, &rotation_matrix(*phi, *theta))?;
        }
        Instruction::RotationZ { theta, qubit } => {
            apply_qubit_matrix(state, *qubit, &rotation_z_matrix(*theta))?;
        }
        Instruction::ConditionalDisplacement { beta, phi, mode, qubit } => {
            apply_cd(state, *beta, *phi, *mode, *qubit)?;
            state.check_leakage(cfg.leakage_tol)?;
        }
        Instruction::UnconditionalDisplacement { alpha, mode } => {
            apply_mode_displacement(state, *mode, *alpha)?;
            state.check_leakage(cfg.leakage_tol)?;
        }
        Instruction::Reset { qubit } => {
            let eye = ndarray::array![
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
            ];
            let (outcome, p) = measure_in_basis(state, *qubit, &eye, rng)?;
            if outcome == Outcome::Minus {
                // flip e → g
                apply_qubit_matrix(state, *qubit, &qubit_matrix_sigma_phi(0.0))?;
            }
            rec.outcome = Some(outcome);
            rec.probability = Some(p);
        }
        Instruction::MeasureZ { qubit } => {
            let eye = ndarray::array![
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
            ];
            let (outcome, p) = measure_in_basis(state, *qubit, &eye, rng)?;
            rec.outcome = Some(outcome);
            rec.probability = Some(p);
        }
        Instruction::MeasureY { qubit } => {
            let sq2 = std::f64::consts::FRAC_1_SQRT_2;
            let basis = ndarray::array![
                [C64::new(sq2, 0.0), C64::new(sq2, 0.0)],
                [C64::new(0.0, sq2), C64::new(0.0, -sq2)]
            ];
            let (outcome, p) = measure_in_basis(state, *qubit, &basis, rng)?;
            rec.outcome = Some(outcome);
            rec.probability = Some(p);
        }
    }
    Ok(rec)
}

/// Apply a whole sequence (measurement outcomes recorded in order).
pub fn apply_sequence(
    state: &mut HybridState,
    seq: &PulseSequence,
    cfg: &FockBasisConfig,
    rng: &mut impl Rng,
) -> Result<Vec<ApplyRecord>> {
    seq.instructions.iter().map(|i| apply(state, i, cfg, rng)).collect()
}

/// Dense unitary of a single non-measurement instruction on a one-mode,
/// one-qubit space (qubit slowest).
pub fn instruction_matrix(inst: &Instruction, dim: usize) -> Result<CMat> {
    let eig = quadrature_eig(dim);
    let eye_osc = Array2::from_diag_elem(dim, C64::new(1.0, 0.0));
    let kron_q_osc = |q: &Array2<C64>, o: &CMat| -> CMat {
        let mut m = CMat::zeros((2 * dim, 2 * dim));
        for qi in 0..2 {
            for qj in 0..2 {
                if q[(qi, qj)].norm_sqr() == 0.0 {
                    continue;
                }
                for i in 0..dim {
                    for j in 0..dim {
                        m[(qi * dim + i, qj * dim + j)] = q[(qi, qj)] * o[(i, j)];
                    }
                }
            }
        }
        m
    };
    match inst {
        Instruction::QubitRotation { phi, theta, .. } => {
            Ok(kron_q_osc(&rotation_matrix(*phi, *theta), &eye_osc))
        }
        Instruction::RotationZ { theta, .. } => Ok(kron_q_osc(&rotation_z_matrix(*theta), &eye_osc)),
        Instruction::UnconditionalDisplacement { alpha, .. } => {
            let d = eig.displacement_matrix(*alpha);
            let eye_q = Array2::from_diag_elem(2, C64::new(1.0, 0.0));
            Ok(kron_q_osc(&eye_q, &d))
        }
        Instruction::ConditionalDisplacement { beta, phi, .. } => {
            let dp = eig.displacement_matrix(*beta);
            let dm = eig.displacement_matrix(-*beta);
            let (pp, pm) = if *phi == Z_AXIS {
                // projectors onto |g⟩, |e⟩
                (
                    ndarray::array![
                        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                        [C64::new(0.0, 0.0), C64::new(0.0, 0.0)]
                    ],
                    ndarray::array![
                        [C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
                        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
                    ],
                )
            } else {
                let e = C64::from_polar(1.0, *phi);
                let h = C64::new(0.5, 0.0);
                (
                    ndarray::array![[h, h * e.conj()], [h * e, h]],
                    ndarray::array![[h, -h * e.conj()], [-h * e, h]],
                )
            };
            Ok(kron_q_osc(&pp, &dp) + kron_q_osc(&pm, &dm))
        }
        _ => Err(Error::InvalidParameter("measurements have no unitary matrix".into())),
    }
}

/// Dense unitary of a measurement-free sequence (matrices compose in time
/// order: later instructions multiply from the left).
pub fn sequence_matrix(seq: &PulseSequence, dim: usize) -> Result<CMat> {
    let mut u = Array2::from_diag_elem(2 * dim, C64::new(1.0, 0.0));
    for inst in &seq.instructions {
        u = instruction_matrix(inst, dim)?.dot(&u);
    }
    Ok(u)
}
