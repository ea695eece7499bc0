//! Continuous noise interleaved with gate application: photon loss, qubit
//! decay, and qubit dephasing, applied per substep either as first-order
//! Kraus channels on a density matrix or as jump sampling on pure-state
//! trajectories. Gates are split into exact n-th roots (displacement-type
//! generators scale linearly), so the noiseless limit reproduces the pure
//! unitary exactly.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{FockBasisConfig, HybridState};
use crate::instr::{
    apply, instruction_matrix, ApplyRecord, DurationModel, Instruction, Outcome, PulseSequence,
};
use crate::CMat;

/// Continuous noise rates in µs⁻¹: Lindblad operators `√κ a`, `√γ σ−`,
/// `√(γφ/2) σz`, so a lone cavity loses photons as `e^{−κt}` and qubit
/// coherences decay as `e^{−γφ t}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kappa: f64,
    pub gamma: f64,
    pub gamma_phi: f64,
    /// Integration substep in µs.
    pub substep_dt: f64,
}

impl NoiseModel {
    pub fn none() -> Self {
        Self { kappa: 0.0, gamma: 0.0, gamma_phi: 0.0, substep_dt: 0.01 }
    }

    pub fn new(kappa: f64, gamma: f64, gamma_phi: f64) -> Result<Self> {
        let m = Self { kappa, gamma, gamma_phi, substep_dt: 0.01 };
        m.validate()?;
        Ok(m)
    }

    /// Rates quoted as `rate/2π` (converted by multiplying with 2π).
    pub fn from_two_pi_rates(k2pi: f64, g2pi: f64, gphi2pi: f64) -> Result<Self> {
        let t = 2.0 * std::f64::consts::PI;
        Self::new(k2pi * t, g2pi * t, gphi2pi * t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa < 0.0 || self.gamma < 0.0 || self.gamma_phi < 0.0 || self.substep_dt <= 0.0 {
            return Err(Error::InvalidParameter("noise rates must be ≥ 0, dt > 0".into()));
        }
        let max_rate = self.kappa.max(self.gamma).max(self.gamma_phi);
        if self.substep_dt * max_rate * 2.0 * std::f64::consts::PI >= 0.1 {
            return Err(Error::RateTooLarge(format!(
                "dt·2π·max_rate = {:.3} ≥ 0.1",
                self.substep_dt * max_rate * 2.0 * std::f64::consts::PI
            )));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.kappa == 0.0 && self.gamma == 0.0 && self.gamma_phi == 0.0
    }
}

/// Mixed state on the same tensor layout as [`HybridState`].
#[derive(Clone, Debug)]
pub struct DensityState {
    pub rho: CMat,
    pub fock_dims: Vec<usize>,
    pub num_qubits: usize,
}

impl DensityState {
    pub fn from_pure(state: &HybridState) -> Self {
        let n = state.dim();
        let mut rho = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                rho[(i, j)] = state.amp[i] * state.amp[j].conj();
            }
        }
        Self { rho, fock_dims: state.fock_dims.clone(), num_qubits: state.num_qubits }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn dtot(&self) -> usize {
        self.fock_dims.iter().product()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.rho[(i, i)]).sum()
    }

    pub fn renormalize(&mut self) {
        let t = self.trace().re;
        if t > 0.0 {
            self.rho.mapv_inplace(|z| z / t);
        }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `⟨ψ|ρ|ψ⟩` for a pure reference.
    pub fn fidelity_with_pure(&self, psi: &HybridState) -> f64 {
        let v = &psi.amp;
        let rv = self.rho.dot(v);
        v.iter().zip(rv.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>()
    }

    /// Fidelity with a pure oscillator target and a qubit pole:
    /// `⟨t, q|ρ|t, q⟩`.
    pub fn fidelity_with_osc_target(&self, target: &crate::CVec, qubit_bit: usize) -> f64 {
        let d = self.dtot();
        let base = qubit_bit * d;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += target[i].conj() * self.rho[(base + i, base + j)] * target[j];
            }
        }
        acc.re
    }

    /// Project one qubit onto an outcome; returns the branch probability and
    /// leaves the state renormalized.
    pub fn postselect(&mut self, qubit: usize, outcome: Outcome) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::Index(format!("qubit {qubit} of {}", self.num_qubits)));
        }
        let dtot = self.dtot();
        let mask = 1usize << qubit;
        let want = match outcome {
            Outcome::Plus => 0usize,
            Outcome::Minus => 1usize,
        };
        let keep = |idx: usize| ((idx / dtot) & mask != 0) as usize == want;
        let n = self.dim();
        let mut p = 0.0;
        for i in 0..n {
            if keep(i) {
                p += self.rho[(i, i)].re;
            }
        }
        if p < 1e-12 {
            return Err(Error::ZeroProbability(p));
        }
        for i in 0..n {
            for j in 0..n {
                if !(keep(i) && keep(j)) {
                    self.rho[(i, j)] = C64::new(0.0, 0.0);
                }
            }
        }
        self.renormalize();
        Ok(p)
    }

    /// Probability of finding `qubit` in `|g⟩`.
    pub fn prob_ground(&self, qubit: usize) -> f64 {
        let dtot = self.dtot();
        let mask = 1usize << qubit;
        (0..self.dim())
            .filter(|i| (i / dtot) & mask == 0)
            .map(|i| self.rho[(i, i)].re)
            .sum()
    }

    /// Measurement-free qubit reset: `ρ → PgρPg + σx PeρPe σx`.
    pub fn reset_qubit(&mut self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Index(format!("qubit {qubit} of {}", self.num_qubits)));
        }
        let dtot = self.dtot();
        let mask = 1usize << qubit;
        let n = self.dim();
        let flip = |idx: usize| -> usize {
            let qb = idx / dtot;
            (qb ^ mask) * dtot + idx % dtot
        };
        let mut out = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let (bi, bj) = ((i / dtot) & mask != 0, (j / dtot) & mask != 0);
                if !bi && !bj {
                    out[(i, j)] += self.rho[(i, j)];
                } else if bi && bj {
                    out[(flip(i), flip(j))] += self.rho[(i, j)];
                }
            }
        }
        self.rho = out;
        Ok(())
    }
}

/// Diagonal of the no-jump operator `K₀ = I − dt/2 Σ L†L` (all `L†L` here
/// are diagonal in the Fock ⊗ qubit basis).
fn no_jump_diagonal(
    fock_dims: &[usize],
    num_qubits: usize,
    noise: &NoiseModel,
    dt: f64,
) -> Vec<f64> {
    let dtot: usize = fock_dims.iter().product();
    let n = dtot << num_qubits;
    let mut diag = vec![0.0f64; n];
    for (idx, d) in diag.iter_mut().enumerate() {
        let mut rate = 0.0;
        let mut osc = idx % dtot;
        for &dm in fock_dims {
            rate += noise.kappa * (osc % dm) as f64;
            osc /= dm;
        }
        let qb = idx / dtot;
        for q in 0..num_qubits {
            if qb & (1 << q) != 0 {
                rate += noise.gamma;
            }
            rate += noise.gamma_phi / 2.0; // σz² = I
        }
        *d = 1.0 - dt / 2.0 * rate;
    }
    diag
}

fn scaled_instruction(inst: &Instruction, f: f64) -> Instruction {
    match inst {
        Instruction::ConditionalDisplacement { beta, phi, mode, qubit } => {
            Instruction::ConditionalDisplacement {
                beta: beta * f,
                phi: *phi,
                mode: *mode,
                qubit: *qubit,
            }
        }
        Instruction::UnconditionalDisplacement { alpha, mode } => {
            Instruction::UnconditionalDisplacement { alpha: alpha * f, mode: *mode }
        }
        Instruction::QubitRotation { phi, theta, qubit } => {
            Instruction::QubitRotation { phi: *phi, theta: theta * f, qubit: *qubit }
        }
        Instruction::RotationZ { theta, qubit } => {
            Instruction::RotationZ { theta: theta * f, qubit: *qubit }
        }
        other => other.clone(),
    }
}

/// Apply `a` on one mode of a pure state (unnormalized).
fn apply_annihilation(state: &mut HybridState, mode: usize) {
    let d = state.fock_dims[mode];
    let stride: usize = state.fock_dims[..mode].iter().product();
    let n = state.dim();
    let blocks = n / (d * stride);
    for o in 0..blocks {
        for s in 0..stride {
            let base = o * d * stride + s;
            for k in 0..d - 1 {
                state.amp[base + k * stride] =
                    state.amp[base + (k + 1) * stride] * ((k + 1) as f64).sqrt();
            }
            state.amp[base + (d - 1) * stride] = C64::new(0.0, 0.0);
        }
    }
}

fn apply_sigma_minus(state: &mut HybridState, qubit: usize) {
    let dtot = state.dtot();
    let mask = 1usize << qubit;
    let n = state.dim();
    for idx in 0..n {
        let qb = idx / dtot;
        if qb & mask == 0 {
            let src = (qb | mask) * dtot + idx % dtot;
            state.amp[idx] = state.amp[src];
        }
    }
    for idx in 0..n {
        if (idx / dtot) & mask != 0 {
            state.amp[idx] = C64::new(0.0, 0.0);
        }
    }
}

fn apply_sigma_z(state: &mut HybridState, qubit: usize) {
    let dtot = state.dtot();
    let mask = 1usize << qubit;
    for (idx, z) in state.amp.iter_mut().enumerate() {
        if (idx / dtot) & mask != 0 {
            *z = -*z;
        }
    }
}

/// One first-order Kraus step on a density matrix (no unitary part).
fn kraus_step_density(state: &mut DensityState, noise: &NoiseModel, dt: f64) {
    let n = state.dim();
    let dtot = state.dtot();
    let diag = no_jump_diagonal(&state.fock_dims, state.num_qubits, noise, dt);
    let mut out = CMat::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = state.rho[(i, j)] * diag[i] * diag[j];
        }
    }
    if noise.kappa > 0.0 {
        for (m, &dm) in state.fock_dims.iter().enumerate() {
            let stride: usize = state.fock_dims[..m].iter().product();
            let fock_of = |idx: usize| (idx % dtot) / stride % dm;
            for i in 0..n {
                let ni = fock_of(i);
                if ni + 1 >= dm {
                    continue;
                }
                for j in 0..n {
                    let nj = fock_of(j);
                    if nj + 1 >= dm {
                        continue;
                    }
                    let amp = (((ni + 1) * (nj + 1)) as f64).sqrt();
                    out[(i, j)] += state.rho[(i + stride, j + stride)] * (dt * noise.kappa * amp);
                }
            }
        }
    }
    if noise.gamma > 0.0 {
        for q in 0..state.num_qubits {
            let mask = 1usize << q;
            for i in 0..n {
                if (i / dtot) & mask != 0 {
                    continue;
                }
                let i_up = (i / dtot | mask) * dtot + i % dtot;
                for j in 0..n {
                    if (j / dtot) & mask != 0 {
                        continue;
                    }
                    let j_up = (j / dtot | mask) * dtot + j % dtot;
                    out[(i, j)] += state.rho[(i_up, j_up)] * (dt * noise.gamma);
                }
            }
        }
    }
    if noise.gamma_phi > 0.0 {
        for q in 0..state.num_qubits {
            let mask = 1usize << q;
            for i in 0..n {
                let si = if (i / dtot) & mask != 0 { -1.0 } else { 1.0 };
                for j in 0..n {
                    let sj = if (j / dtot) & mask != 0 { -1.0 } else { 1.0 };
                    out[(i, j)] += state.rho[(i, j)] * (dt * noise.gamma_phi / 2.0 * si * sj);
                }
            }
        }
    }
    state.rho = out;
    state.renormalize();
}

/// Apply one instruction to a density matrix with interleaved noise.
/// Measurements are not sampled here; use [`DensityState::postselect`].
pub fn apply_noisy(
    state: &mut DensityState,
    inst: &Instruction,
    noise: &NoiseModel,
    durations: &DurationModel,
    cfg: &FockBasisConfig,
) -> Result<()> {
    noise.validate()?;
    if state.fock_dims.len() != 1 || state.num_qubits != 1 {
        return Err(Error::InvalidParameter(
            "density evolution supports one mode and one qubit".into(),
        ));
    }
    match inst {
        Instruction::MeasureZ { .. } | Instruction::MeasureY { .. } => {
            return Err(Error::InvalidParameter(
                "sample measurements via postselect on density matrices".into(),
            ));
        }
        Instruction::Reset { qubit } => {
            state.reset_qubit(*qubit)?;
            return Ok(());
        }
        _ => {}
    }
    let _ = cfg;
    let t = durations.instruction_duration(inst);
    let dim = state.fock_dims[0];
    if t == 0.0 || noise.is_noiseless() {
        let u = instruction_matrix(inst, dim)?;
        let udag = u.t().mapv(|z| z.conj());
        state.rho = u.dot(&state.rho).dot(&udag);
        return Ok(());
    }
    let n_steps = (t / noise.substep_dt).ceil() as usize;
    let sub = scaled_instruction(inst, 1.0 / n_steps as f64);
    let u = instruction_matrix(&sub, dim)?;
    let udag = u.t().mapv(|z| z.conj());
    let dt = t / n_steps as f64;
    for _ in 0..n_steps {
        state.rho = u.dot(&state.rho).dot(&udag);
        kraus_step_density(state, noise, dt);
    }
    Ok(())
}

/// Idle (gate-free) noisy evolution of a density matrix for time `t` µs.
pub fn idle_noisy(state: &mut DensityState, t: f64, noise: &NoiseModel) -> Result<()> {
    noise.validate()?;
    let n_steps = (t / noise.substep_dt).ceil().max(1.0) as usize;
    let dt = t / n_steps as f64;
    for _ in 0..n_steps {
        kraus_step_density(state, noise, dt);
    }
    Ok(())
}

/// Apply one instruction to a pure-state trajectory: the gate is split into
/// substeps, each with Monte-Carlo jump sampling followed by the
/// sub-unitary.
pub fn apply_trajectory(
    state: &mut HybridState,
    inst: &Instruction,
    noise: &NoiseModel,
    durations: &DurationModel,
    cfg: &FockBasisConfig,
    rng: &mut impl Rng,
) -> Result<ApplyRecord> {
    let t = durations.instruction_duration(inst);
    if t == 0.0 || noise.is_noiseless() {
        return apply(state, inst, cfg, rng);
    }
    let n_steps = (t / noise.substep_dt).ceil() as usize;
    let dt = t / n_steps as f64;
    let sub = scaled_instruction(inst, 1.0 / n_steps as f64);
    let dtot = state.dtot();
    for _ in 0..n_steps {
        let mut p_jump: Vec<(f64, usize, usize)> = Vec::new();
        if noise.kappa > 0.0 {
            for (m, &dm) in state.fock_dims.iter().enumerate() {
                let stride: usize = state.fock_dims[..m].iter().product();
                let nbar: f64 = state
                    .amp
                    .iter()
                    .enumerate()
                    .map(|(idx, z)| ((idx % dtot) / stride % dm) as f64 * z.norm_sqr())
                    .sum();
                p_jump.push((dt * noise.kappa * nbar, 0, m));
            }
        }
        if noise.gamma > 0.0 {
            for q in 0..state.num_qubits {
                let pe = state.qubit_branch_weight(q, 1);
                p_jump.push((dt * noise.gamma * pe, 1, q));
            }
        }
        if noise.gamma_phi > 0.0 {
            for q in 0..state.num_qubits {
                p_jump.push((dt * noise.gamma_phi / 2.0, 2, q));
            }
        }
        let total: f64 = p_jump.iter().map(|x| x.0).sum();
        let r: f64 = rng.gen();
        if r < total {
            let mut acc = 0.0;
            for &(p, kind, which) in &p_jump {
                acc += p;
                if r < acc {
                    match kind {
                        0 => apply_annihilation(state, which),
                        1 => apply_sigma_minus(state, which),
                        _ => apply_sigma_z(state, which),
                    }
                    break;
                }
            }
            state.normalize();
        } else {
            let diag = no_jump_diagonal(&state.fock_dims, state.num_qubits, noise, dt);
            for (idx, z) in state.amp.iter_mut().enumerate() {
                *z *= diag[idx];
            }
            state.normalize();
        }
        apply(state, &sub, cfg, rng)?;
    }
    Ok(ApplyRecord::default())
}

/// Run a whole sequence in trajectory mode.
pub fn run_trajectory_sequence(
    state: &mut HybridState,
    seq: &PulseSequence,
    noise: &NoiseModel,
    durations: &DurationModel,
    cfg: &FockBasisConfig,
    rng: &mut impl Rng,
) -> Result<Vec<ApplyRecord>> {
    seq.instructions
        .iter()
        .map(|inst| apply_trajectory(state, inst, noise, durations, cfg, rng))
        .collect()
}

/// Identity on the hybrid space (test helper).
pub fn identity(dim: usize) -> CMat {
    Array2::from_diag_elem(2 * dim, C64::new(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{coherent_vec, fock_vec};
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    const D: usize = 48;

    fn g() -> [C64; 2] {
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    }

    #[test]
    fn noiseless_density_matches_pure() {
        let cfg = FockBasisConfig::new(D).unwrap();
        let noise = NoiseModel::none();
        let dm = DurationModel::default();
        let inst = Instruction::cd(C64::new(0.8, 0.3), 0.7, 0, 0);
        let mut rho = DensityState::from_pure(&HybridState::product(&fock_vec(0, D), g()));
        apply_noisy(&mut rho, &inst, &noise, &dm, &cfg).unwrap();
        let mut psi = HybridState::product(&fock_vec(0, D), g());
        let mut rng = StdRng::seed_from_u64(0);
        apply(&mut psi, &inst, &cfg, &mut rng).unwrap();
        let f = rho.fidelity_with_pure(&psi);
        assert!((f - 1.0).abs() < 1e-10, "trace distance to pure result: {}", 1.0 - f);
    }

    #[test]
    fn idle_photon_decay_oracle() {
        // ⟨n⟩(t) = |α|² e^{−κt} for a lossy cavity
        let noise = NoiseModel { kappa: 0.05, gamma: 0.0, gamma_phi: 0.0, substep_dt: 0.01 };
        let alpha = C64::new(1.2, 0.4);
        let mut rho = DensityState::from_pure(&HybridState::product(&coherent_vec(alpha, D), g()));
        let t = 3.0;
        idle_noisy(&mut rho, t, &noise).unwrap();
        let nbar: f64 = (0..2 * D).map(|i| (i % D) as f64 * rho.rho[(i, i)].re).sum();
        let expect = alpha.norm_sqr() * (-noise.kappa * t).exp();
        assert_abs_diff_eq!(nbar, expect, epsilon = 2e-3);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-8);
        assert!(rho.hermiticity_defect() < 1e-10);
    }

    #[test]
    fn qubit_decay_and_dephasing_rates() {
        // start in |+⟩: ⟨σx⟩ decays as e^{−(γ/2 + γφ)t}, P_e as e^{−γt}
        let noise = NoiseModel { kappa: 0.0, gamma: 0.04, gamma_phi: 0.02, substep_dt: 0.01 };
        let sq2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut rho = DensityState::from_pure(&HybridState::product(
            &fock_vec(0, 4),
            [C64::new(sq2, 0.0), C64::new(sq2, 0.0)],
        ));
        let t = 5.0;
        idle_noisy(&mut rho, t, &noise).unwrap();
        let pe: f64 = (4..8).map(|i| rho.rho[(i, i)].re).sum();
        let sx: f64 = (0..4).map(|i| 2.0 * rho.rho[(i, 4 + i)].re).sum();
        assert_abs_diff_eq!(pe, 0.5 * (-noise.gamma * t).exp(), epsilon = 1e-3);
        let expect_sx = (-(noise.gamma / 2.0 + noise.gamma_phi) * t).exp();
        assert_abs_diff_eq!(sx, expect_sx, epsilon = 1e-3);
    }

    #[test]
    fn trajectory_average_matches_density() {
        let cfg = FockBasisConfig::new(D).unwrap();
        let noise = NoiseModel { kappa: 0.08, gamma: 0.0, gamma_phi: 0.0, substep_dt: 0.01 };
        let dm = DurationModel::default();
        let inst = Instruction::UnconditionalDisplacement { alpha: C64::new(1.5, 0.0), mode: 0 };
        let mut rho = DensityState::from_pure(&HybridState::product(&fock_vec(0, D), g()));
        apply_noisy(&mut rho, &inst, &noise, &dm, &cfg).unwrap();
        let nbar_rho: f64 = (0..2 * D).map(|i| (i % D) as f64 * rho.rho[(i, i)].re).sum();
        let rounds = 600;
        let mut acc = 0.0;
        for k in 0..rounds {
            let mut psi = HybridState::product(&fock_vec(0, D), g());
            let mut rng = StdRng::seed_from_u64(1000 + k);
            apply_trajectory(&mut psi, &inst, &noise, &dm, &cfg, &mut rng).unwrap();
            acc += psi
                .amp
                .iter()
                .enumerate()
                .map(|(idx, z)| (idx % D) as f64 * z.norm_sqr())
                .sum::<f64>();
        }
        let nbar_traj = acc / rounds as f64;
        assert!(
            (nbar_traj - nbar_rho).abs() < 0.05,
            "trajectory {nbar_traj:.4} vs density {nbar_rho:.4}"
        );
    }

    #[test]
    fn postselect_mechanics() {
        let sq2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut rho = DensityState::from_pure(&HybridState::product(
            &fock_vec(0, 4),
            [C64::new(sq2, 0.0), C64::new(sq2, 0.0)],
        ));
        let p = rho.postselect(0, Outcome::Plus).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.prob_ground(0), 1.0, epsilon = 1e-12);
        let mut rho_g = DensityState::from_pure(&HybridState::product(&fock_vec(0, 4), g()));
        let p1 = rho_g.postselect(0, Outcome::Plus).unwrap();
        assert_abs_diff_eq!(p1, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_preserved_during_noisy_gate() {
        let cfg = FockBasisConfig::new(D).unwrap();
        let noise = NoiseModel { kappa: 0.02, gamma: 0.05, gamma_phi: 0.05, substep_dt: 0.01 };
        let dm = DurationModel::default();
        let mut rho = DensityState::from_pure(&HybridState::product(&fock_vec(0, D), g()));
        apply_noisy(&mut rho, &Instruction::cd(C64::new(1.2, 0.0), 0.0, 0, 0), &noise, &dm, &cfg)
            .unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-8);
        assert!(rho.hermiticity_defect() < 1e-9);
        // random-probe positivity
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let v: Vec<C64> = (0..2 * D)
                .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..2 * D {
                for j in 0..2 * D {
                    acc += v[i].conj() * rho.rho[(i, j)] * v[j];
                }
            }
            assert!(acc.re > -1e-8, "negative probe expectation {acc}");
        }
    }

    #[test]
    fn rate_too_large_rejected() {
        let m = NoiseModel { kappa: 2.0, gamma: 0.0, gamma_phi: 0.0, substep_dt: 0.01 };
        assert!(matches!(m.validate(), Err(Error::RateTooLarge(_))));
    }

    #[test]
    fn reset_channel_moves_excitation_to_ground() {
        let mut rho = DensityState::from_pure(&HybridState::product(
            &fock_vec(0, 4),
            [C64::new(0.6, 0.0), C64::new(0.0, 0.8)],
        ));
        rho.reset_qubit(0).unwrap();
        assert_abs_diff_eq!(rho.prob_ground(0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
    }
}
