//! Gate teleportation on the GKP codespace: a logical rotation is imprinted
//! by a qubit phase gate sandwiched between the entangling and unentangling
//! gadgets. The error-corrected variant completes a stabilization round per
//! piece; splitting the angle over `m` pieces suppresses biased ancilla
//! errors.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    entangling_gadget, inverse_entangling_gadget, unentangling_gadget, GkpAxis, GkpCode, Logical,
};
use crate::error::{Error, Result};
use crate::hilbert::{FockBasisConfig, HybridState};
use crate::instr::{apply_sequence, Instruction, PulseSequence};
use crate::CVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TeleportMode {
    /// `E`, qubit phase, `U`: each piece is also a stabilization round.
    ErrorCorrected,
    /// `E`, qubit phase, `E⁻¹`: no autonomous correction.
    Trivial,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TeleportPlan {
    pub axis: GkpAxis,
    /// Logical rotation angle θ (the circuit enacts `Z(π+θ)`-type logical
    /// action per piece bookkeeping).
    pub theta: f64,
    pub pieces: usize,
    /// Probability of a σx ancilla flip per piece's conditional
    /// displacements (biased-noise model), used by the noisy runner.
    pub p_x: f64,
    pub mode: TeleportMode,
    /// Use θ′ = θ/(1−2pₓ) to compensate the systematic shrinkage.
    pub compensate: bool,
}

impl TeleportPlan {
    pub fn noiseless(theta: f64) -> Self {
        Self {
            axis: GkpAxis::Z,
            theta,
            pieces: 1,
            p_x: 0.0,
            mode: TeleportMode::ErrorCorrected,
            compensate: false,
        }
    }
}

/// One piece of the teleportation circuit: `E`, `R_Z(θ_piece)`, `U` (or
/// `E⁻¹`), then an ancilla reset.
pub fn piece_sequence(code: &GkpCode, plan: &TeleportPlan, theta_piece: f64) -> PulseSequence {
    let beta = code.axis_beta(plan.axis);
    let mut seq = entangling_gadget(beta, code.delta, 0, 0);
    seq.push(Instruction::RotationZ { theta: theta_piece, qubit: 0 });
    match plan.mode {
        TeleportMode::ErrorCorrected => seq.extend(&unentangling_gadget(beta, code.delta, 0, 0)),
        TeleportMode::Trivial => seq.extend(&inverse_entangling_gadget(beta, code.delta, 0, 0)),
    }
    seq
}

/// Logical coefficients `(a, b)` mapping under one piece: `a|0⟩ + b|1⟩ →
/// a|0⟩ − e^{iθ}b|1⟩` (Z axis bookkeeping; other axes conjugate the basis).
fn piece_logical_update(a: C64, b: C64, theta: f64) -> (C64, C64) {
    (a, -b * C64::from_polar(1.0, theta))
}

/// Noiseless teleported rotation on `|+⟩`-type input. Returns the final
/// postselected state, the success probability (all-ground outcomes), and
/// the hybrid fidelity against the tracked logical target.
pub fn teleport_gate(
    code: &GkpCode,
    plan: &TeleportPlan,
    dim: usize,
) -> Result<(HybridState, f64, f64)> {
    if plan.pieces == 0 {
        return Err(Error::InvalidParameter("pieces must be ≥ 1".into()));
    }
    let cfg = FockBasisConfig::new(dim)?.with_leakage_tol(1e-5)?;
    let input = code.stationary_codeword(Logical::Plus, dim)?;
    let mut state = HybridState::product(&input, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let sq2 = std::f64::consts::FRAC_1_SQRT_2;
    let (mut la, mut lb) = (C64::new(sq2, 0.0), C64::new(sq2, 0.0));
    let mut success = 1.0;
    let theta_piece = plan.theta / plan.pieces as f64;
    for _ in 0..plan.pieces {
        let seq = piece_sequence(code, plan, theta_piece);
        apply_sequence(&mut state, &seq, &cfg, &mut rng)?;
        let p_g = state.qubit_branch_weight(0, 0);
        success *= p_g;
        state.project_qubit(0, 0);
        state.normalize();
        let up = piece_logical_update(la, lb, theta_piece);
        la = up.0;
        lb = up.1;
    }
    let target = logical_combo(code, la, lb, dim)?;
    let out_osc = state.osc_branch(0);
    let ov: C64 = target.iter().zip(out_osc.iter()).map(|(t, s)| t.conj() * s).sum();
    let fidelity = ov.norm_sqr();
    Ok((state, success, fidelity))
}

/// Normalized `a|0_Δ⟩ + b|1_Δ⟩` built from stabilized codewords.
pub fn logical_combo(code: &GkpCode, a: C64, b: C64, dim: usize) -> Result<CVec> {
    let zero = code.stationary_codeword(Logical::Zero, dim)?;
    let one = code.stationary_codeword(Logical::One, dim)?;
    let mut v: CVec = zero.mapv(|z| z * a) + one.mapv(|z| z * b);
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.mapv_inplace(|z| z / n);
    Ok(v)
}

/// Toy-model Monte Carlo of the pieceable circuit: per run the flip count
/// is binomial and the fidelity sample is `cos²[θ(p − k/m)]`; the mean
/// converges to [`pieceable_fidelity_formula`]. Returns `(mean, stderr)`.
pub fn pieceable_toy_mc(
    m: usize,
    p_x: f64,
    theta: f64,
    rounds: usize,
    seed: u64,
) -> (f64, f64) {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(seed);
    let mut acc = 0.0;
    let mut acc2 = 0.0;
    for _ in 0..rounds {
        let mut k = 0usize;
        for _ in 0..m {
            if rng.gen::<f64>() < p_x {
                k += 1;
            }
        }
        let f = (theta * (p_x - k as f64 / m as f64)).cos().powi(2);
        acc += f;
        acc2 += f * f;
    }
    let mean = acc / rounds as f64;
    let var = acc2 / rounds as f64 - mean * mean;
    (mean, (var / rounds as f64).sqrt())
}

/// Closed-form pieceable-teleportation fidelity under per-piece σx flips:
/// `F = Σₖ C(m,k)(1−p)^{m−k} pᵏ cos²[θ(p − k/m)]`.
pub fn pieceable_fidelity_formula(m: usize, p_x: f64, theta: f64) -> f64 {
    let mut f = 0.0;
    let mut binom = 1.0f64;
    for k in 0..=m {
        let prob = binom * (1.0 - p_x).powi((m - k) as i32) * p_x.powi(k as i32);
        let ang = theta * (p_x - k as f64 / m as f64);
        f += prob * ang.cos().powi(2);
        binom *= (m - k) as f64 / (k + 1) as f64;
    }
    f
}

/// Monte-Carlo run of the pieceable circuit on the GKP state with σx flips
/// injected during the conditional displacements at a rate calibrated to
/// `p_x` per piece. Returns `(fidelity, standard error)` against the
/// mean-angle target, quoted in the mixed-state (amplitude) convention
/// `√⟨t|ρ|t⟩` that the toy-model formula is benchmarked against.
pub fn pieceable_teleport_mc(
    code: &GkpCode,
    plan: &TeleportPlan,
    rounds: usize,
    dim: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    use rayon::prelude::*;
    let cfg = FockBasisConfig::new(dim)?.with_leakage_tol(1e-4)?;
    let input = code.stationary_codeword(Logical::Plus, dim)?;
    let theta_piece = if plan.compensate {
        plan.theta / (1.0 - 2.0 * plan.p_x) / plan.pieces as f64
    } else {
        plan.theta / plan.pieces as f64
    };
    // the mean rotation over flips is θ(1−2pₓ) (or θ with compensation)
    let mean_theta = theta_piece * plan.pieces as f64 * (1.0 - 2.0 * plan.p_x);
    let sq2 = std::f64::consts::FRAC_1_SQRT_2;
    let (mut la, mut lb) = (C64::new(sq2, 0.0), C64::new(sq2, 0.0));
    for _ in 0..plan.pieces {
        let up = piece_logical_update(la, lb, mean_theta / plan.pieces as f64);
        la = up.0;
        lb = up.1;
    }
    let target = logical_combo(code, la, lb, dim)?;
    // per-CD flip probability reproducing p_x over one piece's CD budget
    let piece = piece_sequence(code, plan, theta_piece);
    let cd_amps: Vec<f64> = piece
        .instructions
        .iter()
        .filter_map(|i| match i {
            Instruction::ConditionalDisplacement { beta, .. } => Some(beta.norm()),
            _ => None,
        })
        .collect();
    let total_amp: f64 = cd_amps.iter().sum();
    let fids: Vec<f64> = (0..rounds)
        .into_par_iter()
        .map(|round| {
            use rand::rngs::StdRng;
            use rand::SeedableRng;
            let mut rng = StdRng::seed_from_u64(seed.wrapping_add(round as u64 * 0x9e3779b9));
            let mut state =
                HybridState::product(&input, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
            for _ in 0..plan.pieces {
                for inst in &piece.instructions {
                    // biased ancilla noise: flip before each CD with the
                    // amplitude-weighted share of p_x
                    if let Instruction::ConditionalDisplacement { beta, .. } = inst {
                        let p_here = plan.p_x * beta.norm() / total_amp;
                        if rng.gen::<f64>() < p_here {
                            let flip = Instruction::QubitRotation {
                                phi: 0.0,
                                theta: std::f64::consts::PI,
                                qubit: 0,
                            };
                            crate::instr::apply(&mut state, &flip, &cfg, &mut rng).unwrap();
                        }
                    }
                    crate::instr::apply(&mut state, inst, &cfg, &mut rng).unwrap();
                }
                // reset the ancilla for the next piece
                let reset = Instruction::Reset { qubit: 0 };
                crate::instr::apply(&mut state, &reset, &cfg, &mut rng).unwrap();
            }
            let out = state.osc_branch(0);
            let we = state.qubit_branch_weight(0, 1);
            let branch = if we > 0.5 { state.osc_branch(1) } else { out };
            let ov: C64 = target.iter().zip(branch.iter()).map(|(t, s)| t.conj() * s).sum();
            ov.norm_sqr()
        })
        .collect();
    let mean = fids.iter().sum::<f64>() / rounds as f64;
    let var = fids.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / rounds as f64;
    let stderr = (var / rounds as f64).sqrt();
    // amplitude convention: F(ρ, |t⟩) = √(⟨t|ρ|t⟩); error propagated
    let amp = mean.sqrt();
    Ok((amp, stderr / (2.0 * amp)))
}

/// Entangling teleportation via a controlled-phase between the ancillae
/// (one entangler reads the Z combs of the control mode, the other the X
/// combs of the target mode). From control `|−⟩` and target `|1⟩` the net
/// logical action is a CX, leaving the modes in the Bell pair
/// `|00⟩ + |11⟩`.
pub fn bell_via_cx_teleport(
    code: &GkpCode,
    dim_per_mode: usize,
) -> Result<(HybridState, f64, f64)> {
    let cfg = FockBasisConfig::new(dim_per_mode)?.with_leakage_tol(1e-3)?;
    let zero_cw = code.stationary_codeword(Logical::Zero, dim_per_mode)?;
    let one_cw = code.stationary_codeword(Logical::One, dim_per_mode)?;
    let mut minus: crate::CVec = &zero_cw - &one_cw;
    let mn = minus.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    minus.mapv_inplace(|z| z / mn);
    let g = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let mut state = HybridState::product2(&minus, &one_cw, g, g);
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let beta_z = code.axis_beta(GkpAxis::Z);
    let beta_x = code.axis_beta(GkpAxis::X);
    let mut seq = entangling_gadget(beta_z, code.delta, 0, 0);
    seq.extend(&entangling_gadget(beta_x, code.delta, 1, 1));
    apply_sequence(&mut state, &seq, &cfg, &mut rng)?;
    // controlled phase between the ancillae: diag(1, 1, 1, −1)
    let dtot = state.dtot();
    for (idx, z) in state.amp.iter_mut().enumerate() {
        if (idx / dtot) & 3 == 3 {
            *z = -*z;
        }
    }
    let mut seq2 = unentangling_gadget(beta_z, code.delta, 0, 0);
    seq2.extend(&unentangling_gadget(beta_x, code.delta, 1, 1));
    apply_sequence(&mut state, &seq2, &cfg, &mut rng)?;
    let p_g0 = state.qubit_branch_weight(0, 0);
    state.project_qubit(0, 0);
    state.normalize();
    let p_g1 = state.qubit_branch_weight(1, 0);
    state.project_qubit(1, 0);
    state.normalize();
    let success = p_g0 * p_g1;
    // Bell target |00⟩ + |11⟩ from the same codeword vectors
    let mut target = ndarray::Array1::<C64>::zeros(dim_per_mode * dim_per_mode);
    for n1 in 0..dim_per_mode {
        for n0 in 0..dim_per_mode {
            target[n1 * dim_per_mode + n0] =
                zero_cw[n0] * zero_cw[n1] + one_cw[n0] * one_cw[n1];
        }
    }
    let tn = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let out = state.osc_branch(0);
    let ov: C64 = target.iter().zip(out.iter()).map(|(t, s)| t.conj() * s).sum::<C64>() / tn;
    Ok((state, success, ov.norm_sqr()))
}

/// Two-ancilla entangling teleportation: `E` on both modes, a two-qubit
/// `exp(−iθ σz⊗σz)` between the ancillae, `U` on both modes. From
/// `|++⟩` with θ = π/4 this prepares a logical Bell state.
pub fn teleport_two_qubit(
    code: &GkpCode,
    theta: f64,
    dim_per_mode: usize,
) -> Result<(HybridState, f64, f64)> {
    let cfg = FockBasisConfig::new(dim_per_mode)?.with_leakage_tol(1e-3)?;
    // build the input from the same codeword vectors the target uses, so
    // truncation artifacts at small per-mode dimensions stay consistent;
    // the stabilization fixed point is the operating point (small spaces
    // refine along the position axis only, see `stationary_codeword`)
    let zero_cw = code.stationary_codeword(Logical::Zero, dim_per_mode)?;
    let one_cw = code.stationary_codeword(Logical::One, dim_per_mode)?;
    let mut plus: crate::CVec = &zero_cw + &one_cw;
    let pn = plus.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    plus.mapv_inplace(|z| z / pn);
    let g = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let mut state = HybridState::product2(&plus, &plus, g, g);
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let beta = code.axis_beta(GkpAxis::Z);
    // entangle: E_x on (mode 0, qubit 0) and (mode 1, qubit 1)
    let mut seq = entangling_gadget(beta, code.delta, 0, 0);
    seq.extend(&entangling_gadget(beta, code.delta, 1, 1));
    apply_sequence(&mut state, &seq, &cfg, &mut rng)?;
    // two-qubit phase: exp(−iθ σz⊗σz) is diagonal in the qubit labels
    let dtot = state.dtot();
    for (idx, z) in state.amp.iter_mut().enumerate() {
        let qb = idx / dtot;
        let s0 = if qb & 1 == 0 { 1.0 } else { -1.0 };
        let s1 = if qb & 2 == 0 { 1.0 } else { -1.0 };
        *z *= C64::from_polar(1.0, -theta * s0 * s1);
    }
    // unentangle both
    let mut seq2 = unentangling_gadget(beta, code.delta, 0, 0);
    seq2.extend(&unentangling_gadget(beta, code.delta, 1, 1));
    apply_sequence(&mut state, &seq2, &cfg, &mut rng)?;
    let p_g0 = state.qubit_branch_weight(0, 0);
    state.project_qubit(0, 0);
    state.normalize();
    let p_g1 = state.qubit_branch_weight(1, 0);
    state.project_qubit(1, 0);
    state.normalize();
    let success = p_g0 * p_g1;
    // logical action: |00⟩+|01⟩+|10⟩+|11⟩ → e^{−iθ}(|00⟩+|11⟩) −
    // e^{+iθ}(|01⟩+|10⟩) up to a global phase (Bell state at θ = π/4)
    let zero = zero_cw;
    let one = one_cw;
    let mut target = ndarray::Array1::<C64>::zeros(dim_per_mode * dim_per_mode);
    let phase_pp = C64::from_polar(0.5, -theta);
    let phase_pm = -C64::from_polar(0.5, theta);
    for n1 in 0..dim_per_mode {
        for n0 in 0..dim_per_mode {
            let idx = n1 * dim_per_mode + n0;
            target[idx] = phase_pp * (zero[n0] * zero[n1] + one[n0] * one[n1])
                + phase_pm * (zero[n0] * one[n1] + one[n0] * zero[n1]);
        }
    }
    let tn = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let out = state.osc_branch(0);
    let ov: C64 =
        target.iter().zip(out.iter()).map(|(t, s)| t.conj() * s).sum::<C64>() / tn;
    Ok((state, success, ov.norm_sqr()))
}

/// Transfer an arbitrary qubit state onto the codespace: a conditional
/// logical displacement writes the coefficients, stabilization rounds
/// re-center the envelope, and an unentangling gadget frees the ancilla.
pub fn arbitrary_state_transfer(
    code: &GkpCode,
    qubit: [C64; 2],
    stabilization_rounds: usize,
    dim: usize,
) -> Result<(CVec, f64)> {
    let cfg = FockBasisConfig::new(dim)?.with_leakage_tol(1e-5)?;
    let zero = code.stationary_codeword(Logical::Zero, dim)?;
    let mut state = HybridState::product(&zero, qubit);
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let a = code.gadget_amplitude();
    // conditional half-logical displacement + recentering offset
    let mut seq = PulseSequence::from_vec(vec![
        Instruction::cd_z(C64::new(-a, 0.0), 0, 0),
        Instruction::UnconditionalDisplacement { alpha: C64::new(a, 0.0), mode: 0 },
    ]);
    apply_sequence(&mut state, &seq, &cfg, &mut rng)?;
    // unentangle with the inverse entangler: E_x maps a|0⟩ + b|1⟩ ⊗ |g⟩ to
    // a|0⟩|g⟩ − b|1⟩|e⟩ up to a deterministic half-lattice momentum
    // displacement (the comb picks up (−1)^m phases), so E_x† plus the
    // compensating displacement returns the written state to the ground
    // ancilla
    seq = inverse_entangling_gadget(code.axis_beta(GkpAxis::Z), code.delta, 0, 0);
    seq.push(Instruction::UnconditionalDisplacement {
        alpha: C64::new(0.0, code.gadget_amplitude()),
        mode: 0,
    });
    apply_sequence(&mut state, &seq, &cfg, &mut rng)?;
    state.project_qubit(0, 0);
    state.normalize();
    // stabilization of the released oscillator (round pairs keep the
    // tracked Pauli trivial): the written branch carries its envelope
    // displaced by one half-spacing, which the stabilization walks back
    for _ in 0..stabilization_rounds {
        for axis in [GkpAxis::Z, GkpAxis::Z, GkpAxis::X, GkpAxis::X] {
            let out = super::sbs_round(&state, code, axis, &cfg)?;
            state = out.state_g;
        }
    }
    let out = state.osc_branch(0);
    // the inverse entangler plus the compensating half-lattice displacement
    // leave the logical frame trivial (coefficients carried straight over)
    let target = logical_combo(code, qubit[0], qubit[1], dim)?;
    let ov: C64 = target.iter().zip(out.iter()).map(|(t, s)| t.conj() * s).sum();
    Ok((out, ov.norm_sqr()))
}
