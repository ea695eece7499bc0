//! Finite-energy GKP codewords and their control primitives: the
//! entangling/unentangling gadgets built from a big conditional displacement
//! plus a small finite-energy correction, the small-big-small stabilization
//! round, logical readout schemes, and gate teleportation.

pub mod noisy_prep;
pub mod readout;
pub mod teleport;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{displaced_squeezed_vec, quadrature_eig, HybridState};
use crate::instr::{Instruction, PulseSequence};
use crate::CVec;

/// Square-lattice GKP code with envelope parameter Δ.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GkpCode {
    pub delta: f64,
    /// Distance between neighboring peaks of the same codeword
    /// (`√(2π)` in Wigner units for the square qubit code).
    pub lattice_spacing: f64,
}

/// Logical states constructible from the codeword combs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Logical {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

/// Quadrature label for gadgets and stabilizer rounds: the measured logical
/// basis (Z reads position combs, X momentum combs, Y the diagonal).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GkpAxis {
    X,
    Y,
    Z,
}

impl GkpCode {
    pub fn square(delta: f64) -> Self {
        Self { delta, lattice_spacing: (2.0 * std::f64::consts::PI).sqrt() }
    }

    /// Half the lattice spacing: distance between `|0⟩` and `|1⟩` peaks.
    pub fn half_spacing(&self) -> f64 {
        self.lattice_spacing / 2.0
    }

    /// Narrow-peak factor for the envelope construction (peaks start at
    /// `Δ × factor` before the envelope shapes them).
    fn pre_width_factor(&self) -> f64 {
        0.25
    }

    /// Big-CD amplitude of the readout/stabilization gadgets
    /// (`√π/(2√2)` for the square code).
    pub fn gadget_amplitude(&self) -> f64 {
        self.lattice_spacing / 4.0
    }

    /// Position-comb codeword built as the envelope `exp(−Δ²n̂)` applied to
    /// an equal-weight comb of narrow peaks at `(2m+μ)·h` (the narrow-peak
    /// width is taken well below Δ so the envelope sets the physical peak
    /// shape, weight, and position corrections). Normalized.
    pub fn comb(&self, mu: usize, dim: usize) -> CVec {
        let h = self.half_spacing();
        let pre_width = self.delta * self.pre_width_factor();
        let mut v: CVec = ndarray::Array1::zeros(dim);
        let mut m = -12i64;
        while m <= 12 {
            let x = (2 * m + mu as i64) as f64 * h;
            // drop peaks whose displaced tail cannot fit the truncation
            // (they would wrap into spurious support)
            let fits = x * x + 6.0 * x.abs() < dim as f64 - 2.0;
            if fits && (-x * x * self.delta * self.delta / 2.0).exp() > 1e-9 {
                let peak = displaced_squeezed_vec(C64::new(x, 0.0), pre_width, dim);
                v = &v + &peak;
            }
            m += 1;
        }
        for (n, z) in v.iter_mut().enumerate() {
            *z *= (-self.delta * self.delta * n as f64).exp();
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.mapv(|z| z / norm)
    }

    /// Finite-energy codeword in the given logical state.
    pub fn codeword(&self, l: Logical, dim: usize) -> CVec {
        let zero = self.comb(0, dim);
        let one = self.comb(1, dim);
        let i = C64::new(0.0, 1.0);
        let combine = |a: C64, b: C64| -> CVec {
            let mut v: CVec = zero.mapv(|z| z * a) + one.mapv(|z| z * b);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.mapv_inplace(|z| z / norm);
            v
        };
        match l {
            Logical::Zero => zero,
            Logical::One => one,
            Logical::Plus => combine(C64::new(1.0, 0.0), C64::new(1.0, 0.0)),
            Logical::Minus => combine(C64::new(1.0, 0.0), C64::new(-1.0, 0.0)),
            Logical::PlusI => combine(C64::new(1.0, 0.0), i),
            Logical::MinusI => combine(C64::new(1.0, 0.0), -i),
        }
    }

    /// Expectation values of the finite-energy stabilizers
    /// `S_{x,Δ} = exp[i 2ℓ(cosh Δ² x − sinh Δ² p)]` and
    /// `S_{p,Δ} = exp[i 2ℓ(cosh Δ² p − sinh Δ² x)]` (ℓ = lattice spacing)
    /// on an oscillator vector.
    pub fn stabilizer_expectations(&self, osc: &CVec) -> (C64, C64) {
        let d2 = self.delta * self.delta;
        let l = self.lattice_spacing;
        let (ch, sh) = (d2.cosh(), d2.sinh());
        // exp(i2v̂) = D(β) with v̂ = Im(β)x − Re(β)p
        let beta_x = C64::new(l * sh, l * ch);
        let beta_p = C64::new(-l * ch, -l * sh);
        let dim = osc.len();
        let eig = quadrature_eig(dim);
        let mut scratch = vec![C64::new(0.0, 0.0); dim];
        let mut eval = |beta: C64| -> C64 {
            let mut w: Vec<C64> = osc.to_vec();
            eig.apply_displacement(beta, &mut w, &mut scratch);
            osc.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum()
        };
        (eval(beta_x), eval(beta_p))
    }

    /// Big-CD amplitude (phase-space direction included) for a gadget along
    /// the given logical axis. Y is longer by √2.
    pub fn axis_beta(&self, axis: GkpAxis) -> C64 {
        let a = self.gadget_amplitude();
        match axis {
            GkpAxis::Z => C64::new(0.0, a),
            GkpAxis::X => C64::new(-a, 0.0),
            GkpAxis::Y => C64::new(-a, a),
        }
    }
}

impl GkpCode {
    /// Codeword refined to the stabilization fixed point: alternating-axis
    /// SBS round pairs post-selected on the ground outcome (pairs keep the
    /// tracked logical Pauli trivial). The envelope construction is within
    /// ~6e−3 of this state; protocols anchored to stabilization statistics
    /// use the refined version.
    pub fn stationary_codeword(&self, l: Logical, dim: usize) -> Result<CVec> {
        let cfg = crate::hilbert::FockBasisConfig::new(dim)?.with_leakage_tol(1e-4)?;
        let mut state = HybridState::product(
            &self.codeword(l, dim),
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        );
        // the momentum-axis rounds displace the comb by a full half-lattice
        // mid-round and need headroom; below ~100 levels they mix the
        // codewords, so small spaces refine along the position axis only
        let axes: &[GkpAxis] = if dim >= 100 {
            &[GkpAxis::Z, GkpAxis::Z, GkpAxis::X, GkpAxis::X]
        } else {
            &[GkpAxis::Z, GkpAxis::Z]
        };
        for _ in 0..3 {
            for &axis in axes {
                let out = sbs_round(&state, self, axis, &cfg)?;
                state = out.state_g;
            }
        }
        Ok(state.osc_branch(0))
    }
}

/// Entangling gadget `E_v`: small finite-energy pre-correction along `v⊥`
/// (axis σy), then the big conditional displacement along `v` (axis σx).
/// Maps `(a|0⟩ + b|1⟩) ⊗ |g⟩ → a|0⟩|g⟩ − b|1⟩|e⟩` on the codespace.
pub fn entangling_gadget(beta_big: C64, delta: f64, mode: usize, qubit: usize) -> PulseSequence {
    let pre = beta_big * C64::new(0.0, delta * delta);
    PulseSequence::from_vec(vec![
        Instruction::cd(pre, std::f64::consts::FRAC_PI_2, mode, qubit),
        Instruction::cd(beta_big, 0.0, mode, qubit),
    ])
}

/// Unentangling gadget `U_v`: the big conditional displacement, then the
/// small correction (the mirror of `E_v`; together they form one
/// small-big-small stabilization round).
pub fn unentangling_gadget(beta_big: C64, delta: f64, mode: usize, qubit: usize) -> PulseSequence {
    let post = beta_big * C64::new(0.0, delta * delta);
    PulseSequence::from_vec(vec![
        Instruction::cd(beta_big, 0.0, mode, qubit),
        Instruction::cd(post, std::f64::consts::FRAC_PI_2, mode, qubit),
    ])
}

/// `U = E⁻¹` (trivial unentangler: undoes the entangler exactly instead of
/// completing a stabilization round).
pub fn inverse_entangling_gadget(
    beta_big: C64,
    delta: f64,
    mode: usize,
    qubit: usize,
) -> PulseSequence {
    let pre = beta_big * C64::new(0.0, delta * delta);
    PulseSequence::from_vec(vec![
        Instruction::cd(-beta_big, 0.0, mode, qubit),
        Instruction::cd(-pre, std::f64::consts::FRAC_PI_2, mode, qubit),
    ])
}

/// One small-big-small stabilization round along the given axis:
/// `E_v` then `U_v` with the ancilla starting in `|g⟩`. On the codespace it
/// enacts a tracked logical Pauli (Z for the position axis).
pub fn sbs_sequence(code: &GkpCode, axis: GkpAxis, mode: usize, qubit: usize) -> PulseSequence {
    let beta = code.axis_beta(axis);
    let mut seq = entangling_gadget(beta, code.delta, mode, qubit);
    seq.extend(&unentangling_gadget(beta, code.delta, mode, qubit));
    seq
}

/// Result of an SBS round applied to a pure hybrid state.
#[derive(Clone, Debug)]
pub struct SbsOutcome {
    /// Probability of finding the ancilla back in `|g⟩`.
    pub p_g: f64,
    /// Normalized oscillator-qubit state after projecting onto `|g⟩`.
    pub state_g: HybridState,
    /// Normalized state after projecting onto `|e⟩` (empty branch ⇒ None).
    pub state_e: Option<HybridState>,
}

/// Apply one SBS round (no measurement sampling: both branches returned).
pub fn sbs_round(
    state: &HybridState,
    code: &GkpCode,
    axis: GkpAxis,
    cfg: &crate::hilbert::FockBasisConfig,
) -> Result<SbsOutcome> {
    if state.num_qubits != 1 || state.fock_dims.len() != 1 {
        return Err(Error::InvalidParameter("sbs_round needs one mode and one qubit".into()));
    }
    let mut s = state.clone();
    let seq = sbs_sequence(code, axis, 0, 0);
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    crate::instr::apply_sequence(&mut s, &seq, cfg, &mut rng)?;
    let p_g = s.qubit_branch_weight(0, 0);
    let mut state_g = s.clone();
    state_g.project_qubit(0, 0);
    state_g.normalize();
    let state_e = if 1.0 - p_g > 1e-12 {
        let mut se = s;
        se.project_qubit(0, 1);
        se.normalize();
        Some(se)
    } else {
        None
    };
    Ok(SbsOutcome { p_g, state_g, state_e })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::diag::quadrature_moments;
    use crate::hilbert::FockBasisConfig;

    const DIM: usize = 160;

    fn code() -> GkpCode {
        GkpCode::square(0.34)
    }

    #[test]
    fn codewords_normalized_and_nearly_orthogonal() {
        let c = code();
        let zero = c.codeword(Logical::Zero, DIM);
        let one = c.codeword(Logical::One, DIM);
        let nz: f64 = zero.iter().map(|z| z.norm_sqr()).sum();
        assert!((nz - 1.0).abs() < 1e-10);
        let ov: C64 = zero.iter().zip(one.iter()).map(|(a, b)| a.conj() * b).sum();
        assert!(ov.norm_sqr() < 1e-3, "|⟨0|1⟩|² = {:.2e}", ov.norm_sqr());
    }

    #[test]
    fn stabilizer_expectations_high_on_codewords() {
        let c = code();
        let zero = c.codeword(Logical::Zero, DIM);
        let (sx, sp) = c.stabilizer_expectations(&zero);
        // Gaussian-damping oracle: ⟨S_Δ⟩ ≈ exp(−(ℓ²/2)(cosh²Δ²·δx² + sinh²Δ²·δp²))
        // with per-peak δx = Δ/2, envelope δp ≈ 1/(2Δ): ≈ 0.48 at Δ = 0.34
        let d2: f64 = 0.34 * 0.34;
        let l2 = 2.0 * std::f64::consts::PI;
        let damp = (-2.0 * l2 * (d2.cosh().powi(2) * d2 / 4.0 + d2.sinh().powi(2) / (4.0 * d2)))
            .exp();
        assert!((sx.re - damp).abs() < 0.05, "⟨S_x⟩ = {sx} vs oracle {damp:.3}");
        assert!((sp.re - damp).abs() < 0.05, "⟨S_p⟩ = {sp} vs oracle {damp:.3}");
        // vacuum is far from the codespace
        let vac = crate::hilbert::fock_vec(0, DIM);
        let (vx, _) = c.stabilizer_expectations(&vac);
        assert!(vx.re < 0.1, "vacuum ⟨S_x⟩ = {vx}");
    }

    #[test]
    fn sbs_on_codeword_returns_ancilla_and_applies_logical_pauli() {
        let c = code();
        let cfg = FockBasisConfig::new(DIM).unwrap().with_leakage_tol(1e-6).unwrap();
        for l in [Logical::Zero, Logical::Plus] {
            let osc = c.stationary_codeword(l, DIM).unwrap();
            let state = HybridState::product(&osc, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
            let out = sbs_round(&state, &c, GkpAxis::Z, &cfg).unwrap();
            assert!(out.p_g > 0.999, "{l:?}: P_g = {}", out.p_g);
            // Z-axis SBS applies logical Z: |0⟩ → |0⟩ (phase), |+⟩ → |−⟩
            let target = match l {
                Logical::Zero => c.stationary_codeword(Logical::Zero, DIM).unwrap(),
                _ => c.stationary_codeword(Logical::Minus, DIM).unwrap(),
            };
            let fid = crate::pulses::metrics_against_targets(
                &out.state_g,
                &target,
                &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            )
            .unwrap();
            assert!(
                fid.f_postselected > 0.999,
                "{l:?}: Pauli-corrected fidelity {}",
                fid.f_postselected
            );
        }
    }

    #[test]
    fn sbs_g_branch_corrects_displacement() {
        // slope of the mean-position correction vs ε is −πΔ²/2
        let c = code();
        let cfg = FockBasisConfig::new(DIM).unwrap().with_leakage_tol(1e-6).unwrap();
        let eig = quadrature_eig(DIM);
        let mut pts = Vec::new();
        let base = c.codeword(Logical::Zero, DIM);
        for &eps in &[0.05, 0.10, 0.15] {
            let mut osc = base.clone();
            let mut scratch = vec![C64::new(0.0, 0.0); DIM];
            eig.apply_displacement(C64::new(eps, 0.0), osc.as_slice_mut().unwrap(), &mut scratch);
            let ((x_in, _), _) = quadrature_moments(&osc);
            let state = HybridState::product(&osc, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
            let out = sbs_round(&state, &c, GkpAxis::Z, &cfg).unwrap();
            let ((x_out, _), _) = quadrature_moments(&out.state_g.osc_branch(0));
            pts.push((eps, x_out - x_in));
        }
        // least-squares slope through the origin
        let num: f64 = pts.iter().map(|(e, d)| e * d).sum();
        let den: f64 = pts.iter().map(|(e, _)| e * e).sum();
        let slope = num / den;
        let expect = -std::f64::consts::PI * c.delta * c.delta / 2.0;
        assert!(
            (slope - expect).abs() < 0.15 * expect.abs(),
            "correction slope {slope:.4} vs {expect:.4}"
        );
    }

    #[test]
    fn sbs_e_branch_tightens_momentum_envelope() {
        let c = code();
        let cfg = FockBasisConfig::new(DIM).unwrap().with_leakage_tol(1e-6).unwrap();
        let eig = quadrature_eig(DIM);
        let mut osc = c.codeword(Logical::Zero, DIM);
        let mut scratch = vec![C64::new(0.0, 0.0); DIM];
        eig.apply_displacement(C64::new(0.1, 0.0), osc.as_slice_mut().unwrap(), &mut scratch);
        let (_, (_, vp_in)) = quadrature_moments(&osc);
        let state = HybridState::product(&osc, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let out = sbs_round(&state, &c, GkpAxis::Z, &cfg).unwrap();
        let se = out.state_e.expect("e branch must be populated for ε ≠ 0");
        let (_, (_, vp_out)) = quadrature_moments(&se.osc_branch(1));
        let shrink = 1.0 - (vp_out / vp_in).sqrt();
        assert!(
            (shrink - 0.15).abs() < 0.05,
            "momentum uncertainty reduction {shrink:.3} (want 0.15 ± 0.05)"
        );
    }
}
