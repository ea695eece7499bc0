//! Fock-state preparation: the depth-1/2/3 analytic circuit for `|1⟩` and
//! the Trotterized sideband ladder for arbitrary `|n⟩`.

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::error::Result;
use crate::hilbert::{fock_vec, FockBasisConfig, HybridState};
use crate::instr::{apply, apply_sequence, Instruction, PulseSequence};
use crate::CMat;

/// The three-gate circuit for `|1⟩`:
/// `CD(α₁, σy)`, `CD(iβ₁, σx)`, `CD(α₂, σy)` with
/// `α₁ = π/4`, `β₁ = 1/2`, `α₂ = (1/π)·atan(sinh(π/2))`.
pub fn fock1_sequence(depth: usize) -> PulseSequence {
    let a1 = std::f64::consts::FRAC_PI_4;
    let b1 = 0.5;
    let a2 = (std::f64::consts::FRAC_PI_2.sinh()).atan() / std::f64::consts::PI;
    let mut v = vec![Instruction::cd(C64::new(a1, 0.0), std::f64::consts::FRAC_PI_2, 0, 0)];
    if depth >= 2 {
        v.push(Instruction::cd(C64::new(0.0, b1), 0.0, 0, 0));
    }
    if depth >= 3 {
        v.push(Instruction::cd(C64::new(a2, 0.0), std::f64::consts::FRAC_PI_2, 0, 0));
    }
    PulseSequence::from_vec(v)
}

/// Run the depth-1/2/3 circuit from vacuum; returns the state and the hybrid
/// fidelity against `|1⟩` with the qubit in its protocol-determined pole.
pub fn prepare_fock1(depth: usize, dim: usize) -> Result<(HybridState, f64)> {
    let cfg = FockBasisConfig::new(dim)?;
    let mut state = HybridState::vacuum(&[dim], 1);
    let mut rng = StdRng::seed_from_u64(0);
    apply_sequence(&mut state, &fock1_sequence(depth), &cfg, &mut rng)?;
    let one = fock_vec(1, dim);
    // the ladder climbs |0, g⟩ → |1, e⟩
    let fe: C64 = one.iter().zip(state.osc_branch(1).iter()).map(|(t, s)| t.conj() * s).sum();
    let fg: C64 = one.iter().zip(state.osc_branch(0).iter()).map(|(t, s)| t.conj() * s).sum();
    Ok((state, fe.norm_sqr().max(fg.norm_sqr())))
}

/// Ideal sideband ladder unitary `exp(i 2η (x σx − p σy))` in closed form
/// (couples `|n−1, e⟩ ↔ |n, g⟩` pairs), used as the Trotter oracle.
pub fn ideal_sideband_matrix(eta: f64, dim: usize) -> CMat {
    // generator G = 2(xσx − pσy) = [[0, 2a], [2a†, 0]] in (g, e) blocks,
    // coupling |n, g⟩ ↔ |n+1, e⟩ with strength 2√(n+1)
    let n2 = 2 * dim;
    let mut u = CMat::zeros((n2, n2));
    u[(dim, dim)] = C64::new(1.0, 0.0); // |0, e⟩ has no partner
    u[(dim - 1, dim - 1)] = C64::new(1.0, 0.0); // |D−1, g⟩ partner is truncated
    for n in 0..dim - 1 {
        // basis pair: |n, g⟩ (index n), |n+1, e⟩ (index dim + n + 1)
        let g = 2.0 * ((n + 1) as f64).sqrt();
        let (c, s) = ((eta * g).cos(), (eta * g).sin());
        u[(n, n)] = C64::new(c, 0.0);
        u[(dim + n + 1, dim + n + 1)] = C64::new(c, 0.0);
        u[(n, dim + n + 1)] = C64::new(0.0, s);
        u[(dim + n + 1, n)] = C64::new(0.0, s);
    }
    u
}

/// One Trotterized ladder rung `(e^{i 2η x σx / N} e^{−i 2η p σy / N})^N`
/// as instructions (η sets the rung's rotation `2η√(n+1)`).
pub fn sideband_rung(eta: f64, steps: usize) -> PulseSequence {
    let mut seq = PulseSequence::new();
    let e = eta / steps as f64;
    for _ in 0..steps {
        // e^{i 2e x σx} = CD(ie, σx); e^{−i 2e p σy} = CD(e, σy)
        seq.push(Instruction::cd(C64::new(0.0, e), 0.0, 0, 0));
        seq.push(Instruction::cd(C64::new(e, 0.0), std::f64::consts::FRAC_PI_2, 0, 0));
    }
    seq
}

/// Climb to `|n_target⟩` with Trotterized sideband rungs
/// (`η_n = π/(4√(n+1))`) and qubit flips between rungs. Returns the final
/// state and fidelity against `|n_target⟩` (qubit pole determined by the
/// rung count).
pub fn law_eberly_fock(
    n_target: usize,
    trotter_steps: usize,
    dim: usize,
) -> Result<(HybridState, f64)> {
    let cfg = FockBasisConfig::new(dim)?;
    let mut state = HybridState::vacuum(&[dim], 1);
    let mut rng = StdRng::seed_from_u64(0);
    for n in 0..n_target {
        let eta = std::f64::consts::PI / (4.0 * ((n + 1) as f64).sqrt());
        apply_sequence(&mut state, &sideband_rung(eta, trotter_steps), &cfg, &mut rng)?;
        // flip e → g before the next rung
        if n + 1 < n_target {
            apply(
                &mut state,
                &Instruction::QubitRotation { phi: 0.0, theta: std::f64::consts::PI, qubit: 0 },
                &cfg,
                &mut rng,
            )?;
        }
    }
    let target = fock_vec(n_target, dim);
    let fe: C64 = target.iter().zip(state.osc_branch(1).iter()).map(|(t, s)| t.conj() * s).sum();
    let fg: C64 = target.iter().zip(state.osc_branch(0).iter()).map(|(t, s)| t.conj() * s).sum();
    Ok((state, fe.norm_sqr().max(fg.norm_sqr())))
}
