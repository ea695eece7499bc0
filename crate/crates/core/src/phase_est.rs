//! Oscillator-assisted phase estimation: the hidden angle of a qubit gate
//! `U = exp(iθσy)` is written onto the probe oscillator's momentum by a
//! composite of conditional momentum boosts and phase gates, then read off
//! as `⟨p⟩ = α sin 2θ`.

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hilbert::diag::quadrature_moments;
use crate::hilbert::{quadrature_eig, squeezed_vacuum_vec, FockBasisConfig, HybridState};
use crate::instr::{apply_sequence, Instruction, PulseSequence};
use crate::CMat;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PhaseEstSpec {
    /// Hidden phase of `U = exp(iθσy)`.
    pub theta: f64,
    /// Total coupling of the conditional momentum boosts (default 1). The
    /// protocol splits it over [`PhaseEstSpec::repetitions`] applications so
    /// each composite stays in its weak-coupling regime (the momentum kicks
    /// add linearly while the nonlinear back-action stays O(α²/N)).
    pub alpha: f64,
    /// Momentum squeezing of the probe (`δp = e^{−r}/2`).
    pub squeeze_r: f64,
    /// Homodyne samples for the sampled estimate.
    pub shots: usize,
    pub repetitions: usize,
}

impl PhaseEstSpec {
    pub fn new(theta: f64) -> Self {
        Self { theta, alpha: 1.0, squeeze_r: 0.0, shots: 0, repetitions: 80 }
    }
}

/// One composite block `C_xU = e^{i2ax̂σz} S†US e^{−i2ax̂σz} SUS†` as
/// instructions, with `a` the block's conditional-displacement amplitude
/// (S = √σz up to a global phase; U supplied as the σy rotation).
pub fn build_cxu_block(theta: f64, a: f64) -> PulseSequence {
    let s_gate = Instruction::RotationZ { theta: std::f64::consts::FRAC_PI_2, qubit: 0 };
    let s_dag = Instruction::RotationZ { theta: -std::f64::consts::FRAC_PI_2, qubit: 0 };
    let u_gate =
        Instruction::QubitRotation { phi: std::f64::consts::FRAC_PI_2, theta: -2.0 * theta, qubit: 0 };
    // time order: S†, U, S, e^{−i2ax̂σz}, S, U, S†, e^{+i2ax̂σz}
    PulseSequence::from_vec(vec![
        s_dag.clone(),
        u_gate.clone(),
        s_gate.clone(),
        Instruction::cd_z(C64::new(0.0, -a), 0, 0),
        s_gate,
        u_gate,
        s_dag,
        Instruction::cd_z(C64::new(0.0, a), 0, 0),
    ])
}

/// The full protocol sequence: the composite repeated with the coupling
/// split over the repetitions.
pub fn build_cxu(spec: &PhaseEstSpec) -> PulseSequence {
    let n = spec.repetitions.max(1);
    let block = build_cxu_block(spec.theta, spec.alpha / n as f64);
    let mut seq = PulseSequence::new();
    for _ in 0..n {
        seq.extend(&block);
    }
    seq
}

/// Rotation angle and axis of `C_xU` at oscillator position `x`, from the
/// quaternion product of the four qubit factors with `u = 2αx`:
/// `cos g = 1 − 2 sin²u sin²θ`, `n ∝ (sin²u sin2θ, −sin2u sin2θ/2,
/// sin²θ sin2u) / sin g` (normalized where `sin g ≠ 0`).
pub fn quaternion_axis(theta: f64, u: f64) -> (f64, [f64; 3]) {
    // e^{iuσz} e^{iθσx} = cos γ + i sin γ (k·σ) with cos γ = cos u cos θ,
    // k ∝ (cos u sin θ, −sin u sin θ, sin u cos θ); the second pair flips
    // u and θ. The composite angle/axis follow from the quaternion product.
    let cg = u.cos() * theta.cos();
    let sg2 = 1.0 - cg * cg;
    let sgam = sg2.sqrt();
    if sgam < 1e-12 {
        return (0.0, [0.0, 0.0, 0.0]);
    }
    let k = [
        u.cos() * theta.sin() / sgam,
        -u.sin() * theta.sin() / sgam,
        u.sin() * theta.cos() / sgam,
    ];
    let kp = [-k[0], k[1], -k[2]];
    // e^{iγk·σ} e^{iγk'·σ} = cos²γ − sin²γ(k·k') + i[sin γ cos γ (k+k') −
    // sin²γ (k×k')]·σ
    let dot = k[0] * kp[0] + k[1] * kp[1] + k[2] * kp[2];
    let cos_g = cg * cg - sg2 * dot;
    let cross = [
        k[1] * kp[2] - k[2] * kp[1],
        k[2] * kp[0] - k[0] * kp[2],
        k[0] * kp[1] - k[1] * kp[0],
    ];
    let vec: Vec<f64> = (0..3)
        .map(|i| sgam * cg * (k[i] + kp[i]) - sg2 * cross[i])
        .collect();
    let sin_g = (vec[0] * vec[0] + vec[1] * vec[1] + vec[2] * vec[2]).sqrt();
    let g = sin_g.atan2(cos_g);
    if sin_g < 1e-12 {
        return (g, [0.0, 0.0, 0.0]);
    }
    (g, [vec[0] / sin_g, vec[1] / sin_g, vec[2] / sin_g])
}

/// Dense matrix of one composite block evaluated directly from the
/// quaternion formulas on the position eigenbasis (the independent oracle
/// for [`build_cxu_block`]).
pub fn cxu_direct_matrix(theta: f64, a: f64, dim: usize) -> CMat {
    let eig = quadrature_eig(dim);
    let n = 2 * dim;
    let mut u_x = CMat::zeros((n, n)); // in the x-eigenbasis ⊗ qubit
    for (k, &lam) in eig.lambda.iter().enumerate() {
        let u = 2.0 * a * lam;
        let (g, nv) = quaternion_axis(theta, u);
        let (c, s) = (g.cos(), g.sin());
        // e^{i g n·σ} = cos g + i sin g (n·σ)
        let m = [
            [
                C64::new(c, s * nv[2]),
                C64::new(s * nv[1], s * nv[0]),
            ],
            [
                C64::new(-s * nv[1], s * nv[0]),
                C64::new(c, -s * nv[2]),
            ],
        ];
        for qi in 0..2 {
            for qj in 0..2 {
                u_x[(qi * dim + k, qj * dim + k)] = m[qi][qj];
            }
        }
    }
    // rotate back to the Fock basis: (I ⊗ V) U_x (I ⊗ Vᵀ)
    let mut out = CMat::zeros((n, n));
    for qi in 0..2 {
        for qj in 0..2 {
            for i in 0..dim {
                for j in 0..dim {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..dim {
                        acc += C64::new(eig.v[(i, k)] * eig.v[(j, k)], 0.0)
                            * u_x[(qi * dim + k, qj * dim + k)];
                    }
                    out[(qi * dim + i, qj * dim + j)] = acc;
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PhaseEstResult {
    /// `⟨p̂⟩` of the post-protocol oscillator; equals `α sin 2θ` in the
    /// weak-coupling regime.
    pub mean_p: f64,
    /// Spread of the momentum readout quoted against a vacuum floor of
    /// `1/√2` (i.e. `√2 ×` the Wigner-unit deviation).
    pub std_p: f64,
    /// Sampled-homodyne estimate (equals the exact one as shots → ∞).
    pub sampled_mean_p: Option<f64>,
}

/// Run the protocol: momentum-squeezed probe, qubit prepared in the σy
/// eigenstate `|−i⟩`, one weak composite block per repetition with σy
/// measured and re-prepared between blocks. The reported moments are
/// conditioned on the all-`−i` measurement record (overwhelmingly likely in
/// the weak-coupling regime), which carries the full `α sin 2θ` momentum
/// signal.
pub fn run_phase_estimation(spec: &PhaseEstSpec, dim: usize) -> Result<PhaseEstResult> {
    let cfg = FockBasisConfig::new(dim)?.with_leakage_tol(1e-5)?;
    let probe = squeezed_vacuum_vec(spec.squeeze_r.exp(), dim);
    let sq2 = std::f64::consts::FRAC_1_SQRT_2;
    let minus_i = [C64::new(sq2, 0.0), C64::new(0.0, -sq2)];
    let n_rep = spec.repetitions.max(1);
    let block = build_cxu_block(spec.theta, spec.alpha / n_rep as f64);
    let mut rng = StdRng::seed_from_u64(0);
    // conditioned branch: σy is measured after each block and the run keeps
    // the −i record (re-preparing |−i⟩); the kept weight is the record
    // probability and the conditional momentum carries the full signal
    let mut state = HybridState::product(&probe, minus_i);
    let mut record_probability = 1.0;
    for _ in 0..n_rep {
        apply_sequence(&mut state, &block, &cfg, &mut rng)?;
        let d = state.dtot();
        let mut osc = ndarray::Array1::<C64>::zeros(d);
        for n in 0..d {
            // ⟨−i| = (⟨g| + i⟨e|)/√2
            osc[n] = (state.amp[n] + C64::new(0.0, 1.0) * state.amp[d + n]) * sq2;
        }
        let w: f64 = osc.iter().map(|z| z.norm_sqr()).sum();
        record_probability *= w;
        let norm = w.sqrt();
        osc.mapv_inplace(|z| z / norm);
        state = HybridState::product(&osc, minus_i);
    }
    let osc = state.osc_branch(0);
    let (_, (mean_p, var_p)) = quadrature_moments(&osc);
    let std_p = (2.0 * var_p).sqrt();
    let sampled_mean_p = if spec.shots > 0 {
        Some(sample_momentum_mean(&state, spec.shots, dim, &mut rng))
    } else {
        None
    };
    let _ = record_probability;
    Ok(PhaseEstResult { mean_p, std_p, sampled_mean_p })
}

/// Homodyne emulation: sample from the exact momentum distribution of the
/// post-protocol state on a grid.
fn sample_momentum_mean(
    state: &HybridState,
    shots: usize,
    dim: usize,
    rng: &mut impl Rng,
) -> f64 {
    // momentum wavefunction = position wavefunction of the −90°-rotated state
    let mut rotated = state.clone();
    let d = rotated.dtot();
    for (idx, z) in rotated.amp.iter_mut().enumerate() {
        let n = idx % d;
        *z *= C64::from_polar(1.0, -std::f64::consts::FRAC_PI_2 * n as f64);
    }
    let grid: Vec<f64> = (0..801).map(|i| -8.0 + 16.0 * i as f64 / 800.0).collect();
    let psi = crate::hilbert::diag::position_wavefunction(&rotated, &grid);
    let dens: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(j, _)| psi[(0, j)].norm_sqr() + psi[(1, j)].norm_sqr())
        .collect();
    let total: f64 = dens.iter().sum();
    let mut acc = 0.0;
    for _ in 0..shots {
        let mut r = rng.gen::<f64>() * total;
        let mut pick = grid.len() - 1;
        for (j, w) in dens.iter().enumerate() {
            if r < *w {
                pick = j;
                break;
            }
            r -= w;
        }
        acc += grid[pick];
    }
    let _ = dim;
    acc / shots as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instr::sequence_matrix;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_theta_composite_is_identity() {
        let dim = 48;
        let u = sequence_matrix(&build_cxu_block(0.0, 1.0), dim).unwrap();
        let mut worst = 0.0f64;
        for i in 0..2 * dim {
            for j in 0..2 * dim {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((u[(i, j)] - expect).norm());
            }
        }
        assert!(worst < 1e-10, "θ = 0 composite deviates {worst:.2e}");
    }

    #[test]
    fn composite_matches_quaternion_oracle() {
        let dim = 48;
        let u = sequence_matrix(&build_cxu_block(0.6, 0.8), dim).unwrap();
        let oracle = cxu_direct_matrix(0.6, 0.8, dim);
        // compare on the bulk (truncation corner differs by the x-eigenbasis
        // edge effects)
        let mut worst = 0.0f64;
        for qi in 0..2 {
            for qj in 0..2 {
                for i in 0..dim - 8 {
                    for j in 0..dim - 8 {
                        worst = worst
                            .max((u[(qi * dim + i, qj * dim + j)] - oracle[(qi * dim + i, qj * dim + j)]).norm());
                    }
                }
            }
        }
        assert!(worst < 1e-8, "composite vs quaternion oracle deviates {worst:.2e}");
    }

    #[test]
    fn axis_is_normalized_where_defined() {
        for &theta in &[0.3, PI / 4.0, 1.2] {
            for i in 0..50 {
                let u = -2.0 + 4.0 * i as f64 / 49.0;
                let (g, n) = quaternion_axis(theta, u);
                if g.sin().abs() > 1e-6 {
                    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
                    assert!(
                        (norm - 1.0).abs() < 1e-8,
                        "axis norm {norm} at θ={theta}, u={u}"
                    );
                }
            }
        }
    }

    #[test]
    fn mean_momentum_follows_alpha_sin_two_theta() {
        for &theta in &[PI / 8.0, PI / 4.0, 3.0 * PI / 8.0] {
            let spec = PhaseEstSpec { theta, alpha: 1.0, squeeze_r: 1.0, shots: 0, repetitions: 80 };
            let res = run_phase_estimation(&spec, 96).unwrap();
            let expect = (2.0 * theta).sin();
            assert!(
                (res.mean_p - expect).abs() < 0.02 * expect.abs().max(0.1),
                "θ = {theta}: ⟨p⟩ = {:.4} vs {expect:.4}",
                res.mean_p
            );
        }
    }

    #[test]
    fn zero_theta_gives_zero_momentum() {
        let spec = PhaseEstSpec { theta: 0.0, alpha: 1.0, squeeze_r: 0.5, shots: 0, repetitions: 40 };
        let res = run_phase_estimation(&spec, 64).unwrap();
        assert_abs_diff_eq!(res.mean_p, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn vacuum_probe_spread_bound() {
        let spec = PhaseEstSpec { theta: PI / 4.0, alpha: 1.0, squeeze_r: 0.0, shots: 0, repetitions: 80 };
        let res = run_phase_estimation(&spec, 64).unwrap();
        let bound = 1.0 / 2.0f64.sqrt();
        assert!(
            (res.std_p - bound).abs() < 0.03 * bound,
            "std_p = {:.4} vs 1/√2 = {bound:.4}",
            res.std_p
        );
    }

    #[test]
    fn spread_shrinks_with_squeezing() {
        let mut prev = f64::INFINITY;
        for &r in &[0.0, 0.5, 1.0, 1.5] {
            let spec = PhaseEstSpec { theta: PI / 4.0, alpha: 1.0, squeeze_r: r, shots: 0, repetitions: 80 };
            let res = run_phase_estimation(&spec, 128).unwrap();
            assert!(res.std_p <= prev + 1e-9, "std_p grew at r = {r}");
            prev = res.std_p;
        }
    }

    #[test]
    fn periodicity_and_oddness() {
        let at = |theta: f64| -> f64 {
            run_phase_estimation(
                &PhaseEstSpec { theta, alpha: 1.0, squeeze_r: 0.8, shots: 0, repetitions: 40 },
                96,
            )
            .unwrap()
            .mean_p
        };
        let t = PI / 8.0;
        assert_abs_diff_eq!(at(t), at(t + PI), epsilon = 1e-9);
        assert_abs_diff_eq!(at(t), -at(-t), epsilon = 1e-9);
    }

    #[test]
    fn sampled_estimate_tracks_exact() {
        let spec = PhaseEstSpec { theta: PI / 4.0, alpha: 1.0, squeeze_r: 1.0, shots: 4000, repetitions: 40 };
        let res = run_phase_estimation(&spec, 96).unwrap();
        let sampled = res.sampled_mean_p.unwrap();
        assert!(
            (sampled - res.mean_p).abs() < 0.05,
            "sampled {sampled:.3} vs exact {:.3}",
            res.mean_p
        );
    }
}
