//! Incremental squeezing of vacuum by repeated application of a two-gate
//! gadget: a small conditional displacement widens one quadrature (a small
//! even cat ≈ a slightly squeezed state) and a conditional rotation
//! re-disentangles the qubit.

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::diag::{conditional_bloch, quadrature_moments};
use crate::hilbert::{FockBasisConfig, HybridState};
use crate::instr::{apply, duration, DurationModel, Instruction, PulseSequence};

/// Which quadrature ends up squeezed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SqueezeDirection {
    /// `δp` shrinks, position-Gaussian widens (the native description).
    Momentum,
    /// `δx` shrinks (the mirror protocol, gates swapped x ↔ p).
    Position,
}

/// Amplitude schedule `|α|_{k+1} = a · w_k^c` where `w_k ≥ 1` is the current
/// width parameter of the widened quadrature.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SqueezeSchedule {
    pub a: f64,
    pub c: f64,
    /// First-step amplitude (the width starts at 1, so the rule alone would
    /// freeze a `c = 2` schedule at small α).
    pub alpha0: f64,
    /// Fit the conditional-polarization slope over the FWHM instead of the
    /// analytic `4α/w²` when the linear approximation saturates.
    pub accelerated_fit: bool,
    pub target_db: f64,
    pub direction: SqueezeDirection,
    pub max_steps: usize,
}

impl SqueezeSchedule {
    /// Standard schedule: `|α|_{k+1} = 0.12 w²` with slope fitting, reaching
    /// 8.5 dB at ~1e−3 infidelity within ~6.5 µs of displacement amplitude.
    pub fn baseline(target_db: f64) -> Self {
        Self {
            a: 0.12,
            c: 2.0,
            alpha0: 0.13,
            accelerated_fit: true,
            target_db,
            direction: SqueezeDirection::Momentum,
            max_steps: 400,
        }
    }

    /// Faster variant trading fidelity for duration (11.2 dB within ~8 µs).
    pub fn accelerated(target_db: f64) -> Self {
        Self {
            a: 0.15,
            c: 2.0,
            alpha0: 0.15,
            accelerated_fit: true,
            target_db,
            direction: SqueezeDirection::Momentum,
            max_steps: 400,
        }
    }
}

/// Outcome of a squeezing run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SqueezeReport {
    /// Squeezing of the target quadrature in dB (`−10 log₁₀ 4·Var`).
    pub db_squeezed: f64,
    /// Anti-squeezing of the conjugate quadrature in dB (negative).
    pub db_anti: f64,
    /// Fisher information `1/Var` of the squeezed quadrature.
    pub fisher: f64,
    /// `1 − |⟨ideal(Δ_fit) ⊗ g | ψ⟩|²` against the variance-fitted ideal
    /// squeezed vacuum.
    pub infidelity: f64,
    /// Total conditional-displacement amplitude in µs-equivalent.
    pub duration_us: f64,
    pub steps: usize,
    /// Width parameter of the widened quadrature (`w = 2δq_wide`).
    pub final_width: f64,
}

fn db_of_variance(var: f64) -> f64 {
    -10.0 * (4.0 * var).log10()
}

/// Widths `(w_wide, var_squeezed, var_wide)` of the oscillator state seen by
/// the gadget: the widened quadrature is position for momentum squeezing.
fn widths(state: &HybridState, dir: SqueezeDirection) -> (f64, f64, f64) {
    let osc = {
        // qubit is (nearly) in |g⟩ between gadgets; use the g branch
        let g = state.osc_branch(0);
        let e = state.osc_branch(1);
        let wg: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        let we: f64 = e.iter().map(|z| z.norm_sqr()).sum();
        if wg >= we {
            g
        } else {
            e
        }
    };
    let ((_, vx), (_, vp)) = quadrature_moments(&osc);
    match dir {
        SqueezeDirection::Momentum => ((4.0 * vx).sqrt(), vp, vx),
        SqueezeDirection::Position => ((4.0 * vp).sqrt(), vx, vp),
    }
}

/// One squeezing gadget: widen the chosen quadrature by a conditional
/// displacement of amplitude `alpha`, then re-disentangle the qubit with a
/// conditional rotation whose slope is `corr_slope` (the analytic choice is
/// `4α/w²`). Returns the two instructions.
pub fn gadget_instructions(
    alpha: f64,
    corr_amplitude: f64,
    dir: SqueezeDirection,
) -> [Instruction; 2] {
    match dir {
        SqueezeDirection::Momentum => [
            // split along x, disentangle with an x̂-conditioned σy rotation
            Instruction::cd(C64::new(alpha, 0.0), 0.0, 0, 0),
            Instruction::cd(C64::new(0.0, corr_amplitude), std::f64::consts::FRAC_PI_2, 0, 0),
        ],
        SqueezeDirection::Position => [
            // split along p, disentangle with a p̂-conditioned σy rotation
            Instruction::cd(C64::new(0.0, alpha), 0.0, 0, 0),
            Instruction::cd(C64::new(-corr_amplitude, 0.0), std::f64::consts::FRAC_PI_2, 0, 0),
        ],
    }
}

/// Apply one gadget with the analytic correction `4α/w²` and return the
/// fitted width parameter of the widened quadrature afterwards.
pub fn squeezing_gadget(
    state: &mut HybridState,
    alpha: f64,
    cfg: &FockBasisConfig,
    dir: SqueezeDirection,
) -> Result<f64> {
    let (w, _, _) = widths(state, dir);
    let corr = alpha / (w * w);
    let mut rng = StdRng::seed_from_u64(0);
    for inst in gadget_instructions(alpha, corr, dir) {
        apply(state, &inst, cfg, &mut rng)?;
    }
    let (w2, _, _) = widths(state, dir);
    Ok(w2)
}

/// Least-squares slope of the conditional `⟨σx⟩(q)` profile over the FWHM of
/// the density, weighted by the density.
fn fitted_polarization_slope(state: &HybridState, dir: SqueezeDirection, w: f64) -> f64 {
    // sample the split quadrature: position for momentum squeezing; for the
    // mirror protocol rotate the state by 90° (diagonal in Fock space)
    let probe = match dir {
        SqueezeDirection::Momentum => state.clone(),
        SqueezeDirection::Position => {
            // rotate by −90° so the position axis of the probe reads the
            // original momentum (e^{−iπ/2 n̂} conjugates x̂ to +p̂)
            let mut s = state.clone();
            let d = s.dtot();
            for (idx, z) in s.amp.iter_mut().enumerate() {
                let n = idx % d;
                *z *= C64::from_polar(1.0, -std::f64::consts::FRAC_PI_2 * n as f64);
            }
            s
        }
    };
    let half = w * (2.0f64.ln()).sqrt() / 2.0; // FWHM/2 of exp(−2q²/w²)
    let grid: Vec<f64> = (0..41).map(|i| -half + 2.0 * half * i as f64 / 40.0).collect();
    let rows = conditional_bloch(&probe, &grid);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (q, row) in grid.iter().zip(rows.iter()) {
        let weight = row[3];
        sxy += weight * q * row[0];
        sxx += weight * q * q;
    }
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Apply one gadget, using the fitted polarization slope for the
/// correction when the schedule asks for it.
fn apply_gadget_fitted(
    state: &mut HybridState,
    alpha: f64,
    w: f64,
    schedule: &SqueezeSchedule,
    cfg: &FockBasisConfig,
    rng: &mut StdRng,
    mut seq: Option<&mut PulseSequence>,
) -> Result<()> {
    if schedule.accelerated_fit {
        let split = gadget_instructions(alpha, 0.0, schedule.direction)[0].clone();
        apply(state, &split, cfg, rng)?;
        if let Some(seq) = seq.as_deref_mut() {
            seq.push(split);
        }
        let slope = fitted_polarization_slope(state, schedule.direction, w);
        let corr_inst = match schedule.direction {
            SqueezeDirection::Momentum => {
                Instruction::cd(C64::new(0.0, slope / 4.0), std::f64::consts::FRAC_PI_2, 0, 0)
            }
            SqueezeDirection::Position => {
                Instruction::cd(C64::new(-slope / 4.0, 0.0), std::f64::consts::FRAC_PI_2, 0, 0)
            }
        };
        apply(state, &corr_inst, cfg, rng)?;
        if let Some(seq) = seq.as_deref_mut() {
            seq.push(corr_inst);
        }
    } else {
        for inst in gadget_instructions(alpha, alpha / (w * w), schedule.direction) {
            apply(state, &inst, cfg, rng)?;
            if let Some(seq) = seq.as_deref_mut() {
                seq.push(inst.clone());
            }
        }
    }
    Ok(())
}

/// Run a schedule to its target squeezing.
pub fn run_squeezing(
    schedule: &SqueezeSchedule,
    dim: usize,
) -> Result<(HybridState, SqueezeReport)> {
    let cfg = FockBasisConfig::new(dim)?.with_leakage_tol(1e-7)?;
    let mut state = HybridState::vacuum(&[dim], 1);
    let mut seq = PulseSequence::new();
    let mut steps = 0usize;
    loop {
        let (w, var_sq, var_wide) = widths(&state, schedule.direction);
        let db = db_of_variance(var_sq);
        if db >= schedule.target_db {
            let fisher = 1.0 / var_sq;
            let delta_fit = (4.0 * var_wide).sqrt();
            // fidelity against the ideal squeezed vacuum of the fitted width
            let ideal = match schedule.direction {
                SqueezeDirection::Momentum => {
                    crate::hilbert::squeezed_vacuum_vec(delta_fit, dim)
                }
                SqueezeDirection::Position => {
                    crate::hilbert::squeezed_vacuum_vec(1.0 / delta_fit, dim)
                }
            };
            let m = crate::pulses::metrics_against_targets(
                &state,
                &ideal,
                &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            )?;
            let report = SqueezeReport {
                db_squeezed: db,
                db_anti: db_of_variance(var_wide),
                fisher,
                infidelity: 1.0 - m.f_hybrid,
                duration_us: duration(&seq, &DurationModel::amplitude_only()),
                steps,
                final_width: w,
            };
            return Ok((state, report));
        }
        if steps >= schedule.max_steps {
            return Err(Error::NoConvergence(format!(
                "squeezing stalled at {db:.2} dB after {steps} steps"
            )));
        }
        let mut alpha = if steps == 0 { schedule.alpha0 } else { schedule.a * w.powf(schedule.c) };
        // trim the final step so the target is not overshot by more than a
        // fraction of a dB (a full step near the end can jump past it)
        for _ in 0..6 {
            let mut probe = state.clone();
            let mut probe_rng = StdRng::seed_from_u64(0);
            apply_gadget_fitted(&mut probe, alpha, w, schedule, &cfg, &mut probe_rng, None)?;
            let (_, v_sq, _) = widths(&probe, schedule.direction);
            if db_of_variance(v_sq) <= schedule.target_db + 0.25 {
                break;
            }
            alpha /= 2.0;
        }
        let mut rng = StdRng::seed_from_u64(0);
        apply_gadget_fitted(&mut state, alpha, w, schedule, &cfg, &mut rng, Some(&mut seq))?;
        // the gadget must leave the qubit near a pole
        let (_, _, sz) = state.qubit_bloch(0)?;
        if sz.abs() < 0.9 {
            return Err(Error::EntanglementResidual(sz.abs(), 0.9));
        }
        steps += 1;
    }
}

/// The squeezing stage as a bare instruction list (analytic corrections,
/// fixed width-trajectory computed on a noiseless reference state). Used by
/// the noisy GKP-preparation experiment where the same gates are replayed
/// under noise.
pub fn squeezing_instructions(
    schedule: &SqueezeSchedule,
    dim: usize,
) -> Result<PulseSequence> {
    let cfg = FockBasisConfig::new(dim)?.with_leakage_tol(1e-7)?;
    let mut state = HybridState::vacuum(&[dim], 1);
    let mut seq = PulseSequence::new();
    let mut steps = 0usize;
    loop {
        let (w, var_sq, _) = widths(&state, schedule.direction);
        if db_of_variance(var_sq) >= schedule.target_db {
            return Ok(seq);
        }
        if steps >= schedule.max_steps {
            return Err(Error::NoConvergence("squeezing instruction build stalled".into()));
        }
        let mut alpha = if steps == 0 { schedule.alpha0 } else { schedule.a * w.powf(schedule.c) };
        for _ in 0..6 {
            let mut probe = state.clone();
            let mut probe_rng = StdRng::seed_from_u64(0);
            apply_gadget_fitted(&mut probe, alpha, w, schedule, &cfg, &mut probe_rng, None)?;
            let (_, v_sq, _) = widths(&probe, schedule.direction);
            if db_of_variance(v_sq) <= schedule.target_db + 0.25 {
                break;
            }
            alpha /= 2.0;
        }
        let mut rng = StdRng::seed_from_u64(0);
        apply_gadget_fitted(&mut state, alpha, w, schedule, &cfg, &mut rng, Some(&mut seq))?;
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_amplitude_gadget_is_identity() {
        let cfg = FockBasisConfig::new(32).unwrap();
        let mut s = HybridState::vacuum(&[32], 1);
        let before = s.amp.clone();
        squeezing_gadget(&mut s, 0.0, &cfg, SqueezeDirection::Momentum).unwrap();
        assert!(s.amp.iter().zip(before.iter()).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn single_gadget_widens_and_disentangles() {
        let cfg = FockBasisConfig::new(64).unwrap();
        let mut s = HybridState::vacuum(&[64], 1);
        let w = squeezing_gadget(&mut s, 0.25, &cfg, SqueezeDirection::Momentum).unwrap();
        assert!(w > 1.0, "width should grow, got {w}");
        let (_, _, sz) = s.qubit_bloch(0).unwrap();
        assert!(sz > 0.99, "qubit should stay near |g⟩, ⟨σz⟩ = {sz}");
    }

    #[test]
    fn conditional_polarization_profile_matches_tanh_sech() {
        // after CD(α, σx) on vacuum: ⟨σx⟩_x = tanh(4αx), ⟨σz⟩_x = sech(4αx)
        let cfg = FockBasisConfig::new(64).unwrap();
        let mut s = HybridState::vacuum(&[64], 1);
        let alpha = 0.25;
        let mut rng = StdRng::seed_from_u64(0);
        apply(&mut s, &Instruction::cd(C64::new(alpha, 0.0), 0.0, 0, 0), &cfg, &mut rng).unwrap();
        let grid: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
        let rows = conditional_bloch(&s, &grid);
        for (x, row) in grid.iter().zip(rows.iter()) {
            let arg = 4.0 * alpha * x;
            assert_abs_diff_eq!(row[0], arg.tanh(), epsilon = 1e-6);
            assert_abs_diff_eq!(row[2], 1.0 / arg.cosh(), epsilon = 1e-6);
            assert!(row[1].abs() < 1e-8);
        }
    }

    #[test]
    fn post_gadget_polarization_matches_tanh_cos_minus_sech_sin() {
        // after the corrective rotation: ⟨σx⟩ = tanh u cos u' − sech u sin u'
        // with u = 4αx/Δ², u' = 4α'x/Δ² and α' = α for the analytic choice
        let cfg = FockBasisConfig::new(64).unwrap();
        let mut s = HybridState::vacuum(&[64], 1);
        let alpha = 0.25;
        let mut rng = StdRng::seed_from_u64(0);
        for inst in gadget_instructions(alpha, alpha, SqueezeDirection::Momentum) {
            apply(&mut s, &inst, &cfg, &mut rng).unwrap();
        }
        let grid: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
        let rows = conditional_bloch(&s, &grid);
        for (x, row) in grid.iter().zip(rows.iter()) {
            let u = 4.0 * alpha * x;
            let expect = u.tanh() * u.cos() - u.sin() / u.cosh();
            assert_abs_diff_eq!(row[0], expect, epsilon = 1e-6);
        }
    }

    #[test]
    fn zero_step_report() {
        let mut sched = SqueezeSchedule::baseline(0.0);
        sched.target_db = -1.0; // already satisfied by vacuum
        let (_, report) = run_squeezing(&sched, 48).unwrap();
        assert_eq!(report.steps, 0);
        assert_abs_diff_eq!(report.db_squeezed, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(report.fisher, 4.0, epsilon = 1e-9);
    }

    #[test]
    fn width_grows_monotonically() {
        let cfg = FockBasisConfig::new(96).unwrap();
        let mut s = HybridState::vacuum(&[96], 1);
        let mut prev = 1.0f64;
        for _ in 0..10 {
            let w = squeezing_gadget(&mut s, 0.13 * prev.sqrt(), &cfg, SqueezeDirection::Momentum)
                .unwrap();
            assert!(w >= prev - 1e-9, "width decreased: {w} < {prev}");
            prev = w;
        }
    }

    #[test]
    fn position_direction_mirrors() {
        let cfg = FockBasisConfig::new(64).unwrap();
        let mut s = HybridState::vacuum(&[64], 1);
        squeezing_gadget(&mut s, 0.25, &cfg, SqueezeDirection::Position).unwrap();
        let ((_, vx), (_, vp)) = quadrature_moments(&s.osc_branch(0));
        assert!(vp > 0.25 && vx < 0.25, "vx={vx}, vp={vp}");
        let (_, _, sz) = s.qubit_bloch(0).unwrap();
        assert!(sz > 0.99);
    }
}
