//! Deterministic GKP codeword preparation: a squeezed input is split into a
//! binomial-weighted comb by repeated cat-splitting circuits, each followed
//! by an unentangling rotation, with an optional stabilization round at the
//! end.

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gkp::{sbs_round, GkpAxis, GkpCode};
use crate::hilbert::{displaced_squeezed_vec, squeezed_vacuum_vec, FockBasisConfig, HybridState};
use crate::instr::{apply_sequence, Instruction, PulseSequence};
use crate::pulses::metrics_against_targets;
use crate::CVec;

/// Plan for the stepwise preparation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GkpPrepPlan {
    pub delta: f64,
    /// `√(2π)` for the square code.
    pub lattice_spacing: f64,
    /// Number of splitting circuits; `None` uses [`optimal_step_count`].
    pub n_steps: Option<usize>,
    /// Append one small-big-small stabilization round.
    pub append_sbs: bool,
}

impl GkpPrepPlan {
    pub fn square(delta: f64) -> Self {
        Self {
            delta,
            lattice_spacing: (2.0 * std::f64::consts::PI).sqrt(),
            n_steps: None,
            append_sbs: true,
        }
    }

    pub fn steps(&self) -> usize {
        self.n_steps.unwrap_or_else(|| optimal_step_count(self.delta))
    }
}

/// Number of splitting steps whose binomial comb best matches the Gaussian
/// envelope: `N + 1` peaks with `(N + 1)Δ² ≈ 0.32`.
pub fn optimal_step_count(delta: f64) -> usize {
    let peaks = (0.32 / (delta * delta)).round() as usize;
    peaks.saturating_sub(1).max(1)
}

/// Metrics recorded after each splitting circuit.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GkpStepMetrics {
    pub step: usize,
    /// `⟨S_{x,Δ}⟩` real part.
    pub stab_x: f64,
    /// `⟨S_{p,Δ}⟩` real part.
    pub stab_p: f64,
    /// Ancilla `⟨σz⟩` (unentanglement quality).
    pub sigma_z: f64,
    /// Probability of the ancilla in `|g⟩`.
    pub p_g: f64,
    /// Hybrid fidelity against the binomial-envelope target at this depth.
    pub f_hybrid: f64,
    /// Fidelity of the renormalized success branch against the same target.
    pub f_postselected: f64,
    /// Per-gate amplitude of the unentangling rotation used.
    pub unentangle_amplitude: f64,
}

/// Binomial-envelope target after `n` splits: peaks at `(2j − n)·h`,
/// amplitudes `√(C(n, j))`, width Δ. Normalized.
pub fn binomial_target(n: usize, h: f64, delta: f64, dim: usize) -> CVec {
    let mut v: CVec = ndarray::Array1::zeros(dim);
    let mut coeff = 1.0f64; // C(n, 0)
    for j in 0..=n {
        let x = (2.0 * j as f64 - n as f64) * h;
        let peak = displaced_squeezed_vec(C64::new(x, 0.0), delta, dim);
        v = &v + &peak.mapv(|z| z * coeff.sqrt());
        coeff *= (n - j) as f64 / (j + 1) as f64;
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.mapv(|z| z / norm)
}

/// Analytic unentangling amplitude for step `k` (CD amplitude of the big
/// σy rotation): exact for the extreme peaks, `π/(8kh)`.
pub fn unentangle_amplitude(k: usize, h: f64) -> f64 {
    std::f64::consts::PI / (8.0 * k as f64 * h)
}

/// The splitting circuit `C_k`: a big σx-conditioned displacement by `±h`
/// followed by the unentangler (big σy rotation of amplitude `a`, then the
/// finite-energy post-correction).
pub fn splitting_circuit(h: f64, a: f64, delta: f64) -> PulseSequence {
    PulseSequence::from_vec(vec![
        Instruction::cd(C64::new(h, 0.0), 0.0, 0, 0),
        Instruction::cd(C64::new(0.0, a), std::f64::consts::FRAC_PI_2, 0, 0),
        Instruction::cd(C64::new(a * delta * delta, 0.0), 0.0, 0, 0),
    ])
}

fn e_branch_weight_after(
    state: &HybridState,
    seq: &PulseSequence,
    cfg: &FockBasisConfig,
) -> Result<f64> {
    let mut s = state.clone();
    let mut rng = StdRng::seed_from_u64(0);
    apply_sequence(&mut s, seq, cfg, &mut rng)?;
    Ok(s.qubit_branch_weight(0, 1))
}

/// Golden-section search for the unentangling amplitude of deep steps
/// (`k ≥ 4`), minimizing the residual excited-branch weight on the actual
/// state; bounded by the analytic `k ≤ 3` value scaled to the step.
fn optimize_unentangle_amplitude(
    state: &HybridState,
    k: usize,
    h: f64,
    delta: f64,
    cfg: &FockBasisConfig,
) -> Result<f64> {
    let upper = unentangle_amplitude(k.saturating_sub(1).max(1), h);
    let (mut lo, mut hi) = (0.0f64, upper);
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let obj = |a: f64| -> Result<f64> {
        e_branch_weight_after(state, &splitting_circuit(h, a, delta), cfg)
    };
    let mut c = hi - gr * (hi - lo);
    let mut d = lo + gr * (hi - lo);
    let mut fc = obj(c)?;
    let mut fd = obj(d)?;
    for _ in 0..40 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = obj(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = obj(d)?;
        }
    }
    Ok((lo + hi) / 2.0)
}

/// Run the preparation from an ideally squeezed input (width Δ). Returns the
/// final state (after the optional SBS round) and per-step metrics.
pub fn prepare_gkp(plan: &GkpPrepPlan, dim: usize) -> Result<(HybridState, Vec<GkpStepMetrics>)> {
    if plan.delta <= 0.0 || plan.delta >= 1.0 {
        return Err(Error::InvalidParameter("GKP preparation needs 0 < Δ < 1".into()));
    }
    let cfg = FockBasisConfig::new(dim)?.with_leakage_tol(1e-6)?;
    let code = GkpCode { delta: plan.delta, lattice_spacing: plan.lattice_spacing };
    let h = plan.lattice_spacing / 2.0;
    let n = plan.steps();
    let mut state =
        HybridState::product(&squeezed_vacuum_vec(plan.delta, dim), [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let mut metrics = Vec::with_capacity(n + 1);
    let mut rng = StdRng::seed_from_u64(0);
    for k in 1..=n {
        let a = if k <= 3 {
            unentangle_amplitude(k, h)
        } else {
            optimize_unentangle_amplitude(&state, k, h, plan.delta, &cfg)?
        };
        let seq = splitting_circuit(h, a, plan.delta);
        apply_sequence(&mut state, &seq, &cfg, &mut rng)?;
        let (_, _, sz) = state.qubit_bloch(0)?;
        if sz < 0.8 {
            return Err(Error::EntanglementResidual(sz, 0.8));
        }
        let p_g = state.qubit_branch_weight(0, 0);
        let g_branch = {
            let mut s = state.clone();
            s.project_qubit(0, 0);
            s.normalize();
            s.osc_branch(0)
        };
        let (sx, sp) = code.stabilizer_expectations(&g_branch);
        let target = binomial_target(k, h, plan.delta, dim);
        let m = metrics_against_targets(&state, &target, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)])?;
        metrics.push(GkpStepMetrics {
            step: k,
            stab_x: sx.re,
            stab_p: sp.re,
            sigma_z: sz,
            p_g,
            f_hybrid: m.f_hybrid,
            f_postselected: m.f_postselected,
            unentangle_amplitude: a,
        });
    }
    if plan.append_sbs {
        let out = sbs_round(&state, &code, GkpAxis::Z, &cfg)?;
        let p_g = out.p_g;
        state = out.state_g;
        let g_branch = state.osc_branch(0);
        let (sx, sp) = code.stabilizer_expectations(&g_branch);
        let target = binomial_target(n, h, plan.delta, dim);
        let m = metrics_against_targets(&state, &target, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)])?;
        metrics.push(GkpStepMetrics {
            step: n + 1,
            stab_x: sx.re,
            stab_p: sp.re,
            sigma_z: 1.0,
            p_g,
            f_hybrid: m.f_hybrid,
            f_postselected: m.f_postselected,
            unentangle_amplitude: 0.0,
        });
    }
    Ok((state, metrics))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_of_step_counts() {
        assert_eq!(optimal_step_count(0.2), 7);
        assert_eq!(optimal_step_count(0.3), 3);
        assert_eq!(optimal_step_count(0.4), 1);
        assert_eq!(optimal_step_count(0.1), 31);
    }

    #[test]
    fn flagship_prep_at_delta_034() {
        let mut plan = GkpPrepPlan::square(0.34);
        plan.n_steps = Some(3);
        plan.append_sbs = false;
        let (_, metrics) = prepare_gkp(&plan, 140).unwrap();
        let last = metrics.last().unwrap();
        // the C3 unentangler's linear rotation cannot match the interior
        // peaks exactly, capping P_g near 0.994; the quoted state fidelity
        // is therefore the success-branch one
        assert!(last.f_postselected > 0.998, "F_ps after C3 = {}", last.f_postselected);
        assert!(last.sigma_z > 0.985, "⟨σz⟩ = {}", last.sigma_z);
        assert!(last.p_g > 0.985, "P_g = {}", last.p_g);
    }

    #[test]
    fn stabilizers_grow_monotonically() {
        let mut plan = GkpPrepPlan::square(0.34);
        plan.n_steps = Some(3);
        plan.append_sbs = true;
        let (_, metrics) = prepare_gkp(&plan, 140).unwrap();
        for w in metrics.windows(2) {
            assert!(
                w[1].stab_x >= w[0].stab_x - 0.02,
                "⟨S_x⟩ fell: {} → {}",
                w[0].stab_x,
                w[1].stab_x
            );
        }
        let last = metrics.last().unwrap();
        assert!(last.stab_x > 0.4 && last.stab_p > 0.4, "final stabilizers {last:?}");
    }

    #[test]
    fn deep_step_optimizer_matches_analytic_at_k3() {
        // the golden-section optimum for k = 3 sits at the analytic value
        let plan = GkpPrepPlan {
            delta: 0.34,
            lattice_spacing: (2.0 * std::f64::consts::PI).sqrt(),
            n_steps: Some(2),
            append_sbs: false,
        };
        let dim = 140;
        let cfg = FockBasisConfig::new(dim).unwrap().with_leakage_tol(1e-6).unwrap();
        let h = plan.lattice_spacing / 2.0;
        let (state2, _) = prepare_gkp(&plan, dim).unwrap();
        let a_opt = optimize_unentangle_amplitude(&state2, 3, h, plan.delta, &cfg).unwrap();
        let a_analytic = unentangle_amplitude(3, h);
        assert!(
            (a_opt - a_analytic).abs() < 0.12 * a_analytic,
            "optimized {a_opt:.4} vs analytic {a_analytic:.4}"
        );
    }

    #[test]
    fn delta_04_single_step_prep() {
        let plan = GkpPrepPlan::square(0.4);
        assert_eq!(plan.steps(), 1);
        let (_, metrics) = prepare_gkp(&plan, 120).unwrap();
        let last = metrics.last().unwrap();
        assert!(last.f_postselected > 0.95, "Δ=0.4 F_ps = {}", last.f_postselected);
    }
}
