//! Position-space and phase-space diagnostics: Hermite-expansion
//! wavefunctions, conditional qubit polarization profiles, and the Wigner
//! function via the displaced-parity kernel.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::{quadrature_eig, HybridState};
use crate::CVec;

/// Hermite functions `φ_n(x)` for `n < dim` on a grid, in units where the
/// vacuum is `(2/π)^{1/4} e^{−x²}`.
///
/// Returned array has shape `(dim, grid.len())`.
pub fn hermite_table(dim: usize, grid: &[f64]) -> Array2<f64> {
    let mut t = Array2::zeros((dim, grid.len()));
    let norm0 = (2.0 / std::f64::consts::PI).powf(0.25);
    for (j, &x) in grid.iter().enumerate() {
        t[(0, j)] = norm0 * (-x * x).exp();
        if dim > 1 {
            t[(1, j)] = 2.0 * x * t[(0, j)];
        }
        for n in 2..dim {
            let nf = n as f64;
            t[(n, j)] = (2.0 * x / nf.sqrt()) * t[(n - 1, j)]
                - ((nf - 1.0) / nf).sqrt() * t[(n - 2, j)];
        }
    }
    t
}

/// Position wavefunctions of a single-mode hybrid state, one row per qubit
/// branch (row 0 = all qubits in `g`).
pub fn position_wavefunction(state: &HybridState, grid: &[f64]) -> Array2<C64> {
    let d = state.dtot();
    let nb = 1usize << state.num_qubits;
    let table = hermite_table(d, grid);
    let mut out = Array2::zeros((nb, grid.len()));
    for b in 0..nb {
        for (j, _) in grid.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for n in 0..d {
                acc += state.amp[b * d + n] * table[(n, j)];
            }
            out[(b, j)] = acc;
        }
    }
    out
}

/// Conditional Bloch vector of qubit 0 versus oscillator position for a
/// one-mode one-qubit state: `(⟨σx⟩_x, ⟨σy⟩_x, ⟨σz⟩_x)` plus the position
/// density `|ψ(x)|²` as the fourth column.
pub fn conditional_bloch(state: &HybridState, grid: &[f64]) -> Vec<[f64; 4]> {
    assert_eq!(state.num_qubits, 1);
    let psi = position_wavefunction(state, grid);
    grid.iter()
        .enumerate()
        .map(|(j, _)| {
            let g = psi[(0, j)];
            let e = psi[(1, j)];
            let dens = g.norm_sqr() + e.norm_sqr();
            if dens < 1e-300 {
                return [0.0, 0.0, 0.0, dens];
            }
            let cross = g.conj() * e;
            [
                2.0 * cross.re / dens,
                2.0 * cross.im / dens,
                (g.norm_sqr() - e.norm_sqr()) / dens,
                dens,
            ]
        })
        .collect()
}

/// Wigner function of the oscillator (qubit traced out) on a rectangular
/// grid, via `W(x, p) = (2/π) Σ_q Σ_n (−1)^n |⟨n|D(−x−ip)|ψ_q⟩|²`.
///
/// Returns shape `(xs.len(), ps.len())`; normalized so `∬ W dx dp = 1`.
/// The state must be embedded at a truncation large enough for the grid
/// corners (`|α|² + 6|α| < D` with `|α|` the largest grid radius), otherwise
/// the displaced-parity sum is corrupted at the edges.
pub fn wigner(state: &HybridState, xs: &[f64], ps: &[f64]) -> Array2<f64> {
    let d = state.dtot();
    let nb = 1usize << state.num_qubits;
    let eig = quadrature_eig(d);
    let mut out = Array2::zeros((xs.len(), ps.len()));
    let mut work = vec![C64::new(0.0, 0.0); d];
    let mut scratch = vec![C64::new(0.0, 0.0); d];
    for (ix, &x) in xs.iter().enumerate() {
        for (ip, &p) in ps.iter().enumerate() {
            let alpha = C64::new(x, p);
            let mut w = 0.0;
            for b in 0..nb {
                for n in 0..d {
                    work[n] = state.amp[b * d + n];
                }
                eig.apply_displacement(-alpha, &mut work, &mut scratch);
                for (n, z) in work.iter().enumerate() {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    w += sign * z.norm_sqr();
                }
            }
            out[(ix, ip)] = w * 2.0 / std::f64::consts::PI;
        }
    }
    out
}

/// Trapezoid integral of a Wigner array over its grid.
pub fn wigner_integral(w: &Array2<f64>, xs: &[f64], ps: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..xs.len() - 1 {
        for j in 0..ps.len() - 1 {
            let cell = (w[(i, j)] + w[(i + 1, j)] + w[(i, j + 1)] + w[(i + 1, j + 1)]) / 4.0;
            total += cell * (xs[i + 1] - xs[i]) * (ps[j + 1] - ps[j]);
        }
    }
    total
}

/// Mean and variance of position/momentum from operator moments.
pub fn quadrature_moments(osc: &CVec) -> ((f64, f64), (f64, f64)) {
    let d = osc.len();
    // ⟨x⟩, ⟨x²⟩ etc. from ladder algebra without building matrices
    let mut a_osc = Array1::<C64>::zeros(d);
    for n in 1..d {
        a_osc[n - 1] = osc[n] * (n as f64).sqrt();
    }
    let braket = |u: &Array1<C64>, v: &Array1<C64>| -> C64 {
        u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
    };
    let ea = braket(osc, &a_osc);
    let eaa = {
        let mut aa = Array1::<C64>::zeros(d);
        for n in 1..d {
            aa[n - 1] = a_osc[n] * (n as f64).sqrt();
        }
        braket(osc, &aa)
    };
    let eada = braket(&a_osc, &a_osc); // ⟨a†a⟩
    let norm: f64 = osc.iter().map(|z| z.norm_sqr()).sum();
    let (ea, eaa, eada) = (ea / norm, eaa / norm, eada / norm);
    let mx = ea.re;
    let mp = ea.im;
    // x² = (a² + a†² + 2a†a + 1)/4, p² = −(a² + a†² − 2a†a − 1)/4
    let ex2 = (eaa.re * 2.0 + 2.0 * eada.re + 1.0) / 4.0;
    let ep2 = (-eaa.re * 2.0 + 2.0 * eada.re + 1.0) / 4.0;
    ((mx, ex2 - mx * mx), (mp, ep2 - mp * mp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{coherent_vec, displaced_squeezed_vec, fock_vec, squeezed_vacuum_vec};
    use approx::assert_abs_diff_eq;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn vacuum_wavefunction_matches_gaussian() {
        let s = crate::hilbert::HybridState::product(
            &fock_vec(0, 48),
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        );
        let xs = grid(-4.0, 4.0, 101);
        let psi = position_wavefunction(&s, &xs);
        let norm = (2.0 / std::f64::consts::PI).powf(0.25);
        for (j, &x) in xs.iter().enumerate() {
            let expect = norm * (-x * x).exp();
            assert!((psi[(0, j)] - C64::new(expect, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn squeezed_wavefunction_matches_gaussian() {
        let delta = 0.45;
        let s = crate::hilbert::HybridState::product(
            &squeezed_vacuum_vec(delta, 96),
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        );
        let xs = grid(-2.0, 2.0, 41);
        let psi = position_wavefunction(&s, &xs);
        let norm = (2.0 / (std::f64::consts::PI * delta * delta)).powf(0.25);
        for (j, &x) in xs.iter().enumerate() {
            let expect = norm * (-x * x / (delta * delta)).exp();
            assert!(
                (psi[(0, j)] - C64::new(expect, 0.0)).norm() < 1e-6,
                "x={x}: {} vs {expect}",
                psi[(0, j)]
            );
        }
    }

    #[test]
    fn coherent_peak_at_alpha() {
        let s = crate::hilbert::HybridState::product(
            &coherent_vec(C64::new(1.0, 0.0), 48),
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        );
        let xs = grid(-3.0, 4.0, 701);
        let psi = position_wavefunction(&s, &xs);
        let (jmax, _) = xs
            .iter()
            .enumerate()
            .max_by(|a, b| {
                psi[(0, a.0)].norm_sqr().partial_cmp(&psi[(0, b.0)].norm_sqr()).unwrap()
            })
            .unwrap();
        assert_abs_diff_eq!(xs[jmax], 1.0, epsilon = 0.02);
    }

    #[test]
    fn wigner_vacuum_and_fock1() {
        let vac = crate::hilbert::HybridState::product(
            &fock_vec(0, 72),
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        );
        let xs = grid(-3.5, 3.5, 61);
        let w = wigner(&vac, &xs, &xs);
        assert_abs_diff_eq!(w[(30, 30)], 2.0 / std::f64::consts::PI, epsilon = 1e-9);
        assert_abs_diff_eq!(wigner_integral(&w, &xs, &xs), 1.0, epsilon = 1e-3);

        let one = crate::hilbert::HybridState::product(
            &fock_vec(1, 72),
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        );
        let w1 = wigner(&one, &xs, &xs);
        assert!(w1[(30, 30)] < 0.0, "Fock |1⟩ Wigner at origin should be negative");
        assert_abs_diff_eq!(wigner_integral(&w1, &xs, &xs), 1.0, epsilon = 1e-3);
    }

    #[test]
    fn moments_of_displaced_squeezed() {
        let v = displaced_squeezed_vec(C64::new(0.8, -0.3), 0.6, 96);
        let ((mx, vx), (mp, vp)) = quadrature_moments(&v);
        assert_abs_diff_eq!(mx, 0.8, epsilon = 1e-9);
        assert_abs_diff_eq!(mp, -0.3, epsilon = 1e-9);
        assert_abs_diff_eq!(vx, 0.09, epsilon = 1e-8); // (Δ/2)² = 0.09
        assert_abs_diff_eq!(vp, 1.0 / (4.0 * 0.36), epsilon = 1e-7);
    }
}
