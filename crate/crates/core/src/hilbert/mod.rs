//! Truncated Fock-space representation of oscillator/qubit systems.
//!
//! States live on `(⊗ modes) ⊗ (⊗ qubits)` with the flat index
//! `qb · Dtot + osc` where `qb` packs qubit bits (qubit 0 least significant,
//! `|g⟩ = 0`) and `osc` packs mode occupation numbers (mode 0 fastest).
//! Wigner units: `x = (a + a†)/2`, `p = (a − a†)/2i`, `[x, p] = i/2`.

pub mod block;
pub mod diag;
pub mod tridiag;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::{CMat, CVec};

/// Fock truncation and the tolerance on norm lost to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockBasisConfig {
    pub dim: usize,
    pub leakage_tol: f64,
}

impl FockBasisConfig {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("fock dim {dim} < 2")));
        }
        Ok(Self { dim, leakage_tol: 1e-8 })
    }

    pub fn with_leakage_tol(mut self, tol: f64) -> Result<Self> {
        if tol <= 0.0 {
            return Err(Error::InvalidParameter("leakage_tol must be > 0".into()));
        }
        self.leakage_tol = tol;
        Ok(self)
    }

    /// Truncation that safely holds states reached by displacements with the
    /// given maximum cumulative amplitude (coherent tails decay
    /// super-exponentially past `mean + few·√mean`).
    pub fn auto(max_cumulative_displacement: f64) -> Self {
        let r = max_cumulative_displacement.abs();
        let dim = (r * r + 8.0 * r + 16.0).ceil() as usize;
        Self { dim: dim.max(32), leakage_tol: 1e-8 }
    }
}

impl Default for FockBasisConfig {
    fn default() -> Self {
        Self { dim: 64, leakage_tol: 1e-8 }
    }
}

/// Cached eigendecomposition of the position quadrature `x` at one Fock
/// dimension. Every displacement-type exponential is obtained from it by a
/// number-operator phase rotation, so one decomposition per dimension covers
/// all conditional and unconditional displacements.
pub struct QuadratureEig {
    pub dim: usize,
    /// Eigenvalues of x, ascending.
    pub lambda: Vec<f64>,
    /// Eigenvectors, `v[(i, k)]` = Fock component i of eigenvector k.
    pub v: Array2<f64>,
    /// Transposed copy for cache-friendly left application.
    vt: Array2<f64>,
}

impl QuadratureEig {
    fn build(dim: usize) -> Self {
        let d = vec![0.0f64; dim];
        let e: Vec<f64> = (0..dim).map(|n| (n as f64).sqrt() / 2.0).collect();
        let (lambda, vecs) = tridiag::eigh_tridiagonal(&d, &e);
        let mut v = Array2::zeros((dim, dim));
        let mut vt = Array2::zeros((dim, dim));
        for i in 0..dim {
            for k in 0..dim {
                v[(i, k)] = vecs[i][k];
                vt[(k, i)] = vecs[i][k];
            }
        }
        Self { dim, lambda, v, vt }
    }

    /// Apply `D(β) = exp(β a† − β* a)` in place to a Fock-basis vector.
    ///
    /// Uses `D(β) = e^{iφ n} · exp(i 2|β| x) · e^{−iφ n}` with
    /// `φ = atan2(−Re β, Im β)`.
    pub fn apply_displacement(&self, beta: C64, v: &mut [C64], scratch: &mut [C64]) {
        debug_assert_eq!(v.len(), self.dim);
        let b = beta.norm();
        if b == 0.0 {
            return;
        }
        let phi = (-beta.re).atan2(beta.im);
        let rot = C64::from_polar(1.0, -phi);
        let mut ph = C64::new(1.0, 0.0);
        for vn in v.iter_mut() {
            *vn *= ph;
            ph *= rot;
        }
        // w = Vᵀ v, then phase by e^{i 2|β| λ_k}, then v = V w
        for (k, w) in scratch.iter_mut().enumerate() {
            let row = self.vt.row(k);
            let mut acc = C64::new(0.0, 0.0);
            for (x, y) in row.iter().zip(v.iter()) {
                acc += *y * *x;
            }
            *w = acc * C64::from_polar(1.0, 2.0 * b * self.lambda[k]);
        }
        for (i, out) in v.iter_mut().enumerate() {
            let row = self.v.row(i);
            let mut acc = C64::new(0.0, 0.0);
            for (x, y) in row.iter().zip(scratch.iter()) {
                acc += *y * *x;
            }
            *out = acc;
        }
        let rot = C64::from_polar(1.0, phi);
        let mut ph = C64::new(1.0, 0.0);
        for vn in v.iter_mut() {
            *vn *= ph;
            ph *= rot;
        }
    }

    /// Dense matrix of `D(β)`.
    pub fn displacement_matrix(&self, beta: C64) -> CMat {
        let n = self.dim;
        let mut m = CMat::zeros((n, n));
        let mut col = vec![C64::new(0.0, 0.0); n];
        let mut scratch = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            col.iter_mut().for_each(|c| *c = C64::new(0.0, 0.0));
            col[j] = C64::new(1.0, 0.0);
            self.apply_displacement(beta, &mut col, &mut scratch);
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        m
    }
}

static QUAD_CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureEig>>>> = OnceLock::new();

/// Shared, lazily-built quadrature eigendecomposition for a Fock dimension.
pub fn quadrature_eig(dim: usize) -> Arc<QuadratureEig> {
    let cache = QUAD_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(dim).or_insert_with(|| Arc::new(QuadratureEig::build(dim))).clone()
}

/// Dense operator with a Hermiticity hint.
#[derive(Clone, Debug)]
pub struct Operator {
    pub mat: CMat,
    pub hermitian: bool,
}

impl Operator {
    pub fn new(mat: CMat, hermitian: bool) -> Self {
        Self { mat, hermitian }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Max-norm of `U†U − I` restricted to the first `levels` Fock levels.
    pub fn unitarity_defect(&self, levels: usize) -> f64 {
        let n = self.dim();
        let l = levels.min(n);
        let prod = self.mat.t().mapv(|z| z.conj()).dot(&self.mat);
        let mut worst = 0.0f64;
        for i in 0..l {
            for j in 0..l {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((prod[(i, j)] - expect).norm());
            }
        }
        worst
    }
}

/// Annihilation and creation operators at the given truncation.
pub fn ladder_operators(cfg: &FockBasisConfig) -> (Operator, Operator) {
    let n = cfg.dim;
    let mut a = CMat::zeros((n, n));
    for m in 1..n {
        a[(m - 1, m)] = C64::new((m as f64).sqrt(), 0.0);
    }
    let adag = a.t().mapv(|z| z.conj());
    (Operator::new(a, false), Operator::new(adag, false))
}

/// `x = (a + a†)/2` as a dense matrix.
pub fn position_operator(cfg: &FockBasisConfig) -> Operator {
    let (a, ad) = ladder_operators(cfg);
    Operator::new((a.mat + ad.mat).mapv(|z| z * 0.5), true)
}

/// `p = (a − a†)/2i` as a dense matrix.
pub fn momentum_operator(cfg: &FockBasisConfig) -> Operator {
    let (a, ad) = ladder_operators(cfg);
    Operator::new((a.mat - ad.mat).mapv(|z| z * C64::new(0.0, -0.5)), true)
}

/// Number operator `a†a`.
pub fn number_operator(cfg: &FockBasisConfig) -> Operator {
    let mut m = CMat::zeros((cfg.dim, cfg.dim));
    for n in 0..cfg.dim {
        m[(n, n)] = C64::new(n as f64, 0.0);
    }
    Operator::new(m, true)
}

/// `exp(β a† − β* a)` as a dense unitary.
///
/// Fails when the displaced-vacuum photon tail would not fit below the
/// truncation (`|β|² + 6|β| ≥ D`).
pub fn displacement_operator(beta: C64, cfg: &FockBasisConfig) -> Result<Operator> {
    let b = beta.norm();
    if b * b + 6.0 * b >= cfg.dim as f64 {
        return Err(Error::Truncation(format!(
            "displacement |β| = {b:.3} needs dim > {:.0}, have {}",
            b * b + 6.0 * b,
            cfg.dim
        )));
    }
    let eig = quadrature_eig(cfg.dim);
    Ok(Operator::new(eig.displacement_matrix(beta), false))
}

/// Pure state on `(⊗ modes) ⊗ (⊗ qubits)`.
#[derive(Clone, Debug)]
pub struct HybridState {
    pub amp: CVec,
    pub fock_dims: Vec<usize>,
    pub num_qubits: usize,
}

impl HybridState {
    /// `|0…0⟩ ⊗ |g…g⟩`.
    pub fn vacuum(fock_dims: &[usize], num_qubits: usize) -> Self {
        let dtot: usize = fock_dims.iter().product();
        let n = dtot << num_qubits;
        let mut amp = Array1::zeros(n);
        amp[0] = C64::new(1.0, 0.0);
        Self { amp, fock_dims: fock_dims.to_vec(), num_qubits }
    }

    /// Product of a single-mode oscillator vector and a qubit state.
    pub fn product(osc: &CVec, qubit: [C64; 2]) -> Self {
        let d = osc.len();
        let mut amp = Array1::zeros(2 * d);
        for n in 0..d {
            amp[n] = osc[n] * qubit[0];
            amp[d + n] = osc[n] * qubit[1];
        }
        Self { amp, fock_dims: vec![d], num_qubits: 1 }
    }

    /// Product of two single-mode oscillator vectors and two qubits
    /// (mode 0 fastest, qubit 0 least significant).
    pub fn product2(osc0: &CVec, osc1: &CVec, q0: [C64; 2], q1: [C64; 2]) -> Self {
        let (d0, d1) = (osc0.len(), osc1.len());
        let dtot = d0 * d1;
        let mut amp = Array1::zeros(dtot * 4);
        for b1 in 0..2 {
            for b0 in 0..2 {
                let qamp = q0[b0] * q1[b1];
                if qamp.norm_sqr() == 0.0 {
                    continue;
                }
                let base = (b1 * 2 + b0) * dtot;
                for n1 in 0..d1 {
                    for n0 in 0..d0 {
                        amp[base + n1 * d0 + n0] = osc1[n1] * osc0[n0] * qamp;
                    }
                }
            }
        }
        Self { amp, fock_dims: vec![d0, d1], num_qubits: 2 }
    }

    pub fn dtot(&self) -> usize {
        self.fock_dims.iter().product()
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amp.mapv_inplace(|z| z / n);
        }
    }

    /// Probability weight sitting on the top Fock level of one mode.
    pub fn leakage(&self, mode: usize) -> f64 {
        let d = self.fock_dims[mode];
        let stride: usize = self.fock_dims[..mode].iter().product();
        let mut s = 0.0;
        for (idx, z) in self.amp.iter().enumerate() {
            let osc = idx % self.dtot();
            if (osc / stride) % d == d - 1 {
                s += z.norm_sqr();
            }
        }
        s
    }

    pub fn check_leakage(&self, tol: f64) -> Result<()> {
        for mode in 0..self.fock_dims.len() {
            let l = self.leakage(mode);
            if l >= tol {
                return Err(Error::Truncation(format!(
                    "mode {mode} leakage {l:.3e} exceeds tolerance {tol:.1e}"
                )));
            }
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self.amp.iter().zip(other.amp.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// `⟨ψ|O|ψ⟩` for an operator on the full space.
    pub fn expectation(&self, op: &CMat) -> Result<C64> {
        if op.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: op.nrows() });
        }
        let oψ = op.dot(&self.amp);
        Ok(self.amp.iter().zip(oψ.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// Reduced 2×2 density matrix of one qubit.
    pub fn reduced_qubit_rho(&self, qubit: usize) -> Result<[[C64; 2]; 2]> {
        if qubit >= self.num_qubits {
            return Err(Error::Index(format!("qubit {qubit} of {}", self.num_qubits)));
        }
        let dtot = self.dtot();
        let bit = 1usize << qubit;
        let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
        for (idx, z) in self.amp.iter().enumerate() {
            let qb = idx / dtot;
            let b = (qb & bit != 0) as usize;
            // pair index with the qubit flipped
            let idx2 = (qb ^ bit) * dtot + idx % dtot;
            rho[b][b] += z * z.conj();
            rho[1 - b][b] += self.amp[idx2] * z.conj();
        }
        Ok(rho)
    }

    /// `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of one qubit.
    pub fn qubit_bloch(&self, qubit: usize) -> Result<(f64, f64, f64)> {
        let rho = self.reduced_qubit_rho(qubit)?;
        let sx = (rho[0][1] + rho[1][0]).re;
        let sy = (rho[0][1] * C64::new(0.0, 1.0) + rho[1][0] * C64::new(0.0, -1.0)).re;
        let sz = (rho[0][0] - rho[1][1]).re;
        Ok((sx, sy, sz))
    }

    /// Norm² of the branch where `qubit` is in basis state `bit` (0 = g).
    pub fn qubit_branch_weight(&self, qubit: usize, bit: usize) -> f64 {
        let dtot = self.dtot();
        let mask = 1usize << qubit;
        self.amp
            .iter()
            .enumerate()
            .filter(|(idx, _)| ((idx / dtot) & mask != 0) as usize == bit)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    /// Project one qubit onto a basis state without renormalizing.
    /// Returns the branch weight.
    pub fn project_qubit(&mut self, qubit: usize, bit: usize) -> f64 {
        let dtot = self.dtot();
        let mask = 1usize << qubit;
        let mut w = 0.0;
        for (idx, z) in self.amp.iter_mut().enumerate() {
            if ((idx / dtot) & mask != 0) as usize == bit {
                w += z.norm_sqr();
            } else {
                *z = C64::new(0.0, 0.0);
            }
        }
        w
    }

    /// Oscillator vector of a single-mode state conditioned on qubit values,
    /// unnormalized.
    pub fn osc_branch(&self, qubit_bits: usize) -> CVec {
        let dtot = self.dtot();
        self.amp.slice(ndarray::s![qubit_bits * dtot..(qubit_bits + 1) * dtot]).to_owned()
    }
}

/// Fock state `|n⟩` as an oscillator vector.
pub fn fock_vec(n: usize, dim: usize) -> CVec {
    let mut v = Array1::zeros(dim);
    v[n] = C64::new(1.0, 0.0);
    v
}

/// Coherent state with `⟨x⟩ = Re α`, `⟨p⟩ = Im α`.
pub fn coherent_vec(alpha: C64, dim: usize) -> CVec {
    let mut v = Array1::zeros(dim);
    let mut amp = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    v[0] = amp;
    for n in 1..dim {
        amp *= alpha / C64::new((n as f64).sqrt(), 0.0);
        v[n] = amp;
    }
    v
}

/// Squeezed vacuum with position wavefunction `∝ exp(−x²/Δ²)`
/// (`δx = Δ/2`, vacuum is `Δ = 1`).
pub fn squeezed_vacuum_vec(delta: f64, dim: usize) -> CVec {
    // expansion in Fock basis: c_{2m} ∝ t^m √((2m)!)/(2^m m!), t = (Δ²−1)/(Δ²+1)
    let t = (delta * delta - 1.0) / (delta * delta + 1.0);
    let mut v = Array1::zeros(dim);
    let mut c = 1.0f64;
    v[0] = C64::new(1.0, 0.0);
    let mut m = 1usize;
    while 2 * m < dim {
        // c_{2m}/c_{2(m−1)} = t · √((2m)(2m−1))/(2m)
        let k = 2.0 * m as f64;
        c *= t * (k * (k - 1.0)).sqrt() / k;
        v[2 * m] = C64::new(c, 0.0);
        m += 1;
    }
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.mapv(|z| z / norm)
}

/// Squeezed coherent state `|α_Δ⟩` with mean position `Re center`, mean
/// momentum `Im center`, and position width parameter `Δ`.
pub fn displaced_squeezed_vec(center: C64, delta: f64, dim: usize) -> CVec {
    let eig = quadrature_eig(dim);
    let mut v = squeezed_vacuum_vec(delta, dim);
    let mut scratch = vec![C64::new(0.0, 0.0); dim];
    eig.apply_displacement(center, v.as_slice_mut().unwrap(), &mut scratch);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const D: usize = 64;

    fn cfg() -> FockBasisConfig {
        FockBasisConfig::new(D).unwrap()
    }

    #[test]
    fn ladder_matrix_elements() {
        let c = FockBasisConfig::new(2).unwrap();
        let (a, _) = ladder_operators(&c);
        assert_eq!(a.mat[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(a.mat[(0, 0)], C64::new(0.0, 0.0));
        assert_eq!(a.mat[(1, 0)], C64::new(0.0, 0.0));
        assert_eq!(a.mat[(1, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn vacuum_position_variance_is_quarter() {
        let x = position_operator(&cfg());
        let x2 = x.mat.dot(&x.mat);
        let state = HybridState::product(&fock_vec(0, D), [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        // oscillator-only expectation on the g branch
        let osc = state.osc_branch(0);
        let val: C64 = osc.iter().zip(x2.dot(&osc).iter()).map(|(a, b)| a.conj() * b).sum();
        assert_abs_diff_eq!(val.re, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn commutator_is_i_over_two() {
        let x = position_operator(&cfg());
        let p = momentum_operator(&cfg());
        let comm = x.mat.dot(&p.mat) - p.mat.dot(&x.mat);
        for i in 0..D - 1 {
            for j in 0..D - 1 {
                let expect = if i == j { C64::new(0.0, 0.5) } else { C64::new(0.0, 0.0) };
                assert!((comm[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn displacement_zero_is_identity() {
        let d0 = displacement_operator(C64::new(0.0, 0.0), &cfg()).unwrap();
        for i in 0..D {
            for j in 0..D {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d0.mat[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn displaced_vacuum_overlap_series_oracle() {
        // |⟨0|D(α)|0⟩|² against the coherent-amplitude series Σ |c_n|² at n = 0
        let alpha = 1.3;
        let d = displacement_operator(C64::new(alpha, 0.0), &cfg()).unwrap();
        let vac = fock_vec(0, D);
        let moved = d.mat.dot(&vac);
        let got = moved[0].norm_sqr();
        // series oracle: ⟨0|α_coh⟩ = e^{−|α|²/2}
        let expect = (-alpha * alpha).exp();
        assert_abs_diff_eq!(got, expect, epsilon = 1e-10);
        // and coherent_vec agrees with the displaced vacuum componentwise
        let coh = coherent_vec(C64::new(alpha, 0.0), D);
        for n in 0..D {
            assert!((moved[n] - coh[n]).norm() < 1e-9);
        }
    }

    #[test]
    fn displacement_inverse_pair() {
        let eig = quadrature_eig(D);
        let b = C64::new(1.5, 0.0);
        let mut v: Vec<C64> = coherent_vec(C64::new(0.4, -0.2), D).to_vec();
        let orig = v.clone();
        let mut scratch = vec![C64::new(0.0, 0.0); D];
        eig.apply_displacement(b, &mut v, &mut scratch);
        eig.apply_displacement(-b, &mut v, &mut scratch);
        let err: f64 = v.iter().zip(orig.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "D(β)D(−β) deviates from identity by {err:.2e}");
    }

    #[test]
    fn displacement_unitarity_on_bulk() {
        let b = C64::new(0.7, 1.1);
        let d = displacement_operator(b, &cfg()).unwrap();
        let levels = D - (6.0 * b.norm()).ceil() as usize;
        assert!(d.unitarity_defect(levels) < 1e-9);
    }

    #[test]
    fn displacement_rejects_overflow() {
        assert!(displacement_operator(C64::new(9.0, 0.0), &cfg()).is_err());
    }

    #[test]
    fn squeezed_vacuum_variances() {
        let x = position_operator(&cfg()).mat;
        let p = momentum_operator(&cfg()).mat;
        for &delta in &[0.5, 1.0, 1.7] {
            let v = squeezed_vacuum_vec(delta, D);
            let x2: C64 = v.iter().zip(x.dot(&x.dot(&v)).iter()).map(|(a, b)| a.conj() * b).sum();
            let p2: C64 = v.iter().zip(p.dot(&p.dot(&v)).iter()).map(|(a, b)| a.conj() * b).sum();
            assert_abs_diff_eq!(x2.re, delta * delta / 4.0, epsilon = 1e-8);
            assert_abs_diff_eq!(p2.re, 1.0 / (4.0 * delta * delta), epsilon = 1e-8);
        }
    }

    #[test]
    fn coherent_state_means() {
        let x = position_operator(&cfg()).mat;
        let p = momentum_operator(&cfg()).mat;
        let v = coherent_vec(C64::new(1.2, -0.7), D);
        let mx: C64 = v.iter().zip(x.dot(&v).iter()).map(|(a, b)| a.conj() * b).sum();
        let mp: C64 = v.iter().zip(p.dot(&v).iter()).map(|(a, b)| a.conj() * b).sum();
        assert_abs_diff_eq!(mx.re, 1.2, epsilon = 1e-10);
        assert_abs_diff_eq!(mp.re, -0.7, epsilon = 1e-10);
    }

    #[test]
    fn bloch_vector_of_ground_qubit() {
        let s = HybridState::vacuum(&[8], 1);
        let (sx, sy, sz) = s.qubit_bloch(0).unwrap();
        assert_abs_diff_eq!(sx, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sy, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sz, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn auto_dim_floor() {
        assert_eq!(FockBasisConfig::auto(0.0).dim, 32);
        assert!(FockBasisConfig::auto(10.0).dim >= 196);
    }
}
