//! Qubit-block decomposition of hybrid unitaries: a one-qubit operator on
//! `osc ⊗ qubit` is a 2×2 array of oscillator-space blocks
//! `W_{q'q} = ⟨q'|U|q⟩`.


use crate::error::{Error, Result};
use crate::{CMat, CVec};

/// The four oscillator-space blocks of a one-qubit hybrid operator.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub w_gg: CMat,
    pub w_ge: CMat,
    pub w_eg: CMat,
    pub w_ee: CMat,
}

impl BlockDecomposition {
    /// Reassemble the full hybrid operator (qubit slowest).
    pub fn assemble(&self) -> CMat {
        let d = self.w_gg.nrows();
        let mut u = CMat::zeros((2 * d, 2 * d));
        for i in 0..d {
            for j in 0..d {
                u[(i, j)] = self.w_gg[(i, j)];
                u[(i, d + j)] = self.w_ge[(i, j)];
                u[(d + i, j)] = self.w_eg[(i, j)];
                u[(d + i, d + j)] = self.w_ee[(i, j)];
            }
        }
        u
    }

    /// `⟨ψ|W†_eg W_eg|ψ⟩`: failure probability for input `|ψ⟩ ⊗ |g⟩`.
    pub fn failure_probability(&self, osc_input: &CVec) -> f64 {
        let v = self.w_eg.dot(osc_input);
        v.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨ψ|W†_gg W_gg|ψ⟩ = P_g` for input `|ψ⟩ ⊗ |g⟩`.
    pub fn success_probability(&self, osc_input: &CVec) -> f64 {
        let v = self.w_gg.dot(osc_input);
        v.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Split a `2D × 2D` hybrid unitary into oscillator blocks.
pub fn block_decompose(u: &CMat) -> Result<BlockDecomposition> {
    let n = u.nrows();
    if n % 2 != 0 || u.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n / 2 * 2, got: u.ncols() });
    }
    let d = n / 2;
    let take = |r0: usize, c0: usize| -> CMat {
        let mut m = CMat::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = u[(r0 + i, c0 + j)];
            }
        }
        m
    };
    Ok(BlockDecomposition {
        w_gg: take(0, 0),
        w_ge: take(0, d),
        w_eg: take(d, 0),
        w_ee: take(d, d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use num_complex::Complex64 as C64;

    #[test]
    fn identity_blocks() {
        let d = 6;
        let u = Array2::from_diag_elem(2 * d, C64::new(1.0, 0.0));
        let b = block_decompose(&u).unwrap();
        for i in 0..d {
            for j in 0..d {
                let e = if i == j { 1.0 } else { 0.0 };
                assert_eq!(b.w_gg[(i, j)], C64::new(e, 0.0));
                assert_eq!(b.w_ee[(i, j)], C64::new(e, 0.0));
                assert_eq!(b.w_ge[(i, j)], C64::new(0.0, 0.0));
                assert_eq!(b.w_eg[(i, j)], C64::new(0.0, 0.0));
            }
        }
        let back = b.assemble();
        assert!(back.iter().zip(u.iter()).all(|(a, b)| (a - b).norm() < 1e-15));
    }
}
