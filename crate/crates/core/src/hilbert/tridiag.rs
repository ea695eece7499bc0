//! Eigendecomposition of real symmetric tridiagonal matrices by the implicit
//! QL method with Wilkinson shifts.
//!
//! The position quadrature `x = (a + a†)/2` is tridiagonal in the Fock basis
//! (zero diagonal, off-diagonal `√n/2`), and every displacement-type
//! generator is a rotated copy of it, so this single routine backs all
//! phase-space exponentials in the crate.

/// Eigenvalues and eigenvectors of a symmetric tridiagonal matrix.
///
/// `d` is the diagonal (length n), `e` the sub-diagonal (length n, `e[0]`
/// ignored). Returns `(values, vectors)` with `vectors` column-major in the
/// sense `vectors[i][k]` = component i of eigenvector k; values ascending.
pub fn eigh_tridiagonal(d: &[f64], e: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = d.len();
    assert_eq!(e.len(), n, "sub-diagonal must have the same length");
    let mut d = d.to_vec();
    // shift e down by one: internal convention e[i] couples i and i+1
    let mut e: Vec<f64> = (1..n).map(|i| e[i]).chain(std::iter::once(0.0)).collect();
    // identity to accumulate rotations; z[i][j] = component i of vector j
    let mut z = vec![vec![0.0f64; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            // find a small off-diagonal element to split at
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 50, "tridiagonal QL failed to converge");

            // Wilkinson shift
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // sort ascending, carrying the vectors along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut vectors = vec![vec![0.0f64; n]; n];
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i][new_k] = z[i][old_k];
        }
    }
    (values, vectors)
}
