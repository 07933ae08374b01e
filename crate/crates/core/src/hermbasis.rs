//! Real coordinates for the space of n-by-n Hermitian matrices.
//!
//! The basis is orthonormal under the Frobenius inner product, so parameter
//! 2-norms equal matrix Frobenius norms and ball projections are exact.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

pub(crate) fn param_dim(n: usize) -> usize {
    n * n
}

/// Coordinates: n diagonal entries, then (sqrt2 Re, sqrt2 Im) per upper
/// off-diagonal entry in row-major order.
pub(crate) fn to_params(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows();
    let mut out = Vec::with_capacity(param_dim(n));
    for i in 0..n {
        out.push(h[(i, i)].re);
    }
    let s2 = std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in i + 1..n {
            out.push(s2 * h[(i, j)].re);
            out.push(s2 * h[(i, j)].im);
        }
    }
    out
}

pub(crate) fn from_params(params: &[f64], n: usize) -> ComplexMatrix {
    assert_eq!(params.len(), param_dim(n), "parameter count mismatch");
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let inv_s2 = 1.0 / std::f64::consts::SQRT_2;
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let re = params[k] * inv_s2;
            let im = params[k + 1] * inv_s2;
            k += 2;
            h[(i, j)] = Complex64::new(re, im);
            h[(j, i)] = Complex64::new(re, -im);
        }
    }
    h
}

/// Real matrix of the real-linear map `H -> H W` stacked as
/// (Re, Im) interleaved rows, one block per column of `W`; used to impose
/// constraints of the form `H W = RHS` on the parameter vector.
pub(crate) fn constraint_matrix(w: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let k = w.cols();
    let rows = 2 * n * k;
    let dim = param_dim(n);
    let mut a = ComplexMatrix::zeros(rows, dim);
    let mut basis = vec![0.0; dim];
    for j in 0..dim {
        basis[j] = 1.0;
        let hj = from_params(&basis, n);
        basis[j] = 0.0;
        let img = &hj * w;
        for col in 0..k {
            for i in 0..n {
                let z = img[(i, col)];
                a[(2 * (col * n + i), j)] = Complex64::new(z.re, 0.0);
                a[(2 * (col * n + i) + 1, j)] = Complex64::new(z.im, 0.0);
            }
        }
    }
    a
}

/// Realified right-hand side matching [`constraint_matrix`]'s row layout.
pub(crate) fn constraint_rhs(rhs: &ComplexMatrix) -> Vec<f64> {
    let (n, k) = (rhs.rows(), rhs.cols());
    let mut out = vec![0.0; 2 * n * k];
    for col in 0..k {
        for i in 0..n {
            out[2 * (col * n + i)] = rhs[(i, col)].re;
            out[2 * (col * n + i) + 1] = rhs[(i, col)].im;
        }
    }
    out
}
