//! Singular values by one-sided Jacobi: rotate column pairs until mutually
//! orthogonal. No squaring of the condition number, which keeps rank
//! decisions honest at the 1e-9 threshold.

use num_complex::Complex64;

use crate::linalg::matrix::ComplexMatrix;

/// Thin SVD `M = U diag(S) V*`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

const MAX_SWEEPS: usize = 60;

pub fn svd(m: &ComplexMatrix) -> Svd {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(cols);
    let scale = a.norm_fro().max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut apq = Complex64::new(0.0, 0.0);
                for k in 0..rows {
                    let cp = a[(k, p)];
                    let cq = a[(k, q)];
                    app += cp.norm_sqr();
                    aqq += cq.norm_sqr();
                    apq += cp.conj() * cq;
                }
                let r = apq.norm();
                if r <= 1e-15 * (app * aqq).sqrt().max(1e-30 * scale * scale) {
                    continue;
                }
                rotated = true;
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_ph = phase.scale(s);
                for k in 0..rows {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) - s_ph.conj() * akq;
                    a[(k, q)] = s_ph * akp + akq.scale(c);
                }
                for k in 0..cols {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp.scale(c) - s_ph.conj() * vkq;
                    v[(k, q)] = s_ph * vkp + vkq.scale(c);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigmas: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| sigmas[j].total_cmp(&sigmas[i]).then(i.cmp(&j)));
    let v_sorted = ComplexMatrix::from_fn(cols, cols, |i, j| v[(i, order[j])]);
    let mut u = ComplexMatrix::zeros(rows, cols);
    for j in 0..cols {
        let sj = sigmas[order[j]];
        if sj > 0.0 {
            for i in 0..rows {
                u[(i, j)] = a[(i, order[j])].scale(1.0 / sj);
            }
        }
    }
    sigmas.sort_by(|x, y| y.total_cmp(x));
    Svd {
        u,
        singular_values: sigmas,
        v: v_sorted,
    }
}

/// Numerical rank with threshold `sigma <= rel_tol * sigma_max * dim`.
pub fn rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let sv = svd(m);
    rank_from_singular_values(&sv.singular_values, m.rows().max(m.cols()), rel_tol)
}

pub fn rank_from_singular_values(sigmas: &[f64], dim: usize, rel_tol: f64) -> usize {
    let smax = sigmas.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let cut = rel_tol * smax * dim as f64;
    sigmas.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis of `{v : ||Mv|| <= threshold}`; columns of the result.
/// Empty (zero-column) matrix when M has full column rank.
pub fn null_space(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let cols = m.cols();
    if cols == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let sv = svd(m);
    let r = rank_from_singular_values(&sv.singular_values, m.rows().max(cols), rel_tol);
    let k = cols - r;
    ComplexMatrix::from_fn(cols, k, |i, j| sv.v[(i, r + j)])
}

/// Minimum-norm least-squares solve `M x ~= rhs` through the pseudo-inverse.
pub fn pinv_solve(m: &ComplexMatrix, rhs: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let sv = svd(m);
    let r = rank_from_singular_values(&sv.singular_values, m.rows().max(m.cols()), rel_tol);
    let uh_b = &sv.u.adjoint() * rhs;
    let mut scaled = ComplexMatrix::zeros(m.cols(), rhs.cols());
    for i in 0..r {
        let s = sv.singular_values[i];
        for j in 0..rhs.cols() {
            scaled[(i, j)] = uh_b[(i, j)].scale(1.0 / s);
        }
    }
    &sv.v * &scaled
}

/// 2-norm condition number estimate; infinite when numerically singular.
pub fn cond_2(m: &ComplexMatrix) -> f64 {
    let sv = svd(m);
    let smax = sv.singular_values.first().copied().unwrap_or(0.0);
    let smin = sv.singular_values.last().copied().unwrap_or(0.0);
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_reconstructs() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]);
        let sv = svd(&m);
        let sig = ComplexMatrix::real_diag(&sv.singular_values);
        let back = &(&sv.u * &sig) * &sv.v.adjoint();
        assert!(back.approx_eq(&m, 1e-12));
    }

    #[test]
    fn null_space_of_row() {
        // [2, -1] has null direction [1, 2]/sqrt(5)
        let m = ComplexMatrix::from_real(&[&[2.0, -1.0]]);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.cols(), 1);
        let prod = &m * &ns;
        assert!(prod.norm_max() < 1e-12);
        let ratio = ns[(1, 0)] / ns[(0, 0)];
        assert!((ratio.re - 2.0).abs() < 1e-12 && ratio.im.abs() < 1e-12);
    }

    #[test]
    fn null_space_of_identity_is_empty() {
        let ns = null_space(&ComplexMatrix::identity(2), 1e-9);
        assert_eq!(ns.cols(), 0);
    }

    #[test]
    fn null_space_of_ones_row() {
        let m = ComplexMatrix::from_real(&[&[1.0, 1.0]]);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.cols(), 1);
        let ratio = ns[(1, 0)] / ns[(0, 0)];
        assert!((ratio.re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_of_outer_product() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(rank(&m, 1e-9), 1);
        assert_eq!(rank(&ComplexMatrix::zeros(3, 2), 1e-9), 0);
        assert_eq!(rank(&ComplexMatrix::identity(3), 1e-9), 3);
    }

    #[test]
    fn wide_matrix_null_space_dimension() {
        let m = ComplexMatrix::from_real(&[&[1.0, 0.0, 1.0]]);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.cols(), 2);
        let gram = &ns.adjoint() * &ns;
        assert!(gram.approx_eq(&ComplexMatrix::identity(2), 1e-12));
    }
}
