//! Hermitian eigenproblems via cyclic Jacobi rotations, and the verdicts
//! built on them: inertia, semidefiniteness, Schur complements and the
//! congruence normalizing a nonsingular Hermitian matrix to its signature.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::{default_tol, Inertia};

/// Eigendecomposition of a Hermitian matrix: `M = U diag(values) U*`,
/// eigenvalues ascending, `U` unitary with eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi for complex Hermitian matrices.
///
/// The input must be Hermitian up to `tol * max(1, ||M||_inf)`; the
/// iteration itself runs on the exactly Hermitian part.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    let n = m.ensure_square()?;
    let dev = m.hermitian_deviation();
    let bound = tol * m.norm_inf().max(1.0);
    if dev > bound {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: bound,
        });
    }
    let mut a = m.hermitian_part();
    let mut u = ComplexMatrix::identity(n);
    let scale = a.norm_fro().max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-18 * scale {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // 2x2 annihilation: same tangent as real Jacobi on [[app, r], [r, aqq]].
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_ph = phase.scale(s);
                // A <- U* A U with U = [[c, s*phase], [-s*conj(phase), c]] on (p, q).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) - s_ph.conj() * akq;
                    a[(k, q)] = s_ph * akp + akq.scale(c);
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk.scale(c) - s_ph * aqk;
                    a[(q, k)] = s_ph.conj() * apk + aqk.scale(c);
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let ukp = u[(k, p)];
                    let ukq = u[(k, q)];
                    u[(k, p)] = ukp.scale(c) - s_ph.conj() * ukq;
                    u[(k, q)] = s_ph * ukp + ukq.scale(c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

/// Inertia of a square matrix: counts of eigenvalues in the open left half
/// plane, on the imaginary axis (within `tol`), and in the open right half
/// plane. Hermitian inputs go through the Jacobi path so the zero band is
/// applied to real eigenvalues directly.
pub fn inertia_of(m: &ComplexMatrix, tol: f64) -> Result<Inertia> {
    m.ensure_square()?;
    let herm_band = 1e-12 * m.norm_inf().max(1.0);
    let res = if m.hermitian_deviation() <= herm_band {
        let eig = hermitian_eig(m, 1e-9)?;
        count_signs(eig.values.iter().copied(), tol)
    } else {
        let eigs = crate::linalg::qr::spectrum(m)?;
        count_signs(eigs.iter().map(|z| z.re), tol)
    };
    Ok(res)
}

fn count_signs(values: impl Iterator<Item = f64>, tol: f64) -> Inertia {
    let mut inertia = Inertia {
        neg: 0,
        zero: 0,
        pos: 0,
    };
    for v in values {
        if v.abs() <= tol {
            inertia.zero += 1;
        } else if v < 0.0 {
            inertia.neg += 1;
        } else {
            inertia.pos += 1;
        }
    }
    inertia
}

/// Definiteness classification relative to a tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsdStatus {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
    NegativeSemidefinite,
    NegativeDefinite,
}

/// Verdict of a semidefiniteness test; a pure function of the extreme
/// eigenvalues relative to the tolerance actually used.
#[derive(Clone, Copy, Debug)]
pub struct PsdVerdict {
    pub status: PsdStatus,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub tolerance_used: f64,
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(
            self.status,
            PsdStatus::PositiveDefinite | PsdStatus::PositiveSemidefinite
        )
    }
}

/// Semidefiniteness test for a Hermitian matrix.
pub fn psd_check(m: &ComplexMatrix, tol: f64) -> Result<PsdVerdict> {
    let eig = hermitian_eig(m, 1e-9)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    let max = eig.values.last().copied().unwrap_or(0.0);
    let status = if min > tol {
        PsdStatus::PositiveDefinite
    } else if min >= -tol {
        PsdStatus::PositiveSemidefinite
    } else if max < -tol {
        PsdStatus::NegativeDefinite
    } else if max <= tol {
        PsdStatus::NegativeSemidefinite
    } else {
        PsdStatus::Indefinite
    };
    Ok(PsdVerdict {
        status,
        min_eigenvalue: min,
        max_eigenvalue: max,
        tolerance_used: tol,
    })
}

/// Schur complement of the lower-right block: for Hermitian
/// `M = [[A, B], [B*, D]]` with `A` of size `split`, returns `A - B D^{-1} B*`.
pub fn schur_complement(m: &ComplexMatrix, split: usize) -> Result<ComplexMatrix> {
    let n = m.ensure_square()?;
    if split > n {
        return Err(Error::Dimension(format!(
            "split {split} exceeds dimension {n}"
        )));
    }
    let k = n - split;
    let a = m.block(0, 0, split, split);
    let b = m.block(0, split, split, k);
    let d = m.block(split, split, k, k);
    if k == 0 {
        return Ok(a);
    }
    let x = d
        .solve(&b.adjoint())
        .map_err(|_| Error::Singular("lower-right block is singular".into()))?;
    let res = &a - &(&b * &x);
    Ok(res.hermitian_part())
}

/// Congruence `V* H V = E_nu = diag(-I_nu, I_{r-nu})` for Hermitian
/// nonsingular `H`; returns `(V, nu)`.
pub fn congruence_to_signature(h: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, usize)> {
    let n = h.ensure_square()?;
    let eig = hermitian_eig(h, 1e-9)?;
    if eig.values.iter().any(|&l| l.abs() <= tol) {
        return Err(Error::Singular(
            "matrix has an eigenvalue inside the tolerance band".into(),
        ));
    }
    // Ascending eigenvalues put the negative ones first, so scaling the
    // eigenvector columns by |lambda|^{-1/2} lands exactly on E_nu.
    let nu = eig.values.iter().filter(|&&l| l < 0.0).count();
    let v = ComplexMatrix::from_fn(n, n, |i, j| {
        eig.vectors[(i, j)].scale(1.0 / eig.values[j].abs().sqrt())
    });
    Ok((v, nu))
}

/// Signature matrix E_{nu,l} = diag(-I_nu, I_{l-nu}).
pub fn signature_matrix(nu: usize, l: usize) -> ComplexMatrix {
    assert!(nu <= l, "signature index exceeds dimension");
    let mut e = ComplexMatrix::identity(l);
    for i in 0..nu {
        e[(i, i)] = Complex64::new(-1.0, 0.0);
    }
    e
}

/// Default tolerance-scaled PSD verdict.
pub fn psd_check_default(m: &ComplexMatrix) -> Result<PsdVerdict> {
    psd_check(m, default_tol(m))
}
