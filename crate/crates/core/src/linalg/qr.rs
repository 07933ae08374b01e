//! General complex spectra: Householder reduction to Hessenberg form
//! followed by implicitly shifted QR, with optional accumulation of the
//! Schur factor and eigenvalue reordering for invariant-subspace work.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;

/// Schur decomposition `M = U T U*` with `T` upper triangular.
#[derive(Clone, Debug)]
pub struct SchurForm {
    pub t: ComplexMatrix,
    pub u: ComplexMatrix,
}

impl SchurForm {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Eigenvalue multiset of a square matrix.
pub fn spectrum(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let (t, _) = qr_algorithm(m, false)?;
    Ok((0..t.rows()).map(|i| t[(i, i)]).collect())
}

pub fn schur(m: &ComplexMatrix) -> Result<SchurForm> {
    let (t, u) = qr_algorithm(m, true)?;
    Ok(SchurForm {
        t,
        u: u.expect("accumulation requested"),
    })
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Householder similarity reduction to upper Hessenberg form.
fn hessenberg(m: &ComplexMatrix, accumulate: bool) -> (ComplexMatrix, Option<ComplexMatrix>) {
    let n = m.rows();
    let mut h = m.clone();
    let mut u = if accumulate {
        Some(ComplexMatrix::identity(n))
    } else {
        None
    };
    if n < 3 {
        return (h, u);
    }
    for k in 0..n - 2 {
        let mut x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x <= 1e-300 {
            continue;
        }
        let x0 = x[0];
        let sign = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let beta = -sign.scale(norm_x);
        x[0] -= beta;
        let vnorm2 = x.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vnorm2 <= 1e-300 {
            continue;
        }
        // P = I - 2 v v* / (v* v), applied as similarity P H P.
        let m0 = k + 1;
        for j in 0..n {
            let dot: Complex64 = (0..x.len()).map(|i| x[i].conj() * h[(m0 + i, j)]).sum();
            let f = dot.scale(2.0 / vnorm2);
            for i in 0..x.len() {
                let xi = x[i];
                h[(m0 + i, j)] -= xi * f;
            }
        }
        for i in 0..n {
            let dot: Complex64 = (0..x.len()).map(|jj| h[(i, m0 + jj)] * x[jj]).sum();
            let f = dot.scale(2.0 / vnorm2);
            for jj in 0..x.len() {
                let xj = x[jj].conj();
                h[(i, m0 + jj)] -= f * xj;
            }
        }
        if let Some(uu) = u.as_mut() {
            for i in 0..n {
                let dot: Complex64 = (0..x.len()).map(|jj| uu[(i, m0 + jj)] * x[jj]).sum();
                let f = dot.scale(2.0 / vnorm2);
                for jj in 0..x.len() {
                    let xj = x[jj].conj();
                    uu[(i, m0 + jj)] -= f * xj;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = zero();
        }
        h[(k + 1, k)] = beta;
    }
    (h, u)
}

/// Givens pair (c real, s complex) with [[c, s], [-conj(s), c]] [f, g]^T = [r, 0]^T.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fn_ = f.norm();
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, zero());
    }
    if fn_ == 0.0 {
        return (0.0, g.conj().scale(1.0 / gn));
    }
    let d = (fn_ * fn_ + gn * gn).sqrt();
    let c = fn_ / d;
    let s = (f / fn_) * g.conj().scale(1.0 / d);
    (c, s)
}

/// Wilkinson shift from the trailing 2x2 block of the active window.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    if hi == 0 {
        return h[(0, 0)];
    }
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det.scale(4.0)).sqrt();
    let l1 = (tr + disc).scale(0.5);
    let l2 = (tr - disc).scale(0.5);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn qr_algorithm(
    m: &ComplexMatrix,
    accumulate: bool,
) -> Result<(ComplexMatrix, Option<ComplexMatrix>)> {
    let n = m.ensure_square()?;
    if n == 0 {
        return Ok((m.clone(), accumulate.then(|| ComplexMatrix::identity(0))));
    }
    let (mut h, mut u) = hessenberg(m, accumulate);
    let hnorm = h.norm_fro().max(f64::MIN_POSITIVE);
    let ulp = 1e-15;

    let mut hi = n - 1;
    let mut stagnation = 0usize;
    let mut total_iters = 0usize;
    let max_total = 60 * n.max(4);

    'outer: loop {
        // Deflate negligible subdiagonals.
        for k in 1..=hi {
            let a = h[(k - 1, k - 1)].norm();
            let b = h[(k, k)].norm();
            let mut tst = a + b;
            if tst == 0.0 {
                tst = hnorm;
            }
            if h[(k, k - 1)].norm() <= ulp * tst {
                h[(k, k - 1)] = zero();
            }
        }
        // Shrink the active window past isolated eigenvalues.
        while hi > 0 && h[(hi, hi - 1)].norm() == 0.0 {
            hi -= 1;
            stagnation = 0;
        }
        if hi == 0 {
            break 'outer;
        }
        // Find the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }

        total_iters += 1;
        stagnation += 1;
        if total_iters > max_total {
            return Err(Error::NoConvergence(format!(
                "QR iteration budget exhausted at dimension {n}"
            )));
        }
        let mu = if stagnation.is_multiple_of(12) {
            // exceptional shift breaks symmetry-induced cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };

        // Implicit single-shift sweep over the active block.
        let mut x = h[(lo, lo)] - mu;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            // rows k, k+1
            for j in 0..n {
                let hkj = h[(k, j)];
                let hk1j = h[(k + 1, j)];
                h[(k, j)] = hkj.scale(c) + s * hk1j;
                h[(k + 1, j)] = -s.conj() * hkj + hk1j.scale(c);
            }
            // columns k, k+1
            for i in 0..n {
                let hik = h[(i, k)];
                let hik1 = h[(i, k + 1)];
                h[(i, k)] = hik.scale(c) + s.conj() * hik1;
                h[(i, k + 1)] = -s * hik + hik1.scale(c);
            }
            if let Some(uu) = u.as_mut() {
                for i in 0..n {
                    let uik = uu[(i, k)];
                    let uik1 = uu[(i, k + 1)];
                    uu[(i, k)] = uik.scale(c) + s.conj() * uik1;
                    uu[(i, k + 1)] = -s * uik + uik1.scale(c);
                }
            }
            if k + 2 <= hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }

    // Clean the strictly lower triangle.
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = zero();
        }
    }
    Ok((h, u))
}

/// Swap the adjacent diagonal entries `j, j+1` of a triangular Schur factor
/// by a unitary similarity, updating `u` accordingly.
fn swap_adjacent(t: &mut ComplexMatrix, u: &mut ComplexMatrix, j: usize) {
    let a = t[(j, j)];
    let b = t[(j, j + 1)];
    let c = t[(j + 1, j + 1)];
    let n = t.rows();
    // eigenvector of [[a, b], [0, c]] for eigenvalue c
    let x0 = b;
    let x1 = c - a;
    let nx = (x0.norm_sqr() + x1.norm_sqr()).sqrt();
    if nx <= 1e-300 {
        return; // equal eigenvalues, nothing to move
    }
    let g00 = x0.scale(1.0 / nx);
    let g10 = x1.scale(1.0 / nx);
    // G = [[g00, -conj(g10)], [g10, conj(g00)]] is unitary with first column x/|x|.
    let g01 = -g10.conj();
    let g11 = g00.conj();
    for i in 0..n {
        let tij = t[(i, j)];
        let tij1 = t[(i, j + 1)];
        t[(i, j)] = tij * g00 + tij1 * g10;
        t[(i, j + 1)] = tij * g01 + tij1 * g11;
    }
    for k in 0..n {
        let tjk = t[(j, k)];
        let tj1k = t[(j + 1, k)];
        t[(j, k)] = g00.conj() * tjk + g10.conj() * tj1k;
        t[(j + 1, k)] = g01.conj() * tjk + g11.conj() * tj1k;
    }
    for i in 0..n {
        let uij = u[(i, j)];
        let uij1 = u[(i, j + 1)];
        u[(i, j)] = uij * g00 + uij1 * g10;
        u[(i, j + 1)] = uij * g01 + uij1 * g11;
    }
    t[(j + 1, j)] = zero();
}

/// Reorder a Schur form so the selected eigenvalues occupy the leading
/// positions (relative order preserved). Returns the count selected.
pub fn reorder_schur(form: &mut SchurForm, select: &[bool]) -> usize {
    let n = form.t.rows();
    assert_eq!(select.len(), n, "selection length mismatch");
    let mut sel = select.to_vec();
    let mut target = 0usize;
    for _ in 0..n {
        let pos = match (target..n).find(|&i| sel[i]) {
            Some(p) => p,
            None => break,
        };
        for j in (target..pos).rev() {
            swap_adjacent(&mut form.t, &mut form.u, j);
            sel.swap(j, j + 1);
        }
        target += 1;
    }
    target
}
