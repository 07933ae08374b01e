//! State-space realizations (A, B, C, D), the packed system matrix L with
//! its output partition, transfer-function evaluation, exact scalar
//! rational recovery, and the Kalman-rank machinery deciding minimality.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, spectrum, ComplexMatrix};
use crate::poly::Poly;

/// Realization quadruple: `Psi(s) = C (sI - A)^{-1} B + D` with `A` n-by-n,
/// `B` and `C*` n-by-p, `D` p-by-p.
///
/// ```
/// use posreal::{ComplexMatrix, Complex64, Realization};
///
/// // 1/(s + 1)
/// let re = Realization::new(
///     ComplexMatrix::real_diag(&[-1.0]),
///     ComplexMatrix::from_real(&[&[1.0]]),
///     ComplexMatrix::from_real(&[&[1.0]]),
///     ComplexMatrix::zeros(1, 1),
/// )
/// .unwrap();
/// let v = re.evaluate(Complex64::new(1.0, 0.0)).unwrap();
/// assert!((v[(0, 0)].re - 0.5).abs() < 1e-12);
/// ```
#[derive(Clone, Debug)]
pub struct Realization {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
}

/// The (n+p)-square block matrix `L = (A B; C D)` together with the output
/// dimension marking the partition.
#[derive(Clone, Debug)]
pub struct SystemMatrix {
    matrix: ComplexMatrix,
    outputs: usize,
}

impl Realization {
    pub fn new(
        a: ComplexMatrix,
        b: ComplexMatrix,
        c: ComplexMatrix,
        d: ComplexMatrix,
    ) -> Result<Self> {
        let n = a.ensure_square()?;
        let p = d.ensure_square()?;
        if b.rows() != n || b.cols() != p || c.rows() != p || c.cols() != n {
            return Err(Error::Dimension(format!(
                "incoherent realization blocks: A {n}x{n}, B {}x{}, C {}x{}, D {p}x{p}",
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.d.rows()
    }

    /// Pack into the system matrix `L = (A B; C D)`.
    pub fn assemble(&self) -> SystemMatrix {
        let n = self.state_dim();
        let p = self.output_dim();
        let mut l = ComplexMatrix::zeros(n + p, n + p);
        l.set_block(0, 0, &self.a);
        l.set_block(0, n, &self.b);
        l.set_block(n, 0, &self.c);
        l.set_block(n, n, &self.d);
        SystemMatrix {
            matrix: l,
            outputs: p,
        }
    }

    /// Pointwise transfer-function value `C (sI - A)^{-1} B + D` by linear
    /// solve; `s` must stay away from the spectrum of `A`. A point at or
    /// numerically indistinguishable from a pole is reported as such.
    pub fn evaluate(&self, s: Complex64) -> Result<ComplexMatrix> {
        let n = self.state_dim();
        if n == 0 {
            return Ok(self.d.clone());
        }
        let si_a = &ComplexMatrix::identity(n).scale(s) - &self.a;
        let x = si_a
            .solve_conditioned(&self.b, 1e-13)
            .map_err(|_| Error::Pole { re: s.re, im: s.im })?;
        Ok(&(&self.c * &x) + &self.d)
    }

    /// Exact scalar rational form (p = 1 only): denominator is the monic
    /// characteristic polynomial of A, numerator is
    /// `C adj(sI - A) B + D det(sI - A)`. No pole-zero cancellation is
    /// performed, so non-minimality stays visible; see
    /// [`ScalarRational::reduced`].
    pub fn scalar_rational(&self) -> Result<ScalarRational> {
        if self.output_dim() != 1 {
            return Err(Error::Invalid(
                "scalar rational form requires a single output; evaluate pointwise instead".into(),
            ));
        }
        let (num, den) = if let Some((num, den)) = self.faddeev_leverrier_exact() {
            (num, den)
        } else {
            self.faddeev_leverrier_float()
        };
        Ok(ScalarRational { num, den })
    }

    /// Faddeev-LeVerrier in i128 when every entry is a small integer;
    /// returns None otherwise (fixture matrices take this path so the
    /// coefficient checks are exact).
    fn faddeev_leverrier_exact(&self) -> Option<(Poly, Poly)> {
        let n = self.state_dim();
        let to_int = |m: &ComplexMatrix| -> Option<Vec<i128>> {
            m.entries()
                .iter()
                .map(|z| {
                    if z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() < 1e15 {
                        Some(z.re as i128)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let a = to_int(&self.a)?;
        let b = to_int(&self.b)?;
        let c = to_int(&self.c)?;
        let d = to_int(&self.d)?[0];

        let idx = |i: usize, j: usize| i * n + j;
        let mat_mul = |x: &[i128], y: &[i128]| -> Option<Vec<i128>> {
            let mut out = vec![0i128; n * n];
            for i in 0..n {
                for k in 0..n {
                    let xv = x[idx(i, k)];
                    if xv == 0 {
                        continue;
                    }
                    for j in 0..n {
                        out[idx(i, j)] =
                            out[idx(i, j)].checked_add(xv.checked_mul(y[idx(k, j)])?)?;
                    }
                }
            }
            Some(out)
        };

        // den coefficients ascending; adj(sI - A) = sum_k M_k s^{n-k}
        let mut den = vec![0i128; n + 1];
        den[n] = 1;
        let mut num = vec![0i128; n + 1];
        let mut mk: Vec<i128> = {
            let mut id = vec![0i128; n * n];
            for i in 0..n {
                id[idx(i, i)] = 1;
            }
            id
        };
        for k in 1..=n {
            // numerator contribution C M_k B at degree n-k
            let mut cmb: i128 = 0;
            for i in 0..n {
                for j in 0..n {
                    cmb = cmb.checked_add(c[i].checked_mul(mk[idx(i, j)])?.checked_mul(b[j])?)?;
                }
            }
            num[n - k] = cmb;
            let am = mat_mul(&a, &mk)?;
            let mut tr: i128 = 0;
            for i in 0..n {
                tr = tr.checked_add(am[idx(i, i)])?;
            }
            debug_assert_eq!(tr % (k as i128), 0, "Faddeev-LeVerrier trace not divisible");
            let ck = -tr / (k as i128);
            den[n - k] = ck;
            mk = am;
            for i in 0..n {
                mk[idx(i, i)] = mk[idx(i, i)].checked_add(ck)?;
            }
        }
        // num += D * den
        for i in 0..=n {
            num[i] = num[i].checked_add(d.checked_mul(den[i])?)?;
        }
        let to_poly =
            |v: &[i128]| Poly::from_real(&v.iter().map(|&x| x as f64).collect::<Vec<_>>());
        Some((to_poly(&num), to_poly(&den)))
    }

    fn faddeev_leverrier_float(&self) -> (Poly, Poly) {
        let n = self.state_dim();
        let mut den = vec![Complex64::new(0.0, 0.0); n + 1];
        den[n] = Complex64::new(1.0, 0.0);
        let mut num = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut mk = ComplexMatrix::identity(n);
        for k in 1..=n {
            let cmb = (&(&self.c * &mk) * &self.b)[(0, 0)];
            num[n - k] = cmb;
            let am = &self.a * &mk;
            let ck = -am.trace() / (k as f64);
            den[n - k] = ck;
            mk = am;
            for i in 0..n {
                mk[(i, i)] += ck;
            }
        }
        let d0 = self.d[(0, 0)];
        for i in 0..=n {
            num[i] += d0 * den[i];
        }
        (Poly::new(num), Poly::new(den))
    }

    /// Similarity `(V^{-1} A V, V^{-1} B, C V, D)`; the transfer function is
    /// unchanged.
    pub fn transform(&self, vhat: &ComplexMatrix) -> Result<Realization> {
        let n = self.state_dim();
        if vhat.rows() != n || vhat.cols() != n {
            return Err(Error::Dimension("transform matrix must be n-by-n".into()));
        }
        let vinv = vhat
            .inverse()
            .map_err(|_| Error::Singular("coordinate transform is singular".into()))?;
        Realization::new(
            &(&vinv * &self.a) * vhat,
            &vinv * &self.b,
            &self.c * vhat,
            self.d.clone(),
        )
    }

    /// McMillan degree: numerical rank of the observability-controllability
    /// (Hankel) product — the dimension of the controllable-and-observable
    /// subsystem. The realization is minimal iff this equals the state
    /// dimension.
    pub fn mcmillan_degree(&self, tol: f64) -> usize {
        let n = self.state_dim();
        if n == 0 {
            return 0;
        }
        let h = &observability_matrix(&self.a, &self.c) * &controllability_matrix(&self.a, &self.b);
        linalg::rank(&h, tol)
    }

    pub fn is_minimal(&self, tol: f64) -> bool {
        self.mcmillan_degree(tol) == self.state_dim()
    }

    /// Poles of the minimal part of a scalar realization: denominator roots
    /// after cancellation.
    pub fn reduced_poles(&self, tol: f64) -> Result<Vec<Complex64>> {
        let sr = self.scalar_rational()?;
        Ok(sr.reduced(tol).den.roots(1e-12))
    }
}

impl SystemMatrix {
    pub fn new(matrix: ComplexMatrix, outputs: usize) -> Result<Self> {
        let r = matrix.ensure_square()?;
        if outputs >= r {
            return Err(Error::Dimension(format!(
                "output partition {outputs} leaves no state in a {r}x{r} system matrix"
            )));
        }
        Ok(Self { matrix, outputs })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn state_dim(&self) -> usize {
        self.size() - self.outputs
    }

    /// Split back into the realization blocks; lossless inverse of
    /// [`Realization::assemble`].
    pub fn partition(&self) -> Realization {
        let n = self.state_dim();
        let p = self.outputs;
        Realization {
            a: self.matrix.block(0, 0, n, n),
            b: self.matrix.block(0, n, n, p),
            c: self.matrix.block(n, 0, p, n),
            d: self.matrix.block(n, n, p, p),
        }
    }
}

/// Convex combination `(1-t) L1 + t L2` of equally partitioned system
/// matrices.
pub fn convex_combine(l1: &SystemMatrix, l2: &SystemMatrix, t: f64) -> Result<SystemMatrix> {
    if l1.size() != l2.size() || l1.outputs != l2.outputs {
        return Err(Error::Dimension(
            "convex combination needs matching partitions".into(),
        ));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Invalid(format!(
            "combination weight {t} outside [0, 1]"
        )));
    }
    let m = &l1.matrix.scale_re(1.0 - t) + &l2.matrix.scale_re(t);
    Ok(SystemMatrix {
        matrix: m,
        outputs: l1.outputs,
    })
}

/// Controllability matrix `[B, AB, ..., A^{n-1} B]` (n-by-np).
pub fn controllability_matrix(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let p = b.cols();
    let mut out = ComplexMatrix::zeros(n, n * p);
    let mut akb = b.clone();
    for k in 0..n {
        out.set_block(0, k * p, &akb);
        akb = a * &akb;
    }
    out
}

/// Observability matrix, the adjoint Krylov stack: `obsv(A, C) = ctrb(A*, C*)*`.
pub fn observability_matrix(a: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    controllability_matrix(&a.adjoint(), &c.adjoint()).adjoint()
}

/// Dimension of the unobservable subspace of the pair `(A, Q)`:
/// `m = n - rank(obsv(A, Q))`. Zero iff the pair is observable.
pub fn unobservable_dim(a: &ComplexMatrix, qhat: &ComplexMatrix, tol: f64) -> Result<usize> {
    let n = a.ensure_square()?;
    if qhat.rows() != n || qhat.cols() != n {
        return Err(Error::Dimension(
            "pair must share the state dimension".into(),
        ));
    }
    if n == 0 {
        return Ok(0);
    }
    Ok(n - linalg::rank(&observability_matrix(a, qhat), tol))
}

/// Scalar rational function: coefficient lists in ascending degree, with the
/// denominator the monic characteristic polynomial of A.
#[derive(Clone, Debug)]
pub struct ScalarRational {
    pub num: Poly,
    pub den: Poly,
}

impl ScalarRational {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// View with common numerator/denominator roots cancelled (pairing
    /// within `root_tol`); denominator kept monic, numerator scaled
    /// consistently.
    pub fn reduced(&self, root_tol: f64) -> ScalarRational {
        let nd = self.num.degree(1e-12);
        let num_lead = self
            .num
            .coeffs
            .get(nd)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0));
        if self.num.is_zero(1e-12) {
            return ScalarRational {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let mut num_roots = self.num.roots(1e-12);
        let mut den_roots = self.den.roots(1e-12);
        let scale = 1.0 + den_roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let mut keep_den: Vec<Complex64> = Vec::new();
        'outer: while let Some(dr) = den_roots.pop() {
            for (i, nr) in num_roots.iter().enumerate() {
                if (nr - dr).norm() <= root_tol * scale {
                    num_roots.remove(i);
                    continue 'outer;
                }
            }
            keep_den.push(dr);
        }
        keep_den.reverse();
        let den = Poly::from_roots(&keep_den);
        let num = Poly::from_roots(&num_roots).scale(num_lead);
        ScalarRational { num, den }
    }
}

/// Spectrum of the state matrix (pole candidates of the transfer function).
pub fn pole_candidates(re: &Realization) -> Result<Vec<Complex64>> {
    spectrum(&re.a)
}
