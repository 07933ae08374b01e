//! Static output feedback: feasibility conditions for rendering a strictly
//! proper system generalized positive, search for the Hermitian factor,
//! scalar-gain synthesis by bisection, and the cone-invariance check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermbasis;
use crate::linalg::{self, default_tol, hermitian_eig, psd_check, signature_matrix, ComplexMatrix};
use crate::prl::{check_certificate, LyapunovCertificate};
use crate::realization::{Realization, SystemMatrix};
use crate::rng::DetRng;

/// Strictly proper plant `xdot = Ax + Bu`, `y = Cx` (no feedthrough).
#[derive(Clone, Debug)]
pub struct FeedbackProblem {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
}

impl FeedbackProblem {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix) -> Result<Self> {
        let n = a.ensure_square()?;
        if b.rows() != n || c.cols() != n || b.cols() != c.rows() {
            return Err(Error::Dimension(
                "incoherent feedback problem blocks".into(),
            ));
        }
        Ok(Self { a, b, c })
    }

    pub fn from_system_matrix(sm: &SystemMatrix, tol: f64) -> Result<Self> {
        let re = sm.partition();
        if re.d.norm_max() > tol {
            return Err(Error::Invalid(
                "feedback scope requires zero feedthrough".into(),
            ));
        }
        Self::new(re.a, re.b, re.c)
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.c.rows()
    }

    pub fn open_loop(&self) -> Realization {
        Realization::new(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            ComplexMatrix::zeros(self.output_dim(), self.output_dim()),
        )
        .expect("validated dimensions")
    }

    /// Closed loop `(A + BKC, B, C, 0)` under `u = Ky + u'`.
    pub fn closed_loop(&self, gain: &ComplexMatrix) -> Result<Realization> {
        let p = self.output_dim();
        if gain.rows() != p || gain.cols() != p {
            return Err(Error::Dimension("gain must be p-by-p".into()));
        }
        let a_cl = &self.a + &(&(&self.b * gain) * &self.c);
        Realization::new(
            a_cl,
            self.b.clone(),
            self.c.clone(),
            ComplexMatrix::zeros(p, p),
        )
    }
}

/// The two feasibility conditions for a candidate Hermitian factor:
/// (a) `C = -B* Hhat` exactly (relative tolerance), and
/// (b) `v* (A Hhat^{-1} + Hhat^{-1} A*) v >= 0` on the null space of `B*`.
pub fn check_conditions(
    fp: &FeedbackProblem,
    hhat: &ComplexMatrix,
    tol: f64,
) -> Result<(bool, bool)> {
    let n = fp.state_dim();
    if hhat.rows() != n || hhat.cols() != n {
        return Err(Error::Dimension("factor must be n-by-n".into()));
    }
    let eig = hermitian_eig(hhat, 1e-9)?;
    let floor = 1e-9 * hhat.norm_inf().max(1.0);
    if eig.values.iter().any(|&l| l.abs() <= floor) {
        return Err(Error::Singular("factor must be nonsingular".into()));
    }
    let defect = &fp.c + &(&fp.b.adjoint() * hhat);
    let cond_a = defect.norm_fro() <= tol * (1.0 + fp.c.norm_fro());

    let cond_b = condition_b_min(fp, hhat)?.is_none_or(|min| min >= -tol);
    Ok((cond_a, cond_b))
}

/// Minimum eigenvalue of the null-space-restricted Lyapunov form; `None`
/// when `B*` has a trivial null space (condition vacuous).
fn condition_b_min(fp: &FeedbackProblem, hhat: &ComplexMatrix) -> Result<Option<f64>> {
    let nbasis = linalg::null_space(&fp.b.adjoint(), 1e-9);
    if nbasis.cols() == 0 {
        return Ok(None);
    }
    let hinv = hhat
        .inverse()
        .map_err(|_| Error::Singular("factor must be nonsingular".into()))?
        .hermitian_part();
    let form = (&(&fp.a * &hinv) + &(&hinv * &fp.a.adjoint())).hermitian_part();
    let restricted = (&(&nbasis.adjoint() * &form) * &nbasis).hermitian_part();
    let eig = hermitian_eig(&restricted, 1e-9)?;
    Ok(eig.values.first().copied())
}

/// Result of the factor search.
#[derive(Clone, Debug)]
pub enum HhatSearch {
    Found(ComplexMatrix),
    /// The linear condition `C = -B* Hhat` has no Hermitian solution.
    InfeasibleConditionA,
    /// The affine set is nonempty but the restricted form stays indefinite.
    InfeasibleConditionB {
        best_min_eig: f64,
        best_hhat: ComplexMatrix,
    },
}

impl HhatSearch {
    pub fn found(&self) -> Option<&ComplexMatrix> {
        match self {
            HhatSearch::Found(h) => Some(h),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HhatSearchOptions {
    pub tol: Option<f64>,
    pub seed: u64,
    pub max_iters: usize,
}

impl Default for HhatSearchOptions {
    fn default() -> Self {
        Self {
            tol: None,
            seed: 0,
            max_iters: 300,
        }
    }
}

/// Solve the equality constraint exactly (least squares plus the Hermitian
/// null-space of the map `Hhat -> B* Hhat`), then ascend condition (b)'s
/// minimum eigenvalue over the free part. Every candidate is re-projected
/// onto the affine set, so condition (a) never drifts.
pub fn find_feedback_hhat(fp: &FeedbackProblem, opts: &HhatSearchOptions) -> Result<HhatSearch> {
    let n = fp.state_dim();
    let tol = opts.tol.unwrap_or_else(|| default_tol(&fp.a));
    // Constraint in adjoint form: Hhat B = -C*.
    let amat = hermbasis::constraint_matrix(&fp.b, n);
    let rhs_mat = -&fp.c.adjoint();
    let rhs = hermbasis::constraint_rhs(&rhs_mat);
    let rhs_m = ComplexMatrix::from_fn(rhs.len(), 1, |i, _| Complex64::new(rhs[i], 0.0));
    let particular = linalg::pinv_solve(&amat, &rhs_m, 1e-10);
    let residual = (&(&amat * &particular) - &rhs_m).norm_fro();
    if residual > 1e-7 * (1.0 + rhs_m.norm_fro()) {
        return Ok(HhatSearch::InfeasibleConditionA);
    }
    let project = |theta: &[f64]| -> Vec<f64> {
        let t = ComplexMatrix::from_fn(theta.len(), 1, |i, _| Complex64::new(theta[i], 0.0));
        let defect = &(&amat * &t) - &rhs_m;
        let corr = linalg::pinv_solve(&amat, &defect, 1e-10);
        (0..theta.len())
            .map(|i| theta[i] - corr[(i, 0)].re)
            .collect()
    };
    let project_dir = |g: &[f64]| -> Vec<f64> {
        let t = ComplexMatrix::from_fn(g.len(), 1, |i, _| Complex64::new(g[i], 0.0));
        let img = &amat * &t;
        let corr = linalg::pinv_solve(&amat, &img, 1e-10);
        (0..g.len()).map(|i| g[i] - corr[(i, 0)].re).collect()
    };

    let nbasis = linalg::null_space(&fp.b.adjoint(), 1e-9);
    let vacuous_b = nbasis.cols() == 0;

    let mut rng = DetRng::new(opts.seed);
    let mut best_min = f64::NEG_INFINITY;
    let mut best_hhat = ComplexMatrix::zeros(n, n);

    // Seed from the signatures with the most negative inertia first (a
    // negative definite factor additionally proves the closed loop
    // positive), then the min-norm particular solution.
    let mut seeds: Vec<Vec<f64>> = (0..=n)
        .rev()
        .map(|nu| project(&hermbasis::to_params(&signature_matrix(nu, n))))
        .collect();
    seeds.push(
        (0..hermbasis::param_dim(n))
            .map(|i| particular[(i, 0)].re)
            .collect(),
    );

    for seed_theta in seeds {
        let mut theta = seed_theta;
        for iter in 0..opts.max_iters {
            let mut hhat = hermbasis::from_params(&theta, n);
            // keep the iterate invertible: nudge inside the affine set
            let mut guard = 0;
            while hhat_is_near_singular(&hhat) && guard < 8 {
                let dir: Vec<f64> = (0..theta.len()).map(|_| rng.normal()).collect();
                let dir = project_dir(&dir);
                let dnorm: f64 = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
                let eps = 1e-3 * (1.0 + hhat.norm_fro());
                if dnorm > 1e-14 {
                    for (t, d) in theta.iter_mut().zip(&dir) {
                        *t += eps * d / dnorm;
                    }
                }
                theta = project(&theta);
                hhat = hermbasis::from_params(&theta, n);
                guard += 1;
            }
            if hhat_is_near_singular(&hhat) {
                break;
            }
            if vacuous_b {
                return Ok(HhatSearch::Found(hhat));
            }
            let min = condition_b_min(fp, &hhat)?.expect("non-vacuous");
            if min > best_min {
                best_min = min;
                best_hhat = hhat.clone();
            }
            if min >= -tol {
                return Ok(HhatSearch::Found(hhat));
            }
            if iter + 1 == opts.max_iters {
                break;
            }
            // ascend: subgradient of the restricted minimum eigenvalue
            let hinv = hhat
                .inverse()
                .map_err(|_| Error::Singular("iterate".into()))?;
            let form = (&(&fp.a * &hinv) + &(&hinv * &fp.a.adjoint())).hermitian_part();
            let restricted = (&(&nbasis.adjoint() * &form) * &nbasis).hermitian_part();
            let eig = hermitian_eig(&restricted, 1e-9)?;
            let v0: Vec<Complex64> = (0..restricted.rows())
                .map(|i| eig.vectors[(i, 0)])
                .collect();
            let y = nbasis.mul_vec(&v0);
            let ym = ComplexMatrix::from_fn(n, 1, |i, _| y[i]);
            let z = &hinv * &ym;
            let w = &hinv * &(&fp.a.adjoint() * &ym);
            let mut grad = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    grad[(i, j)] = -(z[(i, 0)] * w[(j, 0)].conj() + w[(i, 0)] * z[(j, 0)].conj());
                }
            }
            let g = project_dir(&hermbasis::to_params(&grad.hermitian_part()));
            let gnorm2: f64 = g.iter().map(|x| x * x).sum();
            if gnorm2 <= 1e-28 {
                break;
            }
            let step = (0.0 - min) / gnorm2;
            for (t, gi) in theta.iter_mut().zip(&g) {
                *t += step * gi;
            }
            theta = project(&theta);
        }
    }
    Ok(HhatSearch::InfeasibleConditionB {
        best_min_eig: best_min,
        best_hhat,
    })
}

fn hhat_is_near_singular(hhat: &ComplexMatrix) -> bool {
    match hermitian_eig(hhat, 1e-9) {
        Ok(eig) => {
            let floor = 1e-6 * hhat.norm_inf().max(1e-6);
            eig.values.iter().any(|&l| l.abs() < floor)
        }
        Err(_) => true,
    }
}

/// Synthesized feedback: the scalar gain family `K = -k_star I_p`, the
/// closed loop, and its Lyapunov certificate under the same factor.
#[derive(Clone, Debug)]
pub struct FeedbackCertificate {
    pub hhat: ComplexMatrix,
    pub gain: ComplexMatrix,
    /// Magnitude of the synthesized scalar gain: `K = -k_star I_p`.
    pub k_star: f64,
    pub closed_loop: Realization,
    pub certificate: LyapunovCertificate,
    /// Bisection evaluations `(kappa, min_eig)` in evaluation order.
    pub trace: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct SynthesisOptions {
    pub tol: Option<f64>,
    pub k_max: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            tol: None,
            k_max: 1e6,
        }
    }
}

/// Smallest `kappa >= 0` with
/// `W(kappa) = A Hhat^{-1} + Hhat^{-1} A* + kappa B B* >= -tol`
/// by bisection (the minimum eigenvalue is nondecreasing in `kappa`),
/// then `K = -(kappa/2) I_p`.
pub fn synthesize_gain(
    fp: &FeedbackProblem,
    hhat: &ComplexMatrix,
    opts: &SynthesisOptions,
) -> Result<FeedbackCertificate> {
    let tol = opts.tol.unwrap_or_else(|| default_tol(&fp.a));
    let (cond_a, cond_b) = check_conditions(fp, hhat, tol.max(1e-9))?;
    if !cond_a || !cond_b {
        return Err(Error::Invalid(format!(
            "feasibility conditions not met (a: {cond_a}, b: {cond_b})"
        )));
    }
    let hinv = hhat
        .inverse()
        .map_err(|_| Error::Singular("factor".into()))?
        .hermitian_part();
    let base = (&(&fp.a * &hinv) + &(&hinv * &fp.a.adjoint())).hermitian_part();
    let bbs = (&fp.b * &fp.b.adjoint()).hermitian_part();
    let mut trace: Vec<(f64, f64)> = Vec::new();
    let min_eig_at = |kappa: f64, trace: &mut Vec<(f64, f64)>| -> Result<f64> {
        let w = (&base + &bbs.scale_re(kappa)).hermitian_part();
        let eig = hermitian_eig(&w, 1e-9)?;
        let min = eig.values[0];
        trace.push((kappa, min));
        Ok(min)
    };

    let kappa_star = if min_eig_at(0.0, &mut trace)? >= -tol {
        0.0
    } else {
        let mut hi = 1.0;
        while min_eig_at(hi, &mut trace)? < -tol {
            hi *= 2.0;
            if hi > 2.0 * opts.k_max {
                return Err(Error::Invalid(format!(
                    "no gain below k_max = {:.1e} renders the closed loop feasible",
                    opts.k_max
                )));
            }
        }
        let mut lo = hi / 2.0;
        if hi <= 1.0 {
            lo = 0.0;
        }
        for _ in 0..200 {
            if hi - lo <= 1e-14 * hi.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if min_eig_at(mid, &mut trace)? >= -tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };

    let p = fp.output_dim();
    let k_star = kappa_star / 2.0;
    let gain = ComplexMatrix::identity(p).scale_re(-k_star);
    let closed_loop = fp.closed_loop(&gain)?;
    // the closed-loop residual is the congruence of W by Hhat
    let cert_tol = tol * (1.0 + hhat.norm_inf()).powi(2) * 4.0;
    let certificate = check_certificate(&closed_loop, hhat, cert_tol)?;
    Ok(FeedbackCertificate {
        hhat: hhat.clone(),
        gain,
        k_star,
        closed_loop,
        certificate,
        trace,
    })
}

/// Cone invariance under feedback: a system matrix certified with `Hhat`
/// stays certified with the same factor after closing the loop with any
/// gain whose Hermitian part is negative semidefinite. Self-test predicate.
pub fn invariance_check(
    sm: &SystemMatrix,
    hhat: &ComplexMatrix,
    gain: &ComplexMatrix,
    tol: f64,
) -> Result<bool> {
    let fp = FeedbackProblem::from_system_matrix(sm, tol.max(1e-12))?;
    let open_cert = check_certificate(&fp.open_loop(), hhat, tol)?;
    let ksym = (gain + &gain.adjoint()).hermitian_part();
    let kv = psd_check(&ksym, tol)?;
    if kv.max_eigenvalue > tol {
        return Err(Error::Invalid(
            "gain must have negative semidefinite Hermitian part".into(),
        ));
    }
    let closed = fp.closed_loop(gain)?;
    let cert_tol = open_cert.tolerance_used * (1.0 + hhat.norm_inf()).powi(2) * 4.0
        + tol * (1.0 + gain.norm_inf());
    Ok(check_certificate(&closed, hhat, cert_tol).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn example(a: f64, b1: f64, b2: f64) -> FeedbackProblem {
        FeedbackProblem::from_system_matrix(&fixtures::feedback_example(a, b1, b2), 1e-12).unwrap()
    }

    fn e1() -> ComplexMatrix {
        ComplexMatrix::real_diag(&[-1.0, 1.0])
    }

    #[test]
    fn conditions_on_the_worked_example() {
        let fp = example(1.0, 2.0, 1.0);
        let (a, b) = check_conditions(&fp, &e1(), 1e-9).unwrap();
        assert!(a && b); // 2a(b1^2 - b2^2) = 6 >= 0

        let fp = example(-1.0, 2.0, 1.0);
        let (a, b) = check_conditions(&fp, &e1(), 1e-9).unwrap();
        assert!(a);
        assert!(!b); // 2a(b1^2 - b2^2) = -6 < 0
    }

    #[test]
    fn condition_b_vacuous_for_square_nonsingular_b() {
        let fp = FeedbackProblem::new(
            ComplexMatrix::from_real(&[&[5.0, 0.0], &[0.0, 5.0]]),
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(2).scale_re(-1.0),
        )
        .unwrap();
        let (a, b) = check_conditions(&fp, &ComplexMatrix::identity(2), 1e-9).unwrap();
        assert!(a && b);
    }

    #[test]
    fn find_hhat_on_the_worked_example() {
        let fp = example(1.0, 2.0, 1.0);
        let found = find_feedback_hhat(&fp, &HhatSearchOptions::default()).unwrap();
        let hhat = found.found().expect("feasible instance");
        let (a, b) = check_conditions(&fp, hhat, 1e-7).unwrap();
        assert!(a && b);
    }

    #[test]
    fn find_hhat_negative_definite_when_c_is_b_adjoint() {
        // C = B*, A dissipative: Hhat = -I satisfies both conditions.
        let fp = FeedbackProblem::new(
            ComplexMatrix::from_real(&[&[-1.0, 0.5], &[-0.5, -1.0]]),
            ComplexMatrix::from_real(&[&[1.0], &[0.0]]),
            ComplexMatrix::from_real(&[&[1.0, 0.0]]),
        )
        .unwrap();
        let found = find_feedback_hhat(&fp, &HhatSearchOptions::default()).unwrap();
        let hhat = found.found().expect("feasible");
        let eig = hermitian_eig(hhat, 1e-9).unwrap();
        assert!(
            eig.values.iter().all(|&l| l < 0.0),
            "expected negative definite factor"
        );
        let cert = synthesize_gain(&fp, hhat, &SynthesisOptions::default()).unwrap();
        assert!(cert.certificate.proves_positive());
    }

    #[test]
    fn find_hhat_reports_inconsistent_linear_condition() {
        // first row of Hhat would need an imaginary diagonal entry
        let fp = FeedbackProblem::new(
            ComplexMatrix::identity(2).scale_re(-1.0),
            ComplexMatrix::from_real(&[&[1.0], &[0.0]]),
            ComplexMatrix::from_rows(&[vec![Complex64::new(0.0, 1.0), Complex64::new(5.0, 0.0)]])
                .unwrap(),
        )
        .unwrap();
        let found = find_feedback_hhat(&fp, &HhatSearchOptions::default()).unwrap();
        assert!(matches!(found, HhatSearch::InfeasibleConditionA));
    }

    #[test]
    fn synthesis_matches_the_threshold() {
        let fp = example(1.0, 2.0, 1.0);
        let cert = synthesize_gain(&fp, &e1(), &SynthesisOptions::default()).unwrap();
        assert!(
            (cert.k_star - 1.0 / 3.0).abs() <= 1e-6,
            "k_star = {}",
            cert.k_star
        );
        // trace is monotone in kappa
        let mut sorted = cert.trace.clone();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in sorted.windows(2) {
            assert!(w[0].1 <= w[1].1 + 1e-12);
        }
    }

    #[test]
    fn gain_at_half_certifies_with_known_residual() {
        let fp = example(1.0, 2.0, 1.0);
        let gain = ComplexMatrix::from_real(&[&[-0.5]]);
        let closed = fp.closed_loop(&gain).unwrap();
        let cert = check_certificate(&closed, &e1(), 1e-9).unwrap();
        let block = cert.residual.block(0, 0, 2, 2);
        let expected = ComplexMatrix::from_real(&[&[2.0, -2.0], &[-2.0, 3.0]]);
        assert!(block.approx_eq(&expected, 1e-12));
        let want_min = (5.0 - 17.0_f64.sqrt()) / 2.0;
        let eig = hermitian_eig(&block, 1e-9).unwrap();
        assert!((eig.values[0] - want_min).abs() < 1e-12);
    }

    #[test]
    fn gain_at_exact_threshold_is_boundary() {
        let fp = example(1.0, 2.0, 1.0);
        let gain = ComplexMatrix::from_real(&[&[-1.0 / 3.0]]);
        let closed = fp.closed_loop(&gain).unwrap();
        let cert = check_certificate(&closed, &e1(), 1e-9).unwrap();
        let block = cert.residual.block(0, 0, 2, 2);
        let expected =
            ComplexMatrix::from_real(&[&[2.0 / 3.0, -4.0 / 3.0], &[-4.0 / 3.0, 8.0 / 3.0]]);
        assert!(block.approx_eq(&expected, 1e-12));
        let det = block.determinant().unwrap();
        assert!(det.norm() < 1e-12);
        assert!(cert.min_eigenvalue.abs() < 1e-9);
    }

    #[test]
    fn synthesis_accepts_already_feasible_system() {
        let fp = FeedbackProblem::new(
            ComplexMatrix::real_diag(&[-1.0, -2.0]),
            ComplexMatrix::from_real(&[&[1.0], &[0.0]]),
            ComplexMatrix::from_real(&[&[1.0, 0.0]]),
        )
        .unwrap();
        let hhat = ComplexMatrix::identity(2).scale_re(-1.0);
        let cert = synthesize_gain(&fp, &hhat, &SynthesisOptions::default()).unwrap();
        assert_eq!(cert.k_star, 0.0);
    }

    #[test]
    fn invariance_examples() {
        let sm = fixtures::feedback_example(0.0, 2.0, 1.0);
        let zero_gain = ComplexMatrix::zeros(1, 1);
        assert!(invariance_check(&sm, &e1(), &zero_gain, 1e-9).unwrap());

        let minus_one = ComplexMatrix::identity(1).scale_re(-1.0);
        assert!(invariance_check(&sm, &e1(), &minus_one, 1e-9).unwrap());
    }
}
