//! The Lyapunov-inclusion cones `L(H)` and `Lbar(H)`: membership verdicts,
//! the PSD-plus-skew decomposition of `Lbar(I)`, rank-one-projection
//! sampling of cone members, involution maps between cones, and the block
//! pattern matrices in two signature cones at once must follow.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    congruence_to_signature, default_tol, hermitian_eig, psd_check, signature_matrix,
    ComplexMatrix, PsdStatus,
};
use crate::rng::DetRng;

/// Signature matrix `E_{nu,l} = diag(-I_nu, I_{l-nu})`. `E^2 = I` and
/// `E = E*` hold exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureMatrix {
    pub nu: usize,
    pub size: usize,
}

impl SignatureMatrix {
    pub fn new(nu: usize, size: usize) -> Result<Self> {
        if nu > size {
            return Err(Error::Invalid(format!(
                "signature index {nu} exceeds size {size}"
            )));
        }
        Ok(Self { nu, size })
    }

    pub fn matrix(&self) -> ComplexMatrix {
        signature_matrix(self.nu, self.size)
    }
}

/// Where a matrix sits relative to the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeStatus {
    /// `HL + L*H` positive definite.
    Strict,
    /// positive semidefinite only.
    Closed,
    Outside,
}

/// Membership verdict with the symmetrized residual `Q = HL + L*H`.
#[derive(Clone, Debug)]
pub struct ConeMembership {
    pub status: ConeStatus,
    pub residual: ComplexMatrix,
    pub min_eigenvalue: f64,
    pub tolerance_used: f64,
}

impl ConeMembership {
    pub fn is_member(&self) -> bool {
        self.status != ConeStatus::Outside
    }
}

fn check_hermitian_nonsingular(h: &ComplexMatrix, tol: f64) -> Result<()> {
    let dev = h.hermitian_deviation();
    let bound = 1e-9 * h.norm_inf().max(1.0);
    if dev > bound {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: bound,
        });
    }
    let eig = hermitian_eig(h, 1e-9)?;
    if eig.values.iter().any(|&l| l.abs() <= tol) {
        return Err(Error::Singular(
            "Lyapunov factor has an eigenvalue inside the tolerance band".into(),
        ));
    }
    Ok(())
}

/// Membership of `L` in `Lbar(H)` / `L(H)`: the residual is symmetrized
/// before the eigenvalue test to kill rounding skew.
///
/// ```
/// use posreal::cone::{member, ConeStatus};
/// use posreal::ComplexMatrix;
///
/// let l = ComplexMatrix::from_real(&[&[0.0, 1.0, 1.0], &[1.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]);
/// let h = ComplexMatrix::real_diag(&[-1.0, 1.0, 1.0]);
/// let verdict = member(&l, &h, 1e-9).unwrap();
/// assert_eq!(verdict.status, ConeStatus::Closed);
/// ```
pub fn member(l: &ComplexMatrix, h: &ComplexMatrix, tol: f64) -> Result<ConeMembership> {
    let n = l.ensure_square()?;
    if h.rows() != n || h.cols() != n {
        return Err(Error::Dimension(
            "cone factor must match the candidate size".into(),
        ));
    }
    check_hermitian_nonsingular(h, default_tol(h))?;
    let q = (&(h * l) + &(&l.adjoint() * h)).hermitian_part();
    let verdict = psd_check(&q, tol)?;
    let status = match verdict.status {
        PsdStatus::PositiveDefinite => ConeStatus::Strict,
        PsdStatus::PositiveSemidefinite => ConeStatus::Closed,
        _ => ConeStatus::Outside,
    };
    Ok(ConeMembership {
        status,
        residual: q,
        min_eigenvalue: verdict.min_eigenvalue,
        tolerance_used: tol,
    })
}

/// Decomposition of a member of `Lbar(I)` into its PSD Hermitian part and a
/// skew-Hermitian remainder. `P` is Hermitian and `T` skew-Hermitian to the
/// bit; `P + T` returns the input to within one rounding per entry (both
/// cannot be bitwise at once in floating point).
#[derive(Clone, Debug)]
pub struct PsdSkewDecomposition {
    pub psd: ComplexMatrix,
    pub skew: ComplexMatrix,
}

/// Split `W in Lbar(I)` as `P + T`. Errors when the Hermitian part is
/// indefinite beyond the tolerance (not a member).
pub fn psd_skew_decomposition(w: &ComplexMatrix, tol: f64) -> Result<PsdSkewDecomposition> {
    w.ensure_square()?;
    let p = w.hermitian_part();
    let verdict = psd_check(&p, tol)?;
    if !verdict.is_psd() {
        return Err(Error::OutsideCone(format!(
            "Hermitian part has eigenvalue {:.6e} below -{:.1e}",
            verdict.min_eigenvalue, tol
        )));
    }
    let t = w.skew_part();
    Ok(PsdSkewDecomposition { psd: p, skew: t })
}

/// Number of angles the rank-one-projection parameterization takes in
/// dimension `r`: `r - 1` nested magnitudes plus `r` phases (the lone
/// projection in dimension 1 needs none).
pub fn projection_angle_count(r: usize) -> usize {
    if r <= 1 {
        0
    } else {
        2 * r - 1
    }
}

/// Rank-one orthogonal projection `pi = x x*` from polar coordinates: the
/// unit vector has nested cosine/sine magnitudes driven by the first
/// `r - 1` angles and unit-modulus phases from the remaining `r`.
pub fn rank_one_projection(r: usize, angles: &[f64]) -> Result<ComplexMatrix> {
    if r == 0 {
        return Err(Error::Invalid(
            "projection dimension must be positive".into(),
        ));
    }
    if angles.len() != projection_angle_count(r) {
        return Err(Error::Invalid(format!(
            "expected {} angles for dimension {r}, got {}",
            projection_angle_count(r),
            angles.len()
        )));
    }
    let mut x = vec![Complex64::new(0.0, 0.0); r];
    if r == 1 {
        x[0] = Complex64::new(1.0, 0.0);
    } else {
        let thetas = &angles[..r - 1];
        let phases = &angles[r - 1..];
        for k in 0..r {
            // |x_k| = sin(theta_{k-1}) * cos(theta_k) * ... * cos(theta_{r-2}),
            // with the leading sine absent for k = 0.
            let mut mag = if k == 0 { 1.0 } else { thetas[k - 1].sin() };
            for &t in &thetas[k..] {
                mag *= t.cos();
            }
            x[k] = Complex64::from_polar(mag, phases[k]);
        }
    }
    let px = ComplexMatrix::from_fn(r, r, |i, j| x[i] * x[j].conj());
    Ok(px)
}

/// Conic combination `sum alpha_j pi_j` of rank-one projections with
/// nonnegative weights; spans all of the PSD cone.
pub fn sample_psd(weights: &[f64], projections: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if weights.len() != projections.len() {
        return Err(Error::Dimension("one weight per projection".into()));
    }
    if let Some(w) = weights.iter().find(|&&w| w < 0.0) {
        return Err(Error::Invalid(format!("negative weight {w}")));
    }
    combine(weights, projections, Complex64::new(1.0, 0.0))
}

/// Combination `i * sum rho_j pi_j`, anti-symmetrized so the result is
/// exactly skew-Hermitian.
pub fn sample_skew(rhos: &[f64], projections: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if rhos.len() != projections.len() {
        return Err(Error::Dimension("one coefficient per projection".into()));
    }
    let raw = combine(rhos, projections, Complex64::new(0.0, 1.0))?;
    Ok(raw.skew_part())
}

fn combine(
    coeffs: &[f64],
    projections: &[ComplexMatrix],
    unit: Complex64,
) -> Result<ComplexMatrix> {
    let r = projections
        .first()
        .map(|p| p.rows())
        .ok_or_else(|| Error::Invalid("need at least one projection".into()))?;
    let mut acc = ComplexMatrix::zeros(r, r);
    for (w, p) in coeffs.iter().zip(projections) {
        if p.rows() != r || p.cols() != r {
            return Err(Error::Dimension("projection sizes differ".into()));
        }
        acc = &acc + &p.scale(unit.scale(*w));
    }
    Ok(acc)
}

fn draw_projection(r: usize, rng: &mut DetRng) -> ComplexMatrix {
    let count = projection_angle_count(r);
    let angles: Vec<f64> = (0..count)
        .map(|_| rng.uniform_in(0.0, 2.0 * std::f64::consts::PI))
        .collect();
    rank_one_projection(r, &angles).expect("angle count is consistent")
}

/// Draw `r` mutually distinct rank-one projections; near-duplicates
/// (trace overlap above `1 - 1e-6`) are rejected and redrawn.
fn draw_distinct_projections(r: usize, rng: &mut DetRng) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(r);
    let mut guard = 0usize;
    while out.len() < r {
        let cand = draw_projection(r, rng);
        let dup = out.iter().any(|p| {
            let overlap = (p * &cand).trace().norm();
            overlap > 1.0 - 1e-6
        });
        if !dup || guard > 100 {
            out.push(cand);
        }
        guard += 1;
    }
    out
}

/// Seeded draw from `Lbar(I)`: PSD part with half-normal weights, skew part
/// with normal coefficients, projections uniform in their polar box.
pub fn sample_identity_cone(r: usize, rng: &mut DetRng) -> ComplexMatrix {
    let projections = draw_distinct_projections(r, rng);
    let weights: Vec<f64> = (0..r).map(|_| rng.normal().abs()).collect();
    let p = sample_psd(&weights, &projections).expect("valid weights");
    let projections_t = draw_distinct_projections(r, rng);
    let rhos: Vec<f64> = (0..r).map(|_| rng.normal()).collect();
    let t = sample_skew(&rhos, &projections_t).expect("valid coefficients");
    &p + &t
}

/// Seeded draw of a member of `Lbar(H)` for Hermitian nonsingular `H`:
/// draw `W in Lbar(I)`, map it into `Lbar(E_nu)` by the signature, then
/// carry it to `Lbar(H)` through the congruence `V* H V = E_nu`, i.e.
/// return `V (E_nu W) V^{-1}`.
pub fn sample_cone(h: &ComplexMatrix, seed: u64) -> Result<ComplexMatrix> {
    let r = h.ensure_square()?;
    check_hermitian_nonsingular(h, default_tol(h))?;
    let mut rng = DetRng::new(seed);
    let w = sample_identity_cone(r, &mut rng);
    let (v, nu) = congruence_to_signature(h, default_tol(h))?;
    let e = signature_matrix(nu, r);
    let ew = &e * &w;
    let vinv = v
        .inverse()
        .map_err(|_| Error::Singular("congruence factor".into()))?;
    Ok(&(&v * &ew) * &vinv)
}

/// Images `(EL, LE)` of a cone member under an involution commuting with
/// `H`; both land in `Lbar(EH)`.
pub fn involution_map(
    l: &ComplexMatrix,
    e: &ComplexMatrix,
    h: &ComplexMatrix,
    tol: f64,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = l.ensure_square()?;
    if e.rows() != n || h.rows() != n {
        return Err(Error::Dimension(
            "involution and factor must match the member size".into(),
        ));
    }
    let e2 = e * e;
    if !e2.approx_eq(
        &ComplexMatrix::identity(n),
        1e-9 * e.norm_inf().max(1.0).powi(2),
    ) {
        return Err(Error::Invalid("E is not an involution".into()));
    }
    let comm = &(e * h) - &(h * e);
    if comm.norm_max() > 1e-9 * (e.norm_inf() * h.norm_inf()).max(1.0) {
        return Err(Error::Invalid("E does not commute with H".into()));
    }
    if !member(l, h, tol)?.is_member() {
        return Err(Error::OutsideCone(
            "matrix is not in the source cone".into(),
        ));
    }
    Ok((e * l, l * e))
}

/// Self-test of the adjoint relation: `L in Lbar(H)` iff `L* in Lbar(H^{-1})`.
/// Returns whether the two verdicts agree for this instance.
pub fn adjoint_relation_holds(l: &ComplexMatrix, h: &ComplexMatrix, tol: f64) -> Result<bool> {
    check_hermitian_nonsingular(h, default_tol(h))?;
    let a = member(l, h, tol)?.is_member();
    let hinv = h
        .inverse()
        .map_err(|_| Error::Singular("cone factor".into()))?
        .hermitian_part();
    // The residual on the inverse side is a congruence of the original by
    // H^{-1}; scale the tolerance by the squared norm so boundary members
    // classify consistently.
    let kappa = hinv.norm_inf().max(1.0).powi(2);
    let b = member(&l.adjoint(), &hinv, tol * kappa)?.is_member();
    Ok(a == b)
}

/// Block-pattern test for membership in `Lbar(E_nu)` and `Lbar(E_{nu+eta})`
/// simultaneously: the middle `eta` rows and columns must vanish apart from
/// a skew-Hermitian diagonal block, and the corner blocks must satisfy a
/// PSD coupling condition.
pub fn intersection_pattern(l: &ComplexMatrix, nu: usize, eta: usize, tol: f64) -> Result<bool> {
    let r = l.ensure_square()?;
    if eta < 1 || nu + eta > r {
        return Err(Error::Invalid(format!(
            "need eta >= 1 and nu + eta <= r; got nu={nu}, eta={eta}, r={r}"
        )));
    }
    let rho = r - nu - eta;
    let l11 = l.block(0, 0, nu, nu);
    let l12 = l.block(0, nu, nu, eta);
    let l13 = l.block(0, nu + eta, nu, rho);
    let l21 = l.block(nu, 0, eta, nu);
    let l22 = l.block(nu, nu, eta, eta);
    let l23 = l.block(nu, nu + eta, eta, rho);
    let l31 = l.block(nu + eta, 0, rho, nu);
    let l32 = l.block(nu + eta, nu, rho, eta);
    let l33 = l.block(nu + eta, nu + eta, rho, rho);

    let coupling_zero = l12.norm_max() <= tol
        && l21.norm_max() <= tol
        && l23.norm_max() <= tol
        && l32.norm_max() <= tol;
    if !coupling_zero {
        return Ok(false);
    }
    // middle block skew-Hermitian
    if (&l22 + &l22.adjoint()).norm_max() > tol {
        return Ok(false);
    }
    // corner condition: [[-(L11 + L11*), L31* - L13], [(L31* - L13)*, L33 + L33*]] PSD
    let q1 = -&(&l11 + &l11.adjoint());
    let q2 = &l33 + &l33.adjoint();
    let rblock = &l31.adjoint() - &l13;
    let mut corner = ComplexMatrix::zeros(nu + rho, nu + rho);
    corner.set_block(0, 0, &q1);
    corner.set_block(0, nu, &rblock);
    corner.set_block(nu, 0, &rblock.adjoint());
    corner.set_block(nu, nu, &q2);
    Ok(psd_check(&corner.hermitian_part(), tol)?.is_psd())
}
