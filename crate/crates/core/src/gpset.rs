//! The GP(r, nu, p) realization sets: classification of a system matrix
//! into every certifiable inertia class, seeded construction of members,
//! the signature transform carrying a class onto positive-function
//! realizations, and the union covering all classes for fixed (r, p).

use crate::cone::sample_cone;
use crate::error::{Error, Result};
use crate::linalg::{default_tol, signature_matrix};
use crate::prl::{
    check_certificate, find_certificate, LyapunovCertificate, NuTarget, SearchOptions,
};
use crate::realization::{Realization, SystemMatrix};

/// Label (r, nu, p) of a realization set: p-by-p rational functions with an
/// (r - p)-state realization certified by a block of inertia
/// (nu, 0, r - p - nu).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GpClass {
    pub r: usize,
    pub nu: usize,
    pub p: usize,
}

impl GpClass {
    pub fn new(r: usize, nu: usize, p: usize) -> Result<Self> {
        if r < 2 || p < 1 || p > r - 1 || nu > r - p {
            return Err(Error::Invalid(format!(
                "class out of range: need r >= 2, 1 <= p <= r-1, 0 <= nu <= r-p; got ({r}, {nu}, {p})"
            )));
        }
        Ok(Self { r, nu, p })
    }

    pub fn state_dim(&self) -> usize {
        self.r - self.p
    }
}

/// Outcome of classifying one system matrix across every inertia target.
/// Memberships may overlap: neighbouring classes share boundary members.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub memberships: Vec<(GpClass, LyapunovCertificate)>,
    pub minimal: bool,
    pub mcmillan: usize,
    pub rank_tolerance: f64,
}

impl ClassificationReport {
    pub fn contains(&self, nu: usize) -> bool {
        self.memberships.iter().any(|(c, _)| c.nu == nu)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub search: SearchOptions,
    /// Rank threshold for the minimality decision (default 1e-9).
    pub rank_tol: Option<f64>,
}

/// Run the certificate search once per admissible inertia target and report
/// every class that certifies, together with the minimality split.
pub fn classify(sm: &SystemMatrix, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let r = sm.size();
    let p = sm.outputs();
    let n = sm.state_dim();
    let re = sm.partition();
    let rank_tol = opts.rank_tol.unwrap_or(1e-9);
    let mut memberships = Vec::new();
    for nu in 0..=n {
        let mut search = opts.search.clone();
        search.seed = opts.search.seed.wrapping_add(nu as u64);
        if let Some(cert) = find_certificate(&re, NuTarget::Exactly(nu), &search)?.certificate() {
            memberships.push((GpClass::new(r, nu, p)?, cert.clone()));
        }
    }
    let mcmillan = re.mcmillan_degree(rank_tol);
    Ok(ClassificationReport {
        memberships,
        minimal: mcmillan == n,
        mcmillan,
        rank_tolerance: rank_tol,
    })
}

/// Seeded construction of a member of GP(r, nu, p): a draw from the cone of
/// the signature factor `diag(E_{nu,n}, I_p)`, which certifies by
/// construction.
pub fn construct(cls: GpClass, seed: u64) -> Result<SystemMatrix> {
    let h = signature_matrix(cls.nu, cls.r);
    let l = sample_cone(&h, seed)?;
    SystemMatrix::new(l, cls.p)
}

/// Both signature-transformed realizations
/// `(JA, JB; C, D)` and `(AJ, B; CJ, D)` with `J = diag(I_nu, -I_{n-nu})`.
/// The two outputs realize one and the same function, `C (sJ - A)^{-1} B + D`,
/// generally different from the input's; when the input certifies in
/// GP(r, nu, p) with the signature block, both outputs certify as positive
/// (negative definite block). J is an involution, so applying the transform
/// twice recovers the input.
pub fn j_transform(re: &Realization, nu: usize) -> Result<(Realization, Realization)> {
    let n = re.state_dim();
    if nu > n {
        return Err(Error::Invalid(format!(
            "nu = {nu} exceeds state dimension {n}"
        )));
    }
    let j = signature_matrix(nu, n).scale_re(-1.0); // diag(I_nu, -I_{n-nu})
    let first = Realization::new(&j * &re.a, &j * &re.b, re.c.clone(), re.d.clone())?;
    let second = Realization::new(&re.a * &j, re.b.clone(), &re.c * &j, re.d.clone())?;
    Ok((first, second))
}

/// The r - p + 1 classes covering all p-by-p generalized positive functions
/// with an (r - p)-state realization, in nu order.
pub fn union_cover(r: usize, p: usize) -> Result<Vec<GpClass>> {
    if p < 1 || r <= p {
        return Err(Error::Invalid(format!(
            "need r > p >= 1; got r = {r}, p = {p}"
        )));
    }
    (0..=r - p).map(|nu| GpClass::new(r, nu, p)).collect()
}

/// Certificate of a constructed member against its defining signature
/// block; used by tests and the CLI to echo the construction's own
/// certificate.
pub fn construction_certificate(sm: &SystemMatrix, cls: GpClass) -> Result<LyapunovCertificate> {
    let re = sm.partition();
    let hhat = signature_matrix(cls.nu, cls.state_dim());
    check_certificate(&re, &hhat, default_tol(sm.matrix()))
}
