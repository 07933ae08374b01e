//! Dense complex linear algebra kernels: Hermitian and general
//! eigendecompositions, inertia, semidefiniteness verdicts, Schur
//! complements, null spaces and congruence normalization.

pub mod hermitian;
pub mod matrix;
pub mod qr;
pub mod svd;

pub use hermitian::{
    congruence_to_signature, hermitian_eig, inertia_of, psd_check, psd_check_default,
    schur_complement, signature_matrix, HermitianEig, PsdStatus, PsdVerdict,
};
pub use matrix::ComplexMatrix;
pub use qr::{reorder_schur, schur, spectrum, SchurForm};
pub use svd::{cond_2, null_space, pinv_solve, rank, svd, Svd};

/// Eigenvalue sign counts (left half plane / axis band / right half plane;
/// for Hermitian input: negative / zero / positive).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Inertia {
    pub neg: usize,
    pub zero: usize,
    pub pos: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.neg + self.zero + self.pos
    }
}

/// Default absolute tolerance: `1e-9 * max(1, ||M||_inf)`. Verdict types
/// record the tolerance actually used.
pub fn default_tol(m: &ComplexMatrix) -> f64 {
    1e-9 * m.norm_inf().max(1.0)
}
