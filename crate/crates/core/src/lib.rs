//! Analysis, certification and synthesis of state-space realizations of
//! positive and generalized positive rational matrix functions.
//!
//! A square rational matrix function is generalized positive when its
//! Hermitian part is positive semidefinite almost everywhere on the
//! imaginary axis. For a realization packed as the system matrix
//! `L = (A B; C D)`, such behaviour is certified by a Lyapunov inclusion
//! `H L + L* H >= 0` with `H = diag(Hhat, I_p)` and `Hhat` Hermitian
//! nonsingular; the inertia of `Hhat` bounds the pole counts per half
//! plane. This crate provides:
//!
//! - dense complex linear algebra kernels ([`linalg`]),
//! - realizations, transfer evaluation and minimality ranks ([`realization`]),
//! - the cone machinery for sets sharing a Lyapunov factor ([`cone`]),
//! - the Positive Real Lemma engine: Riccati expression, certificates,
//!   inertia bounds, certificate search and the boundary oracle ([`prl`]),
//! - the GP(r, nu, p) classification and construction layer ([`gpset`]),
//! - static output feedback synthesis ([`feedback`]),
//! - built-in regression fixtures ([`fixtures`]) and the JSON wire format
//!   ([`io`]).

pub mod cone;
pub mod error;
pub mod feedback;
pub mod fixtures;
pub mod gpset;
mod hermbasis;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod prl;
pub mod realization;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Inertia, PsdStatus, PsdVerdict};
pub use realization::{Realization, SystemMatrix};

// scalar type used throughout the public surface
pub use num_complex;
pub use num_complex::Complex64;
