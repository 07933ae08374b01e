//! Built-in example systems used by the demo command and the regression
//! suite. All of the 3x3 scalar-output members share the Lyapunov factor
//! `H = diag(-1, 1, 1)`, i.e. `Hhat = diag(-1, 1)`.
//!
//! Two published values for this family are wrong and are tracked here as
//! documented discrepancies; see [`ERRATA`].

use crate::linalg::ComplexMatrix;
use crate::realization::SystemMatrix;

fn sm(rows: &[&[f64]], p: usize) -> SystemMatrix {
    SystemMatrix::new(ComplexMatrix::from_real(rows), p).expect("fixture dimensions")
}

/// Realizes `(s - 1)/(s^2 - s - 1)`; minimal, one pole in each open half plane.
pub fn alpha() -> SystemMatrix {
    sm(&[&[0.0, 1.0, 1.0], &[1.0, 1.0, 0.0], &[1.0, 0.0, 0.0]], 1)
}

/// Realizes `s/(s - 1)` non-minimally; single pole in the right half plane.
pub fn beta() -> SystemMatrix {
    sm(&[&[-1.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 1.0, 1.0]], 1)
}

/// Realizes `1/(s + 1)` non-minimally; single pole in the left half plane.
pub fn gamma() -> SystemMatrix {
    sm(&[&[-1.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]], 1)
}

/// Realizes `-4/s^2` (nilpotent state matrix); poles confined to the axis.
pub fn delta() -> SystemMatrix {
    sm(
        &[&[-1.0, -1.0, 1.0], &[1.0, 1.0, 1.0], &[1.0, -1.0, 0.0]],
        1,
    )
}

/// Coordinate transform of [`delta`] by `Vhat = (0 -1; 1 0)`: a second
/// minimal realization of `-4/s^2` that shares no block-diagonal Lyapunov
/// factor with it.
pub fn epsilon() -> SystemMatrix {
    sm(
        &[&[1.0, -1.0, 1.0], &[1.0, -1.0, -1.0], &[-1.0, -1.0, 0.0]],
        1,
    )
}

/// Midpoint of [`delta`] and [`epsilon`]: realizes `-1/(s^2 + 1)`, which is
/// not generalized positive.
pub fn zeta() -> SystemMatrix {
    sm(&[&[0.0, -1.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, -1.0, 0.0]], 1)
}

/// Realizes `(s + 1)/s` non-minimally; equals the matrix inverse of
/// [`gamma`].
pub fn xi() -> SystemMatrix {
    sm(&[&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0]], 1)
}

/// Minimal realization of `(s^2 + 5s - 9)/(s^2 - 2)`.
pub fn eta() -> SystemMatrix {
    sm(
        &[&[-1.0, -1.0, 2.0], &[-1.0, 1.0, 1.0], &[2.0, 1.0, 1.0]],
        1,
    )
}

/// A second minimal realization of the same function as [`eta`];
/// their midpoint is [`beta`].
pub fn theta() -> SystemMatrix {
    sm(
        &[&[-1.0, 1.0, -2.0], &[1.0, 1.0, 1.0], &[-2.0, 1.0, 1.0]],
        1,
    )
}

/// The seven scalar-output members certified by `Hhat = diag(-1, 1)`,
/// in the order alpha, beta, gamma, delta, xi, eta, theta.
pub fn certified_family() -> Vec<(&'static str, SystemMatrix)> {
    vec![
        ("alpha", alpha()),
        ("beta", beta()),
        ("gamma", gamma()),
        ("delta", delta()),
        ("xi", xi()),
        ("eta", eta()),
        ("theta", theta()),
    ]
}

/// Common certificate block for the family above.
pub fn hhat_reference() -> ComplexMatrix {
    ComplexMatrix::real_diag(&[-1.0, 1.0])
}

/// One-state minimal realization of `1/(s + 1)`. The published 2x2 matrix
/// for this function is `(-1 0; 1 0)`, which realizes the zero function
/// instead; this corrected matrix inverts exactly onto [`xi_min`].
pub fn gamma_min_corrected() -> SystemMatrix {
    sm(&[&[-1.0, 1.0], &[1.0, 0.0]], 1)
}

/// The published (defective) 2x2 counterpart of [`gamma_min_corrected`].
pub fn gamma_min_printed() -> SystemMatrix {
    sm(&[&[-1.0, 0.0], &[1.0, 0.0]], 1)
}

/// One-state minimal realization of `(s + 1)/s`.
pub fn xi_min() -> SystemMatrix {
    sm(&[&[0.0, 1.0], &[1.0, 1.0]], 1)
}

/// Parameterized feedback example: `L = (a a b1; a a b2; b1 -b2 0)`,
/// realizing `(b1^2 - b2^2)(s - a) / (s(s - 2a))`.
pub fn feedback_example(a: f64, b1: f64, b2: f64) -> SystemMatrix {
    sm(&[&[a, a, b1], &[a, a, b2], &[b1, -b2, 0.0]], 1)
}

/// Overlap witness `L = (0 0 0; 0 a b; 0 -b 0)`, a realization of
/// `b^2/(a - s)` lying in two signature cones at once when `a >= 0`.
pub fn overlap_example(a: f64, b: f64) -> SystemMatrix {
    sm(&[&[0.0, 0.0, 0.0], &[0.0, a, b], &[0.0, -b, 0.0]], 1)
}

/// Documented discrepancies between published values and what exact
/// recomputation gives. The demo reports these as expected, not as
/// failures.
pub const ERRATA: [&str; 2] = [
    "eta/theta numerator: published as s^2+5s-1; exact cofactor expansion of \
     both realizations gives s^2+5s-9 (denominator s^2-2 unaffected)",
    "feedback example at a=1, b1=1, b2=1, k=-1: published closed loop claimed \
     to equal the alpha fixture, but b1 = b2 violates the example's own side \
     condition and direct substitution gives ((0,2,1),(0,2,1),(1,-1,0)); the \
     threshold law a/(b2^2-b1^2) >= k is validated at (a,b1,b2) = (1,2,1) instead",
];
