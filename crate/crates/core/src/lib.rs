//! Stability and robust stability of fractional-order linear systems
//! `D^α x = A x` with order `α ∈ [1, 2)`.
//!
//! The central decision procedure builds a `2n × 2n` Hurwitz-type matrix from the
//! characteristic polynomial rotated by `e^{iαπ/2}` and checks the signs of its
//! even-order leading principal minors ([`hurwitz::theorem1_verdict`]). Two
//! independent deciders ([`oracles`]) cross-check it: the eigenvalue-argument test
//! and a `2n`-dimensional integer-order embedding judged by the classical
//! Routh-Hurwitz criterion.
//!
//! [`closed_forms`] holds explicit conditions for `n ≤ 4` in terms of the
//! polynomial coefficients and `s = cos²(απ/2)`, together with a symbolic engine
//! that re-derives them. [`region`] rasters stable parameter regions of uncertain
//! systems and bisects scalar robustness bounds.

pub mod charpoly;
pub mod closed_forms;
pub mod eigen;
pub mod error;
pub mod export;
pub mod expr;
pub mod hurwitz;
pub mod matrix;
pub mod minors;
pub mod oracles;
pub mod poly;
pub mod region;
pub mod sampling;
pub mod symbolic;
pub mod verdict;

pub use error::{Error, Result};
pub use matrix::{Matrix, RationalMatrix, SquareMatrix};
pub use poly::{ComplexPair, Polynomial, RationalPolynomial, RealPolynomial};
pub use verdict::{Method, Outcome, StabilityVerdict};

/// Default relative tolerance for deciding that a minor (or closed-form value) is zero.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

/// Default angular tolerance (radians) for the critical line `|arg λ| = απ/2`.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-9;

/// Checks `α ∈ [1, 2)`.
pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && (1.0..2.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// `s = cos²(απ/2)`, the variable of the closed-form conditions. At `α = 1` the cosine
/// is only zero up to rounding (about 6e-17); that residue is snapped to zero.
pub fn s_of_alpha(alpha: f64) -> f64 {
    let c = (alpha * std::f64::consts::FRAC_PI_2).cos();
    if c.abs() < 1e-15 {
        0.0
    } else {
        c * c
    }
}
