//! Independent stability deciders used to cross-check the fractional Hurwitz test.
//!
//! * The argument oracle computes eigenvalues and compares `|arg λ_j|` with `απ/2`
//!   directly: stable region `|arg λ| > απ/2`, unstable region `|arg λ| < απ/2`,
//!   critical line `|arg λ| = απ/2`.
//! * The embedding oracle maps `A` to the `2n × 2n` integer-order matrix
//!   `[[A sin θ, A cos θ], [−A cos θ, A sin θ]]` (`θ = απ/2`) and applies the classical
//!   Routh-Hurwitz minors to its characteristic polynomial.

use std::f64::consts::FRAC_PI_2;

use num_traits::Zero;

use crate::charpoly::char_poly;
use crate::eigen::{eigenvalues, roots, Spectrum};
use crate::error::Result;
use crate::matrix::{Matrix, SquareMatrix};
use crate::minors::{all_leading_minors, determinant_sensitivity, MinorScalar};
use crate::poly::{Polynomial, RealPolynomial};
use crate::verdict::{Method, Outcome, StabilityVerdict};

/// Eigenvalues with modulus below this fraction of `max(1, max |λ|)` count as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-8;

/// Classifies a spectrum against the sector `|arg λ| > απ/2`.
///
/// The verdict's `minors` are the margins `|arg λ_j| − απ/2`, each with unit scale, so
/// `tol` acts as an angular tolerance in radians. An eigenvalue at the origin makes the
/// verdict `Boundary` unless another eigenvalue is clearly unstable.
pub fn argument_verdict(spectrum: &Spectrum, alpha: f64, tol: f64) -> Result<StabilityVerdict> {
    crate::check_alpha(alpha)?;
    let critical = alpha * FRAC_PI_2;
    let zero_tol = ZERO_EIGENVALUE_TOL * spectrum.max_modulus().max(1.0);
    let mut margins = Vec::with_capacity(spectrum.len());
    let mut has_zero = false;
    for z in &spectrum.eigenvalues {
        if z.norm() <= zero_tol {
            has_zero = true;
            margins.push(0.0);
        } else {
            margins.push(z.im.atan2(z.re).abs() - critical);
        }
    }
    let scales = vec![1.0; margins.len()];
    let mut v = StabilityVerdict::new(margins, scales, tol, Method::ArgumentOracle);
    if has_zero && v.outcome == Outcome::Stable {
        v.outcome = Outcome::Boundary;
    }
    Ok(v)
}

pub fn argument_oracle(a: &SquareMatrix, alpha: f64, tol: f64) -> Result<StabilityVerdict> {
    crate::check_alpha(alpha)?;
    argument_verdict(&eigenvalues(a)?, alpha, tol)
}

/// Polynomial input goes through its companion matrix.
pub fn argument_oracle_poly(f: &RealPolynomial, alpha: f64, tol: f64) -> Result<StabilityVerdict> {
    crate::check_alpha(alpha)?;
    argument_verdict(&roots(f)?, alpha, tol)
}

/// `[[A sin θ, A cos θ], [−A cos θ, A sin θ]]` with `θ = απ/2`.
pub fn integer_order_embed(a: &SquareMatrix, alpha: f64) -> Result<SquareMatrix> {
    crate::check_alpha(alpha)?;
    let n = a.order();
    let (s, c) = (alpha * FRAC_PI_2).sin_cos();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let x = a.get(i, j);
            m[(i, j)] = x * s;
            m[(i, n + j)] = x * c;
            m[(n + i, j)] = -x * c;
            m[(n + i, n + j)] = x * s;
        }
    }
    SquareMatrix::new(m)
}

/// Classical Hurwitz matrix `H_ij = a_{2j−i}` (1-based, `a_k = 0` outside `0..=n`).
pub fn classical_hurwitz_matrix<T>(f: &Polynomial<T>) -> Matrix<T>
where
    T: Clone + Zero + num_traits::One + PartialEq,
{
    let n = f.degree();
    let mut m = Matrix::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            let k = 2 * j as isize - i as isize;
            if (0..=n as isize).contains(&k) {
                m[(i - 1, j - 1)] = f.coeff(k as usize).clone();
            }
        }
    }
    m
}

/// Classical Routh-Hurwitz: all roots in the open left half-plane iff `Δ_1..Δ_n > 0`
/// (for `a_0 > 0`).
pub fn classical_rh_verdict(f: &RealPolynomial, tol: f64) -> StabilityVerdict {
    let g = if *f.leading() < 0.0 {
        f.scaled(-1.0)
    } else {
        f.clone()
    };
    let h = classical_hurwitz_matrix(&g);
    let minors = all_leading_minors(&h);
    let scales = (1..=h.rows())
        .map(|k| determinant_sensitivity(&h.leading_block(k)))
        .collect();
    StabilityVerdict::new(minors, scales, tol, Method::ClassicalHurwitz)
}

/// Exact classical Hurwitz minors, sharing the Bareiss engine with the fractional test.
pub fn classical_hurwitz_minors_exact<T: MinorScalar + PartialEq>(f: &Polynomial<T>) -> Vec<T> {
    all_leading_minors(&classical_hurwitz_matrix(f))
}

pub fn embedding_verdict(a: &SquareMatrix, alpha: f64, tol: f64) -> Result<StabilityVerdict> {
    let embedded = integer_order_embed(a, alpha)?;
    let mut v = classical_rh_verdict(&char_poly(&embedded), tol);
    v.method = Method::Embedding;
    Ok(v)
}
