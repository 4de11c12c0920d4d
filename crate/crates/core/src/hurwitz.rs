//! Generalized Hurwitz matrices and the fractional-order Routh-Hurwitz test.
//!
//! For a complex polynomial written as `p(iz) = Σ b_j z^{n−j} + i Σ a_j z^{n−j}` the
//! generalized Hurwitz matrix is `2n × 2n`: row `2r` carries `a_0..a_n` starting at
//! column `r`, row `2r+1` carries `b_0..b_n` starting at the same column. All roots of
//! `p` lie in the open left half-plane iff its even leading minors are positive
//! (provided `a_0 ≠ 0`).
//!
//! Applied to `f(λ·e^{iαπ/2})` this decides whether every root of a real `f` satisfies
//! `|arg λ| > απ/2`, which is asymptotic stability of `D^α x = A x`.

use std::f64::consts::FRAC_PI_2;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::minors::{determinant_sensitivity, even_leading_minors, MinorScalar};
use crate::oracles::argument_oracle_poly;
use crate::poly::{rotate_decompose, ComplexPair, RealPolynomial};
use crate::verdict::{Method, StabilityVerdict};

/// `|sin(nαπ/2)|` below this makes the leading entry of the fractional matrix vanish.
pub const DEGENERATE_SIN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedHurwitzMatrix<T> {
    matrix: Matrix<T>,
    degree: usize,
}

impl<T: MinorScalar> GeneralizedHurwitzMatrix<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// Degree `n` of the source polynomial; the matrix is `2n × 2n`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `δ_k` (or `∇_p`): the leading minors of orders `2, 4, …, 2n`.
    pub fn even_leading_minors(&self) -> Vec<T> {
        even_leading_minors(&self.matrix)
    }
}

impl GeneralizedHurwitzMatrix<f64> {
    /// Scales for the boundary test of each even minor (cofactor sensitivity of the block).
    pub fn minor_scales(&self) -> Vec<f64> {
        (1..=self.degree)
            .map(|p| determinant_sensitivity(&self.matrix.leading_block(2 * p)))
            .collect()
    }
}

/// Lays out the interleaved, shifted coefficient rows.
pub fn build_generalized_hurwitz<T>(pair: &ComplexPair<T>) -> Result<GeneralizedHurwitzMatrix<T>>
where
    T: Clone + Zero,
{
    let n = pair.degree();
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let size = 2 * n;
    let mut m = Matrix::zeros(size, size);
    for r in 0..n {
        for j in 0..=n {
            let col = r + j;
            if col < size {
                m[(2 * r, col)] = pair.imag[j].clone();
                m[(2 * r + 1, col)] = pair.real[j].clone();
            }
        }
    }
    Ok(GeneralizedHurwitzMatrix {
        matrix: m,
        degree: n,
    })
}

/// The fractional-order Routh-Hurwitz matrix `H_α` of a real polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct FracHurwitzMatrix {
    inner: GeneralizedHurwitzMatrix<f64>,
    alpha: f64,
}

impl FracHurwitzMatrix {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn matrix(&self) -> &Matrix<f64> {
        &self.inner.matrix
    }

    pub fn as_generalized(&self) -> &GeneralizedHurwitzMatrix<f64> {
        &self.inner
    }

    /// `∇_1, …, ∇_n`.
    pub fn even_leading_minors(&self) -> Vec<f64> {
        self.inner.even_leading_minors()
    }

    pub fn minor_scales(&self) -> Vec<f64> {
        self.inner.minor_scales()
    }

    /// True when the `(1,1)` entry `a_0 sin(nαπ/2)` vanishes.
    pub fn is_degenerate(&self) -> bool {
        is_degenerate(self.degree(), self.alpha)
    }
}

/// Whether `sin(nαπ/2)` is zero to within [`DEGENERATE_SIN_TOL`].
pub fn is_degenerate(n: usize, alpha: f64) -> bool {
    (n as f64 * alpha * FRAC_PI_2).sin().abs() < DEGENERATE_SIN_TOL
}

pub fn build_frac_hurwitz(f: &RealPolynomial, alpha: f64) -> Result<FracHurwitzMatrix> {
    let pair = rotate_decompose(f, alpha)?;
    Ok(FracHurwitzMatrix {
        inner: build_generalized_hurwitz(&pair)?,
        alpha,
    })
}

/// Stability of `D^α x = A x` from the characteristic polynomial of `A`.
///
/// Any nonzero leading coefficient is accepted; rescaling `f` by `c` multiplies `∇_p`
/// by `c^{2p}` and leaves the outcome unchanged. When `sin(nαπ/2)` vanishes the
/// decision is delegated to the eigenvalue-argument oracle (with `tol` as its angular
/// tolerance) and the verdict records the delegation.
pub fn theorem1_verdict(f: &RealPolynomial, alpha: f64, tol: f64) -> Result<StabilityVerdict> {
    crate::check_alpha(alpha)?;
    if f.degree() == 0 {
        return Err(Error::ZeroDegree);
    }
    if is_degenerate(f.degree(), alpha) {
        log::debug!(
            "sin({}·απ/2) vanishes at alpha = {alpha}; delegating to the argument oracle",
            f.degree()
        );
        let mut v = argument_oracle_poly(f, alpha, tol)?;
        v.delegated_from = Some(Method::Theorem1);
        return Ok(v);
    }
    let h = build_frac_hurwitz(f, alpha)?;
    Ok(StabilityVerdict::new(
        h.even_leading_minors(),
        h.minor_scales(),
        tol,
        Method::Theorem1,
    ))
}

/// Whether all roots of the complex polynomial `p` (given through `p(iz)`) lie in the
/// open left half-plane.
pub fn generalized_rh_verdict(pair: &ComplexPair<f64>, tol: f64) -> Result<StabilityVerdict> {
    if pair.imag[0] == 0.0 {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let h = build_generalized_hurwitz(pair)?;
    Ok(StabilityVerdict::new(
        h.even_leading_minors(),
        h.minor_scales(),
        tol,
        Method::GeneralizedHurwitz,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Outcome;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    fn poly(c: &[f64]) -> RealPolynomial {
        RealPolynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn smallest_layout() {
        let pair = ComplexPair::new(vec![3.0, 4.0], vec![1.0, 2.0]).unwrap();
        let h = build_generalized_hurwitz(&pair).unwrap();
        assert_eq!(h.matrix().to_rows(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn zero_degree_rejected() {
        let pair = ComplexPair::new(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(build_generalized_hurwitz(&pair), Err(Error::ZeroDegree));
    }

    #[test]
    fn quadratic_at_three_halves() {
        let h = build_frac_hurwitz(&poly(&[1.0, 2.0, 1.0]), 1.5).unwrap();
        let want = [
            [-1.0, SQRT_2, 0.0, 0.0],
            [0.0, -SQRT_2, 1.0, 0.0],
            [0.0, -1.0, SQRT_2, 0.0],
            [0.0, 0.0, -SQRT_2, 1.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(h.matrix()[(i, j)], want[i][j], epsilon = 1e-15);
            }
        }
        let m = h.even_leading_minors();
        assert_abs_diff_eq!(m[0], SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(m[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn first_column_at_alpha_one() {
        let h = build_frac_hurwitz(&poly(&[1.0, 2.0, 1.0]), 1.0).unwrap();
        let col: Vec<f64> = (0..4).map(|i| h.matrix()[(i, 0)]).collect();
        for (g, w) in col.iter().zip([0.0, -1.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-15);
        }
        assert!(h.is_degenerate());
    }

    #[test]
    fn corner_entries() {
        let f = poly(&[1.0, -0.5, 2.0, 3.0]);
        let h = build_frac_hurwitz(&f, 1.3).unwrap();
        let th = 1.3 * FRAC_PI_2;
        assert_abs_diff_eq!(h.matrix()[(0, 0)], (3.0 * th).sin(), epsilon = 1e-14);
        assert_eq!(h.matrix()[(5, 5)], 3.0);
    }

    #[test]
    fn linear_minor() {
        for &(c, alpha) in &[(2.0, 1.2), (-0.5, 1.7), (3.0, 1.0)] {
            let h = build_frac_hurwitz(&poly(&[1.0, c]), alpha).unwrap();
            let m = h.even_leading_minors();
            assert_abs_diff_eq!(m[0], c * (alpha * FRAC_PI_2).sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_rows_give_zero_minor() {
        let pair = ComplexPair::new(vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 2.0]).unwrap();
        let h = build_generalized_hurwitz(&pair).unwrap();
        assert_eq!(h.even_leading_minors()[0], 0.0);
    }

    #[test]
    fn verdict_examples() {
        let v = theorem1_verdict(&poly(&[1.0, 2.0, 1.0]), 1.5, 1e-9).unwrap();
        assert_eq!(v.outcome, Outcome::Stable);
        assert_eq!(v.method, Method::Theorem1);

        let v = theorem1_verdict(&poly(&[1.0, 0.0, 1.0]), 1.0, 1e-9).unwrap();
        assert_eq!(v.outcome, Outcome::Boundary);
        assert_eq!(v.delegated_from, Some(Method::Theorem1));

        for alpha in [1.0, 1.25, 1.5, 1.99] {
            let v = theorem1_verdict(&poly(&[1.0, -2.0, 1.0]), alpha, 1e-9).unwrap();
            assert_eq!(v.outcome, Outcome::NotStable, "alpha = {alpha}");
        }
    }

    #[test]
    fn zero_eigenvalue_is_boundary() {
        // λ(λ+1)(λ+2): a_n = 0
        let v = theorem1_verdict(&poly(&[1.0, 3.0, 2.0, 0.0]), 1.2, 1e-9).unwrap();
        assert_eq!(v.outcome, Outcome::Boundary);
        assert_eq!(v.minors[2], 0.0);
    }

    #[test]
    fn verdict_rejects_inputs() {
        assert!(theorem1_verdict(&poly(&[1.0, 1.0]), 2.0, 1e-9).is_err());
        assert_eq!(
            theorem1_verdict(&poly(&[1.0]), 1.5, 1e-9),
            Err(Error::ZeroDegree)
        );
    }

    #[test]
    fn generalized_criterion_cases() {
        // z + 1 written through p(iz) = iz + 1: imag = [1, 0], real = [0, 1]
        let real_poly = ComplexPair::new(vec![1.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(
            generalized_rh_verdict(&real_poly, 1e-9),
            Err(Error::DegenerateLeadingCoefficient)
        );
        let pair = rotate_decompose(&poly(&[1.0, 1.0]), 1.5).unwrap();
        let v = generalized_rh_verdict(&pair, 1e-9).unwrap();
        assert_abs_diff_eq!(
            v.minors[0],
            (0.75 * std::f64::consts::PI).sin(),
            epsilon = 1e-15
        );
        assert_eq!(v.outcome, Outcome::Stable);

        // (λ+2)(λ−1): δ = [+, −]
        let f = poly(&[1.0, 1.0, -2.0]);
        let pair = rotate_decompose(&f, 1.2).unwrap();
        let v = generalized_rh_verdict(&pair, 1e-9).unwrap();
        assert!(v.minors[0] > 0.0 && v.minors[1] < 0.0);
        assert_eq!(v.outcome, Outcome::NotStable);
    }
}
