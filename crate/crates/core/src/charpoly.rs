//! Characteristic polynomials `det(λI − A)`.
//!
//! Float matrices are first reduced to upper Hessenberg form by stabilized elementary
//! similarity transforms; the determinant of `λI − H` is then expanded with the
//! standard Hessenberg recurrence. Rational matrices use Faddeev–LeVerrier, which is
//! exact over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::{Matrix, RationalMatrix, SquareMatrix};
use crate::poly::{Polynomial, RationalPolynomial, RealPolynomial};

/// Upper Hessenberg matrix similar to `a` (Gaussian elimination with partial pivoting).
pub fn hessenberg(a: &SquareMatrix) -> Matrix<f64> {
    let mut h = a.as_matrix().clone();
    reduce_to_hessenberg(&mut h);
    h
}

/// In-place reduction of a square matrix to upper Hessenberg form by stabilized
/// elementary similarity transforms.
pub fn reduce_to_hessenberg(h: &mut Matrix<f64>) {
    let n = h.rows();
    for m in 1..n.saturating_sub(1) {
        let mut x = 0.0_f64;
        let mut piv = m;
        for j in m..n {
            if h[(j, m - 1)].abs() > x.abs() {
                x = h[(j, m - 1)];
                piv = j;
            }
        }
        if piv != m {
            for j in (m - 1)..n {
                let t = h[(piv, j)];
                h[(piv, j)] = h[(m, j)];
                h[(m, j)] = t;
            }
            for i in 0..n {
                let t = h[(i, piv)];
                h[(i, piv)] = h[(i, m)];
                h[(i, m)] = t;
            }
        }
        if x != 0.0 {
            for i in (m + 1)..n {
                let mut y = h[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    h[(i, m - 1)] = y;
                    for j in m..n {
                        let t = y * h[(m, j)];
                        h[(i, j)] -= t;
                    }
                    for j in 0..n {
                        let t = y * h[(j, i)];
                        h[(j, m)] += t;
                    }
                }
            }
        }
    }
    for i in 2..n {
        for j in 0..i - 1 {
            h[(i, j)] = 0.0;
        }
    }
}

/// Characteristic polynomial of a real matrix (monic, degree `n`).
pub fn char_poly(a: &SquareMatrix) -> RealPolynomial {
    let n = a.order();
    let h = hessenberg(a);
    // p[k] holds det(λI − H[0..k, 0..k]) in ascending powers.
    let mut p: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    p.push(vec![1.0]);
    for k in 0..n {
        // (λ − h_kk) p_k
        let prev = &p[k];
        let mut next = vec![0.0; k + 2];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= h[(k, k)] * c;
        }
        // − Σ_{i<k} h_{ik} (Π_{j=i+1..k} h_{j,j−1}) p_i
        let mut sub = 1.0;
        for i in (0..k).rev() {
            sub *= h[(i + 1, i)];
            let w = h[(i, k)] * sub;
            if w != 0.0 {
                for (d, c) in p[i].iter().enumerate() {
                    next[d] -= w * c;
                }
            }
        }
        p.push(next);
    }
    let mut coeffs = p.pop().unwrap_or_else(|| vec![1.0]);
    coeffs.reverse();
    RealPolynomial::new(coeffs).expect("monic with finite entries")
}

/// Exact characteristic polynomial of a rational matrix by Faddeev–LeVerrier.
pub fn char_poly_exact(a: &RationalMatrix) -> RationalPolynomial {
    assert!(
        a.is_square(),
        "characteristic polynomial needs a square matrix"
    );
    let n = a.rows();
    let mut coeffs = vec![BigRational::one()];
    // M_1 = I, c_{n-1} = −tr(A);  M_k = A M_{k−1} + c_{n−k+1} I,  c_{n−k} = −tr(A M_k)/k
    let mut m: RationalMatrix = Matrix::identity(n);
    for k in 1..=n {
        let am = mat_mul(a, &m);
        let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &am[(i, i)]);
        let c = -tr / BigRational::from_integer((k as i64).into());
        m = am;
        for i in 0..n {
            m[(i, i)] += &c;
        }
        coeffs.push(c);
    }
    Polynomial::from_coeffs(coeffs).expect("leading coefficient is one")
}

fn mat_mul(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let n = a.rows();
    let mut out = Matrix::zeros(n, b.cols());
    for i in 0..n {
        for k in 0..a.cols() {
            let aik = &a[(i, k)];
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols() {
                out[(i, j)] += aik * &b[(k, j)];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn two_by_two_triangular() {
        let a = SquareMatrix::from_rows(vec![vec![-1.0, 3.0], vec![0.0, -1.0]]).unwrap();
        assert_eq!(char_poly(&a).coeffs(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn zero_matrix_gives_monomial() {
        for n in 1..6 {
            let p = char_poly(&SquareMatrix::zeros(n));
            assert_eq!(p.degree(), n);
            assert!(p.coeffs()[1..].iter().all(|c| *c == 0.0));
            let e = char_poly_exact(&Matrix::zeros(n, n));
            assert!(e.coeffs()[1..].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn example_family_coefficients() {
        // A0 + b1 A1 + b2 A2 = [[-1-b1-b2, 3+b2], [b1, -1-b1]]
        for &(b1, b2) in &[(0.0, 0.0), (0.7, -1.3), (-2.5, 2.0), (1.0, 0.0)] {
            let a =
                SquareMatrix::from_rows(vec![vec![-1.0 - b1 - b2, 3.0 + b2], vec![b1, -1.0 - b1]])
                    .unwrap();
            let p = char_poly(&a);
            assert_abs_diff_eq!(p.coeffs()[1], 2.0 * b1 + 2.0 + b2, epsilon = 1e-12);
            assert_abs_diff_eq!(p.coeffs()[2], b1 * b1 + b2 - b1 + 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn known_spectrum_matches_product_of_roots() {
        // upper triangular: eigenvalues on the diagonal
        let diag = [-1.5, 2.0, 0.25, -3.0, 4.0];
        let mut rows = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            rows[i][i] = diag[i];
            for j in i + 1..5 {
                rows[i][j] = (i + 2 * j) as f64 * 0.3 - 1.0;
            }
        }
        let a = SquareMatrix::from_rows(rows).unwrap();
        let want = RealPolynomial::from_roots(
            &diag
                .iter()
                .map(|&d| Complex64::new(d, 0.0))
                .collect::<Vec<_>>(),
        );
        for (g, w) in char_poly(&a).coeffs().iter().zip(want.coeffs()) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_companion_round_trip() {
        let f = RationalPolynomial::from_coeffs(vec![q(1), q(-3), q(7), q(0), q(-11)]).unwrap();
        let c = f.companion();
        assert_eq!(char_poly_exact(&c), f);
    }

    #[test]
    fn float_matches_exact_on_integer_matrix() {
        let rows = vec![
            vec![2.0, -1.0, 0.0, 3.0],
            vec![1.0, 4.0, -2.0, 0.0],
            vec![0.0, 5.0, -1.0, 1.0],
            vec![-3.0, 0.0, 2.0, 1.0],
        ];
        let a = SquareMatrix::from_rows(rows).unwrap();
        let exact = char_poly_exact(&a.as_matrix().to_rational().unwrap()).to_real();
        for (g, w) in char_poly(&a).coeffs().iter().zip(exact.coeffs()) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-10);
        }
    }
}
