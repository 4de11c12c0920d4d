//! Leading principal minors.
//!
//! Exact arithmetic uses fraction-free Bareiss elimination: after step `k` the pivot
//! `M[k][k]` equals the `(k+1)`-th leading principal minor, so one pass yields all of
//! them. Float arithmetic computes each requested minor separately with a partially
//! pivoted LU factorization of the leading block.

use std::ops::Neg;

use num_rational::BigRational;
use num_traits::{Num, Zero};

use crate::matrix::Matrix;

/// Scalars whose leading principal minors can be computed.
pub trait MinorScalar: Num + Clone + Neg<Output = Self> {
    /// Minors of the given orders (each `1..=n`), in the order requested.
    fn leading_minors(m: &Matrix<Self>, orders: &[usize]) -> Vec<Self>;

    fn determinant(m: &Matrix<Self>) -> Self;
}

impl MinorScalar for f64 {
    fn leading_minors(m: &Matrix<f64>, orders: &[usize]) -> Vec<f64> {
        orders
            .iter()
            .map(|&k| lu_determinant(&m.leading_block(k)))
            .collect()
    }

    fn determinant(m: &Matrix<f64>) -> f64 {
        lu_determinant(m)
    }
}

impl MinorScalar for BigRational {
    fn leading_minors(m: &Matrix<BigRational>, orders: &[usize]) -> Vec<BigRational> {
        let max = orders.iter().copied().max().unwrap_or(0);
        let all = bareiss_leading_minors(&m.leading_block(max));
        orders.iter().map(|&k| all[k - 1].clone()).collect()
    }

    fn determinant(m: &Matrix<BigRational>) -> BigRational {
        bareiss_determinant(m)
    }
}

/// The `2p`-th leading principal minors for `p = 1..=n` of a `2n × 2n` matrix.
pub fn even_leading_minors<T: MinorScalar>(m: &Matrix<T>) -> Vec<T> {
    let orders: Vec<usize> = (1..=m.rows() / 2).map(|p| 2 * p).collect();
    T::leading_minors(m, &orders)
}

/// All leading principal minors `1..=n`.
pub fn all_leading_minors<T: MinorScalar>(m: &Matrix<T>) -> Vec<T> {
    let orders: Vec<usize> = (1..=m.rows().min(m.cols())).collect();
    T::leading_minors(m, &orders)
}

/// Determinant by LU with partial pivoting.
pub fn lu_determinant(m: &Matrix<f64>) -> f64 {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = 1.0;
    let mut min_piv = f64::INFINITY;
    let mut max_piv = 0.0_f64;
    for k in 0..n {
        let (p, pv) = (k..n)
            .map(|i| (i, a[(i, k)].abs()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if pv == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                let t = a[(p, j)];
                a[(p, j)] = a[(k, j)];
                a[(k, j)] = t;
            }
            det = -det;
        }
        let piv = a[(k, k)];
        min_piv = min_piv.min(pv);
        max_piv = max_piv.max(pv);
        det *= piv;
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f != 0.0 {
                for j in k + 1..n {
                    let t = f * a[(k, j)];
                    a[(i, j)] -= t;
                }
            }
        }
    }
    if n > 1 && min_piv < 1e-12 * max_piv {
        log::warn!(
            "ill-conditioned {n}x{n} block (pivot ratio {:.1e}); minor sign may be unreliable",
            min_piv / max_piv
        );
    }
    det
}

/// `Σ_ij |m_ij · C_ij|` with `C` the cofactor matrix: the first-order change of `det(m)`
/// when every entry moves by its own magnitude. A determinant is indistinguishable from
/// zero at relative entry tolerance `tol` when `|det| ≤ tol · sensitivity`.
///
/// Falls back to `max(1, Π_i max_j |m_ij|)` when elimination hits an exact zero pivot.
pub fn determinant_sensitivity(m: &Matrix<f64>) -> f64 {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return 1.0;
    }
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut det = 1.0;
    for k in 0..n {
        let (p, pv) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if pv == 0.0 {
            return m.leading_block_scale(n);
        }
        if p != k {
            for j in 0..n {
                let t = lu[(p, j)];
                lu[(p, j)] = lu[(k, j)];
                lu[(k, j)] = t;
            }
            perm.swap(p, k);
            det = -det;
        }
        let piv = lu[(k, k)];
        det *= piv;
        for i in k + 1..n {
            let f = lu[(i, k)] / piv;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let t = f * lu[(k, j)];
                lu[(i, j)] -= t;
            }
        }
    }
    // Column `j` of the inverse solves `m x = e_j`; cofactor `C_ij = det · inv_ji`.
    let mut total = 0.0;
    let mut x = vec![0.0; n];
    for j in 0..n {
        for i in 0..n {
            x[i] = if perm[i] == j { 1.0 } else { 0.0 };
            for k in 0..i {
                x[i] -= lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= lu[(i, k)] * x[k];
            }
            x[i] /= lu[(i, i)];
        }
        for (i, xi) in x.iter().enumerate() {
            total += (m[(j, i)] * xi).abs();
        }
    }
    total * det.abs()
}

/// All leading principal minors of a square rational matrix in one Bareiss pass.
///
/// A zero pivot means that leading minor vanishes; elimination cannot continue past it,
/// so the remaining minors are computed one by one with pivoted elimination.
pub fn bareiss_leading_minors(m: &Matrix<BigRational>) -> Vec<BigRational> {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut prev = BigRational::from_integer(1.into());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let piv = a[(k, k)].clone();
        out.push(piv.clone());
        if piv.is_zero() {
            for size in k + 2..=n {
                out.push(bareiss_determinant(&m.leading_block(size)));
            }
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &piv - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = piv;
    }
    out
}

/// Determinant by fraction-free elimination with row exchanges.
pub fn bareiss_determinant(m: &Matrix<BigRational>) -> BigRational {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return BigRational::from_integer(1.into());
    }
    let mut a = m.clone();
    let mut prev = BigRational::from_integer(1.into());
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(k, j)].clone();
                a[(k, j)] = t;
            }
            negate = !negate;
        }
        let piv = a[(k, k)].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &piv - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, k)] = BigRational::zero();
        }
        prev = piv;
    }
    let det = a[(n - 1, n - 1)].clone();
    if negate {
        -det
    } else {
        det
    }
}
