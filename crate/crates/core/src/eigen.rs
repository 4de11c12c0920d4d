//! Dense nonsymmetric eigenvalues: balancing, Hessenberg reduction, and the
//! Francis double-shift QR iteration.

use num_complex::Complex64;

use crate::charpoly::{char_poly, reduce_to_hessenberg};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SquareMatrix};
use crate::poly::RealPolynomial;

const MAX_ITERATIONS: usize = 60;

/// Eigenvalues with a backward-error estimate.
///
/// `residual_bound` is `max_j |f(λ_j)| / Σ_k |a_k| |λ_j|^{n−k}` for the characteristic
/// polynomial `f`, i.e. the relative perturbation of the coefficients that would make
/// each reported value an exact root.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub residual_bound: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// All eigenvalues of a real square matrix.
pub fn eigenvalues(a: &SquareMatrix) -> Result<Spectrum> {
    let values = hqr_eigenvalues(a.as_matrix().clone())?;
    let f = char_poly(a);
    Ok(Spectrum {
        residual_bound: backward_error(&f, &values),
        eigenvalues: values,
    })
}

/// Roots of a real polynomial as eigenvalues of its (balanced) companion matrix.
pub fn roots(f: &RealPolynomial) -> Result<Spectrum> {
    let values = hqr_eigenvalues(f.companion())?;
    Ok(Spectrum {
        residual_bound: backward_error(f, &values),
        eigenvalues: values,
    })
}

fn backward_error(f: &RealPolynomial, values: &[Complex64]) -> f64 {
    values
        .iter()
        .map(|&z| {
            let scale = f.abs_eval(z);
            if scale == 0.0 {
                0.0
            } else {
                f.eval_complex(z).norm() / scale
            }
        })
        .fold(0.0, f64::max)
}

fn hqr_eigenvalues(mut m: Matrix<f64>) -> Result<Vec<Complex64>> {
    balance(&mut m);
    reduce_to_hessenberg(&mut m);
    hqr(&mut m)
}

/// Diagonal similarity scaling by powers of two so that row and column norms are
/// comparable.
fn balance(a: &mut Matrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.rows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix (destroyed in the process).
fn hqr(h: &mut Matrix<f64>) -> Result<Vec<Complex64>> {
    let n = h.rows();
    // 1-based working copy keeps the index arithmetic close to the textbook algorithm.
    let mut a = vec![vec![0.0_f64; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = h[(i, j)];
        }
    }
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= f64::EPSILON * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + z.copysign(p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITERATIONS {
                        return Err(Error::NoConvergence {
                            index: nn - 1,
                            iterations: its,
                        });
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            a[i][i] -= x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u <= f64::EPSILON * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        a[i][i - 2] = 0.0;
                        if i != m + 2 {
                            a[i][i - 3] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = (p * p + q * q + r * r).sqrt().copysign(p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = nn.min(k + 3);
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn rotation_matrix() {
        let a = SquareMatrix::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let ev = sorted(eigenvalues(&a).unwrap().eigenvalues);
        assert_abs_diff_eq!(ev[0].re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[0].im, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1].im, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn triangular_double_root() {
        let a = SquareMatrix::from_rows(vec![vec![-1.0, 3.0], vec![0.0, -1.0]]).unwrap();
        for z in eigenvalues(&a).unwrap().eigenvalues {
            assert_abs_diff_eq!(z.re, -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn scalar_and_zero() {
        let a = SquareMatrix::from_rows(vec![vec![2.5]]).unwrap();
        assert_eq!(
            eigenvalues(&a).unwrap().eigenvalues,
            vec![Complex64::new(2.5, 0.0)]
        );
        let z = eigenvalues(&SquareMatrix::zeros(3)).unwrap();
        assert!(z.eigenvalues.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn cubic_roots_have_small_residual() {
        // λ³ + (β−α)λ² + 2βλ + 4 at α = 1.2, β = 5
        let f = RealPolynomial::new(vec![1.0, 3.8, 10.0, 4.0]).unwrap();
        let sp = roots(&f).unwrap();
        assert_eq!(sp.len(), 3);
        for z in &sp.eigenvalues {
            assert!(f.eval_complex(*z).norm() < 1e-8);
        }
        assert!(sp.residual_bound < 1e-12);
    }

    #[test]
    fn conjugate_pairs_on_real_input() {
        let a = SquareMatrix::from_rows(vec![
            vec![0.3, -2.0, 1.0, 0.0, 0.5],
            vec![1.5, 0.1, 0.0, 2.0, -1.0],
            vec![-1.0, 0.7, -0.4, 1.0, 0.0],
            vec![0.0, -3.0, 2.0, 0.2, 1.1],
            vec![0.9, 0.0, -1.2, 0.4, -0.8],
        ])
        .unwrap();
        let sp = eigenvalues(&a).unwrap();
        for z in &sp.eigenvalues {
            if z.im != 0.0 {
                assert!(sp.eigenvalues.iter().any(|w| (w - z.conj()).norm() < 1e-9));
            }
        }
        let trace: f64 = (0..5).map(|i| a.get(i, i)).sum();
        let sum: Complex64 = sp.eigenvalues.iter().sum();
        assert_abs_diff_eq!(sum.re, trace, epsilon = 1e-10);
        assert!(sp.residual_bound < 1e-10);
    }
}
