//! Real polynomials, the rotated real/imaginary decomposition, and multiple-angle
//! trigonometry.
//!
//! Coefficients are stored in descending powers: index `j` holds `a_j` of
//! `a_0 λ^n + a_1 λ^{n-1} + … + a_n`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SquareMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type RealPolynomial = Polynomial<f64>;
pub type RationalPolynomial = Polynomial<BigRational>;

impl<T: Clone + Zero + One + PartialEq> Polynomial<T> {
    /// Rejects an empty coefficient vector and a zero leading coefficient.
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::InvalidInput("empty coefficient vector".into())),
            Some(c) if c.is_zero() => Err(Error::ZeroLeadingCoefficient),
            Some(_) => Ok(Self { coeffs }),
        }
    }

    /// `λ^n + tail[0] λ^{n-1} + … + tail[n-1]`.
    pub fn monic(tail: &[T]) -> Self {
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(T::one());
        coeffs.extend_from_slice(tail);
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `a_j` (descending index).
    pub fn coeff(&self, j: usize) -> &T {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs[0].is_one()
    }
}

impl<T> Polynomial<T>
where
    T: Clone + Zero + One + PartialEq + std::ops::Neg<Output = T> + std::ops::Div<Output = T>,
{
    /// Companion matrix (last-row form) of the polynomial normalized to monic.
    pub fn companion(&self) -> Matrix<T> {
        let n = self.degree();
        let lead = self.coeffs[0].clone();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = T::one();
        }
        for j in 0..n {
            // last row: -a_{n-j} / a_0 in column j
            m[(n - 1, j)] = -(self.coeffs[n - j].clone() / lead.clone());
        }
        m
    }
}

impl RealPolynomial {
    /// Like [`Polynomial::from_coeffs`] and additionally requires finite coefficients.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(j) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { row: 0, col: j });
        }
        Self::from_coeffs(coeffs)
    }

    /// Expands `Π (λ - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k] += ck;
                next[k + 1] -= ck * r;
            }
            c = next;
        }
        Self {
            coeffs: c.into_iter().map(|z| z.re).collect(),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn to_monic(&self) -> Self {
        self.scaled(1.0 / self.coeffs[0])
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        eval_complex(self, z)
    }

    /// `Σ |a_j| |z|^{n-j}`, the natural magnitude against which `|f(z)|` is judged.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().fold(0.0, |acc, c| acc * r + c.abs())
    }

    pub fn companion_matrix(&self) -> SquareMatrix {
        SquareMatrix::new(self.companion()).expect("finite polynomial gives a finite companion")
    }
}

impl RationalPolynomial {
    pub fn to_real(&self) -> RealPolynomial {
        use num_traits::ToPrimitive;
        RealPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }
}

impl fmt::Display for RealPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 && !(first && j == n) {
                continue;
            }
            let p = n - j;
            let (sign, mag) = if *c < 0.0 { ("-", -c) } else { ("+", *c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = mag != 1.0 || p == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match p {
                0 => {}
                1 => write!(f, "{}λ", if show_coeff { "·" } else { "" })?,
                _ => write!(f, "{}λ^{p}", if show_coeff { "·" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// `f(z)` by Horner's scheme.
pub fn eval_complex(f: &RealPolynomial, z: Complex64) -> Complex64 {
    f.coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Real and imaginary coefficient sequences of a complex polynomial, both in descending
/// powers: `p(z) = Σ real[j] z^{n-j} + i Σ imag[j] z^{n-j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPair<T> {
    pub real: Vec<T>,
    pub imag: Vec<T>,
}

impl<T> ComplexPair<T> {
    pub fn new(real: Vec<T>, imag: Vec<T>) -> Result<Self> {
        if real.len() != imag.len() {
            return Err(Error::DimensionMismatch {
                expected: real.len(),
                got: imag.len(),
            });
        }
        if real.is_empty() {
            return Err(Error::InvalidInput("empty coefficient vectors".into()));
        }
        Ok(Self { real, imag })
    }

    pub fn degree(&self) -> usize {
        self.real.len() - 1
    }
}

impl ComplexPair<f64> {
    /// `real(z) + i · imag(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let horner = |c: &[f64]| {
            c.iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &x| acc * z + x)
        };
        horner(&self.real) + Complex64::i() * horner(&self.imag)
    }
}

/// `(cos kθ, sin kθ)` for `k = 0..=n`, from `(cos θ, sin θ)` by the Chebyshev recurrence
/// `x_{k+1} = 2 cos θ · x_k − x_{k−1}` (shared by both sequences).
pub fn angle_multiples(theta: f64, n: usize) -> Vec<(f64, f64)> {
    let (s1, c1) = theta.sin_cos();
    let mut out = Vec::with_capacity(n + 1);
    out.push((1.0, 0.0));
    if n >= 1 {
        out.push((c1, s1));
    }
    for k in 2..=n {
        let (cp, sp) = out[k - 1];
        let (cpp, spp) = out[k - 2];
        out.push((2.0 * c1 * cp - cpp, 2.0 * c1 * sp - spp));
    }
    out
}

/// Decomposes `f(λ·e^{iαπ/2})` into real and imaginary coefficient sequences:
/// `real[j] = a_j cos((n−j)απ/2)`, `imag[j] = a_j sin((n−j)απ/2)`.
///
/// This is `g(iλ)` for `g(λ) = f(λ·e^{i(α−1)π/2})`, i.e. `f` seen in a frame rotated
/// counterclockwise by `(α−1)π/2`.
pub fn rotate_decompose(f: &RealPolynomial, alpha: f64) -> Result<ComplexPair<f64>> {
    crate::check_alpha(alpha)?;
    let n = f.degree();
    let trig = angle_multiples(alpha * FRAC_PI_2, n);
    let (real, imag) = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let (c, s) = trig[n - j];
            (a * c, a * s)
        })
        .unzip();
    ComplexPair::new(real, imag)
}
