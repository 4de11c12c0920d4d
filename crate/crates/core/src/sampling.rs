//! Seeded random test systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::matrix::{Matrix, SquareMatrix};
use crate::poly::RealPolynomial;

/// Default seed for reproducible batches.
pub const DEFAULT_SEED: u64 = 42;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `N(0, 1)` entries shifted by `−d·I` with `d ~ U(0, 3)`, giving a mix of stable and
/// unstable spectra at every order.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SquareMatrix {
    let shift = Uniform::new(0.0, 3.0).expect("valid range").sample(rng);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x: f64 = StandardNormal.sample(rng);
            m[(i, j)] = if i == j { x - shift } else { x };
        }
    }
    SquareMatrix::new(m).expect("finite entries")
}

pub fn random_matrices(seed: u64, n: usize, count: usize) -> Vec<SquareMatrix> {
    let mut r = rng(seed);
    (0..count).map(|_| random_matrix(&mut r, n)).collect()
}

/// Monic polynomial with coefficients uniform in `[−range, range]`.
pub fn random_monic<R: Rng + ?Sized>(rng: &mut R, n: usize, range: f64) -> RealPolynomial {
    let u = Uniform::new_inclusive(-range, range).expect("valid range");
    let tail: Vec<f64> = (0..n).map(|_| u.sample(rng)).collect();
    RealPolynomial::monic(&tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batches_are_reproducible() {
        let a = random_matrices(7, 3, 5);
        let b = random_matrices(7, 3, 5);
        assert_eq!(a, b);
        assert_ne!(a, random_matrices(8, 3, 5));
    }
}
