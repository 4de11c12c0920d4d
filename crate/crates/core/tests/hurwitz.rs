use std::f64::consts::FRAC_PI_2;

use fracrh::charpoly::char_poly;
use fracrh::eigen::eigenvalues;
use fracrh::hurwitz::{
    build_frac_hurwitz, build_generalized_hurwitz, is_degenerate, theorem1_verdict,
};
use fracrh::minors::even_leading_minors;
use fracrh::oracles::{argument_oracle, embedding_verdict};
use fracrh::sampling::random_matrices;
use fracrh::verdict::classify;
use fracrh::{ComplexPair, Matrix, Outcome, RealPolynomial};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn pair_f64() -> impl Strategy<Value = ComplexPair<f64>> {
    (1usize..=6).prop_flat_map(|n| {
        (
            prop::collection::vec(-5.0..5.0f64, n + 1),
            prop::collection::vec(-5.0..5.0f64, n + 1),
        )
            .prop_map(|(re, im)| ComplexPair::new(re, im).unwrap())
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn pair_rational() -> impl Strategy<Value = ComplexPair<BigRational>> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(rational(), n + 1),
            prop::collection::vec(rational(), n + 1),
        )
            .prop_map(|(re, im)| ComplexPair::new(re, im).unwrap())
    })
}

/// Laplace expansion along the first row; fine for the 8×8 blocks used here.
fn cofactor_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::from_integer(1.into());
    }
    let mut acc = BigRational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<BigRational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * cofactor_det(&sub);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn min_angle_margin(a: &fracrh::SquareMatrix, alpha: f64) -> f64 {
    eigenvalues(a)
        .unwrap()
        .eigenvalues
        .iter()
        .map(|z| (z.arg().abs() - alpha * FRAC_PI_2).abs())
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn interleaved_rows_are_shifted_copies(pair in pair_f64()) {
        let n = pair.degree();
        let h = build_generalized_hurwitz(&pair).unwrap();
        let m = h.matrix();
        prop_assert_eq!((m.rows(), m.cols()), (2 * n, 2 * n));
        let mut expected = Matrix::<f64>::zeros(2 * n, 2 * n);
        for r in 0..n {
            for j in 0..=n {
                if r + j < 2 * n {
                    expected[(2 * r, r + j)] = pair.imag[j];
                    expected[(2 * r + 1, r + j)] = pair.real[j];
                }
            }
        }
        prop_assert_eq!(m, &expected);
    }

    #[test]
    fn frac_matrix_corners(tail in (1usize..=6).prop_flat_map(|n| prop::collection::vec(-5.0..5.0f64, n)), alpha in 1.0..2.0f64) {
        let f = RealPolynomial::monic(&tail);
        let n = f.degree();
        let h = build_frac_hurwitz(&f, alpha).unwrap();
        let m = h.matrix();
        let lead = (n as f64 * alpha * FRAC_PI_2).sin();
        prop_assert!((m[(0, 0)] - lead).abs() < 1e-12);
        prop_assert_eq!(m[(2 * n - 1, 2 * n - 1)], tail[n - 1]);
    }

    #[test]
    fn scaling_multiplies_minors_by_even_powers(
        tail in (1usize..=6).prop_flat_map(|n| prop::collection::vec(-5.0..5.0f64, n)),
        alpha in 1.0..2.0f64,
        c in 0.1..10.0f64,
    ) {
        let f = RealPolynomial::monic(&tail);
        prop_assume!(!is_degenerate(f.degree(), alpha));
        let g = f.scaled(c);
        let (vf, vg) = (theorem1_verdict(&f, alpha, TOL).unwrap(), theorem1_verdict(&g, alpha, TOL).unwrap());
        prop_assert_eq!(vf.outcome, vg.outcome);
        for (p, ((a, b), s)) in vf.minors.iter().zip(&vg.minors).zip(&vf.scales).enumerate() {
            let k = c.powi(2 * (p as i32 + 1));
            prop_assert!((a * k - b).abs() <= 1e-9 * s * k, "minor {}: {} vs {}", p + 1, a * k, b);
        }
    }

    #[test]
    fn exact_minors_match_cofactor_expansion(pair in pair_rational()) {
        let h = build_generalized_hurwitz(&pair).unwrap();
        let m = h.matrix();
        let minors = even_leading_minors(m);
        prop_assert_eq!(minors.len(), pair.degree());
        for (p, got) in minors.iter().enumerate() {
            let k = 2 * (p + 1);
            let block: Vec<Vec<BigRational>> = (0..k).map(|i| m.row(i)[..k].to_vec()).collect();
            prop_assert_eq!(got, &cofactor_det(&block));
        }
    }

    #[test]
    fn classification_rules(
        values in prop::collection::vec(-2e-9..2e-9f64, 1..6),
        big in prop::collection::vec(-1.0..1.0f64, 1..6),
        scales in prop::collection::vec(0.5..3.0f64, 6),
        mix in any::<bool>(),
    ) {
        let mut v = values.clone();
        if mix {
            v.extend(big);
        }
        let s = &scales[..v.len().min(6)];
        let v = &v[..s.len()];
        let out = classify(v, s, TOL);
        let neg = v.iter().zip(s).any(|(x, sc)| *x < -TOL * sc);
        let all_pos = v.iter().zip(s).all(|(x, sc)| *x > TOL * sc);
        let expected = if neg {
            Outcome::NotStable
        } else if all_pos {
            Outcome::Stable
        } else {
            Outcome::Boundary
        };
        prop_assert_eq!(out, expected);
    }
}

#[test]
fn theorem1_agrees_with_argument_oracle_off_the_critical_line() {
    let mut compared = 0;
    let mut delegated = 0;
    let mut near = 0;
    let mut stable = 0;
    for n in 2..=6 {
        for (i, a) in random_matrices(500 + n as u64, n, 100).iter().enumerate() {
            let f = char_poly(a);
            for k in 0..10 {
                let alpha = 1.0 + 0.1 * k as f64;
                if min_angle_margin(a, alpha) <= 1e-6 {
                    near += 1;
                    continue;
                }
                let t = theorem1_verdict(&f, alpha, TOL).unwrap();
                let o = argument_oracle(a, alpha, TOL).unwrap();
                assert_eq!(
                    t.outcome, o.outcome,
                    "n={n} matrix {i} alpha={alpha}: minors {:?}",
                    t.minors
                );
                compared += 1;
                delegated += usize::from(t.delegated_from.is_some());
                stable += usize::from(t.outcome == Outcome::Stable);
            }
        }
    }
    // the decision must come from the minors, not the delegation fallback, in most cases
    assert!(
        compared - delegated > 4000,
        "compared {compared}, delegated {delegated}, near {near}"
    );
    assert!(
        stable > 500 && compared - stable > 500,
        "stable {stable} of {compared}"
    );
}

#[test]
fn minor_counts_of_both_criteria() {
    for n in 2..=5 {
        for a in random_matrices(900 + n as u64, n, 10) {
            let t = theorem1_verdict(&char_poly(&a), 1.3, TOL).unwrap();
            assert_eq!(t.minors.len(), n);
            let e = embedding_verdict(&a, 1.3, TOL).unwrap();
            assert_eq!(e.minors.len(), 2 * n);
        }
    }
}

#[test]
fn zero_constant_term_is_boundary() {
    // λ(λ + 1): a zero eigenvalue is never asymptotically stable
    let f = RealPolynomial::new(vec![1.0, 1.0, 0.0]).unwrap();
    let v = theorem1_verdict(&f, 1.5, TOL).unwrap();
    assert_eq!(v.minors[1], 0.0);
    assert_eq!(v.outcome, Outcome::Boundary);
}
