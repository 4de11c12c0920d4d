//! Explicit stability conditions for `n ≤ 4` in the coefficients `a_1..a_n` of a monic
//! characteristic polynomial and `s = cos²(απ/2)`, and the symbolic engine that
//! re-derives them from the fractional Hurwitz minors.
//!
//! Derivation: with `θ = απ/2`, `σ = sin θ`, `c = cos θ`, the matrix entries are
//! `a_j·sin((n−j)θ) = a_j·σ·U_{n−j−1}(c)` and `a_j·cos((n−j)θ) = a_j·T_{n−j}(c)`.
//! Each even leading minor is expanded exactly with `σ² = 1 − c²`; it always has the
//! shape `σ^m·P(c²)`. Since `σ > 0` for `α ∈ [1, 2)` the sign of the minor is the sign
//! of `P(s)` after every factor `1 − s = σ²` has also been divided out.
//!
//! Two published polynomials are known to be misprinted: the third `n = 3` condition
//! has the wrong overall sign, and the third `n = 4` condition has a malformed product
//! plus further coefficient errors. The `corollary_*` evaluators use the corrected
//! texts; [`printed_reference`] keeps the printed ones for comparison.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Signed;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::poly::RealPolynomial;
use crate::symbolic::{CompiledPoly, Exponents, SymbolicPoly};
use crate::verdict::{Method, StabilityVerdict};

/// Largest order supported by [`derive_reduced_conditions`].
pub const MAX_DERIVE_ORDER: usize = 5;

/// Printed conditions, transcribed term for term (juxtaposition multiplies).
const PRINTED_N2: [&str; 2] = ["a1", "a2(a1^2 - 4a2 s)"];

const PRINTED_N3: [&str; 3] = [
    "a1",
    "(4a1 a3 - 4a2^2)s + a1^2 a2 - a1 a3",
    "a3(64a3^2 s^3 - (16a1 a2 a3 + 48a3^2)s^2 + (4a1^3 a3 - 4a1 a2 a3 + 4a2^3 + 12a3^2)s \
     - a1^2 a2^2 + 2a1 a2 a3 - a3^2)",
];

const PRINTED_N4_THIRD: &str = "(64a1 a4^2 - 128a2 a3 a4 + 64a3^3)s^3 \
     - (16a1^2 a3 a4 + 16a1 a2^2 a4 + 16a1 a2 a3^2 - 64a1 a4^2 + 96a2 a3 a4 - 48a3^3)s^2 \
     + (4a1^3 a2 a4 - 4a1^3 a3^2 + 8a1^2 a3 a4 + 4a1 a2^2 a4 + 4a1 a2 a3^2 - 4a2^3 a3 \
     - 16a1 a4^2 + 16a2 a3 a4 - 12a3^3)s \
     - a1^3 a2 a4 + a1^2 a2^2 a3 + a1^2 a3 a4 2a1 a2 a3^2 + a3^3";

const N4_FOURTH: &str = "a4(4096a4^3 s^6 + (-1024a1 a3 a4^2 - 8192a4^3)s^5 \
     + (256a1^2 a2 a4^2 + 1536a1 a3 a4^2 - 512a2^2 a4^2 + 256a2 a3^2 a4 + 6144a4^3)s^4 \
     + (-64a1^4 a4^2 - 64a1^2 a2 a4^2 - 64a1 a2^2 a3 a4 - 1024a1 a3 a4^2 + 512a2^2 a4^2 \
     - 64a2 a3^2 a4 - 64a3^4 - 2048a4^3)s^3 \
     + (48a1^4 a4^2 + 16a1^3 a2 a3 a4 - 64a1^2 a2 a4^2 - 16a1^2 a3^2 a4 - 32a1 a2^2 a3 a4 \
     + 16a1 a2 a3^3 + 16a2^4 a4 + 384a1 a3 a4^2 - 128a2^2 a4^2 - 64a2 a3^2 a4 + 48a3^4 \
     + 256a4^3)s^2 \
     + (-12a1^4 a4^2 + 4a1^3 a2 a3 a4 - 4a1^3 a3^3 - 4a1^2 a2^3 a4 + 16a1^2 a2 a4^2 \
     + 8a1^2 a3^2 a4 + 16a1 a2^2 a3 a4 + 4a1 a2 a3^3 - 4a2^3 a3^2 - 64a1 a3 a4^2 \
     + 16a2 a3^2 a4 - 12a3^4)s \
     + a1^4 a4^2 - 2a1^3 a2 a3 a4 + a1^2 a2^2 a3^2 + 2a1^2 a3^2 a4 - 2a1 a2 a3^3 + a3^4)";

/// The run-together product in the printed `n = 4` third condition, as printed and as
/// an operator was evidently intended.
pub const MALFORMED_TOKEN_LITERAL: &str = "a1^2 a3 a4 2a1 a2 a3^2";
pub const MALFORMED_TOKEN_INTENDED: &str = "a1^2 a3 a4 - 2a1 a2 a3^2";

const CORRECTED_N3_THIRD: &str = "-a3(64a3^2 s^3 - (16a1 a2 a3 + 48a3^2)s^2 \
     + (4a1^3 a3 - 4a1 a2 a3 + 4a2^3 + 12a3^2)s - a1^2 a2^2 + 2a1 a2 a3 - a3^2)";

const CORRECTED_N4_THIRD: &str = "(128a2 a3 a4 - 64a1 a4^2 - 64a3^3)s^3 \
     + (64a1 a4^2 - 16a1^2 a3 a4 - 16a1 a2^2 a4 + 16a1 a2 a3^2 - 96a2 a3 a4 + 48a3^3)s^2 \
     + (4a1^3 a2 a4 - 4a1^3 a3^2 + 8a1^2 a3 a4 + 4a1 a2^2 a4 + 4a1 a2 a3^2 - 4a2^3 a3 \
     - 16a1 a4^2 + 16a2 a3 a4 - 12a3^3)s \
     - a1^3 a2 a4 + a1^2 a2^2 a3 + a1^2 a3 a4 - 2a1 a2 a3^2 + a3^3";

/// Variable names `a1..an, s` used in texts and canonical output.
pub fn variable_names(n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("a{i}"))
        .chain(["s".to_string()])
        .collect()
}

fn parse_condition(text: &str, n: usize) -> SymbolicPoly {
    let names = variable_names(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Expr::parse(text, &refs)
        .and_then(|e| e.to_symbolic(n + 1))
        .unwrap_or_else(|e| panic!("built-in condition text does not parse: {e}"))
}

fn texts(n: usize, printed: bool) -> Vec<&'static str> {
    match (n, printed) {
        (1, _) => vec!["a1"],
        (2, _) => PRINTED_N2.to_vec(),
        (3, true) => PRINTED_N3.to_vec(),
        (3, false) => vec![PRINTED_N3[0], PRINTED_N3[1], CORRECTED_N3_THIRD],
        (4, true) => vec![PRINTED_N3[0], PRINTED_N3[1], PRINTED_N4_THIRD, N4_FOURTH],
        (4, false) => vec![PRINTED_N3[0], PRINTED_N3[1], CORRECTED_N4_THIRD, N4_FOURTH],
        _ => vec![],
    }
}

/// The conditions exactly as published, for `n ∈ {2, 3, 4}`.
pub fn printed_reference(n: usize) -> Result<Vec<SymbolicPoly>> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedOrder {
            got: n,
            min: 2,
            max: 4,
        });
    }
    Ok(texts(n, true)
        .into_iter()
        .map(|t| parse_condition(t, n))
        .collect())
}

/// The corrected conditions used by the `corollary_*` evaluators, for `n ∈ 1..=4`.
pub fn corrected_conditions(n: usize) -> Result<Vec<SymbolicPoly>> {
    if !(1..=4).contains(&n) {
        return Err(Error::UnsupportedOrder {
            got: n,
            min: 1,
            max: 4,
        });
    }
    Ok(texts(n, false)
        .into_iter()
        .map(|t| parse_condition(t, n))
        .collect())
}

static COMPILED: Lazy<Vec<Vec<CompiledPoly>>> = Lazy::new(|| {
    (1..=4)
        .map(|n| {
            corrected_conditions(n)
                .expect("orders 1..=4 are built in")
                .iter()
                .map(CompiledPoly::new)
                .collect()
        })
        .collect()
});

/// Evaluates the corrected conditions at `(a_1..a_n, s)`; each value is judged against
/// the sum of its term magnitudes.
fn evaluate(coeffs: &[f64], s: f64, tol: f64) -> StabilityVerdict {
    let n = coeffs.len();
    let mut x = coeffs.to_vec();
    x.push(s);
    let (values, scales) = COMPILED[n - 1].iter().map(|p| p.eval(&x)).unzip();
    StabilityVerdict::new(values, scales, tol, Method::ClosedForm)
}

pub fn corollary_n2(a1: f64, a2: f64, s: f64, tol: f64) -> StabilityVerdict {
    evaluate(&[a1, a2], s, tol)
}

pub fn corollary_n3(a1: f64, a2: f64, a3: f64, s: f64, tol: f64) -> StabilityVerdict {
    evaluate(&[a1, a2, a3], s, tol)
}

pub fn corollary_n4(a1: f64, a2: f64, a3: f64, a4: f64, s: f64, tol: f64) -> StabilityVerdict {
    evaluate(&[a1, a2, a3, a4], s, tol)
}

/// Closed-form verdict for a polynomial of degree 1 to 4 at order `α`.
pub fn corollary_verdict(f: &RealPolynomial, alpha: f64, tol: f64) -> Result<StabilityVerdict> {
    crate::check_alpha(alpha)?;
    let n = f.degree();
    if !(1..=4).contains(&n) {
        return Err(Error::UnsupportedOrder {
            got: n,
            min: 1,
            max: 4,
        });
    }
    let g = f.to_monic();
    Ok(evaluate(&g.coeffs()[1..], crate::s_of_alpha(alpha), tol))
}

/// Output of the symbolic derivation for one order `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedCondition {
    pub n: usize,
    /// Polynomials in `a_1..a_n, s` whose joint positivity is equivalent to stability.
    pub polys: Vec<SymbolicPoly>,
    /// Power of `sin(απ/2)` divided out of each minor.
    pub sin_power_removed: Vec<u32>,
}

impl ReducedCondition {
    pub fn names(&self) -> Vec<String> {
        variable_names(self.n)
    }

    /// One line per condition: canonical text with a leading monomial factor pulled out.
    pub fn to_text(&self) -> Vec<String> {
        let names = self.names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.polys.iter().map(|p| factored_text(p, &refs)).collect()
    }
}

/// `m*(rest)` when every term shares the monomial `m`, otherwise the plain canonical text.
pub fn factored_text(p: &SymbolicPoly, names: &[&str]) -> String {
    let common = common_monomial(p);
    if p.len() < 2 || common.iter().all(|&k| k == 0) {
        return p.to_text(names);
    }
    let mut rest = p.clone();
    for (v, &k) in common.iter().enumerate() {
        if k > 0 {
            rest = rest.divide_by_power(v, k).expect("common factor divides");
        }
    }
    let m = SymbolicPoly::from_terms(p.nvars(), [(common, BigRational::from_integer(1.into()))]);
    format!("{}*({})", m.to_text(names), rest.to_text(names))
}

fn common_monomial(p: &SymbolicPoly) -> Exponents {
    let mut it = p.terms().keys();
    let mut acc = match it.next() {
        Some(e) => e.clone(),
        None => return vec![0; p.nvars()],
    };
    for e in it {
        for (a, b) in acc.iter_mut().zip(e) {
            *a = (*a).min(*b);
        }
    }
    acc
}

fn chebyshev(nv: usize, c: usize, kmax: usize) -> (Vec<SymbolicPoly>, Vec<SymbolicPoly>) {
    let cv = SymbolicPoly::var(nv, c);
    let two_c = cv.scale(&BigRational::from_integer(2.into()));
    let mut t = vec![SymbolicPoly::one(nv), cv.clone()];
    let mut u = vec![SymbolicPoly::one(nv), two_c.clone()];
    for k in 2..=kmax {
        t.push(&two_c * &t[k - 1] - t[k - 2].clone());
        u.push(&two_c * &u[k - 1] - u[k - 2].clone());
    }
    (t, u)
}

/// Chebyshev polynomials `T_0..T_kmax` and `U_0..U_kmax` in one variable.
pub fn chebyshev_polys(kmax: usize) -> (Vec<SymbolicPoly>, Vec<SymbolicPoly>) {
    chebyshev(1, 0, kmax.max(1))
}

struct MinorExpander<'a> {
    m: &'a [Vec<SymbolicPoly>],
    sigma: usize,
    sigma_sq: SymbolicPoly,
    memo: HashMap<u32, SymbolicPoly>,
}

impl MinorExpander<'_> {
    /// Determinant of rows `0..|cols|` restricted to the column set `cols`, expanded
    /// along the last row.
    fn det(&mut self, cols: u32) -> SymbolicPoly {
        if let Some(d) = self.memo.get(&cols) {
            return d.clone();
        }
        let k = cols.count_ones() as usize;
        let nv = self.sigma_sq.nvars();
        let d = if k == 0 {
            SymbolicPoly::one(nv)
        } else {
            let row = k - 1;
            let members: Vec<usize> = (0..32).filter(|b| cols & (1 << b) != 0).collect();
            let mut acc = SymbolicPoly::zero(nv);
            for (idx, &col) in members.iter().enumerate() {
                if self.m[row][col].is_zero() {
                    continue;
                }
                let sub = self.det(cols & !(1 << col));
                if sub.is_zero() {
                    continue;
                }
                let term = (&self.m[row][col] * &sub).reduce_square(self.sigma, &self.sigma_sq);
                acc = if (row + idx).is_multiple_of(2) {
                    acc + term
                } else {
                    acc - term
                };
            }
            acc
        };
        self.memo.insert(cols, d.clone());
        d
    }
}

/// Symbolic fractional Hurwitz matrix over `a_1..a_n, c, σ` (variable indices
/// `0..n`, `n`, `n + 1`).
pub fn symbolic_frac_hurwitz(n: usize) -> Vec<Vec<SymbolicPoly>> {
    let nv = n + 2;
    let (c, sigma) = (n, n + 1);
    let (t, u) = chebyshev(nv, c, n.max(1));
    let sv = SymbolicPoly::var(nv, sigma);
    let coeff = |j: usize| {
        if j == 0 {
            SymbolicPoly::one(nv)
        } else {
            SymbolicPoly::var(nv, j - 1)
        }
    };
    let imag: Vec<SymbolicPoly> = (0..=n)
        .map(|j| {
            let k = n - j;
            if k == 0 {
                SymbolicPoly::zero(nv)
            } else {
                &coeff(j) * &(&sv * &u[k - 1])
            }
        })
        .collect();
    let real: Vec<SymbolicPoly> = (0..=n).map(|j| &coeff(j) * &t[n - j]).collect();
    let mut h = vec![vec![SymbolicPoly::zero(nv); 2 * n]; 2 * n];
    for r in 0..n {
        for j in 0..=n {
            if r + j < 2 * n {
                h[2 * r][r + j] = imag[j].clone();
                h[2 * r + 1][r + j] = real[j].clone();
            }
        }
    }
    h
}

/// Re-derives the reduced stability conditions for order `n ∈ 1..=5`.
pub fn derive_reduced_conditions(n: usize) -> Result<ReducedCondition> {
    if !(1..=MAX_DERIVE_ORDER).contains(&n) {
        return Err(Error::UnsupportedOrder {
            got: n,
            min: 1,
            max: MAX_DERIVE_ORDER,
        });
    }
    let nv = n + 2;
    let (c, sigma) = (n, n + 1);
    let h = symbolic_frac_hurwitz(n);
    let sigma_sq = SymbolicPoly::one(nv) - SymbolicPoly::var(nv, c).pow(2);
    let mut ex = MinorExpander {
        m: &h,
        sigma,
        sigma_sq,
        memo: HashMap::new(),
    };
    let mut polys = Vec::with_capacity(n);
    let mut powers = Vec::with_capacity(n);
    for p in 1..=n {
        let minor = ex.det((1u32 << (2 * p)) - 1);
        let (even, odd) = minor.split_parity(sigma);
        let (body, mut m) = match (even.is_zero(), odd.is_zero()) {
            (false, true) => (even, 0),
            (true, false) => (odd.divide_by_power(sigma, 1).expect("odd in σ"), 1),
            (true, true) => return Err(Error::InvalidInput(format!("minor {p} expanded to zero"))),
            (false, false) => {
                return Err(Error::InvalidInput(format!(
                    "minor {p} mixes σ parities; expansion is inconsistent"
                )))
            }
        };
        let in_s = body
            .deflate(c, 2)
            .ok_or_else(|| Error::InvalidInput(format!("minor {p} has odd powers of cos(απ/2)")))?;
        // drop the σ slot: variables become a_1..a_n, s
        let mut reduced = SymbolicPoly::from_terms(
            n + 1,
            in_s.terms()
                .iter()
                .map(|(e, q)| (e[..=n].to_vec(), q.clone())),
        );
        while let Some(next) = reduced.divide_by_one_minus(n) {
            if next.is_zero() {
                break;
            }
            reduced = next;
            m += 2;
        }
        polys.push(reduced.primitive());
        powers.push(m);
    }
    Ok(ReducedCondition {
        n,
        polys,
        sin_power_removed: powers,
    })
}

/// One differing monomial between a derived and a published condition, both primitive.
#[derive(Clone, Debug, PartialEq)]
pub struct TermDiff {
    pub exponents: Exponents,
    pub derived: BigRational,
    pub published: BigRational,
    /// The monomial is one that the run-together product touches.
    pub explained_by_token: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConditionStatus {
    /// Equal up to a nonzero rational factor; `sign_flipped` when that factor is negative.
    Match {
        sign_flipped: bool,
    },
    Mismatch {
        diffs: Vec<TermDiff>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionComparison {
    pub index: usize,
    pub derived_terms: usize,
    pub published_terms: usize,
    pub status: ConditionStatus,
}

impl ConditionComparison {
    pub fn is_match(&self) -> bool {
        matches!(self.status, ConditionStatus::Match { .. })
    }

    /// Every difference is attributable to the run-together product.
    pub fn only_token_differences(&self) -> bool {
        match &self.status {
            ConditionStatus::Match { .. } => true,
            ConditionStatus::Mismatch { diffs } => diffs.iter().all(|d| d.explained_by_token),
        }
    }

    pub fn unexplained(&self) -> usize {
        match &self.status {
            ConditionStatus::Match { .. } => 0,
            ConditionStatus::Mismatch { diffs } => {
                diffs.iter().filter(|d| !d.explained_by_token).count()
            }
        }
    }
}

/// Monomials whose coefficients change between the literal and intended readings of
/// the run-together product.
pub fn token_monomials() -> Vec<Exponents> {
    let lit = parse_condition(MALFORMED_TOKEN_LITERAL, 4);
    let int = parse_condition(MALFORMED_TOKEN_INTENDED, 4);
    (&lit - &int).terms().keys().cloned().collect()
}

/// Compares derived conditions against the published ones under the normalization
/// "equal up to a nonzero rational factor".
pub fn compare_with_reference(derived: &ReducedCondition) -> Result<Vec<ConditionComparison>> {
    let published = printed_reference(derived.n)?;
    let token = if derived.n == 4 {
        token_monomials()
    } else {
        Vec::new()
    };
    Ok(derived
        .polys
        .iter()
        .zip(&published)
        .enumerate()
        .map(|(i, (d, p))| compare_one(i + 1, d, p, &token))
        .collect())
}

fn compare_one(
    index: usize,
    d: &SymbolicPoly,
    p: &SymbolicPoly,
    token: &[Exponents],
) -> ConditionComparison {
    let status = if d.normal_form() == p.normal_form() {
        let lead = |q: &SymbolicPoly| q.canonical_terms().first().map(|(_, c)| c.is_negative());
        ConditionStatus::Match {
            sign_flipped: lead(d) != lead(p),
        }
    } else {
        let (dp, pp) = (d.primitive(), p.primitive());
        let mut keys: Vec<&Exponents> = dp.terms().keys().chain(pp.terms().keys()).collect();
        keys.sort();
        keys.dedup();
        let diffs = keys
            .into_iter()
            .filter_map(|e| {
                let (a, b) = (dp.coeff(e), pp.coeff(e));
                (a != b).then(|| TermDiff {
                    exponents: e.clone(),
                    derived: a,
                    published: b,
                    explained_by_token: token.contains(e),
                })
            })
            .collect();
        ConditionStatus::Mismatch { diffs }
    };
    ConditionComparison {
        index,
        derived_terms: d.len(),
        published_terms: p.len(),
        status,
    }
}

/// Text of one monomial, e.g. `a1^3*a2*a4`.
pub fn monomial_text(e: &Exponents, names: &[&str]) -> String {
    let mono =
        SymbolicPoly::from_terms(e.len(), [(e.clone(), BigRational::from_integer(1.into()))]);
    mono.to_text(names)
}
