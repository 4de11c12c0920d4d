//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A term is an exponent vector (one entry per variable) mapped to a nonzero
//! coefficient. Variable names are not stored; formatting takes them as an argument.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl SymbolicPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(c.into()))
    }

    pub fn one(nvars: usize) -> Self {
        Self::int(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Replaces `var^2` by `replacement` repeatedly until `var` appears with exponent ≤ 1.
    pub fn reduce_square(&self, var: usize, replacement: &SymbolicPoly) -> Self {
        let mut powers = vec![Self::one(self.nvars)];
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = (e[var] / 2) as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * replacement;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[var] %= 2;
            let mono = Self::from_terms(self.nvars, [(rest, c.clone())]);
            out = out + &mono * &powers[k];
        }
        out
    }

    /// Splits into `(even, odd)` parts with respect to `var`'s exponent parity.
    pub fn split_parity(&self, var: usize) -> (Self, Self) {
        let mut even = Self::zero(self.nvars);
        let mut odd = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] % 2 == 0 {
                even.add_term(e.clone(), c.clone());
            } else {
                odd.add_term(e.clone(), c.clone());
            }
        }
        (even, odd)
    }

    /// Divides every exponent of `var` by `k`; `None` unless all are multiples of `k`.
    pub fn deflate(&self, var: usize, k: u32) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] % k != 0 {
                return None;
            }
            let mut f = e.clone();
            f[var] /= k;
            out.add_term(f, c.clone());
        }
        Some(out)
    }

    /// Lowers the exponent of `var` by `k` in every term; `None` if some term has less.
    pub fn divide_by_power(&self, var: usize, k: u32) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] < k {
                return None;
            }
            let mut f = e.clone();
            f[var] -= k;
            out.add_term(f, c.clone());
        }
        Some(out)
    }

    /// Coefficients of `var^0, var^1, ...` as polynomials in the remaining variables
    /// (with `var`'s exponent zeroed).
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[var] as usize;
            f[var] = 0;
            out[k].add_term(f, c.clone());
        }
        out
    }

    fn from_coefficients_in(nvars: usize, var: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(nvars);
        for (k, p) in coeffs.iter().enumerate() {
            for (e, c) in &p.terms {
                let mut f = e.clone();
                f[var] += k as u32;
                out.add_term(f, c.clone());
            }
        }
        out
    }

    /// Exact division by `1 − var`, or `None` if it does not divide.
    pub fn divide_by_one_minus(&self, var: usize) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        // synthetic division by (var − 1): P = (var − 1)·Q + r
        let p = self.coefficients_in(var);
        let d = p.len() - 1;
        if d == 0 {
            return None;
        }
        let mut q = vec![Self::zero(self.nvars); d];
        q[d - 1] = p[d].clone();
        for k in (1..d).rev() {
            q[k - 1] = &p[k] + &q[k];
        }
        let r = &p[0] + &q[0];
        if !r.is_zero() {
            return None;
        }
        Some(-Self::from_coefficients_in(self.nvars, var, &q))
    }

    /// Greatest rational `g > 0` such that every coefficient divided by `g` is an
    /// integer and the integers are coprime.
    pub fn content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(num, den)
        }
    }

    /// Divides by the (positive) content; the sign is kept.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        self.scale(&g.recip())
    }

    /// Primitive part with the canonically-first term made positive. Two polynomials
    /// that differ by a nonzero rational factor have the same normal form.
    pub fn normal_form(&self) -> Self {
        let p = self.primitive();
        match p.canonical_terms().first() {
            Some((_, c)) if c.is_negative() => -p,
            _ => p,
        }
    }

    /// Terms in canonical order: last variable's exponent descending, then the remaining
    /// exponents lexicographically descending.
    pub fn canonical_terms(&self) -> Vec<(&Exponents, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        let last = self.nvars.saturating_sub(1);
        v.sort_by(|(a, _), (b, _)| {
            b[last]
                .cmp(&a[last])
                .then_with(|| b[..last].cmp(&a[..last]))
        });
        v
    }

    /// Canonical text, e.g. `4*a1*a3*s - 4*a2^2*s + a1^2*a2 - a1*a3`.
    pub fn to_text(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars, "one name per variable");
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.canonical_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !mag.is_one() || is_const {
                factors.push(mag.to_string());
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    _ => factors.push(format!("{}^{}", names[v], k)),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }

    /// Numeric evaluation (compiles on the fly; use [`CompiledPoly`] in loops).
    pub fn eval(&self, x: &[f64]) -> f64 {
        CompiledPoly::new(self).eval(x).0
    }
}

impl Add for SymbolicPoly {
    type Output = SymbolicPoly;
    fn add(mut self, rhs: SymbolicPoly) -> SymbolicPoly {
        assert_eq!(self.nvars, rhs.nvars);
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Add for &SymbolicPoly {
    type Output = SymbolicPoly;
    fn add(self, rhs: &SymbolicPoly) -> SymbolicPoly {
        self.clone() + rhs.clone()
    }
}

impl Sub for SymbolicPoly {
    type Output = SymbolicPoly;
    fn sub(self, rhs: SymbolicPoly) -> SymbolicPoly {
        self + (-rhs)
    }
}

impl Sub for &SymbolicPoly {
    type Output = SymbolicPoly;
    fn sub(self, rhs: &SymbolicPoly) -> SymbolicPoly {
        self.clone() - rhs.clone()
    }
}

impl Neg for SymbolicPoly {
    type Output = SymbolicPoly;
    fn neg(mut self) -> SymbolicPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for &SymbolicPoly {
    type Output = SymbolicPoly;
    fn mul(self, rhs: &SymbolicPoly) -> SymbolicPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = SymbolicPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for SymbolicPoly {
    type Output = SymbolicPoly;
    fn mul(self, rhs: SymbolicPoly) -> SymbolicPoly {
        &self * &rhs
    }
}

/// Float evaluator of a fixed polynomial.
///
/// Returns the value together with the magnitude a near-zero value should be judged
/// against: `Σ_v |x_v ∂p/∂x_v|`, the first-order change under a unit relative
/// perturbation of every variable, plus `1e-6 · Σ |term|` so that summation rounding
/// stays inside the boundary band at the default tolerance. `Σ |term|` alone grossly
/// overstates the sensitivity when large terms cancel (for instance near `s = 1`).
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &SymbolicPoly) -> Self {
        let terms = p
            .terms
            .iter()
            .map(|(e, c)| {
                let f = c.to_f64().unwrap_or(f64::NAN);
                let powers = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| (v, k as i32))
                    .collect();
                (f, powers)
            })
            .collect();
        Self {
            nvars: p.nvars,
            terms,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[f64]) -> (f64, f64) {
        debug_assert_eq!(x.len(), self.nvars);
        let mut sum = 0.0;
        let mut mag = 0.0;
        // x_v ∂t/∂x_v = k_v t for a monomial t
        let mut grad = vec![0.0; self.nvars];
        for (c, powers) in &self.terms {
            let mut t = *c;
            for &(v, k) in powers {
                t *= x[v].powi(k);
            }
            sum += t;
            mag += t.abs();
            for &(v, k) in powers {
                grad[v] += k as f64 * t;
            }
        }
        let sens: f64 = grad.iter().map(|g| g.abs()).sum();
        (sum, sens + 1e-6 * mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn arithmetic_and_text() {
        let x = SymbolicPoly::var(2, 0);
        let s = SymbolicPoly::var(2, 1);
        let p = (&x + &s).pow(2);
        assert_eq!(p.to_text(&["a1", "s"]), "s^2 + 2*a1*s + a1^2");
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(SymbolicPoly::zero(2).to_text(&["a1", "s"]), "0");
        assert_eq!((-SymbolicPoly::int(2, 3)).to_text(&["a1", "s"]), "-3");
    }

    #[test]
    fn square_reduction() {
        // σ^3 c with σ² → 1 − c²  gives σ c − σ c^3
        let sigma = SymbolicPoly::var(2, 0);
        let c = SymbolicPoly::var(2, 1);
        let rep = SymbolicPoly::one(2) - c.pow(2);
        let r = (&sigma.pow(3) * &c).reduce_square(0, &rep);
        let want = &sigma * &c - &sigma * &c.pow(3);
        assert_eq!(r, want);
    }

    #[test]
    fn divide_by_one_minus_s() {
        let a = SymbolicPoly::var(2, 0);
        let s = SymbolicPoly::var(2, 1);
        let one_minus = SymbolicPoly::one(2) - s.clone();
        let body = &a.pow(2) - &(&a * &s).scale(&q(4));
        let p = &(&one_minus * &one_minus) * &body;
        let once = p.divide_by_one_minus(1).unwrap();
        let twice = once.divide_by_one_minus(1).unwrap();
        assert_eq!(twice, body);
        assert!(twice.divide_by_one_minus(1).is_none());
    }

    #[test]
    fn content_and_normal_form() {
        let p = SymbolicPoly::from_terms(
            1,
            [
                (vec![1], BigRational::new(6.into(), 5.into())),
                (vec![0], BigRational::new((-4).into(), 15.into())),
            ],
        );
        assert_eq!(p.content(), BigRational::new(2.into(), 15.into()));
        assert_eq!(p.primitive().coeff(&[1]), q(9));
        assert_eq!((-p.clone()).normal_form(), p.normal_form());
    }

    #[test]
    fn compiled_eval_reports_sensitivity() {
        // x² − 1 at x = 1: x·p'(x) = 2, Σ|term| = 2
        let x = SymbolicPoly::var(1, 0);
        let p = &x.pow(2) - &SymbolicPoly::int(1, 1);
        let (v, m) = CompiledPoly::new(&p).eval(&[1.0]);
        assert_eq!(v, 0.0);
        assert_eq!(m, 2.0 + 2e-6);
        // (1 − s)⁴ expanded at s = 0.99: terms near 6 cancel to 1e-8, slope stays small
        let s = SymbolicPoly::var(1, 0);
        let p = (&SymbolicPoly::one(1) - &s).pow(4);
        let (v, m) = CompiledPoly::new(&p).eval(&[0.99]);
        assert!((v - 1e-8).abs() < 1e-15);
        assert!(m < 1e-4, "{m}");
    }
}
