//! Arithmetic expressions over named real parameters.
//!
//! Grammar (whitespace ignored except as a separator):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary   := '-' unary | '+' unary | power
//! power   := atom ('^' uint)?
//! atom    := number | name | '(' sum ')'
//! ```
//!
//! Numbers are decimal literals (optional fraction and exponent) and are kept exact.
//! Division is allowed for numeric evaluation; symbolic conversion requires a constant
//! divisor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::symbolic::SymbolicPoly;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Parses `text`, binding identifiers to their index in `names`.
    pub fn parse(text: &str, names: &[&str]) -> Result<Expr> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            names,
        };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected character"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Num(q) => q.to_f64().unwrap_or(f64::NAN),
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, k) => a.eval(x).powi(*k as i32),
        }
    }

    pub fn to_symbolic(&self, nvars: usize) -> Result<SymbolicPoly> {
        Ok(match self {
            Expr::Num(q) => SymbolicPoly::constant(nvars, q.clone()),
            Expr::Var(i) => SymbolicPoly::var(nvars, *i),
            Expr::Neg(a) => -a.to_symbolic(nvars)?,
            Expr::Add(a, b) => a.to_symbolic(nvars)? + b.to_symbolic(nvars)?,
            Expr::Sub(a, b) => a.to_symbolic(nvars)? - b.to_symbolic(nvars)?,
            Expr::Mul(a, b) => a.to_symbolic(nvars)? * b.to_symbolic(nvars)?,
            Expr::Div(a, b) => {
                let d = b.to_symbolic(nvars)?;
                let zero = vec![0; nvars];
                if d.len() != 1 || !d.terms().contains_key(&zero) {
                    return Err(Error::InvalidInput(
                        "symbolic division needs a nonzero constant divisor".into(),
                    ));
                }
                a.to_symbolic(nvars)?.scale(&d.coeff(&zero).recip())
            }
            Expr::Pow(a, k) => a.to_symbolic(nvars)?.pow(*k),
        })
    }

    /// Indices of the variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.collect_vars(&mut v);
        v.sort_unstable();
        v.dedup();
        v
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(i) => out.push(*i),
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(c) if c == b'(' || c == b'.' || c.is_ascii_alphanumeric() || c == b'_' => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a non-negative integer exponent"));
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable '{name}'")))
                    }
                }
            }
            Some(_) => Err(self.err("expected a number, variable or '('")),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            std::str::from_utf8(&p.src[s..p.pos]).unwrap().to_string()
        };
        let int = digits(self);
        let mut frac = String::new();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac = digits(self);
        }
        if int.is_empty() && frac.is_empty() {
            return Err(self.err("malformed number"));
        }
        // exponent only when followed by digits, so that `2e` stays `2·e`
        let mut exp: i64 = 0;
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            let mut sign = 1;
            match self.src.get(self.pos) {
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                Some(b'+') => self.pos += 1,
                _ => {}
            }
            let e = digits(self);
            if e.is_empty() {
                self.pos = save;
            } else {
                exp = sign
                    * e.parse::<i64>()
                        .map_err(|_| self.err("exponent too large"))?;
            }
        }
        let mantissa: BigInt = format!("{int}{frac}").parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "malformed number".into(),
        })?;
        let shift = exp - frac.len() as i64;
        let ten = BigInt::from(10);
        let q = if shift >= 0 {
            BigRational::from_integer(mantissa * num_traits::pow(ten, shift as usize))
        } else {
            BigRational::new(mantissa, num_traits::pow(ten, (-shift) as usize))
        };
        Ok(Expr::Num(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAMES: &[&str] = &["alpha", "beta", "a1", "a2"];

    fn ev(s: &str, x: &[f64]) -> f64 {
        Expr::parse(s, NAMES).unwrap().eval(x)
    }

    #[test]
    fn precedence_and_unary() {
        let x = [1.5, 5.0, 0.0, 0.0];
        assert_eq!(ev("beta - alpha", &x), 3.5);
        assert_eq!(ev("2*beta", &x), 10.0);
        assert_eq!(ev("-beta^2", &x), -25.0);
        assert_eq!(ev("(beta-alpha)^2*beta", &x), 61.25);
        assert_eq!(ev("1 - 2 - 3", &x), -4.0);
        assert_eq!(ev("12/4/3", &x), 1.0);
    }

    #[test]
    fn juxtaposition() {
        let x = [0.0, 0.0, 2.0, 3.0];
        assert_eq!(ev("4a1 a2", &x), 24.0);
        assert_eq!(ev("a1^2 a2 2 a1", &x), 48.0);
        assert_eq!(ev("2(a1+a2)", &x), 10.0);
    }

    #[test]
    fn exact_decimals() {
        let e = Expr::parse("0.1 + 0.2", &[]).unwrap();
        let p = e.to_symbolic(0).unwrap();
        assert_eq!(p.coeff(&[]), BigRational::new(3.into(), 10.into()));
        let e = Expr::parse("1.5e2", &[]).unwrap();
        assert_eq!(e.eval(&[]), 150.0);
        let e = Expr::parse("25e-2", &[]).unwrap();
        assert_eq!(e, Expr::Num(BigRational::new(1.into(), 4.into())));
    }

    #[test]
    fn symbolic_conversion() {
        let p = Expr::parse("(a1 - a2)^2 / 2", NAMES)
            .unwrap()
            .to_symbolic(4)
            .unwrap();
        assert_eq!(p.to_text(NAMES), "1/2*a2^2 - a1*a2 + 1/2*a1^2");
        assert!(Expr::parse("a1/a2", NAMES).unwrap().to_symbolic(4).is_err());
    }

    #[test]
    fn errors_carry_position() {
        match Expr::parse("beta + gamma", NAMES) {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 7);
                assert!(msg.contains("gamma"));
            }
            other => panic!("{other:?}"),
        }
        assert!(Expr::parse("(beta", NAMES).is_err());
        assert!(Expr::parse("beta^x", NAMES).is_err());
        assert!(Expr::parse("", NAMES).is_err());
        assert!(Expr::parse("beta )", NAMES).is_err());
    }
}
