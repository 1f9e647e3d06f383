use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{fmt_rat, Mono, Rational};
use crate::error::{Error, Result};

/// Sparse commutative polynomial over ℚ in `x1..xp`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CPoly {
    nvars: usize,
    terms: BTreeMap<Mono, Rational>,
}

impl CPoly {
    pub fn zero(nvars: usize) -> Self {
        CPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Mono::zero(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Mono::unit(nvars, i), Rational::one())
    }

    pub fn monomial(m: Mono, c: Rational) -> Self {
        let nvars = m.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Mono, Rational)>) -> Self {
        let mut p = CPoly::zero(nvars);
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Mono::zero(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_zero())
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add_term(&mut self, m: Mono, c: &Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.len(), self.nvars);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &CPoly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, o: &CPoly, s: &Rational) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), &(c * s));
        }
    }

    pub fn scale(&self, s: &Rational) -> CPoly {
        if s.is_zero() {
            return CPoly::zero(self.nvars);
        }
        CPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    /// Multiply by c·x^m.
    pub fn mul_mono(&self, m: &Mono, c: &Rational) -> CPoly {
        if c.is_zero() {
            return CPoly::zero(self.nvars);
        }
        CPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, v)| (k.add(m), v * c)).collect() }
    }

    pub fn deriv(&self, j: usize) -> CPoly {
        let mut out = CPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some(d) = m.dec(j) {
                out.add_term(d, &(c * Rational::from_integer(BigInt::from(m.0[j]))));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> CPoly {
        (0..k).fold(CPoly::one(self.nvars), |acc, _| &acc * self)
    }

    /// Parse a polynomial literal such as `3/2*x1^2*x2 - x1 + 1`.
    pub fn parse(s: &str, nvars: usize) -> Result<CPoly> {
        let mut p = Parser { s: s.as_bytes(), pos: 0, nvars };
        let out = p.sum()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, o: &CPoly) -> CPoly {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, o: &CPoly) -> CPoly {
        let mut r = self.clone();
        r.add_scaled(o, &-Rational::one());
        r
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, o: &CPoly) -> CPoly {
        let mut out = CPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.add(m2), &(c1 * c2));
            }
        }
        out
    }
}

fn mono_str(m: &Mono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first, then reverse lexicographic
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
        for (k, (m, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let ms = mono_str(m);
            if ms.is_empty() {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "{}", ms)?;
            } else {
                write!(f, "{}*{}", fmt_rat(&a), ms)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, col: self.pos + 1, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<CPoly> {
        let mut acc = CPoly::zero(self.nvars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            let t = self.product()?;
            if sign < 0 {
                acc = &acc - &t;
            } else {
                acc.add_assign(&t);
            }
            first = false;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<CPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse::<BigInt>().unwrap())
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.ws();
            let n = self.number()?;
            return u32::try_from(n).map_err(|_| self.err("exponent too large"));
        }
        Ok(1)
    }

    fn factor(&mut self) -> Result<CPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let mut r = Rational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.ws();
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    r = Rational::new(r.numer().clone(), d);
                }
                Ok(CPoly::constant(self.nvars, r))
            }
            Some(b'x') => {
                self.pos += 1;
                let col = self.pos + 1;
                let i = self.number()?;
                let i = usize::try_from(i).unwrap_or(usize::MAX);
                if i == 0 || i > self.nvars {
                    return Err(Error::Parse {
                        line: 1,
                        col,
                        msg: format!("variable x{} outside x1..x{}", i, self.nvars),
                    });
                }
                let e = self.exponent()?;
                let mut m = Mono::zero(self.nvars);
                m.0[i - 1] = e;
                Ok(CPoly::monomial(m, Rational::one()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn parse_and_print_roundtrip() {
        let p = CPoly::parse("3/2*x1^2*x2 - x1 + 1", 2).unwrap();
        assert_eq!(p.to_string(), "3/2*x1^2*x2 - x1 + 1");
        assert_eq!(CPoly::parse(&p.to_string(), 2).unwrap(), p);
        assert_eq!(p.coeff(&Mono::from_slice(&[2, 1])), rat(3, 2));
    }

    #[test]
    fn parse_errors_carry_column() {
        match CPoly::parse("x1 + x3", 2) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 7),
            other => panic!("{other:?}"),
        }
        assert!(CPoly::parse("", 1).is_err());
        assert!(CPoly::parse("x1 +", 1).is_err());
        assert!(CPoly::parse("1/0", 1).is_err());
    }

    #[test]
    fn parentheses_and_powers() {
        let p = CPoly::parse("(x1 + 1)^2", 1).unwrap();
        assert_eq!(p, CPoly::parse("x1^2 + 2*x1 + 1", 1).unwrap());
    }

    #[test]
    fn derivative() {
        let p = CPoly::parse("x1^3*x2 + 5*x2", 2).unwrap();
        assert_eq!(p.deriv(0), CPoly::parse("3*x1^2*x2", 2).unwrap());
        assert_eq!(p.deriv(1), CPoly::parse("x1^3 + 5", 2).unwrap());
    }
}
