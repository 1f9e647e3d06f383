use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::arith::{Coeff, CPoly, Mono, Rational};

/// `Σ_α a_α e^α` in PBW normal form, coefficients on the left.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnvElement {
    p: usize,
    m: usize,
    terms: BTreeMap<Mono, CPoly>,
}

impl EnvElement {
    pub fn zero(p: usize, m: usize) -> Self {
        EnvElement { p, m, terms: BTreeMap::new() }
    }

    pub fn one(p: usize, m: usize) -> Self {
        Self::from_poly(CPoly::one(p), m)
    }

    pub fn from_poly(f: CPoly, m: usize) -> Self {
        let p = f.nvars();
        Self::monomial(Mono::zero(m), f, p)
    }

    pub fn gen(p: usize, m: usize, i: usize) -> Self {
        Self::monomial(Mono::unit(m, i), CPoly::one(p), p)
    }

    /// `c · e^α`.
    pub fn monomial(alpha: Mono, c: CPoly, p: usize) -> Self {
        let m = alpha.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        EnvElement { p, m, terms }
    }

    /// `x^γ e^α` with coefficient `r`.
    pub fn kbasis(gamma: &Mono, alpha: &Mono, r: &Rational) -> Self {
        let p = gamma.len();
        Self::monomial(alpha.clone(), CPoly::monomial(gamma.clone(), r.clone()), p)
    }

    pub fn nvars(&self) -> usize {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &Mono) -> CPoly {
        self.terms.get(alpha).cloned().unwrap_or_else(|| CPoly::zero(self.p))
    }

    /// Filtration degree (largest `|α|`), `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.degree()).max()
    }

    pub fn add_term(&mut self, alpha: Mono, c: &CPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &EnvElement) {
        for (a, c) in &o.terms {
            self.add_term(a.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, o: &EnvElement, r: &Rational) {
        if num_traits::Zero::is_zero(r) {
            return;
        }
        for (a, c) in &o.terms {
            self.add_term(a.clone(), &c.scale(r));
        }
    }

    /// `self += f · o` for a base function `f` (left multiplication is free
    /// in normal form).
    pub fn add_poly_times(&mut self, f: &CPoly, o: &EnvElement) {
        if f.is_zero() {
            return;
        }
        for (a, c) in &o.terms {
            self.add_term(a.clone(), &(f * c));
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.p, self.m);
        out.add_scaled(self, r);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &EnvElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &-Rational::one());
        out
    }

    pub fn add(&self, o: &EnvElement) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    /// `f · self`.
    pub fn left_mul_poly(&self, f: &CPoly) -> Self {
        let mut out = Self::zero(self.p, self.m);
        out.add_poly_times(f, self);
        out
    }

    /// Expansion over the k-basis `x^γ e^α`.
    pub fn kterms(&self) -> impl Iterator<Item = (&Mono, &Mono, &Rational)> {
        self.terms.iter().flat_map(|(a, c)| c.terms().map(move |(g, r)| (g, a, r)))
    }

    /// Pure PBW monomials only, i.e. every coefficient is a constant.
    pub fn is_pure(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (a, c)) in self.terms.iter().enumerate() {
            let w = a.word(names);
            let cs = c.to_string();
            let (neg, body) = if w.is_empty() {
                match cs.strip_prefix('-') {
                    Some(r) if c.len() == 1 => (true, r.to_string()),
                    _ if c.len() > 1 => (false, format!("({cs})")),
                    _ => (false, cs),
                }
            } else if c.is_one() {
                (false, w)
            } else if c.len() == 1 {
                match cs.strip_prefix('-') {
                    Some("1") => (true, w),
                    Some(r) => (true, format!("{r}*{w}")),
                    None => (false, format!("{cs}*{w}")),
                }
            } else {
                (false, format!("({cs})*{w}"))
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl Coeff for EnvElement {
    fn zero_like(&self) -> Self {
        EnvElement::zero(self.p, self.m)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale_ref(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}

impl fmt::Debug for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.m).map(|i| format!("e{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}
