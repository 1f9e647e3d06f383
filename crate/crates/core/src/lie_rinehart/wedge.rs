use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::One;

use super::LieRinehartSpec;
use crate::arith::{CPoly, Rational};
use crate::error::{Error, Result};

/// Homogeneous element of `∧^k_A` of a free module of rank `m`, keyed by
/// strictly increasing index tuples.
#[derive(Clone, PartialEq, Eq)]
pub struct Wedge {
    nvars: usize,
    rank: usize,
    deg: usize,
    terms: BTreeMap<Vec<usize>, CPoly>,
}

/// Element of `∧L`.
pub type MultiVector = Wedge;
/// Element of `∧L*`; index `i` stands for the dual basis vector `e_i*`.
pub type FormElement = Wedge;

/// Sort `idx` in place; returns the permutation sign, or `None` on a repeat.
fn sort_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for a in 1..idx.len() {
        let mut b = a;
        while b > 0 && idx[b - 1] > idx[b] {
            idx.swap(b - 1, b);
            sign = -sign;
            b -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl Wedge {
    pub fn zero(nvars: usize, rank: usize, deg: usize) -> Self {
        Wedge { nvars, rank, deg, terms: BTreeMap::new() }
    }

    pub fn scalar(f: CPoly, rank: usize) -> Self {
        let mut w = Self::zero(f.nvars(), rank, 0);
        w.add_term(vec![], &f);
        w
    }

    pub fn basis(nvars: usize, rank: usize, i: usize) -> Self {
        let mut w = Self::zero(nvars, rank, 1);
        w.add_term(vec![i], &CPoly::one(nvars));
        w
    }

    pub fn from_section(v: &[CPoly], nvars: usize) -> Self {
        let mut w = Self::zero(nvars, v.len(), 1);
        for (i, c) in v.iter().enumerate() {
            w.add_term(vec![i], c);
        }
        w
    }

    /// Coefficient vector of a degree-1 element.
    pub fn section(&self) -> Vec<CPoly> {
        assert_eq!(self.deg, 1);
        (0..self.rank).map(|i| self.coeff(&[i])).collect()
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &CPoly)> {
        self.terms.iter()
    }

    /// Coefficient on an arbitrary index tuple, with the alternating sign.
    pub fn coeff(&self, idx: &[usize]) -> CPoly {
        let mut t = idx.to_vec();
        match sort_sign(&mut t) {
            None => CPoly::zero(self.nvars),
            Some(s) => {
                let c = self.terms.get(&t).cloned().unwrap_or_else(|| CPoly::zero(self.nvars));
                if s < 0 {
                    -&c
                } else {
                    c
                }
            }
        }
    }

    /// Add `c · e_{idx}`; `idx` need not be sorted.
    pub fn add_term(&mut self, mut idx: Vec<usize>, c: &CPoly) {
        assert_eq!(idx.len(), self.deg);
        if c.is_zero() {
            return;
        }
        let Some(s) = sort_sign(&mut idx) else { return };
        let e = self.terms.entry(idx.clone()).or_insert_with(|| CPoly::zero(self.nvars));
        if s < 0 {
            e.add_scaled(c, &-Rational::one());
        } else {
            e.add_assign(c);
        }
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn mul_poly(&self, f: &CPoly) -> Wedge {
        let mut w = Self::zero(self.nvars, self.rank, self.deg);
        for (k, c) in &self.terms {
            w.add_term(k.clone(), &(c * f));
        }
        w
    }

    pub fn wedge(&self, o: &Wedge) -> Wedge {
        let mut w = Self::zero(self.nvars, self.rank, self.deg + o.deg);
        if self.deg + o.deg > self.rank {
            return w;
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                w.add_term(idx, &(ca * cb));
            }
        }
        w
    }

    fn check_shape(&self, o: &Wedge) {
        assert!(self.deg == o.deg && self.rank == o.rank, "wedge shapes differ");
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.deg == 0 {
            return self.coeff(&[]).to_string();
        }
        super::fmt_combination(
            self.terms
                .iter()
                .map(|(k, c)| (k.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join("∧"), c)),
        )
    }
}

impl Add for &Wedge {
    type Output = Wedge;
    fn add(self, o: &Wedge) -> Wedge {
        self.check_shape(o);
        let mut w = self.clone();
        for (k, c) in &o.terms {
            w.add_term(k.clone(), c);
        }
        w
    }
}

impl Sub for &Wedge {
    type Output = Wedge;
    fn sub(self, o: &Wedge) -> Wedge {
        self + &-o
    }
}

impl Neg for &Wedge {
    type Output = Wedge;
    fn neg(self) -> Wedge {
        Wedge {
            nvars: self.nvars,
            rank: self.rank,
            deg: self.deg,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl fmt::Debug for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.rank).map(|i| format!("e{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

/// Cartan differential `d_L : ∧^n L* → ∧^{n+1} L*`, evaluated on sorted
/// basis tuples.
pub fn lr_differential(spec: &LieRinehartSpec, lambda: &FormElement) -> FormElement {
    let n = lambda.deg();
    let mut out = Wedge::zero(spec.p, spec.m, n + 1);
    if n + 1 > spec.m {
        return out;
    }
    for idx in increasing_tuples(spec.m, n + 1) {
        let mut val = CPoly::zero(spec.p);
        for a in 0..=n {
            let rest: Vec<usize> = idx.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, &v)| v).collect();
            let term = spec.anchor_on(idx[a], &lambda.coeff(&rest));
            if a % 2 == 0 {
                val.add_assign(&term);
            } else {
                val = &val - &term;
            }
        }
        for a in 0..=n {
            for b in a + 1..=n {
                let br = spec.bracket_basis(idx[a], idx[b]);
                let rest: Vec<usize> =
                    idx.iter().enumerate().filter(|&(c, _)| c != a && c != b).map(|(_, &v)| v).collect();
                let mut term = CPoly::zero(spec.p);
                for (k, c) in br.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut t = vec![k];
                    t.extend_from_slice(&rest);
                    term.add_assign(&(c * &lambda.coeff(&t)));
                }
                if (a + b) % 2 == 0 {
                    val.add_assign(&term);
                } else {
                    val = &val - &term;
                }
            }
        }
        out.add_term(idx, &val);
    }
    out
}

pub(crate) fn increasing_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Schouten bracket for degree pairs `(0|1, 0|1|2)` and `(2, 0|1)`.
pub fn schouten_bracket(spec: &LieRinehartSpec, x: &MultiVector, y: &MultiVector) -> Result<MultiVector> {
    let (p, m) = (spec.p, spec.m);
    match (x.deg(), y.deg()) {
        (0, 0) => Ok(Wedge::zero(p, m, 0)),
        (1, 0) => Ok(Wedge::scalar(spec.anchor_section(&x.section(), &y.coeff(&[])), m)),
        (0, 1) => Ok(Wedge::scalar(-&spec.anchor_section(&y.section(), &x.coeff(&[])), m)),
        (1, 1) => Ok(Wedge::from_section(&spec.bracket(&x.section(), &y.section()), p)),
        (1, 2) => {
            // ad_X is a derivation of the wedge product
            let xs = x.section();
            let mut out = Wedge::zero(p, m, 2);
            for (k, g) in y.terms() {
                let (a, b) = (k[0], k[1]);
                let ea = Wedge::basis(p, m, a);
                let eb = Wedge::basis(p, m, b);
                out = &out + &ea.wedge(&eb).mul_poly(&spec.anchor_section(&xs, g));
                let xa = Wedge::from_section(&spec.bracket(&xs, &spec.basis_section(a)), p);
                let xb = Wedge::from_section(&spec.bracket(&xs, &spec.basis_section(b)), p);
                out = &out + &(&xa.wedge(&eb) + &ea.wedge(&xb)).mul_poly(g);
            }
            Ok(out)
        }
        (0, 2) => {
            // [f, Y∧Z] = ω(Z)(f) Y − ω(Y)(f) Z
            let f = x.coeff(&[]);
            let mut out = Wedge::zero(p, m, 1);
            for (k, g) in y.terms() {
                let (a, b) = (k[0], k[1]);
                out.add_term(vec![a], &(g * &spec.anchor_on(b, &f)));
                out.add_term(vec![b], &-&(g * &spec.anchor_on(a, &f)));
            }
            Ok(out)
        }
        (2, 0) => schouten_bracket(spec, y, x),
        (2, 1) => Ok(-&schouten_bracket(spec, y, x)?),
        (a, b) => Err(Error::DegreeUnsupported(a, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn g() -> LieRinehartSpec {
        let mut s = LieRinehartSpec::new(0, 2);
        s.set_bracket(0, 1, vec![CPoly::one(0), CPoly::zero(0)]).unwrap();
        s
    }

    #[test]
    fn differential_of_function() {
        let s = LieRinehartSpec::derivations(1);
        let f = Wedge::scalar(CPoly::parse("x1^2", 1).unwrap(), 1);
        let df = lr_differential(&s, &f);
        assert_eq!(df.deg(), 1);
        assert_eq!(df.coeff(&[0]), CPoly::parse("2*x1", 1).unwrap());
    }

    #[test]
    fn differential_of_dual_basis() {
        let s = g();
        let d1 = lr_differential(&s, &Wedge::basis(0, 2, 0));
        assert_eq!(d1.coeff(&[0, 1]), CPoly::constant(0, int(-1)));
        assert!(lr_differential(&s, &Wedge::basis(0, 2, 1)).is_zero());
        // overflow beyond rank
        let top = Wedge::basis(0, 2, 0).wedge(&Wedge::basis(0, 2, 1));
        assert!(lr_differential(&s, &top).is_zero());
    }

    #[test]
    fn differential_squares_to_zero() {
        let s = LieRinehartSpec::derivations(2);
        let f = Wedge::scalar(CPoly::parse("x1^3*x2 + x2^2", 2).unwrap(), 2);
        let dd = lr_differential(&s, &lr_differential(&s, &f));
        assert!(dd.is_zero());
    }

    #[test]
    fn schouten_examples() {
        let s = g();
        let e1 = Wedge::basis(0, 2, 0);
        let e2 = Wedge::basis(0, 2, 1);
        let e12 = e1.wedge(&e2);
        assert!(schouten_bracket(&s, &e1, &e12).unwrap().is_zero());
        assert_eq!(schouten_bracket(&s, &e2, &e12).unwrap(), -&e12);
        let f = Wedge::scalar(CPoly::one(0), 2);
        assert!(schouten_bracket(&s, &e1, &f).unwrap().is_zero());
        assert!(matches!(schouten_bracket(&s, &e12, &e12), Err(Error::DegreeUnsupported(2, 2))));
    }

    #[test]
    fn wedge_signs() {
        let e1 = Wedge::basis(0, 3, 0);
        let e2 = Wedge::basis(0, 3, 1);
        let a = e1.wedge(&e2);
        let b = e2.wedge(&e1);
        assert_eq!(a, -&b);
        assert!(e1.wedge(&e1).is_zero());
        assert_eq!(a.coeff(&[1, 0]), CPoly::constant(0, int(-1)));
    }
}
