//! Lifted tensors `U ⊗_k ⋯ ⊗_k U` over the k-basis `x^γ e^α`, with
//! canonical representatives of classes in `U ⊗_A ⋯ ⊗_A U`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::arith::{Coeff, CPoly, Mono, Rational};
use crate::envelope::{split_pbw, EnvElement, Envelope};

/// One tensor leg `x^γ e^α`, stored as `(γ, α)`.
pub type Leg = (Mono, Mono);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    n: usize,
    p: usize,
    m: usize,
    terms: BTreeMap<Vec<Leg>, Rational>,
}

impl Tensor {
    pub fn zero(n: usize, p: usize, m: usize) -> Self {
        Tensor { n, p, m, terms: BTreeMap::new() }
    }

    /// `1 ⊗ ⋯ ⊗ 1`.
    pub fn one(n: usize, p: usize, m: usize) -> Self {
        let mut t = Self::zero(n, p, m);
        t.add_term(vec![(Mono::zero(p), Mono::zero(m)); n], &Rational::one());
        t
    }

    /// `u_1 ⊗ ⋯ ⊗ u_n`.
    pub fn from_legs(legs: &[EnvElement]) -> Self {
        let (p, m) = (legs[0].nvars(), legs[0].rank());
        let mut acc: Vec<(Vec<Leg>, Rational)> = vec![(Vec::new(), Rational::one())];
        for u in legs {
            let mut next = Vec::new();
            for (k, r) in &acc {
                for (g, a, c) in u.kterms() {
                    let mut k2 = k.clone();
                    k2.push((g.clone(), a.clone()));
                    next.push((k2, r * c));
                }
            }
            acc = next;
        }
        let mut t = Self::zero(legs.len(), p, m);
        for (k, r) in acc {
            t.add_term(k, &r);
        }
        t
    }

    pub fn legs(&self) -> usize {
        self.n
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Leg>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &[Leg]) -> Rational {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: Vec<Leg>, r: &Rational) {
        debug_assert_eq!(key.len(), self.n);
        if num_traits::Zero::is_zero(r) {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(r.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += r;
                if num_traits::Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Tensor, r: &Rational) {
        if num_traits::Zero::is_zero(r) {
            return;
        }
        for (k, c) in &o.terms {
            self.add_term(k.clone(), &(c * r));
        }
    }

    pub fn add(&self, o: &Tensor) -> Tensor {
        let mut t = self.clone();
        t.add_scaled(o, &Rational::one());
        t
    }

    pub fn sub(&self, o: &Tensor) -> Tensor {
        let mut t = self.clone();
        t.add_scaled(o, &-Rational::one());
        t
    }

    pub fn scale(&self, r: &Rational) -> Tensor {
        let mut t = Self::zero(self.n, self.p, self.m);
        t.add_scaled(self, r);
        t
    }

    /// Add `r · (leg_1 ⊗ ⋯ ⊗ leg_{i-1} ⊗ u ⊗ leg_{i+1} ⊗ ⋯)` expanding `u`.
    pub fn add_with_leg(&mut self, key: &[Leg], i: usize, u: &EnvElement, r: &Rational) {
        for (g, a, c) in u.kterms() {
            let mut k = key.to_vec();
            k[i] = (g.clone(), a.clone());
            self.add_term(k, &(r * c));
        }
    }

    /// Classical canonical form: all base factors pushed into the last leg,
    /// using `(a u) ⊗ v ∼ u ⊗ (a v)`.
    pub fn reduce_classical(&self) -> Tensor {
        let mut t = Self::zero(self.n, self.p, self.m);
        for (k, r) in &self.terms {
            let mut g = Mono::zero(self.p);
            let mut key = k.clone();
            for leg in key.iter_mut() {
                g = g.add(&leg.0);
                leg.0 = Mono::zero(self.p);
            }
            key[self.n - 1].0 = g;
            t.add_term(key, r);
        }
        t
    }

    /// Leg `i` as an element with the other legs fixed: groups terms by the
    /// remaining legs.
    pub fn split_leg(&self, i: usize) -> BTreeMap<Vec<Leg>, EnvElement> {
        let mut out: BTreeMap<Vec<Leg>, EnvElement> = BTreeMap::new();
        for (k, r) in &self.terms {
            let mut rest = k.clone();
            let (g, a) = rest.remove(i);
            out.entry(rest)
                .or_insert_with(|| EnvElement::zero(self.p, self.m))
                .add_assign(&EnvElement::kbasis(&g, &a, r));
        }
        out
    }

    /// Reassemble from `split_leg`-shaped data.
    pub fn join_leg(n: usize, p: usize, m: usize, i: usize, parts: &BTreeMap<Vec<Leg>, EnvElement>) -> Tensor {
        let mut t = Tensor::zero(n, p, m);
        for (rest, u) in parts {
            let mut key = rest.clone();
            key.insert(i, (Mono::zero(p), Mono::zero(m)));
            t.add_with_leg(&key, i, u, &Rational::one());
        }
        t
    }

    /// Apply a linear map to leg `i`, producing `extra + 1` legs in its place.
    pub fn map_leg(&self, i: usize, extra: usize, f: impl Fn(&Mono, &Mono) -> Tensor) -> Tensor {
        let mut t = Tensor::zero(self.n + extra, self.p, self.m);
        for (k, r) in &self.terms {
            let img = f(&k[i].0, &k[i].1);
            for (k2, r2) in &img.terms {
                let mut key = k[..i].to_vec();
                key.extend_from_slice(k2);
                key.extend_from_slice(&k[i + 1..]);
                t.add_term(key, &(r * r2));
            }
        }
        t
    }

    /// Insert `1` as a new leg at position `i` (`F ↦ F_{12}` is `i = 2`).
    pub fn insert_unit_leg(&self, i: usize) -> Tensor {
        let mut t = Tensor::zero(self.n + 1, self.p, self.m);
        for (k, r) in &self.terms {
            let mut key = k.clone();
            key.insert(i, (Mono::zero(self.p), Mono::zero(self.m)));
            t.add_term(key, r);
        }
        t
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let xnames: Vec<String> = (1..=self.p).map(|i| format!("x{i}")).collect();
        let mut parts = Vec::new();
        for (k, r) in &self.terms {
            let legs: Vec<String> = k
                .iter()
                .map(|(g, a)| {
                    let s = [g.word(&xnames), a.word(names)].iter().filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>();
                    if s.is_empty() {
                        "1".to_string()
                    } else {
                        s.join("*")
                    }
                })
                .collect();
            let c = crate::arith::fmt_rat(r);
            let body = legs.join(" ⊗ ");
            parts.push(if r.is_one() { body } else { format!("{c}*({body})") });
        }
        parts.join(" + ")
    }
}

impl Coeff for Tensor {
    fn zero_like(&self) -> Self {
        Tensor::zero(self.n, self.p, self.m)
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
        self.scale(&-Rational::one())
    }
    fn scale_ref(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.m).map(|i| format!("e{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

impl Envelope {
    /// `x^γ1 e^α1 · x^γ2 e^α2`.
    pub fn kbasis_mul(&self, a: &Leg, b: &Leg) -> EnvElement {
        let mid = self.mono_times_poly(&a.1, &b.0);
        let xg = CPoly::monomial(a.0.clone(), Rational::one());
        let mut out = self.zero();
        for (d, c) in mid.terms() {
            out.add_poly_times(&(&xg * c), &self.mono_times_mono(d, &b.1));
        }
        out
    }

    /// Factorwise product in `U ⊗_k ⋯ ⊗_k U`.
    pub fn tensor_mul(&self, s: &Tensor, t: &Tensor) -> Tensor {
        assert_eq!(s.n, t.n, "tensor leg counts differ");
        let mut out = Tensor::zero(s.n, s.p, s.m);
        for (k1, r1) in &s.terms {
            for (k2, r2) in &t.terms {
                let legs: Vec<EnvElement> = k1.iter().zip(k2).map(|(a, b)| self.kbasis_mul(a, b)).collect();
                if legs.iter().any(|u| u.is_zero()) {
                    continue;
                }
                out.add_scaled(&Tensor::from_legs(&legs), &(r1 * r2));
            }
        }
        out
    }

    /// Lifted `Δ` applied to leg `i`.
    pub fn coproduct_on_leg(&self, t: &Tensor, i: usize) -> Tensor {
        let (p, m) = (self.p(), self.m());
        t.map_leg(i, 1, |g, a| {
            let mut img = Tensor::zero(2, p, m);
            for (b, rest, c) in split_pbw(a) {
                img.add_term(vec![(g.clone(), b), (Mono::zero(p), rest)], &c);
            }
            img
        })
    }

    /// `(Δ ⊗ id^{n−1}) ∘ ⋯ ∘ Δ` on `u`, giving `n + 1` legs.
    pub fn iterated_coproduct(&self, u: &EnvElement, n: usize) -> Tensor {
        let mut t = self.coproduct(u);
        for _ in 1..n {
            t = self.coproduct_on_leg(&t, 0);
        }
        t
    }

    /// `Σ u_i a ⊗ v_i = Σ u_i ⊗ v_i a` on every adjacent leg pair and sampled `a`;
    /// returns the first offending `(a, leg)`.
    pub fn takeuchi_check(&self, t: &Tensor, samples: &[CPoly]) -> Option<(CPoly, usize)> {
        let n = t.legs();
        for a in samples {
            let ae = self.poly(a);
            for i in 0..n - 1 {
                let mut l = vec![self.one(); n];
                l[i] = ae.clone();
                let mut r = vec![self.one(); n];
                r[i + 1] = ae.clone();
                let lhs = self.tensor_mul(t, &Tensor::from_legs(&l)).reduce_classical();
                let rhs = self.tensor_mul(t, &Tensor::from_legs(&r)).reduce_classical();
                if lhs != rhs {
                    return Some((a.clone(), i));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_rinehart::LieRinehartSpec;

    fn g() -> Envelope {
        let mut s = LieRinehartSpec::new(0, 2);
        s.set_bracket(0, 1, vec![CPoly::one(0), CPoly::zero(0)]).unwrap();
        Envelope::new(s)
    }

    #[test]
    fn unit_and_simple_products() {
        let e = g();
        let one = Tensor::one(2, 0, 2);
        let t = Tensor::from_legs(&[e.gen(0), e.gen(1)]);
        assert_eq!(e.tensor_mul(&one, &t), t);
        let a = Tensor::from_legs(&[e.gen(0), e.one()]);
        let b = Tensor::from_legs(&[e.one(), e.gen(1)]);
        assert_eq!(e.tensor_mul(&a, &b), t);
    }

    #[test]
    fn coproduct_of_product() {
        let e = g();
        let u = e.mul(&e.gen(0), &e.gen(1));
        let lhs = e.coproduct(&u);
        let rhs = e.tensor_mul(&e.coproduct(&e.gen(0)), &e.coproduct(&e.gen(1)));
        assert_eq!(lhs.reduce_classical(), rhs.reduce_classical());
        assert_eq!(lhs.len(), 4);
    }

    #[test]
    fn reduction_moves_coefficients() {
        let e = Envelope::new(LieRinehartSpec::derivations(1));
        let x = e.poly(&CPoly::var(1, 0));
        let t = Tensor::from_legs(&[e.mul(&x, &e.gen(0)), e.one()]);
        let expect = Tensor::from_legs(&[e.gen(0), x.clone()]);
        assert_eq!(t.reduce_classical(), expect);
        assert_eq!(expect.reduce_classical(), expect);
    }

    #[test]
    fn coproduct_of_multiple() {
        // Δ(x e) = x e ⊗ 1 + x ⊗ e
        let e = Envelope::new(LieRinehartSpec::derivations(1));
        let x = e.poly(&CPoly::var(1, 0));
        let d = e.coproduct(&e.mul(&x, &e.gen(0)));
        let expect = Tensor::from_legs(&[e.mul(&x, &e.gen(0)), e.one()]).add(&Tensor::from_legs(&[x, e.gen(0)]));
        assert_eq!(d, expect);
    }

    #[test]
    fn takeuchi() {
        let e = Envelope::new(LieRinehartSpec::derivations(1));
        let samples = [CPoly::var(1, 0), CPoly::parse("x1^2", 1).unwrap()];
        let u = e.mul(&e.gen(0), &e.gen(0));
        assert!(e.takeuchi_check(&e.coproduct(&u), &samples).is_none());
        let bad = Tensor::from_legs(&[e.gen(0), e.one()]);
        assert!(e.takeuchi_check(&bad, &samples).is_some());
    }

    #[test]
    fn iterated() {
        let e = g();
        let t = e.iterated_coproduct(&e.gen(0), 2);
        assert_eq!(t.len(), 3);
        let u = e.mul(&e.gen(0), &e.gen(1));
        assert_eq!(e.iterated_coproduct(&u, 2).len(), 9);
        // coassociativity
        let a = e.coproduct_on_leg(&e.coproduct(&u), 0).reduce_classical();
        let b = e.coproduct_on_leg(&e.coproduct(&u), 1).reduce_classical();
        assert_eq!(a, b);
    }
}
