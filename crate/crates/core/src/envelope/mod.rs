//! The left enveloping algebroid `V^ℓ(L)` in PBW normal form.

mod element;

pub use element::EnvElement;

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_traits::One;

use crate::arith::{CPoly, HSeries, Mono, Rational};
use crate::lie_rinehart::LieRinehartSpec;
use crate::tensorial::Tensor;

type Memo<K, V> = RwLock<HashMap<K, Arc<V>>>;

fn memo_get<K: Eq + Hash, V>(m: &Memo<K, V>, k: &K) -> Option<Arc<V>> {
    m.read().expect("cache poisoned").get(k).cloned()
}

fn memo_put<K: Eq + Hash, V>(m: &Memo<K, V>, k: K, v: V) -> Arc<V> {
    let v = Arc::new(v);
    m.write().expect("cache poisoned").entry(k).or_insert_with(|| v.clone()).clone()
}

/// Multiplication engine for `V^ℓ(L)`. Monomial products are memoised;
/// the caches sit behind locks so an `Envelope` can be shared across threads.
pub struct Envelope {
    spec: LieRinehartSpec,
    poly_memo: Memo<(Mono, Mono), EnvElement>,
    gen_memo: Memo<(Mono, usize), EnvElement>,
    mono_memo: Memo<(Mono, Mono), EnvElement>,
    act_memo: Memo<(Mono, Mono), CPoly>,
}

impl std::fmt::Debug for Envelope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Envelope").field("spec", &self.spec).finish_non_exhaustive()
    }
}

impl Envelope {
    pub fn new(spec: LieRinehartSpec) -> Self {
        Envelope {
            spec,
            poly_memo: RwLock::default(),
            gen_memo: RwLock::default(),
            mono_memo: RwLock::default(),
            act_memo: RwLock::default(),
        }
    }

    pub fn spec(&self) -> &LieRinehartSpec {
        &self.spec
    }

    pub fn p(&self) -> usize {
        self.spec.p
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn names(&self) -> &[String] {
        &self.spec.names
    }

    pub fn zero(&self) -> EnvElement {
        EnvElement::zero(self.p(), self.m())
    }

    pub fn one(&self) -> EnvElement {
        EnvElement::one(self.p(), self.m())
    }

    pub fn gen(&self, i: usize) -> EnvElement {
        EnvElement::gen(self.p(), self.m(), i)
    }

    pub fn poly(&self, f: &CPoly) -> EnvElement {
        EnvElement::from_poly(f.clone(), self.m())
    }

    /// `e^α`.
    pub fn pbw(&self, alpha: &Mono) -> EnvElement {
        EnvElement::monomial(alpha.clone(), CPoly::one(self.p()), self.p())
    }

    pub fn fmt(&self, u: &EnvElement) -> String {
        u.fmt_with(self.names())
    }

    /// `e^α · x^γ` in normal form.
    pub fn mono_times_poly(&self, alpha: &Mono, gamma: &Mono) -> Arc<EnvElement> {
        let key = (alpha.clone(), gamma.clone());
        if let Some(v) = memo_get(&self.poly_memo, &key) {
            return v;
        }
        let (p, m) = (self.p(), self.m());
        let out = match alpha.last_nonzero() {
            None => EnvElement::kbasis(gamma, alpha, &Rational::one()),
            Some(_) if gamma.is_zero() => self.pbw(alpha),
            Some(k) => {
                // e^α x^γ = (e^{α−ε_k} x^γ) e_k + e^{α−ε_k} ω(e_k)(x^γ)
                let a1 = alpha.dec(k).expect("nonzero slot");
                let head = self.mono_times_poly(&a1, gamma);
                let mut out = self.right_mul_gen(&head, k);
                let w = self.spec.anchor_on(k, &CPoly::monomial(gamma.clone(), Rational::one()));
                for (g, r) in w.terms() {
                    out.add_scaled(&self.mono_times_poly(&a1, g), r);
                }
                debug_assert_eq!((out.nvars(), out.rank()), (p, m));
                out
            }
        };
        memo_put(&self.poly_memo, key, out)
    }

    /// `e^δ · e_j` in normal form.
    pub fn mono_times_gen(&self, delta: &Mono, j: usize) -> Arc<EnvElement> {
        match delta.last_nonzero() {
            None => return Arc::new(self.pbw(&Mono::unit(self.m(), j))),
            Some(k) if k <= j => return Arc::new(self.pbw(&delta.inc(j))),
            _ => {}
        }
        let key = (delta.clone(), j);
        if let Some(v) = memo_get(&self.gen_memo, &key) {
            return v;
        }
        let k = delta.last_nonzero().expect("nonzero");
        let d1 = delta.dec(k).expect("nonzero slot");
        // e^δ e_j = (e^{δ−ε_k} e_j) e_k + e^{δ−ε_k} [e_k, e_j]
        let head = self.mono_times_gen(&d1, j);
        let mut out = self.right_mul_gen(&head, k);
        for (l, c) in self.spec.bracket_basis(k, j).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut dc = self.zero();
            for (g, r) in c.terms() {
                dc.add_scaled(&self.mono_times_poly(&d1, g), r);
            }
            out.add_assign(&self.right_mul_gen(&dc, l));
        }
        memo_put(&self.gen_memo, key, out)
    }

    /// `u · e_k`.
    pub fn right_mul_gen(&self, u: &EnvElement, k: usize) -> EnvElement {
        let mut out = self.zero();
        for (d, c) in u.terms() {
            out.add_poly_times(c, &self.mono_times_gen(d, k));
        }
        out
    }

    /// `e^δ · e^β` in normal form.
    pub fn mono_times_mono(&self, delta: &Mono, beta: &Mono) -> Arc<EnvElement> {
        let (Some(last), Some(first)) = (delta.last_nonzero(), beta.first_nonzero()) else {
            return Arc::new(self.pbw(&delta.add(beta)));
        };
        if last <= first {
            return Arc::new(self.pbw(&delta.add(beta)));
        }
        let key = (delta.clone(), beta.clone());
        if let Some(v) = memo_get(&self.mono_memo, &key) {
            return v;
        }
        let rest = beta.dec(first).expect("nonzero slot");
        let head = self.mono_times_gen(delta, first);
        let mut out = self.zero();
        for (d, c) in head.terms() {
            out.add_poly_times(c, &self.mono_times_mono(d, &rest));
        }
        memo_put(&self.mono_memo, key, out)
    }

    /// `u · e^β`.
    pub fn right_mul_pbw(&self, u: &EnvElement, beta: &Mono) -> EnvElement {
        let mut out = self.zero();
        for (d, c) in u.terms() {
            out.add_poly_times(c, &self.mono_times_mono(d, beta));
        }
        out
    }

    /// `e^α · b` for a base function `b`.
    pub fn pbw_times_poly(&self, alpha: &Mono, b: &CPoly) -> EnvElement {
        let mut out = self.zero();
        for (g, r) in b.terms() {
            out.add_scaled(&self.mono_times_poly(alpha, g), r);
        }
        out
    }

    /// Associative product in normal form.
    pub fn mul(&self, u: &EnvElement, v: &EnvElement) -> EnvElement {
        let mut out = self.zero();
        for (beta, b) in v.terms() {
            for (alpha, a) in u.terms() {
                let ab = self.pbw_times_poly(alpha, b);
                for (d, c) in ab.terms() {
                    out.add_poly_times(&(a * c), &self.mono_times_mono(d, beta));
                }
            }
        }
        out
    }

    /// `u · f` for a base function `f`.
    pub fn mul_poly_right(&self, u: &EnvElement, f: &CPoly) -> EnvElement {
        let mut out = self.zero();
        for (alpha, a) in u.terms() {
            out.add_poly_times(a, &self.pbw_times_poly(alpha, f));
        }
        out
    }

    /// Product of truncated series of elements.
    pub fn mul_series(&self, u: &HSeries<EnvElement>, v: &HSeries<EnvElement>) -> HSeries<EnvElement> {
        u.mul_with(v, |a, b| self.mul(a, b)).expect("truncation mismatch")
    }

    pub fn pow(&self, u: &EnvElement, k: u32) -> EnvElement {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, u))
    }

    /// `e^α . x^γ = ε(e^α x^γ)`, i.e. iterated anchors applied right to left.
    pub fn act_mono(&self, alpha: &Mono, gamma: &Mono) -> Arc<CPoly> {
        let Some(k) = alpha.first_nonzero() else {
            return Arc::new(CPoly::monomial(gamma.clone(), Rational::one()));
        };
        let key = (alpha.clone(), gamma.clone());
        if let Some(v) = memo_get(&self.act_memo, &key) {
            return v;
        }
        let inner = self.act_mono(&alpha.dec(k).expect("nonzero slot"), gamma);
        let out = self.spec.anchor_on(k, &inner);
        memo_put(&self.act_memo, key, out)
    }

    /// Left anchor `u.a = ε(u a)`.
    pub fn anchor_action(&self, u: &EnvElement, a: &CPoly) -> CPoly {
        let mut out = CPoly::zero(self.p());
        for (alpha, c) in u.terms() {
            let mut acc = CPoly::zero(self.p());
            for (g, r) in a.terms() {
                acc.add_scaled(&self.act_mono(alpha, g), r);
            }
            out.add_assign(&(c * &acc));
        }
        out
    }

    /// `ε(u)`: the `α = 0` coefficient of the normal form.
    pub fn counit(&self, u: &EnvElement) -> CPoly {
        u.coeff(&Mono::zero(self.m()))
    }

    /// Lifted `Δ(a e^α) = Σ_{β ≤ α} C(α,β) a e^β ⊗ e^{α−β}`.
    pub fn coproduct(&self, u: &EnvElement) -> Tensor {
        let mut t = Tensor::zero(2, self.p(), self.m());
        for (g, alpha, r) in u.kterms() {
            for (beta, rest, c) in split_pbw(alpha) {
                t.add_term(vec![(g.clone(), beta), (Mono::zero(self.p()), rest)], &(r * c));
            }
        }
        t
    }

    /// Whether `Δ(u) = u⊗1 + 1⊗u` in `U ⊗_A U`.
    pub fn primitive_check(&self, u: &EnvElement) -> bool {
        let one = self.one();
        let d = self
            .coproduct(u)
            .sub(&Tensor::from_legs(&[u.clone(), one.clone()]))
            .sub(&Tensor::from_legs(&[one, u.clone()]));
        d.reduce_classical().is_zero()
    }

    /// The anti-isomorphism `Ξ` (`a ↦ a`, `e_i ↦ −e_i`, products reversed),
    /// presented inside `V^ℓ(L)` with its own multiplication.
    pub fn right_from_left(&self, u: &EnvElement) -> EnvElement {
        let mut out = self.zero();
        for (alpha, a) in u.terms() {
            // Ξ(a e^α) = (−1)^{|α|} e_m^{α_m} ⋯ e_1^{α_1} · a
            let mut w = self.one();
            for i in (0..self.m()).rev() {
                for _ in 0..alpha.0[i] {
                    w = self.right_mul_gen(&w, i);
                }
            }
            let w = self.mul_poly_right(&w, a);
            let sign = if alpha.degree() % 2 == 0 { Rational::one() } else { -Rational::one() };
            out.add_scaled(&w, &sign);
        }
        out
    }
}

/// `(β, α−β, C(α,β))` for all `β ≤ α`.
pub(crate) fn split_pbw(alpha: &Mono) -> Vec<(Mono, Mono, Rational)> {
    let mut out = vec![(Mono::zero(alpha.len()), alpha.clone(), Rational::one())];
    for (i, &a) in alpha.0.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for (b, r, c) in &out {
            for k in 0..=a {
                let mut b2 = b.clone();
                let mut r2 = r.clone();
                b2.0[i] = k;
                r2.0[i] = a - k;
                next.push((b2, r2, c * binomial(a, k)));
            }
        }
        out = next;
    }
    out
}

pub(crate) fn binomial(n: u32, k: u32) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn weyl1() -> Envelope {
        Envelope::new(LieRinehartSpec::derivations(1))
    }

    fn g() -> Envelope {
        let mut s = LieRinehartSpec::new(0, 2);
        s.set_bracket(0, 1, vec![CPoly::one(0), CPoly::zero(0)]).unwrap();
        Envelope::new(s)
    }

    #[test]
    fn derivation_times_coordinate() {
        let e = weyl1();
        let x = e.poly(&CPoly::var(1, 0));
        let d = e.gen(0);
        let prod = e.mul(&d, &x);
        // ∂·x = x∂ + 1
        let xd = EnvElement::monomial(Mono::unit(1, 0), CPoly::var(1, 0), 1);
        assert_eq!(prod, xd.add(&e.one()));
        assert_eq!(e.counit(&prod), CPoly::one(1));
    }

    #[test]
    fn bracket_rewrite() {
        let e = g();
        let prod = e.mul(&e.gen(1), &e.gen(0));
        let e12 = e.mul(&e.gen(0), &e.gen(1));
        assert_eq!(prod, e12.sub(&e.gen(0)));
    }

    #[test]
    fn unit_laws_and_associativity() {
        let e = Envelope::new(crate::lie_rinehart::random_valid_spec(1));
        let u = e.mul(&e.gen(2), &e.poly(&CPoly::parse("x1^2 + 1", 1).unwrap()));
        let v = e.mul(&e.gen(1), &e.gen(0));
        let w = e.add_sample();
        assert_eq!(e.mul(&u, &e.one()), u);
        assert_eq!(e.mul(&e.one(), &u), u);
        assert_eq!(e.mul(&e.mul(&u, &v), &w), e.mul(&u, &e.mul(&v, &w)));
    }

    impl Envelope {
        fn add_sample(&self) -> EnvElement {
            let x = self.poly(&CPoly::var(self.p(), 0));
            self.mul(&self.mul(&x, &self.gen(0)), &self.gen(self.m() - 1)).add(&x)
        }
    }

    #[test]
    fn anchor_action_examples() {
        let e = weyl1();
        let x3 = CPoly::parse("x1^3", 1).unwrap();
        assert_eq!(e.anchor_action(&e.gen(0), &x3), CPoly::parse("3*x1^2", 1).unwrap());
        let u = e.mul(&e.gen(0), &e.gen(0));
        assert_eq!(e.anchor_action(&u, &CPoly::one(1)), e.counit(&u));
        // zero anchor: e.x = 0
        let z = Envelope::new(LieRinehartSpec::new(1, 1));
        assert!(z.anchor_action(&z.gen(0), &CPoly::var(1, 0)).is_zero());
    }

    #[test]
    fn counit_examples() {
        let e = weyl1();
        let u = e.poly(&CPoly::parse("x1^2", 1).unwrap()).add(&e.mul(&e.poly(&CPoly::parse("3*x1", 1).unwrap()), &e.gen(0)));
        assert_eq!(e.counit(&u), CPoly::parse("x1^2", 1).unwrap());
        assert_eq!(e.counit(&e.one()), CPoly::one(1));
    }

    #[test]
    fn primitives() {
        let e = g();
        assert!(e.primitive_check(&e.gen(0).add(&e.gen(1).scale(&int(3)))));
        assert!(!e.primitive_check(&e.mul(&e.gen(0), &e.gen(1))));
        assert!(!e.primitive_check(&e.one()));
    }

    #[test]
    fn xi_is_anti_multiplicative() {
        let e = g();
        assert_eq!(e.right_from_left(&e.gen(0)), e.gen(0).neg());
        let u = e.gen(0);
        let v = e.gen(1);
        let lhs = e.right_from_left(&e.mul(&u, &v));
        let rhs = e.mul(&e.right_from_left(&v), &e.right_from_left(&u));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(split_pbw(&Mono::from_slice(&[1, 1])).len(), 4);
    }
}
