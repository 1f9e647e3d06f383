//! Twisted deformations of `V^ℓ(L)[[h]]`: twistors, the star product,
//! twisted source/target maps, twisted coproducts and canonical forms in
//! the deformed tensor square.

mod suite;

pub use suite::{deformed_axiom_suite, twistor_validate};

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_traits::One;

use crate::arith::{hseries_invert, CPoly, HSeries, Mono, Rational};
use crate::envelope::{EnvElement, Envelope};
use crate::error::{Error, Result};
use crate::tensorial::{Leg, Tensor};

/// Elements of `A_h`, `U_h` and `U_h^{⊗n}` truncated at order `N`.
pub type ASeries = HSeries<CPoly>;
pub type USeries = HSeries<EnvElement>;
pub type TSeries = HSeries<Tensor>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// `u = Σ s_F(a_β) e^β`
    Source,
    /// `u = Σ t_F(a_β) e^β`
    Target,
}

/// A lifted twistor `F̃ ∈ (U ⊗_k U)[[h]]`, optionally of the form `exp(h·w·r)`.
#[derive(Clone, Debug)]
pub struct Twistor {
    pub f: TSeries,
    pub exponent: Option<(Tensor, Rational)>,
}

impl Twistor {
    pub fn trivial(env: &Envelope, n: usize) -> Self {
        let one = Tensor::one(2, env.p(), env.m());
        Twistor { f: HSeries::constant(n, one), exponent: None }
    }

    /// `exp(h w r) = Σ_k h^k w^k r^k / k!` in the lifted tensor square.
    pub fn exponential(env: &Envelope, r: Tensor, w: Rational, n: usize) -> Self {
        let f = exp_series(env, &r, &w, n);
        Twistor { f, exponent: Some((r, w)) }
    }

    pub fn from_orders(orders: Vec<Tensor>) -> Self {
        Twistor { f: HSeries::from_coeffs(orders), exponent: None }
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    /// The lifted inverse: `exp(−h w r)` for exponential twistors (checked
    /// against the product with `F̃`), order-by-order inversion otherwise.
    pub fn invert(&self, env: &Envelope) -> Result<TSeries> {
        let n = self.order();
        let one = Tensor::one(2, env.p(), env.m());
        let series = hseries_invert(&self.f, &one, |a, b| env.tensor_mul(a, b), |t| *t == one)?;
        if let Some((r, w)) = &self.exponent {
            let closed = exp_series(env, r, &-w.clone(), n);
            if closed != series {
                return Err(Error::Semantic("closed-form inverse disagrees with series inversion".into()));
            }
        }
        Ok(series)
    }
}

fn exp_series(env: &Envelope, r: &Tensor, w: &Rational, n: usize) -> TSeries {
    let mut out = Vec::with_capacity(n + 1);
    let mut pow = Tensor::one(2, env.p(), env.m());
    let mut c = Rational::one();
    for k in 0..=n {
        out.push(pow.scale(&c));
        pow = env.tensor_mul(&pow, r);
        c = c * w / Rational::from_integer((k as i64 + 1).into());
    }
    HSeries::from_coeffs(out)
}

type Memo<K, V> = RwLock<HashMap<K, Arc<V>>>;

fn memo_get<K: Eq + Hash, V>(m: &Memo<K, V>, k: &K) -> Option<Arc<V>> {
    m.read().expect("cache poisoned").get(k).cloned()
}

fn memo_put<K: Eq + Hash, V>(m: &Memo<K, V>, k: K, v: V) -> Arc<V> {
    let v = Arc::new(v);
    m.write().expect("cache poisoned").entry(k).or_insert_with(|| v.clone()).clone()
}

/// Coefficients `a_β`, each a truncated list of base polynomials.
type Decomp = BTreeMap<Mono, Vec<CPoly>>;

/// `V^ℓ(L)[[h]]` twisted by a twistor, truncated at order `N`.
pub struct Deformation {
    env: Arc<Envelope>,
    n: usize,
    twistor: Twistor,
    g: TSeries,
    /// `(order, leg1, leg2, coeff)` of `F̃`
    f_terms: Vec<(usize, Leg, Leg, Rational)>,
    s_memo: Memo<Mono, USeries>,
    t_memo: Memo<Mono, USeries>,
    star_memo: Memo<(Mono, Mono), ASeries>,
    decomp_memo: Memo<(Flavor, Mono, Mono, usize), Decomp>,
    gen_cop_memo: Memo<usize, TSeries>,
    pbw_cop_memo: Memo<Mono, TSeries>,
    kcop_memo: Memo<(Mono, Mono), TSeries>,
}

impl std::fmt::Debug for Deformation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Deformation").field("n", &self.n).finish_non_exhaustive()
    }
}

impl Deformation {
    pub fn new(env: Arc<Envelope>, twistor: Twistor) -> Result<Self> {
        let n = twistor.order();
        let one = Tensor::one(2, env.p(), env.m());
        if *twistor.f.coeff(0) != one {
            return Err(Error::TriangularityViolation("order-zero twistor term is not 1⊗1".into()));
        }
        let g = twistor.invert(&env)?;
        let mut f_terms = Vec::new();
        for k in 0..=n {
            for (key, r) in twistor.f.coeff(k).terms() {
                f_terms.push((k, key[0].clone(), key[1].clone(), r.clone()));
            }
        }
        Ok(Deformation {
            env,
            n,
            twistor,
            g,
            f_terms,
            s_memo: RwLock::default(),
            t_memo: RwLock::default(),
            star_memo: RwLock::default(),
            decomp_memo: RwLock::default(),
            gen_cop_memo: RwLock::default(),
            pbw_cop_memo: RwLock::default(),
            kcop_memo: RwLock::default(),
        })
    }

    pub fn undeformed(env: Arc<Envelope>, n: usize) -> Self {
        let t = Twistor::trivial(&env, n);
        Self::new(env, t).expect("trivial twistor")
    }

    pub fn env(&self) -> &Envelope {
        &self.env
    }

    pub fn env_arc(&self) -> Arc<Envelope> {
        self.env.clone()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn twistor(&self) -> &Twistor {
        &self.twistor
    }

    pub fn inverse(&self) -> &TSeries {
        &self.g
    }

    pub fn p(&self) -> usize {
        self.env.p()
    }

    pub fn m(&self) -> usize {
        self.env.m()
    }

    // ---- constructors for series ----

    pub fn a_const(&self, f: &CPoly) -> ASeries {
        HSeries::constant(self.n, f.clone())
    }

    pub fn a_zero(&self) -> ASeries {
        HSeries::zero(self.n, &CPoly::zero(self.p()))
    }

    pub fn u_const(&self, u: &EnvElement) -> USeries {
        HSeries::constant(self.n, u.clone())
    }

    pub fn u_zero(&self) -> USeries {
        HSeries::zero(self.n, &self.env.zero())
    }

    pub fn t_zero(&self, legs: usize) -> TSeries {
        HSeries::zero(self.n, &Tensor::zero(legs, self.p(), self.m()))
    }

    pub fn t_one(&self, legs: usize) -> TSeries {
        HSeries::constant(self.n, Tensor::one(legs, self.p(), self.m()))
    }

    // ---- products ----

    pub fn mul(&self, u: &USeries, v: &USeries) -> USeries {
        self.env.mul_series(u, v)
    }

    pub fn tmul(&self, s: &TSeries, t: &TSeries) -> TSeries {
        s.mul_with(t, |a, b| self.env.tensor_mul(a, b)).expect("truncation mismatch")
    }

    /// `h^k · x` for a series `x`.
    fn shifted_add_u(acc: &mut [EnvElement], k: usize, x: &[EnvElement], r: &Rational) {
        for (j, v) in x.iter().enumerate() {
            if k + j < acc.len() && !v.is_zero() {
                acc[k + j].add_scaled(v, r);
            }
        }
    }

    // ---- twisted source / target ----

    /// `s_F(x^γ) = Σ (x_i . x^γ) y_i`.
    pub fn source_mono(&self, gamma: &Mono) -> Arc<USeries> {
        if let Some(v) = memo_get(&self.s_memo, gamma) {
            return v;
        }
        let out = self.twist_map(gamma, true);
        memo_put(&self.s_memo, gamma.clone(), out)
    }

    /// `t_F(x^γ) = Σ (y_i . x^γ) x_i`.
    pub fn target_mono(&self, gamma: &Mono) -> Arc<USeries> {
        if let Some(v) = memo_get(&self.t_memo, gamma) {
            return v;
        }
        let out = self.twist_map(gamma, false);
        memo_put(&self.t_memo, gamma.clone(), out)
    }

    fn twist_map(&self, gamma: &Mono, source: bool) -> USeries {
        let mut c = vec![self.env.zero(); self.n + 1];
        for (k, l1, l2, r) in &self.f_terms {
            let (act, rest) = if source { (l1, l2) } else { (l2, l1) };
            let a = self.env.act_mono(&act.1, gamma);
            if a.is_zero() {
                continue;
            }
            let coeff = &CPoly::monomial(act.0.clone(), r.clone()) * &a;
            c[*k].add_poly_times(&coeff, &EnvElement::kbasis(&rest.0, &rest.1, &Rational::one()));
        }
        HSeries::from_coeffs(c)
    }

    pub fn twisted_map(&self, a: &ASeries, flavor: Flavor) -> USeries {
        let mut c = vec![self.env.zero(); self.n + 1];
        for (k, ak) in a.coeffs().iter().enumerate() {
            for (g, r) in ak.terms() {
                let img = match flavor {
                    Flavor::Source => self.source_mono(g),
                    Flavor::Target => self.target_mono(g),
                };
                Self::shifted_add_u(&mut c, k, img.coeffs(), r);
            }
        }
        HSeries::from_coeffs(c)
    }

    pub fn source(&self, a: &ASeries) -> USeries {
        self.twisted_map(a, Flavor::Source)
    }

    pub fn target(&self, a: &ASeries) -> USeries {
        self.twisted_map(a, Flavor::Target)
    }

    /// `(s_F(a), t_F(a))`.
    pub fn twisted_source_target(&self, a: &ASeries) -> (USeries, USeries) {
        (self.source(a), self.target(a))
    }

    // ---- star product ----

    fn star_mono(&self, a: &Mono, b: &Mono) -> Arc<ASeries> {
        let key = (a.clone(), b.clone());
        if let Some(v) = memo_get(&self.star_memo, &key) {
            return v;
        }
        let mut c = vec![CPoly::zero(self.p()); self.n + 1];
        for (k, l1, l2, r) in &self.f_terms {
            let x = self.env.act_mono(&l1.1, a);
            if x.is_zero() {
                continue;
            }
            let y = self.env.act_mono(&l2.1, b);
            if y.is_zero() {
                continue;
            }
            let term = &(&*x * &*y).mul_mono(&l1.0.add(&l2.0), r);
            c[*k].add_assign(term);
        }
        memo_put(&self.star_memo, key, HSeries::from_coeffs(c))
    }

    /// `a *_F b = Σ (x_i . a)(y_i . b)`.
    pub fn star(&self, a: &ASeries, b: &ASeries) -> ASeries {
        let mut c = vec![CPoly::zero(self.p()); self.n + 1];
        for (i, ai) in a.coeffs().iter().enumerate() {
            for (j, bj) in b.coeffs().iter().enumerate() {
                if i + j > self.n {
                    break;
                }
                for (ga, ra) in ai.terms() {
                    for (gb, rb) in bj.terms() {
                        let s = self.star_mono(ga, gb);
                        let rr = ra * rb;
                        for (k, sk) in s.coeffs().iter().enumerate() {
                            if i + j + k <= self.n {
                                c[i + j + k].add_scaled(sk, &rr);
                            }
                        }
                    }
                }
            }
        }
        HSeries::from_coeffs(c)
    }

    /// `ε(u)`, the `α = 0` coefficient order by order.
    pub fn counit(&self, u: &USeries) -> ASeries {
        u.map(|x| self.env.counit(x))
    }

    // ---- triangular decomposition ----

    fn decomp_mono(&self, flavor: Flavor, delta: &Mono, beta: &Mono, prec: usize) -> Arc<Decomp> {
        let key = (flavor, delta.clone(), beta.clone(), prec);
        if let Some(v) = memo_get(&self.decomp_memo, &key) {
            return v;
        }
        let mut r: Decomp = BTreeMap::new();
        let mut lead = vec![CPoly::zero(self.p()); prec];
        lead[0] = CPoly::monomial(delta.clone(), Rational::one());
        r.insert(beta.clone(), lead);
        let img = match flavor {
            Flavor::Source => self.source_mono(delta),
            Flavor::Target => self.target_mono(delta),
        };
        for k in 1..prec.min(self.n + 1) {
            let sk = img.coeff(k);
            if sk.is_zero() {
                continue;
            }
            let e = self.env.right_mul_pbw(sk, beta);
            for (g, a, c) in e.kterms() {
                let sub = self.decomp_mono(flavor, g, a, prec - k);
                for (b2, v) in sub.iter() {
                    let slot = r.entry(b2.clone()).or_insert_with(|| vec![CPoly::zero(self.p()); prec]);
                    for (j, vj) in v.iter().enumerate() {
                        slot[k + j].add_scaled(vj, &-c.clone());
                    }
                }
            }
        }
        r.retain(|_, v| v.iter().any(|c| !c.is_zero()));
        memo_put(&self.decomp_memo, key, r)
    }

    /// Coefficients `a_β ∈ A_h` with `u = Σ_β s_F(a_β) e^β` (or `t_F`).
    pub fn basis_decompose(&self, u: &USeries, flavor: Flavor) -> BTreeMap<Mono, ASeries> {
        let mut out: BTreeMap<Mono, Vec<CPoly>> = BTreeMap::new();
        for (k, uk) in u.coeffs().iter().enumerate() {
            for (g, a, c) in uk.kterms() {
                let d = self.decomp_mono(flavor, g, a, self.n + 1 - k);
                for (b, v) in d.iter() {
                    let slot = out.entry(b.clone()).or_insert_with(|| vec![CPoly::zero(self.p()); self.n + 1]);
                    for (j, vj) in v.iter().enumerate() {
                        slot[k + j].add_scaled(vj, c);
                    }
                }
            }
        }
        out.into_iter()
            .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
            .map(|(b, v)| (b, HSeries::from_coeffs(v)))
            .collect()
    }

    /// Inverse of `basis_decompose`.
    pub fn basis_recompose(&self, coeffs: &BTreeMap<Mono, ASeries>, flavor: Flavor) -> USeries {
        let mut acc = self.u_zero();
        for (b, a) in coeffs {
            let img = self.twisted_map(a, flavor);
            let e = img.map(|x| self.env.right_mul_pbw(x, b));
            acc.add_assign(&e);
        }
        acc
    }

    // ---- canonical forms in the deformed tensor powers ----

    /// Leg-wise canonical form: every leg but the last is a pure PBW
    /// monomial, via `t_F(a) u ⊗ v ∼ u ⊗ s_F(a) v`.
    pub fn reduce(&self, t: &TSeries) -> TSeries {
        let legs = t.coeff(0).legs();
        let mut cur = t.clone();
        for i in 0..legs - 1 {
            cur = self.push_leg(&cur, i);
        }
        cur
    }

    fn push_leg(&self, t: &TSeries, i: usize) -> TSeries {
        let legs = t.coeff(0).legs();
        let (p, m) = (self.p(), self.m());
        let mut out: Vec<Tensor> = vec![Tensor::zero(legs, p, m); self.n + 1];
        for (k, tk) in t.coeffs().iter().enumerate() {
            for (key, r) in tk.terms() {
                let (g, a) = &key[i];
                if g.is_zero() {
                    out[k].add_term(key.clone(), r);
                    continue;
                }
                let d = self.decomp_mono(Flavor::Target, g, a, self.n + 1 - k);
                let next = EnvElement::kbasis(&key[i + 1].0, &key[i + 1].1, &Rational::one());
                for (b, coeffs) in d.iter() {
                    let mut k2 = key.clone();
                    k2[i] = (Mono::zero(p), b.clone());
                    for (j, aj) in coeffs.iter().enumerate() {
                        for (gg, rr) in aj.terms() {
                            let s = self.source_mono(gg);
                            for (l, sl) in s.coeffs().iter().enumerate() {
                                let ord = k + j + l;
                                if ord > self.n || sl.is_zero() {
                                    continue;
                                }
                                let prod = self.env.mul(sl, &next);
                                out[ord].add_with_leg(&k2, i + 1, &prod, &(r * rr));
                            }
                        }
                    }
                }
            }
        }
        HSeries::from_coeffs(out)
    }

    /// Two-leg canonical form with a pure right leg:
    /// `u ⊗ s_F(b) e^η ∼ t_F(b) u ⊗ e^η`.
    pub fn reduce_right_pure(&self, t: &TSeries) -> TSeries {
        let (p, m) = (self.p(), self.m());
        let mut out: Vec<Tensor> = vec![Tensor::zero(2, p, m); self.n + 1];
        for (k, tk) in t.coeffs().iter().enumerate() {
            for (key, r) in tk.terms() {
                let (g, a) = &key[1];
                if g.is_zero() {
                    out[k].add_term(key.clone(), r);
                    continue;
                }
                let d = self.decomp_mono(Flavor::Source, g, a, self.n + 1 - k);
                let left = EnvElement::kbasis(&key[0].0, &key[0].1, &Rational::one());
                for (eta, coeffs) in d.iter() {
                    let mut k2 = key.clone();
                    k2[1] = (Mono::zero(p), eta.clone());
                    for (j, bj) in coeffs.iter().enumerate() {
                        for (gg, rr) in bj.terms() {
                            let tt = self.target_mono(gg);
                            for (l, tl) in tt.coeffs().iter().enumerate() {
                                let ord = k + j + l;
                                if ord > self.n || tl.is_zero() {
                                    continue;
                                }
                                let prod = self.env.mul(tl, &left);
                                out[ord].add_with_leg(&k2, 0, &prod, &(r * rr));
                            }
                        }
                    }
                }
            }
        }
        HSeries::from_coeffs(out)
    }

    // ---- twisted coproduct ----

    /// `G · Δ(u) · F̃` on lifts, reduced.
    pub fn twisted_coproduct_direct(&self, u: &USeries) -> TSeries {
        let du = u.map(|x| self.env.coproduct(x));
        let lifted = self.tmul(&self.tmul(&self.g, &du), &self.twistor.f);
        self.reduce(&lifted)
    }

    fn gen_coproduct(&self, i: usize) -> Arc<TSeries> {
        if let Some(v) = memo_get(&self.gen_cop_memo, &i) {
            return v;
        }
        let out = self.twisted_coproduct_direct(&self.u_const(&self.env.gen(i)));
        memo_put(&self.gen_cop_memo, i, out)
    }

    /// Canonical `Δ_F(e^γ)`, built multiplicatively.
    pub fn pbw_coproduct(&self, gamma: &Mono) -> Arc<TSeries> {
        if let Some(v) = memo_get(&self.pbw_cop_memo, gamma) {
            return v;
        }
        let out = match gamma.last_nonzero() {
            None => self.t_one(2),
            Some(k) => {
                let head = self.pbw_coproduct(&gamma.dec(k).expect("nonzero slot"));
                let tail = self.gen_coproduct(k);
                self.reduce(&self.tmul(&head, &tail))
            }
        };
        memo_put(&self.pbw_cop_memo, gamma.clone(), out)
    }

    /// Canonical `Δ_F(x^γ e^α)` (plain multiplication by `x^γ`).
    fn kbasis_coproduct(&self, gamma: &Mono, alpha: &Mono) -> Arc<TSeries> {
        let key = (gamma.clone(), alpha.clone());
        if let Some(v) = memo_get(&self.kcop_memo, &key) {
            return v;
        }
        let u = self.u_const(&EnvElement::kbasis(gamma, alpha, &Rational::one()));
        let out = self.twisted_coproduct_uncached(&u);
        memo_put(&self.kcop_memo, key, out)
    }

    fn twisted_coproduct_uncached(&self, u: &USeries) -> TSeries {
        let dec = self.basis_decompose(u, Flavor::Source);
        let mut acc = self.t_zero(2);
        for (b, a) in dec {
            let s = self.source(&a);
            let left = s.map(|x| Tensor::from_legs(&[x.clone(), self.env.one()]));
            acc.add_assign(&self.tmul(&left, &self.pbw_coproduct(&b)));
        }
        self.reduce(&acc)
    }

    /// `Δ_F(u)` in canonical form.
    pub fn twisted_coproduct(&self, u: &USeries) -> TSeries {
        let mut acc = self.t_zero(2);
        for (k, uk) in u.coeffs().iter().enumerate() {
            for (g, a, c) in uk.kterms() {
                let d = self.kbasis_coproduct(g, a);
                acc.add_assign(&d.shift(k).scale(c));
            }
        }
        acc
    }

    /// `Δ_F` applied to leg `i` of an `n`-leg element, then reduced.
    pub fn coproduct_on_leg(&self, t: &TSeries, i: usize) -> TSeries {
        let legs = t.coeff(0).legs();
        let (p, m) = (self.p(), self.m());
        let mut out: Vec<Tensor> = vec![Tensor::zero(legs + 1, p, m); self.n + 1];
        for (k, tk) in t.coeffs().iter().enumerate() {
            for (key, r) in tk.terms() {
                let d = self.kbasis_coproduct(&key[i].0, &key[i].1);
                for (j, dj) in d.coeffs().iter().enumerate() {
                    if k + j > self.n {
                        break;
                    }
                    for (k2, r2) in dj.terms() {
                        let mut nk = key[..i].to_vec();
                        nk.extend_from_slice(k2);
                        nk.extend_from_slice(&key[i + 1..]);
                        out[k + j].add_term(nk, &(r * r2));
                    }
                }
            }
        }
        self.reduce(&HSeries::from_coeffs(out))
    }

    /// `Δ_F^{n}` with `n` legs (`n = 1` is `u` itself), left-nested, canonical.
    pub fn iterated_coproduct(&self, u: &USeries, n: usize) -> TSeries {
        assert!(n >= 1);
        let mut t = u.map(|x| Tensor::from_legs(std::slice::from_ref(x)));
        for _ in 1..n {
            t = self.coproduct_on_leg(&t, 0);
        }
        t
    }

    /// Take the element's leg `i` and multiply it on the left (or right) by `v`.
    pub fn leg_mul(&self, t: &TSeries, i: usize, v: &USeries, left: bool) -> TSeries {
        let legs = t.coeff(0).legs();
        let (p, m) = (self.p(), self.m());
        let mut out: Vec<Tensor> = vec![Tensor::zero(legs, p, m); self.n + 1];
        for (k, tk) in t.coeffs().iter().enumerate() {
            for (key, r) in tk.terms() {
                let leg = EnvElement::kbasis(&key[i].0, &key[i].1, &Rational::one());
                for (j, vj) in v.coeffs().iter().enumerate() {
                    if k + j > self.n || vj.is_zero() {
                        continue;
                    }
                    let prod = if left { self.env.mul(vj, &leg) } else { self.env.mul(&leg, vj) };
                    out[k + j].add_with_leg(key, i, &prod, r);
                }
            }
        }
        HSeries::from_coeffs(out)
    }
}

#[cfg(test)]
mod tests;
