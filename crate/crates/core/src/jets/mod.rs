//! Left and right duals of a (deformed) enveloping algebroid, as lazily
//! evaluated functionals on its PBW basis.

mod solve;
mod suite;

pub use solve::{express_in_span, solve_series};
pub use suite::jet_axiom_suite;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::One;

use crate::arith::{monos_up_to, CPoly, HSeries, Mono, Rational};
use crate::deform::{ASeries, Deformation, Flavor, TSeries, USeries};
use crate::envelope::EnvElement;
use crate::error::{Error, Result};

/// `U_*` (`φ(s(a)u) = a φ(u)`) or `U^*` (`ψ(t(a)u) = ψ(u) a`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Scalars `k[[h]]`.
pub type KSeries = HSeries<Rational>;

enum Node {
    /// values on `e^β`; missing entries are zero
    Table(BTreeMap<Mono, ASeries>),
    Counit,
    DualSource(ASeries),
    DualTarget(ASeries),
    Product(Jet, Jet),
    Combo(Vec<(KSeries, Jet)>),
}

/// A functional in `U_*` or `U^*`, evaluated on demand.
#[derive(Clone)]
pub struct Jet {
    side: Side,
    label: Arc<str>,
    node: Arc<Node>,
    memo: Arc<RwLock<HashMap<Mono, ASeries>>>,
}

impl Jet {
    fn new(side: Side, label: impl Into<Arc<str>>, node: Node) -> Self {
        Jet { side, label: label.into(), node: Arc::new(node), memo: Arc::default() }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(&self, label: &str) -> Jet {
        Jet { label: label.into(), ..self.clone() }
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.label, self.side.name())
    }
}

/// Leg-pure PBW index paired with the other leg.
type Split = Vec<(Mono, USeries)>;

/// Jet context over a deformation: jet degree `d` bounds what is tabulated
/// and compared; evaluation itself is exact at order `N`.
pub struct JetCtx {
    dfa: Arc<Deformation>,
    d: usize,
    split_memo: RwLock<HashMap<(Side, Mono, Mono), Arc<Split>>>,
}

impl fmt::Debug for JetCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JetCtx").field("n", &self.dfa.order()).field("d", &self.d).finish()
    }
}

pub fn kconst(n: usize, r: Rational) -> KSeries {
    HSeries::constant(n, r)
}

/// `r h^k` as a `k[[h]]` scalar.
pub fn kmono(n: usize, k: usize, r: Rational) -> KSeries {
    HSeries::monomial(n, k, r)
}

impl JetCtx {
    pub fn new(dfa: Arc<Deformation>, d: usize) -> Self {
        JetCtx { dfa, d, split_memo: RwLock::default() }
    }

    pub fn dfa(&self) -> &Deformation {
        &self.dfa
    }

    pub fn dfa_arc(&self) -> Arc<Deformation> {
        self.dfa.clone()
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.dfa.order()
    }

    /// PBW indices `|β| ≤ d`.
    pub fn indices(&self) -> Vec<Mono> {
        monos_up_to(self.dfa.m(), self.d as u32)
    }

    // ---- constructors ----

    pub fn unit(&self, side: Side) -> Jet {
        Jet::new(side, "1", Node::Counit)
    }

    pub fn table(&self, side: Side, label: &str, values: BTreeMap<Mono, ASeries>) -> Jet {
        Jet::new(side, label, Node::Table(values))
    }

    /// `de_i`: `⟨de_i, e^β⟩ = δ_{β, ε_i}`.
    pub fn de(&self, side: Side, i: usize) -> Jet {
        let dfa = &self.dfa;
        let mut t = BTreeMap::new();
        t.insert(Mono::unit(dfa.m(), i), dfa.a_const(&CPoly::one(dfa.p())));
        self.table(side, &format!("d{}", self.gen_name(i)), t)
    }

    /// `e_v`: `⟨e_v, e^β⟩ = x_v δ_{β, 0}`.
    pub fn coord(&self, side: Side, v: usize) -> Jet {
        let dfa = &self.dfa;
        let mut t = BTreeMap::new();
        t.insert(Mono::zero(dfa.m()), dfa.a_const(&CPoly::var(dfa.p(), v)));
        self.table(side, &format!("e{}", v + 1), t)
    }

    fn gen_name(&self, i: usize) -> String {
        format!("e{}", i + 1)
    }

    /// Dual source: `s^r_*(a) = ε(t(a)·)` on the left, `s_r^*(a) = ε(· s(a))` on the right.
    pub fn dual_source(&self, side: Side, a: &ASeries) -> Jet {
        Jet::new(side, format!("s({a})"), Node::DualSource(a.clone()))
    }

    /// Dual target: `t^r_*(a) = ε(· t(a))` on the left, `t_r^*(a) = ε(s(a)·)` on the right.
    pub fn dual_target(&self, side: Side, a: &ASeries) -> Jet {
        Jet::new(side, format!("t({a})"), Node::DualTarget(a.clone()))
    }

    /// `(s^r_*(a), t^r_*(a), s_r^*(a), t_r^*(a))`.
    pub fn jet_source_target(&self, a: &ASeries) -> [Jet; 4] {
        [
            self.dual_source(Side::Left, a),
            self.dual_target(Side::Left, a),
            self.dual_source(Side::Right, a),
            self.dual_target(Side::Right, a),
        ]
    }

    pub fn mul(&self, a: &Jet, b: &Jet) -> Result<Jet> {
        if a.side != b.side {
            return Err(Error::FlavorMismatch);
        }
        Ok(Jet::new(a.side, format!("{}·{}", a.label, b.label), Node::Product(a.clone(), b.clone())))
    }

    /// Left-nested product of a nonempty list.
    pub fn mul_all(&self, js: &[Jet]) -> Result<Jet> {
        let mut it = js.iter();
        let mut acc = it.next().expect("nonempty product").clone();
        for j in it {
            acc = self.mul(&acc, j)?;
        }
        Ok(acc)
    }

    /// `Σ c_k λ_k` with `c_k ∈ k[[h]]`.
    pub fn combo(&self, terms: &[(KSeries, Jet)]) -> Result<Jet> {
        let side = terms.first().map(|t| t.1.side).unwrap_or(Side::Left);
        if terms.iter().any(|t| t.1.side != side) {
            return Err(Error::FlavorMismatch);
        }
        let label = terms.iter().map(|(c, j)| format!("({c})·{}", j.label)).collect::<Vec<_>>().join(" + ");
        Ok(Jet::new(side, label, Node::Combo(terms.to_vec())))
    }

    pub fn sub(&self, a: &Jet, b: &Jet) -> Result<Jet> {
        let n = self.order();
        self.combo(&[(kconst(n, Rational::one()), a.clone()), (kconst(n, -Rational::one()), b.clone())])
    }

    /// `a·b − b·a`.
    pub fn commutator(&self, a: &Jet, b: &Jet) -> Result<Jet> {
        self.sub(&self.mul(a, b)?, &self.mul(b, a)?)
    }

    pub fn scale(&self, c: &KSeries, a: &Jet) -> Jet {
        self.combo(&[(c.clone(), a.clone())]).expect("single flavor")
    }

    // ---- evaluation ----

    /// `⟨λ, e^β⟩`.
    pub fn value(&self, j: &Jet, beta: &Mono) -> ASeries {
        if let Some(v) = j.memo.read().expect("cache poisoned").get(beta) {
            return v.clone();
        }
        let v = match &*j.node {
            Node::Table(t) => t.get(beta).cloned().unwrap_or_else(|| self.dfa.a_zero()),
            _ => self.eval(j, &self.dfa.u_const(&self.dfa.env().pbw(beta))),
        };
        j.memo.write().expect("cache poisoned").insert(beta.clone(), v.clone());
        v
    }

    /// `⟨λ, u⟩` through the flavor-appropriate basis decomposition and the
    /// values on `e^β`.
    pub fn pair(&self, j: &Jet, u: &USeries) -> ASeries {
        let dfa = &self.dfa;
        let flavor = match j.side {
            Side::Left => Flavor::Source,
            Side::Right => Flavor::Target,
        };
        let mut acc = dfa.a_zero();
        for (b, a) in dfa.basis_decompose(u, flavor) {
            let v = self.value(j, &b);
            let t = match j.side {
                Side::Left => dfa.star(&a, &v),
                Side::Right => dfa.star(&v, &a),
            };
            acc.add_assign(&t);
        }
        acc
    }

    /// `⟨λ, u⟩` straight from the defining formula of `λ`.
    pub fn eval(&self, j: &Jet, u: &USeries) -> ASeries {
        let dfa = &self.dfa;
        match &*j.node {
            Node::Table(_) => self.pair(j, u),
            Node::Counit => dfa.counit(u),
            Node::DualSource(a) => match j.side {
                Side::Left => dfa.counit(&dfa.mul(&dfa.target(a), u)),
                Side::Right => dfa.counit(&dfa.mul(u, &dfa.source(a))),
            },
            Node::DualTarget(a) => match j.side {
                Side::Left => dfa.counit(&dfa.mul(u, &dfa.target(a))),
                Side::Right => dfa.counit(&dfa.mul(&dfa.source(a), u)),
            },
            Node::Product(a, b) => {
                let mut acc = dfa.a_zero();
                for (pure, w) in self.split_coproduct(u, j.side) {
                    let v = self.value(a, &pure);
                    let moved = match j.side {
                        // φ′(t(φ(u₂)) u₁)
                        Side::Left => dfa.mul(&dfa.target(&v), &w),
                        // ψ′(s(ψ(u₁)) u₂)
                        Side::Right => dfa.mul(&dfa.source(&v), &w),
                    };
                    acc.add_assign(&self.pair(b, &moved));
                }
                acc
            }
            Node::Combo(ts) => {
                let mut acc = dfa.a_zero();
                for (c, jj) in ts {
                    acc.add_assign(&kscale(c, &self.eval(jj, u)));
                }
                acc
            }
        }
    }

    /// `Δ_F(u)` as `Σ_η w_η ⊗ e^η` (left) or `Σ_γ e^γ ⊗ w_γ` (right).
    fn split_coproduct(&self, u: &USeries, side: Side) -> Split {
        let dfa = &self.dfa;
        let mut acc: BTreeMap<Mono, USeries> = BTreeMap::new();
        for (k, uk) in u.coeffs().iter().enumerate() {
            for (g, a, c) in uk.kterms() {
                let part = self.split_kbasis(side, g, a);
                for (pure, w) in part.iter() {
                    let e = acc.entry(pure.clone()).or_insert_with(|| dfa.u_zero());
                    e.add_assign(&w.shift(k).scale(c));
                }
            }
        }
        acc.into_iter().filter(|(_, w)| !w.is_zero()).collect()
    }

    fn split_kbasis(&self, side: Side, g: &Mono, a: &Mono) -> Arc<Split> {
        let key = (side, g.clone(), a.clone());
        if let Some(v) = self.split_memo.read().expect("cache poisoned").get(&key) {
            return v.clone();
        }
        let dfa = &self.dfa;
        let u = dfa.u_const(&EnvElement::kbasis(g, a, &Rational::one()));
        let cop = dfa.twisted_coproduct(&u);
        let (form, pure_leg) = match side {
            Side::Left => (dfa.reduce_right_pure(&cop), 1),
            Side::Right => (cop, 0),
        };
        let out = split_form(dfa, &form, pure_leg);
        let out = Arc::new(out);
        self.split_memo.write().expect("cache poisoned").insert(key, out.clone());
        out
    }

    /// `⟨λ, 1⟩`, the dual counit.
    pub fn counit(&self, j: &Jet) -> ASeries {
        self.value(j, &Mono::zero(self.dfa.m()))
    }

    /// Table of `λ(e^β e^β′)` (left) or `λ(e^β′ e^β)` (right), `|β|+|β′| ≤ d`.
    pub fn coproduct_table(&self, j: &Jet) -> BTreeMap<(Mono, Mono), ASeries> {
        let env = self.dfa.env();
        let mut out = BTreeMap::new();
        for b in self.indices() {
            for b2 in self.indices() {
                if (b.degree() + b2.degree()) as usize > self.d {
                    continue;
                }
                let prod = match j.side {
                    Side::Left => env.mul(&env.pbw(&b), &env.pbw(&b2)),
                    Side::Right => env.mul(&env.pbw(&b2), &env.pbw(&b)),
                };
                out.insert((b.clone(), b2.clone()), self.pair(j, &self.dfa.u_const(&prod)));
            }
        }
        out
    }

    /// The image of `Σ λ_k ⊗ μ_k` under `χ` (left) or `ϑ` (right), on the
    /// same index set as `coproduct_table`.
    pub fn tensor_table(&self, terms: &[(Jet, Jet)]) -> BTreeMap<(Mono, Mono), ASeries> {
        let dfa = &self.dfa;
        let env = dfa.env();
        let mut out = BTreeMap::new();
        for b in self.indices() {
            for b2 in self.indices() {
                if (b.degree() + b2.degree()) as usize > self.d {
                    continue;
                }
                let (u, u2) = (dfa.u_const(&env.pbw(&b)), dfa.u_const(&env.pbw(&b2)));
                let mut acc = dfa.a_zero();
                for (l, m) in terms {
                    let v = match l.side {
                        // χ(φ⊗φ′)(u⊗u′) = φ′(u s(φ(u′)))
                        Side::Left => self.pair(m, &dfa.mul(&u, &dfa.source(&self.pair(l, &u2)))),
                        // ϑ(ψ⊗ψ′)(u⊗u′) = ψ(u′ t(ψ′(u)))
                        Side::Right => self.pair(l, &dfa.mul(&u2, &dfa.target(&self.pair(m, &u)))),
                    };
                    acc.add_assign(&v);
                }
                out.insert((b.clone(), b2.clone()), acc);
            }
        }
        out
    }

    /// `Δ(λ) = Σ λ_k ⊗ μ_k` on the tabulated range; first mismatch otherwise.
    pub fn coproduct_matches(&self, j: &Jet, terms: &[(Jet, Jet)]) -> Option<String> {
        let want = self.coproduct_table(j);
        let got = self.tensor_table(terms);
        let names = self.dfa.env().names();
        want.iter().find_map(|(k, v)| {
            let g = &got[k];
            (g != v).then(|| format!("on {} ⊗ {}: {} vs {}", self.word(&k.0, names), self.word(&k.1, names), v, g))
        })
    }

    fn word(&self, b: &Mono, names: &[String]) -> String {
        let w = b.word(names);
        if w.is_empty() {
            "1".into()
        } else {
            w
        }
    }

    /// First `e^β` (`|β| ≤ d`) on which two functionals differ.
    pub fn differs(&self, a: &Jet, b: &Jet) -> Option<String> {
        let names = self.dfa.env().names();
        self.indices().into_iter().find_map(|beta| {
            let (x, y) = (self.value(a, &beta), self.value(b, &beta));
            (x != y).then(|| format!("on {}: {} vs {}", self.word(&beta, names), x, y))
        })
    }

    /// Values on all tabulated `e^β`.
    pub fn values(&self, j: &Jet) -> BTreeMap<Mono, ASeries> {
        self.indices().into_iter().map(|b| (b.clone(), self.value(j, &b))).collect()
    }
}

fn kscale(c: &KSeries, a: &ASeries) -> ASeries {
    a.mul_with(c, |p, r| p.scale(r)).expect("truncation mismatch")
}

/// Group a two-leg form by its pure leg.
fn split_form(dfa: &Deformation, t: &TSeries, pure_leg: usize) -> Split {
    let other = 1 - pure_leg;
    let mut acc: BTreeMap<Mono, Vec<EnvElement>> = BTreeMap::new();
    for (k, tk) in t.coeffs().iter().enumerate() {
        for (key, r) in tk.terms() {
            debug_assert!(key[pure_leg].0.is_zero(), "leg not pure");
            let slot = acc
                .entry(key[pure_leg].1.clone())
                .or_insert_with(|| vec![dfa.env().zero(); dfa.order() + 1]);
            slot[k].add_assign(&EnvElement::kbasis(&key[other].0, &key[other].1, r));
        }
    }
    acc.into_iter().map(|(b, c)| (b, HSeries::from_coeffs(c))).collect()
}

#[cfg(test)]
mod tests;
