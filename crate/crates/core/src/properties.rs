//! Seeded property suites on a Lie-Rinehart spec: the enveloping algebroid
//! axioms on sampled elements, `d_L² = 0` on sampled forms and the pairing
//! axioms of the undeformed jet duals.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, monos_up_to, CPoly, Mono};
use crate::deform::Deformation;
use crate::envelope::{EnvElement, Envelope};
use crate::jets::{jet_axiom_suite, JetCtx, Side};
use crate::lie_rinehart::{lr_differential, lr_validate, FormElement, LieRinehartSpec, Wedge};
use crate::report::Report;
use crate::tensorial::Tensor;

/// Sampling sizes for [`property_suite`].
#[derive(Clone, Debug)]
pub struct SampleSize {
    pub elements: usize,
    pub forms: usize,
    pub jet_degree: usize,
    /// Monomials of degree `1..=max_degree` are used as test functions.
    pub max_degree: u32,
    /// Extra test functions on top of the monomials.
    pub extra: Vec<CPoly>,
}

impl Default for SampleSize {
    fn default() -> Self {
        SampleSize { elements: 4, forms: 3, jet_degree: 2, max_degree: 1, extra: Vec::new() }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, p: usize) -> CPoly {
    let mut f = CPoly::constant(p, int(rng.random_range(-2..=2)));
    for v in 0..p {
        let c = rng.random_range(-2..=2);
        if c != 0 {
            f.add_term(Mono::unit(p, v), &int(c));
        }
    }
    f
}

/// `f · g₁ · g₂` with random base coefficient and generators.
fn random_element(env: &Envelope, rng: &mut ChaCha8Rng) -> EnvElement {
    let (p, m) = (env.p(), env.m());
    let mut u = env.poly(&random_poly(rng, p));
    for _ in 0..rng.random_range(1..=2) {
        let g = env.gen(rng.random_range(0..m));
        u = env.mul(&u, &g.add(&env.poly(&random_poly(rng, p))));
    }
    u
}

fn random_form(spec: &LieRinehartSpec, rng: &mut ChaCha8Rng, deg: usize) -> FormElement {
    let mut w = Wedge::zero(spec.p, spec.m, deg);
    if deg > spec.m {
        return w;
    }
    for _ in 0..2 {
        let mut idx: Vec<usize> = (0..spec.m).collect();
        while idx.len() > deg {
            idx.remove(rng.random_range(0..idx.len()));
        }
        w.add_term(idx, &random_poly(rng, spec.p));
    }
    w
}

/// `(ε ⊗ id)` and `(id ⊗ ε)` of a classically reduced two-leg tensor.
fn counit_legs(env: &Envelope, t: &Tensor) -> (EnvElement, EnvElement) {
    let m = env.m();
    let mut left = env.zero();
    let mut right = env.zero();
    for (key, r) in t.terms() {
        let (g0, a0) = &key[0];
        let (g1, a1) = &key[1];
        if a0.is_zero() {
            left.add_assign(&EnvElement::kbasis(&g0.add(g1), a1, r));
        }
        let e1 = env.counit(&EnvElement::kbasis(g1, a1, r));
        let u0 = EnvElement::kbasis(g0, a0, &int(1));
        right.add_assign(&env.mul(&EnvElement::from_poly(e1, m), &u0));
    }
    (left, right)
}

/// Enveloping-algebroid axioms, `d_L² = 0` and jet pairing axioms on samples
/// drawn deterministically from `seed`.
pub fn property_suite(spec: &LieRinehartSpec, seed: u64, size: &SampleSize) -> Report {
    let mut rep = Report::new();
    rep.merge("lr", lr_validate(spec));
    let env = Arc::new(Envelope::new(spec.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let us: Vec<EnvElement> = (0..size.elements).map(|_| random_element(&env, &mut rng)).collect();
    let fmt = |u: &EnvElement| env.fmt(u);
    let samples: Vec<CPoly> = monos_up_to(spec.p, size.max_degree)
        .into_iter()
        .filter(|m| !m.is_zero())
        .map(|m| CPoly::monomial(m, int(1)))
        .chain(size.extra.iter().cloned())
        .chain([random_poly(&mut rng, spec.p)])
        .collect();

    let mut assoc = None;
    let mut unit = None;
    let mut mult = None;
    for u in &us {
        if unit.is_none() && (env.mul(u, &env.one()) != *u || env.mul(&env.one(), u) != *u) {
            unit = Some(fmt(u));
        }
        for v in &us {
            let uv = env.mul(u, v);
            if mult.is_none() {
                let lhs = env.coproduct(&uv).reduce_classical();
                let rhs = env.tensor_mul(&env.coproduct(u), &env.coproduct(v)).reduce_classical();
                if lhs != rhs {
                    mult = Some(format!("Δ(({})·({}))", fmt(u), fmt(v)));
                }
            }
            for w in &us {
                if assoc.is_none() && env.mul(&uv, w) != env.mul(u, &env.mul(v, w)) {
                    assoc = Some(format!("(({})·({}))·({})", fmt(u), fmt(v), fmt(w)));
                }
            }
        }
    }
    rep.record("pbw.associativity", assoc);
    rep.record("pbw.unit", unit);
    rep.record("coproduct.multiplicative", mult);

    let mut coassoc = None;
    let mut counit = None;
    let mut takeuchi = None;
    for u in &us {
        let d = env.coproduct(u);
        let a = env.coproduct_on_leg(&d, 0).reduce_classical();
        let b = env.coproduct_on_leg(&d, 1).reduce_classical();
        if coassoc.is_none() && a != b {
            coassoc = Some(fmt(u));
        }
        let (l, r) = counit_legs(&env, &d.reduce_classical());
        if counit.is_none() && (l != *u || r != *u) {
            counit = Some(format!("{}: (ε⊗id)Δ = {}, (id⊗ε)Δ = {}", fmt(u), fmt(&l), fmt(&r)));
        }
        if takeuchi.is_none() {
            if let Some((a, leg)) = env.takeuchi_check(&d, &samples) {
                takeuchi = Some(format!("Δ({}) with a = {a} at legs {leg},{}", fmt(u), leg + 1));
            }
        }
    }
    rep.record("coproduct.coassociativity", coassoc);
    rep.record("coproduct.counit", counit);
    rep.record("coproduct.takeuchi", takeuchi);

    let mut dd = None;
    'forms: for deg in 0..spec.m.min(2) + 1 {
        for _ in 0..size.forms {
            let w = random_form(spec, &mut rng, deg);
            let d2 = lr_differential(spec, &lr_differential(spec, &w));
            if !d2.is_zero() {
                dd = Some(format!("d²({w:?}) = {d2:?}"));
                break 'forms;
            }
        }
    }
    rep.record("differential.d_squared", dd);

    let ctx = JetCtx::new(Arc::new(Deformation::undeformed(env, 1)), size.jet_degree);
    for side in [Side::Left, Side::Right] {
        rep.merge(&format!("pairing.{}", side.name()), jet_axiom_suite(&ctx, side));
    }
    rep.sort();
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_rinehart::{corrupt, jacobi_violating_spec, random_valid_spec};

    #[test]
    fn random_specs_pass() {
        for seed in 0..3 {
            let rep = property_suite(&random_valid_spec(seed), seed, &SampleSize::default());
            assert!(rep.passed(), "seed {seed}: {rep}");
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let s = random_valid_spec(4);
        assert_eq!(property_suite(&s, 9, &SampleSize::default()), property_suite(&s, 9, &SampleSize::default()));
    }

    #[test]
    fn corrupted_specs_fail_with_witness() {
        let rep = property_suite(&jacobi_violating_spec(), 0, &SampleSize::default());
        assert!(rep.get("lr.jacobi").is_some_and(|c| c.witness.is_some()), "{rep}");
        let (_, bad) = corrupt(&random_valid_spec(1)).unwrap();
        assert!(!property_suite(&bad, 1, &SampleSize::default()).passed());
    }
}
