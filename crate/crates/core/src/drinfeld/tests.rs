use std::sync::Arc;

use num_traits::{One, Zero};

use super::*;
use crate::arith::{rat, CPoly, Mono, Rational};
use crate::deform::{Deformation, Twistor};
use crate::envelope::{EnvElement, Envelope};
use crate::jets::{kmono, Jet, JetCtx, Side};
use crate::lie_rinehart::LieRinehartSpec;
use crate::tensorial::Tensor;

fn axb_dfa(n: usize) -> Arc<Deformation> {
    let env = Arc::new(Envelope::new(LieRinehartSpec::derivations(2)));
    let th = EnvElement::kbasis(&Mono::unit(2, 0), &Mono::unit(2, 0), &Rational::one());
    let d2 = env.gen(1);
    let r = Tensor::from_legs(&[th.clone(), d2.clone()]).sub(&Tensor::from_legs(&[d2, th]));
    let tw = Twistor::exponential(&env, r, rat(1, 2), n);
    Arc::new(Deformation::new(env, tw).unwrap())
}

fn axb_ctx(n: usize, d: usize) -> JetCtx {
    JetCtx::new(axb_dfa(n), d)
}

fn plain_ctx(p: usize, n: usize, d: usize) -> JetCtx {
    let env = Arc::new(Envelope::new(LieRinehartSpec::derivations(p)));
    JetCtx::new(Arc::new(Deformation::undeformed(env, n)), d)
}

/// The coefficient is `r·h^e` at every known order.
fn is_mono(c: &Laurent, r: Rational, e: i64) -> bool {
    (0..c.precision()).all(|k| {
        let x = c.coeff(k).cloned().unwrap_or_else(Rational::zero);
        if k == e {
            x == r
        } else {
            x.is_zero()
        }
    }) && c.valuation().is_none_or(|v| v >= 0)
}

fn is_const(c: &Laurent, r: Rational) -> bool {
    is_mono(c, r, 0)
}

/// `[a,b]` equals `r·h^e·g` for the generator labelled `g`, nothing else.
fn relation_is(v: &VeeAlgebroid, a: &str, b: &str, g: Option<&str>, r: Rational, e: i64) {
    let (ia, ib) = (v.find(a).unwrap(), v.find(b).unwrap());
    let rel = v.relation(ia.min(ib), ia.max(ib)).unwrap();
    let sign = if ia < ib { Rational::one() } else { -Rational::one() };
    let want: Option<Word> = g.map(|g| vec![v.find(g).unwrap()]);
    for (w, c) in &rel.rhs {
        let expect = if Some(w) == want.as_ref() { r.clone() * sign.clone() } else { Rational::zero() };
        let e = if expect.is_zero() { 0 } else { e };
        assert!(is_mono(c, expect.clone(), e), "[{a},{b}] at {}: {c}, expected {expect}·h^{e}", v.word_label(w));
    }
    if let Some(w) = want {
        assert!(r.is_zero() || rel.rhs.iter().any(|(x, _)| *x == w), "[{a},{b}] has no {} term", v.word_label(&w));
    }
}

#[test]
fn vee_left_relations() {
    let ctx = axb_ctx(3, 3);
    let v = vee_build(&ctx, Side::Left).unwrap();
    let one = Rational::one();
    relation_is(&v, "ďe1", "ďe2", Some("ďe1"), -one.clone(), 0);
    relation_is(&v, "e1", "e2", Some("e1"), one.clone(), 1);
    relation_is(&v, "ďe1", "e2", Some("e1"), -one.clone(), 0);
    relation_is(&v, "ďe2", "e1", Some("e1"), one.clone(), 0);
}

#[test]
fn vee_right_relations() {
    let ctx = axb_ctx(3, 3);
    let v = vee_build(&ctx, Side::Right).unwrap();
    relation_is(&v, "ďe1", "ďe2", Some("ďe1"), Rational::one(), 0);
    relation_is(&v, "e1", "e2", Some("e1"), -Rational::one(), 1);
}

#[test]
fn vee_coproducts_and_sources() {
    let ctx = axb_ctx(3, 3);
    let v = vee_build(&ctx, Side::Left).unwrap();
    let e1 = v.find("e1").unwrap();
    let cop = v.coproducts[e1].as_ref().unwrap();
    for (a, b, c) in cop {
        let want = if a.is_none() && *b == Some(e1) { Rational::one() } else { Rational::zero() };
        assert!(is_const(c, want), "Δ(e1) at ({a:?},{b:?}) = {c}");
    }
    let d1 = v.find("ďe1").unwrap();
    let cop = v.coproducts[d1].as_ref().unwrap();
    for (a, b, c) in cop {
        let prim = (*a == Some(d1) && b.is_none()) || (a.is_none() && *b == Some(d1));
        let want = if prim { Rational::one() } else { Rational::zero() };
        assert!(is_const(c, want), "Δ(ďe1) at ({a:?},{b:?}) = {c}");
    }
    assert!(v.to_string().contains("[ďe1,ďe2]"));
}

#[test]
fn vee_semiclassical_is_lie_rinehart() {
    let ctx = axb_ctx(3, 3);
    for side in [Side::Left, Side::Right] {
        let v = vee_build(&ctx, side).unwrap();
        let (_, rep) = vee_semiclassical(&v);
        assert!(rep.passed(), "{side:?}: {rep}");
    }
}

#[test]
fn vee_rejects_rescaled_generators() {
    let ctx = axb_ctx(3, 3);
    let side = Side::Left;
    let base: Vec<Jet> = (0..2).map(|v| ctx.coord(side, v)).collect();
    let xi: Vec<Jet> = (0..2).map(|i| ctx.scale(&kmono(3, 1, Rational::one()), &ctx.de(side, i))).collect();
    assert!(vee_build_from(&ctx, side, &base, &xi).is_err());
}

#[test]
fn hprime_membership_of_rescaled_derivations() {
    let dfa = axb_dfa(4);
    let env = dfa.env();
    for i in 0..2 {
        let hd = dfa.u_const(&env.gen(i)).shift(1);
        let m = hprime_member(&dfa, &hd, 4).unwrap();
        assert!(m.member(), "h∂{}: {:?}", i + 1, m.witness);
        assert!(m.variants_agree());
    }
    let d1 = dfa.u_const(&env.gen(0));
    let m = hprime_member(&dfa, &d1, 4).unwrap();
    assert_eq!(m.failed_at, Some(1));
    assert!(m.witness.is_some());
    assert!(hprime_member(&dfa, &d1, 5).is_err());
}

#[test]
fn hprime_functions_are_members() {
    let dfa = axb_dfa(3);
    for f in [CPoly::var(2, 0), CPoly::var(2, 1), CPoly::one(2)] {
        let u = dfa.source(&dfa.a_const(&f));
        assert!(hprime_member(&dfa, &u, 3).unwrap().member(), "s({f})");
    }
}

#[test]
fn hprime_basis_undeformed_is_pbw() {
    let ctx = plain_ctx(1, 2, 2);
    let b = hprime_basis(&ctx, Side::Left, 2).unwrap();
    let dfa = ctx.dfa();
    for (alpha, th) in b.alphas.iter().zip(&b.theta) {
        let want = dfa.u_const(&EnvElement::kbasis(&Mono::zero(1), alpha, &Rational::one()));
        assert_eq!(*th, want, "θ_{alpha:?}");
    }
    assert_eq!(hprime_basis_defect(&ctx, &b).unwrap(), None);
}

#[test]
fn hprime_basis_axb() {
    let ctx = axb_ctx(3, 2);
    for side in [Side::Left, Side::Right] {
        let b = hprime_basis(&ctx, side, 2).unwrap();
        assert_eq!(b.members.len(), 6);
        assert_eq!(hprime_basis_defect(&ctx, &b).unwrap(), None, "{side:?}");
        let i = b.alphas.iter().position(|a| *a == Mono::unit(2, 0)).unwrap();
        assert_eq!(*b.theta[i].coeff(0), ctx.dfa().env().gen(0));
        for (alpha, u) in b.alphas.iter().zip(&b.members) {
            let m = hprime_member(ctx.dfa(), u, 3).unwrap();
            assert!(m.member(), "{side:?} h^|α|θ_{alpha:?}: {:?}", m.witness);
        }
    }
}

#[test]
fn axb_cobracket_values() {
    let dfa = axb_dfa(2);
    let cb = semiclassical_cobracket(&dfa).unwrap();
    let x1 = CPoly::var(2, 0);
    assert_eq!(cb.on_vars[0], vec![CPoly::zero(2), -&x1]);
    assert_eq!(cb.on_vars[1], vec![x1.clone(), CPoly::zero(2)]);
    assert_eq!(cb.on_basis[0].coeff(&[0, 1]), -&CPoly::one(2));
    assert!(cb.on_basis[1].coeff(&[0, 1]).is_zero());
    let rep = cobracket_report(&dfa, &cb);
    assert!(rep.passed(), "{rep}");
}

#[test]
fn axb_semiclassical_consistency() {
    let rep = semiclassical_consistency(&axb_ctx(2, 2));
    assert!(rep.passed(), "{rep}");
}

#[test]
fn undeformed_cobracket_vanishes() {
    let ctx = plain_ctx(2, 1, 2);
    let cb = semiclassical_cobracket(ctx.dfa()).unwrap();
    assert!(cb.on_vars.iter().flatten().all(|c| c.is_zero()));
    assert!(semiclassical_consistency(&ctx).passed());
}

#[test]
fn roundtrip_axb() {
    let ctx = axb_ctx(3, 3);
    for side in [Side::Left, Side::Right] {
        let rep = duality_roundtrip_standard(&ctx, side, 3);
        assert!(rep.passed(), "{side:?}: {rep}");
    }
}

#[test]
fn roundtrip_undeformed() {
    let rep = duality_roundtrip_standard(&plain_ctx(1, 2, 2), Side::Left, 2);
    assert!(rep.passed(), "{rep}");
}

#[test]
fn roundtrip_rejects_rescaled_input() {
    let ctx = axb_ctx(3, 3);
    let side = Side::Left;
    let base: Vec<Jet> = (0..2).map(|v| ctx.coord(side, v)).collect();
    let xi: Vec<Jet> = (0..2).map(|i| ctx.scale(&kmono(3, 1, Rational::one()), &ctx.de(side, i))).collect();
    let rep = duality_roundtrip(&ctx, side, &base, &xi, 3);
    assert!(!rep.passed());
    assert!(rep.get("vee").is_some_and(|c| c.witness.is_some()));
}
