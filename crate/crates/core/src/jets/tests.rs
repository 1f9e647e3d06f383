use std::sync::Arc;

use super::*;
use crate::arith::rat;
use crate::deform::Twistor;
use crate::envelope::Envelope;
use crate::lie_rinehart::LieRinehartSpec;
use crate::tensorial::Tensor;

fn axb_ctx(n: usize, d: usize) -> JetCtx {
    let env = Arc::new(Envelope::new(LieRinehartSpec::derivations(2)));
    let th = EnvElement::kbasis(&Mono::unit(2, 0), &Mono::unit(2, 0), &Rational::one());
    let d2 = env.gen(1);
    let r = Tensor::from_legs(&[th.clone(), d2.clone()]).sub(&Tensor::from_legs(&[d2, th]));
    let tw = Twistor::exponential(&env, r, rat(1, 2), n);
    JetCtx::new(Arc::new(Deformation::new(env, tw).unwrap()), d)
}

fn h(ctx: &JetCtx, k: usize, r: Rational) -> KSeries {
    kmono(ctx.order(), k, r)
}

#[test]
fn left_pairing_tables() {
    let ctx = axb_ctx(4, 4);
    let (a, b) = (ctx.de(Side::Left, 0), ctx.de(Side::Left, 1));
    let ab = ctx.mul(&a, &b).unwrap();
    let ba = ctx.mul(&b, &a).unwrap();
    let dfa = ctx.dfa();
    for i in 0..=3u32 {
        for j in 0..=3u32 {
            let beta = Mono::from_slice(&[i, j]);
            let (want_ab, want_ba) = match (i, j) {
                (1, 1) => (dfa.a_const(&CPoly::one(2)), dfa.a_const(&CPoly::one(2))),
                (1, 0) => {
                    let c = CPoly::one(2).scale(&rat(1, 2));
                    (dfa.a_const(&c.scale(&rat(-1, 1))).shift(1), dfa.a_const(&c).shift(1))
                }
                _ => (dfa.a_zero(), dfa.a_zero()),
            };
            assert_eq!(ctx.value(&ab, &beta), want_ab, "de1·de2 on d1^{i} d2^{j}");
            assert_eq!(ctx.value(&ba, &beta), want_ba, "de2·de1 on d1^{i} d2^{j}");
        }
    }
}

#[test]
fn left_dual_generators() {
    let ctx = axb_ctx(3, 3);
    let s = Side::Left;
    let (de1, de2) = (ctx.de(s, 0), ctx.de(s, 1));
    let (e1, e2) = (ctx.coord(s, 0), ctx.coord(s, 1));
    let one = Rational::one();
    let c = ctx.commutator(&de1, &de2).unwrap();
    assert_eq!(ctx.differs(&c, &ctx.scale(&h(&ctx, 1, -one.clone()), &de1)), None);
    let c = ctx.commutator(&e1, &e2).unwrap();
    assert_eq!(ctx.differs(&c, &ctx.scale(&h(&ctx, 1, one.clone()), &e1)), None);
    let c = ctx.commutator(&de1, &e2).unwrap();
    assert_eq!(ctx.differs(&c, &ctx.scale(&h(&ctx, 1, -one.clone()), &e1)), None);
    let c = ctx.commutator(&de2, &e1).unwrap();
    assert_eq!(ctx.differs(&c, &ctx.scale(&h(&ctx, 1, one.clone()), &e1)), None);
    let x1 = ctx.dfa().a_const(&CPoly::var(2, 0));
    let [ls, lt, _, _] = ctx.jet_source_target(&x1);
    assert_eq!(ctx.differs(&ls, &e1), None);
    let e1_plus = ctx.combo(&[(kconst(3, one.clone()), e1.clone()), (kconst(3, one), de1.clone())]).unwrap();
    assert_eq!(ctx.differs(&lt, &e1_plus), None);
    let unit = ctx.unit(s);
    assert_eq!(ctx.coproduct_matches(&e1, &[(unit.clone(), e1.clone())]), None);
    assert_eq!(ctx.coproduct_matches(&de1, &[(de1.clone(), unit.clone()), (unit.clone(), de1.clone())]), None);
    assert!(ctx.coproduct_matches(&e1, &[(e1.clone(), unit)]).is_some());
}

#[test]
fn right_dual_generators() {
    let ctx = axb_ctx(3, 3);
    let s = Side::Right;
    let (de1, de2) = (ctx.de(s, 0), ctx.de(s, 1));
    let (e1, e2) = (ctx.coord(s, 0), ctx.coord(s, 1));
    let one = Rational::one();
    let c = ctx.commutator(&e1, &e2).unwrap();
    assert_eq!(ctx.differs(&c, &ctx.scale(&h(&ctx, 1, -one.clone()), &e1)), None);
    let c = ctx.commutator(&de1, &de2).unwrap();
    assert_eq!(ctx.differs(&c, &ctx.scale(&h(&ctx, 1, one.clone()), &de1)), None);
    let x2 = ctx.dfa().a_const(&CPoly::var(2, 1));
    let [_, _, rs, rt] = ctx.jet_source_target(&x2);
    assert_eq!(ctx.differs(&rt, &e2), None);
    let e2_plus = ctx.combo(&[(kconst(3, one.clone()), e2.clone()), (kconst(3, one), de2.clone())]).unwrap();
    assert_eq!(ctx.differs(&rs, &e2_plus), None);
    let unit = ctx.unit(s);
    assert_eq!(ctx.coproduct_matches(&e2, &[(e2.clone(), unit.clone())]), None);
}

#[test]
fn flavor_mismatch_is_rejected() {
    let ctx = axb_ctx(1, 1);
    assert_eq!(ctx.mul(&ctx.de(Side::Left, 0), &ctx.de(Side::Right, 0)).unwrap_err(), Error::FlavorMismatch);
}

#[test]
fn span_solver_recovers_relation() {
    let ctx = axb_ctx(3, 3);
    let s = Side::Left;
    let (de1, de2) = (ctx.de(s, 0), ctx.de(s, 1));
    let c = ctx.commutator(&de1, &de2).unwrap();
    let cands = [ctx.unit(s), ctx.coord(s, 0), ctx.coord(s, 1), de1.clone(), de2.clone()];
    let sol = express_in_span(&ctx, &c, &cands).unwrap();
    assert_eq!(sol[3], h(&ctx, 1, -Rational::one()));
    assert!(sol[4].is_zero());
    let sq = ctx.mul(&de1, &de1).unwrap();
    assert!(express_in_span(&ctx, &sq, &cands).is_none());
}

#[test]
fn abelian_right_dual_pairs_to_one() {
    let env = Arc::new(Envelope::new(LieRinehartSpec::new(0, 2)));
    let ctx = JetCtx::new(Arc::new(Deformation::undeformed(env.clone(), 1)), 2);
    let s = Side::Right;
    let xi = ctx.mul(&ctx.de(s, 0), &ctx.de(s, 1)).unwrap();
    let u = ctx.dfa().u_const(&env.mul(&env.gen(0), &env.gen(1)));
    assert_eq!(ctx.pair(&xi, &u), ctx.dfa().a_const(&CPoly::one(0)));
}

#[test]
fn axiom_suites_pass() {
    let ctx = axb_ctx(2, 3);
    for side in [Side::Left, Side::Right] {
        let rep = jet_axiom_suite(&ctx, side);
        assert!(rep.passed(), "{side:?}\n{rep}");
    }
    let env = Arc::new(Envelope::new(LieRinehartSpec::derivations(1)));
    let ctx = JetCtx::new(Arc::new(Deformation::undeformed(env, 2)), 3);
    assert!(jet_axiom_suite(&ctx, Side::Left).passed());
}
