use std::sync::Arc;
use std::time::Instant;

use super::*;
use crate::arith::{rat, Mono};
use crate::lie_rinehart::LieRinehartSpec;

fn env2() -> Arc<Envelope> {
    Arc::new(Envelope::new(LieRinehartSpec::derivations(2)))
}

fn x(env: &Envelope, i: usize) -> CPoly {
    CPoly::var(env.p(), i)
}

fn theta1(env: &Envelope) -> EnvElement {
    EnvElement::kbasis(&Mono::unit(2, 0), &Mono::unit(env.m(), 0), &Rational::one())
}

fn r_axb(env: &Envelope) -> Tensor {
    let th = theta1(env);
    let d2 = env.gen(1);
    Tensor::from_legs(&[th.clone(), d2.clone()]).sub(&Tensor::from_legs(&[d2, th]))
}

fn axb(n: usize) -> (Arc<Envelope>, Twistor) {
    let env = env2();
    let tw = Twistor::exponential(&env, r_axb(&env), rat(1, 2), n);
    (env, tw)
}

fn el(env: &Envelope, s: &USeries, k: usize) -> String {
    env.fmt(s.coeff(k))
}

#[test]
fn trivial_twistor_is_valid() {
    let env = env2();
    let tw = Twistor::trivial(&env, 2);
    let rep = twistor_validate(env.clone(), &tw);
    assert!(rep.passed(), "{rep}");
    let d = Deformation::new(env.clone(), tw).unwrap();
    let a = d.a_const(&x(&env, 0));
    let (s, t) = d.twisted_source_target(&a);
    assert_eq!(s, d.u_const(&env.poly(&x(&env, 0))));
    assert_eq!(t, s);
}

#[test]
fn axb_twistor_passes_at_order_four() {
    let t0 = Instant::now();
    let (env, tw) = axb(4);
    let rep = twistor_validate(env, &tw);
    assert!(rep.passed(), "{rep}");
    assert!(t0.elapsed().as_secs() < 10);
}

#[test]
fn unbalanced_twistor_fails_cocycle_at_h2() {
    let env = env2();
    let one = Tensor::one(2, 2, 2);
    let b1 = Tensor::from_legs(&[theta1(&env), env.gen(1)]);
    let tw = Twistor::from_orders(vec![one.clone(), b1, Tensor::zero(2, 2, 2)]);
    let rep = twistor_validate(env, &tw);
    let c = rep.get("cocycle").unwrap();
    assert_eq!(c.status, crate::Status::Fail);
    assert!(c.witness.as_ref().unwrap().starts_with("order h^2"), "{:?}", c.witness);
}

#[test]
fn inverse_matches_geometric_series() {
    let env = env2();
    let one = Tensor::one(2, 2, 2);
    let b1 = Tensor::from_legs(&[theta1(&env), env.gen(1)]);
    let tw = Twistor::from_orders(vec![one.clone(), b1.clone(), Tensor::zero(2, 2, 2)]);
    let g = tw.invert(&env).unwrap();
    assert_eq!(*g.coeff(1), b1.scale(&-Rational::one()));
    assert_eq!(*g.coeff(2), env.tensor_mul(&b1, &b1));
    let (env, tw) = axb(3);
    let g = tw.invert(&env).unwrap();
    assert_eq!(*g.coeff(1), r_axb(&env).scale(&rat(-1, 2)));
}

#[test]
fn axb_source_target_and_star() {
    let (env, tw) = axb(3);
    let d = Deformation::new(env.clone(), tw).unwrap();
    let x1 = d.a_const(&x(&env, 0));
    let x2 = d.a_const(&x(&env, 1));
    let (s1, t1) = d.twisted_source_target(&x1);
    let mut fact = 1i64;
    for k in 0..=3usize {
        if k > 0 {
            fact *= 2 * k as i64;
        }
        let d2k = Mono::from_slice(&[0, k as u32]);
        let want = EnvElement::kbasis(&Mono::unit(2, 0), &d2k, &rat(1, fact));
        assert_eq!(*s1.coeff(k), want);
        let sign = if k % 2 == 0 { rat(1, fact) } else { rat(-1, fact) };
        assert_eq!(*t1.coeff(k), EnvElement::kbasis(&Mono::unit(2, 0), &d2k, &sign));
    }
    let (s2, t2) = d.twisted_source_target(&x2);
    assert_eq!(el(&env, &s2, 1), "-1/2*x1*d1");
    assert_eq!(el(&env, &t2, 1), "1/2*x1*d1");
    assert!(s2.coeffs()[2..].iter().all(|c| c.is_zero()));
    let c = d.star(&x1, &x2).sub(&d.star(&x2, &x1));
    assert_eq!(c, d.a_const(&x(&env, 0)).shift(1));
}

#[test]
fn decomposition_of_plain_x2() {
    let (env, tw) = axb(3);
    let d = Deformation::new(env.clone(), tw).unwrap();
    let u = d.u_const(&env.poly(&x(&env, 1)));
    let dec = d.basis_decompose(&u, Flavor::Source);
    assert_eq!(dec[&Mono::zero(2)], d.a_const(&x(&env, 1)));
    let e1 = &dec[&Mono::unit(2, 0)];
    assert_eq!(*e1.coeff(1), x(&env, 0).scale(&rat(1, 2)));
    assert_eq!(d.basis_recompose(&dec, Flavor::Source), u);
    let s = d.source(&d.a_const(&x(&env, 1)));
    let dec = d.basis_decompose(&s, Flavor::Source);
    assert_eq!(dec.len(), 1);
}

#[test]
fn coproduct_first_order_is_commutator() {
    let (env, tw) = axb(2);
    let d = Deformation::new(env.clone(), tw).unwrap();
    let u = d.u_const(&env.gen(1));
    let lift = d.tmul(&d.tmul(d.inverse(), &u.map(|x| env.coproduct(x))), &d.twistor().f);
    let dd = env.coproduct(&env.gen(1));
    let r = r_axb(&env).scale(&rat(1, 2));
    let comm = env.tensor_mul(&dd, &r).sub(&env.tensor_mul(&r, &dd));
    assert_eq!(lift.coeff(1).reduce_classical(), comm.reduce_classical());
}

#[test]
fn trivial_deformation_suite() {
    let env = env2();
    let d = Deformation::undeformed(env, 1);
    let rep = deformed_axiom_suite(&d, 2);
    assert!(rep.passed(), "{rep}");
}

#[test]
fn axb_deformation_suite() {
    let (env, tw) = axb(3);
    let d = Deformation::new(env, tw).unwrap();
    let rep = deformed_axiom_suite(&d, 2);
    assert!(rep.passed(), "{rep}");
}

#[test]
fn doubled_second_order_breaks_multiplicativity() {
    let (env, tw) = axb(2);
    let mut c = tw.f.into_coeffs();
    c[2] = c[2].scale(&rat(2, 1));
    let d = Deformation::new(env, Twistor::from_orders(c)).unwrap();
    let rep = deformed_axiom_suite(&d, 2);
    let m = rep.get("multiplicativity").unwrap();
    assert_eq!(m.status, crate::Status::Fail);
    assert!(m.witness.as_ref().unwrap().contains("order h^2"), "{:?}", m.witness);
}
