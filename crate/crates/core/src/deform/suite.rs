use std::sync::Arc;

use num_traits::One;

use super::{ASeries, Deformation, Flavor, TSeries, Twistor, USeries};
use crate::arith::{monos_up_to, CPoly, Coeff, HSeries, Rational};
use crate::envelope::{EnvElement, Envelope};
use crate::report::{Check, Report, Status};
use crate::tensorial::Tensor;

/// Lowest order where two series disagree.
fn first_diff<T: Coeff>(a: &HSeries<T>, b: &HSeries<T>) -> Option<usize> {
    (0..=a.order()).find(|&k| a.coeff(k) != b.coeff(k))
}

fn tensor_witness(env: &Envelope, k: usize, a: &Tensor, b: &Tensor) -> String {
    format!("order h^{k}: {} vs {}", a.fmt_with(env.names()), b.fmt_with(env.names()))
}

fn record(rep: &mut Report, name: &str, n: usize, witness: Option<String>) {
    let c = match witness {
        None => Check::new(name, Status::Pass),
        Some(w) => Check::new(name, Status::Fail).with_witness(w),
    };
    rep.push(c.at_order(n));
}

pub(crate) fn base_samples(p: usize) -> Vec<CPoly> {
    monos_up_to(p, 2).into_iter().map(|g| CPoly::monomial(g, Rational::one())).collect()
}

pub(crate) fn pbw_samples(env: &Envelope, deg: u32) -> Vec<EnvElement> {
    monos_up_to(env.m(), deg).into_iter().map(|a| env.pbw(&a)).collect()
}

fn classical(s: &TSeries) -> TSeries {
    s.map(|t| t.reduce_classical())
}

/// Cocycle, both counit conditions, lifted invertibility and the derived
/// identity `F·(t_F(a)⊗1 − 1⊗s_F(a)) ≡ 0`, each at every order `≤ N`.
pub fn twistor_validate(env: Arc<Envelope>, tw: &Twistor) -> Report {
    let n = tw.order();
    let (p, m) = (env.p(), env.m());
    let mut rep = Report::new();
    let f = &tw.f;
    let one2 = Tensor::one(2, p, m);
    if *f.coeff(0) != one2 {
        rep.push(Check::new("order_zero", Status::Fail).with_witness("F_0 is not 1⊗1").at_order(0));
        return rep;
    }
    let tmul = |a: &TSeries, b: &TSeries| a.mul_with(b, |x, y| env.tensor_mul(x, y)).expect("truncation");

    // (Δ ⊗ id)(F)·F_{12} = (id ⊗ Δ)(F)·F_{23}
    let lhs = tmul(&f.map(|t| env.coproduct_on_leg(t, 0)), &f.map(|t| t.insert_unit_leg(2)));
    let rhs = tmul(&f.map(|t| env.coproduct_on_leg(t, 1)), &f.map(|t| t.insert_unit_leg(0)));
    let (lhs, rhs) = (classical(&lhs), classical(&rhs));
    record(&mut rep, "cocycle", n, first_diff(&lhs, &rhs).map(|k| tensor_witness(&env, k, lhs.coeff(k), rhs.coeff(k))));

    // m((ε⊗id)F) = 1 = m((id⊗ε)F)
    for (name, eps_leg) in [("counit_left", 0usize), ("counit_right", 1usize)] {
        let mut bad = None;
        for k in 0..=n {
            let mut acc = env.zero();
            for (key, r) in f.coeff(k).terms() {
                let (e, o) = (&key[eps_leg], &key[1 - eps_leg]);
                if !e.1.is_zero() {
                    continue;
                }
                let g = e.0.add(&o.0);
                acc.add_assign(&EnvElement::kbasis(&g, &o.1, r));
            }
            let want = if k == 0 { env.one() } else { env.zero() };
            if acc != want {
                bad = Some(format!("order h^{k}: {} ≠ {}", env.fmt(&acc), env.fmt(&want)));
                break;
            }
        }
        record(&mut rep, name, n, bad);
    }

    let dfa = match Deformation::new(env.clone(), tw.clone()) {
        Ok(d) => d,
        Err(e) => {
            rep.push(Check::new("inverse", Status::Fail).with_witness(e.to_string()).at_order(n));
            return rep;
        }
    };
    let g = dfa.inverse();
    let one = dfa.t_one(2);
    let fg = tmul(f, g);
    let gf = tmul(g, f);
    let inv_bad = first_diff(&fg, &one)
        .map(|k| format!("F·G at order h^{k}"))
        .or_else(|| first_diff(&gf, &one).map(|k| format!("G·F at order h^{k}")));
    record(&mut rep, "inverse", n, inv_bad);

    // F·(t_F(a)⊗1 − 1⊗s_F(a)) ≡ 0 in the classical quotient
    let mut bad = None;
    for a in base_samples(p) {
        let aa = dfa.a_const(&a);
        let (s, t) = dfa.twisted_source_target(&aa);
        let lt = t.map(|x| Tensor::from_legs(&[x.clone(), env.one()]));
        let rt = s.map(|x| Tensor::from_legs(&[env.one(), x.clone()]));
        let d = classical(&tmul(f, &lt.sub(&rt)));
        if let Some(k) = d.valuation() {
            bad = Some(format!("a = {a}: order h^{k}: {}", d.coeff(k).fmt_with(env.names())));
            break;
        }
    }
    record(&mut rep, "derived_identity", n, bad);

    // G descends: G·(a⊗1 − 1⊗a) ≡ 0 in the twisted quotient
    let mut bad = None;
    for v in 0..p {
        let x = env.poly(&CPoly::var(p, v));
        let d = Tensor::from_legs(&[x.clone(), env.one()]).sub(&Tensor::from_legs(&[env.one(), x]));
        let red = dfa.reduce(&tmul(g, &HSeries::constant(n, d)));
        if let Some(k) = red.valuation() {
            bad = Some(format!("x{}: order h^{k}: {}", v + 1, red.coeff(k).fmt_with(env.names())));
            break;
        }
    }
    record(&mut rep, "inverse_descends", n, bad);
    rep.sort();
    rep
}

fn fmt_a(a: &ASeries) -> String {
    a.to_string()
}

/// Deformed left bialgebroid axioms at order `N` on PBW monomials of degree
/// `≤ pbw_degree` and base monomials of degree `≤ 2`.
pub fn deformed_axiom_suite(dfa: &Deformation, pbw_degree: usize) -> Report {
    let env = dfa.env();
    let n = dfa.order();
    let p = dfa.p();
    let mut rep = Report::new();
    let bases: Vec<ASeries> = base_samples(p).iter().map(|a| dfa.a_const(a)).collect();
    let mut us: Vec<USeries> = pbw_samples(env, pbw_degree as u32).iter().map(|u| dfa.u_const(u)).collect();
    for v in 0..p {
        us.push(dfa.u_const(&env.poly(&CPoly::var(p, v))));
    }
    let one_a = dfa.a_const(&CPoly::one(p));

    // star product
    let mut bad = None;
    'outer: for a in &bases {
        for b in &bases {
            let ab = dfa.star(a, b);
            for c in &bases {
                let l = dfa.star(&ab, c);
                let r = dfa.star(a, &dfa.star(b, c));
                if let Some(k) = first_diff(&l, &r) {
                    bad = Some(format!("({a}, {b}, {c}) at order h^{k}: {} vs {}", fmt_a(&l), fmt_a(&r)));
                    break 'outer;
                }
            }
        }
    }
    record(&mut rep, "star_associativity", n, bad);
    let bad = bases.iter().find_map(|a| {
        let l = dfa.star(a, &one_a);
        let r = dfa.star(&one_a, a);
        (l != *a || r != *a).then(|| format!("a = {a}"))
    });
    record(&mut rep, "star_unit", n, bad);

    // source / target
    let (mut sbad, mut tbad, mut cbad) = (None, None, None);
    for a in &bases {
        let (sa, ta) = dfa.twisted_source_target(a);
        for b in &bases {
            let (sb, tb) = dfa.twisted_source_target(b);
            if sbad.is_none() {
                let l = dfa.mul(&sa, &sb);
                let r = dfa.source(&dfa.star(a, b));
                sbad = first_diff(&l, &r).map(|k| format!("s({a})s({b}) at order h^{k}"));
            }
            if tbad.is_none() {
                let l = dfa.mul(&ta, &tb);
                let r = dfa.target(&dfa.star(b, a));
                tbad = first_diff(&l, &r).map(|k| format!("t({a})t({b}) at order h^{k}"));
            }
            if cbad.is_none() {
                let l = dfa.mul(&sa, &tb);
                let r = dfa.mul(&tb, &sa);
                cbad = first_diff(&l, &r).map(|k| format!("s({a}) vs t({b}) at order h^{k}"));
            }
        }
    }
    record(&mut rep, "source_morphism", n, sbad);
    record(&mut rep, "target_antimorphism", n, tbad);
    record(&mut rep, "source_target_commute", n, cbad);

    // decomposition round trip
    let mut bad = None;
    'dec: for u in &us {
        for fl in [Flavor::Source, Flavor::Target] {
            for a in &bases {
                let w = dfa.mul(&dfa.u_const(&env.poly(a.coeff(0))), u);
                let d = dfa.basis_decompose(&w, fl);
                let back = dfa.basis_recompose(&d, fl);
                if let Some(k) = first_diff(&back, &w) {
                    bad = Some(format!("{:?} flavor, {} at order h^{k}", fl, env.fmt(w.coeff(0))));
                    break 'dec;
                }
            }
        }
    }
    record(&mut rep, "decomposition_roundtrip", n, bad);

    // coproducts
    let cops: Vec<TSeries> = us.iter().map(|u| dfa.twisted_coproduct(u)).collect();
    let directs: Vec<TSeries> = us.iter().map(|u| dfa.twisted_coproduct_direct(u)).collect();
    let bad = cops.iter().zip(&directs).zip(&us).find_map(|((c, d), u)| {
        first_diff(c, d).map(|k| format!("{} at order h^{k}", env.fmt(u.coeff(0))))
    });
    record(&mut rep, "coproduct_consistency", n, bad);

    let mut bad = None;
    for (u, c) in us.iter().zip(&cops) {
        let l = dfa.coproduct_on_leg(c, 0);
        let r = dfa.coproduct_on_leg(c, 1);
        if let Some(k) = first_diff(&l, &r) {
            bad = Some(format!("{}: {}", env.fmt(u.coeff(0)), tensor_witness(env, k, l.coeff(k), r.coeff(k))));
            break;
        }
    }
    record(&mut rep, "coassociativity", n, bad);

    // (ε⊗id): Σ s_F(ε(u₁))u₂ = u ; (id⊗ε): Σ t_F(ε(u₂))u₁ = u
    let (mut lbad, mut rbad) = (None, None);
    for (u, c) in us.iter().zip(&cops) {
        let mut left = dfa.u_zero();
        let mut right = dfa.u_zero();
        for (k, ck) in c.coeffs().iter().enumerate() {
            for (key, r) in ck.terms() {
                let l1 = EnvElement::kbasis(&key[0].0, &key[0].1, r);
                let l2 = EnvElement::kbasis(&key[1].0, &key[1].1, &Rational::one());
                let e1 = dfa.a_const(&env.counit(&l1)).shift(k);
                if !e1.is_zero() {
                    left.add_assign(&dfa.mul(&dfa.source(&e1), &dfa.u_const(&l2)));
                }
                let e2 = dfa.a_const(&env.counit(&l2)).shift(k);
                if !e2.is_zero() {
                    right.add_assign(&dfa.mul(&dfa.target(&e2), &dfa.u_const(&l1)));
                }
            }
        }
        if lbad.is_none() {
            lbad = first_diff(&left, u).map(|k| format!("{} at order h^{k}", env.fmt(u.coeff(0))));
        }
        if rbad.is_none() {
            rbad = first_diff(&right, u).map(|k| format!("{} at order h^{k}", env.fmt(u.coeff(0))));
        }
    }
    record(&mut rep, "counit_left", n, lbad);
    record(&mut rep, "counit_right", n, rbad);

    // Δ_F(uv) = Δ_F(u)Δ_F(v), both sides from the lifted definition
    let mut bad = None;
    'mult: for (i, u) in us.iter().enumerate() {
        for (j, v) in us.iter().enumerate() {
            let l = dfa.twisted_coproduct_direct(&dfa.mul(u, v));
            let r = dfa.reduce(&dfa.tmul(&directs[i], &directs[j]));
            if let Some(k) = first_diff(&l, &r) {
                bad = Some(format!(
                    "u = {}, v = {}: {}",
                    env.fmt(u.coeff(0)),
                    env.fmt(v.coeff(0)),
                    tensor_witness(env, k, l.coeff(k), r.coeff(k))
                ));
                break 'mult;
            }
        }
    }
    record(&mut rep, "multiplicativity", n, bad);

    // Σ u_i t_F(a) ⊗ v_i = Σ u_i ⊗ v_i s_F(a)
    let mut bad = None;
    'tak: for (u, c) in us.iter().zip(&cops) {
        for a in &bases {
            let (s, t) = dfa.twisted_source_target(a);
            let l = dfa.reduce(&dfa.leg_mul(c, 0, &t, false));
            let r = dfa.reduce(&dfa.leg_mul(c, 1, &s, false));
            if let Some(k) = first_diff(&l, &r) {
                bad = Some(format!("{}, a = {a} at order h^{k}", env.fmt(u.coeff(0))));
                break 'tak;
            }
        }
    }
    record(&mut rep, "takeuchi", n, bad);

    // order h^0 recovers the undeformed structure
    let mut bad = None;
    for a in &bases {
        let (s, t) = dfa.twisted_source_target(a);
        let plain = env.poly(a.coeff(0));
        if *s.coeff(0) != plain || *t.coeff(0) != plain {
            bad = Some(format!("source/target of {a}"));
            break;
        }
        for b in &bases {
            if *dfa.star(a, b).coeff(0) != a.coeff(0) * b.coeff(0) {
                bad = Some(format!("star of {a}, {b}"));
            }
        }
    }
    if bad.is_none() {
        for (u, c) in us.iter().zip(&cops) {
            if c.coeff(0).reduce_classical() != env.coproduct(u.coeff(0)).reduce_classical() {
                bad = Some(format!("coproduct of {}", env.fmt(u.coeff(0))));
                break;
            }
        }
    }
    record(&mut rep, "classical_limit", n, bad);
    rep.sort();
    rep
}
