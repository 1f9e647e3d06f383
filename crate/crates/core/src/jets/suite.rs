use std::sync::Arc;

use super::{Jet, JetCtx, Side};
use crate::arith::{monos_up_to, CPoly};
use crate::deform::{ASeries, Deformation, USeries};
use crate::report::{Check, Report, Status};

fn record(rep: &mut Report, name: &str, n: usize, d: usize, witness: Option<String>) {
    let c = match witness {
        None => Check::new(name, Status::Pass),
        Some(w) => Check::new(name, Status::Fail).with_witness(w),
    };
    rep.push(c.at_order(n).at_degree(d));
}

fn first_mismatch(a: &ASeries, b: &ASeries) -> Option<usize> {
    (0..=a.order()).find(|&k| a.coeff(k) != b.coeff(k))
}

/// Dual-algebroid axioms for one side at `(N, d)` on generator samples
/// (`1`, `e_v`, `de_i`), base samples `x_v` and PBW samples of degree ≤ 2.
pub fn jet_axiom_suite(ctx: &JetCtx, side: Side) -> Report {
    let dfa = ctx.dfa();
    let env = dfa.env();
    let (n, d) = (ctx.order(), ctx.degree());
    let (p, m) = (dfa.p(), dfa.m());
    let mut rep = Report::new();
    let unit = ctx.unit(side);
    let mut gens: Vec<Jet> = (0..p).map(|v| ctx.coord(side, v)).collect();
    gens.extend((0..m).map(|i| ctx.de(side, i)));
    let bases: Vec<ASeries> = (0..p).map(|v| dfa.a_const(&CPoly::var(p, v))).collect();
    let us: Vec<USeries> = monos_up_to(m, 2.min(d as u32)).iter().map(|b| dfa.u_const(&env.pbw(b))).collect();
    let fmt_u = |u: &USeries| env.fmt(u.coeff(0));

    // associativity and unit
    let mut bad = None;
    'assoc: for a in &gens {
        for b in &gens {
            let ab = ctx.mul(a, b).expect("same side");
            for c in &gens {
                let l = ctx.mul(&ab, c).expect("same side");
                let r = ctx.mul(a, &ctx.mul(b, c).expect("same side")).expect("same side");
                if let Some(w) = ctx.differs(&l, &r) {
                    bad = Some(format!("({}·{})·{} vs {}·({}·{}) {w}", a.label(), b.label(), c.label(), a.label(), b.label(), c.label()));
                    break 'assoc;
                }
            }
        }
    }
    record(&mut rep, "product_associativity", n, d, bad);
    let bad = gens.iter().find_map(|g| {
        let l = ctx.mul(&unit, g).expect("same side");
        let r = ctx.mul(g, &unit).expect("same side");
        ctx.differs(&l, g).or_else(|| ctx.differs(&r, g)).map(|w| format!("{}: {w}", g.label()))
    });
    record(&mut rep, "product_unit", n, d, bad);

    // defining linearity on products, evaluated by formula
    let mut bad = None;
    'lin: for a in &gens {
        for b in &gens {
            let ab = ctx.mul(a, b).expect("same side");
            for u in &us {
                for x in &bases {
                    let (lhs, rhs) = match side {
                        Side::Left => (ctx.eval(&ab, &dfa.mul(&dfa.source(x), u)), dfa.star(x, &ctx.eval(&ab, u))),
                        Side::Right => (ctx.eval(&ab, &dfa.mul(&dfa.target(x), u)), dfa.star(&ctx.eval(&ab, u), x)),
                    };
                    if let Some(k) = first_mismatch(&lhs, &rhs) {
                        bad = Some(format!("{} on {} with {x} at order h^{k}", ab.label(), fmt_u(u)));
                        break 'lin;
                    }
                }
            }
        }
    }
    record(&mut rep, "linearity", n, d, bad);

    // A^e pairing identities
    let mut fails: [Option<String>; 5] = Default::default();
    for w in gens.iter().chain(std::iter::once(&unit)) {
        for u in &us {
            let uw = ctx.eval(w, u);
            for x in &bases {
                let (s, t) = (ctx.dual_source(side, x), ctx.dual_target(side, x));
                let (sx, tx) = dfa.twisted_source_target(x);
                let ev = |j: &Jet, v: &USeries| ctx.eval(j, v);
                let sides: [(ASeries, ASeries); 5] = match side {
                    Side::Left => [
                        (ev(&ctx.mul(&s, w).unwrap(), u), ev(w, &dfa.mul(&tx, u))),
                        (ev(&ctx.mul(&t, w).unwrap(), u), ev(w, &dfa.mul(u, &tx))),
                        (ev(&ctx.mul(w, &t).unwrap(), u), ev(w, &dfa.mul(u, &sx))),
                        (ev(&ctx.mul(w, &s).unwrap(), u), dfa.star(&uw, x)),
                        (ev(w, &dfa.mul(&sx, u)), dfa.star(x, &uw)),
                    ],
                    Side::Right => [
                        (ev(&ctx.mul(&t, w).unwrap(), u), ev(w, &dfa.mul(&sx, u))),
                        (ev(&ctx.mul(&s, w).unwrap(), u), ev(w, &dfa.mul(u, &sx))),
                        (ev(&ctx.mul(w, &s).unwrap(), u), ev(w, &dfa.mul(u, &tx))),
                        (ev(&ctx.mul(w, &t).unwrap(), u), dfa.star(x, &uw)),
                        (ev(w, &dfa.mul(&tx, u)), dfa.star(&uw, x)),
                    ],
                };
                for (i, (l, r)) in sides.iter().enumerate() {
                    if fails[i].is_none() {
                        if let Some(k) = first_mismatch(l, r) {
                            fails[i] = Some(format!("w = {}, u = {}, a = {x} at order h^{k}: {l} vs {r}", w.label(), fmt_u(u)));
                        }
                    }
                }
            }
        }
    }
    for (i, f) in fails.into_iter().enumerate() {
        record(&mut rep, &format!("pairing.{}", i + 1), n, d, f);
    }

    // ⟨e^β, de^α⟩ ∈ h^{|α| − |β|} A_h
    let mut bad = None;
    let top = 3.min(d as u32).min(n as u32);
    'filt: for alpha in monos_up_to(m, top) {
        if alpha.is_zero() {
            continue;
        }
        let mut factors = Vec::new();
        for (i, &e) in alpha.0.iter().enumerate() {
            for _ in 0..e {
                factors.push(ctx.de(side, i));
            }
        }
        let j = ctx.mul_all(&factors).expect("same side");
        for beta in monos_up_to(m, alpha.degree()) {
            let need = (alpha.degree() - beta.degree()) as usize;
            let v = ctx.value(&j, &beta);
            if let Some(k) = v.valuation() {
                if k < need {
                    bad = Some(format!("⟨{}, {}⟩ has order h^{k} < h^{need}", env.fmt(&env.pbw(&beta)), j.label()));
                    break 'filt;
                }
            }
        }
    }
    record(&mut rep, "filtration", n, d, bad);

    // h = 0 recovers the undeformed dual
    let classical = JetCtx::new(Arc::new(Deformation::undeformed(dfa.env_arc(), n)), d);
    let mut cgens: Vec<Jet> = (0..p).map(|v| classical.coord(side, v)).collect();
    cgens.extend((0..m).map(|i| classical.de(side, i)));
    let mut bad = None;
    'cl: for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate() {
            let q = ctx.mul(a, b).expect("same side");
            let c = classical.mul(&cgens[i], &cgens[j]).expect("same side");
            for beta in ctx.indices() {
                if ctx.value(&q, &beta).coeff(0) != classical.value(&c, &beta).coeff(0) {
                    bad = Some(format!("{} on {}", q.label(), env.fmt(&env.pbw(&beta))));
                    break 'cl;
                }
            }
        }
    }
    record(&mut rep, "classical_limit", n, d, bad);

    // Δ(1) = 1 ⊗ 1
    let bad = ctx.coproduct_matches(&unit, &[(unit.clone(), unit.clone())]);
    record(&mut rep, "coproduct_unit", n, d, bad);

    rep.sort();
    rep
}
