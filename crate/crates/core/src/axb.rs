//! The `ax+b` example: `L = Der(ℚ[x1,x2])` on `∂1, ∂2`, twisted by
//! `F = exp((h/2)(θ1⊗∂2 − ∂2⊗θ1))` with `θ1 = x1∂1`, and its golden
//! identities on both jet duals.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{factorial, rat, CPoly, HSeries, Mono, Rational};
use crate::deform::{twistor_validate, Deformation, Twistor, USeries};
use crate::drinfeld::{
    duality_roundtrip_standard, hprime_member, semiclassical_consistency, vee_build, GenKind, VeeAlgebroid,
};
use crate::envelope::{EnvElement, Envelope};
use crate::jets::{express_in_span, kconst, kmono, Jet, JetCtx, Side};
use crate::lie_rinehart::LieRinehartSpec;
use crate::report::{Check, Report, Status};
use crate::tensorial::Tensor;

/// The preset bundle at truncation `(N, d)`.
pub struct Axb {
    pub spec: LieRinehartSpec,
    pub env: Arc<Envelope>,
    pub twistor: Twistor,
    pub dfa: Arc<Deformation>,
    pub ctx: JetCtx,
}

/// `θ1⊗∂2 − ∂2⊗θ1`.
pub fn axb_r(env: &Envelope) -> Tensor {
    let th = EnvElement::kbasis(&Mono::unit(2, 0), &Mono::unit(2, 0), &Rational::one());
    let d2 = env.gen(1);
    Tensor::from_legs(&[th.clone(), d2.clone()]).sub(&Tensor::from_legs(&[d2, th]))
}

pub fn axb_spec() -> LieRinehartSpec {
    LieRinehartSpec::derivations(2)
}

pub fn build_axb(n: usize, d: usize) -> Axb {
    let spec = axb_spec();
    let env = Arc::new(Envelope::new(spec.clone()));
    let twistor = Twistor::exponential(&env, axb_r(&env), rat(1, 2), n);
    let dfa = Arc::new(Deformation::new(env.clone(), twistor.clone()).expect("the exponential twistor is invertible"));
    let ctx = JetCtx::new(dfa.clone(), d);
    Axb { spec, env, twistor, dfa, ctx }
}

fn record(rep: &mut Report, name: impl Into<String>, n: usize, w: Option<String>) {
    let c = match w {
        None => Check::new(name, Status::Pass),
        Some(w) => Check::new(name, Status::Fail).with_witness(w),
    };
    rep.push(c.at_order(n));
}

fn useries_diff(env: &Envelope, got: &USeries, want: &USeries) -> Option<String> {
    (0..=got.order()).find(|&k| got.coeff(k) != want.coeff(k)).map(|k| {
        format!("at h^{k}: computed {}, expected {}", env.fmt(got.coeff(k)), env.fmt(want.coeff(k)))
    })
}

/// `Σ_{k≤N} (±1)^k h^k/(2^k k!) x1 ∂2^k`.
fn x1_series(n: usize, sign: i64) -> USeries {
    let c = (0..=n as u32)
        .map(|k| {
            let r = Rational::new(BigInt::from(sign).pow(k), BigInt::from(2).pow(k) * factorial(k));
            EnvElement::monomial(Mono::from_slice(&[0, k]), CPoly::var(2, 0).scale(&r), 2)
        })
        .collect();
    HSeries::from_coeffs(c)
}

/// `x2 + c h x1∂1`.
fn x2_series(env: &Envelope, n: usize, c: Rational) -> USeries {
    let mut v = vec![env.zero(); n + 1];
    v[0] = env.poly(&CPoly::var(2, 1));
    if n >= 1 {
        v[1] = EnvElement::monomial(Mono::unit(2, 0), CPoly::var(2, 0).scale(&c), 2);
    }
    HSeries::from_coeffs(v)
}

/// `F` passes `twistor_validate`.
pub fn axb_twistor_report(ax: &Axb) -> Report {
    twistor_validate(ax.env.clone(), &ax.twistor)
}

/// `s_F(x_v)`, `t_F(x_v)` against the displayed series (`display.*`) and
/// against the hand expansion of `F` (`expanded.*`; differs in the `x2` parts
/// by the factor `1/2`).
pub fn axb_source_target_report(ax: &Axb) -> Report {
    let (env, dfa) = (&ax.env, &ax.dfa);
    let n = dfa.order();
    let mut rep = Report::new();
    let x = |v| dfa.a_const(&CPoly::var(2, v));
    let (s1, t1) = dfa.twisted_source_target(&x(0));
    let (s2, t2) = dfa.twisted_source_target(&x(1));
    record(&mut rep, "display.s_F(x1)", n, useries_diff(env, &s1, &x1_series(n, 1)));
    record(&mut rep, "display.t_F(x1)", n, useries_diff(env, &t1, &x1_series(n, -1)));
    record(&mut rep, "display.s_F(x2)", n, useries_diff(env, &s2, &x2_series(env, n, -Rational::one())));
    record(&mut rep, "display.t_F(x2)", n, useries_diff(env, &t2, &x2_series(env, n, Rational::one())));
    record(&mut rep, "expanded.s_F(x2)", n, useries_diff(env, &s2, &x2_series(env, n, rat(-1, 2))));
    record(&mut rep, "expanded.t_F(x2)", n, useries_diff(env, &t2, &x2_series(env, n, rat(1, 2))));
    rep.sort();
    rep
}

/// `⟨de_i·de_j, ∂1^a ∂2^b⟩` for `a, b ≤ 3` on the left dual.
pub fn axb_pairing_report(ctx: &JetCtx) -> Report {
    let dfa = ctx.dfa();
    let n = ctx.order();
    let (a, b) = (ctx.de(Side::Left, 0), ctx.de(Side::Left, 1));
    let mut rep = Report::new();
    for (name, prod, sign) in [("de1*de2", ctx.mul(&a, &b), -1), ("de2*de1", ctx.mul(&b, &a), 1)] {
        let prod = prod.expect("same side");
        let mut bad = None;
        'tab: for i in 0..=3u32 {
            for j in 0..=3u32 {
                let want = match (i, j) {
                    (1, 1) => dfa.a_const(&CPoly::one(2)),
                    (1, 0) => dfa.a_const(&CPoly::constant(2, rat(sign, 2))).shift(1),
                    _ => dfa.a_zero(),
                };
                let got = ctx.value(&prod, &Mono::from_slice(&[i, j]));
                if got != want {
                    bad = Some(format!("on d1^{i} d2^{j}: {got}, expected {want}"));
                    break 'tab;
                }
            }
        }
        rep.push(
            match bad {
                None => Check::new(format!("left.pairing.{name}"), Status::Pass),
                Some(w) => Check::new(format!("left.pairing.{name}"), Status::Fail).with_witness(w),
            }
            .at_order(n)
            .at_degree(6),
        );
    }
    rep
}

/// Generator of `K^∨`: coordinate `e_v` or `ďe_i = h⁻¹de_i`.
#[derive(Clone, Copy)]
enum G {
    E(usize),
    D(usize),
}

impl G {
    fn label(self) -> String {
        match self {
            G::E(v) => format!("e{}", v + 1),
            G::D(i) => format!("ďe{}", i + 1),
        }
    }

    fn shift(self) -> i64 {
        match self {
            G::E(_) => 0,
            G::D(_) => 1,
        }
    }

    fn jet(self, ctx: &JetCtx, side: Side) -> Jet {
        match self {
            G::E(v) => ctx.coord(side, v),
            G::D(i) => ctx.de(side, i),
        }
    }
}

/// `[a, b] = c·h^k·g` in `K^∨`.
type Rel = (G, G, Option<(i64, i64, G)>);

fn displayed_relations(side: Side) -> Vec<Rel> {
    use G::*;
    let s = match side {
        Side::Left => 1,
        Side::Right => -1,
    };
    vec![
        (D(0), D(1), Some((-s, 0, D(0)))),
        (D(0), E(1), Some((-s, 0, E(0)))),
        (E(0), E(1), Some((s, 1, E(0)))),
        (D(0), E(0), None),
        (D(1), E(1), None),
        (D(1), E(0), Some((s, 0, E(0)))),
    ]
}

fn rel_name(side: Side, (a, b, rhs): &Rel) -> String {
    let r = match rhs {
        None => "0".to_string(),
        Some((c, k, g)) => {
            let h = match k {
                0 => String::new(),
                1 => "h*".into(),
                k => format!("h^{k}*"),
            };
            let c = match c {
                1 => String::new(),
                -1 => "-".into(),
                c => format!("{c}*"),
            };
            format!("{c}{h}{}", g.label())
        }
    };
    format!("{}.relation.[{},{}]={r}", side.name(), a.label(), b.label())
}

/// A `Laurent` coefficient equal to `c·h^k` on its known orders.
fn laurent_is(c: &crate::drinfeld::Laurent, r: &Rational, k: i64) -> bool {
    (c.valuation().is_none_or(|v| v >= 0))
        && (0..c.precision()).all(|o| {
            let x = c.coeff(o).cloned().unwrap_or_else(Rational::zero);
            if o == k {
                x == *r
            } else {
                x.is_zero()
            }
        })
}

/// The displayed relation read off the generator presentation of `K^∨`.
fn vee_relation_defect(v: &VeeAlgebroid, rel: &Rel) -> Option<String> {
    let (a, b, rhs) = rel;
    let find = |g: G| {
        v.gens.iter().position(|x| match (x.kind, g) {
            (GenKind::Base(i), G::E(j)) | (GenKind::Dual(i), G::D(j)) => i == j,
            _ => false,
        })
    };
    let (ia, ib) = (find(*a)?, find(*b)?);
    let sign = if ia < ib { 1 } else { -1 };
    let r = v.relation(ia.min(ib), ia.max(ib))?;
    let want = rhs.map(|(c, k, g)| (vec![find(g).expect("generator present")], Rational::from_integer((c * sign).into()), k));
    for (w, c) in &r.rhs {
        let ok = match &want {
            Some((ww, rr, k)) if ww == w => laurent_is(c, rr, *k),
            _ => laurent_is(c, &Rational::zero(), 0),
        };
        if !ok {
            return Some(format!("coefficient of {} is {c}", v.word_label(w)));
        }
    }
    if let Some((ww, rr, _)) = &want {
        if !rr.is_zero() && !r.rhs.iter().any(|(w, _)| w == ww) {
            return Some(format!("no {} term", v.word_label(ww)));
        }
    }
    None
}

/// Every displayed identity of both duals: pairing tables, commutation
/// relations (on jets and in the `∨` presentation), source/target formulas,
/// coproducts and counits.
pub fn axb_relation_suite(ctx: &JetCtx) -> Report {
    let n = ctx.order();
    let dfa = ctx.dfa();
    let hk = |k: i64, c: i64| kmono(n, k as usize, Rational::from_integer(c.into()));
    let mut rep = axb_pairing_report(ctx);
    for side in [Side::Left, Side::Right] {
        let sn = side.name();
        for rel in displayed_relations(side) {
            let (a, b, rhs) = &rel;
            let lhs = ctx.commutator(&a.jet(ctx, side), &b.jet(ctx, side)).expect("same side");
            let want = match rhs {
                None => ctx.scale(&kconst(n, Rational::zero()), &ctx.unit(side)),
                Some((c, k, g)) => ctx.scale(&hk(k + a.shift() + b.shift() - g.shift(), *c), &g.jet(ctx, side)),
            };
            record(&mut rep, rel_name(side, &rel), n, ctx.differs(&lhs, &want));
        }
        match vee_build(ctx, side) {
            Ok(v) => {
                rep.pass(format!("{sn}.vee.integral"));
                let bad = displayed_relations(side)
                    .iter()
                    .find_map(|rel| vee_relation_defect(&v, rel).map(|w| format!("{}: {w}", rel_name(side, rel))));
                record(&mut rep, format!("{sn}.vee.relations"), n, bad);
            }
            Err(e) => rep.fail(format!("{sn}.vee.integral"), e.to_string()),
        }
        for v in 0..2 {
            let x = dfa.a_const(&CPoly::var(2, v));
            let e = ctx.coord(side, v);
            let ehd = ctx.combo(&[(kconst(n, Rational::one()), e.clone()), (kconst(n, Rational::one()), ctx.de(side, v))]);
            let ehd = ehd.expect("same side");
            let (s_want, t_want) = match side {
                Side::Left => (&e, &ehd),
                Side::Right => (&ehd, &e),
            };
            let (s, t) = (ctx.dual_source(side, &x), ctx.dual_target(side, &x));
            let i = v + 1;
            record(&mut rep, format!("{sn}.source.x{i}"), n, ctx.differs(&s, s_want));
            record(&mut rep, format!("{sn}.target.x{i}"), n, ctx.differs(&t, t_want));
            let one = ctx.unit(side);
            let de = ctx.de(side, v);
            let de_cop = [(de.clone(), one.clone()), (one.clone(), de.clone())];
            record(&mut rep, format!("{sn}.coproduct.ďe{i}"), n, ctx.coproduct_matches(&de, &de_cop));
            let e_cop = match side {
                Side::Left => [(one.clone(), e.clone())],
                Side::Right => [(e.clone(), one.clone())],
            };
            record(&mut rep, format!("{sn}.coproduct.e{i}"), n, ctx.coproduct_matches(&e, &e_cop));
            if side == Side::Left {
                record(&mut rep, format!("{sn}.coproduct.e{i}+h*ďe{i}"), n, ctx.coproduct_matches(&ehd, &[(ehd.clone(), one)]));
            }
            let cd = ctx.counit(&de);
            record(&mut rep, format!("{sn}.counit.ďe{i}"), n, (!cd.is_zero()).then(|| format!("∂(de{i}) = {cd}")));
            let ce = ctx.counit(&e);
            record(&mut rep, format!("{sn}.counit.e{i}"), n, (ce != x).then(|| format!("∂(e{i}) = {ce}")));
        }
    }
    rep.sort();
    rep
}

/// `φ(e_i) = e_i + h ďe_i`, `φ(ďe_i) = −ďe_i` from the left to the right
/// `∨`: relations, source/target, coproducts and counits are transported.
pub fn axb_iso_phi(ctx: &JetCtx) -> Report {
    let n = ctx.order();
    let (l, r) = (Side::Left, Side::Right);
    let one = kconst(n, Rational::one());
    let mone = kconst(n, -Rational::one());
    let gens = [G::E(0), G::E(1), G::D(0), G::D(1)];
    // φ on the unrescaled jets: e_i ↦ e_i + de_i, de_i ↦ −de_i
    let phi = |g: G| -> Jet {
        match g {
            G::E(v) => ctx.combo(&[(one.clone(), ctx.coord(r, v)), (one.clone(), ctx.de(r, v))]).expect("same side"),
            G::D(i) => ctx.scale(&mone, &ctx.de(r, i)),
        }
    };
    let mut rep = Report::new();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    words.extend((0..4).map(|i| vec![i]));
    for i in 0..4 {
        for j in i..4 {
            words.push(vec![i, j]);
        }
    }
    let word_jet = |w: &Vec<usize>, f: &dyn Fn(G) -> Jet, side: Side| -> Jet {
        if w.is_empty() {
            ctx.unit(side)
        } else {
            ctx.mul_all(&w.iter().map(|&i| f(gens[i])).collect::<Vec<_>>()).expect("same side")
        }
    };
    let left_words: Vec<Jet> = words.iter().map(|w| word_jet(w, &|g| g.jet(ctx, l), l)).collect();
    let right_words: Vec<Jet> = words.iter().map(|w| word_jet(w, &phi, r)).collect();
    for a in 0..4 {
        for b in a + 1..4 {
            let name = format!("phi.relation.[{},{}]", gens[a].label(), gens[b].label());
            let t = ctx.commutator(&gens[a].jet(ctx, l), &gens[b].jet(ctx, l)).expect("same side");
            let Some(coef) = express_in_span(ctx, &t, &left_words) else {
                rep.indeterminate(name, "relation leaves the span of words of length ≤ 2");
                continue;
            };
            let terms: Vec<(crate::jets::KSeries, Jet)> =
                coef.into_iter().zip(right_words.iter().cloned()).filter(|(c, _)| !c.is_zero()).collect();
            let rhs = if terms.is_empty() {
                ctx.scale(&kconst(n, Rational::zero()), &ctx.unit(r))
            } else {
                ctx.combo(&terms).expect("same side")
            };
            let lhs = ctx.commutator(&phi(gens[a]), &phi(gens[b])).expect("same side");
            record(&mut rep, name, n, ctx.differs(&lhs, &rhs));
        }
    }
    let dfa = ctx.dfa();
    for v in 0..2 {
        let i = v + 1;
        let x = dfa.a_const(&CPoly::var(2, v));
        // s^r_*(x) = e, t^r_*(x) = e + de on the left
        let s_img = phi(G::E(v));
        let t_img = ctx.combo(&[(one.clone(), phi(G::E(v))), (one.clone(), phi(G::D(v)))]).expect("same side");
        record(&mut rep, format!("phi.source.x{i}"), n, ctx.differs(&s_img, &ctx.dual_source(r, &x)));
        record(&mut rep, format!("phi.target.x{i}"), n, ctx.differs(&t_img, &ctx.dual_target(r, &x)));
        // Δ(e) = 1 ⊗ e, Δ(de) = de ⊗ 1 + 1 ⊗ de on the left
        let u = ctx.unit(r);
        let (pe, pd) = (phi(G::E(v)), phi(G::D(v)));
        record(&mut rep, format!("phi.coproduct.e{i}"), n, ctx.coproduct_matches(&pe, &[(u.clone(), pe.clone())]));
        record(&mut rep, format!("phi.coproduct.ďe{i}"), n, ctx.coproduct_matches(&pd, &[(pd.clone(), u.clone()), (u, pd.clone())]));
        for g in [G::E(v), G::D(v)] {
            let (a, b) = (ctx.counit(&g.jet(ctx, l)), ctx.counit(&phi(g)));
            record(&mut rep, format!("phi.counit.{}", g.label()), n, (a != b).then(|| format!("{a} vs {b}")));
        }
    }
    rep.sort();
    rep
}

/// `h∂1, h∂2 ∈ H′` up to `n_max`; `∂1 ∉ H′`, failing at `n = 1`.
pub fn axb_hprime_report(dfa: &Deformation, n_max: usize) -> Report {
    let env = dfa.env();
    let mut rep = Report::new();
    for i in 0..2 {
        let name = format!("hprime.h*d{}", i + 1);
        match hprime_member(dfa, &dfa.u_const(&env.gen(i)).shift(1), n_max) {
            Ok(m) if m.member() && m.variants_agree() => rep.push(Check::new(name, Status::Pass).at_order(n_max)),
            Ok(m) => rep.fail(name, m.witness.unwrap_or_else(|| "projection variants disagree".into())),
            Err(e) => rep.indeterminate(name, e.to_string()),
        }
    }
    match hprime_member(dfa, &dfa.u_const(&env.gen(0)), n_max.min(dfa.order())) {
        Ok(m) if m.failed_at == Some(1) => rep.pass("hprime.d1_rejected_at_1"),
        Ok(m) => rep.fail("hprime.d1_rejected_at_1", format!("first failure at {:?}", m.failed_at)),
        Err(e) => rep.indeterminate("hprime.d1_rejected_at_1", e.to_string()),
    }
    rep
}

/// Everything the example checks, at `(N, d, n_max)`.
pub fn axb_example_report(n: usize, d: usize, n_max: usize) -> Report {
    let ax = build_axb(n, d);
    let mut rep = Report::new();
    rep.merge("twistor", axb_twistor_report(&ax));
    rep.merge("source_target", axb_source_target_report(&ax));
    rep.merge("duals", axb_relation_suite(&ax.ctx));
    rep.merge("iso", axb_iso_phi(&ax.ctx));
    rep.merge("prime", axb_hprime_report(&ax.dfa, n_max));
    rep.merge("semiclassical", semiclassical_consistency(&ax.ctx));
    rep.merge("roundtrip", duality_roundtrip_standard(&ax.ctx, Side::Left, n_max.min(n)));
    rep.sort();
    rep
}

#[cfg(test)]
mod tests;
