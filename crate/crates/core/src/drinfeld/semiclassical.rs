use num_traits::One;

use crate::arith::{monos_up_to, CPoly, Mono, Rational};
use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::jets::{JetCtx, Side};
use crate::lie_rinehart::{lr_bialgebra_validate, lr_validate, poisson_from_pair, LieRinehartSpec, MultiVector, Wedge};
use crate::report::Report;
use crate::tensorial::Tensor;

/// First-order data of a deformation: `δ(x_v) ∈ L` and `δ(e_k) ∈ ∧²L`.
#[derive(Clone, Debug, PartialEq)]
pub struct CobracketData {
    pub on_vars: Vec<Vec<CPoly>>,
    pub on_basis: Vec<MultiVector>,
}

impl CobracketData {
    /// The Lie-Rinehart structure on `L*` whose differential is `δ`:
    /// `ω_*(ξ_i)(x_v) = ⟨ξ_i, δ(x_v)⟩`, `⟨[ξ_i, ξ_j], e_k⟩ = −⟨δ(e_k), ξ_i∧ξ_j⟩`.
    pub fn dual_structure(&self, p: usize) -> LieRinehartSpec {
        let m = self.on_basis.len();
        let names: Vec<String> = (1..=m).map(|i| format!("ξ{i}")).collect();
        let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut s = LieRinehartSpec::new(p, m).with_names(&names);
        for (v, sec) in self.on_vars.iter().enumerate() {
            for (i, c) in sec.iter().enumerate() {
                if !c.is_zero() {
                    s.set_anchor(i, v, c.clone());
                }
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                let v: Vec<CPoly> = (0..m).map(|k| -&self.on_basis[k].coeff(&[i, j])).collect();
                if v.iter().any(|c| !c.is_zero()) {
                    s.set_bracket(i, j, v).expect("indices in range");
                }
            }
        }
        s
    }
}

fn flip(t: &Tensor) -> Tensor {
    let mut out = Tensor::zero(2, t.nvars(), t.rank());
    for (k, r) in t.terms() {
        out.add_term(vec![k[1].clone(), k[0].clone()], r);
    }
    out
}

/// `δ(a) = (t_F(a) − s_F(a))/h mod h` on coordinates and
/// `δ(X) = Δ^{[1]}(X)_{21} − Δ^{[1]}(X)` on basis elements, with
/// `Δ^{[1]}` the order-one part of the lifted `F̃⁻¹ Δ F̃`.
pub fn semiclassical_cobracket(dfa: &Deformation) -> Result<CobracketData> {
    if dfa.order() < 1 {
        return Err(Error::TruncationInsufficient("cobracket needs h-order ≥ 1".into()));
    }
    let env = dfa.env();
    let (p, m) = (dfa.p(), dfa.m());
    let mut on_vars = Vec::with_capacity(p);
    for v in 0..p {
        let x = dfa.a_const(&CPoly::var(p, v));
        let (s, t) = dfa.twisted_source_target(&x);
        let d1 = t.coeff(1).sub(s.coeff(1));
        let mut sec = vec![CPoly::zero(p); m];
        for (alpha, c) in d1.terms() {
            if alpha.degree() != 1 {
                return Err(Error::Semantic(format!("δ(x{}) = {} is not in L", v + 1, env.fmt(&d1))));
            }
            sec[alpha.first_nonzero().expect("degree one")] = c.clone();
        }
        on_vars.push(sec);
    }
    let f1 = dfa.twistor().f.coeff(1);
    let g1 = dfa.inverse().coeff(1);
    let mut on_basis = Vec::with_capacity(m);
    for k in 0..m {
        let dx = env.coproduct(&env.gen(k));
        let first = env.tensor_mul(&dx, f1).add(&env.tensor_mul(g1, &dx));
        let delta = flip(&first).sub(&first).reduce_classical();
        let mut w = Wedge::zero(p, m, 2);
        let mut lam = vec![vec![CPoly::zero(p); m]; m];
        for (key, r) in delta.terms() {
            let (g0, a0) = &key[0];
            let (g1, a1) = &key[1];
            if !g0.is_zero() || a0.degree() != 1 || a1.degree() != 1 {
                return Err(Error::Semantic(format!(
                    "δ({}) = {} is not in L ∧ L",
                    env.names()[k],
                    delta.fmt_with(env.names())
                )));
            }
            let (i, j) = (a0.first_nonzero().expect("degree one"), a1.first_nonzero().expect("degree one"));
            lam[i][j].add_term(g1.clone(), r);
        }
        for i in 0..m {
            for j in i..m {
                if lam[i][j] != -&lam[j][i] {
                    return Err(Error::Semantic(format!("δ({}) is not antisymmetric", env.names()[k])));
                }
                if i < j && !lam[i][j].is_zero() {
                    w.add_term(vec![i, j], &lam[i][j]);
                }
            }
        }
        on_basis.push(w);
    }
    Ok(CobracketData { on_vars, on_basis })
}

/// Validation of the induced pair `(L, L*)` and of the Poisson bracket against
/// the star commutator.
pub fn cobracket_report(dfa: &Deformation, cb: &CobracketData) -> Report {
    let l = dfa.env().spec();
    let lstar = cb.dual_structure(dfa.p());
    let mut rep = Report::new();
    rep.merge("lstar", lr_validate(&lstar));
    rep.merge("bialgebroid", lr_bialgebra_validate(l, &lstar));
    rep.record("poisson_star_commutator", poisson_defect(dfa, l, &lstar));
    rep.sort();
    rep
}

/// First pair of sampled functions where `{f,g}` from the pair differs from
/// `(f⋆g − g⋆f)/h mod h`.
pub fn poisson_defect(dfa: &Deformation, l: &LieRinehartSpec, lstar: &LieRinehartSpec) -> Option<String> {
    if dfa.order() < 1 {
        return Some("h-order 0".into());
    }
    let p = dfa.p();
    let fs: Vec<CPoly> =
        monos_up_to(p, 2).into_iter().filter(|g| !g.is_zero()).map(|g| CPoly::monomial(g, Rational::one())).collect();
    for f in &fs {
        for g in &fs {
            let (a, b) = (dfa.a_const(f), dfa.a_const(g));
            let c = dfa.star(&a, &b).sub(&dfa.star(&b, &a));
            let want = poisson_from_pair(l, lstar, f, g);
            if *c.coeff(1) != want || !c.coeff(0).is_zero() {
                return Some(format!("{{{f}, {g}}}: star commutator {c}, pair {want}"));
            }
        }
    }
    None
}

/// `[Φ_i, Φ_j] = (ξ_iξ_j − ξ_jξ_i)/h mod (h, J²)` on the classes of
/// `ξ_i = de_i − s(∂ de_i)` and `ω(Φ_i)(x_v) = ∂([ξ_i, e_v])/h mod h`.
pub fn semiclassical_dual_bracket(ctx: &JetCtx, side: Side) -> Result<(LieRinehartSpec, Report)> {
    let dfa = ctx.dfa();
    if dfa.order() < 1 || ctx.degree() < 1 {
        return Err(Error::TruncationInsufficient("dual bracket needs h-order ≥ 1 and jet degree ≥ 1".into()));
    }
    let (p, m) = (dfa.p(), dfa.m());
    let lifts = (0..m)
        .map(|i| {
            let de = ctx.de(side, i);
            let c = ctx.counit(&de);
            if c.is_zero() {
                Ok(de)
            } else {
                ctx.sub(&de, &ctx.dual_source(side, &c))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = (1..=m).map(|i| format!("ξ{i}")).collect();
    let nm: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut s = LieRinehartSpec::new(p, m).with_names(&nm);
    let mut rep = Report::new();
    let mut bad = None;
    for i in 0..m {
        for j in i + 1..m {
            let c = ctx.commutator(&lifts[i], &lifts[j])?;
            let v: Vec<CPoly> = (0..m).map(|k| ctx.value(&c, &Mono::unit(m, k)).coeff(1).clone()).collect();
            let c0 = ctx.counit(&c);
            if !c0.coeff(0).is_zero() || !c0.coeff(1).is_zero() {
                bad.get_or_insert(format!("∂[ξ{},ξ{}] = {c0}", i + 1, j + 1));
            }
            if (0..m).any(|k| !ctx.value(&c, &Mono::unit(m, k)).coeff(0).is_zero()) {
                bad.get_or_insert(format!("[ξ{},ξ{}] is not divisible by h", i + 1, j + 1));
            }
            s.set_bracket(i, j, v)?;
        }
        for v in 0..p {
            let c = ctx.commutator(&lifts[i], &ctx.coord(side, v))?;
            let cu = ctx.counit(&c);
            if !cu.coeff(0).is_zero() {
                bad.get_or_insert(format!("∂[ξ{},e{}] is not divisible by h", i + 1, v + 1));
            }
            s.set_anchor(i, v, cu.coeff(1).clone());
        }
    }
    rep.record("divisibility", bad);
    rep.merge("lstar", lr_validate(&s));
    rep.sort();
    Ok((s, rep))
}

/// First structure constant where two `L*` structures differ, optionally after
/// negating one of them.
pub fn structure_difference(a: &LieRinehartSpec, b: &LieRinehartSpec, negate: bool) -> Option<String> {
    let sign = if negate { -Rational::one() } else { Rational::one() };
    for i in 0..a.m {
        for j in i + 1..a.m {
            let (x, y) = (a.bracket_basis(i, j), b.bracket_basis(i, j));
            for k in 0..a.m {
                if x[k] != y[k].scale(&sign) {
                    return Some(format!("[ξ{},ξ{}] at ξ{}: {} vs {}", i + 1, j + 1, k + 1, x[k], y[k].scale(&sign)));
                }
            }
        }
        for v in 0..a.p {
            let (x, y) = (&a.anchor_row(i)[v], &b.anchor_row(i)[v]);
            if *x != y.scale(&sign) {
                return Some(format!("ω(ξ{})(x{}): {} vs {}", i + 1, v + 1, x, y.scale(&sign)));
            }
        }
    }
    None
}

/// Cobracket from the deformation against the brackets read off both duals:
/// the right dual reproduces the dual structure, the left dual its opposite.
pub fn semiclassical_consistency(ctx: &JetCtx) -> Report {
    let dfa = ctx.dfa();
    let mut rep = Report::new();
    let cb = match semiclassical_cobracket(dfa) {
        Ok(cb) => cb,
        Err(e) => {
            rep.indeterminate("cobracket", e.to_string());
            return rep;
        }
    };
    rep.merge("cobracket", cobracket_report(dfa, &cb));
    let lstar = cb.dual_structure(dfa.p());
    for (side, negate) in [(Side::Right, false), (Side::Left, true)] {
        match semiclassical_dual_bracket(ctx, side) {
            Ok((s, r)) => {
                rep.merge(&format!("dual_bracket.{}", side.name()), r);
                let name = if negate { "matches_opposite_cobracket_dual" } else { "matches_cobracket_dual" };
                rep.record(format!("dual_bracket.{}.{name}", side.name()), structure_difference(&s, &lstar, negate));
            }
            Err(e) => rep.indeterminate(format!("dual_bracket.{}", side.name()), e.to_string()),
        }
    }
    rep.sort();
    rep
}

