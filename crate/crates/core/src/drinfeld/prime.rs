use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{monos_up_to, CPoly, Mono, Rational};
use crate::deform::{ASeries, Deformation, Flavor, TSeries, USeries};
use crate::error::{Error, Result};
use crate::jets::{Jet, JetCtx, Side};
use crate::tensorial::Tensor;

/// Outcome of the `δ_n` test for `n ≤ n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub n_max: usize,
    /// first `n` with `δ_n(u) ∉ h^n J^{⊗n}` (source projection)
    pub failed_at: Option<usize>,
    pub witness: Option<String>,
    /// verdict of the `π_t` variant
    pub target_failed_at: Option<usize>,
}

impl Membership {
    pub fn member(&self) -> bool {
        self.failed_at.is_none()
    }

    /// Both projections give the same verdict.
    pub fn variants_agree(&self) -> bool {
        self.failed_at.is_none() == self.target_failed_at.is_none()
    }
}

/// `(id − f∘ε)^{⊗n}` on a canonical element: pure legs lose their unit
/// term, the last leg `w` becomes `w − f(ε(w))` with `f = s_F` or `t_F`.
fn project(dfa: &Deformation, t: &TSeries, flavor: Flavor) -> TSeries {
    let legs = t.coeff(0).legs();
    let (p, m, n) = (dfa.p(), dfa.m(), dfa.order());
    let unit = (Mono::zero(p), Mono::zero(m));
    let mut out = vec![Tensor::zero(legs, p, m); n + 1];
    for (k, tk) in t.coeffs().iter().enumerate() {
        for (key, r) in tk.terms() {
            if key[..legs - 1].contains(&unit) {
                continue;
            }
            let (g, a) = &key[legs - 1];
            out[k].add_term(key.clone(), r);
            if !a.is_zero() {
                continue;
            }
            let img = dfa.twisted_map(&dfa.a_const(&CPoly::monomial(g.clone(), Rational::one())), flavor);
            for (l, il) in img.coeffs().iter().enumerate() {
                if k + l <= n && !il.is_zero() {
                    out[k + l].add_with_leg(key, legs - 1, il, &-r.clone());
                }
            }
        }
    }
    dfa.reduce(&TSeries::from_coeffs(out))
}

/// `δ_n(u)` with the given projection.
pub fn delta_n(dfa: &Deformation, u: &USeries, n: usize, flavor: Flavor) -> TSeries {
    project(dfa, &dfa.iterated_coproduct(u, n), flavor)
}

fn first_failure(dfa: &Deformation, u: &USeries, n_max: usize, flavor: Flavor) -> Option<(usize, String)> {
    let names = dfa.env().names();
    for n in 1..=n_max {
        let d = delta_n(dfa, u, n, flavor);
        if let Some(k) = (0..n).find(|&k| !d.coeff(k).is_zero()) {
            return Some((n, format!("δ_{n} has order h^{k} part {}", d.coeff(k).fmt_with(names))));
        }
    }
    None
}

/// `u ∈ H′` up to `n_max`: `δ_n(u) ∈ h^n J^{⊗n}` for every `n ≤ n_max`,
/// cross-checked with the `t_F` projection.
pub fn hprime_member(dfa: &Deformation, u: &USeries, n_max: usize) -> Result<Membership> {
    if n_max > dfa.order() {
        return Err(Error::TruncationInsufficient(format!("n_max = {n_max} exceeds h-order {}", dfa.order())));
    }
    let s = first_failure(dfa, u, n_max, Flavor::Source);
    let t = first_failure(dfa, u, n_max, Flavor::Target);
    Ok(Membership {
        n_max,
        failed_at: s.as_ref().map(|x| x.0),
        witness: s.map(|x| x.1),
        target_failed_at: t.map(|x| x.0),
    })
}

/// `{h^{|α|} θ_α}` with `θ_α` dual to `(1/β!) ξ^β` up to PBW degree `deg`.
#[derive(Clone, Debug)]
pub struct HPrimeBasis {
    pub side: Side,
    pub alphas: Vec<Mono>,
    pub theta: Vec<USeries>,
    pub members: Vec<USeries>,
}

/// `(1/β!) ξ^β` with `ξ_i = de_i`.
pub(crate) fn divided_power(ctx: &JetCtx, side: Side, beta: &Mono) -> Result<Jet> {
    let mut fs = Vec::new();
    for (i, &e) in beta.0.iter().enumerate() {
        fs.extend(std::iter::repeat_with(|| ctx.de(side, i)).take(e as usize));
    }
    let j = if fs.is_empty() { ctx.unit(side) } else { ctx.mul_all(&fs)? };
    let inv = Rational::new(BigInt::one(), beta.factorial());
    Ok(ctx.scale(&crate::jets::kconst(ctx.order(), inv), &j))
}

/// Dual basis by fixed-point inversion of the pairing matrix, which is the
/// identity at `h = 0`.
pub fn hprime_basis(ctx: &JetCtx, side: Side, deg: usize) -> Result<HPrimeBasis> {
    if deg > ctx.degree() {
        return Err(Error::TruncationInsufficient(format!("degree {deg} exceeds jet degree {}", ctx.degree())));
    }
    let dfa = ctx.dfa();
    let (p, n) = (dfa.p(), dfa.order());
    let idx = monos_up_to(dfa.m(), deg as u32);
    let xs: Vec<Jet> = idx.iter().map(|b| divided_power(ctx, side, b)).collect::<Result<_>>()?;
    // pm[β][γ] = ⟨(1/β!)ξ^β, e^γ⟩
    let pm: Vec<Vec<ASeries>> = xs.iter().map(|x| idx.iter().map(|g| ctx.value(x, g)).collect()).collect();
    for (bi, row) in pm.iter().enumerate() {
        for (gi, v) in row.iter().enumerate() {
            let want = if bi == gi { CPoly::one(p) } else { CPoly::zero(p) };
            if *v.coeff(0) != want {
                return Err(Error::Semantic(format!(
                    "pairing matrix is not the identity mod h at ({:?}, {:?}): {v}",
                    idx[bi], idx[gi]
                )));
            }
        }
    }
    let k = idx.len();
    let delta = |a: usize, b: usize| if a == b { dfa.a_const(&CPoly::one(p)) } else { dfa.a_zero() };
    let pair = |c: &ASeries, v: &ASeries| match side {
        Side::Left => dfa.star(c, v),
        Side::Right => dfa.star(v, c),
    };
    let mut c: Vec<Vec<ASeries>> = (0..k).map(|a| (0..k).map(|g| delta(a, g)).collect()).collect();
    for _ in 0..=n {
        let mut done = true;
        let mut next = c.clone();
        for a in 0..k {
            for b in 0..k {
                let mut r = delta(a, b);
                for g in 0..k {
                    if !c[a][g].is_zero() && !pm[b][g].is_zero() {
                        r = r.sub(&pair(&c[a][g], &pm[b][g]));
                    }
                }
                if !r.is_zero() {
                    done = false;
                    next[a][b].add_assign(&r);
                }
            }
        }
        if done {
            break;
        }
        c = next;
    }
    let flavor = match side {
        Side::Left => Flavor::Source,
        Side::Right => Flavor::Target,
    };
    let mut theta = Vec::with_capacity(k);
    let mut members = Vec::with_capacity(k);
    for (a, alpha) in idx.iter().enumerate() {
        let coeffs: BTreeMap<Mono, ASeries> =
            idx.iter().cloned().zip(c[a].iter().cloned()).filter(|(_, v)| !v.is_zero()).collect();
        let th = dfa.basis_recompose(&coeffs, flavor);
        members.push(th.shift(alpha.degree() as usize));
        theta.push(th);
    }
    Ok(HPrimeBasis { side, alphas: idx, theta, members })
}

/// First `(β, α)` with `⟨(1/β!)ξ^β, θ_α⟩ ≠ δ_{αβ}`.
pub fn hprime_basis_defect(ctx: &JetCtx, b: &HPrimeBasis) -> Result<Option<String>> {
    let p = ctx.dfa().p();
    for beta in &b.alphas {
        let x = divided_power(ctx, b.side, beta)?;
        for (alpha, th) in b.alphas.iter().zip(&b.theta) {
            let v = ctx.pair(&x, th);
            let want = if alpha == beta { CPoly::one(p) } else { CPoly::zero(p) };
            let ok = v.coeffs().iter().enumerate().all(|(k, c)| if k == 0 { *c == want } else { c.is_zero() });
            if !ok {
                return Ok(Some(format!("⟨ξ^{beta:?}/{beta:?}!, θ_{alpha:?}⟩ = {v}")));
            }
        }
    }
    Ok(None)
}
