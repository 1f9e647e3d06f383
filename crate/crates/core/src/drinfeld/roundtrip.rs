use std::collections::BTreeMap;

use num_traits::One;

use super::vee::{vee_build_from, GenKind, Laurent, LinearCombo, VeeAlgebroid};
use crate::arith::{HLaurent, Rational};
use crate::error::{Error, Result};
use crate::jets::{express_in_span, kconst, Jet, JetCtx, Side};
use crate::report::{Check, Report, Status};

type Legs = Vec<Option<usize>>;
type VTensor = BTreeMap<Legs, Laurent>;

fn lone(n: usize) -> Laurent {
    HLaurent::from_series(&kconst(n, Rational::one()), 0)
}

fn add_into(t: &mut VTensor, k: Legs, c: Laurent) {
    let e = t.entry(k).or_insert_with(|| c.scale(&Rational::from_integer(0.into())));
    *e = e.add(&c);
}

/// `s(∂ g)` in the linear span, when `∂ g` is affine in the coordinates.
fn source_of_counit(v: &VeeAlgebroid, g: usize) -> Result<LinearCombo> {
    let (cu, shift) = &v.counits[g];
    let p = v.sources.len();
    let mut out: LinearCombo = Vec::new();
    let n = cu.order();
    let mut konst = vec![Rational::from_integer(0.into()); n + 1];
    let mut lin = vec![vec![Rational::from_integer(0.into()); n + 1]; p];
    for (k, c) in cu.coeffs().iter().enumerate() {
        for (mono, r) in c.terms() {
            match mono.degree() {
                0 => konst[k] = r.clone(),
                1 => lin[mono.first_nonzero().expect("degree one")][k] = r.clone(),
                _ => return Err(Error::Semantic(format!("∂({}) is not affine", v.gens[g].label))),
            }
        }
    }
    let ser = |c: Vec<Rational>| HLaurent::from_series(&crate::arith::HSeries::from_coeffs(c), -shift);
    out.push((None, ser(konst)));
    for (x, c) in lin.into_iter().enumerate() {
        let c = ser(c);
        if c.is_zero() {
            continue;
        }
        let img = v.sources[x]
            .as_ref()
            .ok_or_else(|| Error::Semantic(format!("s(x{}) leaves the linear span", x + 1)))?;
        for (l, d) in img {
            out.push((*l, c.mul(d)));
        }
    }
    Ok(out)
}

/// `δ_n(h^k g)` in the generator presentation, or `None` when undecided at
/// the known precision.
fn intrinsic_delta_ok(v: &VeeAlgebroid, g: usize, k: i64, n: usize) -> Result<Option<bool>> {
    let one = lone(v.n);
    let mut t: VTensor = BTreeMap::new();
    t.insert(vec![Some(g)], HLaurent::from_series(&kconst(v.n, Rational::one()), k));
    for _ in 1..n {
        let mut next = VTensor::new();
        for (legs, c) in &t {
            match legs[0] {
                None => {
                    let mut key = vec![None, None];
                    key.extend_from_slice(&legs[1..]);
                    add_into(&mut next, key, c.clone());
                }
                Some(i) => {
                    let cop = v.coproducts[i]
                        .as_ref()
                        .ok_or_else(|| Error::Semantic(format!("Δ({}) leaves the linear span", v.gens[i].label)))?;
                    for (a, b, c2) in cop {
                        let mut key = vec![*a, *b];
                        key.extend_from_slice(&legs[1..]);
                        add_into(&mut next, key, c.mul(c2));
                    }
                }
            }
        }
        t = next;
    }
    // π = id − s∘∂ on every leg
    let mut pis: BTreeMap<usize, LinearCombo> = BTreeMap::new();
    for legs in t.keys() {
        for &l in legs.iter().flatten() {
            if let std::collections::btree_map::Entry::Vacant(e) = pis.entry(l) {
                let mut pi = vec![(Some(l), one.clone())];
                pi.extend(source_of_counit(v, l)?.into_iter().map(|(x, c)| (x, c.neg())));
                e.insert(pi);
            }
        }
    }
    let mut out = VTensor::new();
    for (legs, c) in &t {
        if legs.iter().any(|l| l.is_none()) {
            continue;
        }
        let mut partial: Vec<(Legs, Laurent)> = vec![(vec![], c.clone())];
        for l in legs {
            let pi = &pis[&l.expect("no unit legs")];
            partial = partial
                .iter()
                .flat_map(|(k0, c0)| {
                    pi.iter().map(move |(x, c1)| {
                        let mut k1 = k0.clone();
                        k1.push(*x);
                        (k1, c0.mul(c1))
                    })
                })
                .collect();
        }
        for (k1, c1) in partial {
            add_into(&mut out, k1, c1);
        }
    }
    let n = n as i64;
    let mut undecided = false;
    for c in out.values() {
        match c.valuation() {
            Some(val) if val < n => return Ok(Some(false)),
            Some(_) => {}
            None if c.precision() < n => undecided = true,
            None => {}
        }
    }
    Ok(if undecided { None } else { Some(true) })
}

/// Least `k` with `h^k g ∈ V′` up to `n_max`, via `δ_n` inside `V`.
fn intrinsic_exponent(v: &VeeAlgebroid, g: usize, n_max: usize) -> Result<Option<i64>> {
    'k: for k in 0..=(n_max as i64 + 1) {
        for n in 1..=n_max {
            match intrinsic_delta_ok(v, g, k, n)? {
                Some(true) => {}
                Some(false) => continue 'k,
                None => return Ok(None),
            }
        }
        return Ok(Some(k));
    }
    Ok(None)
}

/// Least `k` with `h^k g` integral on every tabulated `e^β`.
fn lattice_exponent(ctx: &JetCtx, v: &VeeAlgebroid, g: usize) -> i64 {
    let gen = &v.gens[g];
    let vmin = ctx.indices().iter().filter_map(|b| ctx.value(&gen.jet, b).valuation()).min().unwrap_or(0) as i64;
    (gen.shift - vmin).max(0)
}

/// `∨` then `′`: rescale the generators, recover `V′` generator by generator,
/// and compare with the input generators and their relation table.
pub fn duality_roundtrip(ctx: &JetCtx, side: Side, base: &[Jet], xi: &[Jet], n_max: usize) -> Report {
    let mut rep = Report::new();
    let n = ctx.order();
    let v = match vee_build_from(ctx, side, base, xi) {
        Ok(v) => {
            rep.pass("vee");
            v
        }
        Err(e) => {
            rep.fail("vee", e.to_string());
            rep.sort();
            return rep;
        }
    };
    let g = v.gens.len();
    let mut ks = Vec::with_capacity(g);
    let mut disagree = None;
    let mut undecided = None;
    for i in 0..g {
        let lat = lattice_exponent(ctx, &v, i);
        match intrinsic_exponent(&v, i, n_max) {
            Ok(Some(k)) => {
                if k != lat {
                    disagree.get_or_insert(format!("{}: δ_n gives h^{k}, integrality gives h^{lat}", v.gens[i].label));
                }
                ks.push(k);
            }
            Ok(None) => {
                undecided.get_or_insert(format!("{}: membership undecided at h-order {n}", v.gens[i].label));
                ks.push(lat);
            }
            Err(e) => {
                undecided.get_or_insert(e.to_string());
                ks.push(lat);
            }
        }
    }
    if let Some(u) = undecided {
        rep.push(Check::new("prime.decided", Status::Indeterminate).with_witness(u));
    } else {
        rep.pass("prime.decided");
    }
    rep.record("prime.agreement", disagree);
    let ident = (0..g).find(|&i| ks[i] != v.gens[i].shift).map(|i| {
        let want = match v.gens[i].kind {
            GenKind::Base(_) => "h^0",
            GenKind::Dual(_) => "h^1",
        };
        format!("{} recovered with h^{}, expected {want}", v.gens[i].label, ks[i])
    });
    rep.record("prime.identification", ident);

    // relation tables: recovered from V against the input presentation
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    words.extend((0..g).map(|i| vec![i]));
    for i in 0..g {
        for j in i..g {
            words.push(vec![i, j]);
        }
    }
    let wj: Result<Vec<Jet>> = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                Ok(ctx.unit(side))
            } else {
                ctx.mul_all(&w.iter().map(|&i| v.gens[i].jet.clone()).collect::<Vec<_>>())
            }
        })
        .collect();
    let wj = match wj {
        Ok(w) => w,
        Err(e) => {
            rep.indeterminate("relations", e.to_string());
            rep.sort();
            return rep;
        }
    };
    let mut bad = None;
    let mut known = usize::MAX;
    'rel: for r in &v.relations {
        let (a, b) = (r.left, r.right);
        let name = format!("[{},{}]", v.gens[a].jet.label(), v.gens[b].jet.label());
        let t = match ctx.commutator(&v.gens[a].jet, &v.gens[b].jet) {
            Ok(t) => t,
            Err(e) => {
                bad = Some(e.to_string());
                break;
            }
        };
        let Some(orig) = express_in_span(ctx, &t, &wj) else {
            bad = Some(format!("{name} leaves the span of words of length ≤ 2"));
            break;
        };
        let rec: BTreeMap<&Vec<usize>, Laurent> = r
            .rhs
            .iter()
            .map(|(w, c)| {
                let kw: i64 = w.iter().map(|&i| ks[i]).sum();
                (w, HLaurent::from_series(&kconst(n, Rational::one()), ks[a] + ks[b] - kw).mul(c))
            })
            .collect();
        for (w, o) in words.iter().zip(&orig) {
            let got = rec.get(w);
            if let Some(c) = got {
                if let Some(val) = c.valuation() {
                    if val < 0 {
                        bad = Some(format!("{name}: coefficient of {} has order h^{val}", v.word_label(w)));
                        break 'rel;
                    }
                }
            }
            let prec = got.map(|c| c.precision().max(0) as usize).unwrap_or(n + 1).min(n + 1);
            known = known.min(prec);
            for k in 0..prec {
                let x = got.and_then(|c| c.coeff(k as i64).cloned()).unwrap_or_else(|| Rational::from_integer(0.into()));
                if x != *o.coeff(k) {
                    bad = Some(format!("{name}: coefficient of {} at h^{k}: recovered {x}, input {}", v.word_label(w), o.coeff(k)));
                    break 'rel;
                }
            }
        }
    }
    let c = match bad {
        None => Check::new("relations", Status::Pass),
        Some(w) => Check::new("relations", Status::Fail).with_witness(w),
    };
    rep.push(if known == usize::MAX { c } else { c.at_order(known.saturating_sub(1)) });
    rep.sort();
    rep
}

/// Round trip on the standard generators `e_v`, `de_i`.
pub fn duality_roundtrip_standard(ctx: &JetCtx, side: Side, n_max: usize) -> Report {
    let (p, m) = (ctx.dfa().p(), ctx.dfa().m());
    let base: Vec<Jet> = (0..p).map(|v| ctx.coord(side, v)).collect();
    let xi: Vec<Jet> = (0..m).map(|i| ctx.de(side, i)).collect();
    duality_roundtrip(ctx, side, &base, &xi, n_max)
}
