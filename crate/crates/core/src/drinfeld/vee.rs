use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{CPoly, HLaurent, Mono, Rational};
use crate::error::{Error, Result};
use crate::jets::{express_in_span, solve_series, Jet, JetCtx, KSeries, Side};
use crate::lie_rinehart::{lr_validate, LieRinehartSpec};
use crate::report::{Check, Report, Status};

/// Scalars `k((h))` with tracked precision.
pub type Laurent = HLaurent<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// coordinate functional `e_v`
    Base(usize),
    /// rescaled dual generator `ξ̌_i`
    Dual(usize),
}

/// The generator `h^{-shift}·jet`.
#[derive(Clone, Debug)]
pub struct VeeGen {
    pub label: String,
    pub jet: Jet,
    pub shift: i64,
    pub kind: GenKind,
}

/// Non-decreasing generator indices; the empty word is the unit.
pub type Word = Vec<usize>;

/// `[g_left, g_right] = Σ c_w w`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub left: usize,
    pub right: usize,
    pub rhs: Vec<(Word, Laurent)>,
}

/// `Σ c · a ⊗ b` with `None` for the unit.
pub type TensorCombo = Vec<(Option<usize>, Option<usize>, Laurent)>;
/// `Σ c · g` with `None` for the unit.
pub type LinearCombo = Vec<(Option<usize>, Laurent)>;

/// Generator-level presentation of `K^∨`: coordinates `e_v`, rescaled duals
/// `ξ̌_i = h⁻¹ξ_i`, their commutators in words of length ≤ 2, and, where they
/// stay in the linear span, coproducts and source/target images.
#[derive(Clone, Debug)]
pub struct VeeAlgebroid {
    pub side: Side,
    pub n: usize,
    pub d: usize,
    pub gens: Vec<VeeGen>,
    pub relations: Vec<Relation>,
    pub coproducts: Vec<Option<TensorCombo>>,
    pub sources: Vec<Option<LinearCombo>>,
    pub targets: Vec<Option<LinearCombo>>,
    /// `∂(g) = h^{-shift}·counit`, as `(counit, shift)`
    pub counits: Vec<(crate::deform::ASeries, i64)>,
}

fn laurent(c: &KSeries, shift: i64) -> Laurent {
    HLaurent::from_series(c, shift)
}

fn check_integral(c: &Laurent, at: impl FnOnce() -> String) -> Result<()> {
    match c.valuation() {
        Some(v) if v < 0 => Err(Error::NonIntegral { order: v, at: at() }),
        _ => Ok(()),
    }
}

fn dual_label(l: &str) -> String {
    match l.strip_prefix("de") {
        Some(rest) => format!("ďe{rest}"),
        None => format!("h⁻¹({l})"),
    }
}

fn det(m: &[Vec<CPoly>], p: usize) -> CPoly {
    let n = m.len();
    if n == 0 {
        return CPoly::one(p);
    }
    let mut acc = CPoly::zero(p);
    for (j, a) in m[0].iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let minor: Vec<Vec<CPoly>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
        let t = a * &det(&minor, p);
        if j % 2 == 0 {
            acc.add_assign(&t);
        } else {
            acc = &acc - &t;
        }
    }
    acc
}

impl VeeAlgebroid {
    pub fn word_label(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&i| self.gens[i].label.as_str()).collect::<Vec<_>>().join("*")
    }

    fn opt_label(&self, g: Option<usize>) -> &str {
        g.map(|i| self.gens[i].label.as_str()).unwrap_or("1")
    }

    pub fn relation(&self, a: usize, b: usize) -> Option<&Relation> {
        self.relations.iter().find(|r| r.left == a && r.right == b)
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.label == label)
    }

    pub fn fmt_combo<'a>(&self, terms: impl IntoIterator<Item = (String, &'a Laurent)>) -> String {
        let parts: Vec<String> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| format!("[{c}]*{w}")).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// `("[a,b]", rhs)` for every stored relation.
    pub fn relation_strings(&self) -> Vec<(String, String)> {
        self.relations
            .iter()
            .map(|r| {
                let name = format!("[{},{}]", self.gens[r.left].label, self.gens[r.right].label);
                (name, self.fmt_combo(r.rhs.iter().map(|(w, c)| (self.word_label(w), c))))
            })
            .collect()
    }

    pub fn coproduct_string(&self, g: usize) -> Option<String> {
        self.coproducts[g].as_ref().map(|t| {
            self.fmt_combo(t.iter().map(|(a, b, c)| (format!("({} ⊗ {})", self.opt_label(*a), self.opt_label(*b)), c)))
        })
    }

    pub fn linear_string(&self, l: &LinearCombo) -> String {
        self.fmt_combo(l.iter().map(|(a, c)| (self.opt_label(*a).to_string(), c)))
    }
}

/// `∨` on the standard generators: coordinates `e_v` and `ďe_i = h⁻¹ de_i`.
pub fn vee_build(ctx: &JetCtx, side: Side) -> Result<VeeAlgebroid> {
    let p = ctx.dfa().p();
    let m = ctx.dfa().m();
    let base: Vec<Jet> = (0..p).map(|v| ctx.coord(side, v)).collect();
    let xi: Vec<Jet> = (0..m).map(|i| ctx.de(side, i)).collect();
    vee_build_from(ctx, side, &base, &xi)
}

/// `∨` on given generators of `I_h`: the `ξ_i` must lie in `Ker ∂` and their
/// classes mod `h` must pair unimodularly with `e_1..e_m`.
pub fn vee_build_from(ctx: &JetCtx, side: Side, base: &[Jet], xi: &[Jet]) -> Result<VeeAlgebroid> {
    let dfa = ctx.dfa();
    let (p, m, n) = (dfa.p(), dfa.m(), ctx.order());
    if xi.len() != m {
        return Err(Error::Semantic(format!("expected {m} dual generators, got {}", xi.len())));
    }
    for x in base.iter().chain(xi) {
        if x.side() != side {
            return Err(Error::FlavorMismatch);
        }
    }
    for x in xi {
        let c = ctx.counit(x);
        if !c.is_zero() {
            return Err(Error::Semantic(format!("{} is not in Ker ∂: ∂ = {c}", x.label())));
        }
    }
    let mat: Vec<Vec<CPoly>> =
        xi.iter().map(|x| (0..m).map(|j| ctx.value(x, &Mono::unit(m, j)).coeff(0).clone()).collect()).collect();
    let dt = det(&mat, p);
    if !dt.is_constant() || dt.is_zero() {
        return Err(Error::Semantic(format!(
            "classes of the dual generators do not span J/J² mod h (pairing determinant {dt})"
        )));
    }

    let mut gens: Vec<VeeGen> = base
        .iter()
        .enumerate()
        .map(|(v, j)| VeeGen { label: j.label().to_string(), jet: j.clone(), shift: 0, kind: GenKind::Base(v) })
        .collect();
    gens.extend(xi.iter().enumerate().map(|(i, j)| VeeGen {
        label: dual_label(j.label()),
        jet: j.clone(),
        shift: 1,
        kind: GenKind::Dual(i),
    }));
    let g = gens.len();

    // words of length ≤ 2
    let mut words: Vec<Word> = vec![vec![]];
    words.extend((0..g).map(|i| vec![i]));
    for i in 0..g {
        for j in i..g {
            words.push(vec![i, j]);
        }
    }
    let word_jet = |w: &Word| -> Result<Jet> {
        if w.is_empty() {
            return Ok(ctx.unit(side));
        }
        let js: Vec<Jet> = w.iter().map(|&i| gens[i].jet.clone()).collect();
        ctx.mul_all(&js)
    };
    let word_shift = |w: &Word| -> i64 { w.iter().map(|&i| gens[i].shift).sum() };
    let wjets: Vec<Jet> = words.iter().map(&word_jet).collect::<Result<_>>()?;

    let mut relations = Vec::new();
    for a in 0..g {
        for b in a + 1..g {
            let name = || format!(" in [{},{}]", gens[a].label, gens[b].label);
            let t = ctx.commutator(&gens[a].jet, &gens[b].jet)?;
            let s = gens[a].shift + gens[b].shift;
            let sol = express_in_span(ctx, &t, &wjets).ok_or_else(|| {
                Error::Semantic(format!("[{},{}] leaves the span of words of length ≤ 2", gens[a].label, gens[b].label))
            })?;
            let mut rhs = Vec::new();
            for (w, c) in words.iter().zip(sol) {
                if c.is_zero() {
                    continue;
                }
                let l = laurent(&c, word_shift(w) - s);
                check_integral(&l, name)?;
                rhs.push((w.clone(), l));
            }
            relations.push(Relation { left: a, right: b, rhs });
        }
    }

    // coproducts in span{1, gens} ⊗ span{1, gens}
    let letters: Vec<Option<usize>> = std::iter::once(None).chain((0..g).map(Some)).collect();
    let letter_jet = |l: Option<usize>| l.map(|i| gens[i].jet.clone()).unwrap_or_else(|| ctx.unit(side));
    let letter_shift = |l: Option<usize>| l.map(|i| gens[i].shift).unwrap_or(0);
    // the pairs are dependent through the balancing relation; listing the
    // highest shifts first makes the pivot choice favour integral coefficients
    let mut pairs: Vec<(Option<usize>, Option<usize>)> =
        letters.iter().flat_map(|&a| letters.iter().map(move |&b| (a, b))).collect();
    pairs.sort_by_key(|&(a, b)| -(letter_shift(a) + letter_shift(b)));
    let pair_tables: Vec<Vec<_>> = pairs
        .iter()
        .map(|&(a, b)| ctx.tensor_table(&[(letter_jet(a), letter_jet(b))]).into_values().collect())
        .collect();
    let mut coproducts = Vec::with_capacity(g);
    for gi in 0..g {
        let tv: Vec<_> = ctx.coproduct_table(&gens[gi].jet).into_values().collect();
        let out = match solve_series(&tv, &pair_tables) {
            None => None,
            Some(sol) => {
                let mut t = TensorCombo::new();
                for (&(a, b), c) in pairs.iter().zip(sol) {
                    if c.is_zero() {
                        continue;
                    }
                    let l = laurent(&c, letter_shift(a) + letter_shift(b) - gens[gi].shift);
                    check_integral(&l, || format!(" in Δ({})", gens[gi].label))?;
                    t.push((a, b, l));
                }
                Some(t)
            }
        };
        coproducts.push(out);
    }

    // source / target images of the coordinates
    let ljets: Vec<Jet> = letters.iter().map(|&l| letter_jet(l)).collect();
    let linear = |target: &Jet| -> Option<LinearCombo> {
        let sol = express_in_span(ctx, target, &ljets)?;
        Some(
            letters
                .iter()
                .zip(sol)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&l, c)| (l, laurent(&c, letter_shift(l))))
                .collect(),
        )
    };
    let mut sources = Vec::with_capacity(p);
    let mut targets = Vec::with_capacity(p);
    for v in 0..p {
        let x = dfa.a_const(&CPoly::var(p, v));
        sources.push(linear(&ctx.dual_source(side, &x)));
        targets.push(linear(&ctx.dual_target(side, &x)));
    }
    let counits = gens.iter().map(|g| (ctx.counit(&g.jet), g.shift)).collect();

    Ok(VeeAlgebroid { side, n, d: ctx.degree(), gens, relations, coproducts, sources, targets, counits })
}

/// Order-0 part of a combination, split into words with at most one dual letter.
fn classical_section(v: &VeeAlgebroid, rhs: &[(Word, Laurent)], p: usize, m: usize) -> std::result::Result<(CPoly, Vec<CPoly>), String> {
    let mut fun = CPoly::zero(p);
    let mut sec = vec![CPoly::zero(p); m];
    for (w, c) in rhs {
        let c0 = c.coeff(0).cloned().unwrap_or_else(Rational::zero);
        if c0.is_zero() {
            continue;
        }
        let mut mono = Mono::zero(p);
        let mut dual = None;
        for &i in w {
            match v.gens[i].kind {
                GenKind::Base(b) => mono = mono.inc(b),
                GenKind::Dual(k) if dual.is_none() => dual = Some(k),
                GenKind::Dual(_) => return Err(format!("{} at h^0", v.word_label(w))),
            }
        }
        let t = CPoly::monomial(mono, c0);
        match dual {
            None => fun.add_assign(&t),
            Some(k) => sec[k].add_assign(&t),
        }
    }
    Ok((fun, sec))
}

/// `h = 0` in the relation table: the Lie-Rinehart algebra `L*` spanned by the
/// `ξ̌_i`, with anchor read off `[ξ̌_i, e_v]`.
pub fn vee_semiclassical(v: &VeeAlgebroid) -> (LieRinehartSpec, Report) {
    let duals: Vec<usize> = (0..v.gens.len()).filter(|&i| matches!(v.gens[i].kind, GenKind::Dual(_))).collect();
    let bases: Vec<usize> = (0..v.gens.len()).filter(|&i| matches!(v.gens[i].kind, GenKind::Base(_))).collect();
    let (p, m) = (bases.len(), duals.len());
    let names: Vec<&str> = duals.iter().map(|&i| v.gens[i].label.as_str()).collect();
    let mut spec = LieRinehartSpec::new(p, m).with_names(&names);
    let mut rep = Report::new();
    let mut bad_shape = None;
    let mut bad_comm = None;

    for (ia, &a) in duals.iter().enumerate() {
        for (ib, &b) in duals.iter().enumerate().skip(ia + 1) {
            let r = v.relation(a, b).expect("all pairs stored");
            match classical_section(v, &r.rhs, p, m) {
                Ok((f, sec)) if f.is_zero() => {
                    spec.set_bracket(ia, ib, sec).expect("indices in range");
                }
                Ok((f, _)) => {
                    bad_shape.get_or_insert(format!("[{},{}] has base part {f} at h^0", names[ia], names[ib]));
                }
                Err(w) => {
                    bad_shape.get_or_insert(format!("[{},{}] contains {w}", names[ia], names[ib]));
                }
            }
        }
        for &b in &bases {
            let GenKind::Base(vv) = v.gens[b].kind else { unreachable!() };
            // stored as [e_v, ξ̌_i]; the anchor is [ξ̌_i, e_v]
            let r = v.relation(b.min(a), b.max(a)).expect("all pairs stored");
            let sign = if b < a { -Rational::one() } else { Rational::one() };
            match classical_section(v, &r.rhs, p, m) {
                Ok((f, sec)) if sec.iter().all(|s| s.is_zero()) => spec.set_anchor(ia, vv, f.scale(&sign)),
                _ => {
                    bad_shape.get_or_insert(format!("[{},{}] is not a function at h^0", names[ia], v.gens[b].label));
                }
            }
        }
    }
    for (i, &a) in bases.iter().enumerate() {
        for &b in &bases[i + 1..] {
            let r = v.relation(a, b).expect("all pairs stored");
            if r.rhs.iter().any(|(_, c)| c.coeff(0).is_some_and(|x| !x.is_zero())) {
                bad_comm.get_or_insert(format!("[{},{}] ≠ 0 at h^0", v.gens[a].label, v.gens[b].label));
            }
        }
    }
    rep.record("bracket_shape", bad_shape);
    rep.record("base_commutative", bad_comm);
    rep.merge("lstar", lr_validate(&spec));

    // ξ̌_i primitive mod h
    let mut missing = false;
    let mut bad = None;
    for (k, &a) in duals.iter().enumerate() {
        let Some(cop) = &v.coproducts[a] else {
            missing = true;
            continue;
        };
        for (x, y, c) in cop {
            let c0 = c.coeff(0).cloned().unwrap_or_else(Rational::zero);
            let want = match (x, y) {
                (Some(i), None) | (None, Some(i)) if *i == a => Rational::one(),
                _ => Rational::zero(),
            };
            if c0 != want {
                bad.get_or_insert(format!("Δ({}) ≡ {} mod h", names[k], v.coproduct_string(a).unwrap_or_default()));
            }
        }
        let has = |x: Option<usize>, y: Option<usize>| cop.iter().any(|(a2, b2, c)| *a2 == x && *b2 == y && !c.is_zero());
        if !has(Some(a), None) || !has(None, Some(a)) {
            bad.get_or_insert(format!("Δ({}) misses a primitive term", names[k]));
        }
    }
    if missing && bad.is_none() {
        rep.push(Check::new("primitive_mod_h", Status::Indeterminate).with_witness("a coproduct left the linear span"));
    } else {
        rep.record("primitive_mod_h", bad);
    }
    rep.sort();
    (spec, rep)
}

impl fmt::Display for VeeAlgebroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, rhs) in self.relation_strings() {
            writeln!(f, "{name} = {rhs}")?;
        }
        Ok(())
    }
}
