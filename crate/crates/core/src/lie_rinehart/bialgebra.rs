use num_traits::One;

use super::wedge::Wedge;
use super::{schouten_bracket, LieRinehartSpec, MultiVector};
use crate::arith::{CPoly, Rational};
use crate::report::Report;

/// The cobracket `δ` on `A ⊕ L` induced by a Lie-Rinehart structure on `L*`:
/// `δ(a) = Σ_i ω_*(e_i*)(a) e_i` and `⟨δ(e_k), e_i*∧e_j*⟩ = −⟨e_k, [e_i*, e_j*]⟩`.
pub struct Cobracket<'a> {
    pub l: &'a LieRinehartSpec,
    pub lstar: &'a LieRinehartSpec,
}

impl<'a> Cobracket<'a> {
    pub fn new(l: &'a LieRinehartSpec, lstar: &'a LieRinehartSpec) -> Self {
        Cobracket { l, lstar }
    }

    pub fn on_function(&self, f: &CPoly) -> MultiVector {
        let v: Vec<CPoly> = (0..self.l.m).map(|i| self.lstar.anchor_on(i, f)).collect();
        Wedge::from_section(&v, self.l.p)
    }

    pub fn on_basis(&self, k: usize) -> MultiVector {
        let (p, m) = (self.l.p, self.l.m);
        let mut w = Wedge::zero(p, m, 2);
        for i in 0..m {
            for j in i + 1..m {
                let c = &self.lstar.bracket_basis(i, j)[k];
                w.add_term(vec![i, j], &-c);
            }
        }
        w
    }

    /// `δ(Σ f_i e_i) = Σ δ(f_i) ∧ e_i + f_i δ(e_i)`.
    pub fn on_section(&self, x: &[CPoly]) -> MultiVector {
        let (p, m) = (self.l.p, self.l.m);
        let mut w = Wedge::zero(p, m, 2);
        for (i, f) in x.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            w = &w + &self.on_function(f).wedge(&Wedge::basis(p, m, i));
            w = &w + &self.on_basis(i).mul_poly(f);
        }
        w
    }
}

fn derivation_defect(cb: &Cobracket, x: &[CPoly], y: &[CPoly]) -> MultiVector {
    let l = cb.l;
    let lhs = cb.on_section(&l.bracket(x, y));
    let xw = Wedge::from_section(x, l.p);
    let yw = Wedge::from_section(y, l.p);
    let a = schouten_bracket(l, &cb.on_section(x), &yw).expect("degrees (2,1)");
    let b = schouten_bracket(l, &xw, &cb.on_section(y)).expect("degrees (1,2)");
    &lhs - &(&a + &b)
}

/// Checks that `δ` built from `lstar` is a derivation of the bracket of `l`.
pub fn lr_bialgebra_validate(l: &LieRinehartSpec, lstar: &LieRinehartSpec) -> Report {
    let mut r = Report::new();
    if l.m != lstar.m || l.p != lstar.p {
        r.fail("shape", format!("rank/base mismatch: ({}, {}) vs ({}, {})", l.p, l.m, lstar.p, lstar.m));
        return r;
    }
    let cb = Cobracket::new(l, lstar);
    let m = l.m;

    let mut witness = None;
    'basis: for i in 0..m {
        for j in i + 1..m {
            let d = derivation_defect(&cb, &l.basis_section(i), &l.basis_section(j));
            if !d.is_zero() {
                witness = Some(format!("({},{}): defect {}", l.names[i], l.names[j], d.fmt_with(&l.names)));
                break 'basis;
            }
        }
    }
    r.record("derivation.basis", witness);

    let mut witness = None;
    'mult: for f in l.sample_functions().iter().filter(|f| !f.is_constant()) {
        for i in 0..m {
            let mut fx = l.zero_section();
            fx[i] = f.clone();
            for j in 0..m {
                let d = derivation_defect(&cb, &fx, &l.basis_section(j));
                if !d.is_zero() {
                    witness =
                        Some(format!("({}*{},{}): defect {}", f, l.names[i], l.names[j], d.fmt_with(&l.names)));
                    break 'mult;
                }
            }
        }
    }
    r.record("derivation.multiples", witness);

    // δ(ω(X)(a)) = [δX, a] + [X, δa]
    let mut witness = None;
    'anc: for i in 0..m {
        for v in 0..l.p {
            let a = CPoly::var(l.p, v);
            let xw = Wedge::basis(l.p, m, i);
            let aw = Wedge::scalar(a.clone(), m);
            let lhs = cb.on_function(&l.anchor_on(i, &a));
            let rhs = &schouten_bracket(l, &cb.on_basis(i), &aw).expect("degrees (2,0)")
                + &schouten_bracket(l, &xw, &cb.on_function(&a)).expect("degrees (1,1)");
            let d = &lhs - &rhs;
            if !d.is_zero() {
                witness = Some(format!("({},x{}): defect {}", l.names[i], v + 1, d.fmt_with(&l.names)));
                break 'anc;
            }
        }
    }
    r.record("derivation.anchor", witness);
    r
}

/// `{f, g} = ⟨d_L f, d_{L*} g⟩ = Σ_i ω(e_i)(f) · ω_*(e_i*)(g)`.
pub fn poisson_from_pair(l: &LieRinehartSpec, lstar: &LieRinehartSpec, f: &CPoly, g: &CPoly) -> CPoly {
    let mut out = CPoly::zero(l.p);
    for i in 0..l.m {
        let a = l.anchor_on(i, f);
        if a.is_zero() {
            continue;
        }
        out.add_scaled(&(&a * &lstar.anchor_on(i, g)), &Rational::one());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_rinehart::lr_validate;

    fn p(s: &str) -> CPoly {
        CPoly::parse(s, 2).unwrap()
    }

    /// L = Der(ℚ[x1,x2]); L*: [e1*,e2*] = e1*, ω(e1*) = x1 ∂2, ω(e2*) = −x1 ∂1.
    fn axb_pair() -> (LieRinehartSpec, LieRinehartSpec) {
        let l = LieRinehartSpec::derivations(2);
        let mut ls = LieRinehartSpec::new(2, 2);
        ls.set_bracket(0, 1, vec![p("1"), p("0")]).unwrap();
        ls.set_anchor(0, 1, p("x1"));
        ls.set_anchor(1, 0, p("-x1"));
        (l, ls)
    }

    #[test]
    fn axb_pair_is_a_bialgebra() {
        let (l, ls) = axb_pair();
        assert!(lr_validate(&ls).passed(), "{}", lr_validate(&ls));
        let r = lr_bialgebra_validate(&l, &ls);
        assert!(r.passed(), "{r}");
        let r = lr_bialgebra_validate(&ls, &l);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn cobracket_values() {
        let (l, ls) = axb_pair();
        let cb = Cobracket::new(&l, &ls);
        assert_eq!(cb.on_function(&p("x1")).section(), vec![p("0"), p("-x1")]);
        assert_eq!(cb.on_function(&p("x2")).section(), vec![p("x1"), p("0")]);
        assert_eq!(cb.on_basis(0).coeff(&[0, 1]), p("-1"));
        assert!(cb.on_basis(1).is_zero());
    }

    #[test]
    fn perturbed_dual_bracket_fails() {
        let (l, mut ls) = axb_pair();
        ls.set_bracket(0, 1, vec![p("1"), p("1")]).unwrap();
        let r = lr_bialgebra_validate(&l, &ls);
        assert!(!r.passed());
        assert!(r.problems()[0].witness.is_some());
    }

    #[test]
    fn trivial_dual_is_a_bialgebra() {
        let mut g = LieRinehartSpec::new(0, 2);
        g.set_bracket(0, 1, vec![CPoly::one(0), CPoly::zero(0)]).unwrap();
        assert!(lr_bialgebra_validate(&g, &LieRinehartSpec::new(0, 2)).passed());
    }

    #[test]
    fn poisson_bracket() {
        let (l, ls) = axb_pair();
        assert_eq!(poisson_from_pair(&l, &ls, &p("x1"), &p("x2")), p("x1"));
        assert_eq!(poisson_from_pair(&l, &ls, &p("x2"), &p("x1")), p("-x1"));
        let f = p("x1^2*x2 + x2");
        assert!(poisson_from_pair(&l, &ls, &f, &f).is_zero());
        assert!(poisson_from_pair(&l, &LieRinehartSpec::new(2, 2), &f, &p("x1")).is_zero());
    }
}
