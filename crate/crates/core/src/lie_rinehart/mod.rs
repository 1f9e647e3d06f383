//! Lie-Rinehart algebras on finite free modules over `ℚ[x1..xp]`.
//!
//! An element of `L` (a *section*) is a coefficient vector `Σ f_i e_i`,
//! stored as a slice of `m` polynomials.

mod bialgebra;
mod random;
mod wedge;

pub use bialgebra::{lr_bialgebra_validate, poisson_from_pair, Cobracket};
pub use random::{corrupt, jacobi_violating_spec, random_valid_spec};
pub use wedge::{lr_differential, schouten_bracket, FormElement, MultiVector, Wedge};

use std::collections::BTreeMap;

use num_traits::One;

use crate::arith::{monos_up_to, CPoly, Rational};
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieRinehartSpec {
    /// number of base variables
    pub p: usize,
    /// rank of L
    pub m: usize,
    /// `[e_i, e_j]` for `i < j`, as coefficient vectors of length `m`
    bracket: BTreeMap<(usize, usize), Vec<CPoly>>,
    /// `anchor[i][j]`: coefficient of `∂/∂x_j` in `ω(e_i)`
    anchor: Vec<Vec<CPoly>>,
    pub names: Vec<String>,
}

impl LieRinehartSpec {
    /// Zero bracket, zero anchor.
    pub fn new(p: usize, m: usize) -> Self {
        LieRinehartSpec {
            p,
            m,
            bracket: BTreeMap::new(),
            anchor: vec![vec![CPoly::zero(p); p]; m],
            names: (1..=m).map(|i| format!("e{i}")).collect(),
        }
    }

    /// `L = Der(ℚ[x1..xp])` on the basis `∂_1..∂_p`.
    pub fn derivations(p: usize) -> Self {
        let mut s = Self::new(p, p);
        for i in 0..p {
            s.set_anchor(i, i, CPoly::one(p));
        }
        s.names = (1..=p).map(|i| format!("d{i}")).collect();
        s
    }

    pub fn with_names(mut self, names: &[&str]) -> Self {
        assert_eq!(names.len(), self.m);
        self.names = names.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Set `[e_i, e_j]`; `i > j` is stored negated, `i == j` rejected.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vec<CPoly>) -> Result<()> {
        if i >= self.m || j >= self.m || v.len() != self.m {
            return Err(Error::Semantic(format!("bracket entry ({},{}) out of range for rank {}", i + 1, j + 1, self.m)));
        }
        if i == j {
            return Err(Error::Semantic(format!("bracket [e{0},e{0}] is forced to vanish", i + 1)));
        }
        let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.iter().map(|c| -c).collect()) };
        if v.iter().all(|c| c.is_zero()) {
            self.bracket.remove(&key);
        } else {
            self.bracket.insert(key, v);
        }
        Ok(())
    }

    pub fn set_anchor(&mut self, i: usize, j: usize, c: CPoly) {
        self.anchor[i][j] = c;
    }

    pub fn anchor_row(&self, i: usize) -> &[CPoly] {
        &self.anchor[i]
    }

    pub fn has_zero_anchor(&self) -> bool {
        self.anchor.iter().flatten().all(|c| c.is_zero())
    }

    /// `[e_i, e_j]` as a coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<CPoly> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => self.zero_section(),
            Less => self.bracket.get(&(i, j)).cloned().unwrap_or_else(|| self.zero_section()),
            Greater => match self.bracket.get(&(j, i)) {
                Some(v) => v.iter().map(|c| -c).collect(),
                None => self.zero_section(),
            },
        }
    }

    /// Stored entries `((i, j), [e_i,e_j])` with `i < j`.
    pub fn bracket_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<CPoly>)> {
        self.bracket.iter()
    }

    /// `ω(e_i)(f)`.
    pub fn anchor_on(&self, i: usize, f: &CPoly) -> CPoly {
        let mut out = CPoly::zero(self.p);
        for (j, w) in self.anchor[i].iter().enumerate() {
            if !w.is_zero() {
                out.add_assign(&(w * &f.deriv(j)));
            }
        }
        out
    }

    /// `ω(X)(f)` for a section `X`.
    pub fn anchor_section(&self, x: &[CPoly], f: &CPoly) -> CPoly {
        let mut out = CPoly::zero(self.p);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                out.add_assign(&(xi * &self.anchor_on(i, f)));
            }
        }
        out
    }

    pub fn zero_section(&self) -> Vec<CPoly> {
        vec![CPoly::zero(self.p); self.m]
    }

    pub fn basis_section(&self, i: usize) -> Vec<CPoly> {
        let mut v = self.zero_section();
        v[i] = CPoly::one(self.p);
        v
    }

    /// Bracket of sections, extended from the basis by the Leibniz rule:
    /// `[Σf_i e_i, Σg_j e_j] = Σ f_i ω(e_i)(g_j) e_j − g_j ω(e_j)(f_i) e_i + f_i g_j [e_i,e_j]`.
    pub fn bracket(&self, x: &[CPoly], y: &[CPoly]) -> Vec<CPoly> {
        let mut out = self.zero_section();
        for (i, f) in x.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (j, g) in y.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                out[j].add_assign(&(f * &self.anchor_on(i, g)));
                out[i].add_scaled(&(g * &self.anchor_on(j, f)), &-Rational::one());
                if i != j {
                    let fg = f * g;
                    for (k, c) in self.bracket_basis(i, j).iter().enumerate() {
                        if !c.is_zero() {
                            out[k].add_assign(&(&fg * c));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn fmt_section(&self, v: &[CPoly]) -> String {
        fmt_combination(v.iter().enumerate().map(|(i, c)| (self.names[i].clone(), c)))
    }

    /// Sample base functions used by finite checks: monomials of degree ≤ 2.
    pub fn sample_functions(&self) -> Vec<CPoly> {
        monos_up_to(self.p, 2).into_iter().map(|m| CPoly::monomial(m, Rational::one())).collect()
    }
}

/// `c1*name1 + (x1 - 1)*name2`, omitting zero coefficients.
pub(crate) fn fmt_combination<'a>(it: impl Iterator<Item = (String, &'a CPoly)>) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (name, c) in it {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let term = if c.is_one() {
            name
        } else if cs == "-1" {
            format!("-{name}")
        } else if c.len() == 1 {
            format!("{cs}*{name}")
        } else {
            format!("({cs})*{name}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = parts[0].clone();
    for t in &parts[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                s.push_str(" - ");
                s.push_str(rest);
            }
            None => {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
    }
    s
}

fn first_nonzero_section(v: &[CPoly]) -> bool {
    v.iter().any(|c| !c.is_zero())
}

fn jacobi_sum(spec: &LieRinehartSpec, x: &[CPoly], y: &[CPoly], z: &[CPoly]) -> Vec<CPoly> {
    let a = spec.bracket(&spec.bracket(x, y), z);
    let b = spec.bracket(&spec.bracket(y, z), x);
    let c = spec.bracket(&spec.bracket(z, x), y);
    a.iter().zip(&b).zip(&c).map(|((a, b), c)| &(a + b) + c).collect()
}

/// Jacobi on basis triples, anchor morphism on basis pairs, and Leibniz
/// compatibility (Jacobi on `(f e_i, e_j, e_k)` for sampled `f`).
pub fn lr_validate(spec: &LieRinehartSpec) -> Report {
    let mut r = Report::new();
    let m = spec.m;
    let e = |i| spec.basis_section(i);

    let mut witness = None;
    'jac: for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let s = jacobi_sum(spec, &e(i), &e(j), &e(k));
                if first_nonzero_section(&s) {
                    witness = Some(format!(
                        "({},{},{}): jacobi sum = {}",
                        spec.names[i],
                        spec.names[j],
                        spec.names[k],
                        spec.fmt_section(&s)
                    ));
                    break 'jac;
                }
            }
        }
    }
    r.record("jacobi", witness);

    let mut witness = None;
    'anc: for i in 0..m {
        for j in i + 1..m {
            let br = spec.bracket_basis(i, j);
            for v in 0..spec.p {
                let xv = CPoly::var(spec.p, v);
                let lhs = spec.anchor_section(&br, &xv);
                let rhs = &spec.anchor_on(i, &spec.anchor_on(j, &xv)) - &spec.anchor_on(j, &spec.anchor_on(i, &xv));
                if lhs != rhs {
                    witness = Some(format!(
                        "({},{}) on x{}: omega(bracket) gives {}, commutator gives {}",
                        spec.names[i],
                        spec.names[j],
                        v + 1,
                        lhs,
                        rhs
                    ));
                    break 'anc;
                }
            }
        }
    }
    r.record("anchor_morphism", witness);

    let mut witness = None;
    'leib: for f in spec.sample_functions().iter().filter(|f| !f.is_constant()) {
        for i in 0..m {
            let mut fe = spec.zero_section();
            fe[i] = f.clone();
            for j in 0..m {
                for k in j + 1..m {
                    let s = jacobi_sum(spec, &fe, &e(j), &e(k));
                    if first_nonzero_section(&s) {
                        witness = Some(format!(
                            "({}*{},{},{}): jacobi sum = {}",
                            f,
                            spec.names[i],
                            spec.names[j],
                            spec.names[k],
                            spec.fmt_section(&s)
                        ));
                        break 'leib;
                    }
                }
            }
        }
    }
    r.record("leibniz", witness);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axb_algebra() -> LieRinehartSpec {
        // A = ℚ, [e1,e2] = e1, zero anchor
        let mut s = LieRinehartSpec::new(0, 2);
        s.set_bracket(0, 1, vec![CPoly::one(0), CPoly::zero(0)]).unwrap();
        s
    }

    #[test]
    fn derivations_are_valid() {
        assert!(lr_validate(&LieRinehartSpec::derivations(1)).passed());
        assert!(lr_validate(&LieRinehartSpec::derivations(2)).passed());
    }

    #[test]
    fn two_dim_nonabelian_is_valid() {
        assert!(lr_validate(&axb_algebra()).passed());
    }

    #[test]
    fn jacobi_violation_has_witness() {
        let r = lr_validate(&jacobi_violating_spec());
        let c = r.get("jacobi").unwrap();
        assert_eq!(c.status, crate::report::Status::Fail);
        assert!(c.witness.as_ref().unwrap().starts_with("(e1,e2,e3)"));
    }

    #[test]
    fn leibniz_bracket_of_multiples() {
        let s = LieRinehartSpec::derivations(1);
        let x = CPoly::var(1, 0);
        // [∂, x ∂] = ∂
        let b = s.bracket(&s.basis_section(0), std::slice::from_ref(&x));
        assert_eq!(b, vec![CPoly::one(1)]);
        // [x∂, x^2 ∂] = x^2 ∂
        let b = s.bracket(std::slice::from_ref(&x), &[&x * &x]);
        assert_eq!(b, vec![&x * &x]);
    }

    #[test]
    fn broken_anchor_is_caught() {
        // [e1,e2] = e1 but ω(e1) = ∂1, ω(e2) = 0: ω([e1,e2]) = ∂1 ≠ 0
        let mut s = LieRinehartSpec::new(1, 2);
        s.set_bracket(0, 1, vec![CPoly::one(1), CPoly::zero(1)]).unwrap();
        s.set_anchor(0, 0, CPoly::one(1));
        let r = lr_validate(&s);
        assert!(!r.passed());
        assert_eq!(r.get("anchor_morphism").unwrap().status, crate::report::Status::Fail);
    }

    #[test]
    fn section_formatting() {
        let s = LieRinehartSpec::derivations(2);
        let v = vec![CPoly::parse("x1 - 1", 2).unwrap(), CPoly::parse("-x2", 2).unwrap()];
        assert_eq!(s.fmt_section(&v), "(x1 - 1)*d1 - x2*d2");
    }
}
