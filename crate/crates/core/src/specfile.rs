//! Spec files: a sectioned `key = value` format describing a Lie-Rinehart
//! algebra, an optional twistor, truncation parameters and sampling options.
//!
//! ```text
//! file        := line*
//! line        := blank | comment | section | entry
//! comment     := '#' any*                       (also allowed after a value)
//! section     := '[' ('base'|'algebra'|'twistor'|'truncation'|'sample') ']'
//! entry       := key '=' value
//!
//! [base]        vars = x1, x2, ...              (exactly x1..xp, in order; may be empty)
//! [algebra]     rank = m
//!               names = n1, ..., nm             (identifiers, not of the form x<digits>)
//!               bracket i j = f1, ..., fm       ([e_i, e_j] = Σ f_k e_k; 1-based, i ≠ j)
//!               anchor i = g1, ..., gp          (ω(e_i) = Σ g_v ∂/∂x_v)
//! [twistor]     form = exp | orders
//!               weight = q                      (exp form: F = exp(h q r))
//!               r = tensor                      (exp form)
//!               order k = tensor                (orders form, k ≥ 1; F_0 = 1⊗1)
//! [truncation]  h_order = N, pbw_degree = k, jet_degree = d, n_max = n   (all ≥ 1)
//! [sample]      max_degree = k, extra = f1, f2, ..., seed = s
//!
//! tensor      := ['-'] term (('+'|'-') term)*
//! term        := [rational '*'] '[' element '|' element ']'
//! element     := ['-'] prod (('+'|'-') prod)*
//! prod        := factor ('*' factor)*           (product in the enveloping algebroid)
//! factor      := rational | 'x'i ['^'k] | name ['^'k] | '(' element ')' ['^'k]
//! ```
//!
//! Polynomials follow the same syntax restricted to numbers and `x_i`.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{CPoly, Rational};
use crate::deform::Twistor;
use crate::envelope::{EnvElement, Envelope};
use crate::error::{Error, Result};
use crate::lie_rinehart::LieRinehartSpec;
use crate::tensorial::Tensor;

/// `h_order = N`, `pbw_degree`, `jet_degree = d`, `n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub h_order: usize,
    pub pbw_degree: usize,
    pub jet_degree: usize,
    pub n_max: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { h_order: 4, pbw_degree: 2, jet_degree: 4, n_max: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub max_degree: u32,
    pub extra: Vec<CPoly>,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { max_degree: 2, extra: Vec::new(), seed: 0 }
    }
}

/// Twistor block as written; tensors are kept as source text until an
/// envelope is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistorBlock {
    Exp { weight: Rational, r: Located },
    Orders(BTreeMap<usize, Located>),
}

/// A value together with its position in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineSpec {
    pub spec: LieRinehartSpec,
    pub twistor: Option<TwistorBlock>,
    pub truncation: Truncation,
    pub sample: Sampling,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Shift the position of an error raised while parsing a single value.
fn relocate(e: Error, at: &Located) -> Error {
    match e {
        Error::Parse { line: 1, col, msg } => Error::Parse { line: at.line, col: at.col + col - 1, msg },
        other => other,
    }
}

fn split_list(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').map(str::trim).collect()
    }
}

fn parse_usize(v: &Located) -> Result<usize> {
    v.text.trim().parse().map_err(|_| perr(v.line, v.col, format!("expected a non-negative integer, got '{}'", v.text)))
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, s) = match s.strip_prefix('-') {
        Some(r) => (true, r.trim()),
        None => (false, s),
    };
    let r = match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (BigInt, BigInt) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            if b.is_zero() {
                return None;
            }
            Rational::new(a, b)
        }
        None => Rational::from_integer(s.parse().ok()?),
    };
    Some(if neg { -r } else { r })
}

fn is_valid_name(n: &str) -> bool {
    let mut cs = n.chars();
    let head_ok = cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    let is_var = n.strip_prefix('x').is_some_and(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()));
    head_ok && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !is_var
}

impl EngineSpec {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Semantic(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut section: Option<String> = None;
        let mut entries: Vec<(String, String, Located)> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim();
            if trimmed.is_empty() {
                continue;
            }
            let col0 = body.len() - body.trim_start().len() + 1;
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| perr(line, col0 + trimmed.len(), "expected ']'"))?
                    .trim();
                if !["base", "algebra", "twistor", "truncation", "sample"].contains(&name) {
                    return Err(perr(line, col0 + 1, format!("unknown section '{name}'")));
                }
                section = Some(name.to_string());
                continue;
            }
            let sec = section.clone().ok_or_else(|| perr(line, col0, "entry outside of a section"))?;
            let eq = body.find('=').ok_or_else(|| perr(line, col0, "expected 'key = value'"))?;
            let key = body[..eq].split_whitespace().collect::<Vec<_>>().join(" ");
            if key.is_empty() {
                return Err(perr(line, col0, "missing key"));
            }
            let value = &body[eq + 1..];
            let vcol = eq + 2 + (value.len() - value.trim_start().len());
            if !seen.insert((sec.clone(), key.clone())) {
                return Err(perr(line, col0, format!("duplicate key '{key}' in [{sec}]")));
            }
            entries.push((sec, key, Located { text: value.trim().to_string(), line, col: vcol }));
        }
        if entries.is_empty() {
            return Err(perr(1, 1, "empty spec"));
        }
        Self::assemble(entries)
    }

    fn assemble(entries: Vec<(String, String, Located)>) -> Result<Self> {
        let mut p = None;
        let mut m = None;
        let mut names: Option<Vec<String>> = None;
        let mut brackets = Vec::new();
        let mut anchors = Vec::new();
        let mut form: Option<Located> = None;
        let mut weight: Option<Located> = None;
        let mut r: Option<Located> = None;
        let mut orders = BTreeMap::new();
        let mut truncation = Truncation::default();
        let mut sample = Sampling::default();
        let mut extra: Option<Located> = None;

        for (sec, key, v) in entries {
            let words: Vec<&str> = key.split(' ').collect();
            let bad_key = || perr(v.line, 1, format!("unknown key '{key}' in [{sec}]"));
            match (sec.as_str(), words.as_slice()) {
                ("base", ["vars"]) => {
                    let vars = split_list(&v.text);
                    for (i, x) in vars.iter().enumerate() {
                        if *x != format!("x{}", i + 1) {
                            return Err(perr(v.line, v.col, format!("variables must be x1..xp in order, found '{x}'")));
                        }
                    }
                    p = Some(vars.len());
                }
                ("algebra", ["rank"]) => m = Some(parse_usize(&v)?),
                ("algebra", ["names"]) => {
                    let ns: Vec<String> = split_list(&v.text).into_iter().map(String::from).collect();
                    if let Some(n) = ns.iter().find(|n| !is_valid_name(n)) {
                        return Err(perr(v.line, v.col, format!("invalid generator name '{n}'")));
                    }
                    names = Some(ns);
                }
                ("algebra", ["bracket", i, j]) => {
                    let ij = (i.parse::<usize>(), j.parse::<usize>());
                    let (Ok(i), Ok(j)) = ij else { return Err(perr(v.line, 1, "bracket indices must be integers")) };
                    brackets.push((i, j, v));
                }
                ("algebra", ["anchor", i]) => {
                    let Ok(i) = i.parse::<usize>() else { return Err(perr(v.line, 1, "anchor index must be an integer")) };
                    anchors.push((i, v));
                }
                ("twistor", ["form"]) => form = Some(v),
                ("twistor", ["weight"]) => weight = Some(v),
                ("twistor", ["r"]) => r = Some(v),
                ("twistor", ["order", k]) => {
                    let k: usize = k.parse().map_err(|_| perr(v.line, 1, "twistor order must be an integer"))?;
                    if k == 0 {
                        return Err(perr(v.line, 1, "order 0 of a twistor is fixed to 1⊗1"));
                    }
                    orders.insert(k, v);
                }
                ("truncation", [k]) => {
                    let n = parse_usize(&v)?;
                    if n == 0 {
                        return Err(Error::Semantic(format!("{k} must be at least 1 (line {})", v.line)));
                    }
                    match *k {
                        "h_order" => truncation.h_order = n,
                        "pbw_degree" => truncation.pbw_degree = n,
                        "jet_degree" => truncation.jet_degree = n,
                        "n_max" => truncation.n_max = n,
                        _ => return Err(bad_key()),
                    }
                }
                ("sample", ["max_degree"]) => sample.max_degree = parse_usize(&v)? as u32,
                ("sample", ["seed"]) => sample.seed = parse_usize(&v)? as u64,
                ("sample", ["extra"]) => extra = Some(v),
                _ => return Err(bad_key()),
            }
        }

        let p = p.ok_or_else(|| Error::Semantic("missing [base] vars".into()))?;
        let m = m.ok_or_else(|| Error::Semantic("missing [algebra] rank".into()))?;
        let mut spec = LieRinehartSpec::new(p, m);
        if let Some(ns) = names {
            if ns.len() != m {
                return Err(Error::Semantic(format!("{} names given for rank {m}", ns.len())));
            }
            spec.names = ns;
        }
        let poly_list = |v: &Located, len: usize| -> Result<Vec<CPoly>> {
            let parts = split_list(&v.text);
            if parts.len() != len {
                return Err(Error::Semantic(format!("line {}: expected {len} entries, got {}", v.line, parts.len())));
            }
            let mut off = 0;
            let mut out = Vec::with_capacity(len);
            for part in v.text.split(',') {
                let lead = part.len() - part.trim_start().len();
                let at = Located { text: String::new(), line: v.line, col: v.col + off + lead };
                out.push(CPoly::parse(part.trim(), p).map_err(|e| relocate(e, &at))?);
                off += part.len() + 1;
            }
            Ok(out)
        };
        for (i, j, v) in &brackets {
            if *i == 0 || *j == 0 || *i > m || *j > m || i == j {
                return Err(Error::Semantic(format!("bracket index ({i}, {j}) out of range for rank {m}")));
            }
            let mut c = poly_list(v, m)?;
            let (a, b) = if i < j { (*i, *j) } else { (*j, *i) };
            if i > j {
                c = c.iter().map(|f| -f).collect();
            }
            if spec.bracket_basis(a - 1, b - 1).iter().any(|f| !f.is_zero()) {
                return Err(Error::Semantic(format!("bracket ({a}, {b}) given twice")));
            }
            spec.set_bracket(a - 1, b - 1, c)?;
        }
        for (i, v) in &anchors {
            if *i == 0 || *i > m {
                return Err(Error::Semantic(format!("anchor index {i} out of range for rank {m}")));
            }
            for (x, c) in poly_list(v, p)?.into_iter().enumerate() {
                spec.set_anchor(i - 1, x, c);
            }
        }
        if let Some(v) = extra {
            sample.extra = if v.text.trim().is_empty() { Vec::new() } else { poly_list(&v, split_list(&v.text).len())? };
        }

        let twistor = match form {
            None => {
                if weight.is_some() || r.is_some() || !orders.is_empty() {
                    return Err(Error::Semantic("twistor entries without 'form'".into()));
                }
                None
            }
            Some(f) => match f.text.as_str() {
                "exp" => {
                    let w = weight.ok_or_else(|| Error::Semantic("exp twistor needs 'weight'".into()))?;
                    let weight = parse_rational(&w.text).ok_or_else(|| perr(w.line, w.col, "expected a rational number"))?;
                    let r = r.ok_or_else(|| Error::Semantic("exp twistor needs 'r'".into()))?;
                    if !orders.is_empty() {
                        return Err(Error::Semantic("'order k' entries belong to form = orders".into()));
                    }
                    Some(TwistorBlock::Exp { weight, r })
                }
                "orders" => {
                    if weight.is_some() || r.is_some() {
                        return Err(Error::Semantic("'weight' and 'r' belong to form = exp".into()));
                    }
                    Some(TwistorBlock::Orders(orders))
                }
                other => return Err(perr(f.line, f.col, format!("unknown twistor form '{other}'"))),
            },
        };
        let out = EngineSpec { spec, twistor, truncation, sample };
        // parse the tensors once so that errors surface at load time
        if out.twistor.is_some() {
            let env = Envelope::new(out.spec.clone());
            out.build_twistor(&env, 1)?;
        }
        Ok(out)
    }

    /// The twistor truncated at `n` (trivial when no block is given).
    pub fn build_twistor(&self, env: &Envelope, n: usize) -> Result<Twistor> {
        match &self.twistor {
            None => Ok(Twistor::trivial(env, n)),
            Some(TwistorBlock::Exp { weight, r }) => {
                let r = parse_tensor(env, &r.text).map_err(|e| relocate(e, r))?;
                Ok(Twistor::exponential(env, r, weight.clone(), n))
            }
            Some(TwistorBlock::Orders(os)) => {
                let mut v = vec![Tensor::one(2, env.p(), env.m())];
                for k in 1..=n {
                    v.push(match os.get(&k) {
                        Some(t) => parse_tensor(env, &t.text).map_err(|e| relocate(e, t))?,
                        None => Tensor::zero(2, env.p(), env.m()),
                    });
                }
                Ok(Twistor::from_orders(v))
            }
        }
    }
}

/// Parse an element of the enveloping algebroid.
pub fn parse_element(env: &Envelope, s: &str) -> Result<EnvElement> {
    let mut p = ElemParser { s: s.as_bytes(), pos: 0, env };
    let out = p.sum()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse a two-leg tensor `Σ c [u | v]`.
pub fn parse_tensor(env: &Envelope, s: &str) -> Result<Tensor> {
    let mut p = ElemParser { s: s.as_bytes(), pos: 0, env };
    let mut acc = Tensor::zero(2, env.p(), env.m());
    let mut first = true;
    loop {
        let sign = match p.peek() {
            Some(b'+') if !first => {
                p.pos += 1;
                Rational::one()
            }
            Some(b'-') => {
                p.pos += 1;
                -Rational::one()
            }
            None if !first => break,
            _ if first => Rational::one(),
            _ => return Err(p.err("expected '+' or '-'")),
        };
        let c = if p.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = p.rational()?;
            if p.peek() != Some(b'*') {
                return Err(p.err("expected '*' after coefficient"));
            }
            p.pos += 1;
            c
        } else {
            Rational::one()
        };
        if p.peek() != Some(b'[') {
            return Err(p.err("expected '['"));
        }
        p.pos += 1;
        let u = p.sum()?;
        if p.peek() != Some(b'|') {
            return Err(p.err("expected '|'"));
        }
        p.pos += 1;
        let v = p.sum()?;
        if p.peek() != Some(b']') {
            return Err(p.err("expected ']'"));
        }
        p.pos += 1;
        acc.add_scaled(&Tensor::from_legs(&[u, v]), &(sign * c));
        first = false;
    }
    Ok(acc)
}

struct ElemParser<'a> {
    s: &'a [u8],
    pos: usize,
    env: &'a Envelope,
}

impl ElemParser<'_> {
    fn err(&self, msg: &str) -> Error {
        perr(1, self.pos + 1, msg)
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits").parse().expect("digits"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let a = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let b = self.digits()?;
            if b.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Rational::new(a, b));
        }
        Ok(Rational::from_integer(a))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.digits()?;
            return u32::try_from(n).map_err(|_| self.err("exponent too large"));
        }
        Ok(1)
    }

    fn sum(&mut self) -> Result<EnvElement> {
        let mut acc = self.env.zero();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') if !first => false,
                Some(b'-') => true,
                _ if first => {
                    acc = self.product()?;
                    first = false;
                    continue;
                }
                _ => break,
            };
            self.pos += 1;
            let t = self.product()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
            first = false;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<EnvElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.env.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<EnvElement> {
        let (p, env) = (self.env.p(), self.env);
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(env.poly(&CPoly::constant(p, r)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                let e = self.exponent()?;
                Ok(env.pow(&inner, e))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii identifier");
                let base = if let Some(i) = env.names().iter().position(|n| n == word) {
                    env.gen(i)
                } else if let Some(i) = word.strip_prefix('x').and_then(|r| r.parse::<usize>().ok()) {
                    if i == 0 || i > p {
                        return Err(perr(1, start + 1, format!("variable {word} outside x1..x{p}")));
                    }
                    env.poly(&CPoly::var(p, i - 1))
                } else {
                    return Err(perr(1, start + 1, format!("unknown symbol '{word}'")));
                };
                let e = self.exponent()?;
                Ok(env.pow(&base, e))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests;
