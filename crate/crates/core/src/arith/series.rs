use std::fmt;

use num_traits::Zero;

use super::{CPoly, Rational};
use crate::error::{Error, Result};

/// Additive coefficient types that series can carry.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale_ref(&self, r: &Rational) -> Self;

    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale_ref(&self, r: &Rational) -> Self {
        self * r
    }
}

impl Coeff for CPoly {
    fn zero_like(&self) -> Self {
        CPoly::zero(self.nvars())
    }
    fn is_zero(&self) -> bool {
        CPoly::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale_ref(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}

/// Truncated power series t₀ + t₁h + … + t_N h^N.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HSeries<T> {
    c: Vec<T>,
}

impl<T: Coeff> HSeries<T> {
    pub fn from_coeffs(c: Vec<T>) -> Self {
        assert!(!c.is_empty(), "a series needs at least the order-0 coefficient");
        HSeries { c }
    }

    pub fn zero(n: usize, template: &T) -> Self {
        HSeries { c: vec![template.zero_like(); n + 1] }
    }

    pub fn constant(n: usize, t: T) -> Self {
        let z = t.zero_like();
        let mut c = vec![z; n + 1];
        c[0] = t;
        HSeries { c }
    }

    /// t·h^k (zero when k > N).
    pub fn monomial(n: usize, k: usize, t: T) -> Self {
        let mut s = Self::zero(n, &t);
        if k <= n {
            s.c[k] = t;
        }
        s
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.c[k]
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut T {
        &mut self.c[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|t| t.is_zero())
    }

    /// Lowest order with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|t| !t.is_zero())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::TruncationMismatch(self.order(), o.order()));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(HSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add_ref(b)).collect() })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(HSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub_ref(b)).collect() })
    }

    /// Sum; panics on mismatched truncation (an engine bug, never user input).
    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("truncation mismatch")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("truncation mismatch")
    }

    pub fn add_assign(&mut self, o: &Self) {
        assert_eq!(self.order(), o.order(), "truncation mismatch");
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a = a.add_ref(b);
        }
    }

    pub fn neg(&self) -> Self {
        HSeries { c: self.c.iter().map(|a| a.neg_ref()).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        HSeries { c: self.c.iter().map(|a| a.scale_ref(r)).collect() }
    }

    /// Multiply by h^k, discarding orders beyond N.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let z = self.c[0].zero_like();
        let mut c = vec![z; n + 1];
        for i in 0..=n {
            if i + k <= n {
                c[i + k] = self.c[i].clone();
            }
        }
        HSeries { c }
    }

    /// Divide by h^k; the bottom k coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v < k {
                return Err(Error::NonIntegral { order: v as i64 - k as i64, at: String::new() });
            }
        }
        let n = self.order();
        let z = self.c[0].zero_like();
        let mut c = vec![z; n + 1];
        for i in k..=n {
            c[i - k] = self.c[i].clone();
        }
        // orders above N - k are unknown after division; they are left zero and
        // callers that care must work with a lowered precision.
        Ok(HSeries { c })
    }

    /// Keep orders ≤ n.
    pub fn truncate(&self, n: usize) -> Self {
        assert!(n <= self.order());
        HSeries { c: self.c[..=n].to_vec() }
    }

    /// Extend with zeros up to order n (only meaningful for exact finite series).
    pub fn pad(&self, n: usize) -> Self {
        let mut c = self.c.clone();
        let z = c[0].zero_like();
        while c.len() < n + 1 {
            c.push(z.clone());
        }
        c.truncate(n + 1);
        HSeries { c }
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> HSeries<U> {
        HSeries { c: self.c.iter().map(f).collect() }
    }

    /// Cauchy product under a bilinear coefficient product.
    pub fn mul_with<U: Coeff, V: Coeff>(
        &self,
        o: &HSeries<U>,
        mul: impl Fn(&T, &U) -> V,
    ) -> Result<HSeries<V>> {
        if self.order() != o.order() {
            return Err(Error::TruncationMismatch(self.order(), o.order()));
        }
        let n = self.order();
        let mut out: Vec<Option<V>> = vec![None; n + 1];
        for i in 0..=n {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if o.c[j].is_zero() {
                    continue;
                }
                let p = mul(&self.c[i], &o.c[j]);
                out[i + j] = Some(match out[i + j].take() {
                    None => p,
                    Some(acc) => acc.add_ref(&p),
                });
            }
        }
        let template = out.iter().flatten().next().cloned();
        let template = match template {
            Some(t) => t.zero_like(),
            None => mul(&self.c[0], &o.c[0]).zero_like(),
        };
        Ok(HSeries { c: out.into_iter().map(|v| v.unwrap_or_else(|| template.clone())).collect() })
    }
}

impl HSeries<CPoly> {
    pub fn poly(n: usize, p: CPoly) -> Self {
        HSeries::constant(n, p)
    }

    /// Commutative product of base-ring series.
    pub fn mul_poly(&self, o: &Self) -> Self {
        self.mul_with(o, |a, b| a * b).expect("truncation mismatch")
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for HSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, t) in self.c.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", t)?,
                1 => write!(f, "h*({})", t)?,
                _ => write!(f, "h^{}*({})", k, t)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.order() + 1)
    }
}

impl<T: Coeff> fmt::Debug for HSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.c.iter()).finish()
    }
}

/// Cauchy product Σ_{i+j=n} mul(aᵢ, bⱼ) for n ≤ N.
pub fn hseries_mul<T: Coeff>(a: &HSeries<T>, b: &HSeries<T>, mul: impl Fn(&T, &T) -> T) -> Result<HSeries<T>> {
    a.mul_with(b, mul)
}

/// Two-sided inverse given an inverse of the leading coefficient.
pub fn hseries_invert<T: Coeff>(
    a: &HSeries<T>,
    inv0: &T,
    mul: impl Fn(&T, &T) -> T,
    is_one: impl Fn(&T) -> bool,
) -> Result<HSeries<T>> {
    if !is_one(&mul(&a.c[0], inv0)) || !is_one(&mul(inv0, &a.c[0])) {
        return Err(Error::NotAUnit);
    }
    let n = a.order();
    let mut b: Vec<T> = vec![inv0.clone()];
    for k in 1..=n {
        // a₀ b_k = −Σ_{i≥1} a_i b_{k−i}
        let mut acc = inv0.zero_like();
        for i in 1..=k {
            acc = acc.add_ref(&mul(&a.c[i], &b[k - i]));
        }
        b.push(mul(inv0, &acc).neg_ref());
    }
    Ok(HSeries { c: b })
}

/// Laurent series Σ_{k=val}^{prec-1} c_k h^k; orders ≥ prec are unknown.
#[derive(Clone, PartialEq, Debug)]
pub struct HLaurent<T> {
    val: i64,
    prec: i64,
    c: Vec<T>,
}

impl<T: Coeff> HLaurent<T> {
    /// h^shift · s.
    pub fn from_series(s: &HSeries<T>, shift: i64) -> Self {
        HLaurent { val: shift, prec: shift + s.c.len() as i64, c: s.c.clone() }
    }

    pub fn valuation(&self) -> Option<i64> {
        self.c.iter().position(|t| !t.is_zero()).map(|p| self.val + p as i64)
    }

    /// First order that is not known.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn coeff(&self, k: i64) -> Option<&T> {
        if k < self.val || k >= self.prec {
            return None;
        }
        self.c.get((k - self.val) as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|t| t.is_zero())
    }

    pub fn is_normalized(&self) -> bool {
        self.c.first().map(|t| !t.is_zero()).unwrap_or(self.val == self.prec)
    }

    pub fn shift(&self, k: i64) -> Self {
        HLaurent { val: self.val + k, prec: self.prec + k, c: self.c.clone() }
    }

    /// Non-negative part as an ordinary series truncated at the known precision.
    pub fn to_series(&self, template: &T) -> Result<HSeries<T>> {
        let norm = laurent_normalize(self, true)?;
        if norm.prec <= 0 {
            return Err(Error::TruncationInsufficient(format!(
                "no order ≥ 0 is known (precision {})",
                norm.prec
            )));
        }
        let mut c = vec![template.zero_like(); norm.prec as usize];
        for (i, t) in norm.c.iter().enumerate() {
            c[(norm.val + i as i64) as usize] = t.clone();
        }
        Ok(HSeries { c })
    }
}

/// Strip leading zeros; with `demand_integral`, a negative valuation is an error.
pub fn laurent_normalize<T: Coeff>(a: &HLaurent<T>, demand_integral: bool) -> Result<HLaurent<T>> {
    let skip = a.c.iter().take_while(|t| t.is_zero()).count();
    let out = HLaurent { val: a.val + skip as i64, prec: a.prec, c: a.c[skip..].to_vec() };
    if demand_integral && !out.c.is_empty() && out.val < 0 {
        return Err(Error::NonIntegral { order: out.val, at: String::new() });
    }
    Ok(out)
}



impl<T: Coeff> HLaurent<T> {
    /// Sum, known up to the smaller precision.
    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let val = self.val.min(o.val).min(prec);
        let Some(t) = self.c.first().or(o.c.first()) else {
            return HLaurent { val: prec, prec, c: Vec::new() };
        };
        let c = (val..prec)
            .map(|k| match (self.coeff(k), o.coeff(k)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => t.zero_like(),
            })
            .collect();
        HLaurent { val, prec, c }
    }

    pub fn neg(&self) -> Self {
        HLaurent { val: self.val, prec: self.prec, c: self.c.iter().map(|t| t.neg_ref()).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        HLaurent { val: self.val, prec: self.prec, c: self.c.iter().map(|t| t.scale_ref(r)).collect() }
    }
}

impl HLaurent<Rational> {
    pub fn mul(&self, o: &Self) -> Self {
        let val = self.val + o.val;
        let prec = (self.val + o.prec).min(o.val + self.prec).max(val);
        let c = (val..prec)
            .map(|k| {
                let mut acc = Rational::zero();
                for (i, a) in self.c.iter().enumerate() {
                    if let Some(b) = o.coeff(k - self.val - i as i64) {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect();
        HLaurent { val, prec, c }
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for HLaurent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, t) in self.c.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match self.val + i as i64 {
                0 => write!(f, "({})", t)?,
                1 => write!(f, "h*({})", t)?,
                k => write!(f, "h^{}*({})", k, t)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use num_traits::One;

    fn ser(v: &[i64]) -> HSeries<Rational> {
        HSeries::from_coeffs(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let p = hseries_mul(&ser(&[1, 1, 0]), &ser(&[1, -1, 0]), |a, b| a * b).unwrap();
        assert_eq!(p, ser(&[1, 0, -1]));
    }

    #[test]
    fn mismatched_orders_rejected() {
        assert_eq!(
            hseries_mul(&ser(&[1, 1]), &ser(&[1, 1, 1]), |a, b| a * b),
            Err(Error::TruncationMismatch(1, 2))
        );
    }

    #[test]
    fn geometric_inverse() {
        let inv = hseries_invert(&ser(&[1, -1, 0]), &int(1), |a, b| a * b, |a| a.is_one()).unwrap();
        assert_eq!(inv, ser(&[1, 1, 1]));
        assert_eq!(
            hseries_invert(&ser(&[0, 1]), &int(1), |a, b| a * b, |a| a.is_one()),
            Err(Error::NotAUnit)
        );
    }

    #[test]
    fn laurent_integrality() {
        let u = ser(&[0, 3, 1]);
        let l = HLaurent::from_series(&u, -1);
        let n = laurent_normalize(&l, true).unwrap();
        assert_eq!(n.valuation(), Some(0));
        assert_eq!(laurent_normalize(&n, true).unwrap(), n);
        let bad = HLaurent::from_series(&ser(&[2, 0]), -1);
        assert_eq!(laurent_normalize(&bad, true), Err(Error::NonIntegral { order: -1, at: String::new() }));
        assert_eq!(laurent_normalize(&bad, false).unwrap().valuation(), Some(-1));
    }
}
