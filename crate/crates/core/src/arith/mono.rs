use smallvec::SmallVec;
use std::fmt;

use super::factorial;
use num_bigint::BigInt;

/// Exponent vector; used both for base monomials x^γ and PBW words e^α.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(pub SmallVec<[u32; 4]>);

impl Mono {
    pub fn zero(n: usize) -> Self {
        Mono(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[i] = 1;
        m
    }

    pub fn from_slice(s: &[u32]) -> Self {
        Mono(SmallVec::from_slice(s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, o: &Mono) -> Mono {
        debug_assert_eq!(self.len(), o.len());
        Mono(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn inc(&self, i: usize) -> Mono {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    pub fn dec(&self, i: usize) -> Option<Mono> {
        if self.0[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[i] -= 1;
        Some(m)
    }

    pub fn last_nonzero(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e != 0)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    /// α! = Π αᵢ!
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&e| factorial(e)).product()
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn sub(&self, o: &Mono) -> Option<Mono> {
        if !o.divides(self) {
            return None;
        }
        Some(Mono(self.0.iter().zip(o.0.iter()).map(|(a, b)| a - b).collect()))
    }

    /// Render as a word in the given symbols, e.g. `d1^2*d2`; empty for the unit.
    pub fn word(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// All exponent vectors in `n` slots of total degree ≤ d, graded then lexicographic.
pub fn monos_up_to(n: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut cur = vec![0u32; n];
        fill(&mut cur, 0, deg, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Mono>) {
    let n = cur.len();
    if n == 0 {
        if left == 0 {
            out.push(Mono::zero(0));
        }
        return;
    }
    if i == n - 1 {
        cur[i] = left;
        out.push(Mono::from_slice(cur));
        cur[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(cur, i + 1, left - e, out);
    }
    cur[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_graded() {
        let ms = monos_up_to(2, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0], Mono::zero(2));
        assert_eq!(ms[1], Mono::from_slice(&[1, 0]));
        assert_eq!(ms[5], Mono::from_slice(&[0, 2]));
        assert_eq!(monos_up_to(0, 3).len(), 1);
    }

    #[test]
    fn factorial_of_multi_index() {
        assert_eq!(Mono::from_slice(&[2, 3]).factorial(), BigInt::from(12));
    }
}
