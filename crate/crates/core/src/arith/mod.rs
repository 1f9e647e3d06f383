//! Exact scalars, multi-indices, commutative polynomials and truncated
//! power series in the formal parameter `h`.

mod mono;
mod poly;
mod series;

pub use mono::{monos_up_to, Mono};
pub use poly::CPoly;
pub use series::{hseries_invert, hseries_mul, laurent_normalize, Coeff, HLaurent, HSeries};

use num_bigint::BigInt;
use num_traits::One;

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `p/q` or `p`, the form used throughout reports and spec files.
pub fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
