//! Exact arithmetic substrate: big integers and rationals, sparse multivariate
//! polynomials, and truncated power series in one and two variables.
//!
//! Every coefficient is exact. Truncation orders travel with the values that
//! carry them; combining two series always keeps the smaller order.

mod bivariate;
mod json;
mod poly;
mod series;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Zero};

pub use bivariate::BiSeries;
pub use json::SeriesJson;
pub(crate) use poly::pow_mod;
pub use poly::{Poly, QPoly, ZPoly};
pub use series::Series;
pub use text::{parse_poly, zpoly};

/// Exact commutative ring element usable as a polynomial or series coefficient.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_bigint(n: BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }
}

impl Coeff for BigInt {
    fn from_bigint(n: BigInt) -> Self {
        n
    }
}

impl Coeff for BigRational {
    fn from_bigint(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }
}

/// Canonical residue of `a` in `[0, n)`.
pub fn residue(a: &BigInt, n: &BigInt) -> BigInt {
    let r = a % n;
    if r < BigInt::zero() {
        r + n
    } else {
        r
    }
}

/// Binomial coefficient C(n, k), zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Multinomial (a_1 + ... + a_r)! / (a_1! ... a_r!).
pub fn multinomial(parts: &[u64]) -> BigInt {
    let total: u64 = parts.iter().sum();
    parts.iter().fold(factorial(total), |acc, &p| acc / factorial(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_canonical() {
        let five = BigInt::from(5);
        assert_eq!(residue(&BigInt::from(-1), &five), BigInt::from(4));
        assert_eq!(residue(&BigInt::from(24), &five), BigInt::from(4));
        assert_eq!(residue(&BigInt::from(-75000), &BigInt::from(2)), BigInt::zero());
    }

    #[test]
    fn binomials_and_multinomials() {
        assert_eq!(binomial(8, 3), BigInt::from(56));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(24, 12), BigInt::from(2704156));
        assert_eq!(multinomial(&[1, 1, 1]), BigInt::from(6));
        assert_eq!(multinomial(&[2, 2, 2]), BigInt::from(90));
        assert_eq!(multinomial(&[1; 5]), BigInt::from(120));
    }
}
