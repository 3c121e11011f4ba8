use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use super::{Coeff, Series};
use crate::error::{Error, Result};

/// Power series in two variables, known through total degree `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<C> {
    vars: [String; 2],
    degree: usize,
    terms: BTreeMap<(usize, usize), C>,
}

impl<C: Coeff> BiSeries<C> {
    pub fn zero(vars: [&str; 2], degree: usize) -> Self {
        BiSeries {
            vars: [vars[0].to_string(), vars[1].to_string()],
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(vars: [&str; 2], degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), C)>,
    {
        let mut s = BiSeries::zero(vars, degree);
        for (k, c) in terms {
            s.add_at(k, c);
        }
        s
    }

    /// Embeds a one-variable series as a series in `vars[slot]`.
    pub fn from_univariate(s: &Series<C>, vars: [&str; 2], slot: usize, degree: usize) -> Self {
        let degree = degree.min(s.order());
        let mut out = BiSeries::zero(vars, degree);
        for (k, c) in s.coeffs().iter().enumerate().take(degree + 1) {
            let key = if slot == 0 { (k, 0) } else { (0, k) };
            out.add_at(key, c.clone());
        }
        out
    }

    fn add_at(&mut self, key: (usize, usize), c: C) {
        if key.0 + key.1 > self.degree || c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn vars(&self) -> [&str; 2] {
        [&self.vars[0], &self.vars[1]]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, i: usize, j: usize) -> C {
        assert!(
            i + j <= self.degree,
            "coefficient beyond total degree {}",
            self.degree
        );
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &C)> {
        self.terms.iter()
    }

    /// Exchanges the roles of the two variables.
    pub fn swapped(&self) -> Self {
        BiSeries {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BiSeries<D> {
        let mut out = BiSeries::zero(self.vars(), self.degree);
        for (&k, c) in &self.terms {
            out.add_at(k, f(c));
        }
        out
    }

    /// Restriction to the second variable set to zero, as a series in the first.
    pub fn restrict_first(&self) -> Series<C> {
        let coeffs = (0..=self.degree).map(|i| self.coeff(i, 0)).collect();
        Series::new(&self.vars[0], self.degree, coeffs)
    }

    /// `outer(inner(t1, t2))` for `inner` without constant term.
    pub fn compose_into(outer: &Series<C>, inner: &Self) -> Result<Self> {
        if !inner.coeff(0, 0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let degree = inner.degree.min(outer.order());
        let vars = inner.vars();
        let mut acc = BiSeries::zero(vars, degree);
        acc.add_at((0, 0), outer.coeffs()[degree].clone());
        for k in (0..degree).rev() {
            acc = acc.mul_to(inner, degree);
            acc.add_at((0, 0), outer.coeffs()[k].clone());
        }
        Ok(acc)
    }

    fn mul_to(&self, other: &Self, degree: usize) -> Self {
        let mut out = BiSeries::zero(self.vars(), degree);
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                if i1 + j1 + i2 + j2 <= degree {
                    out.add_at((i1 + i2, j1 + j2), a.clone() * b.clone());
                }
            }
        }
        out
    }
}

impl<C: Coeff> Add<&BiSeries<C>> for &BiSeries<C> {
    type Output = BiSeries<C>;
    fn add(self, rhs: &BiSeries<C>) -> BiSeries<C> {
        let degree = self.degree.min(rhs.degree);
        let mut out = BiSeries::zero(self.vars(), degree);
        for (&k, c) in self.terms.iter().chain(rhs.terms.iter()) {
            out.add_at(k, c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul<&BiSeries<C>> for &BiSeries<C> {
    type Output = BiSeries<C>;
    fn mul(self, rhs: &BiSeries<C>) -> BiSeries<C> {
        self.mul_to(rhs, self.degree.min(rhs.degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn no_key_beyond_degree() {
        let s = BiSeries::from_terms(["a", "b"], 2, vec![((1, 1), z(1)), ((2, 1), z(5))]);
        assert_eq!(s.terms().count(), 1);
        let sq = &s * &s;
        assert_eq!(sq.terms().count(), 0);
    }

    #[test]
    fn compose_log_of_sum() {
        // (t1 + t2)^2 through degree 3
        let sq = Series::new("u", 3, vec![z(0), z(0), z(1)]);
        let sum = BiSeries::from_terms(["a", "b"], 3, vec![((1, 0), z(1)), ((0, 1), z(1))]);
        let out = BiSeries::compose_into(&sq, &sum).unwrap();
        let want = BiSeries::from_terms(
            ["a", "b"],
            3,
            vec![((2, 0), z(1)), ((1, 1), z(2)), ((0, 2), z(1))],
        );
        assert_eq!(out, want);
    }
}
