use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::Coeff;
use crate::error::{Error, Result};

/// One-variable power series known through degree `order`.
///
/// Exactly `order + 1` coefficients are stored. Degrees above `order` are
/// unknown, not zero: every binary operation keeps the smaller order of its
/// operands.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    var: String,
    order: usize,
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    /// Builds a series from leading coefficients; missing slots are zero and
    /// coefficients past `order` are discarded.
    pub fn new(var: &str, order: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, C::zero());
        Series {
            var: var.to_string(),
            order,
            coeffs,
        }
    }

    pub fn zero(var: &str, order: usize) -> Self {
        Series::new(var, order, Vec::new())
    }

    pub fn one(var: &str, order: usize) -> Self {
        Series::new(var, order, vec![C::one()])
    }

    /// The series `t`.
    pub fn identity(var: &str, order: usize) -> Self {
        Series::new(var, order, vec![C::zero(), C::one()])
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `t^k`. Panics above the truncation order, where the
    /// coefficient is unknown.
    pub fn coeff(&self, k: usize) -> &C {
        assert!(
            k <= self.order,
            "coefficient of {}^{k} is unknown: series known through degree {}",
            self.var,
            self.order
        );
        &self.coeffs[k]
    }

    pub fn get(&self, k: usize) -> Option<&C> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lowers the truncation order. Raising it is not possible.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order, "cannot raise truncation order");
        Series::new(&self.var, order, self.coeffs[..=order].to_vec())
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            var: self.var.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.clone() * c.clone())
    }

    /// Truncated product keeping degrees `<= order`.
    fn mul_to(&self, other: &Self, order: usize) -> Self {
        let mut out = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                let prev = std::mem::replace(&mut out[i + j], C::zero());
                out[i + j] = prev + a.clone() * b.clone();
            }
        }
        Series {
            var: self.var.clone(),
            order,
            coeffs: out,
        }
    }

    /// Multiplicative inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0] != C::one() {
            return Err(Error::NonUnitConstant);
        }
        let mut inv: Vec<C> = Vec::with_capacity(self.order + 1);
        inv.push(C::one());
        for k in 1..=self.order {
            let mut acc = C::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !inv[k - j].is_zero() {
                    acc = acc + self.coeffs[j].clone() * inv[k - j].clone();
                }
            }
            inv.push(-acc);
        }
        Ok(Series::new(&self.var, self.order, inv))
    }

    /// `self(inner(t))`; `inner` must have zero constant term. The result is
    /// known through `min(self.order, inner.order)` and uses `inner`'s variable.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncate(order);
        // Horner: o_T; then acc * inner + o_k. Only o_0..o_order matter.
        let mut acc = Series::new(&inner.var, order, vec![self.coeffs[order].clone()]);
        for k in (0..order).rev() {
            acc = acc.mul_to(&inner, order);
            let c0 = std::mem::replace(&mut acc.coeffs[0], C::zero());
            acc.coeffs[0] = c0 + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Compositional inverse of `t + O(t^2)`.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if self.order >= 1 && self.coeffs[1] != C::one() {
            return Err(Error::LeadingCoefficientNotOne);
        }
        let order = self.order;
        let mut rev = Series::identity(&self.var, order);
        // self(rev) = t + e_k t^k + ...; subtracting e_k fixes degree k
        // because the linear coefficient of self is 1.
        for k in 2..=order {
            let comp = self.compose(&rev)?;
            let err = comp.coeffs[k].clone();
            if !err.is_zero() {
                rev.coeffs[k] = rev.coeffs[k].clone() - err;
            }
        }
        Ok(rev)
    }

    /// `t -> t^k`, keeping the current truncation order.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1, "power must be positive");
        let mut out = vec![C::zero(); self.order + 1];
        for (m, c) in self.coeffs.iter().enumerate() {
            if m * k > self.order {
                break;
            }
            out[m * k] = c.clone();
        }
        Series::new(&self.var, self.order, out)
    }

    /// `t -> a t`.
    pub fn scale_var(&self, a: &C) -> Self {
        let mut pw = C::one();
        let mut out = Vec::with_capacity(self.order + 1);
        for c in &self.coeffs {
            out.push(c.clone() * pw.clone());
            pw = pw * a.clone();
        }
        Series::new(&self.var, self.order, out)
    }

    /// True when both series agree through the smaller of their orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.order.min(other.order);
        self.coeffs[..=n] == other.coeffs[..=n]
    }
}

impl<C: Coeff> Add<&Series<C>> for &Series<C> {
    type Output = Series<C>;
    fn add(self, rhs: &Series<C>) -> Series<C> {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
            .collect();
        Series::new(&self.var, order, coeffs)
    }
}

impl<C: Coeff> Sub<&Series<C>> for &Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: &Series<C>) -> Series<C> {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
            .collect();
        Series::new(&self.var, order, coeffs)
    }
}

impl<C: Coeff> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Coeff> Mul<&Series<C>> for &Series<C> {
    type Output = Series<C>;
    fn mul(self, rhs: &Series<C>) -> Series<C> {
        self.mul_to(rhs, self.order.min(rhs.order))
    }
}
