//! Curves in a one-dimensional formal group, stored in log-coordinates.
//!
//! A curve `gamma(t)` is kept as `eta(t) = l(gamma(t))`. In these
//! coordinates the group sum is plain addition, `<a>` rescales `t`, `V_k`
//! substitutes `t^k`, and `F_k` (the sum over conjugates `gamma(zeta^i t^{1/k})`)
//! reduces to keeping every k-th coefficient multiplied by `k`. No roots of
//! unity are ever formed.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Logarithm, SERIES_VAR};
use crate::error::{Error, Result};
use crate::ring::{QPoly, Series, ZPoly};
use crate::witt::WittVector;

#[derive(Clone, Debug)]
pub struct Curve {
    eta: Series<QPoly>,
    log: Arc<Logarithm>,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.eta == other.eta
    }
}

impl Curve {
    /// Curve with log-coordinate series `eta` (zero constant term, order at
    /// most the logarithm's truncation).
    pub fn from_log_coords(log: &Arc<Logarithm>, eta: Series<QPoly>) -> Result<Self> {
        if !eta.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if eta.order() > log.truncation() {
            return Err(Error::InsufficientTruncation {
                needed: eta.order(),
                available: log.truncation(),
            });
        }
        Ok(Curve {
            eta: eta.with_var(SERIES_VAR),
            log: Arc::clone(log),
        })
    }

    /// Curve given in group coordinates, `eta = l(gamma)`.
    pub fn from_gamma(log: &Arc<Logarithm>, gamma: &Series<QPoly>) -> Result<Self> {
        if gamma.order() > log.truncation() {
            return Err(Error::InsufficientTruncation {
                needed: gamma.order(),
                available: log.truncation(),
            });
        }
        let eta = log.series(gamma.order())?.compose(gamma)?;
        Curve::from_log_coords(log, eta)
    }

    /// The coordinate curve `gamma(t) = t`, i.e. `eta = l`.
    pub fn canonical(log: &Arc<Logarithm>, order: usize) -> Result<Self> {
        Curve::from_log_coords(log, log.series(order)?)
    }

    pub fn zero(log: &Arc<Logarithm>, order: usize) -> Result<Self> {
        Curve::from_log_coords(log, Series::zero(SERIES_VAR, order))
    }

    pub fn order(&self) -> usize {
        self.eta.order()
    }

    pub fn log_coords(&self) -> &Series<QPoly> {
        &self.eta
    }

    pub fn logarithm(&self) -> &Arc<Logarithm> {
        &self.log
    }

    pub fn is_zero(&self) -> bool {
        self.eta.is_zero()
    }

    fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.log, &other.log) || *self.log == *other.log
    }

    fn with_eta(&self, eta: Series<QPoly>) -> Curve {
        Curve {
            eta,
            log: Arc::clone(&self.log),
        }
    }

    /// Group coordinates `gamma = l^{-1}(eta)`.
    pub fn gamma(&self) -> Result<Series<QPoly>> {
        self.log.inverse_series(self.order())?.compose(&self.eta)
    }

    /// Formal-group sum.
    pub fn add(&self, other: &Curve) -> Result<Curve> {
        if !self.same_ambient(other) {
            return Err(Error::AmbientMismatch);
        }
        if self.order() != other.order() {
            return Err(Error::LengthMismatch(self.order(), other.order()));
        }
        Ok(self.with_eta(&self.eta + &other.eta))
    }

    pub fn neg(&self) -> Curve {
        self.with_eta(-&self.eta)
    }

    /// `n`-fold formal-group multiple.
    pub fn times(&self, n: i64) -> Curve {
        self.with_eta(self.eta.scale(&QPoly::constant(BigInt::from(n).into())))
    }

    /// `<a> gamma(t) = gamma(a t)`.
    pub fn scale(&self, a: &ZPoly) -> Curve {
        self.with_eta(self.eta.scale_var(&a.to_rational()))
    }

    /// `V_k gamma(t) = gamma(t^k)`, same truncation order.
    pub fn verschiebung(&self, k: usize) -> Curve {
        self.with_eta(self.eta.substitute_power(k))
    }

    /// `F_k` with output order `order / k`.
    pub fn frobenius(&self, k: usize) -> Result<Curve> {
        if k == 0 {
            return Err(Error::InvalidArgument("Frobenius index must be positive".into()));
        }
        self.frobenius_to(k, self.order() / k)
    }

    /// `F_k` with explicit output order; needs `k * out_order <= order`.
    pub fn frobenius_to(&self, k: usize, out_order: usize) -> Result<Curve> {
        if k == 0 || out_order == 0 || k * out_order > self.order() {
            return Err(Error::InsufficientTruncation {
                needed: k.max(1) * out_order.max(1),
                available: self.order(),
            });
        }
        let kq = QPoly::constant(BigInt::from(k).into());
        let mut coeffs = vec![QPoly::zero()];
        for m in 1..=out_order {
            coeffs.push(self.eta.coeff(k * m) * &kq);
        }
        Ok(self.with_eta(Series::new(SERIES_VAR, out_order, coeffs)))
    }

    pub fn truncate(&self, order: usize) -> Curve {
        self.with_eta(self.eta.truncate(order))
    }
}

/// The 1x1 matrix of `F_k` on the coordinate curve: the linear coefficient of
/// `F_k gamma` for `gamma(t) = t`, which equals `a_k`.
pub fn frobenius_matrix_1d(log: &Arc<Logarithm>, k: usize) -> Result<ZPoly> {
    if k == 0 || k > log.truncation() {
        return Err(Error::OutOfRange {
            index: k,
            max: log.truncation(),
        });
    }
    let image = Curve::canonical(log, k)?.frobenius_to(k, 1)?;
    let linear = image.gamma()?.coeff(1).clone();
    linear
        .to_integral()
        .ok_or_else(|| Error::NonIntegralCoefficient(linear.to_string()))
}

/// Sends a curve of the multiplicative group to the Witt vector
/// `(1 - gamma(t))^{-1}` of length equal to the curve's order.
pub fn witt_cartier_bridge(curve: &Curve) -> Result<WittVector> {
    if let Some(m) = curve.logarithm().first_non_multiplicative() {
        return Err(Error::NotMultiplicative(m));
    }
    if curve.order() == 0 {
        return Err(Error::InvalidArgument("curve must have order at least 1".into()));
    }
    let gamma = curve.gamma()?;
    let one_minus = &Series::one(SERIES_VAR, gamma.order()) - &gamma;
    let series = one_minus.inverse()?;
    let mut coeffs = Vec::with_capacity(series.order() + 1);
    for c in series.coeffs() {
        coeffs.push(
            c.to_integral()
                .ok_or_else(|| Error::NonIntegralCoefficient(c.to_string()))?,
        );
    }
    WittVector::from_series(&Series::new(SERIES_VAR, series.order(), coeffs))
}
