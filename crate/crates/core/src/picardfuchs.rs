//! Differential operators `L = sum_k q_k(x) theta^k` with `theta = x d/dx`
//! and the congruences tying them to logarithm coefficients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::artinmazur::{FamilyId, PARAM};
use crate::error::{Error, Result};
use crate::fgl::Logarithm;
use crate::ring::{binomial, multinomial, Series, ZPoly};

/// Picard-Fuchs operator of the quintic pencil.
pub const QUINTIC_OPERATOR: &str = "theta^4 - 3125*x^5*(theta+1)*(theta+2)*(theta+3)*(theta+4)";

/// Operator in normal form: `coeffs[k]` multiplies `theta^k` from the left.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaOperator {
    coeffs: Vec<ZPoly>,
}

impl ThetaOperator {
    /// Trailing zero coefficients are dropped; the zero operator has no
    /// coefficients.
    pub fn new(mut coeffs: Vec<ZPoly>) -> Result<Self> {
        for q in &coeffs {
            if q.used_vars().iter().any(|v| v != PARAM) {
                return Err(Error::VariableMismatch(format!(
                    "operator coefficient {q} is not a polynomial in {PARAM}"
                )));
            }
        }
        while coeffs.last().is_some_and(|q| q.is_zero()) {
            coeffs.pop();
        }
        Ok(ThetaOperator { coeffs })
    }

    pub fn zero() -> Self {
        ThetaOperator { coeffs: Vec::new() }
    }

    pub fn constant(q: ZPoly) -> Self {
        ThetaOperator::new(vec![q]).expect("constant in x")
    }

    pub fn theta() -> Self {
        ThetaOperator {
            coeffs: vec![ZPoly::zero(), ZPoly::one()],
        }
    }

    /// Highest power of theta; 0 for the zero operator.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[ZPoly] {
        &self.coeffs
    }

    /// `q_k`, zero beyond the order.
    pub fn coeff(&self, k: usize) -> ZPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(ZPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        ThetaOperator::new(coeffs).expect("coefficients stay in x")
    }

    fn neg(&self) -> Self {
        ThetaOperator {
            coeffs: self.coeffs.iter().map(|q| -q).collect(),
        }
    }

    /// Composition `self * other`, normalised with `theta x^n = x^n (theta + n)`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = vec![ZPoly::zero(); self.order() + other.order() + 1];
        for (k, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (j, r) in other.coeffs.iter().enumerate() {
                for (e, c) in r.terms() {
                    let n = BigInt::from(e.first().copied().unwrap_or(0));
                    let xn = ZPoly::monomial(PARAM, e.first().copied().unwrap_or(0), c.clone());
                    let base = q * &xn;
                    // (theta + n)^k = sum_i C(k, i) n^(k-i) theta^i
                    for i in 0..=k {
                        let s = binomial(k as u64, i as u64) * num_traits::pow(n.clone(), k - i);
                        if !s.is_zero() {
                            out[i + j] = &out[i + j] + &base.scale(&s);
                        }
                    }
                }
            }
        }
        ThetaOperator::new(out).expect("coefficients stay in x")
    }

    /// `theta -> theta + n`: the operator `M` with `L x^n = x^n M`.
    pub fn shifted(&self, n: u32) -> Self {
        let xn = ThetaOperator::constant(ZPoly::monomial(PARAM, n, BigInt::one()));
        let mut out = vec![ZPoly::zero(); self.coeffs.len()];
        // L x^n = sum_k q_k x^n (theta + n)^k; divide the x^n back out
        for (i, q) in self.compose(&xn).coeffs.iter().enumerate() {
            let terms = q
                .terms()
                .map(|(e, c)| (vec![e.first().copied().unwrap_or(0) - n], c.clone()));
            out[i] = ZPoly::from_terms(vec![PARAM.to_string()], terms).expect("shape");
        }
        ThetaOperator::new(out).expect("coefficients stay in x")
    }

    /// `sum_k q_k n^k`, the factor picked up by `x^n`.
    fn eigen(&self, n: u32) -> ZPoly {
        let nb = BigInt::from(n);
        let mut pw = BigInt::one();
        let mut acc = ZPoly::zero();
        for q in &self.coeffs {
            acc = acc + q.scale(&pw);
            pw *= &nb;
        }
        acc
    }

    /// `L f` for a polynomial `f` in `x`.
    pub fn apply_poly(&self, f: &ZPoly) -> Result<ZPoly> {
        let f = f.with_vars(&[PARAM.to_string()])?;
        let mut acc = ZPoly::zero();
        for (e, c) in f.terms() {
            let n = e.first().copied().unwrap_or(0);
            acc = acc + self.eigen(n) * ZPoly::monomial(PARAM, n, c.clone());
        }
        Ok(acc)
    }

    /// `L f` for a series in `x`, through the same order as `f`.
    pub fn apply_series(&self, f: &Series<BigInt>) -> Series<BigInt> {
        let order = f.order();
        let mut out = vec![BigInt::zero(); order + 1];
        for (n, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (e, q) in self.eigen(n as u32).terms() {
                let d = e.first().copied().unwrap_or(0) as usize;
                if n + d <= order {
                    out[n + d] += q * c;
                }
            }
        }
        Series::new(f.var(), order, out)
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{q}")?,
                1 if q.is_one() => f.write_str("theta")?,
                1 => write!(f, "({q})*theta")?,
                _ if q.is_one() => write!(f, "theta^{k}")?,
                _ => write!(f, "({q})*theta^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for ThetaOperator {
    type Err = Error;

    /// Sums of products of integers, `x`, `theta` and parenthesised
    /// subexpressions, with `^` for non-negative integer powers. Products are
    /// taken in the order written.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = OpParser { src: s, pos: 0 };
        let op = p.expr()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(op)
    }
}

struct OpParser<'a> {
    src: &'a str,
    pos: usize,
}

impl OpParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ThetaOperator> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ThetaOperator> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.compose(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<ThetaOperator> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        let e: u32 = digits.parse().map_err(|_| self.err("expected exponent"))?;
        let mut acc = ThetaOperator::constant(ZPoly::one());
        for _ in 0..e {
            acc = acc.compose(&base);
        }
        Ok(acc)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<ThetaOperator> {
        self.skip_ws();
        if self.eat('(') {
            let inner = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(inner);
        }
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if !digits.is_empty() {
            let n: BigInt = digits.parse().expect("digits");
            return Ok(ThetaOperator::constant(ZPoly::constant(n)));
        }
        let ident = self.take_while(|c| c.is_alphanumeric() || c == '_');
        match ident {
            "theta" | "θ" => Ok(ThetaOperator::theta()),
            PARAM => Ok(ThetaOperator::constant(ZPoly::var(PARAM))),
            "" => Err(self.err("expected a term")),
            other => {
                let msg = format!("unknown symbol '{other}'");
                self.pos = start;
                Err(self.err(&msg))
            }
        }
    }
}

pub fn quintic_operator() -> ThetaOperator {
    QUINTIC_OPERATOR.parse().expect("bundled operator parses")
}

/// The operator shipped for a family, if any.
pub fn bundled_operator(id: FamilyId) -> Option<ThetaOperator> {
    (id == FamilyId::QuinticCy3).then(quintic_operator)
}

/// `f(x) = sum_j (5j)!/(j!)^5 x^(5j)` through `x^order`.
pub fn quintic_period(order: usize) -> Series<BigInt> {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for j in 0..=order / 5 {
        coeffs[5 * j] = multinomial(&[j as u64; 5]);
    }
    Series::new(PARAM, order, coeffs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PfRow {
    pub k: usize,
    pub passed: bool,
    /// `L a_k` with coefficients reduced into `[0, k)`.
    pub residual: ZPoly,
}

/// For each `k <= k_max`, whether `L a_k = 0 mod k Z[x]`.
pub fn pf_congruence_check(op: &ThetaOperator, log: &Logarithm, k_max: usize) -> Result<Vec<PfRow>> {
    if k_max > log.truncation() {
        return Err(Error::InsufficientTruncation {
            needed: k_max,
            available: log.truncation(),
        });
    }
    (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let image = op.apply_poly(log.coeff(k)?)?;
            let residual = image.reduce_mod(&BigInt::from(k));
            Ok(PfRow {
                k,
                passed: residual.is_zero(),
                residual,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionCheck {
    pub order: usize,
    pub passed: bool,
    /// Lowest degree with a nonzero coefficient in `L f`, and that coefficient.
    #[serde(serialize_with = "failure_as_strings")]
    pub first_failure: Option<(usize, BigInt)>,
}

fn failure_as_strings<S: serde::Serializer>(
    v: &Option<(usize, BigInt)>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|(n, c)| (*n, c.to_string())).serialize(s)
}

/// Whether `L f = 0` through `x^order`.
pub fn series_solution_check(op: &ThetaOperator, f: &Series<BigInt>, order: usize) -> Result<SolutionCheck> {
    if f.order() < order {
        return Err(Error::InsufficientTruncation {
            needed: order,
            available: f.order(),
        });
    }
    let image = op.apply_series(&f.truncate(order));
    let first_failure = image
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n, c.clone()));
    Ok(SolutionCheck {
        order,
        passed: first_failure.is_none(),
        first_failure,
    })
}
