//! One-dimensional formal group laws given by a logarithm
//! `l(t) = sum_m (a_m / m) t^m` with integral `a_m` and `a_1 = 1`.
//!
//! The law is `G(t1, t2) = l^{-1}(l(t1) + l(t2))`, computed over Q[params]
//! and then certified integral coefficient by coefficient.

mod curve;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{BiSeries, QPoly, Series, ZPoly};

pub use curve::{frobenius_matrix_1d, witt_cartier_bridge, Curve};

/// Variable name of logarithm and curve series.
pub const SERIES_VAR: &str = "t";

/// Parameter ring of a logarithm: Z or Z[vars].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRing {
    pub vars: Vec<String>,
}

impl fmt::Display for ParamRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            f.write_str("Z")
        } else {
            write!(f, "Z[{}]", self.vars.join(","))
        }
    }
}

/// Integral coefficient sequence `a_1..a_M` of a logarithm.
#[derive(Debug)]
pub struct Logarithm {
    coeffs: Vec<ZPoly>,
    inverse: OnceLock<Series<QPoly>>,
}

impl Clone for Logarithm {
    fn clone(&self) -> Self {
        Logarithm {
            coeffs: self.coeffs.clone(),
            inverse: self.inverse.clone(),
        }
    }
}

impl PartialEq for Logarithm {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Logarithm {
    /// `coeffs[m - 1] = a_m`; requires `a_1 = 1`.
    pub fn new(coeffs: Vec<ZPoly>) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::InvalidArgument("logarithm needs at least a_1".into())),
            Some(a1) if *a1 != ZPoly::one() => {
                Err(Error::InvalidArgument(format!("a_1 must be 1, got {a1}")))
            }
            Some(_) => Ok(Logarithm {
                coeffs,
                inverse: OnceLock::new(),
            }),
        }
    }

    /// `l(t) = t`, the additive law.
    pub fn additive(m_max: usize) -> Self {
        let mut c = vec![ZPoly::zero(); m_max.max(1)];
        c[0] = ZPoly::one();
        Logarithm::new(c).expect("a_1 = 1")
    }

    /// `a_m = 1` for all m: `l(t) = -log(1 - t)`, the multiplicative law.
    pub fn multiplicative(m_max: usize) -> Self {
        Logarithm::new(vec![ZPoly::one(); m_max.max(1)]).expect("a_1 = 1")
    }

    /// Truncation `M`: the number of known coefficients.
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ZPoly] {
        &self.coeffs
    }

    /// `a_m`, 1-based.
    pub fn coeff(&self, m: usize) -> Result<&ZPoly> {
        if m == 0 || m > self.coeffs.len() {
            return Err(Error::OutOfRange {
                index: m,
                max: self.coeffs.len(),
            });
        }
        Ok(&self.coeffs[m - 1])
    }

    pub fn ring(&self) -> ParamRing {
        let mut vars: Vec<String> = Vec::new();
        for c in &self.coeffs {
            for v in c.used_vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        ParamRing { vars }
    }

    /// True when every known coefficient equals 1.
    pub fn is_multiplicative(&self) -> bool {
        self.first_non_multiplicative().is_none()
    }

    pub(crate) fn first_non_multiplicative(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != ZPoly::one()).map(|i| i + 1)
    }

    /// Substitutes a value for a parameter in every coefficient.
    pub fn eval_param(&self, var: &str, value: &BigInt) -> Logarithm {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.eval_var(var, value).trim_vars())
            .collect();
        Logarithm::new(coeffs).expect("a_1 stays 1")
    }

    /// Keeps `a_1..a_m`.
    pub fn truncate(&self, m: usize) -> Result<Logarithm> {
        if m == 0 || m > self.truncation() {
            return Err(Error::InsufficientTruncation {
                needed: m,
                available: self.truncation(),
            });
        }
        Logarithm::new(self.coeffs[..m].to_vec())
    }

    /// `sum_{m <= order} (a_m / m) t^m`.
    pub fn series(&self, order: usize) -> Result<Series<QPoly>> {
        if order > self.truncation() {
            return Err(Error::InsufficientTruncation {
                needed: order,
                available: self.truncation(),
            });
        }
        let mut coeffs = vec![QPoly::zero()];
        for (i, a) in self.coeffs.iter().take(order).enumerate() {
            let inv = BigRational::new(BigInt::one(), BigInt::from(i + 1));
            coeffs.push(a.to_rational().scale(&inv));
        }
        Ok(Series::new(SERIES_VAR, order, coeffs))
    }

    /// Compositional inverse `l^{-1}` through degree `order`. The full
    /// truncation is computed once and cached; lower orders requested before
    /// that are computed directly.
    pub fn inverse_series(&self, order: usize) -> Result<Series<QPoly>> {
        if order > self.truncation() {
            return Err(Error::InsufficientTruncation {
                needed: order,
                available: self.truncation(),
            });
        }
        if let Some(full) = self.inverse.get() {
            return Ok(full.truncate(order));
        }
        let rev = self.series(order)?.reversion()?;
        if order == self.truncation() {
            let _ = self.inverse.set(rev.clone());
        }
        Ok(rev)
    }
}

#[derive(Serialize, Deserialize)]
struct LogarithmJson {
    ring: String,
    coeffs: Vec<ZPoly>,
}

impl Serialize for Logarithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LogarithmJson {
            ring: self.ring().to_string(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Logarithm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LogarithmJson::deserialize(d)?;
        let log = Logarithm::new(raw.coeffs).map_err(D::Error::custom)?;
        let ring = log.ring();
        let declared: Vec<&str> = raw
            .ring
            .strip_prefix("Z[")
            .and_then(|r| r.strip_suffix(']'))
            .map(|r| r.split(',').map(str::trim).collect())
            .unwrap_or_default();
        if raw.ring != "Z" && declared.is_empty() {
            return Err(D::Error::custom(format!("bad ring descriptor '{}'", raw.ring)));
        }
        if let Some(v) = ring.vars.iter().find(|v| !declared.contains(&v.as_str())) {
            return Err(D::Error::custom(format!(
                "coefficient uses '{v}' outside ring {}",
                raw.ring
            )));
        }
        Ok(log)
    }
}

/// `G(t1, t2)` through total degree `D`, with rational-polynomial entries.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    series: BiSeries<QPoly>,
    log: Logarithm,
}

/// Outcome of checking that a formal group law has no denominators.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralityReport {
    pub degree: usize,
    /// `(i, j, coefficient)` for every coefficient of `t1^i t2^j` with a
    /// non-integral rational coefficient.
    pub offending: Vec<(usize, usize, QPoly)>,
}

impl IntegralityReport {
    pub fn passed(&self) -> bool {
        self.offending.is_empty()
    }
}

impl FormalGroupLaw {
    pub fn from_logarithm(log: &Logarithm, degree: usize) -> Result<Self> {
        if degree > log.truncation() {
            return Err(Error::InsufficientTruncation {
                needed: degree,
                available: log.truncation(),
            });
        }
        let vars = ["t1", "t2"];
        let l = log.series(degree)?;
        let sum =
            &BiSeries::from_univariate(&l, vars, 0, degree) + &BiSeries::from_univariate(&l, vars, 1, degree);
        let inv = log.inverse_series(degree)?;
        let series = BiSeries::compose_into(&inv, &sum)?;
        Ok(FormalGroupLaw {
            series,
            log: log.clone(),
        })
    }

    pub fn degree(&self) -> usize {
        self.series.degree()
    }

    pub fn series(&self) -> &BiSeries<QPoly> {
        &self.series
    }

    pub fn logarithm(&self) -> &Logarithm {
        &self.log
    }

    pub fn coeff(&self, i: usize, j: usize) -> QPoly {
        self.series.coeff(i, j)
    }

    pub fn integrality_report(&self) -> IntegralityReport {
        let offending = self
            .series
            .terms()
            .filter(|(_, c)| !c.is_integral())
            .map(|(&(i, j), c)| (i, j, c.clone()))
            .collect();
        IntegralityReport {
            degree: self.degree(),
            offending,
        }
    }

    /// The law with integer-polynomial coefficients, if it is integral.
    pub fn to_integral(&self) -> Option<BiSeries<ZPoly>> {
        if !self.integrality_report().passed() {
            return None;
        }
        Some(
            self.series
                .map_coeffs(|c| c.to_integral().expect("checked integral")),
        )
    }

    /// `G(t, 0) = t` and `G(0, t) = t`.
    pub fn satisfies_identity(&self) -> bool {
        let t = Series::identity("t1", self.degree());
        self.series.restrict_first() == t && self.series.swapped().restrict_first() == t
    }

    pub fn is_symmetric(&self) -> bool {
        self.series == self.series.swapped()
    }

    /// The law as a polynomial in `t1, t2` over the parameter ring.
    pub fn as_poly(&self) -> QPoly {
        let (t1, t2) = (QPoly::var("t1"), QPoly::var("t2"));
        self.series.terms().fold(QPoly::zero(), |acc, (&(i, j), c)| {
            acc + c * &t1.pow(i as u32) * t2.pow(j as u32)
        })
    }

    /// `G(G(t1, t2), t3) = G(t1, G(t2, t3))` through the truncation degree.
    pub fn is_associative(&self) -> bool {
        let d = self.degree() as u32;
        let ts: [&str; 4] = ["t1", "t2", "t3", "u"];
        let bound = Some((&ts[..], d));
        let g = self.as_poly();
        // G(u, t3)
        let g_u3 = g
            .substitute("t2", &QPoly::var("t3"))
            .substitute("t1", &QPoly::var("u"));
        let left = g_u3.substitute_truncated("u", &g, bound);
        // G(t2, t3)
        let g_23 = g
            .substitute("t2", &QPoly::var("t3"))
            .substitute("t1", &QPoly::var("t2"));
        let right = g.substitute_truncated("t2", &g_23, bound);
        left.truncate_total_degree(&ts, d) == right.truncate_total_degree(&ts, d)
    }
}

#[derive(Serialize)]
struct LawEntry<'a> {
    i: usize,
    j: usize,
    coeff: &'a QPoly,
}

impl Serialize for FormalGroupLaw {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            self.series
                .terms()
                .map(|(&(i, j), coeff)| LawEntry { i, j, coeff }),
        )
    }
}
