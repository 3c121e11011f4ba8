//! Artin-Mazur logarithms of complete-intersection Calabi-Yau pencils.
//!
//! For a family cut out by `P_1, ..., P_s` in `P^N` with `sum d_i = N + 1`,
//! the logarithm coefficient `a_m` is the coefficient of
//! `(Z_0 ... Z_N)^(m-1)` in `(P_1 ... P_s)^(m-1)`.
//!
//! The outputs are only meaningful where the family is a smooth complete
//! intersection; neither the regular-sequence nor the smoothness hypothesis
//! is checked here.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgl::Logarithm;
use crate::ring::{binomial, multinomial, ZPoly};

/// Name of the pencil parameter in the built-in families.
pub const PARAM: &str = "x";

/// Projective complete intersection whose equations have coefficients in
/// `Z[params]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompleteIntersectionFamily {
    name: String,
    ambient: Vec<String>,
    polys: Vec<ZPoly>,
    degrees: Vec<u32>,
}

impl CompleteIntersectionFamily {
    /// Checks that each polynomial is homogeneous in `ambient` and that the
    /// degrees add up to `N + 1 = ambient.len()`.
    pub fn new(name: &str, ambient: &[&str], polys: Vec<ZPoly>) -> Result<Self> {
        if ambient.len() < 2 {
            return Err(Error::DegreeCondition(
                "need at least two homogeneous coordinates".into(),
            ));
        }
        if polys.is_empty() {
            return Err(Error::DegreeCondition("no equations given".into()));
        }
        let mut degrees = Vec::with_capacity(polys.len());
        for (i, p) in polys.iter().enumerate() {
            let mut vars: Vec<String> = ambient.iter().map(|s| s.to_string()).collect();
            vars.extend(
                p.vars()
                    .iter()
                    .filter(|v| !ambient.contains(&v.as_str()))
                    .cloned(),
            );
            match p.with_vars(&vars)?.homogeneous_degree_in(ambient)? {
                Some(d) if d > 0 && !p.is_zero() => degrees.push(d),
                _ => {
                    return Err(Error::DegreeCondition(format!(
                        "equation {} is not homogeneous of positive degree in {}",
                        i + 1,
                        ambient.join(",")
                    )))
                }
            }
        }
        let total: u32 = degrees.iter().sum();
        if total as usize != ambient.len() {
            return Err(Error::DegreeCondition(format!(
                "degrees {degrees:?} sum to {total}, expected N+1 = {}",
                ambient.len()
            )));
        }
        Ok(CompleteIntersectionFamily {
            name: name.to_string(),
            ambient: ambient.iter().map(|s| s.to_string()).collect(),
            polys,
            degrees,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &[String] {
        &self.ambient
    }

    /// `N`, the dimension of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        self.ambient.len() - 1
    }

    /// `N - s`, the dimension of the fibres.
    pub fn fibre_dim(&self) -> usize {
        self.ambient_dim() - self.polys.len()
    }

    pub fn polys(&self) -> &[ZPoly] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Variables other than the homogeneous coordinates, in first-seen order.
    pub fn params(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.polys {
            for v in p.used_vars() {
                if !self.ambient.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// The product `P_1 ... P_s`.
    pub fn product(&self) -> ZPoly {
        self.polys.iter().fold(ZPoly::one(), |acc, p| acc * p)
    }
}

/// Exponent vector (ambient coordinates first, then parameters) to coefficient.
type Sparse = HashMap<Vec<u32>, BigInt>;

fn to_sparse(p: &ZPoly, vars: &[String]) -> Sparse {
    let p = p.with_vars(vars).expect("family variables cover the polynomial");
    p.terms().map(|(e, c)| (e.clone(), c.clone())).collect()
}

/// Multiplies, discarding every monomial with some ambient exponent above `bound`.
fn mul_pruned(a: &Sparse, b: &Sparse, n_ambient: usize, bound: u32) -> Sparse {
    let mut out: Sparse = HashMap::with_capacity(a.len() * 2);
    for (ea, ca) in a {
        'inner: for (eb, cb) in b {
            let mut e = Vec::with_capacity(ea.len());
            for (i, (x, y)) in ea.iter().zip(eb).enumerate() {
                let s = x + y;
                if i < n_ambient && s > bound {
                    continue 'inner;
                }
                e.push(s);
            }
            let slot = out.entry(e).or_insert_with(BigInt::zero);
            *slot += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `a_m` by pruned coefficient extraction.
pub fn am_coefficient(family: &CompleteIntersectionFamily, m: usize) -> Result<ZPoly> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let params = family.params();
    let mut vars = family.ambient.clone();
    vars.extend(params.iter().cloned());
    let n_amb = family.ambient.len();
    let k = (m - 1) as u32;
    let factors: Vec<Sparse> = family.polys.iter().map(|p| to_sparse(p, &vars)).collect();

    let mut acc: Sparse = HashMap::from([(vec![0; vars.len()], BigInt::one())]);
    for _ in 0..k {
        for f in &factors {
            acc = mul_pruned(&acc, f, n_amb, k);
        }
    }
    let terms = acc.into_iter().filter_map(|(e, c)| {
        e[..n_amb]
            .iter()
            .all(|&d| d == k)
            .then(|| (e[n_amb..].to_vec(), c))
    });
    ZPoly::from_terms(params, terms)
}

/// Logarithm `a_1..a_{m_max}` of the Artin-Mazur formal group, by extraction.
/// Distinct `m` are computed in parallel.
pub fn am_logarithm(family: &CompleteIntersectionFamily, m_max: usize) -> Result<Logarithm> {
    if m_max == 0 {
        return Err(Error::InvalidArgument("m_max must be positive".into()));
    }
    let coeffs = (1..=m_max)
        .into_par_iter()
        .map(|m| am_coefficient(family, m))
        .collect::<Result<Vec<_>>>()?;
    Logarithm::new(coeffs)
}

/// Identifier of a built-in family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    HesseCubic,
    QuarticK3,
    QuinticCy3,
}

impl FamilyId {
    pub const ALL: [FamilyId; 3] = [FamilyId::HesseCubic, FamilyId::QuarticK3, FamilyId::QuinticCy3];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::HesseCubic => "hesse-cubic",
            FamilyId::QuarticK3 => "quartic-k3",
            FamilyId::QuinticCy3 => "quintic-cy3",
        }
    }

    /// Degree `n` of the Fermat-type hypersurface in `P^(n-1)`.
    pub fn degree(self) -> u32 {
        match self {
            FamilyId::HesseCubic => 3,
            FamilyId::QuarticK3 => 4,
            FamilyId::QuinticCy3 => 5,
        }
    }

    pub fn is_elliptic(self) -> bool {
        self == FamilyId::HesseCubic
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hesse-cubic" | "hesse" => Ok(FamilyId::HesseCubic),
            "quartic-k3" | "quartic" => Ok(FamilyId::QuarticK3),
            "quintic-cy3" | "quintic" => Ok(FamilyId::QuinticCy3),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A built-in family together with its closed-form coefficient rule.
#[derive(Clone, Debug)]
pub struct FamilyCatalogEntry {
    pub id: FamilyId,
    pub family: CompleteIntersectionFamily,
    /// Human-readable closed form for `a_m`.
    pub rule: &'static str,
}

impl FamilyCatalogEntry {
    pub fn fibre_dim(&self) -> usize {
        self.family.fibre_dim()
    }

    /// `a_m` from the closed form.
    pub fn closed_form(&self, m: usize) -> ZPoly {
        closed_form_coefficient(self.id, m)
    }

    /// Polynomial in `x` whose roots are the singular fibres in characteristic
    /// zero (and in every characteristic `p` not dividing the degree).
    pub fn singular_locus(&self) -> ZPoly {
        singular_locus(self.id)
    }

    /// Whether the fibre at `lambda` is singular over F_p.
    pub fn is_singular_fibre(&self, lambda: u64, p: u64) -> bool {
        is_singular_fibre(self.id, lambda, p)
    }
}

fn poly(s: &str) -> ZPoly {
    s.parse().expect("built-in polynomial parses")
}

pub fn builtin_family(id: FamilyId) -> FamilyCatalogEntry {
    let (ambient, eq, rule): (&[&str], &str, &str) = match id {
        FamilyId::HesseCubic => (
            &["X", "Y", "Z"],
            "x*(X^3+Y^3+Z^3)+X*Y*Z",
            "a_m = sum_j (3j)!/(j!)^3 C(m-1,3j) x^(3j)",
        ),
        FamilyId::QuarticK3 => (
            &["W", "X", "Y", "Z"],
            "x*(W^4+X^4+Y^4+Z^4)+W*X*Y*Z",
            "a_m = sum_j (4j)!/(j!)^4 C(m-1,4j) x^(4j)",
        ),
        FamilyId::QuinticCy3 => (
            &["Z0", "Z1", "Z2", "Z3", "Z4"],
            "Z0*Z1*Z2*Z3*Z4-x*(Z0^5+Z1^5+Z2^5+Z3^5+Z4^5)",
            "a_m = sum_j (-1)^j (5j)!/(j!)^5 C(m-1,5j) x^(5j)",
        ),
    };
    let family = CompleteIntersectionFamily::new(id.as_str(), ambient, vec![poly(eq)])
        .expect("built-in family satisfies the degree condition");
    FamilyCatalogEntry { id, family, rule }
}

/// Looks up a family by identifier.
pub fn lookup(name: &str) -> Result<FamilyCatalogEntry> {
    Ok(builtin_family(name.parse()?))
}

/// `a_m` from the closed form of a built-in family.
pub fn closed_form_coefficient(id: FamilyId, m: usize) -> ZPoly {
    assert!(m >= 1, "coefficients are indexed from 1");
    let n = id.degree() as u64;
    let mut coeffs = Vec::new();
    let mut j = 0u64;
    while n * j <= (m - 1) as u64 {
        let mut c = multinomial(&vec![j; n as usize]) * binomial((m - 1) as u64, n * j);
        if id == FamilyId::QuinticCy3 && j % 2 == 1 {
            c = -c;
        }
        coeffs.resize((n * j) as usize, BigInt::zero());
        coeffs.push(c);
        j += 1;
    }
    ZPoly::univariate(PARAM, &coeffs)
}

pub fn closed_form_logarithm(id: FamilyId, m_max: usize) -> Result<Logarithm> {
    if m_max == 0 {
        return Err(Error::InvalidArgument("m_max must be positive".into()));
    }
    Logarithm::new((1..=m_max).map(|m| closed_form_coefficient(id, m)).collect())
}

/// `x * (c x^n - s)` with `c x^n = s` the degenerate Fermat-plus-monomial
/// fibres: `x(27x^3+1)`, `x(256x^4-1)`, `x(3125x^5-1)`.
pub fn singular_locus(id: FamilyId) -> ZPoly {
    match id {
        FamilyId::HesseCubic => poly("x*(27*x^3+1)"),
        FamilyId::QuarticK3 => poly("x*(256*x^4-1)"),
        FamilyId::QuinticCy3 => poly("x*(3125*x^5-1)"),
    }
}

/// Declared singular fibres over F_p. When `p` divides the degree of a
/// Fermat-type family of dimension at least 2, every fibre is singular.
pub fn is_singular_fibre(id: FamilyId, lambda: u64, p: u64) -> bool {
    let n = id.degree() as u64;
    if n.is_multiple_of(p) && !id.is_elliptic() {
        return true;
    }
    singular_locus(id).eval_mod(&[lambda % p], p) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::zpoly;

    #[test]
    fn first_coefficient_is_one() {
        for id in FamilyId::ALL {
            let e = builtin_family(id);
            assert_eq!(am_coefficient(&e.family, 1).unwrap(), ZPoly::one());
            assert_eq!(e.closed_form(1), ZPoly::one());
        }
    }

    #[test]
    fn documented_values() {
        let hesse = builtin_family(FamilyId::HesseCubic);
        assert_eq!(am_coefficient(&hesse.family, 4).unwrap(), zpoly("1+6*x^3"));
        assert_eq!(hesse.closed_form(5), zpoly("1+24*x^3"));
        assert_eq!(hesse.closed_form(9), zpoly("1+336*x^3+2520*x^6"));
        let quintic = builtin_family(FamilyId::QuinticCy3);
        assert_eq!(am_coefficient(&quintic.family, 6).unwrap(), zpoly("1-120*x^5"));
        assert_eq!(quintic.closed_form(2), ZPoly::one());
        assert_eq!(quintic.closed_form(6), zpoly("1-120*x^5"));
    }

    #[test]
    fn catalog_shapes() {
        let e = builtin_family(FamilyId::HesseCubic);
        assert_eq!(e.family.ambient_dim(), 2);
        assert_eq!(e.fibre_dim(), 1);
        assert_eq!(e.family.polys()[0], zpoly("x*(X^3+Y^3+Z^3)+X*Y*Z"));
        assert_eq!(builtin_family(FamilyId::QuarticK3).fibre_dim(), 2);
        assert_eq!(builtin_family(FamilyId::QuinticCy3).fibre_dim(), 3);
        assert_eq!(e.family.params(), vec!["x".to_string()]);
        assert_eq!(lookup("quintic").unwrap().id, FamilyId::QuinticCy3);
        assert_eq!(lookup("octic").unwrap_err(), Error::UnknownFamily("octic".into()));
    }

    #[test]
    fn degree_condition() {
        let err = CompleteIntersectionFamily::new("bad", &["X", "Y", "Z"], vec![zpoly("X^2+Y*Z")]);
        assert!(matches!(err, Err(Error::DegreeCondition(_))));
        let err = CompleteIntersectionFamily::new("bad", &["X", "Y", "Z"], vec![zpoly("X^3+Y")]);
        assert!(matches!(err, Err(Error::DegreeCondition(_))));
    }

    #[test]
    fn two_equation_family_uses_product_rule() {
        // two quadrics in P^3: (XY - tZ^2)(ZW - tX^2); degrees 2 + 2 = 4
        let f = CompleteIntersectionFamily::new(
            "quadrics",
            &["X", "Y", "Z", "W"],
            vec![zpoly("X*Y-t*Z^2"), zpoly("Z*W-t*X^2")],
        )
        .unwrap();
        assert_eq!(f.fibre_dim(), 1);
        let log = am_logarithm(&f, 4).unwrap();
        let direct = f.product().pow(3);
        let direct = direct
            .coefficient_of(&[("X", 3), ("Y", 3), ("Z", 3), ("W", 3)])
            .unwrap();
        assert_eq!(log.coeff(4).unwrap(), &direct);
    }

    #[test]
    fn singular_fibres() {
        // 27 * 3^3 = 729 = -1 mod 5
        assert!(is_singular_fibre(FamilyId::HesseCubic, 3, 5));
        assert!(!is_singular_fibre(FamilyId::HesseCubic, 2, 5));
        assert!(is_singular_fibre(FamilyId::HesseCubic, 0, 7));
        assert!(is_singular_fibre(FamilyId::QuinticCy3, 1, 5));
        assert!(!is_singular_fibre(FamilyId::HesseCubic, 1, 3));
    }
}
