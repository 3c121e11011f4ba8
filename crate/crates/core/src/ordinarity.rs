//! Per-prime ordinariness diagnostics.
//!
//! The Hasse-Witt side reads `a_p(x) mod p` off the family logarithm. The
//! oracle side counts points of elliptic fibres over F_p and calls a fibre
//! supersingular when its Frobenius trace vanishes mod p. The prime 2 is
//! excluded throughout.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::artinmazur::{builtin_family, closed_form_coefficient, is_singular_fibre, FamilyId, PARAM};
use crate::error::{Error, Result};
use crate::fgl::Logarithm;
use crate::ring::{pow_mod, ZPoly};

/// Default cap on the number of projective points enumerated by a single
/// count: `|P^2(F_31)| = 993`.
pub const DEFAULT_BUDGET: u64 = 993;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rejects 2 and non-primes.
pub fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// `a_p(x) mod p` for a built-in family, from the closed form.
pub fn hasse_witt_poly(id: FamilyId, p: u64) -> Result<ZPoly> {
    check_odd_prime(p)?;
    Ok(closed_form_coefficient(id, p as usize).reduce_mod(&BigInt::from(p)))
}

/// `a_p(x) mod p` read from a stored logarithm.
pub fn hasse_witt_from_log(log: &Logarithm, p: u64) -> Result<ZPoly> {
    check_odd_prime(p)?;
    if p as usize > log.truncation() {
        return Err(Error::InsufficientTruncation {
            needed: p as usize,
            available: log.truncation(),
        });
    }
    Ok(log.coeff(p as usize)?.reduce_mod(&BigInt::from(p)))
}

/// Evaluates a polynomial in the pencil parameter at `lambda` mod `p`.
fn eval_at(poly: &ZPoly, lambda: u64, p: u64) -> u64 {
    let point: Vec<u64> = poly
        .vars()
        .iter()
        .map(|v| {
            assert_eq!(v, PARAM, "Hasse-Witt polynomial in the pencil parameter only");
            lambda
        })
        .collect();
    poly.eval_mod(&point, p)
}

/// Smooth fibres `lambda` in F_p with `a_p(lambda) = 0`, in increasing order.
pub fn nonordinary_locus(id: FamilyId, p: u64) -> Result<Vec<u64>> {
    let hw = hasse_witt_poly(id, p)?;
    Ok((0..p)
        .filter(|&l| !is_singular_fibre(id, l, p) && eval_at(&hw, l, p) == 0)
        .collect())
}

/// A homogeneous polynomial over F_p prepared for fast evaluation.
struct Evaluator {
    terms: Vec<(u64, Vec<u32>)>,
    p: u64,
}

impl Evaluator {
    fn new(h: &ZPoly, ambient: &[&str], p: u64) -> Result<Self> {
        let vars: Vec<String> = ambient.iter().map(|s| s.to_string()).collect();
        let h = h.with_vars(&vars)?;
        let pb = BigInt::from(p);
        let terms = h
            .reduce_mod(&pb)
            .terms()
            .map(|(e, c)| (u64::try_from(c).expect("residue below p"), e.clone()))
            .collect();
        Ok(Evaluator { terms, p })
    }

    fn eval(&self, point: &[u64]) -> u64 {
        let p = self.p as u128;
        let mut acc: u128 = 0;
        for (c, e) in &self.terms {
            let mut t = *c as u128;
            for (&x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t * pow_mod(x, k as u64, self.p) as u128 % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc as u64
    }
}

/// Number of points of `P^N(F_p)`, `(p^(N+1) - 1) / (p - 1)`.
pub fn projective_size(p: u64, n: usize) -> u128 {
    (0..=n).map(|i| (p as u128).pow(i as u32)).sum()
}

/// Zeros of `h` in `P^N(F_p)` (with `N + 1 = ambient.len()`), by enumerating
/// the representatives whose first nonzero coordinate is 1. Fails when
/// `|P^N(F_p)|` exceeds `budget`.
pub fn point_count_projective(h: &ZPoly, ambient: &[&str], p: u64, budget: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if ambient.is_empty() {
        return Err(Error::InvalidArgument("no homogeneous coordinates".into()));
    }
    let needed = projective_size(p, ambient.len() - 1);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let ev = Evaluator::new(h, ambient, p)?;
    let n = ambient.len();
    let mut count = 0;
    let mut point = vec![0u64; n];
    for lead in 0..n {
        // coordinates before `lead` are 0, `lead` is 1, the rest are free
        point.iter_mut().for_each(|c| *c = 0);
        point[lead] = 1;
        let free = n - lead - 1;
        let total = (p as u128).pow(free as u32);
        for idx in 0..total {
            let mut r = idx;
            for slot in point.iter_mut().skip(lead + 1) {
                *slot = (r % p as u128) as u64;
                r /= p as u128;
            }
            if ev.eval(&point) == 0 {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Ordinary,
    Supersingular,
    Singular,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Ordinary => "ordinary",
            Verdict::Supersingular => "supersingular",
            Verdict::Singular => "singular",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberClassification {
    pub p: u64,
    pub lambda: u64,
    pub verdict: Verdict,
    /// Number of F_p-points, for smooth fibres.
    pub point_count: Option<u64>,
    /// `p + 1 - point_count`.
    pub trace: Option<i64>,
}

/// Oracle verdict for a fibre of the Hesse pencil, independent of `a_p`.
pub fn classify_elliptic_fiber(
    id: FamilyId,
    lambda: u64,
    p: u64,
    budget: u64,
) -> Result<FiberClassification> {
    if !id.is_elliptic() {
        return Err(Error::NonElliptic(id.to_string()));
    }
    check_odd_prime(p)?;
    let lambda = lambda % p;
    if is_singular_fibre(id, lambda, p) {
        return Ok(FiberClassification {
            p,
            lambda,
            verdict: Verdict::Singular,
            point_count: None,
            trace: None,
        });
    }
    let entry = builtin_family(id);
    let fibre = entry.family.polys()[0]
        .eval_var(PARAM, &BigInt::from(lambda))
        .trim_vars();
    let ambient: Vec<&str> = entry.family.ambient().iter().map(String::as_str).collect();
    let count = point_count_projective(&fibre, &ambient, p, budget)?;
    let trace = p as i64 + 1 - count as i64;
    let verdict = if trace.mod_floor(&(p as i64)) == 0 {
        Verdict::Supersingular
    } else {
        Verdict::Ordinary
    };
    Ok(FiberClassification {
        p,
        lambda,
        verdict,
        point_count: Some(count),
        trace: Some(trace),
    })
}

/// One line of a scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub lambda: u64,
    /// `a_p(lambda) mod p`.
    pub a_p_value: u64,
    /// Hasse-Witt side: for elliptic families `ordinary`/`supersingular`/`singular`;
    /// for others only `nonordinary` rows are emitted.
    pub verdict: String,
    pub oracle_verdict: Option<Verdict>,
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeReport {
    pub p: u64,
    pub hasse_witt: ZPoly,
    pub locus: Vec<u64>,
    /// `Some(true)` when every oracle verdict matched.
    pub oracle_match: Option<bool>,
    pub rows: Vec<ScanRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrdinarityReport {
    pub family: FamilyId,
    pub prime_bound: u64,
    pub with_oracle: bool,
    pub primes: Vec<PrimeReport>,
}

impl OrdinarityReport {
    pub fn rows(&self) -> impl Iterator<Item = &ScanRow> {
        self.primes.iter().flat_map(|r| r.rows.iter())
    }

    pub fn disagreements(&self) -> usize {
        self.rows().filter(|r| r.agree == Some(false)).count()
    }
}

fn hw_verdict(id: FamilyId, singular: bool, value: u64) -> &'static str {
    match (id.is_elliptic(), singular, value == 0) {
        (_, true, _) => "singular",
        (true, false, true) => "supersingular",
        (true, false, false) => "ordinary",
        (false, false, true) => "nonordinary",
        (false, false, false) => "hw-unit",
    }
}

fn scan_prime(id: FamilyId, p: u64, with_oracle: bool, budget: u64) -> Result<PrimeReport> {
    let hw = hasse_witt_poly(id, p)?;
    let rows = (0..p)
        .into_par_iter()
        .map(|lambda| -> Result<Option<ScanRow>> {
            let singular = is_singular_fibre(id, lambda, p);
            let value = eval_at(&hw, lambda, p);
            let verdict = hw_verdict(id, singular, value).to_string();
            if !with_oracle {
                return Ok((!singular && value == 0).then_some(ScanRow {
                    p,
                    lambda,
                    a_p_value: value,
                    verdict,
                    oracle_verdict: None,
                    agree: None,
                }));
            }
            let oracle = classify_elliptic_fiber(id, lambda, p, budget)?.verdict;
            Ok(Some(ScanRow {
                p,
                lambda,
                a_p_value: value,
                agree: Some(oracle.to_string() == verdict),
                verdict,
                oracle_verdict: Some(oracle),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<ScanRow> = rows.into_iter().flatten().collect();
    let locus = (0..p)
        .filter(|&l| !is_singular_fibre(id, l, p) && eval_at(&hw, l, p) == 0)
        .collect();
    let oracle_match = with_oracle.then(|| rows.iter().all(|r| r.agree == Some(true)));
    Ok(PrimeReport {
        p,
        hasse_witt: hw,
        locus,
        oracle_match,
        rows,
    })
}

/// Non-ordinary loci for every odd prime `p <= prime_bound`, cross-checked
/// against point counts when `with_oracle` is set (elliptic families only).
pub fn ordinarity_scan(
    id: FamilyId,
    prime_bound: u64,
    with_oracle: bool,
    budget: u64,
) -> Result<OrdinarityReport> {
    if prime_bound < 3 {
        return Err(Error::InvalidArgument(format!(
            "prime bound must be at least 3, got {prime_bound}"
        )));
    }
    if with_oracle && !id.is_elliptic() {
        return Err(Error::NonElliptic(id.to_string()));
    }
    let primes: Vec<u64> = (3..=prime_bound).filter(|&p| is_prime(p)).collect();
    let primes = primes
        .into_par_iter()
        .map(|p| scan_prime(id, p, with_oracle, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrdinarityReport {
        family: id,
        prime_bound,
        with_oracle,
        primes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceResult {
    pub p: u64,
    pub nu: u32,
    pub passed: bool,
    /// `a_{p^nu} - a_p * a_{p^(nu-1)}^p`, reduced mod p.
    pub difference: ZPoly,
}

/// Checks `a_{p^nu} = a_p * (a_{p^(nu-1)})^p` in F_p[params].
pub fn frobenius_power_congruence(log: &Logarithm, p: u64, nu: u32) -> Result<CongruenceResult> {
    check_odd_prime(p)?;
    if nu < 2 {
        return Err(Error::InvalidArgument(format!("nu must be at least 2, got {nu}")));
    }
    let top = (p as u128).checked_pow(nu).unwrap_or(u128::MAX);
    if top > log.truncation() as u128 {
        return Err(Error::InsufficientTruncation {
            needed: usize::try_from(top).unwrap_or(usize::MAX),
            available: log.truncation(),
        });
    }
    let pb = BigInt::from(p);
    let modp = |f: &ZPoly| f.reduce_mod(&pb);
    let a_top = modp(log.coeff(top as usize)?);
    let a_p = modp(log.coeff(p as usize)?);
    let prev = modp(log.coeff(p.pow(nu - 1) as usize)?);
    let mut power = ZPoly::one();
    for _ in 0..p {
        power = modp(&(power * &prev));
    }
    let difference = modp(&(a_top - modp(&(a_p * power))));
    Ok(CongruenceResult {
        p,
        nu,
        passed: difference.is_zero(),
        difference,
    })
}

/// `a_p(0) mod p` is 1 for every built-in family: the constant term of the
/// Hasse-Witt polynomial.
pub fn hasse_witt_constant(id: FamilyId, p: u64) -> Result<BigInt> {
    Ok(hasse_witt_poly(id, p)?.constant_term())
}

/// True when `|t| <= 2 sqrt(p)`.
pub fn within_hasse_bound(trace: i64, p: u64) -> bool {
    (trace as i128).pow(2) <= 4 * p as i128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinmazur::closed_form_logarithm;
    use crate::ring::zpoly;

    #[test]
    fn hasse_witt_examples() {
        assert_eq!(
            hasse_witt_poly(FamilyId::HesseCubic, 5).unwrap(),
            zpoly("1+4*x^3")
        );
        assert_eq!(hasse_witt_poly(FamilyId::HesseCubic, 3).unwrap(), zpoly("1"));
        assert_eq!(hasse_witt_poly(FamilyId::QuinticCy3, 5).unwrap(), zpoly("1"));
        assert_eq!(
            hasse_witt_poly(FamilyId::HesseCubic, 2).unwrap_err(),
            Error::EvenPrime
        );
        assert_eq!(
            hasse_witt_poly(FamilyId::HesseCubic, 9).unwrap_err(),
            Error::NotPrime(9)
        );
    }

    #[test]
    fn loci() {
        assert_eq!(nonordinary_locus(FamilyId::HesseCubic, 5).unwrap(), vec![1]);
        assert!(nonordinary_locus(FamilyId::HesseCubic, 3).unwrap().is_empty());
    }

    #[test]
    fn point_counts() {
        for p in [3, 5, 7] {
            assert_eq!(
                point_count_projective(&zpoly("X"), &["X", "Y", "Z"], p, 993).unwrap(),
                p + 1
            );
        }
        assert_eq!(
            point_count_projective(&zpoly("X*Y*Z"), &["X", "Y", "Z"], 5, 993).unwrap(),
            15
        );
        let n = point_count_projective(&zpoly("X^3+Y^3+Z^3+X*Y*Z"), &["X", "Y", "Z"], 5, 993).unwrap();
        assert!((n as i64 - 6).abs() <= 4);
        let err = point_count_projective(&zpoly("X"), &["X", "Y", "Z"], 37, 993).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                needed: 1407,
                budget: 993
            }
        );
    }

    #[test]
    fn classification() {
        let c = classify_elliptic_fiber(FamilyId::HesseCubic, 0, 7, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.verdict, Verdict::Singular);
        let c = classify_elliptic_fiber(FamilyId::HesseCubic, 1, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.verdict, Verdict::Supersingular);
        assert!(classify_elliptic_fiber(FamilyId::QuarticK3, 1, 5, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn scans() {
        let r = ordinarity_scan(FamilyId::HesseCubic, 5, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.primes.iter().map(|x| x.p).collect::<Vec<_>>(), vec![3, 5]);
        assert!(r.primes.iter().all(|x| x.oracle_match == Some(true)));
        let r = ordinarity_scan(FamilyId::QuinticCy3, 7, false, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.primes.len(), 3);
        assert!(r.rows().all(|row| row.oracle_verdict.is_none()));
        assert!(ordinarity_scan(FamilyId::QuinticCy3, 7, true, DEFAULT_BUDGET).is_err());
        assert!(ordinarity_scan(FamilyId::HesseCubic, 2, false, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn congruences() {
        let mult = Logarithm::multiplicative(9);
        assert!(frobenius_power_congruence(&mult, 3, 2).unwrap().passed);
        let hesse = closed_form_logarithm(FamilyId::HesseCubic, 9).unwrap();
        assert!(frobenius_power_congruence(&hesse, 3, 2).unwrap().passed);
        assert!(matches!(
            frobenius_power_congruence(&hesse, 5, 2),
            Err(Error::InsufficientTruncation { .. })
        ));
    }
}
