use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use wittkit::artinmazur::{
    am_coefficient, am_logarithm, builtin_family, closed_form_coefficient, is_singular_fibre, lookup,
    CompleteIntersectionFamily, FamilyId, PARAM,
};
use wittkit::ordinarity::{
    classify_elliptic_fiber, frobenius_power_congruence, hasse_witt_poly, is_prime, nonordinary_locus,
    ordinarity_scan, point_count_projective, within_hasse_bound, Verdict, DEFAULT_BUDGET,
};
use wittkit::picardfuchs::{quintic_operator, ThetaOperator, QUINTIC_OPERATOR};
use wittkit::ring::{zpoly, ZPoly};
use wittkit::Error;

fn odd_primes(bound: u64) -> impl Iterator<Item = u64> {
    (3..=bound).filter(|&p| is_prime(p))
}

fn derivative(f: &ZPoly, i: usize) -> ZPoly {
    let terms = f.terms().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
        let mut e = e.clone();
        let k = e[i];
        e[i] -= 1;
        (e, c * BigInt::from(k))
    });
    ZPoly::from_terms(f.vars().to_vec(), terms).unwrap()
}

/// Brute-force search for a point of P^N(F_p) where F and all its partials vanish.
fn has_singular_point(f: &ZPoly, ambient: &[String], p: u64) -> bool {
    let f = f.with_vars(ambient).unwrap();
    let n = ambient.len();
    let mut eqs = vec![f.clone()];
    eqs.extend((0..n).map(|i| derivative(&f, i)));
    for lead in 0..n {
        let free = (n - lead - 1) as u32;
        for idx in 0..p.pow(free) {
            let mut point = vec![0u64; n];
            point[lead] = 1;
            let mut r = idx;
            for slot in point.iter_mut().skip(lead + 1) {
                *slot = r % p;
                r /= p;
            }
            if eqs.iter().all(|e| e.eval_mod(&point, p) == 0) {
                return true;
            }
        }
    }
    false
}

#[test]
fn declared_singular_loci_match_brute_force() {
    let cases = [
        (FamilyId::HesseCubic, 31),
        (FamilyId::QuarticK3, 7),
        (FamilyId::QuinticCy3, 5),
    ];
    for (id, bound) in cases {
        let entry = builtin_family(id);
        for p in odd_primes(bound) {
            for lambda in 0..p {
                let fibre = entry.family.polys()[0].eval_var(PARAM, &BigInt::from(lambda));
                let brute = has_singular_point(&fibre, entry.family.ambient(), p);
                assert_eq!(
                    is_singular_fibre(id, lambda, p),
                    brute,
                    "{id}, p = {p}, lambda = {lambda}"
                );
            }
        }
    }
}

#[test]
fn hesse_at_five() {
    // 27 x^3 + 1 = 0 mod 5 exactly at x = 3
    assert!(!is_singular_fibre(FamilyId::HesseCubic, 2, 5));
    assert!(is_singular_fibre(FamilyId::HesseCubic, 3, 5));
    let c = classify_elliptic_fiber(FamilyId::HesseCubic, 2, 5, DEFAULT_BUDGET).unwrap();
    assert_eq!(c.verdict, Verdict::Ordinary);
    let c = classify_elliptic_fiber(FamilyId::HesseCubic, 1, 5, DEFAULT_BUDGET).unwrap();
    assert_eq!(
        (c.verdict, c.point_count, c.trace),
        (Verdict::Supersingular, Some(6), Some(0))
    );
}

#[test]
fn coefficient_shape() {
    for id in FamilyId::ALL {
        for m in 1..=30 {
            let a = closed_form_coefficient(id, m);
            assert!((a.degree_in(PARAM) as usize) < m, "{id}: a_{m} = {a}");
            assert_eq!(a.eval_var(PARAM, &BigInt::zero()), ZPoly::one(), "{id}: a_{m}(0)");
        }
    }
}

#[test]
fn known_coefficients() {
    let hesse = am_logarithm(&builtin_family(FamilyId::HesseCubic).family, 9).unwrap();
    assert_eq!(hesse.coeff(9).unwrap(), &zpoly("1+336*x^3+2520*x^6"));
    assert_eq!(
        closed_form_coefficient(FamilyId::QuinticCy3, 8),
        zpoly("1-2520*x^5")
    );
    assert_eq!(
        closed_form_coefficient(FamilyId::QuarticK3, 10),
        zpoly("1+3024*x^4+22680*x^8")
    );
    assert_eq!(
        closed_form_coefficient(FamilyId::QuinticCy3, 25),
        zpoly("1-5100480*x^5+222406430400*x^10-219880332672000*x^15+3246670537110000*x^20")
    );
}

#[test]
fn product_rule_for_two_equations() {
    // two quadrics in P^3: a_m is the coefficient of (prod z)^(m-1) in f1^(m-1) f2^(m-1)
    let f1 = zpoly("W*X+x*Y^2");
    let f2 = zpoly("Y*Z+x*W^2");
    let fam = CompleteIntersectionFamily::new("quadrics", &["W", "X", "Y", "Z"], vec![f1, f2]).unwrap();
    assert_eq!(fam.fibre_dim(), 1);
    assert_eq!(am_coefficient(&fam, 1).unwrap(), zpoly("1"));
    let err = CompleteIntersectionFamily::new("bad", &["X", "Y", "Z"], vec![zpoly("X^2+Y^2")]);
    assert!(matches!(err, Err(Error::DegreeCondition(_))));
}

#[test]
fn lookup_names() {
    assert_eq!(lookup("quintic").unwrap().id, FamilyId::QuinticCy3);
    assert_eq!(lookup("hesse-cubic").unwrap().id, FamilyId::HesseCubic);
    assert!(matches!(lookup("sextic"), Err(Error::UnknownFamily(_))));
}

#[test]
fn hasse_bound_and_point_counts() {
    for p in odd_primes(31) {
        for lambda in 0..p {
            let c = classify_elliptic_fiber(FamilyId::HesseCubic, lambda, p, DEFAULT_BUDGET).unwrap();
            if let Some(t) = c.trace {
                assert!(within_hasse_bound(t, p), "p = {p}, lambda = {lambda}, trace {t}");
            }
        }
    }
    // X^3 + Y^3 + Z^3 over F_7 has 9 points
    let fermat = zpoly("X^3+Y^3+Z^3");
    assert_eq!(
        point_count_projective(&fermat, &["X", "Y", "Z"], 7, DEFAULT_BUDGET).unwrap(),
        9
    );
    let err = point_count_projective(&fermat, &["X", "Y", "Z"], 37, DEFAULT_BUDGET);
    assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
}

#[test]
fn nonordinary_loci() {
    assert_eq!(nonordinary_locus(FamilyId::HesseCubic, 5).unwrap(), [1]);
    assert_eq!(nonordinary_locus(FamilyId::QuinticCy3, 7).unwrap(), [6]);
    assert_eq!(
        hasse_witt_poly(FamilyId::HesseCubic, 7).unwrap(),
        zpoly("1+x^3+6*x^6")
    );
    assert!(matches!(
        hasse_witt_poly(FamilyId::HesseCubic, 2),
        Err(Error::EvenPrime)
    ));
    assert!(matches!(
        hasse_witt_poly(FamilyId::HesseCubic, 9),
        Err(Error::NotPrime(9))
    ));
}

#[test]
fn prime_power_congruence_on_every_family() {
    for id in FamilyId::ALL {
        let log = wittkit::artinmazur::closed_form_logarithm(id, 49).unwrap();
        for p in [3, 5, 7] {
            let r = frobenius_power_congruence(&log, p, 2).unwrap();
            assert!(r.passed, "{id}, p = {p}: {}", r.difference);
        }
        assert!(matches!(
            frobenius_power_congruence(&log, 11, 2),
            Err(Error::InsufficientTruncation { .. })
        ));
    }
}

#[test]
fn scan_preconditions() {
    assert!(matches!(
        ordinarity_scan(FamilyId::QuarticK3, 7, true, DEFAULT_BUDGET),
        Err(Error::NonElliptic(_))
    ));
    assert!(matches!(
        ordinarity_scan(FamilyId::HesseCubic, 37, true, DEFAULT_BUDGET),
        Err(Error::BudgetExceeded { .. })
    ));
    assert!(ordinarity_scan(FamilyId::HesseCubic, 2, false, DEFAULT_BUDGET).is_err());
}

#[test]
fn quintic_operator_kills_one_to_order_four() {
    let l: ThetaOperator = QUINTIC_OPERATOR.parse().unwrap();
    assert_eq!(l, quintic_operator());
    assert_eq!(l.apply_poly(&ZPoly::one()).unwrap(), zpoly("-75000*x^5"));
    assert_eq!(l.order(), 4);
}

fn operator() -> impl Strategy<Value = ThetaOperator> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 0..3), 0..4).prop_map(|qs| {
        let coeffs = qs
            .into_iter()
            .map(|c| ZPoly::univariate("x", &c.into_iter().map(BigInt::from).collect::<Vec<_>>()))
            .collect();
        ThetaOperator::new(coeffs).unwrap()
    })
}

fn xpoly() -> impl Strategy<Value = ZPoly> {
    prop::collection::vec(-5i64..=5, 0..6)
        .prop_map(|c| ZPoly::univariate("x", &c.into_iter().map(BigInt::from).collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_matches_application(a in operator(), b in operator(), f in xpoly()) {
        let lhs = a.compose(&b).apply_poly(&f).unwrap();
        let rhs = a.apply_poly(&b.apply_poly(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn application_is_linear(a in operator(), f in xpoly(), g in xpoly(), c in -4i64..=4) {
        let c = BigInt::from(c);
        let lhs = a.apply_poly(&(&f + &g.scale(&c))).unwrap();
        let rhs = &a.apply_poly(&f).unwrap() + &a.apply_poly(&g).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_parses_back(a in operator()) {
        let back: ThetaOperator = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn shift_is_conjugation(a in operator(), n in 0u32..4, f in xpoly()) {
        // L(x^n f) = x^n M(f)
        let xn = ZPoly::monomial("x", n, BigInt::one());
        let lhs = a.apply_poly(&(&xn * &f)).unwrap();
        let rhs = &xn * &a.shifted(n).apply_poly(&f).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
