use std::borrow::Cow;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{residue, Coeff};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact coefficients.
///
/// Terms are keyed by exponent vectors whose entries follow the order of
/// `vars`, so the map order is lexicographic on the declared variable list.
/// Zero coefficients are never stored.
///
/// Two polynomials with different variable lists are compared (and combined)
/// after aligning both onto the union of their variables; a polynomial that
/// does not mention a variable has exponent zero in it.
#[derive(Clone, Debug)]
pub struct Poly<C> {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, C>,
}

/// Polynomial with integer coefficients, e.g. an element of Z[x].
pub type ZPoly = Poly<BigInt>;
/// Polynomial with rational coefficients, e.g. an element of Q[x].
pub type QPoly = Poly<BigRational>;

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    if a == b || b.iter().all(|v| a.contains(v)) {
        return a.to_vec();
    }
    if a.iter().all(|v| b.contains(v)) {
        return b.to_vec();
    }
    let mut out = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

impl<C: Coeff> Poly<C> {
    /// The zero polynomial over the given variables.
    pub fn new(vars: Vec<String>) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::VariableMismatch(format!("duplicate variable '{v}'")));
            }
        }
        let mut p = Poly::new(vars);
        for (exp, c) in terms {
            if exp.len() != p.vars.len() {
                return Err(Error::ExponentLength {
                    expected: p.vars.len(),
                    got: exp.len(),
                });
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    pub fn constant(c: C) -> Self {
        let mut p = Poly::new(Vec::new());
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::new(vec![name.to_string()]);
        p.add_term(vec![1], C::one());
        p
    }

    /// `sum_i coeffs[i] * name^i`
    pub fn univariate(name: &str, coeffs: &[C]) -> Self {
        let mut p = Poly::new(vec![name.to_string()]);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(vec![i as u32], c.clone());
        }
        p
    }

    /// `c * name^e`
    pub fn monomial(name: &str, e: u32, c: C) -> Self {
        let mut p = Poly::new(vec![name.to_string()]);
        p.add_term(vec![e], c);
        p
    }

    pub(crate) fn add_term(&mut self, exp: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let sum = std::mem::replace(existing, C::zero()) + c;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the exponent vector `exp` (in this polynomial's variable order).
    pub fn coeff(&self, exp: &[u32]) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Variables with a nonzero exponent in some term.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Re-expresses the polynomial over `target`, which must contain every
    /// variable that actually occurs. Unused variables may be dropped.
    pub fn with_vars(&self, target: &[String]) -> Result<Self> {
        if self.vars == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().all(|e| e[i] == 0) => map.push(None),
                None => {
                    return Err(Error::VariableMismatch(format!(
                        "variable '{v}' is not in the target list"
                    )))
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0; target.len()];
                for (i, slot) in map.iter().enumerate() {
                    if let Some(j) = slot {
                        ne[*j] = e[i];
                    }
                }
                (ne, c.clone())
            })
            .collect();
        Ok(Poly {
            vars: target.to_vec(),
            terms,
        })
    }

    /// Drops variables that do not occur in any term.
    pub fn trim_vars(&self) -> Self {
        let used = self.used_vars();
        self.with_vars(&used).expect("used variables are retained")
    }

    fn aligned<'a>(a: &'a Self, b: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        if a.vars == b.vars {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let vars = union_vars(&a.vars, &b.vars);
        let lift = |p: &'a Self| -> Cow<'a, Self> {
            if p.vars == vars {
                Cow::Borrowed(p)
            } else {
                Cow::Owned(p.with_vars(&vars).expect("union contains all variables"))
            }
        };
        (lift(a), lift(b))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::new(self.vars.clone());
        }
        let mut out = Poly::new(self.vars.clone());
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::new(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.var_index(n)
                    .ok_or_else(|| Error::VariableMismatch(format!("unknown variable '{n}'")))
            })
            .collect()
    }

    /// Coefficient of a monomial in a subset of the variables, returned as a
    /// polynomial in the remaining variables.
    pub fn coefficient_of(&self, monomial: &[(&str, u32)]) -> Result<Self> {
        let names: Vec<&str> = monomial.iter().map(|(n, _)| *n).collect();
        let idx = self.positions(&names)?;
        let keep: Vec<usize> = (0..self.vars.len()).filter(|i| !idx.contains(i)).collect();
        let mut out = Poly::new(keep.iter().map(|&i| self.vars[i].clone()).collect());
        for (e, c) in &self.terms {
            if idx.iter().zip(monomial).all(|(&i, (_, k))| e[i] == *k) {
                out.add_term(keep.iter().map(|&i| e[i]).collect(), c.clone());
            }
        }
        Ok(out)
    }

    /// Substitutes a constant for one variable; the variable is removed.
    pub fn eval_var(&self, name: &str, value: &C) -> Self {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut out = Poly::new(vars);
        let mut powers: Vec<C> = vec![C::one()];
        for (e, c) in &self.terms {
            while powers.len() <= e[i] as usize {
                let next = powers.last().unwrap().clone() * value.clone();
                powers.push(next);
            }
            let mut ne = e.clone();
            ne.remove(i);
            out.add_term(ne, c.clone() * powers[e[i] as usize].clone());
        }
        out
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute(&self, name: &str, replacement: &Self) -> Self {
        self.substitute_truncated(name, replacement, None)
    }

    /// Substitution followed by dropping every term whose total degree in
    /// `bound.0` exceeds `bound.1`. Intermediate powers are truncated as well.
    pub fn substitute_truncated(
        &self,
        name: &str,
        replacement: &Self,
        bound: Option<(&[&str], u32)>,
    ) -> Self {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        let trunc = |p: Self| match bound {
            Some((vs, d)) => p.truncate_total_degree(vs, d),
            None => p,
        };
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut grouped: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne.remove(i);
            grouped
                .entry(e[i])
                .or_insert_with(|| Poly::new(vars.clone()))
                .add_term(ne, c.clone());
        }
        let mut out = Poly::new(vars.clone());
        let mut power = Poly::one();
        let mut k = 0;
        for (e, part) in grouped {
            while k < e {
                power = trunc(&power * replacement);
                k += 1;
            }
            out = &out + &trunc(&part * &power);
        }
        out
    }

    /// Drops every term whose total degree in `names` exceeds `max`.
    /// Names that are not variables of the polynomial contribute degree zero.
    pub fn truncate_total_degree(&self, names: &[&str], max: u32) -> Self {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.var_index(n)).collect();
        let mut out = Poly::new(self.vars.clone());
        for (e, c) in &self.terms {
            if idx.iter().map(|&i| e[i]).sum::<u32>() <= max {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Degree shared by all terms in `names`, or `None` when not homogeneous.
    /// The zero polynomial is reported as homogeneous of degree 0.
    pub fn homogeneous_degree_in(&self, names: &[&str]) -> Result<Option<u32>> {
        let idx = self.positions(names)?;
        let mut degs = self.terms.keys().map(|e| idx.iter().map(|&i| e[i]).sum::<u32>());
        let Some(first) = degs.next() else {
            return Ok(Some(0));
        };
        Ok(degs.all(|d| d == first).then_some(first))
    }
}

impl ZPoly {
    /// Reduces every coefficient into `[0, n)`; terms that vanish are dropped.
    pub fn reduce_mod(&self, n: &BigInt) -> ZPoly {
        assert!(n.is_positive(), "modulus must be positive");
        let mut out = Poly::new(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), residue(c, n));
        }
        out
    }

    pub fn to_rational(&self) -> QPoly {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }

    /// Exact division of every coefficient, or `None` if some coefficient is
    /// not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<ZPoly> {
        let mut out = Poly::new(self.vars.clone());
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.add_term(e.clone(), q);
        }
        Some(out)
    }

    /// Evaluates modulo a small prime at a point given in variable order.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> u64 {
        assert_eq!(point.len(), self.vars.len(), "point dimension");
        let pb = BigInt::from(p);
        let mut acc: u64 = 0;
        for (e, c) in &self.terms {
            let c: u64 = residue(c, &pb).try_into().expect("residue fits in u64");
            let mut t = c as u128;
            for (&x, &k) in point.iter().zip(e) {
                t = t * pow_mod(x, k as u64, p) as u128 % p as u128;
            }
            acc = ((acc as u128 + t) % p as u128) as u64;
        }
        acc
    }
}

pub(crate) fn pow_mod(base: u64, mut e: u64, p: u64) -> u64 {
    let mut b = (base % p) as u128;
    let m = p as u128;
    let mut acc: u128 = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

impl QPoly {
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn to_integral(&self) -> Option<ZPoly> {
        if !self.is_integral() {
            return None;
        }
        Some(self.map_coeffs(|c| c.to_integer()))
    }
}

impl<C: Coeff> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Poly::aligned(self, other);
        a.terms == b.terms
    }
}

impl<C: Coeff + Eq> Eq for Poly<C> {}

impl<C: Coeff> Zero for Poly<C> {
    fn zero() -> Self {
        Poly::new(Vec::new())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for Poly<C> {
    fn one() -> Self {
        Poly::constant(C::one())
    }
}

impl<C: Coeff> Coeff for Poly<C> {
    fn from_bigint(n: BigInt) -> Self {
        Poly::constant(C::from_bigint(n))
    }
}

impl<C: Coeff> Add<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;

    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let (a, b) = Poly::aligned(self, rhs);
        let mut out = a.into_owned();
        for (e, c) in &b.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;

    fn neg(self) -> Poly<C> {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Sub<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;

    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let (a, b) = Poly::aligned(self, rhs);
        let mut out = a.into_owned();
        for (e, c) in &b.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;

    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let (a, b) = Poly::aligned(self, rhs);
        let mut acc: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let prod = ca.clone() * cb.clone();
                match acc.get_mut(&e) {
                    Some(slot) => {
                        let s = std::mem::replace(slot, C::zero());
                        *slot = s + prod;
                    }
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly {
            vars: a.vars.clone(),
            terms: acc,
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
        impl<C: Coeff> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: &Poly<C>) -> Poly<C> {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn x() -> ZPoly {
        ZPoly::var("x")
    }

    #[test]
    fn binomial_square_coefficient() {
        let p = (ZPoly::var("X") + ZPoly::var("Y")).pow(2);
        let c = p.coefficient_of(&[("X", 1), ("Y", 1)]).unwrap();
        assert_eq!(c, ZPoly::constant(z(2)));
    }

    fn hesse() -> ZPoly {
        let (xx, yy, zz) = (ZPoly::var("X"), ZPoly::var("Y"), ZPoly::var("Z"));
        let cubes = xx.pow(3) + yy.pow(3) + zz.pow(3);
        &(&xx * &yy) * &zz + x() * cubes
    }

    #[test]
    fn coefficient_keeps_parameter() {
        let c = hesse().coefficient_of(&[("X", 1), ("Y", 1), ("Z", 1)]).unwrap();
        assert_eq!(c, ZPoly::one());
    }

    #[test]
    fn square_of_hesse_xyz_squared() {
        let p = hesse().pow(2);
        let c = p.coefficient_of(&[("X", 2), ("Y", 2), ("Z", 2)]).unwrap();
        assert_eq!(c, ZPoly::one());
        // the cubic part alone contributes no (XYZ)^2 term
        let c3 = p.coefficient_of(&[("X", 3), ("Y", 3), ("Z", 0)]).unwrap();
        assert_eq!(c3, x().pow(2).scale(&z(2)));
    }

    #[test]
    fn unknown_variable_is_rejected() {
        let err = hesse().coefficient_of(&[("W", 1)]).unwrap_err();
        assert!(matches!(err, Error::VariableMismatch(_)));
    }

    #[test]
    fn reduce_mod_examples() {
        let p = ZPoly::univariate("x", &[z(1), z(0), z(0), z(24)]);
        assert_eq!(
            p.reduce_mod(&z(5)),
            ZPoly::univariate("x", &[z(1), z(0), z(0), z(4)])
        );
        assert!(ZPoly::monomial("x", 5, z(-75000)).reduce_mod(&z(2)).is_zero());
        assert!(hesse().reduce_mod(&z(1)).is_zero());
        assert_eq!(ZPoly::constant(z(-3)).reduce_mod(&z(5)), ZPoly::constant(z(2)));
    }

    #[test]
    fn alignment_makes_order_irrelevant() {
        let a = ZPoly::var("x") + ZPoly::var("y");
        let b = ZPoly::var("y") + ZPoly::var("x");
        assert_eq!(a, b);
        assert_eq!(&a - &b, ZPoly::zero());
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn zero_terms_never_stored() {
        let p = ZPoly::from_terms(
            vec!["x".into()],
            vec![(vec![1], z(3)), (vec![1], z(-3)), (vec![0], z(0))],
        )
        .unwrap();
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn from_terms_checks_shape() {
        let err = ZPoly::from_terms(vec!["x".into()], vec![(vec![1, 2], z(1))]).unwrap_err();
        assert_eq!(err, Error::ExponentLength { expected: 1, got: 2 });
        let err = ZPoly::from_terms(vec!["x".into(), "x".into()], vec![]).unwrap_err();
        assert!(matches!(err, Error::VariableMismatch(_)));
    }

    #[test]
    fn substitution_and_evaluation() {
        // (x+1)^2 with x := y^2
        let p = (x() + ZPoly::one()).pow(2);
        let q = p.substitute("x", &ZPoly::var("y").pow(2));
        assert_eq!(q, (ZPoly::var("y").pow(2) + ZPoly::one()).pow(2));
        assert_eq!(p.eval_var("x", &z(2)), ZPoly::constant(z(9)));
        assert_eq!(p.eval_mod(&[3], 5), 1);
    }

    #[test]
    fn homogeneity() {
        let h = hesse();
        assert_eq!(h.homogeneous_degree_in(&["X", "Y", "Z"]).unwrap(), Some(3));
        let not = h.clone() + ZPoly::var("X");
        assert_eq!(not.homogeneous_degree_in(&["X", "Y", "Z"]).unwrap(), None);
    }

    #[test]
    fn rational_integrality() {
        let half = BigRational::new(z(1), z(2));
        let q = QPoly::constant(half.clone()) + QPoly::constant(half);
        assert_eq!(q.to_integral(), Some(ZPoly::one()));
        let q = QPoly::monomial("x", 2, BigRational::new(z(1), z(3)));
        assert!(!q.is_integral());
    }
}
