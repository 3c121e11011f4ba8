//! Truncated big Witt vectors over torsion-free polynomial rings.
//!
//! A Witt vector of length `n` with coordinates `a_1..a_n` stands for the
//! power series `prod_i (1 - a_i t^i)^{-1}` modulo `t^{n+1}`; addition is
//! multiplication of these series. Products, Frobenius and multiplication
//! by integers are computed through ghost components
//! `g_k = sum_{d | k} d * a_d^{k/d}`, which turn every ring operation into an
//! entrywise one. Pulling a ghost vector back requires exact division by `k`
//! at each index; over Z and Z[x] this always succeeds for ghosts of genuine
//! Witt vectors.
//!
//! Coefficient rings with torsion cannot be represented: coordinates are
//! integer polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Series, ZPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct WittVector {
    coords: Vec<ZPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GhostVector {
    entries: Vec<ZPoly>,
}

fn divisors(k: usize) -> impl Iterator<Item = usize> {
    (1..=k).filter(move |d| k.is_multiple_of(*d))
}

/// Lazily extended table of powers `a^1, a^2, ...`.
struct Powers<'a> {
    base: &'a ZPoly,
    table: Vec<ZPoly>,
}

impl<'a> Powers<'a> {
    fn new(base: &'a ZPoly) -> Self {
        Powers {
            base,
            table: vec![ZPoly::one()],
        }
    }

    fn get(&mut self, e: usize) -> &ZPoly {
        while self.table.len() <= e {
            let next = self.table.last().unwrap() * self.base;
            self.table.push(next);
        }
        &self.table[e]
    }
}

impl WittVector {
    pub fn new(coords: Vec<ZPoly>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "Witt vector length must be at least 1".into(),
            ));
        }
        Ok(WittVector { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        WittVector::new(coords.iter().map(|&c| ZPoly::constant(BigInt::from(c))).collect())
    }

    /// Additive identity, the series 1.
    pub fn zero(n: usize) -> Self {
        WittVector {
            coords: vec![ZPoly::zero(); n.max(1)],
        }
    }

    /// Multiplicative identity `<1>`.
    pub fn one(n: usize) -> Self {
        WittVector::teichmueller(&ZPoly::one(), n)
    }

    /// Teichmueller lift `<a> = (1 - a t)^{-1}`.
    pub fn teichmueller(a: &ZPoly, n: usize) -> Self {
        let mut w = WittVector::zero(n);
        w.coords[0] = a.clone();
        w
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coords(&self) -> &[ZPoly] {
        &self.coords
    }

    /// Coordinate `a_i`, 1-based.
    pub fn coord(&self, i: usize) -> &ZPoly {
        &self.coords[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn to_ghost(&self) -> GhostVector {
        let n = self.len();
        let mut powers: Vec<Powers> = self.coords.iter().map(Powers::new).collect();
        let entries = (1..=n)
            .map(|k| {
                let mut g = ZPoly::zero();
                for d in divisors(k) {
                    let term = powers[d - 1].get(k / d);
                    if !term.is_zero() {
                        g = &g + &term.scale(&BigInt::from(d));
                    }
                }
                g
            })
            .collect();
        GhostVector { entries }
    }

    /// Series form `prod_i (1 - a_i t^i)^{-1}` through degree `n`.
    pub fn to_series(&self, var: &str) -> Series<ZPoly> {
        let n = self.len();
        let mut acc = Series::one(var, n);
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut f = vec![ZPoly::zero(); i + 2];
            f[0] = ZPoly::one();
            f[i + 1] = -a;
            let factor = Series::new(var, n, f).inverse().expect("constant term is 1");
            acc = &acc * &factor;
        }
        acc
    }

    /// Reads coordinates off a series `1 + O(t)` of order `n`.
    pub fn from_series(s: &Series<ZPoly>) -> Result<Self> {
        if *s.coeff(0) != ZPoly::one() {
            return Err(Error::NonUnitConstant);
        }
        let n = s.order();
        if n == 0 {
            return Err(Error::InvalidArgument("series must have order at least 1".into()));
        }
        // Multiplying by (1 - a_i t^i) for i < k leaves 1 + a_k t^k + O(t^{k+1}).
        let mut rest = s.clone();
        let mut coords = Vec::with_capacity(n);
        for k in 1..=n {
            let a = rest.coeff(k).clone();
            if !a.is_zero() {
                let mut f = vec![ZPoly::zero(); k + 1];
                f[0] = ZPoly::one();
                f[k] = -&a;
                rest = &rest * &Series::new(s.var(), n, f);
            }
            coords.push(a);
        }
        WittVector::new(coords)
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(())
    }

    fn from_ghost_checked(g: GhostVector, what: &str) -> Self {
        g.to_witt().unwrap_or_else(|e| {
            panic!("invariant violation: {what} produced a non-integral ghost vector ({e})")
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let (g, h) = (self.to_ghost(), other.to_ghost());
        let sum = g.entries.iter().zip(&h.entries).map(|(a, b)| a + b).collect();
        Ok(Self::from_ghost_checked(GhostVector { entries: sum }, "addition"))
    }

    pub fn neg(&self) -> Self {
        let g = self.to_ghost();
        let entries = g.entries.iter().map(|a| -a).collect();
        Self::from_ghost_checked(GhostVector { entries }, "negation")
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let (g, h) = (self.to_ghost(), other.to_ghost());
        let prod = g.entries.iter().zip(&h.entries).map(|(a, b)| a * b).collect();
        Ok(Self::from_ghost_checked(
            GhostVector { entries: prod },
            "multiplication",
        ))
    }

    /// Multiplication by the integer `m` (the image of `m` in the Witt ring).
    pub fn times(&self, m: i64) -> Self {
        let m = BigInt::from(m);
        let entries = self.to_ghost().entries.iter().map(|a| a.scale(&m)).collect();
        Self::from_ghost_checked(GhostVector { entries }, "integer multiple")
    }

    /// Frobenius `F_m`, from length `n` to length `n / m` (rounded down).
    pub fn frobenius(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("Frobenius index must be positive".into()));
        }
        self.frobenius_to(m, self.len() / m)
    }

    /// Frobenius `F_m` with explicit output length `k`; needs `len >= m * k`.
    pub fn frobenius_to(&self, m: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 || self.len() < m * k {
            return Err(Error::InsufficientLength {
                needed: m.max(1) * k.max(1),
                available: self.len(),
            });
        }
        let g = self.to_ghost();
        let entries = (1..=k).map(|j| g.entries[m * j - 1].clone()).collect();
        Ok(Self::from_ghost_checked(GhostVector { entries }, "Frobenius"))
    }

    /// Verschiebung `V_m`, from length `n` to length `m * n + m - 1`, the
    /// longest prefix determined by the input.
    pub fn verschiebung(&self, m: usize) -> Self {
        assert!(m >= 1, "Verschiebung index must be positive");
        let len = m * self.len() + m - 1;
        self.verschiebung_to(m, len).expect("maximal length is valid")
    }

    /// Verschiebung truncated to `len` coordinates; `len` may not exceed
    /// `m * n + m - 1`.
    pub fn verschiebung_to(&self, m: usize, len: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "Verschiebung index must be positive".into(),
            ));
        }
        let max = m * self.len() + m - 1;
        if len == 0 || len > max {
            return Err(Error::InsufficientLength {
                needed: len,
                available: max,
            });
        }
        let mut out = WittVector::zero(len);
        for (i, a) in self.coords.iter().enumerate() {
            let idx = m * (i + 1);
            if idx > len {
                break;
            }
            out.coords[idx - 1] = a.clone();
        }
        Ok(out)
    }

    /// Keeps the first `k` coordinates.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::InsufficientLength {
                needed: k,
                available: self.len(),
            });
        }
        Ok(WittVector {
            coords: self.coords[..k].to_vec(),
        })
    }
}

impl GhostVector {
    pub fn new(entries: Vec<ZPoly>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument(
                "ghost vector length must be at least 1".into(),
            ));
        }
        Ok(GhostVector { entries })
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        GhostVector::new(
            entries
                .iter()
                .map(|&c| ZPoly::constant(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[ZPoly] {
        &self.entries
    }

    /// Inverts the ghost map: `a_k = (g_k - sum_{d | k, d < k} d a_d^{k/d}) / k`.
    /// Fails at the first index where the division is not exact.
    pub fn to_witt(&self) -> Result<WittVector> {
        let n = self.len();
        let mut coords: Vec<ZPoly> = Vec::with_capacity(n);
        let mut tables: Vec<Vec<ZPoly>> = Vec::with_capacity(n);
        for k in 1..=n {
            let mut rest = self.entries[k - 1].clone();
            for d in divisors(k).filter(|&d| d < k) {
                let e = k / d;
                let table = &mut tables[d - 1];
                while table.len() <= e {
                    let next = table.last().unwrap() * &coords[d - 1];
                    table.push(next);
                }
                if !table[e].is_zero() {
                    rest = &rest - &table[e].scale(&BigInt::from(d));
                }
            }
            let a = rest
                .div_exact(&BigInt::from(k))
                .ok_or(Error::NotIntegral { index: k })?;
            tables.push(vec![ZPoly::one(), a.clone()]);
            coords.push(a);
        }
        WittVector::new(coords)
    }
}

#[derive(Serialize, Deserialize)]
struct WittJson {
    length: usize,
    coords: Vec<ZPoly>,
}

impl Serialize for WittVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WittJson {
            length: self.len(),
            coords: self.coords.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WittVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = WittJson::deserialize(d)?;
        if raw.length != raw.coords.len() {
            return Err(D::Error::custom(format!(
                "length {} does not match {} coordinates",
                raw.length,
                raw.coords.len()
            )));
        }
        WittVector::new(raw.coords).map_err(D::Error::custom)
    }
}

#[derive(Serialize)]
struct GhostJson<'a> {
    length: usize,
    entries: &'a [ZPoly],
}

impl Serialize for GhostVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GhostJson {
            length: self.len(),
            entries: &self.entries,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::zpoly;

    fn w(c: &[i64]) -> WittVector {
        WittVector::from_ints(c).unwrap()
    }

    fn g(c: &[i64]) -> GhostVector {
        GhostVector::from_ints(c).unwrap()
    }

    #[test]
    fn teichmueller_examples() {
        let two = WittVector::teichmueller(&zpoly("2"), 3);
        assert_eq!(two, w(&[2, 0, 0]));
        assert_eq!(two.to_ghost(), g(&[2, 4, 8]));
        assert_eq!(WittVector::teichmueller(&ZPoly::zero(), 4), WittVector::zero(4));
        let one = WittVector::teichmueller(&ZPoly::one(), 2);
        assert_eq!(one.to_series("t"), Series::new("t", 2, vec![ZPoly::one(); 3]));
    }

    #[test]
    fn ghost_examples() {
        assert_eq!(w(&[0, 0, 0]).to_ghost(), g(&[0, 0, 0]));
        assert_eq!(w(&[2, -1, -2]).to_ghost(), g(&[2, 2, 2]));
        assert_eq!(g(&[2, 2, 2]).to_witt().unwrap(), w(&[2, -1, -2]));
        let a = zpoly("a");
        let ghost = GhostVector::new(vec![a.clone(), a.pow(2), a.pow(3)]).unwrap();
        assert_eq!(ghost.to_witt().unwrap(), WittVector::teichmueller(&a, 3));
    }

    #[test]
    fn integrality_failure_names_index() {
        assert_eq!(g(&[1, 0]).to_witt().unwrap_err(), Error::NotIntegral { index: 2 });
    }

    #[test]
    fn addition_examples() {
        let one = WittVector::one(3);
        assert_eq!(one.add(&one).unwrap(), w(&[2, -1, -2]));
        let x = w(&[3, 1, -4]);
        assert_eq!(x.add(&WittVector::zero(3)).unwrap(), x);
        let ta = WittVector::teichmueller(&zpoly("a"), 5);
        assert!(ta.add(&ta.neg()).unwrap().is_zero());
        assert_eq!(
            one.add(&WittVector::one(2)).unwrap_err(),
            Error::LengthMismatch(3, 2)
        );
    }

    #[test]
    fn addition_is_series_multiplication() {
        let u = WittVector::new(vec![zpoly("x"), zpoly("1-x"), zpoly("2"), zpoly("x^2")]).unwrap();
        let v = w(&[-1, 3, 0, 5]);
        let sum = u.add(&v).unwrap();
        assert_eq!(sum.to_series("t"), &u.to_series("t") * &v.to_series("t"));
        assert_eq!(WittVector::from_series(&u.to_series("t")).unwrap(), u);
    }

    #[test]
    fn multiplication_examples() {
        let (a, b) = (zpoly("a"), zpoly("b"));
        let n = 6;
        let prod = WittVector::teichmueller(&a, n)
            .mul(&WittVector::teichmueller(&b, n))
            .unwrap();
        assert_eq!(prod, WittVector::teichmueller(&(&a * &b), n));
        let u = w(&[5, -2, 7, 1, 0, 3]);
        assert_eq!(u.mul(&WittVector::one(6)).unwrap(), u);
        let two = WittVector::one(3).add(&WittVector::one(3)).unwrap();
        let four = two.mul(&two).unwrap();
        assert_eq!(four.to_ghost(), g(&[4, 4, 4]));
        assert_eq!(four, w(&[4, -6, -20]));
    }

    #[test]
    fn frobenius_examples() {
        let a = zpoly("1+a");
        let ta = WittVector::teichmueller(&a, 12);
        for m in 1..=4 {
            let f = ta.frobenius(m).unwrap();
            assert_eq!(f, WittVector::teichmueller(&a.pow(m as u32), 12 / m));
        }
        let u = w(&[1, 2, 3, 4]);
        assert_eq!(u.frobenius(1).unwrap(), u);
        let v3 = WittVector::teichmueller(&zpoly("3"), 3).verschiebung(2);
        let f = v3.frobenius_to(2, 3).unwrap();
        assert_eq!(f.to_ghost(), g(&[6, 18, 54]));
        let t3 = WittVector::teichmueller(&zpoly("3"), 3);
        assert_eq!(f, t3.add(&t3).unwrap());
        assert!(matches!(
            u.frobenius_to(3, 2),
            Err(Error::InsufficientLength { .. })
        ));
    }

    #[test]
    fn verschiebung_examples() {
        let v = WittVector::teichmueller(&zpoly("3"), 3).verschiebung(2);
        assert_eq!(v.len(), 7);
        assert_eq!(v.coords()[..3], w(&[0, 3, 0]).coords()[..]);
        let mut f = vec![ZPoly::zero(); 3];
        f[0] = ZPoly::one();
        f[2] = zpoly("-3");
        let want = Series::new("t", 7, f).inverse().unwrap();
        assert_eq!(v.to_series("t"), want);
        let u = w(&[1, -2, 3]);
        assert_eq!(u.verschiebung(1), u);
        let ghost = WittVector::one(2).verschiebung(3).to_ghost();
        assert_eq!(ghost, g(&[0, 0, 3, 0, 0, 3, 0, 0]));
        assert!(u.verschiebung_to(2, 6).is_ok());
        assert!(u.verschiebung_to(2, 8).is_err());
    }

    #[test]
    fn truncation() {
        let u = w(&[2, -1, -2]);
        assert_eq!(u.truncate(1).unwrap(), w(&[2]));
        assert_eq!(
            u.truncate(2).unwrap().truncate(1).unwrap(),
            u.truncate(1).unwrap()
        );
        assert!(u.truncate(4).is_err());
        let v = w(&[1, 1, 0]);
        assert_eq!(
            u.add(&v).unwrap().truncate(2).unwrap(),
            u.truncate(2).unwrap().add(&v.truncate(2).unwrap()).unwrap()
        );
    }

    #[test]
    fn json_schema() {
        let u = w(&[2, -1]);
        let v = serde_json::to_value(&u).unwrap();
        assert_eq!(v["length"], 2);
        assert_eq!(v["coords"][1]["terms"][0]["coeff"], "-1");
        let back: WittVector = serde_json::from_value(v).unwrap();
        assert_eq!(back, u);
        let bad = serde_json::json!({"length": 3, "coords": []});
        assert!(serde_json::from_value::<WittVector>(bad).is_err());
    }
}
