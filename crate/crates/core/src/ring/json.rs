//! JSON encoding of polynomials and series.
//!
//! A polynomial is `{"vars": [..], "terms": [{"exp": [..], "coeff": ".."}]}`
//! with terms in ascending exponent-vector order and coefficients as decimal
//! strings (`"n/d"` for non-integral rationals).

use std::fmt::Display;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Coeff, Poly, Series};

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl<C: Coeff + Display> Serialize for Poly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars().to_vec(),
            terms: self
                .terms()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, C: Coeff + FromStr> Deserialize<'de> for Poly<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let c = t
                .coeff
                .parse::<C>()
                .map_err(|_| D::Error::custom(format!("bad coefficient '{}'", t.coeff)))?;
            terms.push((t.exp, c));
        }
        Poly::from_terms(raw.vars, terms).map_err(D::Error::custom)
    }
}

/// Serialized form of a truncated series: `{"var", "order", "coeffs"}`.
#[derive(Serialize, Deserialize)]
pub struct SeriesJson<C> {
    pub var: String,
    pub order: usize,
    pub coeffs: Vec<C>,
}

impl<C: Coeff + Serialize> Serialize for Series<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            var: self.var().to_string(),
            order: self.order(),
            coeffs: self.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de, C: Coeff + Deserialize<'de>> Deserialize<'de> for Series<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SeriesJson::<C>::deserialize(d)?;
        if raw.coeffs.len() != raw.order + 1 {
            return Err(D::Error::custom(format!(
                "series of order {} needs {} coefficients, got {}",
                raw.order,
                raw.order + 1,
                raw.coeffs.len()
            )));
        }
        Ok(Series::new(&raw.var, raw.order, raw.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, zpoly, QPoly, ZPoly};

    #[test]
    fn polynomial_schema() {
        let p = zpoly("1+4*x^3");
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"vars": ["x"], "terms": [
                {"exp": [0], "coeff": "1"}, {"exp": [3], "coeff": "4"}]})
        );
        let back: ZPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn big_and_rational_coefficients_are_strings() {
        let p = zpoly("123456789012345678901234567890*x");
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"123456789012345678901234567890\""));
        let q = parse_poly("-1/2*t").unwrap();
        let back: QPoly = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn malformed_input_rejected() {
        let bad = r#"{"vars": ["x"], "terms": [{"exp": [1, 2], "coeff": "1"}]}"#;
        assert!(serde_json::from_str::<ZPoly>(bad).is_err());
        let bad = r#"{"vars": ["x"], "terms": [{"exp": [1], "coeff": "1/2"}]}"#;
        assert!(serde_json::from_str::<ZPoly>(bad).is_err());
        let bad = r#"{"var": "t", "order": 3, "coeffs": []}"#;
        assert!(serde_json::from_str::<Series<ZPoly>>(bad).is_err());
    }
}
