//! Text and JSON forms of scalars.
//!
//! Text grammar: `term (("+"|"-") term)*` with `term = rational`,
//! `rational "*" "g"`, `"g"`, and for fields of degree three or more
//! `rational "*" "g^k"` / `"g^k"`. A leading minus sign is accepted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{FieldRef, NumberField, Scalar};
use crate::error::{Error, Result};

/// JSON form: `{"field": "<tag>", "coeffs": ["<rat>", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub field: String,
    pub coeffs: Vec<String>,
}

impl From<&Scalar> for ScalarJson {
    fn from(s: &Scalar) -> Self {
        ScalarJson { field: s.field.tag(), coeffs: s.coeffs.iter().map(|c| c.to_string()).collect() }
    }
}

impl TryFrom<&ScalarJson> for Scalar {
    type Error = Error;
    fn try_from(j: &ScalarJson) -> Result<Scalar> {
        let field = NumberField::from_tag(&j.field)?;
        if j.coeffs.len() != field.degree() {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("field {} needs {} coefficients, got {}", j.field, field.degree(), j.coeffs.len()),
            });
        }
        let coeffs = j.coeffs.iter().map(|c| parse_rational_str(c)).collect::<Result<Vec<_>>>()?;
        Ok(Scalar::from_coeffs(&field, coeffs))
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ScalarJson::deserialize(d)?;
        Scalar::try_from(&j).map_err(serde::de::Error::custom)
    }
}

fn parse_rational_str(s: &str) -> Result<BigRational> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    p.skip_ws();
    let neg = p.eat(b'-');
    let r = p.rational()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing characters"));
    }
    Ok(if neg { -r } else { r })
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits parse"))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num = self.uint()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.uint()?;
            if den.is_zero() {
                return Err(Error::Parse { pos: at, msg: "zero denominator".into() });
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    /// Parses `g` or `g^k`, returning the exponent.
    fn generator_power(&mut self, degree: usize) -> Result<usize> {
        self.skip_ws();
        if self.peek() != Some(b'g') {
            return Err(self.err("expected 'g'"));
        }
        if degree < 2 {
            return Err(self.err("generator used in the rational field"));
        }
        self.pos += 1;
        let mut k = 1usize;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.uint()?;
            k = e.try_into().map_err(|_| Error::Parse { pos: at, msg: "exponent too large".into() })?;
            if k == 0 || k >= degree {
                return Err(Error::Parse { pos: at, msg: format!("exponent must lie in 1..{degree}") });
            }
        }
        Ok(k)
    }

    fn term(&mut self, degree: usize) -> Result<(usize, BigRational)> {
        self.skip_ws();
        if self.peek() == Some(b'g') {
            return Ok((self.generator_power(degree)?, BigRational::one()));
        }
        let r = self.rational()?;
        if self.eat(b'*') {
            Ok((self.generator_power(degree)?, r))
        } else {
            Ok((0, r))
        }
    }
}

pub(super) fn parse(text: &str, field: &FieldRef) -> Result<Scalar> {
    let degree = field.degree();
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let mut coeffs = vec![BigRational::zero(); degree];
    let mut negate = p.eat(b'-');
    loop {
        let (k, r) = p.term(degree)?;
        if negate {
            coeffs[k] -= r;
        } else {
            coeffs[k] += r;
        }
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => negate = false,
            Some(b'-') => negate = true,
            Some(_) => return Err(p.err("expected '+' or '-'")),
        }
        p.pos += 1;
    }
    Ok(Scalar::from_coeffs(field, coeffs))
}

pub(super) fn format(s: &Scalar) -> String {
    let mut out = String::new();
    for (k, c) in s.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let gen = match k {
            0 => String::new(),
            1 => "g".to_string(),
            _ => format!("g^{k}"),
        };
        if k == 0 {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&gen);
        } else {
            out.push_str(&format!("{mag}*{gen}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{field_create, rationals, FieldSpec};

    #[test]
    fn canonical_forms() {
        let f = field_create(FieldSpec::Quadratic(5)).unwrap();
        let x = Scalar::parse("-1/4 + 1/4*g", &f).unwrap();
        assert_eq!(x.coeffs()[0], BigRational::new((-1).into(), 4.into()));
        assert_eq!(x.to_string(), "-1/4 + 1/4*g");
        assert_eq!(Scalar::parse("2/4", &rationals()).unwrap().to_string(), "1/2");
        assert!(Scalar::parse("0", &f).unwrap().is_zero());
        assert_eq!(Scalar::parse(" g - g + 3 ", &f).unwrap().to_string(), "3");
        assert_eq!(Scalar::parse("-g", &f).unwrap().to_string(), "-g");
    }

    #[test]
    fn parse_errors_carry_position() {
        let f = field_create(FieldSpec::Quadratic(5)).unwrap();
        assert_eq!(Scalar::parse("1 + x", &f), Err(Error::Parse { pos: 4, msg: "expected digits".into() }));
        assert!(matches!(Scalar::parse("1/0", &f), Err(Error::Parse { pos: 2, .. })));
        assert!(Scalar::parse("g", &rationals()).is_err());
        assert!(Scalar::parse("g^2", &f).is_err());
        assert!(Scalar::parse("", &f).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = field_create(FieldSpec::Cosine(7)).unwrap();
        let x = Scalar::parse("1/3 - 2*g^2", &f).unwrap();
        let j = ScalarJson::from(&x);
        assert_eq!(j.field, "Q(cos7)");
        assert_eq!(j.coeffs, vec!["1/3", "0", "-2"]);
        assert_eq!(Scalar::try_from(&j).unwrap(), x);
    }
}
