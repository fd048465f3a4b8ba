//! Number field descriptors: Q, Q(sqrt d) and Q(2cos(pi/m)).

use std::fmt;
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::{count_roots, cyclotomic, palindromic_to_trace, sturm_sequence, RatPoly};
use crate::error::{Error, Result};

/// Bits of precision the isolating interval is refined to at construction.
const BASE_BITS: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    /// Q(sqrt d), d square-free and at least 2.
    Quadratic(u64),
    /// Q(2cos(pi/m)) whose degree is at least 3 (smaller ones are canonicalized).
    Cosine(u32),
}

/// Requested field, before canonicalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Quadratic(u64),
    Cosine(u32),
}

/// A field Q(theta) with its minimal polynomial and a designated real root.
#[derive(Debug)]
pub struct NumberField {
    kind: FieldKind,
    /// Monic, integer coefficients, ascending order.
    min_poly: Vec<BigInt>,
    /// Isolating interval of the designated root with width at most 2^-BASE_BITS.
    lo: BigRational,
    hi: BigRational,
}

pub type FieldRef = Arc<NumberField>;

static RATIONALS: LazyLock<FieldRef> = LazyLock::new(|| {
    Arc::new(NumberField {
        kind: FieldKind::Rational,
        min_poly: vec![BigInt::zero(), BigInt::one()],
        lo: BigRational::zero(),
        hi: BigRational::zero(),
    })
});

/// The shared rational field.
pub fn rationals() -> FieldRef {
    RATIONALS.clone()
}

fn is_squarefree(d: u64) -> bool {
    let mut k = 2u64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn two_pow(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Creates (and canonicalizes) a field.
pub fn field_create(spec: FieldSpec) -> Result<FieldRef> {
    match spec {
        FieldSpec::Rational => Ok(rationals()),
        FieldSpec::Quadratic(d) => {
            if d < 2 || !is_squarefree(d) {
                return Err(Error::Parameter(format!("quadratic field needs square-free d >= 2, got {d}")));
            }
            Ok(quadratic(d))
        }
        FieldSpec::Cosine(m) => {
            if m < 3 {
                return Err(Error::Parameter(format!("cosine field needs m >= 3, got {m}")));
            }
            Ok(cosine(m))
        }
    }
}

fn quadratic(d: u64) -> FieldRef {
    // floor(sqrt(d) * 2^B) / 2^B and the next dyadic above it
    let scale = two_pow(BASE_BITS);
    let n = (BigInt::from(d) * &scale * &scale).sqrt();
    let lo = BigRational::new(n.clone(), scale.clone());
    let hi = BigRational::new(n + 1, scale);
    Arc::new(NumberField {
        kind: FieldKind::Quadratic(d),
        min_poly: vec![-BigInt::from(d), BigInt::zero(), BigInt::one()],
        lo,
        hi,
    })
}

fn cosine(m: u32) -> FieldRef {
    let poly = palindromic_to_trace(&cyclotomic(2 * m as usize));
    let ints = poly.to_integers().expect("trace polynomial of a cyclotomic is integral");
    match ints.len() - 1 {
        1 => return rationals(),
        2 if ints[1].is_zero() => {
            let d = (-&ints[0]).to_u64().expect("small constant");
            return quadratic(d);
        }
        _ => {}
    }
    let approx = 2.0 * (std::f64::consts::PI / m as f64).cos();
    let (lo, hi) = isolate(&poly, approx);
    Arc::new(NumberField { kind: FieldKind::Cosine(m), min_poly: ints, lo, hi })
}

/// Isolates the root of `poly` near `approx` (which must be a simple root,
/// well separated at the scale of 1e-6) and refines it by bisection.
fn isolate(poly: &RatPoly, approx: f64) -> (BigRational, BigRational) {
    let seq = sturm_sequence(poly);
    let eps = 1e-6;
    let mut lo = BigRational::from_float(approx - eps).expect("finite");
    let mut hi = BigRational::from_float(approx + eps).expect("finite");
    assert_eq!(count_roots(&seq, &lo, &hi), 1, "root isolation failed");
    let target = BigRational::new(BigInt::one(), two_pow(BASE_BITS));
    let lo_sign = poly.eval(&lo).signum();
    while &hi - &lo > target {
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        let v = poly.eval(&mid);
        if v.is_zero() {
            return (mid.clone(), mid);
        }
        if v.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

impl NumberField {
    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.kind == FieldKind::Rational
    }

    /// Minimal polynomial, ascending integer coefficients.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    /// Tag used in text and JSON interfaces.
    pub fn tag(&self) -> String {
        match self.kind {
            FieldKind::Rational => "Q".to_string(),
            FieldKind::Quadratic(d) => format!("Q(sqrt{d})"),
            FieldKind::Cosine(m) => format!("Q(cos{m})"),
        }
    }

    /// Parses a field tag back into a field.
    pub fn from_tag(tag: &str) -> Result<FieldRef> {
        let bad = || Error::Parse { pos: 0, msg: format!("unknown field tag {tag:?}") };
        if tag == "Q" {
            return Ok(rationals());
        }
        let inner = tag.strip_prefix("Q(").and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
        if let Some(d) = inner.strip_prefix("sqrt") {
            field_create(FieldSpec::Quadratic(d.parse().map_err(|_| bad())?))
        } else if let Some(m) = inner.strip_prefix("cos") {
            field_create(FieldSpec::Cosine(m.parse().map_err(|_| bad())?))
        } else {
            Err(bad())
        }
    }

    /// Integers (l, h) with l/2^bits <= theta <= h/2^bits and h - l <= 2.
    pub(crate) fn dyadic_root_interval(&self, bits: u32) -> (BigInt, BigInt) {
        let scale = BigRational::from_integer(two_pow(bits));
        if bits <= BASE_BITS || self.lo == self.hi {
            let l = (&self.lo * &scale).floor().to_integer();
            let h = (&self.hi * &scale).ceil().to_integer();
            return (l, h);
        }
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        let target = BigRational::new(BigInt::one(), two_pow(bits));
        let two = BigRational::from_integer(2.into());
        let lo_sign = self.eval_min_poly(&lo).signum();
        while &hi - &lo > target {
            let mid = (&lo + &hi) / &two;
            let v = self.eval_min_poly(&mid);
            if v.is_zero() {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if v.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ((&lo * &scale).floor().to_integer(), (&hi * &scale).ceil().to_integer())
    }

    fn eval_min_poly(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.min_poly.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Floating approximation of the generator, for display only.
    pub fn approx_generator(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for NumberField {}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}
