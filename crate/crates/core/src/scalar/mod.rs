//! Exact scalars in Q(theta) with a designated real embedding.
//!
//! A [`Scalar`] stores its coefficients in the power basis 1, theta, ...,
//! reduced modulo the minimal polynomial. Rationals embed into every field;
//! two different irrational fields never mix.

mod field;
mod text;
pub mod upoly;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use field::{field_create, rationals, FieldKind, FieldRef, FieldSpec, NumberField};
pub use text::ScalarJson;

use crate::error::{Error, Result};

/// Default starting precision of the sign oracle.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

static START_BITS: LazyLock<u32> = LazyLock::new(|| {
    std::env::var("SLP_PRECISION_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&b: &u32| b >= 8)
        .unwrap_or(DEFAULT_PRECISION_BITS)
});

#[derive(Clone)]
pub struct Scalar {
    field: FieldRef,
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn zero(field: &FieldRef) -> Self {
        Scalar { field: field.clone(), coeffs: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &FieldRef, v: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(v.into()))
    }

    pub fn from_ratio(field: &FieldRef, num: i64, den: i64) -> Self {
        Self::from_rational(field, BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(field: &FieldRef, v: BigRational) -> Self {
        let mut s = Self::zero(field);
        s.coeffs[0] = v;
        s
    }

    /// A plain rational number.
    pub fn rational(v: BigRational) -> Self {
        Self::from_rational(&rationals(), v)
    }

    pub fn int(v: i64) -> Self {
        Self::from_int(&rationals(), v)
    }

    /// The generator theta of `field`.
    pub fn generator(field: &FieldRef) -> Self {
        let mut s = Self::zero(field);
        if field.degree() == 1 {
            // theta is a rational in a degree-one field; never constructed by
            // canonical fields, kept for completeness
            s.coeffs[0] = BigRational::from_integer(-field.min_poly()[0].clone());
        } else {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    /// Builds a scalar from power-basis coefficients (reduced if needed).
    pub fn from_coeffs(field: &FieldRef, coeffs: Vec<BigRational>) -> Self {
        reduce(field, coeffs)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Re-homes a rational-valued scalar into `field`, or checks compatibility.
    pub fn coerce_to(&self, field: &FieldRef) -> Result<Scalar> {
        if Arc::ptr_eq(&self.field, field) || *self.field == **field {
            return Ok(Scalar { field: field.clone(), coeffs: self.coeffs.clone() });
        }
        match self.as_rational() {
            Some(r) => Ok(Self::from_rational(field, r.clone())),
            None => Err(mismatch(&self.field, field)),
        }
    }

    /// The common field of two operands.
    fn join(&self, other: &Scalar) -> Result<FieldRef> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(self.field.clone())
        } else if self.field.is_rational() {
            Ok(other.field.clone())
        } else if other.field.is_rational() {
            Ok(self.field.clone())
        } else {
            Err(mismatch(&self.field, &other.field))
        }
    }

    fn padded(&self, field: &FieldRef) -> Vec<BigRational> {
        let mut c = self.coeffs.clone();
        c.resize(field.degree(), BigRational::zero());
        c
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        let f = self.join(other)?;
        let mut c = self.padded(&f);
        for (a, b) in c.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(Scalar { field: f, coeffs: c })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        let f = self.join(other)?;
        let mut c = self.padded(&f);
        for (a, b) in c.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(Scalar { field: f, coeffs: c })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        let f = self.join(other)?;
        if self.coeffs.len() == 1 || other.coeffs.len() == 1 {
            let (k, v) = if self.coeffs.len() == 1 { (self, other) } else { (other, self) };
            let k = &k.coeffs[0];
            let mut c: Vec<BigRational> = v.coeffs.iter().map(|x| x * k).collect();
            c.resize(f.degree(), BigRational::zero());
            return Ok(Scalar { field: f, coeffs: c });
        }
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(reduce(&f, prod))
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.degree();
        if n == 1 {
            return Ok(Scalar { field: self.field.clone(), coeffs: vec![self.coeffs[0].recip()] });
        }
        // Solve (multiplication-by-self matrix) y = e_0 by Gaussian elimination.
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        let mut basis = Scalar::one(&self.field);
        let theta = Scalar::generator(&self.field);
        for _ in 0..n {
            cols.push(self.try_mul(&basis)?.coeffs);
            basis = basis.try_mul(&theta)?;
        }
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..n).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("field element matrix is invertible");
            a.swap(col, piv);
            let p = a[col][col].clone();
            for v in a[col].iter_mut() {
                *v /= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let k = a[r][col].clone();
                    for c in col..=n {
                        let t = &k * &a[col][c];
                        a[r][c] -= t;
                    }
                }
            }
        }
        Ok(Scalar { field: self.field.clone(), coeffs: a.into_iter().map(|row| row[n].clone()).collect() })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = Scalar::one(&self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Sign under the designated real embedding.
    pub fn sign(&self) -> i8 {
        self.sign_from(*START_BITS)
    }

    /// Sign oracle with an explicit starting precision; the answer does not
    /// depend on `start_bits`.
    pub fn sign_from(&self, start_bits: u32) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.coeffs.len() == 1 || self.as_rational().is_some() {
            return rat_sign(&self.coeffs[0]);
        }
        // Clear denominators, then evaluate with integer interval arithmetic
        // on a dyadic enclosure of theta.
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            let d = c.denom();
            if (&acc % d).is_zero() {
                acc
            } else {
                acc * d
            }
        });
        let nums: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let mut bits = start_bits.max(8);
        loop {
            let (l, h) = self.field.dyadic_root_interval(bits);
            let (a, b) = eval_dyadic(&nums, &l, &h, bits);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            bits = bits.saturating_mul(2);
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Compares values under the embedding.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Floating approximation for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        let theta = self.field.approx_generator();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * theta + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Parses the text form in `field`.
    pub fn parse(text: &str, field: &FieldRef) -> Result<Scalar> {
        text::parse(text, field)
    }
}

/// Enclosure, scaled by 2^(bits (n-1)), of sum nums[k] theta^k for
/// theta in [l, h] / 2^bits.
fn eval_dyadic(nums: &[BigInt], l: &BigInt, h: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let n = nums.len();
    let mut a = nums[n - 1].clone();
    let mut b = a.clone();
    let mut shift = 0u32;
    for c in nums[..n - 1].iter().rev() {
        let p = [&a * l, &a * h, &b * l, &b * h];
        let mn = p.iter().min().expect("four products").clone();
        let mx = p.iter().max().expect("four products").clone();
        shift += bits;
        let cs = c << shift;
        a = mn + &cs;
        b = mx + cs;
    }
    (a, b)
}

fn rat_sign(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn mismatch(a: &FieldRef, b: &FieldRef) -> Error {
    Error::FieldMismatch { left: a.tag(), right: b.tag() }
}

/// Reduces a coefficient vector modulo the (monic) minimal polynomial.
fn reduce(field: &FieldRef, mut c: Vec<BigRational>) -> Scalar {
    let n = field.degree();
    let mp = field.min_poly();
    while c.len() > n {
        let top = c.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let k = c.len() - n;
        // theta^(k+n) = -sum_{j<n} mp[j] theta^(k+j)
        for j in 0..n {
            if !mp[j].is_zero() {
                c[k + j] -= &top * BigRational::from_integer(mp[j].clone());
            }
        }
    }
    c.resize(n, BigRational::zero());
    Scalar { field: field.clone(), coeffs: c }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            return self.coeffs == other.coeffs;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Trailing zeros dropped so a rational hashes alike in every field.
        let k = self.coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |p| p + 1);
        self.coeffs[..k].hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format(self))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            /// Panics on mixed irrational fields; use the `try_` form to handle that.
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if self.coeffs.len() == rhs.coeffs.len() && *self.field == *rhs.field {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if self.coeffs.len() == rhs.coeffs.len() && *self.field == *rhs.field {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt5() -> FieldRef {
        field_create(FieldSpec::Quadratic(5)).unwrap()
    }

    #[test]
    fn golden_ratio_products() {
        let f = sqrt5();
        let phi = Scalar::parse("1/2 + 1/2*g", &f).unwrap();
        let psi = Scalar::parse("-1/2 + 1/2*g", &f).unwrap();
        assert!((&phi * &psi).is_one());
        let c5 = field_create(FieldSpec::Cosine(5)).unwrap();
        let g = Scalar::generator(&c5);
        assert_eq!(&g * &g, Scalar::parse("1 + g", &c5).unwrap());
    }

    #[test]
    fn inverse_and_division() {
        let f = sqrt5();
        assert_eq!(Scalar::from_int(&f, 2).inv().unwrap(), Scalar::from_ratio(&f, 1, 2));
        assert_eq!(Scalar::zero(&f).inv(), Err(Error::DivisionByZero));
        let x = Scalar::parse("3 - 2*g", &f).unwrap();
        assert!((&x * &x.inv().unwrap()).is_one());
        let c7 = field_create(FieldSpec::Cosine(7)).unwrap();
        let y = Scalar::parse("1 - g + 2*g^2", &c7).unwrap();
        assert!((&y * &y.inv().unwrap()).is_one());
    }

    #[test]
    fn signs() {
        let f = sqrt5();
        assert_eq!(Scalar::parse("-1/4 + 1/4*g", &f).unwrap().sign(), 1);
        assert_eq!(Scalar::zero(&f).sign(), 0);
        assert_eq!(Scalar::parse("2 - g", &f).unwrap().sign(), -1);
        // tiny but nonzero: 161/72 - sqrt5 ~ 3.9e-5
        let tiny = Scalar::parse("161/72 - g", &f).unwrap();
        assert_eq!(tiny.sign_from(8), 1);
        assert_eq!(tiny.sign_from(512), 1);
    }

    #[test]
    fn mixed_fields() {
        let f = sqrt5();
        let c7 = field_create(FieldSpec::Cosine(7)).unwrap();
        let a = Scalar::generator(&f);
        let b = Scalar::generator(&c7);
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch { .. })));
        let r = Scalar::int(3);
        assert_eq!((&a + &r).field().tag(), "Q(sqrt5)");
        assert_eq!(Scalar::from_int(&f, 3), r);
    }
}
