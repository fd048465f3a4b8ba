//! Sparse multivariate polynomials with number-field coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{FieldRef, Scalar};

pub type Monomial = Vec<u16>;

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldRef,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(field: &FieldRef, nvars: usize) -> Self {
        Polynomial { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let field = c.field().clone();
        let mut p = Self::zero(&field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(field: &FieldRef, exps: &[u16]) -> Self {
        let mut p = Self::zero(field, exps.len());
        p.add_term(exps.to_vec(), Scalar::one(field));
        p
    }

    /// The linear polynomial sum_j c_j x_j.
    pub fn linear(field: &FieldRef, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(field, n);
        for (j, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u16]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(&self.field))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| total(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| total(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Constant term of a polynomial (its value at the origin).
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let c = if c.field() == &self.field { c } else { c.coerce_to(&self.field).expect("coefficient field mismatch") };
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Polynomial {
        if k.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect();
        Polynomial { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Self::zero(&self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Self::constant(Scalar::one(&self.field), self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// f(M x): every variable x_j is replaced by the j-th row of M applied to x.
    pub fn substitute(&self, m: &Matrix) -> Polynomial {
        let rows: Vec<Polynomial> = (0..self.nvars).map(|j| Polynomial::linear(&self.field, m.row(j))).collect();
        let mut powers: Vec<Vec<Polynomial>> =
            rows.iter().map(|_| vec![Self::constant(Scalar::one(&self.field), self.nvars)]).collect();
        let mut out = Self::zero(&self.field, self.nvars);
        for (mono, c) in &self.terms {
            let mut term = Self::constant(c.clone(), self.nvars);
            for (j, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().expect("nonempty").mul(&rows[j]);
                    powers[j].push(next);
                }
                term = term.mul(&powers[j][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Exact quotient by a nonzero linear form; fails if the division leaves
    /// a remainder.
    pub fn div_linear(&self, form: &[Scalar]) -> Result<Polynomial> {
        let p = form.iter().position(|c| !c.is_zero()).ok_or(Error::DivisionByZero)?;
        let lead_inv = form[p].inv()?;
        let divisor = Polynomial::linear(&self.field, form);
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.field, self.nvars);
        loop {
            let top = rem.terms.keys().map(|m| m[p]).max().unwrap_or(0);
            if top == 0 {
                break;
            }
            let mut step = Self::zero(&self.field, self.nvars);
            for (m, c) in rem.terms.iter().filter(|(m, _)| m[p] == top) {
                let mut e = m.clone();
                e[p] -= 1;
                step.add_term(e, c * &lead_inv);
            }
            rem = rem.sub(&step.mul(&divisor));
            quot = quot.add(&step);
        }
        if !rem.is_zero() {
            return Err(Error::Invariant("division by a linear form left a remainder".into()));
        }
        Ok(quot)
    }
}

fn total(m: &[u16]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// All exponent vectors of total degree d in n variables, in descending
/// lexicographic order (x_1^d first).
pub fn monomials(n: usize, d: usize) -> Vec<Monomial> {
    fn rec(n: usize, d: usize, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e as u16);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", j + 1)?,
                    _ => write!(f, "*x{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
