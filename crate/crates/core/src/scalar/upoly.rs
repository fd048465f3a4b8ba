//! Dense univariate polynomials over the rationals.
//!
//! Only what field construction needs: cyclotomic polynomials, the
//! `x + 1/x` substitution, Sturm sequences and exact evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Coefficients in ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(pub Vec<BigRational>);

impl RatPoly {
    pub fn from_ints(c: &[i64]) -> Self {
        let mut p = RatPoly(c.iter().map(|&v| BigRational::from_integer(v.into())).collect());
        p.trim();
        p
    }

    pub fn zero() -> Self {
        RatPoly(Vec::new())
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_else(BigRational::zero);
            let b = other.0.get(k).cloned().unwrap_or_else(BigRational::zero);
            out.push(a + b);
        }
        let mut p = RatPoly(out);
        p.trim();
        p
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut p = RatPoly(self.0.iter().map(|v| v * c).collect());
        p.trim();
        p
    }

    pub fn neg(&self) -> Self {
        RatPoly(self.0.iter().map(|v| -v).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = RatPoly(out);
        p.trim();
        p
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    rem[k - dd + j] -= &c * dj;
                }
                quot[k - dd] = c;
            }
            rem.pop();
        }
        let mut q = RatPoly(quot);
        q.trim();
        let mut r = RatPoly(rem);
        r.trim();
        (q, r)
    }

    pub fn derivative(&self) -> Self {
        let mut p = RatPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        );
        p.trim();
        p
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

/// The n-th cyclotomic polynomial, by dividing x^n - 1 by the lower ones.
pub fn cyclotomic(n: usize) -> RatPoly {
    assert!(n > 0);
    let mut coeffs = vec![0i64; n + 1];
    coeffs[0] = -1;
    coeffs[n] = 1;
    let mut p = RatPoly::from_ints(&coeffs);
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = p.div_rem(&cyclotomic(d));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// Rewrites a palindromic polynomial of even degree 2k in x as a degree-k
/// polynomial in y = x + 1/x, using P_j(y) = x^j + x^-j with
/// P_0 = 2, P_1 = y, P_j = y P_{j-1} - P_{j-2}.
pub fn palindromic_to_trace(p: &RatPoly) -> RatPoly {
    let deg = p.degree().expect("nonzero polynomial");
    assert!(deg % 2 == 0, "palindromic polynomial must have even degree");
    let k = deg / 2;
    let y = RatPoly::from_ints(&[0, 1]);
    let mut traces = vec![RatPoly::from_ints(&[2]), y.clone()];
    for j in 2..=k {
        let next = y.mul(&traces[j - 1]).add(&traces[j - 2].neg());
        traces.push(next);
    }
    // x^-k p(x) = c_k + sum_{j>=1} c_{k+j} (x^j + x^-j)
    let mut out = RatPoly::from_ints(&[0]).add(&RatPoly(vec![p.0[k].clone()]));
    for j in 1..=k {
        debug_assert_eq!(p.0[k + j], p.0[k - j]);
        out = out.add(&traces[j].scale(&p.0[k + j]));
    }
    out
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(p: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots in the half-open interval (lo, hi].
pub fn count_roots(seq: &[RatPoly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_changes(seq, lo) - sign_changes(seq, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), RatPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic(6), RatPoly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(10), RatPoly::from_ints(&[1, -1, 1, -1, 1]));
        assert_eq!(cyclotomic(12), RatPoly::from_ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn trace_substitution() {
        // Phi_10 -> y^2 - y - 1
        assert_eq!(palindromic_to_trace(&cyclotomic(10)), RatPoly::from_ints(&[-1, -1, 1]));
        // Phi_14 -> y^3 - y^2 - 2y + 1
        assert_eq!(palindromic_to_trace(&cyclotomic(14)), RatPoly::from_ints(&[1, -2, -1, 1]));
    }

    #[test]
    fn sturm_counts_roots() {
        let p = RatPoly::from_ints(&[-2, 0, 1]);
        let seq = sturm_sequence(&p);
        let r = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(count_roots(&seq, &r(-3), &r(3)), 2);
        assert_eq!(count_roots(&seq, &r(0), &r(3)), 1);
        assert_eq!(count_roots(&seq, &r(2), &r(3)), 0);
    }
}
