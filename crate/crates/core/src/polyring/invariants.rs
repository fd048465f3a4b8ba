//! Fundamental invariants in closed form, and a Reynolds-operator fallback
//! for small subgroups.

use crate::error::{Error, Result};
use crate::rootsystem::{Family, RootSystem};
use crate::scalar::Scalar;

use super::bgg::{act, linear_form, GroupElement};
use super::poly::Polynomial;

/// Homogeneous generators of S^W for the types with closed forms.
///
/// Type A uses ambient coordinates of R^(n+1), so p_1 is included; it cuts
/// the polynomial ring on R^(n+1) down to the one on the sum-zero hyperplane.
pub fn fundamental_invariants(rs: &RootSystem) -> Result<Vec<Polynomial>> {
    let ty = rs.coxeter_type();
    let field = rs.field();
    let n = rs.dim();
    let var = |j: usize| {
        let mut e = vec![0u16; n];
        e[j] = 1;
        Polynomial::monomial(field, &e)
    };
    let one = Polynomial::constant(Scalar::one(field), n);
    let gens = match ty.family {
        Family::A => (1..=n as u32)
            .map(|k| (0..n).fold(Polynomial::zero(field, n), |acc, j| acc.add(&var(j).pow(k))))
            .collect(),
        Family::B | Family::D => {
            let squares: Vec<Polynomial> = (0..n).map(|j| var(j).pow(2)).collect();
            let mut e = vec![one.clone()];
            e.resize(n + 1, Polynomial::zero(field, n));
            for sq in &squares {
                for k in (1..=n).rev() {
                    e[k] = e[k].add(&e[k - 1].mul(sq));
                }
            }
            let mut out: Vec<Polynomial> = e.into_iter().skip(1).collect();
            if ty.family == Family::D {
                out.pop();
                out.push((0..n).fold(one, |acc, j| acc.mul(&var(j))));
            }
            out
        }
        Family::I2 => {
            // <x, x> and the degree-m power sum over the orbit of omega_1.
            let gram_form = (0..n).fold(Polynomial::zero(field, n), |acc, j| {
                let mut u = vec![Scalar::zero(field); n];
                u[j] = Scalar::one(field);
                acc.add(&var(j).mul(&linear_form(rs, &u)))
            });
            let omega = &rs.fundamental_weights()[0];
            let orbit = rs.orbit(&[0, 1], omega);
            let m = ty.m as u32;
            let power_sum = orbit
                .iter()
                .fold(Polynomial::zero(field, n), |acc, p| acc.add(&linear_form(rs, &p.vector).pow(m)));
            vec![gram_form, power_sum]
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no closed-form invariants for type {ty}; use the quotient poset route"
            )))
        }
    };
    Ok(gens)
}

/// Checks that f is fixed by every simple reflection in `gens`.
pub fn is_invariant(rs: &RootSystem, gens: &[usize], f: &Polynomial) -> bool {
    gens.iter().all(|&i| &act(rs, &[i], f) == f)
}

/// Sum of w.f over the listed group elements.
pub fn reynolds(rs: &RootSystem, elements: &[GroupElement], f: &Polynomial) -> Polynomial {
    elements.iter().fold(Polynomial::zero(f.field(), f.nvars()), |acc, w| acc.add(&act(rs, &w.word, f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_are_invariant() {
        for t in ["A2", "A3", "B3", "D4", "I2(5)", "I2(6)", "I2(7)"] {
            let rs = RootSystem::new(t.parse().unwrap()).unwrap();
            let gens: Vec<usize> = (0..rs.rank()).collect();
            for f in fundamental_invariants(&rs).unwrap() {
                assert!(is_invariant(&rs, &gens, &f), "{t}: {f}");
            }
        }
    }

    #[test]
    fn exceptional_types_are_unsupported() {
        let rs = RootSystem::new("H3".parse().unwrap()).unwrap();
        assert!(matches!(fundamental_invariants(&rs), Err(Error::Unsupported(_))));
    }

    #[test]
    fn invariant_degrees_match_fundamental_degrees() {
        for t in ["B3", "D4", "I2(5)"] {
            let rs = RootSystem::new(t.parse().unwrap()).unwrap();
            let degs: Vec<usize> = fundamental_invariants(&rs).unwrap().iter().map(|f| f.degree().unwrap()).collect();
            assert_eq!(degs.iter().copied().collect::<std::collections::BTreeSet<_>>(),
                rs.coxeter_type().fundamental_degrees().into_iter().collect());
        }
    }
}
