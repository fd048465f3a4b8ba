//! Reflection action on polynomials and BGG divided-difference operators.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::rootsystem::{deglex, RootSystem, Vector};
use crate::scalar::Scalar;

use super::poly::Polynomial;

/// Matrix of s_beta in ambient coordinates (beta given by root index).
pub fn reflection_matrix(rs: &RootSystem, idx: usize) -> Matrix {
    let n = rs.dim();
    let beta = rs.root(idx);
    let form = rs.coroot_form_of(idx);
    let mut m = Matrix::identity(rs.field(), n);
    for j in 0..n {
        for k in 0..n {
            let v = m.get(j, k) - &(&beta[j] * &form[k]);
            m.set(j, k, v);
        }
    }
    m
}

/// The linear polynomial x -> <v, x>.
pub fn linear_form(rs: &RootSystem, v: &[Scalar]) -> Polynomial {
    Polynomial::linear(rs.field(), &rs.gram().mul_vec(v))
}

/// (s_beta . f)(x) = f(s_beta x).
pub fn reflect_poly(rs: &RootSystem, idx: usize, f: &Polynomial) -> Polynomial {
    f.substitute(&reflection_matrix(rs, idx))
}

/// Action of the word s_{i1} ... s_{ik} (0-based simple indices); the last
/// letter acts first.
pub fn act(rs: &RootSystem, word: &[usize], f: &Polynomial) -> Polynomial {
    let mut g = f.clone();
    for &i in word.iter().rev() {
        g = reflect_poly(rs, rs.simple_index(i), &g);
    }
    g
}

/// A_gamma(f) = (f - s_gamma f) / gamma for a root given by index.
pub fn divided_difference(rs: &RootSystem, idx: usize, f: &Polynomial) -> Result<Polynomial> {
    let diff = f.sub(&reflect_poly(rs, idx, f));
    diff.div_linear(&rs.gram().mul_vec(rs.root(idx)))
}

/// A_{i1} o ... o A_{ik} applied to f (the last letter acts first).
pub fn bgg_apply(rs: &RootSystem, word: &[usize], f: &Polynomial) -> Result<Polynomial> {
    let mut g = f.clone();
    for &i in word.iter().rev() {
        if g.is_zero() {
            break;
        }
        g = divided_difference(rs, rs.simple_index(i), &g)?;
    }
    Ok(g)
}

/// An element of W (or of a parabolic subgroup) with a reduced word.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub word: Vec<usize>,
    /// The element applied to the regular vector used for enumeration.
    pub vector: Vector,
    pub length: usize,
}

/// Elements of the subgroup generated by `gens`, obtained as the orbit of a
/// vector with trivial stabilizer. Ordered by (length, deg-lex vector),
/// which matches the node order of the quotient poset with empty Theta.
pub fn group_elements(rs: &RootSystem, gens: &[usize], regular: &[Scalar]) -> Vec<GroupElement> {
    let orbit = rs.orbit(gens, regular);
    let mut out: Vec<GroupElement> = orbit
        .iter()
        .map(|p| GroupElement { word: p.word(&orbit), vector: p.vector.clone(), length: p.depth })
        .collect();
    out.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| deglex(&a.vector, &b.vector)));
    out
}
