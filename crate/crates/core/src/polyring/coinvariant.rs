//! Finite graded quotients S/I by exact linear algebra, the coinvariant
//! presentation, Schubert dual bases and Chevalley multiplication.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quotient::inversion_count;
use crate::rootsystem::{RootSystem, Theta, Vector};
use crate::scalar::{FieldRef, Scalar};

use super::bgg::{act, bgg_apply, group_elements, GroupElement};
use super::invariants::{fundamental_invariants, is_invariant, reynolds};
use super::poly::{monomials, Monomial, Polynomial};

#[derive(Clone, Debug)]
struct Degree {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Positions (into `monomials`) of the standard monomials.
    basis: Vec<usize>,
    /// Rows of the reduced ideal basis, with their pivot positions.
    ideal_rows: Matrix,
    pivots: Vec<usize>,
}

/// S/I for a homogeneous ideal I with finite-dimensional quotient.
///
/// In each degree the ideal is spanned by g*m over the generators g and
/// monomials m; the standard monomials are those that are not leading
/// (pivot) monomials of the reduced ideal basis in deg-lex order.
#[derive(Clone, Debug)]
pub struct GradedQuotient {
    field: FieldRef,
    nvars: usize,
    degrees: Vec<Degree>,
}

impl GradedQuotient {
    /// Builds all degrees up to the first one where the quotient vanishes.
    pub fn new(field: &FieldRef, nvars: usize, generators: &[Polynomial], max_degree: usize) -> Result<Self> {
        for g in generators {
            if !g.is_homogeneous() || g.degree().unwrap_or(0) == 0 {
                return Err(Error::Parameter("ideal generators must be homogeneous of positive degree".into()));
            }
        }
        let mut degrees = Vec::new();
        for d in 0..=max_degree {
            let mons = monomials(nvars, d);
            let index: HashMap<Monomial, usize> = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for g in generators {
                let gd = g.degree().expect("nonzero");
                if gd > d {
                    continue;
                }
                for m in monomials(nvars, d - gd) {
                    let prod = g.mul(&Polynomial::monomial(field, &m));
                    let mut row = vec![Scalar::zero(field); mons.len()];
                    for (mono, c) in prod.terms() {
                        row[index[mono]] = c.clone();
                    }
                    rows.push(row);
                }
            }
            let (ideal_rows, pivots) = if rows.is_empty() {
                (Matrix::zeros(field, 0, mons.len()), Vec::new())
            } else {
                let (r, p) = Matrix::from_rows(field, rows)?.rref();
                let keep: Vec<usize> = (0..p.len()).collect();
                let all: Vec<usize> = (0..mons.len()).collect();
                (r.select(&keep, &all), p)
            };
            let basis: Vec<usize> = (0..mons.len()).filter(|c| !pivots.contains(c)).collect();
            let empty = basis.is_empty();
            degrees.push(Degree { monomials: mons, index, basis, ideal_rows, pivots });
            if empty {
                break;
            }
        }
        Ok(GradedQuotient { field: field.clone(), nvars, degrees })
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// dim (S/I)^i for i = 0..top (trailing zero dimensions dropped).
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.degrees.iter().map(|g| g.basis.len()).collect();
        while d.last() == Some(&0) {
            d.pop();
        }
        d
    }

    pub fn top_degree(&self) -> usize {
        self.dims().len().saturating_sub(1)
    }

    pub fn dim(&self, i: usize) -> usize {
        self.degrees.get(i).map_or(0, |g| g.basis.len())
    }

    /// The k-th standard monomial of degree i.
    pub fn basis_monomial(&self, i: usize, k: usize) -> &Monomial {
        let g = &self.degrees[i];
        &g.monomials[g.basis[k]]
    }

    pub fn basis_poly(&self, i: usize, k: usize) -> Polynomial {
        Polynomial::monomial(&self.field, self.basis_monomial(i, k))
    }

    /// Polynomial with the given coordinates in degree i.
    pub fn poly_of(&self, i: usize, coords: &[Scalar]) -> Polynomial {
        let mut p = Polynomial::zero(&self.field, self.nvars);
        for (k, c) in coords.iter().enumerate() {
            p.add_term(self.basis_monomial(i, k).clone(), c.clone());
        }
        p
    }

    /// Coordinates of the class of a homogeneous polynomial of degree i.
    pub fn reduce(&self, f: &Polynomial, i: usize) -> Result<Vec<Scalar>> {
        let zero = Scalar::zero(&self.field);
        let Some(g) = self.degrees.get(i) else {
            return Ok(Vec::new());
        };
        let mut v = vec![zero.clone(); g.monomials.len()];
        for (m, c) in f.terms() {
            let pos = g
                .index
                .get(m)
                .ok_or_else(|| Error::Parameter(format!("term of degree other than {i} in reduce")))?;
            v[*pos] = c.clone();
        }
        for (r, &p) in g.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (j, x) in g.ideal_rows.row(r).iter().enumerate() {
                if !x.is_zero() {
                    v[j] = &v[j] - &(&c * x);
                }
            }
        }
        Ok(g.basis.iter().map(|&b| v[b].clone()).collect())
    }

    /// True if the homogeneous polynomial f of degree i lies in the ideal.
    pub fn in_ideal(&self, f: &Polynomial, i: usize) -> Result<bool> {
        Ok(self.reduce(f, i)?.iter().all(Scalar::is_zero))
    }

    /// Matrix of multiplication by f (homogeneous of degree k) from degree i
    /// to degree i + k.
    pub fn mul_matrix(&self, f: &Polynomial, i: usize) -> Result<Matrix> {
        let k = f.degree().unwrap_or(0);
        let cols: Vec<Vec<Scalar>> =
            (0..self.dim(i)).map(|b| self.reduce(&f.mul(&self.basis_poly(i, b)), i + k)).collect::<Result<_>>()?;
        Ok(Matrix::from_cols(&self.field, self.dim(i + k), &cols))
    }
}

/// The coinvariant ring S_W = S / (S^W)^+ S for a type with closed-form
/// invariants.
#[derive(Clone, Debug)]
pub struct CoinvariantPresentation {
    rs: RootSystem,
    invariants: Vec<Polynomial>,
    ring: GradedQuotient,
}

impl CoinvariantPresentation {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let invariants = fundamental_invariants(rs)?;
        let gens: Vec<usize> = (0..rs.rank()).collect();
        for f in &invariants {
            if !is_invariant(rs, &gens, f) {
                return Err(Error::Invariant(format!("generator {f} is not W-invariant")));
            }
        }
        let ring = GradedQuotient::new(rs.field(), rs.dim(), &invariants, rs.num_positive() + 1)?;
        let pres = CoinvariantPresentation { rs: rs.clone(), invariants, ring };
        let total: usize = pres.ring.dims().iter().sum();
        if total as u128 != rs.coxeter_type().group_order() || pres.ring.top_degree() != rs.num_positive() {
            return Err(Error::Invariant(format!(
                "coinvariant ring has dimension {total} and top degree {}",
                pres.ring.top_degree()
            )));
        }
        Ok(pres)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn invariants(&self) -> &[Polynomial] {
        &self.invariants
    }

    pub fn ring(&self) -> &GradedQuotient {
        &self.ring
    }

    pub fn dims(&self) -> Vec<usize> {
        self.ring.dims()
    }

    /// Basis of (S_W)^i as polynomials; empty above the top degree.
    pub fn basis(&self, i: usize) -> Vec<Polynomial> {
        (0..self.ring.dim(i)).map(|k| self.ring.basis_poly(i, k)).collect()
    }
}

/// Elements of W with reduced words, ordered like the nodes of the quotient
/// poset with empty Theta.
pub fn weyl_elements(rs: &RootSystem) -> Vec<GroupElement> {
    let (rho, _, _) = rs.rho_vectors(&Theta::empty()).expect("empty theta is valid");
    let gens: Vec<usize> = (0..rs.rank()).collect();
    group_elements(rs, &gens, &rho)
}

/// The Schubert classes X_w, dual to the functionals A_w-bar.
#[derive(Clone, Debug)]
pub struct SchubertDualBasis {
    pub elements: Vec<GroupElement>,
    /// Element indices of each length.
    pub by_length: Vec<Vec<usize>>,
    /// eval[i] has rows = elements of length i, cols = standard monomials:
    /// entry A_w(m). Schubert coordinates of a class are eval[i] * coords.
    pub eval: Vec<Matrix>,
    /// Columns are the coordinates of X_w in the standard basis.
    pub classes: Vec<Matrix>,
}

impl SchubertDualBasis {
    pub fn new(pres: &CoinvariantPresentation) -> Result<Self> {
        let rs = &pres.rs;
        let ring = &pres.ring;
        let elements = weyl_elements(rs);
        let top = ring.top_degree();
        let mut by_length = vec![Vec::new(); top + 1];
        for (k, e) in elements.iter().enumerate() {
            by_length[e.length].push(k);
        }
        let mut eval = Vec::new();
        let mut classes = Vec::new();
        for (i, ws) in by_length.iter().enumerate() {
            if ws.len() != ring.dim(i) {
                return Err(Error::Invariant(format!(
                    "degree {i}: {} elements of this length but dimension {}",
                    ws.len(),
                    ring.dim(i)
                )));
            }
            let mut m = Matrix::zeros(ring.field(), ws.len(), ring.dim(i));
            for (r, &w) in ws.iter().enumerate() {
                for c in 0..ring.dim(i) {
                    let v = bgg_apply(rs, &elements[w].word, &ring.basis_poly(i, c))?;
                    m.set(r, c, v.constant_term());
                }
            }
            let inv = m
                .inverse()
                .map_err(|_| Error::Invariant(format!("degree {i}: Schubert evaluation matrix is singular")))?;
            eval.push(m);
            classes.push(inv);
        }
        Ok(SchubertDualBasis { elements, by_length, eval, classes })
    }

    /// X_w as a polynomial representative.
    pub fn class_poly(&self, pres: &CoinvariantPresentation, w: usize) -> Polynomial {
        let i = self.elements[w].length;
        let pos = self.by_length[i].iter().position(|&x| x == w).expect("indexed element");
        pres.ring.poly_of(i, &self.classes[i].col(pos))
    }

    /// Schubert coordinates (over elements of length i) of a degree-i class.
    pub fn coords(&self, pres: &CoinvariantPresentation, f: &Polynomial, i: usize) -> Result<Vec<Scalar>> {
        Ok(self.eval[i].mul_vec(&pres.ring.reduce(f, i)?))
    }

    /// Matrix of multiplication by l^(j-i) from degree i to degree j, in
    /// Schubert coordinates.
    pub fn power_matrix(&self, pres: &CoinvariantPresentation, l: &Polynomial, i: usize, j: usize) -> Result<Matrix> {
        let field = pres.ring.field();
        let mut m = Matrix::identity(field, pres.ring.dim(i));
        for k in i..j {
            m = pres.ring.mul_matrix(l, k)?.mul(&m);
        }
        Ok(self.eval[j].mul(&m).mul(&self.classes[i]))
    }

    /// Checks that X_w-bar is fixed by s_alpha, alpha in Theta, modulo I for
    /// every minimal coset representative w-bar.
    pub fn theta_invariant(&self, pres: &CoinvariantPresentation, theta: &Theta) -> Result<bool> {
        let rs = &pres.rs;
        for (w, e) in self.elements.iter().enumerate() {
            if !is_minimal_rep(rs, theta, &e.word) {
                continue;
            }
            let x = self.class_poly(pres, w);
            for &a in theta.indices() {
                let diff = act(rs, &[a], &x).sub(&x);
                if !pres.ring.in_ideal(&diff, e.length)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// w is a minimal coset representative for W/W_Theta iff w(alpha) > 0 for
/// every alpha in Theta.
pub fn is_minimal_rep(rs: &RootSystem, theta: &Theta, word: &[usize]) -> bool {
    theta.indices().iter().all(|&a| {
        let v = rs.apply_word(word, &rs.simple_roots()[a]);
        rs.root_index(&v).is_some_and(|k| k < rs.num_positive())
    })
}

/// One term of a Chevalley expansion chi * X_u = sum coeff * X_v.
#[derive(Clone, Debug, PartialEq)]
pub struct ChevalleyTerm {
    pub root: usize,
    /// v(rho) for the covering element v = s_beta u.
    pub vector: Vector,
    pub coeff: Scalar,
}

/// chi * X_u = sum over covers u -> s_beta u of coroot(beta)(u(chi)) X_{s_beta u}.
pub fn chevalley_multiply(rs: &RootSystem, chi: &[Scalar], u: &GroupElement) -> Vec<ChevalleyTerm> {
    let u_chi = rs.apply_word(&u.word, chi);
    let mut out = Vec::new();
    for k in 0..rs.num_positive() {
        let v = rs.reflect(k, &u.vector);
        if inversion_count(rs, &v) != u.length + 1 {
            continue;
        }
        let coeff = rs.coroot(k, &u_chi);
        out.push(ChevalleyTerm { root: k, vector: v, coeff });
    }
    out
}

/// Coinvariant ring of the parabolic subgroup W_Theta acting on the full
/// ambient space, from Reynolds-averaged invariants.
pub fn parabolic_coinvariants(rs: &RootSystem, theta: &Theta) -> Result<GradedQuotient> {
    let (_, rho_t, _) = rs.rho_vectors(theta)?;
    let field = rs.field();
    let n = rs.dim();
    let elements = if theta.is_empty() {
        vec![GroupElement { word: Vec::new(), vector: rho_t.clone(), length: 0 }]
    } else {
        group_elements(rs, theta.indices(), &rho_t)
    };
    let max_deg = theta
        .components(&rs.coxeter_type())
        .iter()
        .filter_map(|(_, ty)| ty.map(|t| t.fundamental_degrees().into_iter().max().unwrap_or(1)))
        .max()
        .unwrap_or(1);
    let mut gens = Vec::new();
    for d in 1..=max_deg {
        for m in monomials(n, d) {
            let r = reynolds(rs, &elements, &Polynomial::monomial(field, &m));
            if !r.is_zero() {
                gens.push(r);
            }
        }
    }
    let order = elements.len();
    let ring = GradedQuotient::new(field, n, &gens, rs.theta_positive(theta).len() + 1)?;
    if ring.dims().iter().sum::<usize>() != order {
        return Err(Error::Invariant(format!("parabolic coinvariant ring does not have dimension {order}")));
    }
    Ok(ring)
}
