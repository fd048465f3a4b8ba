//! Abstract finite graded algebras generated in degree 1, given by their
//! multiplication matrices, with Lefschetz checks, primitive decomposition
//! and tensor products.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{FieldRef, Scalar};

use super::coinvariant::GradedQuotient;
use super::poly::Polynomial;

/// A commutative graded algebra R = R^0 + ... + R^r with R^0 the field,
/// described by degree-1 generators g_a and their multiplication maps
/// R^i -> R^(i+1).
#[derive(Clone, Debug)]
pub struct GradedAlgebraPresentation {
    field: FieldRef,
    dims: Vec<usize>,
    /// gens[a][i] is multiplication by g_a from degree i to degree i + 1.
    gens: Vec<Vec<Matrix>>,
}

impl GradedAlgebraPresentation {
    pub fn new(field: &FieldRef, dims: Vec<usize>, gens: Vec<Vec<Matrix>>) -> Result<Self> {
        if dims.first() != Some(&1) {
            return Err(Error::Parameter("a graded algebra needs R^0 of dimension 1".into()));
        }
        let r = dims.len() - 1;
        for g in &gens {
            if g.len() != r {
                return Err(Error::Parameter(format!("generator has {} maps, expected {r}", g.len())));
            }
            for (i, m) in g.iter().enumerate() {
                if m.rows() != dims[i + 1] || m.cols() != dims[i] {
                    return Err(Error::Parameter(format!("generator map at degree {i} has the wrong shape")));
                }
            }
        }
        Ok(GradedAlgebraPresentation { field: field.clone(), dims, gens })
    }

    /// S/I with the variables as generators.
    pub fn from_quotient(q: &GradedQuotient) -> Result<Self> {
        let dims = q.dims();
        let r = dims.len() - 1;
        let n = q.nvars();
        let mut gens = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0u16; n];
            e[j] = 1;
            let x = Polynomial::monomial(q.field(), &e);
            gens.push((0..r).map(|i| q.mul_matrix(&x, i)).collect::<Result<Vec<_>>>()?);
        }
        Self::new(q.field(), dims, gens)
    }

    /// The truncated ring P(n) = K[X] / (X^(n+1)).
    pub fn truncated(field: &FieldRef, n: usize) -> Self {
        let gens = vec![(0..n).map(|_| Matrix::identity(field, 1)).collect()];
        GradedAlgebraPresentation { field: field.clone(), dims: vec![1; n + 1], gens }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// Multiplication by the degree-1 element sum_a w_a g_a on degree i.
    /// Zero from the top degree on.
    pub fn mul_map(&self, w: &[Scalar], i: usize) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.dim(i + 1), self.dim(i));
        if i >= self.top() {
            return m;
        }
        for (c, g) in w.iter().zip(&self.gens) {
            if !c.is_zero() {
                m = m.add(&g[i].scale(c));
            }
        }
        m
    }

    /// Multiplication by w^k from degree i to degree i + k.
    pub fn power_map(&self, w: &[Scalar], i: usize, k: usize) -> Matrix {
        let mut m = Matrix::identity(&self.field, self.dim(i));
        for s in i..i + k {
            if s >= self.top() {
                return Matrix::zeros(&self.field, self.dim(i + k), self.dim(i));
            }
            m = self.mul_map(w, s).mul(&m);
        }
        m
    }

    /// det(w^(r-2i)) : R^i -> R^(r-i) for i = 0..floor(r/2).
    pub fn lefschetz_dets(&self, w: &[Scalar]) -> Result<Vec<Scalar>> {
        let r = self.top();
        (0..=r / 2)
            .map(|i| {
                if self.dim(i) != self.dim(r - i) {
                    return Err(Error::Precondition(format!(
                        "dimensions of degrees {i} and {} differ",
                        r - i
                    )));
                }
                Ok(self.power_map(w, i, r - 2 * i).det())
            })
            .collect()
    }

    /// First degree i at which w^(r-2i) is singular, if any.
    pub fn strong_failure(&self, w: &[Scalar]) -> Result<Option<usize>> {
        Ok(self.lefschetz_dets(w)?.iter().position(Scalar::is_zero))
    }

    pub fn is_strong_lefschetz(&self, w: &[Scalar]) -> Result<bool> {
        Ok(self.strong_failure(w)?.is_none())
    }

    /// Checks that the generators commute pairwise.
    pub fn is_commutative(&self) -> bool {
        for i in 1..self.top() {
            for a in 0..self.gens.len() {
                for b in a + 1..self.gens.len() {
                    let ab = self.gens[a][i].mul(&self.gens[b][i - 1]);
                    let ba = self.gens[b][i].mul(&self.gens[a][i - 1]);
                    if ab != ba {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Bases of the primitive subspaces P^i = ker w^(r-2i+1) on R^i,
    /// i = 0..floor(r/2). Verifies that the l^j P^i span R.
    pub fn primitive_decomposition(&self, w: &[Scalar]) -> Result<Vec<Vec<Vec<Scalar>>>> {
        if let Some(i) = self.strong_failure(w)? {
            return Err(Error::Precondition(format!("not a Lefschetz element: w^(r-2i) is singular at degree {i}")));
        }
        let r = self.top();
        let prims: Vec<Vec<Vec<Scalar>>> =
            (0..=r / 2).map(|i| self.power_map(w, i, r - 2 * i + 1).kernel()).collect();
        for deg in 0..=r {
            let mut cols = Vec::new();
            for (i, p) in prims.iter().enumerate() {
                if i > deg || deg > r - i {
                    continue;
                }
                let m = self.power_map(w, i, deg - i);
                cols.extend(p.iter().map(|v| m.mul_vec(v)));
            }
            let rank = if cols.is_empty() { 0 } else { Matrix::from_cols(&self.field, self.dim(deg), &cols).rank() };
            if cols.len() != self.dim(deg) || rank != self.dim(deg) {
                return Err(Error::Invariant(format!("primitive decomposition fails to span degree {deg}")));
            }
        }
        Ok(prims)
    }

    /// U tensor V with generators (g_a tensor 1) followed by (1 tensor h_b).
    /// Degree k of the product is ordered by the U-degree i, then by
    /// (U basis index, V basis index).
    pub fn tensor(&self, other: &GradedAlgebraPresentation) -> Result<GradedAlgebraPresentation> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: format!("{:?}", self.field), right: format!("{:?}", other.field) });
        }
        let (ru, rv) = (self.top(), other.top());
        let r = ru + rv;
        let blocks = |k: usize| -> Vec<(usize, usize, usize)> {
            // (i, j, offset) for the summands U^i (x) V^j of degree k
            let mut out = Vec::new();
            let mut off = 0;
            for i in 0..=ru.min(k) {
                let j = k - i;
                if j > rv {
                    continue;
                }
                out.push((i, j, off));
                off += self.dim(i) * other.dim(j);
            }
            out
        };
        let dims: Vec<usize> =
            (0..=r).map(|k| blocks(k).iter().map(|&(i, j, _)| self.dim(i) * other.dim(j)).sum()).collect();
        let mut gens = Vec::new();
        for (side, count) in [(0usize, self.gens.len()), (1, other.gens.len())] {
            for a in 0..count {
                let mut maps = Vec::with_capacity(r);
                for k in 0..r {
                    let mut m = Matrix::zeros(&self.field, dims[k + 1], dims[k]);
                    let targets = blocks(k + 1);
                    for (i, j, off) in blocks(k) {
                        let (ti, tj, g) = if side == 0 {
                            if i >= ru {
                                continue;
                            }
                            (i + 1, j, &self.gens[a][i])
                        } else {
                            if j >= rv {
                                continue;
                            }
                            (i, j + 1, &other.gens[a][j])
                        };
                        let toff = targets.iter().find(|t| t.0 == ti && t.1 == tj).expect("target block").2;
                        let (du, dv) = (self.dim(i), other.dim(j));
                        let tdv = other.dim(tj);
                        for p in 0..du {
                            for q in 0..dv {
                                let col = off + p * dv + q;
                                if side == 0 {
                                    for p2 in 0..g.rows() {
                                        let c = g.get(p2, p);
                                        if !c.is_zero() {
                                            m.set(toff + p2 * tdv + q, col, c.clone());
                                        }
                                    }
                                } else {
                                    for q2 in 0..g.rows() {
                                        let c = g.get(q2, q);
                                        if !c.is_zero() {
                                            m.set(toff + p * tdv + q2, col, c.clone());
                                        }
                                    }
                                }
                            }
                        }
                    }
                    maps.push(m);
                }
                gens.push(maps);
            }
        }
        GradedAlgebraPresentation::new(&self.field, dims, gens)
    }
}

/// A graded algebra with a verified strong Lefschetz element.
#[derive(Clone, Debug)]
pub struct LefschetzAlgebra {
    pub algebra: GradedAlgebraPresentation,
    pub element: Vec<Scalar>,
}

impl LefschetzAlgebra {
    pub fn new(algebra: GradedAlgebraPresentation, element: Vec<Scalar>) -> Result<Self> {
        if element.len() != algebra.num_generators() {
            return Err(Error::Parameter("element length does not match the generator count".into()));
        }
        if let Some(i) = algebra.strong_failure(&element)? {
            return Err(Error::Precondition(format!("element is not strong Lefschetz at degree {i}")));
        }
        Ok(LefschetzAlgebra { algebra, element })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rationals;

    #[test]
    fn truncated_ring_has_trivial_primitives_above_zero() {
        let p = GradedAlgebraPresentation::truncated(&rationals(), 4);
        let prim = p.primitive_decomposition(&[Scalar::int(1)]).unwrap();
        assert_eq!(prim.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 0, 0]);
    }

    #[test]
    fn zero_element_is_rejected_with_degree() {
        let p = GradedAlgebraPresentation::truncated(&rationals(), 2);
        let err = p.primitive_decomposition(&[Scalar::int(0)]).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("degree 0")));
        assert!(LefschetzAlgebra::new(p, vec![Scalar::int(0)]).is_err());
    }

    #[test]
    fn tensor_of_truncations() {
        let f = rationals();
        let p1 = GradedAlgebraPresentation::truncated(&f, 1);
        let p2 = GradedAlgebraPresentation::truncated(&f, 2);
        let t = p1.tensor(&p2).unwrap();
        assert_eq!(t.dims(), &[1, 2, 2, 1]);
        assert!(t.is_commutative());
        let w = [Scalar::int(1), Scalar::int(1)];
        assert!(t.is_strong_lefschetz(&w).unwrap());
        // X alone squares to zero, so X is not Lefschetz
        assert!(!t.is_strong_lefschetz(&[Scalar::int(1), Scalar::int(0)]).unwrap());
    }

    #[test]
    fn shape_errors() {
        let f = rationals();
        assert!(GradedAlgebraPresentation::new(&f, vec![2], vec![]).is_err());
        let bad = vec![vec![Matrix::identity(&f, 2)]];
        assert!(GradedAlgebraPresentation::new(&f, vec![1, 1], bad).is_err());
    }
}
