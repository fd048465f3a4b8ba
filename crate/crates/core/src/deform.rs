//! Tensor products of truncated polynomial rings, and the deformation
//! argument producing a Lefschetz element pi(lambda) + t0 x of E from
//! Lefschetz elements of the base B and the fiber F of a fibration
//! B -> E -> F of coinvariant rings.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lefschetz::one_step_matrix;
use crate::linalg::Matrix;
use crate::polyring::{
    is_minimal_rep, parabolic_coinvariants, CoinvariantPresentation, GradedAlgebraPresentation, GradedQuotient,
    LefschetzAlgebra, SchubertDualBasis,
};
use crate::quotient::QuotientPoset;
use crate::rootsystem::{RootSystem, Theta};
use crate::scalar::{FieldRef, Scalar};

fn binom(n: usize, k: i64) -> i64 {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = (k as usize).min(n - k as usize);
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// The matrix of (X+Y)^(d-2i) : degree i -> degree d-i of P(n) (x) P(m),
/// d = n + m, in the monomial bases ordered by the power of X, written
/// with binomial entries.
pub fn binomial_matrix(field: &FieldRef, n: usize, m: usize, i: usize) -> Result<Matrix> {
    let d = n + m;
    if n > m || 2 * i > d {
        return Err(Error::Parameter(format!("need n <= m and 2i <= n + m, got n = {n}, m = {m}, i = {i}")));
    }
    let size = i.min(n) + 1;
    let mut c = Matrix::zeros(field, size, size);
    for j in 0..size {
        for k in 0..size {
            let top = if i <= n { n as i64 - i as i64 + j as i64 - k as i64 } else { j as i64 - k as i64 };
            c.set(j, k, Scalar::from_int(field, binom(d - 2 * i, top)));
        }
    }
    Ok(c)
}

#[derive(Clone, Debug)]
pub struct BinomialCheck {
    pub n: usize,
    pub m: usize,
    pub i: usize,
    pub matrix: Matrix,
    /// The same map computed by multiplying in P(n) (x) P(m).
    pub direct: Matrix,
    pub det: Scalar,
    pub agrees: bool,
    pub nonzero: bool,
}

pub fn binomial_matrix_check(n: usize, m: usize, i: usize) -> Result<BinomialCheck> {
    let field = crate::scalar::rationals();
    let matrix = binomial_matrix(&field, n, m, i)?;
    let p = GradedAlgebraPresentation::truncated(&field, n).tensor(&GradedAlgebraPresentation::truncated(&field, m))?;
    let one = Scalar::one(&field);
    let direct = p.power_map(&[one.clone(), one], i, n + m - 2 * i);
    let det = matrix.det();
    Ok(BinomialCheck { n, m, i, agrees: direct == matrix, nonzero: !det.is_zero(), matrix, direct, det })
}

/// (U (x) V, omega (x) 1 + 1 (x) nu), verified to be strong Lefschetz.
pub fn tensor_product_algebra(u: &LefschetzAlgebra, v: &LefschetzAlgebra) -> Result<LefschetzAlgebra> {
    let algebra = u.algebra.tensor(&v.algebra)?;
    let element = u.element.iter().chain(&v.element).cloned().collect();
    LefschetzAlgebra::new(algebra, element)
}

/// One element pi(X_m) x^j s(p) of the B-module basis of E.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleBasisElement {
    pub b_degree: usize,
    pub b_index: usize,
    pub prim_degree: usize,
    pub prim_index: usize,
    pub power: usize,
}

impl ModuleBasisElement {
    pub fn degree(&self) -> usize {
        self.b_degree + self.prim_degree + self.power
    }
}

/// B = relative coinvariants, E = S_W, F = S_{W_Theta} with pi: B -> E,
/// iota: E -> F, the Lefschetz elements lambda, tau, the lift x of tau,
/// and the module basis of E over B built from the primitive subspaces of F.
#[derive(Clone, Debug)]
pub struct FibrationData {
    pub rs: RootSystem,
    pub theta: Theta,
    pub coinvariants: CoinvariantPresentation,
    pub schubert: SchubertDualBasis,
    pub e: GradedAlgebraPresentation,
    /// B with the single generator lambda.
    pub b: GradedAlgebraPresentation,
    pub f_ring: GradedQuotient,
    pub f: GradedAlgebraPresentation,
    /// pi[i]: columns are X_w-bar (poset order) in the standard basis of E^i.
    pub pi: Vec<Matrix>,
    pub iota: Vec<Matrix>,
    /// section[i]: F^i -> E^i with iota o section = identity.
    pub section: Vec<Matrix>,
    /// lambda = rho-bar and x = rho_Theta as degree-1 elements of E.
    pub lambda: Vec<Scalar>,
    pub x: Vec<Scalar>,
    /// tau = rho_Theta as a degree-1 element of F.
    pub tau: Vec<Scalar>,
    pub primitives: Vec<Vec<Vec<Scalar>>>,
    /// Module basis elements grouped by degree in E.
    pub module_basis: Vec<Vec<ModuleBasisElement>>,
    /// module_matrix[D]: columns are the module basis vectors of degree D.
    pub module_matrix: Vec<Matrix>,
    pub checks: Vec<(String, bool)>,
}

fn section_of(field: &FieldRef, iota: &Matrix) -> Result<Matrix> {
    let (_, pivots) = iota.rref();
    if pivots.len() != iota.rows() {
        return Err(Error::Validation("iota is not surjective".into()));
    }
    let all: Vec<usize> = (0..iota.rows()).collect();
    let inv = iota.select(&all, &pivots).inverse()?;
    let mut s = Matrix::zeros(field, iota.cols(), iota.rows());
    for (r, &p) in pivots.iter().enumerate() {
        for c in 0..iota.rows() {
            s.set(p, c, inv.get(r, c).clone());
        }
    }
    Ok(s)
}

/// Builds and validates the fibration for (W, W_Theta) on a type with a
/// polynomial presentation.
pub fn fibration_validate(rs: &RootSystem, theta: &Theta) -> Result<FibrationData> {
    let field = rs.field().clone();
    let coinvariants = CoinvariantPresentation::new(rs)?;
    let schubert = SchubertDualBasis::new(&coinvariants)?;
    let ring = coinvariants.ring();
    let e = GradedAlgebraPresentation::from_quotient(ring)?;
    let top = e.top();
    let (_, rho_theta, rho_bar) = rs.rho_vectors(theta)?;
    let lambda = rs.gram().mul_vec(&rho_bar);
    let x = rs.gram().mul_vec(&rho_theta);
    let mut checks: Vec<(String, bool)> = Vec::new();

    // B: Schubert classes of minimal representatives, in poset node order.
    let poset = QuotientPoset::enumerate(rs, theta)?;
    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); poset.top_degree() + 1];
    for node in poset.nodes() {
        let w = schubert
            .elements
            .iter()
            .position(|g| is_minimal_rep(rs, theta, &g.word) && rs.apply_word(&g.word, &rho_bar) == node.vector)
            .ok_or_else(|| Error::Invariant("coset without a minimal representative".into()))?;
        reps[node.degree].push(w);
    }
    let pi: Vec<Matrix> = (0..=top)
        .map(|i| {
            let cols: Vec<Vec<Scalar>> = reps
                .get(i)
                .map(|ws| ws.iter().map(|&w| ring.reduce(&schubert.class_poly(&coinvariants, w), i)).collect())
                .unwrap_or_else(|| Ok(Vec::new()))?;
            Ok(Matrix::from_cols(&field, ring.dim(i), &cols))
        })
        .collect::<Result<_>>()?;
    let b_dims: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut lambda_maps = Vec::new();
    for i in 0..b_dims.len() - 1 {
        let image = e.mul_map(&lambda, i).mul(&pi[i]);
        let cols: Vec<Vec<Scalar>> = (0..b_dims[i])
            .map(|c| pi[i + 1].solve(&image.col(c)).ok_or_else(|| Error::Invariant("B is not closed under lambda".into())))
            .collect::<Result<_>>()?;
        lambda_maps.push(Matrix::from_cols(&field, b_dims[i + 1], &cols));
    }
    checks.push(("B dims match the quotient poset".into(), b_dims == poset.degree_histogram()));
    checks.push((
        "lambda on B equals the weighted cover matrices".into(),
        lambda_maps.iter().enumerate().all(|(i, m)| *m == one_step_matrix(&poset, i).matrix),
    ));
    checks.push(("Schubert classes of W^Theta are Theta-invariant".into(), schubert.theta_invariant(&coinvariants, theta)?));
    let b = GradedAlgebraPresentation::new(&field, b_dims.clone(), vec![lambda_maps])?;

    // F = S_{W_Theta} and iota.
    let f_ring = parabolic_coinvariants(rs, theta)?;
    let f = GradedAlgebraPresentation::from_quotient(&f_ring)?;
    let tau = x.clone();
    let iota: Vec<Matrix> = (0..=top)
        .map(|i| {
            let cols: Vec<Vec<Scalar>> =
                (0..ring.dim(i)).map(|k| f_ring.reduce(&ring.basis_poly(i, k), i)).collect::<Result<_>>()?;
            Ok(Matrix::from_cols(&field, f_ring.dim(i), &cols))
        })
        .collect::<Result<_>>()?;
    let section: Vec<Matrix> = iota.iter().map(|m| section_of(&field, m)).collect::<Result<_>>()?;
    let order: usize = f.dims().iter().sum();
    let theta_order = crate::polyring::group_elements(rs, theta.indices(), &rho_theta).len();
    checks.push(("rank of E over B is |W_Theta|".into(), order == theta_order));
    let conv: Vec<usize> = (0..=top)
        .map(|k| (0..=k).map(|i| b_dims.get(i).copied().unwrap_or(0) * f.dim(k - i)).sum())
        .collect();
    checks.push(("dim E = dim B * dim F per degree".into(), conv == e.dims()));

    // ker iota = B^+ E.
    let mut kernel_ok = true;
    for d in 0..=top {
        let mut cols = Vec::new();
        for (a, ws) in reps.iter().enumerate().skip(1).take_while(|(a, _)| *a <= d) {
            for &w in ws {
                let m = ring.mul_matrix(&schubert.class_poly(&coinvariants, w), d - a)?;
                cols.extend((0..m.cols()).map(|c| m.col(c)));
            }
        }
        let span = Matrix::from_cols(&field, ring.dim(d), &cols);
        let ker_dim = ring.dim(d) - iota[d].rank();
        kernel_ok &= iota[d].mul(&span).is_zero() && span.rank() == ker_dim;
    }
    checks.push(("ker iota is generated by B^+".into(), kernel_ok));

    let ftop = f.top();
    LefschetzAlgebra::new(
        GradedAlgebraPresentation::new(&field, f.dims().to_vec(), vec![(0..ftop).map(|i| f.mul_map(&tau, i)).collect()])?,
        vec![Scalar::one(&field)],
    )
    .map_err(|err| Error::Precondition(format!("tau is not Lefschetz on F: {err}")))?;
    LefschetzAlgebra::new(b.clone(), vec![Scalar::one(&field)])
        .map_err(|err| Error::Precondition(format!("lambda is not Lefschetz on B: {err}")))?;
    let primitives = f.primitive_decomposition(&tau)?;

    // Module basis pi(X_m) x^j s(p).
    let mut module_basis = vec![Vec::new(); top + 1];
    let mut module_cols: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); top + 1];
    for (a, ws) in reps.iter().enumerate() {
        for (bi, &w) in ws.iter().enumerate() {
            let xm = schubert.class_poly(&coinvariants, w);
            for (i, prims) in primitives.iter().enumerate() {
                for (k, p) in prims.iter().enumerate() {
                    let mut v = section[i].mul_vec(p);
                    for j in 0..=ftop - 2 * i {
                        if j > 0 {
                            v = e.mul_map(&x, i + j - 1).mul_vec(&v);
                        }
                        let deg = a + i + j;
                        let col = ring.mul_matrix(&xm, i + j)?.mul_vec(&v);
                        module_basis[deg].push(ModuleBasisElement {
                            b_degree: a,
                            b_index: bi,
                            prim_degree: i,
                            prim_index: k,
                            power: j,
                        });
                        module_cols[deg].push(col);
                    }
                }
            }
        }
    }
    let module_matrix: Vec<Matrix> =
        module_cols.iter().enumerate().map(|(d, cols)| Matrix::from_cols(&field, ring.dim(d), cols)).collect();
    let free = module_matrix.iter().all(|m| m.is_square() && m.rank() == m.rows());
    checks.push(("E is free over B on pi(X) x^j s(P)".into(), free));

    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
    if !failed.is_empty() {
        return Err(Error::Validation(failed.join("; ")));
    }
    Ok(FibrationData {
        rs: rs.clone(),
        theta: theta.clone(),
        coinvariants,
        schubert,
        e,
        b,
        f_ring,
        f,
        pi,
        iota,
        section,
        lambda,
        x,
        tau,
        primitives,
        module_basis,
        module_matrix,
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DkEntry {
    pub k: usize,
    /// Coefficients of D_k(t), constant term first.
    pub coeffs: Vec<Scalar>,
    pub at0: Scalar,
    pub degree_bound: usize,
    /// The determinant of the tensor product algebra B (x) F in degree k.
    pub tensor_det: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeformationReport {
    pub dk: Vec<DkEntry>,
    pub t0: u64,
    pub final_check: bool,
    /// A_0 is the shift x^j s(p) -> x^(j+1) s(p).
    pub a0_is_shift: bool,
    /// chi_t A_t chi_(1/t) = t M_x at t = 2, 3.
    pub change_of_base: bool,
    /// A_t does not depend on t.
    pub t_independent: bool,
}

struct ModuleOperators {
    /// Multiplication by x and by pi(lambda) in module coordinates, per degree.
    mx: Vec<Matrix>,
    lam: Vec<Matrix>,
    bdeg: Vec<Vec<usize>>,
}

fn module_operators(fd: &FibrationData) -> Result<ModuleOperators> {
    let top = fd.e.top();
    let inv: Vec<Matrix> = fd.module_matrix.iter().map(Matrix::inverse).collect::<Result<_>>()?;
    let conj = |w: &[Scalar], d: usize| inv[d + 1].mul(&fd.e.mul_map(w, d)).mul(&fd.module_matrix[d]);
    Ok(ModuleOperators {
        mx: (0..top).map(|d| conj(&fd.x, d)).collect(),
        lam: (0..top).map(|d| conj(&fd.lambda, d)).collect(),
        bdeg: fd.module_basis.iter().map(|l| l.iter().map(|m| m.b_degree).collect()).collect(),
    })
}

impl ModuleOperators {
    /// A_t = Phi_t M_x Phi_t^(-1) on degree d; entries are t^(deg b_r - deg b_s).
    fn a_t(&self, d: usize, t: &Scalar) -> Result<Matrix> {
        let m = &self.mx[d];
        let mut out = Matrix::zeros(m.field(), m.rows(), m.cols());
        for r in 0..m.rows() {
            for s in 0..m.cols() {
                let c = m.get(r, s);
                if c.is_zero() {
                    continue;
                }
                let (br, bs) = (self.bdeg[d + 1][r], self.bdeg[d][s]);
                if br < bs {
                    return Err(Error::Invariant("x lowers the B-degree of a module basis element".into()));
                }
                out.set(r, s, c * &t.pow((br - bs) as u32));
            }
        }
        Ok(out)
    }

    fn d_k(&self, k: usize, top: usize, t: &Scalar) -> Result<Scalar> {
        let field = self.mx.first().map_or_else(crate::scalar::rationals, |m| m.field().clone());
        let mut m = Matrix::identity(&field, self.bdeg[k].len());
        for d in k..top - k {
            m = self.lam[d].add(&self.a_t(d, t)?).mul(&m);
        }
        Ok(m.det())
    }
}

/// Newton interpolation through (t, v) at t = 0, 1, ..., returning the
/// monomial coefficients.
fn interpolate(values: &[Scalar]) -> Vec<Scalar> {
    let field = values[0].field().clone();
    let n = values.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let h = Scalar::from_int(&field, level as i64).inv().expect("nonzero");
            dd[i] = &(&dd[i] - &dd[i - 1]) * &h;
        }
    }
    // Horner on the Newton form with nodes 0..n-1.
    let mut coeffs = vec![Scalar::zero(&field)];
    for i in (0..n).rev() {
        let node = Scalar::from_int(&field, i as i64);
        let mut next = vec![Scalar::zero(&field); coeffs.len() + 1];
        for (p, c) in coeffs.iter().enumerate() {
            next[p + 1] = &next[p + 1] + c;
            next[p] = &next[p] - &(c * &node);
        }
        next[0] = &next[0] + &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Scalar::is_zero) {
        coeffs.pop();
    }
    coeffs
}

fn eval(coeffs: &[Scalar], t: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(Scalar::zero(t.field()), |acc, c| &(&acc * t) + c)
}

/// Computes every D_k(t) exactly, checks D_k(0) != 0, picks t0 and checks
/// pi(lambda) + t0 x directly on E.
pub fn deformation_scan(fd: &FibrationData) -> Result<DeformationReport> {
    let field = fd.rs.field().clone();
    let top = fd.e.top();
    let ops = module_operators(fd)?;
    let int = |v: i64| Scalar::from_int(&field, v);

    let ftop = fd.f.top();
    let mut a0_is_shift = true;
    let mut t_independent = true;
    for d in 0..top {
        let a0 = ops.a_t(d, &int(0))?;
        let (src, dst) = (&fd.module_basis[d], &fd.module_basis[d + 1]);
        for (s, el) in src.iter().enumerate() {
            for (r, tgt) in dst.iter().enumerate() {
                let shift = el.power + 1 <= ftop - 2 * el.prim_degree
                    && tgt.b_index == el.b_index
                    && tgt.b_degree == el.b_degree
                    && tgt.prim_degree == el.prim_degree
                    && tgt.prim_index == el.prim_index
                    && tgt.power == el.power + 1;
                let expect = if shift { int(1) } else { int(0) };
                a0_is_shift &= *a0.get(r, s) == expect;
                if !ops.mx[d].get(r, s).is_zero() && tgt.b_degree != el.b_degree {
                    t_independent = false;
                }
            }
        }
    }

    let mut change_of_base = true;
    for t in [2, 3] {
        let tt = int(t);
        for d in 0..top {
            let chi = |deg: usize, inv: bool| {
                let els = &fd.module_basis[deg];
                let mut m = Matrix::zeros(&field, els.len(), els.len());
                for (q, el) in els.iter().enumerate() {
                    let p = tt.pow((el.prim_degree + el.power) as u32);
                    m.set(q, q, if inv { p.inv().expect("nonzero") } else { p });
                }
                m
            };
            let lhs = chi(d + 1, false).mul(&ops.a_t(d, &tt)?).mul(&chi(d, true));
            change_of_base &= lhs == ops.mx[d].scale(&tt);
        }
    }

    let tensor = GradedAlgebraPresentation::new(
        &field,
        fd.f.dims().to_vec(),
        vec![(0..ftop).map(|i| fd.f.mul_map(&fd.tau, i)).collect()],
    )?;
    let product = fd.b.tensor(&tensor)?;
    let tensor_dets = product.lefschetz_dets(&[int(1), int(1)])?;

    let mut dk = Vec::new();
    for k in 0..=top / 2 {
        let src: usize = ops.bdeg[k].iter().sum();
        let dst: usize = ops.bdeg[top - k].iter().sum();
        let bound = dst.saturating_sub(src);
        let values: Vec<Scalar> = (0..=bound).map(|t| ops.d_k(k, top, &int(t as i64))).collect::<Result<_>>()?;
        let coeffs = interpolate(&values);
        let check_at = int(bound as i64 + 1);
        if eval(&coeffs, &check_at) != ops.d_k(k, top, &check_at)? {
            return Err(Error::Invariant(format!("D_{k} has degree above the bound {bound}")));
        }
        let at0 = coeffs[0].clone();
        if at0.is_zero() {
            return Err(Error::Invariant(format!("D_{k}(0) = 0, contradicting the tensor product lemma")));
        }
        dk.push(DkEntry { k, coeffs, at0, degree_bound: bound, tensor_det: tensor_dets[k].clone() });
    }

    let total_degree: usize = dk.iter().map(|d| d.coeffs.len() - 1).sum();
    let limit = 1 + total_degree as u64;
    let t0 = (1..=limit)
        .find(|&t| dk.iter().all(|d| !eval(&d.coeffs, &int(t as i64)).is_zero()))
        .ok_or(Error::SearchBound(limit))?;
    let element: Vec<Scalar> = fd.lambda.iter().zip(&fd.x).map(|(l, x)| l + &(x * &int(t0 as i64))).collect();
    let final_check = fd.e.is_strong_lefschetz(&element)?;
    Ok(DeformationReport { dk, t0, final_check, a0_is_shift, change_of_base, t_independent })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(3, -1), 0);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(0, 0), 1);
    }

    #[test]
    fn binomial_matrix_rejects_bad_degrees() {
        let q = crate::scalar::rationals();
        assert!(binomial_matrix(&q, 3, 2, 0).is_err());
        assert!(binomial_matrix(&q, 1, 2, 2).is_err());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let vals: Vec<Scalar> = (0..5).map(|t: i64| Scalar::int(3 - 2 * t + t * t * t)).collect();
        let c = interpolate(&vals);
        assert_eq!(c, vec![Scalar::int(3), Scalar::int(-2), Scalar::int(0), Scalar::int(1)]);
        assert_eq!(eval(&c, &Scalar::int(7)), Scalar::int(3 - 14 + 343));
    }

    #[test]
    fn a2_over_a1() {
        let rs = RootSystem::new("A2".parse().unwrap()).unwrap();
        let fd = fibration_validate(&rs, &Theta::new(vec![0])).unwrap();
        assert_eq!(fd.b.dims(), &[1, 1, 1]);
        assert_eq!(fd.f.dims(), &[1, 1]);
        assert_eq!(fd.e.dims(), &[1, 2, 2, 1]);
        let rep = deformation_scan(&fd).unwrap();
        assert!(rep.final_check && rep.a0_is_shift && rep.change_of_base);
        assert!(rep.dk.iter().all(|d| !d.at0.is_zero() && !d.tensor_det.is_zero()));
    }
}
