//! Weighted-path Lefschetz matrices on a quotient poset.
//!
//! The (v, u) entry of the degree-i Lefschetz matrix is the sum, over all
//! directed paths u -> v from V^i to V^(r-i), of the product of the edge
//! weights. Determinants are taken exactly; path systems give the
//! Gessel-Viennot cross-check.

use std::sync::LazyLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quotient::QuotientPoset;
use crate::rootsystem::RootSystem;
use crate::scalar::Scalar;

/// Default cap on the number of path systems enumerated at one degree.
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

static PATH_CAP: LazyLock<usize> = LazyLock::new(|| {
    std::env::var("SLP_PATH_CAP").ok().and_then(|v| v.parse().ok()).filter(|&c| c > 0).unwrap_or(DEFAULT_PATH_CAP)
});

/// The configured path-system cap (`SLP_PATH_CAP`).
pub fn path_cap() -> usize {
    *PATH_CAP
}

/// A matrix whose rows and columns are labelled by node ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub matrix: Matrix,
}

/// Weighted adjacency matrix of the covers V^i -> V^(i+1) (rows V^(i+1)).
pub fn one_step_matrix(p: &QuotientPoset, i: usize) -> ScalarMatrix {
    let rows = p.layer(i + 1).to_vec();
    let cols = p.layer(i).to_vec();
    let mut m = Matrix::zeros(p.field(), rows.len(), cols.len());
    for (b, &u) in cols.iter().enumerate() {
        for e in p.out_edges(u) {
            let a = p.position(e.dst);
            let v = m.get(a, b) + &e.weight;
            m.set(a, b, v);
        }
    }
    ScalarMatrix { rows, cols, matrix: m }
}

/// Path-sum matrix from V^i to V^j (rows V^j, columns V^i).
pub fn path_matrix(p: &QuotientPoset, i: usize, j: usize) -> Result<ScalarMatrix> {
    if i > j || j > p.top_degree() {
        return Err(Error::Parameter(format!("need 0 <= i <= j <= {}, got i = {i}, j = {j}", p.top_degree())));
    }
    let cols = p.layer(i).to_vec();
    let mut m = Matrix::identity(p.field(), cols.len());
    for k in i..j {
        m = one_step_matrix(p, k).matrix.mul(&m);
    }
    Ok(ScalarMatrix { rows: p.layer(j).to_vec(), cols, matrix: m })
}

/// A family of paths from V^lo to V^hi indexed by a bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSystem {
    /// sigma[a] = position in V^hi of the endpoint of the path from the a-th source.
    pub sigma: Vec<usize>,
    /// Edge indices of each path, in order.
    pub paths: Vec<Vec<usize>>,
    pub sign: i8,
    pub weight: Scalar,
    pub vertex_disjoint: bool,
}

fn perm_sign(sigma: &[usize]) -> i8 {
    let mut inv = 0usize;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

struct Search<'a> {
    p: &'a QuotientPoset,
    hi: usize,
    vd: bool,
    cap: usize,
    steps: usize,
    sources: Vec<usize>,
    used_target: Vec<bool>,
    used_vertex: Vec<bool>,
    sigma: Vec<usize>,
    paths: Vec<Vec<usize>>,
    /// Running products of the edge weights along the current partial system.
    prefix: Vec<Scalar>,
    out: Vec<PathSystem>,
    overflow: bool,
}

impl Search<'_> {
    fn place(&mut self, k: usize) {
        if self.overflow {
            return;
        }
        if k == self.sources.len() {
            if self.out.len() >= self.cap {
                self.overflow = true;
                return;
            }
            let weight = self.prefix.last().expect("nonempty").clone();
            self.out.push(PathSystem {
                sigma: self.sigma.clone(),
                paths: self.paths.clone(),
                sign: perm_sign(&self.sigma),
                weight,
                vertex_disjoint: self.vd,
            });
            return;
        }
        let s = self.sources[k];
        if self.vd {
            self.used_vertex[s] = true;
        }
        self.paths.push(Vec::new());
        self.walk(s, k);
        self.paths.pop();
        if self.vd {
            self.used_vertex[s] = false;
        }
    }

    fn walk(&mut self, node: usize, k: usize) {
        self.steps += 1;
        if self.steps > self.cap.saturating_mul(64) {
            self.overflow = true;
        }
        if self.overflow {
            return;
        }
        if self.p.nodes()[node].degree == self.hi {
            let t = self.p.position(node);
            if !self.used_target[t] {
                self.used_target[t] = true;
                self.sigma.push(t);
                self.place(k + 1);
                self.sigma.pop();
                self.used_target[t] = false;
            }
            return;
        }
        let edges: Vec<(usize, usize)> = self
            .p
            .out_edges(node)
            .map(|e| e.dst)
            .zip(self.out_edge_indices(node))
            .collect();
        for (dst, eidx) in edges {
            if self.vd && self.used_vertex[dst] {
                continue;
            }
            if self.vd {
                self.used_vertex[dst] = true;
            }
            self.paths[k].push(eidx);
            let w = self.prefix.last().expect("nonempty") * &self.p.edges()[eidx].weight;
            self.prefix.push(w);
            self.walk(dst, k);
            self.prefix.pop();
            self.paths[k].pop();
            if self.vd {
                self.used_vertex[dst] = false;
            }
        }
    }

    fn out_edge_indices(&self, node: usize) -> Vec<usize> {
        // edges are sorted by source, so a node's out-edges are contiguous
        let edges = self.p.edges();
        let start = edges.partition_point(|e| e.src < node);
        (start..edges.len()).take_while(|&k| edges[k].src == node).collect()
    }
}

/// All (or all vertex-disjoint) path systems from V^lo to V^hi, which must
/// have equal size. Fails with an overflow error past `cap` systems.
pub fn enumerate_between(
    p: &QuotientPoset,
    lo: usize,
    hi: usize,
    vertex_disjoint: bool,
    cap: usize,
) -> Result<Vec<PathSystem>> {
    if lo > hi || hi > p.top_degree() {
        return Err(Error::Parameter(format!("bad degree range {lo}..{hi}")));
    }
    let sources = p.layer(lo).to_vec();
    if sources.len() != p.layer(hi).len() {
        return Err(Error::Precondition(format!(
            "|V^{lo}| = {} differs from |V^{hi}| = {}",
            sources.len(),
            p.layer(hi).len()
        )));
    }
    let mut s = Search {
        p,
        hi,
        vd: vertex_disjoint,
        cap,
        steps: 0,
        used_target: vec![false; sources.len()],
        used_vertex: vec![false; p.len()],
        sources,
        sigma: Vec::new(),
        paths: Vec::new(),
        prefix: vec![Scalar::one(p.field())],
        out: Vec::new(),
        overflow: false,
    };
    s.place(0);
    if s.overflow {
        return Err(Error::Overflow { degree: lo, cap });
    }
    Ok(s.out)
}

/// Path systems from V^i to V^(r-i) under the configured cap.
pub fn enumerate_path_systems(p: &QuotientPoset, i: usize, vertex_disjoint: bool) -> Result<Vec<PathSystem>> {
    if 2 * i > p.top_degree() {
        return Err(Error::Parameter(format!("degree {i} above the middle")));
    }
    enumerate_between(p, i, p.top_degree() - i, vertex_disjoint, path_cap())
}

/// Sum of sign * weight over a collection of systems.
pub fn signed_sum(p: &QuotientPoset, systems: &[PathSystem]) -> Scalar {
    systems.iter().fold(Scalar::zero(p.field()), |acc, s| if s.sign > 0 { acc + &s.weight } else { acc - &s.weight })
}

/// Sign shared by every system, if there is one.
pub fn uniform_sign(systems: &[PathSystem]) -> Option<i8> {
    let first = systems.first()?.sign;
    systems.iter().all(|s| s.sign == first).then_some(first)
}

/// Gessel-Viennot evaluation of the degree-i Lefschetz determinant.
pub fn lgv_determinant(p: &QuotientPoset, i: usize) -> Result<Scalar> {
    Ok(signed_sum(p, &enumerate_path_systems(p, i, true)?))
}

/// Determinant of the degree-i Lefschetz matrix expressed in node order.
/// The sign convention matches path systems: sigma maps source positions to
/// target positions, so the determinant is that of the path matrix.
pub fn lefschetz_det(p: &QuotientPoset, i: usize) -> Result<Scalar> {
    let m = path_matrix(p, i, p.top_degree() - i)?;
    if !m.matrix.is_square() {
        return Err(Error::Precondition(format!("degree {i}: Lefschetz matrix is not square")));
    }
    Ok(m.matrix.det())
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeVerdict {
    pub degree: usize,
    pub size: usize,
    pub det: Scalar,
    pub sign: i8,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongReport {
    pub degrees: Vec<DegreeVerdict>,
    pub pass: bool,
    pub summary: String,
}

/// Determinants of rho-bar^(r-2i): V^i -> V^(r-i) for every i <= r/2.
pub fn strong_lefschetz_report(p: &QuotientPoset) -> StrongReport {
    let r = p.top_degree();
    let mut degrees = Vec::new();
    for i in 0..=r / 2 {
        let size = p.layer(i).len();
        let (det, pass) = match lefschetz_det(p, i) {
            Ok(d) => {
                let ok = !d.is_zero();
                (d, ok)
            }
            Err(_) => (Scalar::zero(p.field()), false),
        };
        let sign = det.sign();
        degrees.push(DegreeVerdict { degree: i, size, det, sign, pass });
    }
    let failed: Vec<usize> = degrees.iter().filter(|d| !d.pass).map(|d| d.degree).collect();
    let pass = failed.is_empty();
    let summary = if pass {
        format!("strong Lefschetz holds for the candidate element at all {} degrees", degrees.len())
    } else {
        format!("candidate failed: singular at degrees {failed:?}")
    };
    StrongReport { degrees, pass, summary }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakStep {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakReport {
    pub steps: Vec<WeakStep>,
    pub pass: bool,
    pub summary: String,
}

/// Ranks of the one-step maps V^i -> V^(i+1) for 0 <= i < floor(r/2).
pub fn weak_lefschetz_report(p: &QuotientPoset) -> WeakReport {
    let r = p.top_degree();
    let steps: Vec<WeakStep> = (0..r / 2)
        .map(|i| {
            let m = one_step_matrix(p, i).matrix;
            let rank = m.rank();
            WeakStep { degree: i, rows: m.rows(), cols: m.cols(), rank, pass: rank == m.cols() }
        })
        .collect();
    let failed: Vec<usize> = steps.iter().filter(|s| !s.pass).map(|s| s.degree).collect();
    let pass = failed.is_empty();
    let summary = if pass {
        "every step below the middle is injective".to_string()
    } else {
        format!("candidate failed: non-injective steps at degrees {failed:?}")
    };
    WeakReport { steps, pass, summary }
}

/// Relabels the rows (V^(r-i)) of a degree-i matrix through the
/// antiautomorphism so both indices run over V^i.
fn fold_rows(p: &QuotientPoset, alpha: &[usize], m: &ScalarMatrix) -> Matrix {
    let order: Vec<usize> = m.cols.iter().map(|&u| p.position(alpha[u])).collect();
    let all: Vec<usize> = (0..m.matrix.cols()).collect();
    m.matrix.select(&order, &all)
}

#[derive(Clone, Debug)]
pub struct MiddleForm {
    /// Node ids of V^floor(r/2) indexing both sides of the form.
    pub nodes: Vec<usize>,
    pub matrix: Matrix,
    pub minors: Vec<Scalar>,
    pub positive_definite: bool,
    pub weak: WeakReport,
    pub strong_verdict: bool,
}

/// The middle one-step matrix, folded by the antiautomorphism into a
/// symmetric form; positive-definiteness plus the weak report decides the
/// strong property.
pub fn middle_form_reduce(p: &QuotientPoset, rs: &RootSystem) -> Result<MiddleForm> {
    let r = p.top_degree();
    if r % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "middle-form reduction needs odd top degree, this quotient has r = {r}"
        )));
    }
    let alpha = p.antiautomorphism(rs)?;
    let m = one_step_matrix(p, r / 2);
    let b = fold_rows(p, &alpha, &m);
    let minors = b.leading_minors();
    let positive_definite = b.is_symmetric() && minors.iter().all(|x| x.sign() > 0);
    let weak = weak_lefschetz_report(p);
    let strong_verdict = positive_definite && weak.pass;
    Ok(MiddleForm { nodes: m.cols, matrix: b, minors, positive_definite, weak, strong_verdict })
}

/// Whether the degree-i Lefschetz matrix is symmetric after relabelling its
/// rows through the antiautomorphism.
pub fn symmetry_check(p: &QuotientPoset, rs: &RootSystem, i: usize) -> Result<bool> {
    let alpha = p.antiautomorphism(rs)?;
    symmetry_check_with(p, &alpha, i)
}

/// As [`symmetry_check`] with a precomputed antiautomorphism.
pub fn symmetry_check_with(p: &QuotientPoset, alpha: &[usize], i: usize) -> Result<bool> {
    if 2 * i > p.top_degree() {
        return Err(Error::Parameter(format!("degree {i} above the middle")));
    }
    let m = path_matrix(p, i, p.top_degree() - i)?;
    Ok(fold_rows(p, alpha, &m).is_symmetric())
}

/// Searches for a permutation pi with a[pi(i)][pi(j)] = b[i][j].
pub fn permutation_equivalent(a: &Matrix, b: &Matrix) -> Option<Vec<usize>> {
    let n = a.rows();
    if !a.is_square() || !b.is_square() || b.rows() != n {
        return None;
    }
    fn extend(a: &Matrix, b: &Matrix, pi: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = pi.len();
        if k == a.rows() {
            return true;
        }
        for c in 0..a.rows() {
            if used[c] || a.get(c, c) != b.get(k, k) {
                continue;
            }
            let consistent = (0..k).all(|j| a.get(c, pi[j]) == b.get(k, j) && a.get(pi[j], c) == b.get(j, k));
            if consistent {
                pi.push(c);
                used[c] = true;
                if extend(a, b, pi, used) {
                    return true;
                }
                used[c] = false;
                pi.pop();
            }
        }
        false
    }
    let mut pi = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(a, b, &mut pi, &mut used).then_some(pi)
}

/// Perfect matchings of the bipartite cover graph V^(i-1) -> V^i after
/// dropping the listed upper vertices, as path systems of length one.
pub fn layer_matchings(p: &QuotientPoset, i: usize, drop_upper: &[usize]) -> Result<Vec<PathSystem>> {
    if i == 0 || i > p.top_degree() {
        return Err(Error::Parameter(format!("layer {i} has no lower neighbour")));
    }
    let lower = p.layer(i - 1).to_vec();
    let upper: Vec<usize> = p.layer(i).iter().copied().filter(|v| !drop_upper.contains(v)).collect();
    if lower.len() != upper.len() {
        return Err(Error::Precondition(format!(
            "layer {i}: {} lower vs {} upper vertices after removal",
            lower.len(),
            upper.len()
        )));
    }
    let mut out = Vec::new();
    let mut sigma = Vec::new();
    let mut chosen = Vec::new();
    let mut used = vec![false; upper.len()];
    fn rec(
        p: &QuotientPoset,
        lower: &[usize],
        upper: &[usize],
        sigma: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<PathSystem>,
    ) {
        let k = sigma.len();
        if k == lower.len() {
            let mut weight = Scalar::one(p.field());
            for &e in chosen.iter() {
                weight = &weight * &p.edges()[e].weight;
            }
            out.push(PathSystem {
                sigma: sigma.clone(),
                paths: chosen.iter().map(|&e| vec![e]).collect(),
                sign: perm_sign(sigma),
                weight,
                vertex_disjoint: true,
            });
            return;
        }
        for (idx, e) in p.edges().iter().enumerate().filter(|(_, e)| e.src == lower[k]) {
            if let Some(t) = upper.iter().position(|&v| v == e.dst) {
                if !used[t] {
                    used[t] = true;
                    sigma.push(t);
                    chosen.push(idx);
                    rec(p, lower, upper, sigma, chosen, used, out);
                    chosen.pop();
                    sigma.pop();
                    used[t] = false;
                }
            }
        }
    }
    rec(p, &lower, &upper, &mut sigma, &mut chosen, &mut used, &mut out);
    Ok(out)
}
