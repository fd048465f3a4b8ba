//! Root systems of the finite reflection groups, their reflections and
//! coroots, and the half-sums rho, rho_Theta and rho-bar.
//!
//! Crystallographic types use the usual orthonormal coordinates (A_n lives
//! in the sum-zero hyperplane of R^(n+1); E_6 and E_7 sit inside the E_8
//! coordinates). H_3, H_4 and I_2(m) are given in the basis of simple roots
//! with the Gram matrix 2 on the diagonal and -2cos(pi/m_ij) off it.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{field_create, rationals, FieldRef, FieldSpec, Scalar};

/// Ambient coordinates of a vector.
pub type Vector = Vec<Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    D,
    E,
    F,
    H,
    I2,
}

/// A connected Coxeter type. `m` is only meaningful for I_2(m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxeterType {
    pub family: Family,
    pub rank: usize,
    pub m: usize,
}

impl CoxeterType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::H => rank == 3 || rank == 4,
            Family::I2 => false,
        };
        if !ok {
            return Err(Error::Parameter(format!("no type {family:?}{rank}")));
        }
        Ok(CoxeterType { family, rank, m: 0 })
    }

    pub fn dihedral(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::Parameter(format!("I2(m) needs m >= 3, got {m}")));
        }
        Ok(CoxeterType { family: Family::I2, rank: 2, m })
    }

    /// Coxeter matrix entry m_ij for 0-based simple indices (Bourbaki numbering).
    pub fn coxeter_label(&self, i: usize, j: usize) -> usize {
        if i == j {
            return 1;
        }
        let (a, b) = (i.min(j), i.max(j));
        let n = self.rank;
        let path = |a: usize, b: usize| if b == a + 1 { 3 } else { 2 };
        match self.family {
            Family::A => path(a, b),
            Family::B => {
                if (a, b) == (n - 2, n - 1) {
                    4
                } else {
                    path(a, b)
                }
            }
            Family::D => {
                if b == n - 1 {
                    if a == n - 3 {
                        3
                    } else {
                        2
                    }
                } else {
                    path(a, b)
                }
            }
            Family::E => {
                // 1-3-4-5-6-7-8 chain with 2 attached to 4 (0-based: 0-2-3-..., 1-3)
                let adjacent = matches!((a, b), (0, 2) | (1, 3)) || (a >= 2 && b == a + 1);
                if adjacent {
                    3
                } else {
                    2
                }
            }
            Family::F => {
                if (a, b) == (1, 2) {
                    4
                } else {
                    path(a, b)
                }
            }
            Family::H => {
                if (a, b) == (0, 1) {
                    5
                } else {
                    path(a, b)
                }
            }
            Family::I2 => self.m,
        }
    }

    /// Degrees of the fundamental invariants.
    pub fn fundamental_degrees(&self) -> Vec<usize> {
        let n = self.rank;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B => (1..=n).map(|k| 2 * k).collect(),
            Family::D => {
                let mut d: Vec<usize> = (1..n).map(|k| 2 * k).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::H => {
                if n == 3 {
                    vec![2, 6, 10]
                } else {
                    vec![2, 12, 20, 30]
                }
            }
            Family::I2 => vec![2, self.m],
        }
    }

    pub fn group_order(&self) -> u128 {
        self.fundamental_degrees().iter().map(|&d| d as u128).product()
    }

    /// The field the root system is realized over.
    pub fn field(&self) -> FieldRef {
        match self.family {
            Family::H => field_create(FieldSpec::Quadratic(5)).expect("5 is square-free"),
            Family::I2 => field_create(FieldSpec::Cosine(self.m as u32)).expect("m >= 3"),
            _ => rationals(),
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::I2 => write!(f, "I2({})", self.m),
            fam => write!(f, "{:?}{}", fam, self.rank),
        }
    }
}

impl FromStr for CoxeterType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parameter(format!("cannot parse Coxeter type {s:?}"));
        if let Some(rest) = s.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            return CoxeterType::dihedral(rest.parse().map_err(|_| bad())?);
        }
        let mut chars = s.chars();
        let family = match chars.next().ok_or_else(bad)? {
            'A' => Family::A,
            'B' => Family::B,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'H' => Family::H,
            _ => return Err(bad()),
        };
        let rank = chars.as_str().parse().map_err(|_| bad())?;
        CoxeterType::new(family, rank)
    }
}

impl Serialize for CoxeterType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Identifies the type of a connected Coxeter diagram given by its labels.
/// Two-node diagrams with label 3 and 4 are reported as A_2 and B_2.
pub fn classify_connected(labels: &[Vec<usize>]) -> Option<CoxeterType> {
    let n = labels.len();
    if n == 1 {
        return CoxeterType::new(Family::A, 1).ok();
    }
    let nbrs: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| j != i && labels[i][j] > 2).collect()).collect();
    let edges: usize = nbrs.iter().map(Vec::len).sum::<usize>() / 2;
    if edges != n - 1 || nbrs.iter().any(Vec::is_empty) {
        return None;
    }
    if n == 2 {
        return match labels[0][1] {
            3 => CoxeterType::new(Family::A, 2).ok(),
            4 => CoxeterType::new(Family::B, 2).ok(),
            m => CoxeterType::dihedral(m).ok(),
        };
    }
    let heavy: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| labels[i][j] > 3)
        .map(|(i, j)| (i, j, labels[i][j]))
        .collect();
    let branch: Vec<usize> = (0..n).filter(|&i| nbrs[i].len() >= 3).collect();
    if branch.is_empty() {
        // a path; walk it from one end
        let start = (0..n).find(|&i| nbrs[i].len() == 1)?;
        let mut order = vec![start];
        while order.len() < n {
            let last = *order.last()?;
            let next = nbrs[last].iter().copied().find(|v| !order.contains(v))?;
            order.push(next);
        }
        let pos = |v: usize| order.iter().position(|&x| x == v).expect("on path");
        return match heavy.as_slice() {
            [] => CoxeterType::new(Family::A, n).ok(),
            [(i, j, 4)] => {
                let (p, q) = (pos(*i).min(pos(*j)), pos(*i).max(pos(*j)));
                if p == 0 || q == n - 1 {
                    CoxeterType::new(Family::B, n).ok()
                } else if n == 4 {
                    CoxeterType::new(Family::F, 4).ok()
                } else {
                    None
                }
            }
            [(i, j, 5)] => {
                let (p, q) = (pos(*i).min(pos(*j)), pos(*i).max(pos(*j)));
                if (p == 0 || q == n - 1) && (n == 3 || n == 4) {
                    CoxeterType::new(Family::H, n).ok()
                } else {
                    None
                }
            }
            _ => None,
        };
    }
    if branch.len() != 1 || !heavy.is_empty() || nbrs[branch[0]].len() != 3 {
        return None;
    }
    let c = branch[0];
    let mut arms: Vec<usize> = nbrs[c]
        .iter()
        .map(|&s| {
            let (mut prev, mut cur, mut len) = (c, s, 1);
            while let Some(&nx) = nbrs[cur].iter().find(|&&v| v != prev) {
                prev = cur;
                cur = nx;
                len += 1;
            }
            len
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, k] => CoxeterType::new(Family::D, k + 3).ok(),
        [1, 2, 2] => CoxeterType::new(Family::E, 6).ok(),
        [1, 2, 3] => CoxeterType::new(Family::E, 7).ok(),
        [1, 2, 4] => CoxeterType::new(Family::E, 8).ok(),
        _ => None,
    }
}

/// A subset Theta of the simple roots (0-based indices, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Theta {
    indices: Vec<usize>,
}

impl Theta {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Theta { indices }
    }

    pub fn empty() -> Self {
        Theta::default()
    }

    pub fn all(rank: usize) -> Self {
        Theta { indices: (0..rank).collect() }
    }

    /// All simple roots except `removed`.
    pub fn complement_of(rank: usize, removed: usize) -> Self {
        Theta { indices: (0..rank).filter(|&i| i != removed).collect() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Types of the connected components of Theta's diagram.
    pub fn components(&self, ty: &CoxeterType) -> Vec<(Vec<usize>, Option<CoxeterType>)> {
        let mut seen = vec![false; self.indices.len()];
        let mut out = Vec::new();
        for s in 0..self.indices.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let a = self.indices[comp[k]];
                for (t, &b) in self.indices.iter().enumerate() {
                    if !seen[t] && ty.coxeter_label(a, b) > 2 {
                        seen[t] = true;
                        comp.push(t);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            let nodes: Vec<usize> = comp.iter().map(|&t| self.indices[t]).collect();
            let labels: Vec<Vec<usize>> =
                nodes.iter().map(|&a| nodes.iter().map(|&b| ty.coxeter_label(a, b)).collect()).collect();
            out.push((nodes, classify_connected(&labels)));
        }
        out
    }

    /// Human-readable type of the subdiagram, e.g. "A1xA2", or "empty".
    pub fn type_name(&self, ty: &CoxeterType) -> String {
        if self.indices.is_empty() {
            return "empty".into();
        }
        let names: Vec<String> = self
            .components(ty)
            .iter()
            .map(|(_, t)| t.map_or_else(|| "?".to_string(), |t| t.to_string()))
            .collect();
        names.join("x")
    }
}

/// The parabolic subset used for each type in the inductive argument:
/// remove the last node for A, E, F, H, I_2 and the first node for B, D.
pub fn designated_theta(ty: &CoxeterType) -> Theta {
    let n = ty.rank;
    match ty.family {
        Family::B | Family::D => Theta::complement_of(n, 0),
        _ => Theta::complement_of(n, n - 1),
    }
}

/// A point of an orbit enumerated breadth-first under simple reflections.
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub vector: Vector,
    /// Index of the point this one was first reached from.
    pub parent: Option<usize>,
    /// Simple reflection applied to the parent (0-based).
    pub letter: Option<usize>,
    pub depth: usize,
}

impl OrbitPoint {
    /// Word w with vector = w(start): the letter followed by the parent's word.
    pub fn word(&self, orbit: &[OrbitPoint]) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.depth);
        let mut cur = Some(self);
        while let Some(p) = cur {
            match (p.letter, p.parent) {
                (Some(l), Some(par)) => {
                    word.push(l);
                    cur = Some(&orbit[par]);
                }
                _ => break,
            }
        }
        word
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: CoxeterType,
    field: FieldRef,
    dim: usize,
    gram: Matrix,
    gram_is_identity: bool,
    simple: Vec<Vector>,
    /// Positive roots first (sorted), then their negatives in the same order.
    roots: Vec<Vector>,
    npos: usize,
    /// Delta-coordinates of the positive roots.
    coords: Vec<Vec<Scalar>>,
    /// Linear forms x -> coroot(beta)(x) as coefficient vectors, per root.
    coroot_forms: Vec<Vector>,
    index: HashMap<Vector, usize>,
}

fn half(field: &FieldRef) -> Scalar {
    Scalar::from_ratio(field, 1, 2)
}

fn unit(field: &FieldRef, dim: usize, entries: &[(usize, Scalar)]) -> Vector {
    let mut v = vec![Scalar::zero(field); dim];
    for (i, x) in entries {
        v[*i] = &v[*i] + x;
    }
    v
}

fn e8_simple(q: &FieldRef) -> Vec<Vector> {
    let one = Scalar::one(q);
    let neg = -&one;
    let h = half(q);
    let mut a1 = vec![-&h; 8];
    a1[0] = h.clone();
    a1[7] = h;
    let mut out = vec![a1, unit(q, 8, &[(0, one.clone()), (1, one.clone())])];
    // alpha_{k} = e_{k-1} - e_{k-2} for k = 3..8 (1-based)
    for k in 3..=8 {
        out.push(unit(q, 8, &[(k - 2, one.clone()), (k - 3, neg.clone())]));
    }
    out
}

fn simple_roots(ty: &CoxeterType, f: &FieldRef) -> (usize, Vec<Vector>, Option<Matrix>) {
    let one = Scalar::one(f);
    let neg = -&one;
    let n = ty.rank;
    match ty.family {
        Family::A => {
            let s = (0..n).map(|i| unit(f, n + 1, &[(i, one.clone()), (i + 1, neg.clone())])).collect();
            (n + 1, s, None)
        }
        Family::B | Family::D => {
            let mut s: Vec<Vector> =
                (0..n - 1).map(|i| unit(f, n, &[(i, one.clone()), (i + 1, neg.clone())])).collect();
            s.push(if ty.family == Family::B {
                unit(f, n, &[(n - 1, one.clone())])
            } else {
                unit(f, n, &[(n - 2, one.clone()), (n - 1, one.clone())])
            });
            (n, s, None)
        }
        Family::E => {
            let mut s = e8_simple(f);
            s.truncate(n);
            (8, s, None)
        }
        Family::F => {
            let h = half(f);
            let s = vec![
                unit(f, 4, &[(1, one.clone()), (2, neg.clone())]),
                unit(f, 4, &[(2, one.clone()), (3, neg.clone())]),
                unit(f, 4, &[(3, one.clone())]),
                unit(f, 4, &[(0, h.clone()), (1, -&h), (2, -&h), (3, -&h)]),
            ];
            (4, s, None)
        }
        Family::H | Family::I2 => {
            let two_cos = |m: usize| -> Scalar {
                match m {
                    2 => Scalar::zero(f),
                    3 => one.clone(),
                    5 if ty.family == Family::H => Scalar::parse("1/2 + 1/2*g", f).expect("valid literal"),
                    _ => Scalar::generator(f),
                }
            };
            let mut g = Matrix::zeros(f, n, n);
            for i in 0..n {
                for j in 0..n {
                    let v = if i == j { Scalar::from_int(f, 2) } else { -two_cos(ty.coxeter_label(i, j)) };
                    g.set(i, j, v);
                }
            }
            let s = (0..n).map(|i| unit(f, n, &[(i, one.clone())])).collect();
            (n, s, Some(g))
        }
    }
}

impl RootSystem {
    pub fn new(ty: CoxeterType) -> Result<Self> {
        let field = ty.field();
        let (dim, simple, gram) = simple_roots(&ty, &field);
        let gram_is_identity = gram.is_none();
        let gram = gram.unwrap_or_else(|| Matrix::identity(&field, dim));
        let mut rs = RootSystem {
            ty,
            field,
            dim,
            gram,
            gram_is_identity,
            simple,
            roots: Vec::new(),
            npos: 0,
            coords: Vec::new(),
            coroot_forms: Vec::new(),
            index: HashMap::new(),
        };
        rs.close();
        Ok(rs)
    }

    /// Generates all roots by closure under simple reflections and orders them.
    fn close(&mut self) {
        let n = self.simple.len();
        let simple_forms: Vec<Vector> = self.simple.iter().map(|a| self.coroot_form(a)).collect();
        let mut seen: HashMap<Vector, ()> = HashMap::new();
        let mut all: Vec<Vector> = Vec::new();
        let mut queue: VecDeque<Vector> = VecDeque::new();
        for a in &self.simple {
            if seen.insert(a.clone(), ()).is_none() {
                all.push(a.clone());
                queue.push_back(a.clone());
            }
        }
        while let Some(v) = queue.pop_front() {
            for i in 0..n {
                let c = dot(&simple_forms[i], &v);
                let w = axpy(&v, &-c, &self.simple[i]);
                if seen.insert(w.clone(), ()).is_none() {
                    all.push(w.clone());
                    queue.push_back(w);
                }
            }
        }
        // Delta-coordinates via the Gram matrix of the simple roots.
        let mut cg = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                cg.set(i, j, self.inner(&self.simple[i], &self.simple[j]));
            }
        }
        let cg_inv = cg.inverse().expect("simple roots are independent");
        let delta = |v: &Vector| -> Vec<Scalar> {
            let b: Vec<Scalar> = self.simple.iter().map(|a| self.inner(v, a)).collect();
            cg_inv.mul_vec(&b)
        };
        let mut pos: Vec<(Vector, Vec<Scalar>)> = all
            .into_iter()
            .map(|v| {
                let c = delta(&v);
                (v, c)
            })
            .filter(|(_, c)| c.iter().all(|x| x.sign() >= 0))
            .collect();
        pos.sort_by(|a, b| deglex(&a.1, &b.1));
        self.npos = pos.len();
        self.roots = pos.iter().map(|p| p.0.clone()).chain(pos.iter().map(|p| neg(&p.0))).collect();
        self.coords = pos.into_iter().map(|p| p.1).collect();
        self.coroot_forms = self.roots.iter().map(|b| self.coroot_form(b)).collect();
        self.index = self.roots.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    }

    /// Coefficient vector c with coroot(beta)(x) = c . x.
    fn coroot_form(&self, beta: &Vector) -> Vector {
        let gb = self.gram_apply(beta);
        let nb = dot(&gb, beta);
        let k = Scalar::from_int(&self.field, 2).try_div(&nb).expect("roots are nonzero");
        gb.iter().map(|x| x * &k).collect()
    }

    fn gram_apply(&self, v: &Vector) -> Vector {
        if self.gram_is_identity {
            v.clone()
        } else {
            self.gram.mul_vec(v)
        }
    }

    pub fn coxeter_type(&self) -> CoxeterType {
        self.ty
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Vector] {
        &self.roots[..self.npos]
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn root(&self, idx: usize) -> &Vector {
        &self.roots[idx]
    }

    pub fn root_index(&self, v: &[Scalar]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Index of -beta.
    pub fn negate_index(&self, idx: usize) -> usize {
        if idx < self.npos {
            idx + self.npos
        } else {
            idx - self.npos
        }
    }

    /// Index of the i-th simple root among the roots.
    pub fn simple_index(&self, i: usize) -> usize {
        self.root_index(&self.simple[i]).expect("simple roots are roots")
    }

    /// Delta-coordinates of a root.
    pub fn simple_coords(&self, idx: usize) -> Vec<Scalar> {
        if idx < self.npos {
            self.coords[idx].clone()
        } else {
            neg(&self.coords[idx - self.npos])
        }
    }

    /// Height: the sum of the Delta-coordinates.
    pub fn height(&self, idx: usize) -> Scalar {
        sum(&self.field, &self.simple_coords(idx))
    }

    /// The positive root of largest height (last in the ordering).
    pub fn highest_root(&self) -> usize {
        self.npos - 1
    }

    pub fn inner(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        if self.gram_is_identity {
            dot(x, y)
        } else {
            dot(&self.gram.mul_vec(x), y)
        }
    }

    /// coroot(beta)(x) = 2<x, beta>/<beta, beta> for a root given by index.
    pub fn coroot(&self, idx: usize, x: &[Scalar]) -> Scalar {
        dot(&self.coroot_forms[idx], x)
    }

    /// Coroot evaluation for a root given by coordinates.
    pub fn coroot_eval(&self, beta: &[Scalar], x: &[Scalar]) -> Result<Scalar> {
        let idx = self.root_index(beta).ok_or_else(|| Error::Parameter("vector is not a root".into()))?;
        Ok(self.coroot(idx, x))
    }

    /// Coefficient vector of the linear functional coroot(beta).
    pub fn coroot_form_of(&self, idx: usize) -> &Vector {
        &self.coroot_forms[idx]
    }

    /// s_beta(x) = x - coroot(beta)(x) beta.
    pub fn reflect(&self, idx: usize, x: &[Scalar]) -> Vector {
        let c = self.coroot(idx, x);
        if c.is_zero() {
            return x.to_vec();
        }
        axpy(x, &-c, &self.roots[idx])
    }

    pub fn reflect_simple(&self, i: usize, x: &[Scalar]) -> Vector {
        self.reflect(self.simple_index(i), x)
    }

    /// Reflection through a root given by coordinates.
    pub fn reflect_by(&self, beta: &[Scalar], x: &[Scalar]) -> Result<Vector> {
        let idx = self.root_index(beta).ok_or_else(|| Error::Parameter("vector is not a root".into()))?;
        Ok(self.reflect(idx, x))
    }

    /// Applies s_{i1} s_{i2} ... s_{ik} to x (the last letter acts first).
    pub fn apply_word(&self, word: &[usize], x: &[Scalar]) -> Vector {
        let mut v = x.to_vec();
        for &i in word.iter().rev() {
            v = self.reflect_simple(i, &v);
        }
        v
    }

    /// Positive roots of the parabolic subsystem Phi_Theta.
    pub fn theta_positive(&self, theta: &Theta) -> Vec<usize> {
        (0..self.npos)
            .filter(|&k| self.coords[k].iter().enumerate().all(|(i, c)| c.is_zero() || theta.contains(i)))
            .collect()
    }

    /// Returns (rho, rho_Theta, rho-bar), checking rho = rho_Theta + rho-bar
    /// and the W_Theta-invariance of rho-bar.
    pub fn rho_vectors(&self, theta: &Theta) -> Result<(Vector, Vector, Vector)> {
        for &i in theta.indices() {
            if i >= self.rank() {
                return Err(Error::Parameter(format!("simple index {} out of range", i + 1)));
            }
        }
        let h = half(&self.field);
        let in_theta = self.theta_positive(theta);
        let mut rho = vec![Scalar::zero(&self.field); self.dim];
        let mut rho_t = rho.clone();
        for k in 0..self.npos {
            rho = add(&rho, &self.roots[k]);
            if in_theta.binary_search(&k).is_ok() {
                rho_t = add(&rho_t, &self.roots[k]);
            }
        }
        let rho = scale(&rho, &h);
        let rho_t = scale(&rho_t, &h);
        let rho_bar = sub(&rho, &rho_t);
        for &i in theta.indices() {
            if self.reflect_simple(i, &rho_bar) != rho_bar {
                return Err(Error::Invariant(format!("rho-bar not fixed by s_{}", i + 1)));
            }
        }
        Ok((rho, rho_t, rho_bar))
    }

    /// Fundamental weights omega_i in the span of the roots, with
    /// coroot(alpha_j)(omega_i) = delta_ij.
    pub fn fundamental_weights(&self) -> Vec<Vector> {
        let n = self.rank();
        let mut a = Matrix::zeros(&self.field, n, n);
        for k in 0..n {
            for j in 0..n {
                a.set(k, j, self.coroot(self.simple_index(j), &self.simple[k]));
            }
        }
        let m = a.inverse().expect("Cartan matrix is invertible");
        (0..n)
            .map(|i| {
                let mut w = vec![Scalar::zero(&self.field); self.dim];
                for k in 0..n {
                    w = axpy(&w, m.get(i, k), &self.simple[k]);
                }
                w
            })
            .collect()
    }

    /// If v = c * beta for a root beta, returns (index of beta, c) with beta positive.
    pub fn root_multiple(&self, v: &[Scalar]) -> Option<(usize, Scalar)> {
        let p = v.iter().position(|x| !x.is_zero())?;
        for k in 0..self.npos {
            let b = &self.roots[k];
            if b[p].is_zero() {
                continue;
            }
            let c = &v[p] / &b[p];
            if b.iter().zip(v).all(|(bi, vi)| &(bi * &c) == vi) {
                return Some((k, c));
            }
        }
        None
    }

    /// Breadth-first orbit of `start` under the simple reflections in `gens`.
    pub fn orbit(&self, gens: &[usize], start: &[Scalar]) -> Vec<OrbitPoint> {
        let mut pts = vec![OrbitPoint { vector: start.to_vec(), parent: None, letter: None, depth: 0 }];
        let mut seen: HashMap<Vector, usize> = HashMap::new();
        seen.insert(start.to_vec(), 0);
        let mut k = 0;
        while k < pts.len() {
            for &i in gens {
                let w = self.reflect_simple(i, &pts[k].vector);
                if !seen.contains_key(&w) {
                    seen.insert(w.clone(), pts.len());
                    let depth = pts[k].depth + 1;
                    pts.push(OrbitPoint { vector: w, parent: Some(k), letter: Some(i), depth });
                }
            }
            k += 1;
        }
        pts
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero(a.first().map_or(&rationals(), |x| x.field()));
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn scale(a: &[Scalar], k: &Scalar) -> Vector {
    a.iter().map(|x| x * k).collect()
}

/// a + k b
pub fn axpy(a: &[Scalar], k: &Scalar, b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| if y.is_zero() { x.clone() } else { x + &(k * y) }).collect()
}

pub fn sum(field: &FieldRef, a: &[Scalar]) -> Scalar {
    a.iter().fold(Scalar::zero(field), |acc, x| &acc + x)
}

/// Degree-lexicographic order: compare the coordinate sums, then entries.
pub fn deglex(a: &[Scalar], b: &[Scalar]) -> Ordering {
    let f = a.first().map_or_else(rationals, |x| x.field().clone());
    sum(&f, a).cmp_value(&sum(&f, b)).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            match x.cmp_value(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}
