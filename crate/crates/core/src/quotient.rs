//! Parabolic quotients W/W_Theta as graded, edge-weighted Bruhat graphs.
//!
//! Cosets are labelled by their orbit vectors w(rho-bar): the stabilizer of
//! rho-bar is exactly W_Theta, so the orbit is in bijection with W^Theta and
//! nothing of size |W| is ever built. The length of a minimal representative
//! is the number of positive roots whose coroot is negative on its vector.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsystem::{deglex, CoxeterType, RootSystem, Theta, Vector};
use crate::scalar::{FieldRef, NumberField, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetNode {
    pub id: usize,
    pub degree: usize,
    pub vector: Vector,
    /// Witness word (0-based simple indices), leftmost letter first.
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedEdge {
    pub src: usize,
    pub dst: usize,
    /// Index of the positive root beta with s_beta(src) = dst.
    pub root: usize,
    pub weight: Scalar,
}

#[derive(Clone, Debug)]
pub struct QuotientPoset {
    ty: CoxeterType,
    theta: Theta,
    field: FieldRef,
    nodes: Vec<CosetNode>,
    edges: Vec<WeightedEdge>,
    r: usize,
    layers: Vec<Vec<usize>>,
    pos_in_layer: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

/// Number of positive roots whose coroot is negative on `v`.
pub fn inversion_count(rs: &RootSystem, v: &[Scalar]) -> usize {
    (0..rs.num_positive()).filter(|&k| rs.coroot(k, v).sign() < 0).count()
}

impl QuotientPoset {
    /// Enumerates W^Theta as the orbit of rho-bar with its weighted covers.
    pub fn enumerate(rs: &RootSystem, theta: &Theta) -> Result<Self> {
        let (_, _, rho_bar) = rs.rho_vectors(theta)?;
        Self::enumerate_from(rs, theta, &rho_bar)
    }

    /// Same construction starting from any vector whose stabilizer is W_Theta
    /// and on which every positive coroot outside Phi_Theta is positive.
    pub fn enumerate_from(rs: &RootSystem, theta: &Theta, start: &[Scalar]) -> Result<Self> {
        let gens: Vec<usize> = (0..rs.rank()).collect();
        let orbit = rs.orbit(&gens, start);
        let mut nodes: Vec<CosetNode> = orbit
            .iter()
            .map(|p| CosetNode {
                id: 0,
                degree: inversion_count(rs, &p.vector),
                vector: p.vector.clone(),
                word: p.word(&orbit),
            })
            .collect();
        nodes.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| deglex(&a.vector, &b.vector)));
        for (i, n) in nodes.iter_mut().enumerate() {
            n.id = i;
        }
        let by_vec: HashMap<&Vector, usize> = nodes.iter().map(|n| (&n.vector, n.id)).collect();
        let mut edges = Vec::new();
        for u in &nodes {
            for k in 0..rs.num_positive() {
                let c = rs.coroot(k, &u.vector);
                if c.is_zero() {
                    continue;
                }
                let w = rs.reflect(k, &u.vector);
                if let Some(&v) = by_vec.get(&w) {
                    if nodes[v].degree == u.degree + 1 {
                        edges.push(WeightedEdge { src: u.id, dst: v, root: k, weight: c });
                    }
                }
            }
        }
        edges.sort_by_key(|e| (e.src, e.root));
        Ok(Self::from_parts(rs.coxeter_type(), theta.clone(), rs.field().clone(), nodes, edges))
    }

    /// Assembles a poset from nodes (ids 0..n, sorted by degree) and edges.
    pub fn from_parts(
        ty: CoxeterType,
        theta: Theta,
        field: FieldRef,
        nodes: Vec<CosetNode>,
        edges: Vec<WeightedEdge>,
    ) -> Self {
        let r = nodes.iter().map(|n| n.degree).max().unwrap_or(0);
        let mut layers = vec![Vec::new(); r + 1];
        let mut pos_in_layer = vec![0; nodes.len()];
        for n in &nodes {
            pos_in_layer[n.id] = layers[n.degree].len();
            layers[n.degree].push(n.id);
        }
        let mut out_edges = vec![Vec::new(); nodes.len()];
        let mut in_edges = vec![Vec::new(); nodes.len()];
        for (k, e) in edges.iter().enumerate() {
            out_edges[e.src].push(k);
            in_edges[e.dst].push(k);
        }
        QuotientPoset { ty, theta, field, nodes, edges, r, layers, pos_in_layer, out_edges, in_edges }
    }

    pub fn coxeter_type(&self) -> CoxeterType {
        self.ty
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn nodes(&self) -> &[CosetNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Top degree r.
    pub fn top_degree(&self) -> usize {
        self.r
    }

    /// Node ids of V^i.
    pub fn layer(&self, i: usize) -> &[usize] {
        self.layers.get(i).map_or(&[], Vec::as_slice)
    }

    /// Position of a node inside its layer.
    pub fn position(&self, id: usize) -> usize {
        self.pos_in_layer[id]
    }

    pub fn out_edges(&self, id: usize) -> impl Iterator<Item = &WeightedEdge> {
        self.out_edges[id].iter().map(|&k| &self.edges[k])
    }

    pub fn in_edges(&self, id: usize) -> impl Iterator<Item = &WeightedEdge> {
        self.in_edges[id].iter().map(|&k| &self.edges[k])
    }

    /// |V^i| for i = 0..=r.
    pub fn degree_histogram(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// A copy with every vector and weight multiplied by `k` (a rescaled
    /// Lefschetz element; the cover graph is unchanged).
    pub fn rescaled(&self, k: &Scalar) -> QuotientPoset {
        let mut p = self.clone();
        for n in &mut p.nodes {
            n.vector = n.vector.iter().map(|x| x * k).collect();
        }
        for e in &mut p.edges {
            e.weight = &e.weight * k;
        }
        p
    }

    /// Replaces the weight of one edge (negative controls in tests).
    pub fn with_edge_weight(&self, edge: usize, w: Scalar) -> QuotientPoset {
        let mut p = self.clone();
        p.edges[edge].weight = w;
        p
    }

    /// Word for the longest element w0: descend from rho to -rho, one simple
    /// reflection at a time. Letters are listed in the order they act.
    pub fn longest_word(rs: &RootSystem) -> Vec<usize> {
        let (rho, _, _) = rs.rho_vectors(&Theta::empty()).expect("empty theta is valid");
        let mut x = rho;
        let mut word = Vec::new();
        while let Some(i) = (0..rs.rank()).find(|&i| rs.coroot(rs.simple_index(i), &x).sign() > 0) {
            x = rs.reflect_simple(i, &x);
            word.push(i);
        }
        word
    }

    /// The involution v -> w0(v) on node ids; maps V^i onto V^(r-i).
    pub fn antiautomorphism(&self, rs: &RootSystem) -> Result<Vec<usize>> {
        let w0 = Self::longest_word(rs);
        let by_vec: HashMap<&Vector, usize> = self.nodes.iter().map(|n| (&n.vector, n.id)).collect();
        self.nodes
            .iter()
            .map(|n| {
                let mut v = n.vector.clone();
                for &i in &w0 {
                    v = rs.reflect_simple(i, &v);
                }
                by_vec
                    .get(&v)
                    .copied()
                    .ok_or_else(|| Error::Invariant(format!("w0 image of node {} is not a node", n.id)))
            })
            .collect()
    }

    /// Applies w0 to a root index.
    pub fn w0_root(rs: &RootSystem, idx: usize) -> usize {
        let mut v = rs.root(idx).clone();
        for &i in &Self::longest_word(rs) {
            v = rs.reflect_simple(i, &v);
        }
        rs.root_index(&v).expect("w0 permutes roots")
    }

    /// Checks the structural invariants; never fails, only reports.
    pub fn validate(&self, rs: Option<&RootSystem>) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let h = self.degree_histogram();
        rep.check("unique bottom and top node", h.first() == Some(&1) && h.last() == Some(&1));
        rep.check("symmetric degree histogram", h.iter().eq(h.iter().rev()));
        rep.check(
            "edges are covers (degree +1)",
            self.edges.iter().all(|e| self.nodes[e.dst].degree == self.nodes[e.src].degree + 1),
        );
        rep.check("edge weights positive", self.edges.iter().all(|e| e.weight.sign() > 0));
        rep.check(
            "every non-top node has an upward edge",
            self.nodes.iter().all(|n| n.degree == self.r || !self.out_edges[n.id].is_empty()),
        );
        rep.check(
            "every non-bottom node has a downward edge",
            self.nodes.iter().all(|n| n.degree == 0 || !self.in_edges[n.id].is_empty()),
        );
        let mut vecs: Vec<&Vector> = self.nodes.iter().map(|n| &n.vector).collect();
        vecs.sort_by(|a, b| deglex(a, b));
        vecs.dedup();
        rep.check("node vectors distinct", vecs.len() == self.nodes.len());
        if let Some(rs) = rs {
            let dims_ok = self.nodes.iter().all(|n| n.vector.len() == rs.dim());
            rep.check("vectors live in the ambient space", dims_ok);
            if dims_ok {
                rep.check(
                    "degree equals inversion count",
                    self.nodes.iter().all(|n| inversion_count(rs, &n.vector) == n.degree),
                );
                rep.check(
                    "edge weight equals coroot of lower vector",
                    self.edges.iter().all(|e| {
                        e.root < rs.num_positive()
                            && rs.coroot(e.root, &self.nodes[e.src].vector) == e.weight
                            && rs.reflect(e.root, &self.nodes[e.src].vector) == self.nodes[e.dst].vector
                    }),
                );
                rep.check(
                    "witness words reach their vectors",
                    self.nodes.iter().all(|n| {
                        n.word.len() == n.degree && {
                            let start = &self.nodes[0].vector;
                            rs.apply_word(&n.word, start) == n.vector
                        }
                    }),
                );
            }
        }
        rep
    }

    /// Serializable form; theta indices are 1-based.
    pub fn to_json_model(&self) -> PosetJson {
        PosetJson {
            ty: self.ty.to_string(),
            theta: self.theta.indices().iter().map(|i| i + 1).collect(),
            field: self.field.tag(),
            r: self.r,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeJson {
                    id: n.id,
                    degree: n.degree,
                    vector: n.vector.iter().map(|x| x.to_string()).collect(),
                    word: n.word.iter().map(|i| i + 1).collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { src: e.src, dst: e.dst, root: e.root, weight: e.weight.to_string() })
                .collect(),
        }
    }

    pub fn from_json_model(j: &PosetJson) -> Result<Self> {
        let ty: CoxeterType = j.ty.parse()?;
        let field = NumberField::from_tag(&j.field)?;
        let theta = Theta::new(
            j.theta
                .iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| Error::Parameter("theta indices are 1-based".into())))
                .collect::<Result<_>>()?,
        );
        let mut nodes = Vec::with_capacity(j.nodes.len());
        for (k, n) in j.nodes.iter().enumerate() {
            if n.id != k {
                return Err(Error::Parameter(format!("node ids must be 0..n in order (saw {} at {k})", n.id)));
            }
            if k > 0 && n.degree < j.nodes[k - 1].degree {
                return Err(Error::Parameter("nodes must be sorted by degree".into()));
            }
            let vector = n.vector.iter().map(|s| Scalar::parse(s, &field)).collect::<Result<_>>()?;
            let word = n.word.iter().map(|&i| i.saturating_sub(1)).collect();
            nodes.push(CosetNode { id: n.id, degree: n.degree, vector, word });
        }
        let mut edges = Vec::with_capacity(j.edges.len());
        for e in &j.edges {
            if e.src >= nodes.len() || e.dst >= nodes.len() {
                return Err(Error::Parameter(format!("edge {}->{} references a missing node", e.src, e.dst)));
            }
            edges.push(WeightedEdge {
                src: e.src,
                dst: e.dst,
                root: e.root,
                weight: Scalar::parse(&e.weight, &field)?,
            });
        }
        Ok(Self::from_parts(ty, theta, field, nodes, edges))
    }

    /// Graphviz rendering: one rank per degree, edges labelled by weight.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}/{}\" {{", self.ty, self.theta.type_name(&self.ty));
        let _ = writeln!(s, "  rankdir=BT;");
        let _ = writeln!(s, "  node [shape=circle, label=\"\", width=0.15];");
        for (d, layer) in self.layers.iter().enumerate() {
            let ids: Vec<String> = layer.iter().map(|i| format!("n{i}")).collect();
            let _ = writeln!(s, "  {{ rank=same; /* degree {d} */ {}; }}", ids.join("; "));
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", e.src, e.dst, e.weight);
        }
        s.push_str("}\n");
        s
    }
}

/// A list of named pass/fail checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

impl ValidationReport {
    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(Check { name: name.to_string(), pass });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    #[serde(rename = "type")]
    pub ty: String,
    pub theta: Vec<usize>,
    pub field: String,
    pub r: usize,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NodeJson {
    pub id: usize,
    pub degree: usize,
    pub vector: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub src: usize,
    pub dst: usize,
    pub root: usize,
    pub weight: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::designated_theta;

    fn quotient(t: &str) -> (RootSystem, QuotientPoset) {
        let rs = RootSystem::new(t.parse().unwrap()).unwrap();
        let th = designated_theta(&rs.coxeter_type());
        let q = QuotientPoset::enumerate(&rs, &th).unwrap();
        (rs, q)
    }

    #[test]
    fn a2_full_group() {
        let rs = RootSystem::new("A2".parse().unwrap()).unwrap();
        let q = QuotientPoset::enumerate(&rs, &Theta::empty()).unwrap();
        assert_eq!(q.degree_histogram(), vec![1, 2, 2, 1]);
        assert!(q.validate(Some(&rs)).passed());
        // bottom has the two simple covers with weight 1
        let w: Vec<String> = q.out_edges(0).map(|e| e.weight.to_string()).collect();
        assert_eq!(w, vec!["1", "1"]);
    }

    #[test]
    fn chain_for_type_a() {
        let (rs, q) = quotient("A4");
        assert_eq!(q.degree_histogram(), vec![1; 5]);
        assert!(q.validate(Some(&rs)).passed());
    }

    #[test]
    fn antiautomorphism_is_an_involution_reversing_covers() {
        for t in ["B3", "D4", "H3", "F4"] {
            let (rs, q) = quotient(t);
            let a = q.antiautomorphism(&rs).unwrap();
            assert!((0..q.len()).all(|i| a[a[i]] == i));
            assert_eq!(a[0], q.len() - 1);
            for e in q.edges() {
                let g = rs.negate_index(QuotientPoset::w0_root(&rs, e.root));
                assert!(g < rs.num_positive(), "{t}: -w0(beta) positive");
                assert!(
                    q.out_edges(a[e.dst]).any(|f| f.dst == a[e.src] && f.root == g),
                    "{t}: image of edge {}->{}",
                    e.src,
                    e.dst
                );
            }
        }
    }

    #[test]
    fn zero_weight_fails_validation() {
        let (rs, q) = quotient("A3");
        let bad = q.with_edge_weight(0, Scalar::int(0));
        let rep = bad.validate(Some(&rs));
        assert!(!rep.passed());
        assert!(rep.failures().contains(&"edge weights positive"));
    }

    #[test]
    fn json_round_trip() {
        let (_, q) = quotient("H3");
        let j = q.to_json_model();
        let back = QuotientPoset::from_json_model(&j).unwrap();
        assert_eq!(back.to_json_model(), j);
        assert_eq!(back.degree_histogram(), vec![1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1]);
    }
}
