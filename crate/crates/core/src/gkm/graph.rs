use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::hull;
use super::{GraphError, ToricInput};
use crate::symcore::linalg::{in_span, is_unimodular, QMatrix};
use crate::symcore::Weight;

/// Unoriented, validated one-skeleton.
#[derive(Clone, Debug)]
pub struct ToricGraph {
    rank: usize,
    ids: Vec<String>,
    psi: Vec<Vec<BigRational>>,
    /// `(a, b, w, m)` with `ψ(b) − ψ(a) = m·w`, `w` primitive.
    edges: Vec<(usize, usize, Weight, BigRational)>,
}

impl ToricGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn weights_at(&self, v: usize) -> Vec<Weight> {
        self.edges
            .iter()
            .filter_map(|(a, b, w, _)| {
                if *b == v {
                    Some(w.clone())
                } else if *a == v {
                    Some(-w)
                } else {
                    None
                }
            })
            .collect()
    }
}

fn mu(psi: &[BigRational], xi: &[BigInt]) -> BigRational {
    psi.iter()
        .zip(xi)
        .fold(BigRational::zero(), |s, (p, x)| s + p * x)
}

/// Validates `input`, detecting edges from the convex hull when none are given.
pub fn build_graph(input: &ToricInput) -> Result<ToricGraph, GraphError> {
    let n = input.rank;
    if n == 0 {
        return Err(GraphError::InvalidInput("rank must be at least 1".into()));
    }
    if input.vertices.len() < n + 1 {
        return Err(GraphError::InvalidInput(format!(
            "{} vertices cannot span a polytope of dimension {n}",
            input.vertices.len()
        )));
    }
    let mut index = BTreeMap::new();
    for (i, (id, psi)) in input.vertices.iter().enumerate() {
        if psi.len() != n {
            return Err(GraphError::InvalidInput(format!(
                "vertex {id:?} has {} coordinates, expected {n}",
                psi.len()
            )));
        }
        if index.insert(id.clone(), i).is_some() {
            return Err(GraphError::InvalidInput(format!("duplicate vertex id {id:?}")));
        }
    }
    let psi: Vec<Vec<BigRational>> = input.vertices.iter().map(|(_, p)| p.clone()).collect();
    let distinct: BTreeSet<&Vec<BigRational>> = psi.iter().collect();
    if distinct.len() != psi.len() {
        return Err(GraphError::InvalidInput("moment images are not distinct".into()));
    }

    let pairs: Vec<(usize, usize)> = match &input.edges {
        Some(list) => {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for (a, b) in list {
                let ia = *index.get(a).ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
                let ib = *index.get(b).ok_or_else(|| GraphError::UnknownVertex(b.clone()))?;
                if ia == ib {
                    return Err(GraphError::InvalidInput(format!("self-loop at {a:?}")));
                }
                if !seen.insert((ia.min(ib), ia.max(ib))) {
                    return Err(GraphError::InvalidInput(format!("duplicate edge {a:?}-{b:?}")));
                }
                out.push((ia.min(ib), ia.max(ib)));
            }
            out
        }
        None => {
            let facets = hull::facets(&psi, n).ok_or_else(|| {
                GraphError::NotAPolytopeSkeleton("vertices are not full-dimensional".into())
            })?;
            if let Some(&bad) = hull::non_vertices(&psi, &facets).first() {
                return Err(GraphError::NotAPolytopeSkeleton(format!(
                    "{:?} is not a vertex of the hull",
                    input.vertices[bad].0
                )));
            }
            hull::edges(&psi, &facets)
        }
    };

    let mut edges = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let d: Vec<BigRational> = psi[b].iter().zip(&psi[a]).map(|(x, y)| x - y).collect();
        let (w, m) = Weight::primitive_direction(&d).expect("moment images are distinct");
        edges.push((a, b, w, m));
    }
    let graph = ToricGraph {
        rank: n,
        ids: input.vertices.iter().map(|(id, _)| id.clone()).collect(),
        psi,
        edges,
    };
    for v in 0..graph.len() {
        let ws = graph.weights_at(v);
        if ws.len() != n {
            return Err(GraphError::NotAPolytopeSkeleton(format!(
                "vertex {:?} has degree {}, expected {n}",
                graph.ids[v],
                ws.len()
            )));
        }
        if !is_unimodular(&ws) {
            return Err(GraphError::NotDelzant {
                vertex: graph.ids[v].clone(),
            });
        }
    }
    Ok(graph)
}

fn is_generic(g: &ToricGraph, xi: &[BigInt]) -> bool {
    if xi.len() != g.rank {
        return false;
    }
    if g.edges.iter().any(|(_, _, w, _)| w.dot(xi).is_zero()) {
        return false;
    }
    let mus: BTreeSet<BigRational> = g.psi.iter().map(|p| mu(p, xi)).collect();
    mus.len() == g.len()
}

/// Validates a supplied ξ, or searches `(1, C, C², …)` for `C = 2, 3, …`.
pub fn choose_generic_xi(g: &ToricGraph, supplied: Option<&[BigInt]>) -> Result<Vec<BigInt>, GraphError> {
    if let Some(xi) = supplied {
        return if is_generic(g, xi) {
            Ok(xi.to_vec())
        } else {
            Err(GraphError::SuppliedXiNotGeneric)
        };
    }
    let mut c = BigInt::from(2);
    loop {
        let mut xi = Vec::with_capacity(g.rank);
        let mut p = BigInt::from(1);
        for _ in 0..g.rank {
            xi.push(p.clone());
            p *= &c;
        }
        if is_generic(g, &xi) {
            return Ok(xi);
        }
        c += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// Primitive `w(src→dst)`, with `⟨w, ξ⟩ > 0`.
    pub weight: Weight,
    pub multiplicity: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub id: String,
    pub psi: Vec<BigRational>,
    pub mu: BigRational,
    pub lambda: usize,
    /// Incoming edge weights `w(r→p)`: the weights at p that are positive on ξ.
    pub wplus: Vec<Weight>,
    /// Weights at p that are negative on ξ: `−w(p→s)` for outgoing edges.
    pub wminus: Vec<Weight>,
    pub incoming: Vec<usize>,
    pub outgoing: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Flow-up face F_p: spanned by the weights at p that are negative on ξ.
    Up,
    /// Flow-down face H_p: spanned by the weights at p that are positive on ξ.
    Down,
}

/// Oriented GKM graph; vertices are stored in increasing μ order.
#[derive(Clone, Debug)]
pub struct GkmGraph {
    rank: usize,
    xi: Vec<BigInt>,
    vertices: Vec<FixedPoint>,
    edges: Vec<Edge>,
    index: BTreeMap<String, usize>,
}

/// Orients every edge along increasing `μ = ⟨ψ, ξ⟩` and sorts the vertices by μ.
pub fn orient_and_index(g: &ToricGraph, xi: Vec<BigInt>) -> GkmGraph {
    let mus: Vec<BigRational> = g.psi.iter().map(|p| mu(p, &xi)).collect();
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| mus[a].cmp(&mus[b]));
    assert!(
        order.windows(2).all(|w| mus[w[0]] != mus[w[1]]),
        "xi must separate fixed points"
    );
    let mut pos = alloc::vec![0; g.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }

    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|(a, b, w, m)| {
            let (src, dst, weight) = if mus[*a] < mus[*b] {
                (pos[*a], pos[*b], w.clone())
            } else {
                (pos[*b], pos[*a], -w)
            };
            debug_assert!(weight.dot(&xi).is_positive());
            Edge {
                src,
                dst,
                weight,
                multiplicity: m.clone(),
            }
        })
        .collect();
    edges.sort_by_key(|a| (a.src, a.dst));

    let vertices: Vec<FixedPoint> = order
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let incoming: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].dst == k).collect();
            let outgoing: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].src == k).collect();
            FixedPoint {
                id: g.ids[v].clone(),
                psi: g.psi[v].clone(),
                mu: mus[v].clone(),
                lambda: incoming.len(),
                wplus: incoming.iter().map(|&e| edges[e].weight.clone()).collect(),
                wminus: outgoing.iter().map(|&e| -&edges[e].weight).collect(),
                incoming,
                outgoing,
            }
        })
        .collect();
    let index = vertices
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.clone(), i))
        .collect();
    GkmGraph {
        rank: g.rank,
        xi,
        vertices,
        edges,
        index,
    }
}

impl GkmGraph {
    /// Build, choose ξ (or validate the supplied one), and orient.
    pub fn from_input(input: &ToricInput) -> Result<Self, GraphError> {
        let g = build_graph(input)?;
        let xi = choose_generic_xi(&g, input.xi.as_deref())?;
        Ok(orient_and_index(&g, xi))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn xi(&self) -> &[BigInt] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[FixedPoint] {
        &self.vertices
    }

    pub fn vertex(&self, p: usize) -> &FixedPoint {
        &self.vertices[p]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn lambda(&self, p: usize) -> usize {
        self.vertices[p].lambda
    }

    pub fn wplus(&self, p: usize) -> &[Weight] {
        &self.vertices[p].wplus
    }

    pub fn wminus(&self, p: usize) -> &[Weight] {
        &self.vertices[p].wminus
    }

    /// All isotropy weights at `p` as `(neighbour r, w(r→p))`, incoming first.
    pub fn isotropy(&self, p: usize) -> Vec<(usize, Weight)> {
        let v = &self.vertices[p];
        v.incoming
            .iter()
            .map(|&e| (self.edges[e].src, self.edges[e].weight.clone()))
            .chain(
                v.outgoing
                    .iter()
                    .map(|&e| (self.edges[e].dst, -&self.edges[e].weight)),
            )
            .collect()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| (e.src == a && e.dst == b) || (e.src == b && e.dst == a))
    }

    /// Vertex set of F_p (up) or H_p (down), as a span closure from `p`.
    pub fn flow_face(&self, p: usize, dir: Direction) -> BTreeSet<usize> {
        let spanning = match dir {
            Direction::Up => self.wminus(p),
            Direction::Down => self.wplus(p),
        };
        let span: QMatrix = spanning.iter().map(Weight::to_rational).collect();
        let mut seen = BTreeSet::from([p]);
        let mut queue = VecDeque::from([p]);
        while let Some(v) = queue.pop_front() {
            for (r, w) in self.isotropy(v) {
                if !seen.contains(&r) && !span.is_empty() && in_span(&span, &w.to_rational()) {
                    seen.insert(r);
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// V_p⁺: vertices reachable from `p` along oriented edges, in ≺ order.
    pub fn upward_closure(&self, p: usize) -> Vec<usize> {
        let mut seen = BTreeSet::from([p]);
        let mut queue = VecDeque::from([p]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.vertices[v].outgoing {
                let d = self.edges[e].dst;
                if seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// An oriented edge along which λ does not increase, if any.
    pub fn index_increasing_witness(&self) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| self.lambda(e.src) >= self.lambda(e.dst))
    }

    pub fn is_index_increasing(&self) -> bool {
        self.index_increasing_witness().is_none()
    }

    /// Edges whose Morse index jumps by exactly one.
    pub fn canonical_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges
            .iter()
            .filter(|e| self.lambda(e.dst) == self.lambda(e.src) + 1)
    }

    /// ψ(q) − ψ(p).
    pub fn psi_difference(&self, p: usize, q: usize) -> Vec<BigRational> {
        self.vertices[q]
            .psi
            .iter()
            .zip(&self.vertices[p].psi)
            .map(|(a, b)| a - b)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(c: &[i64]) -> Weight {
        Weight::from_i64s(c)
    }

    fn ids(g: &GkmGraph, set: impl IntoIterator<Item = usize>) -> Vec<String> {
        set.into_iter().map(|i| g.vertex(i).id.clone()).collect()
    }

    #[test]
    fn cp2_graph() {
        let g = fixtures::cp2();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.xi(), &[BigInt::from(1), BigInt::from(2)]);
        let lambdas: Vec<usize> = (0..3).map(|p| g.lambda(p)).collect();
        assert_eq!(lambdas, [0, 1, 2]);
        let mut ws: Vec<Weight> = g.edges().iter().map(|e| e.weight.clone()).collect();
        ws.sort();
        assert_eq!(ws, [w(&[-1, 1]), w(&[0, 1]), w(&[1, 0])]);
        assert!(g.wplus(0).is_empty());
        assert!(g.is_index_increasing());
    }

    #[test]
    fn cp1_graph() {
        let g = fixtures::cp1();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].weight, w(&[1]));
        assert_eq!(g.xi(), &[BigInt::from(1)]);
        assert!(g.is_index_increasing());
    }

    #[test]
    fn hirzebruch_graph() {
        let g = fixtures::hirzebruch();
        assert_eq!(g.edges().len(), 4);
        let ws: BTreeSet<Weight> = g.edges().iter().map(|e| e.weight.clone()).collect();
        for expected in [w(&[0, 1]), w(&[-1, 1]), w(&[1, 1])] {
            assert!(ws.contains(&expected) || ws.contains(&-&expected));
        }
        let lambdas: Vec<usize> = (0..4).map(|p| g.lambda(p)).collect();
        assert_eq!(lambdas, [0, 1, 1, 2]);
        let bad = g.index_increasing_witness().unwrap();
        assert_eq!((bad.src, bad.dst), (1, 2));
    }

    #[test]
    fn supplied_xi_is_validated() {
        let input = fixtures::cp2_input().with_xi(&[1, 1]);
        assert_eq!(GkmGraph::from_input(&input).unwrap_err(), GraphError::SuppliedXiNotGeneric);
        let input = fixtures::cp2_input().with_xi(&[1, 2]);
        assert!(GkmGraph::from_input(&input).is_ok());
    }

    #[test]
    fn reversing_xi_complements_indices() {
        for input in [fixtures::cp2_input(), fixtures::hirzebruch_input(), fixtures::cpn_input(3)] {
            let g = GkmGraph::from_input(&input).unwrap();
            let neg: Vec<i64> = g.xi().iter().map(|c| -i64::try_from(c).unwrap()).collect();
            let h = GkmGraph::from_input(&input.clone().with_xi(&neg)).unwrap();
            for p in g.vertices() {
                let q = h.index_of(&p.id).unwrap();
                assert_eq!(h.lambda(q), g.rank() - p.lambda);
            }
        }
    }

    #[test]
    fn flow_faces_and_closures() {
        let g = fixtures::cp2();
        assert_eq!(ids(&g, g.flow_face(1, Direction::Up)), ["p1", "p2"]);
        assert_eq!(g.flow_face(0, Direction::Up).len(), 3);
        assert_eq!(g.flow_face(0, Direction::Down), BTreeSet::from([0]));
        assert_eq!(g.upward_closure(2), [2]);
        assert_eq!(g.upward_closure(0), [0, 1, 2]);
        assert_eq!(g.upward_closure(1), [1, 2]);
    }

    #[test]
    fn flow_up_inside_upward_closure() {
        for g in fixtures::all() {
            let unique_min = g.vertices().iter().filter(|v| v.lambda == 0).count();
            assert_eq!(unique_min, 1);
            let unique_max = g.vertices().iter().filter(|v| v.lambda == g.rank()).count();
            assert_eq!(unique_max, 1);
            for p in 0..g.len() {
                let f = g.flow_face(p, Direction::Up);
                let v: BTreeSet<usize> = g.upward_closure(p).into_iter().collect();
                assert!(f.is_subset(&v));
                if g.is_index_increasing() {
                    assert_eq!(f, v);
                    for &q in &f {
                        if q != p {
                            assert!(g.lambda(q) > g.lambda(p));
                        }
                    }
                }
                let min = f.iter().min_by_key(|&&q| g.lambda(q)).unwrap();
                assert_eq!(*min, p);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let tri = ToricInput::from_integer_vertices(2, &[("a", &[0, 0]), ("b", &[2, 0]), ("c", &[0, 1])]);
        assert!(matches!(GkmGraph::from_input(&tri), Err(GraphError::NotDelzant { .. })));
        let dup = ToricInput::from_integer_vertices(1, &[("a", &[0]), ("a", &[1])]);
        assert!(matches!(GkmGraph::from_input(&dup), Err(GraphError::InvalidInput(_))));
        let same = ToricInput::from_integer_vertices(1, &[("a", &[0]), ("b", &[0])]);
        assert!(matches!(GkmGraph::from_input(&same), Err(GraphError::InvalidInput(_))));
        let inner = ToricInput::from_integer_vertices(
            2,
            &[("a", &[0, 0]), ("b", &[2, 0]), ("c", &[0, 2]), ("d", &[1, 0])],
        );
        assert!(matches!(GkmGraph::from_input(&inner), Err(GraphError::NotAPolytopeSkeleton(_))));
        // a square pyramid apex has degree 4 in dimension 3
        let pyramid = ToricInput::from_integer_vertices(
            3,
            &[("a", &[0, 0, 0]), ("b", &[2, 0, 0]), ("c", &[0, 2, 0]), ("d", &[2, 2, 0]), ("e", &[1, 1, 1])],
        );
        assert!(matches!(GkmGraph::from_input(&pyramid), Err(GraphError::NotAPolytopeSkeleton(_))));
    }

    #[test]
    fn explicit_edges_bypass_the_hull() {
        let mut input = fixtures::cp2_input();
        input.edges = Some(alloc::vec![
            ("p0".into(), "p1".into()),
            ("p1".into(), "p2".into()),
            ("p0".into(), "p2".into()),
        ]);
        let g = GkmGraph::from_input(&input).unwrap();
        assert_eq!(g.edges().len(), 3);
        input.edges = Some(alloc::vec![("p0".into(), "p1".into()), ("p1".into(), "p2".into())]);
        assert!(matches!(GkmGraph::from_input(&input), Err(GraphError::NotAPolytopeSkeleton(_))));
        input.edges = Some(alloc::vec![("p0".into(), "zz".into())]);
        assert_eq!(GkmGraph::from_input(&input).unwrap_err(), GraphError::UnknownVertex("zz".into()));
    }
}
