//! Multigraphs with external momentum labels and edge masses.
//!
//! Graphs are immutable values: deletion and contraction return new graphs.
//! Vertices carry a multiset of external-leg indices (the legs attached to
//! the vertex; empty means no external momentum), edges may carry a mass
//! symbol.  Loops and parallel edges are allowed everywhere except that
//! contracting a loop is rejected.
//!
//! Spanning-structure enumeration is direct: subsets of edges of the right
//! size are filtered with a union-find.  All target graphs are small (a
//! dozen edges), so clarity wins over asymptotics; an independent
//! determinant-based oracle lives in the polynomial layer for
//! cross-checking.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub mod canon;
pub mod gen;
pub mod io;
pub mod minor;
pub mod width;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    /// Endpoints, stored with the smaller id first (edges are undirected).
    pub ends: (VertexId, VertexId),
    pub mass: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multigraph {
    /// Vertex id -> sorted multiset of external-leg indices (1-based).
    vertices: BTreeMap<VertexId, Vec<u32>>,
    edges: BTreeMap<EdgeId, EdgeData>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeId),
    #[error("cannot contract loop edge {0}")]
    LoopContraction(EdgeId),
    #[error("operation requires at least one edge")]
    Edgeless,
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("invalid root map: {0}")]
    InvalidRootMap(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A spanning 2-forest: two vertex-disjoint trees jointly covering the
/// vertices.  `part1` always contains the smallest vertex id, making the
/// unordered pair canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForestPair {
    pub tree1: BTreeSet<EdgeId>,
    pub tree2: BTreeSet<EdgeId>,
    pub part1: BTreeSet<VertexId>,
    pub part2: BTreeSet<VertexId>,
}

impl Multigraph {
    pub fn new() -> Self {
        Multigraph::default()
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if self.vertices.contains_key(&v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.vertices.insert(v, Vec::new());
        Ok(())
    }

    /// Attaches external legs (1-based indices) to a vertex, replacing any
    /// previous assignment.
    pub fn set_momentum(&mut self, v: VertexId, mut legs: Vec<u32>) -> Result<(), GraphError> {
        if !self.vertices.contains_key(&v) {
            return Err(GraphError::UnknownVertex(v));
        }
        legs.sort_unstable();
        self.vertices.insert(v, legs);
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        e: EdgeId,
        u: VertexId,
        v: VertexId,
        mass: Option<String>,
    ) -> Result<(), GraphError> {
        if self.edges.contains_key(&e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        if !self.vertices.contains_key(&u) {
            return Err(GraphError::UnknownVertex(u));
        }
        if !self.vertices.contains_key(&v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let ends = if u <= v { (u, v) } else { (v, u) };
        self.edges.insert(e, EdgeData { ends, mass });
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn edge(&self, e: EdgeId) -> Result<&EdgeData, GraphError> {
        self.edges.get(&e).ok_or(GraphError::UnknownEdge(e))
    }

    /// Sorted multiset of external-leg indices at `v`.
    pub fn momentum(&self, v: VertexId) -> Result<&[u32], GraphError> {
        self.vertices
            .get(&v)
            .map(|m| m.as_slice())
            .ok_or(GraphError::UnknownVertex(v))
    }

    /// Vertices carrying at least one external leg.
    pub fn rooted_vertices(&self) -> Vec<VertexId> {
        self.vertices
            .iter()
            .filter(|(_, legs)| !legs.is_empty())
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_loop(&self, e: EdgeId) -> Result<bool, GraphError> {
        let d = self.edge(e)?;
        Ok(d.ends.0 == d.ends.1)
    }

    /// Incident edge count with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|d| (d.ends.0 == v) as usize + (d.ends.1 == v) as usize)
            .sum()
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Multigraph, GraphError> {
        if !self.edges.contains_key(&e) {
            return Err(GraphError::UnknownEdge(e));
        }
        let mut g = self.clone();
        g.edges.remove(&e);
        Ok(g)
    }

    /// Contracts a non-loop edge: the endpoints merge into the smaller id,
    /// momenta add as multisets, parallel edges become loops.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Multigraph, GraphError> {
        let data = self.edge(e)?;
        let (keep, gone) = data.ends;
        if keep == gone {
            return Err(GraphError::LoopContraction(e));
        }
        let mut g = self.clone();
        g.edges.remove(&e);
        let gone_legs = g.vertices.remove(&gone).expect("endpoint exists");
        let legs = g.vertices.get_mut(&keep).expect("endpoint exists");
        legs.extend(gone_legs);
        legs.sort_unstable();
        for d in g.edges.values_mut() {
            let (mut a, mut b) = d.ends;
            if a == gone {
                a = keep;
            }
            if b == gone {
                b = keep;
            }
            d.ends = if a <= b { (a, b) } else { (b, a) };
        }
        Ok(g)
    }

    /// Vertexless graphs count as connected.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let (index, _) = self.vertex_index();
        let mut uf = UnionFind::new(index.len());
        for d in self.edges.values() {
            uf.union(index[&d.ends.0], index[&d.ends.1]);
        }
        uf.component_count() == 1
    }

    /// First Betti number |E| - |V| + (number of components).
    pub fn loop_count(&self) -> usize {
        let (index, _) = self.vertex_index();
        let mut uf = UnionFind::new(index.len());
        for d in self.edges.values() {
            uf.union(index[&d.ends.0], index[&d.ends.1]);
        }
        self.edges.len() + uf.component_count() - self.vertices.len()
    }

    /// Edge sets of all spanning trees; empty iff the graph is disconnected.
    /// The vertexless graph has one (empty) spanning tree.
    pub fn spanning_trees(&self) -> Vec<BTreeSet<EdgeId>> {
        let n = self.vertices.len();
        if n == 0 {
            return vec![BTreeSet::new()];
        }
        if !self.is_connected() {
            return Vec::new();
        }
        let (index, _) = self.vertex_index();
        let ids: Vec<EdgeId> = self.edges.keys().copied().collect();
        let mut out = Vec::new();
        for subset in subsets_of_size(ids.len(), n - 1) {
            let mut uf = UnionFind::new(n);
            let mut acyclic = true;
            for &i in &subset {
                let d = &self.edges[&ids[i]];
                if !uf.union(index[&d.ends.0], index[&d.ends.1]) {
                    acyclic = false;
                    break;
                }
            }
            if acyclic && uf.component_count() == 1 {
                out.push(subset.iter().map(|&i| ids[i]).collect());
            }
        }
        out
    }

    /// All spanning 2-forests of a connected graph, each unordered pair
    /// emitted once; empty for disconnected graphs.
    pub fn spanning_2forests(&self) -> Vec<SpanningForestPair> {
        let n = self.vertices.len();
        if n < 2 || !self.is_connected() {
            return Vec::new();
        }
        let (index, verts) = self.vertex_index();
        let ids: Vec<EdgeId> = self.edges.keys().copied().collect();
        let mut out = Vec::new();
        for subset in subsets_of_size(ids.len(), n - 2) {
            let mut uf = UnionFind::new(n);
            let mut acyclic = true;
            for &i in &subset {
                let d = &self.edges[&ids[i]];
                if !uf.union(index[&d.ends.0], index[&d.ends.1]) {
                    acyclic = false;
                    break;
                }
            }
            if !acyclic {
                continue;
            }
            // An acyclic set of n-2 edges on n vertices has exactly two
            // components.
            let root1 = uf.find(0);
            let mut part1 = BTreeSet::new();
            let mut part2 = BTreeSet::new();
            for (i, &v) in verts.iter().enumerate() {
                if uf.find(i) == root1 {
                    part1.insert(v);
                } else {
                    part2.insert(v);
                }
            }
            let mut tree1 = BTreeSet::new();
            let mut tree2 = BTreeSet::new();
            for &i in &subset {
                let d = &self.edges[&ids[i]];
                if part1.contains(&d.ends.0) {
                    tree1.insert(ids[i]);
                } else {
                    tree2.insert(ids[i]);
                }
            }
            out.push(SpanningForestPair {
                tree1,
                tree2,
                part1,
                part2,
            });
        }
        out
    }

    /// Mass symbols of all edges, with multiplicity, sorted.
    pub fn mass_symbols(&self) -> Vec<(EdgeId, String)> {
        self.edges
            .iter()
            .filter_map(|(&e, d)| d.mass.clone().map(|m| (e, m)))
            .collect()
    }

    /// Dense indexing of the vertex set: map id -> position and the sorted
    /// id list.
    pub(crate) fn vertex_index(&self) -> (BTreeMap<VertexId, usize>, Vec<VertexId>) {
        let verts: Vec<VertexId> = self.vertices.keys().copied().collect();
        let index = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        (index, verts)
    }
}

/// Plain union-find with path halving.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when the two elements were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }

    pub(crate) fn component_count(&self) -> usize {
        self.components
    }
}

/// All index subsets of `0..n` with exactly `k` elements.
fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=n.saturating_sub(need) {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
pub(crate) mod testgraphs {
    use super::*;

    /// Triangle on vertices 0,1,2 with edges 1:(0,1), 2:(1,2), 3:(0,2).
    pub fn triangle() -> Multigraph {
        let mut g = Multigraph::new();
        for v in 0..3 {
            g.add_vertex(VertexId(v)).unwrap();
        }
        g.add_edge(EdgeId(1), VertexId(0), VertexId(1), None).unwrap();
        g.add_edge(EdgeId(2), VertexId(1), VertexId(2), None).unwrap();
        g.add_edge(EdgeId(3), VertexId(0), VertexId(2), None).unwrap();
        g
    }

    /// Two vertices joined by two parallel edges 0 and 1.
    pub fn bubble() -> Multigraph {
        let mut g = Multigraph::new();
        g.add_vertex(VertexId(0)).unwrap();
        g.add_vertex(VertexId(1)).unwrap();
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        g.add_edge(EdgeId(1), VertexId(0), VertexId(1), None).unwrap();
        g
    }

    /// Cycle on `n` vertices 0..n with edge i: (i, i+1 mod n).
    pub fn cycle(n: u32) -> Multigraph {
        let mut g = Multigraph::new();
        for v in 0..n {
            g.add_vertex(VertexId(v)).unwrap();
        }
        for i in 0..n {
            g.add_edge(EdgeId(i), VertexId(i), VertexId((i + 1) % n), None)
                .unwrap();
        }
        g
    }

    /// Complete graph on `n` vertices, edges numbered in (u,v) lex order.
    pub fn complete(n: u32) -> Multigraph {
        let mut g = Multigraph::new();
        for v in 0..n {
            g.add_vertex(VertexId(v)).unwrap();
        }
        let mut e = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(EdgeId(e), VertexId(u), VertexId(v), None).unwrap();
                e += 1;
            }
        }
        g
    }
}
