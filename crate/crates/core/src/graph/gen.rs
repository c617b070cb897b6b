//! Graph generation: seeded random multigraphs for property tests and
//! exhaustive enumeration of small connected multigraphs up to isomorphism.
//!
//! The enumerator emits sorted edge lists in which vertex ids appear in
//! first-use order, which already quotients out most relabelings; canonical
//! keys remove the rest.  Loops and parallel edges are included throughout.

use super::canon::canonical_key;
use super::{EdgeId, Multigraph, VertexId};
use crate::rng::SplitMix64;
use std::collections::HashSet;

/// Random multigraph with `1..=max_vertices` vertices and `1..=max_edges`
/// edges; may be disconnected.
pub fn random_multigraph(rng: &mut SplitMix64, max_vertices: u32, max_edges: u32) -> Multigraph {
    assert!(max_vertices >= 1 && max_edges >= 1);
    let n = 1 + rng.below(max_vertices as u64) as u32;
    let m = 1 + rng.below(max_edges as u64) as u32;
    let mut g = Multigraph::new();
    for v in 0..n {
        g.add_vertex(VertexId(v)).unwrap();
    }
    for e in 0..m {
        let u = rng.below(n as u64) as u32;
        let v = rng.below(n as u64) as u32;
        g.add_edge(EdgeId(e), VertexId(u), VertexId(v), None).unwrap();
    }
    g
}

/// Random connected multigraph (rejection sampling).
pub fn random_connected(rng: &mut SplitMix64, max_vertices: u32, max_edges: u32) -> Multigraph {
    loop {
        let g = random_multigraph(rng, max_vertices, max_edges);
        if g.is_connected() {
            return g;
        }
    }
}

/// Scatters external legs `1..=r` over random vertices (several legs may
/// land on one vertex).
pub fn with_random_momenta(g: &Multigraph, r: u32, rng: &mut SplitMix64) -> Multigraph {
    let verts: Vec<VertexId> = g.vertex_ids().collect();
    let mut out = g.clone();
    let mut legs: Vec<Vec<u32>> = vec![Vec::new(); verts.len()];
    for leg in 1..=r {
        legs[rng.below(verts.len() as u64) as usize].push(leg);
    }
    for (i, l) in legs.into_iter().enumerate() {
        out.set_momentum(verts[i], l).unwrap();
    }
    out
}

/// Gives roughly a third of the edges a mass symbol drawn from a two-symbol
/// pool, so shared masses occur.
pub fn with_random_masses(g: &Multigraph, rng: &mut SplitMix64) -> Multigraph {
    let mut out = Multigraph::new();
    for v in g.vertex_ids() {
        out.add_vertex(v).unwrap();
        out.set_momentum(v, g.momentum(v).unwrap().to_vec()).unwrap();
    }
    for e in g.edge_ids() {
        let d = g.edge(e).unwrap();
        let mass = if rng.chance(1, 3) {
            Some(if rng.chance(1, 2) { "m1" } else { "m2" }.to_string())
        } else {
            None
        };
        out.add_edge(e, d.ends.0, d.ends.1, mass).unwrap();
    }
    out
}

/// All connected multigraphs with `1..=max_edges` edges and no isolated
/// vertices, up to isomorphism.  Edge ids are `0..m` in sorted endpoint
/// order; vertex ids are `0..n`.
pub fn enumerate_connected(max_edges: usize) -> Vec<Multigraph> {
    assert!(max_edges <= 7, "enumeration is exponential in the edge count");
    let mut seen: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    extend(&mut edges, 0, max_edges, &mut seen, &mut out);
    out
}

fn extend(
    edges: &mut Vec<(u32, u32)>,
    used: u32,
    max_edges: usize,
    seen: &mut HashSet<String>,
    out: &mut Vec<Multigraph>,
) {
    if !edges.is_empty() {
        let g = build(edges, used);
        if g.is_connected() {
            let key = canonical_key(&g).to_compact_string();
            if seen.insert(key) {
                out.push(g);
            }
        }
    }
    if edges.len() == max_edges {
        return;
    }
    let last = edges.last().copied().unwrap_or((0, 0));
    // New vertex ids must appear in order: ids < `used` are old, `used` may
    // be introduced, and `used + 1` only together with `used`.
    for u in 0..=used {
        let v_top = if u == used { used + 1 } else { used };
        for v in u..=v_top {
            if (u, v) < last {
                continue;
            }
            edges.push((u, v));
            extend(edges, used.max(v + 1), max_edges, seen, out);
            edges.pop();
        }
    }
}

fn build(edges: &[(u32, u32)], used: u32) -> Multigraph {
    let mut g = Multigraph::new();
    for v in 0..used {
        g.add_vertex(VertexId(v)).unwrap();
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        g.add_edge(EdgeId(i as u32), VertexId(u), VertexId(v), None).unwrap();
    }
    g
}
