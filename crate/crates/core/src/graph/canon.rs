//! Canonical forms and automorphisms of colored multigraphs.
//!
//! Two graphs are isomorphic (respecting momentum multisets and edge masses
//! when asked to) iff their canonical keys are equal.  The algorithm is
//! classical: iterated color refinement to split vertices into
//! order-invariant classes, then exhaustive search over class-respecting
//! relabelings for the lexicographically least encoding.  Class products
//! stay tiny on the graphs this library handles, so the exhaustive tail is
//! cheap and obviously correct.

use super::{Multigraph, VertexId};
use std::collections::BTreeMap;

/// A complete isomorphism invariant: vertex count, per-vertex colors in
/// canonical order, and the relabeled sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub n: usize,
    pub vertex_colors: Vec<Vec<u32>>,
    pub edges: Vec<(usize, usize, Option<String>)>,
}

impl CanonicalKey {
    /// Stable single-line rendering, usable as a cache key.
    pub fn to_compact_string(&self) -> String {
        let mut s = format!("n{}", self.n);
        for c in &self.vertex_colors {
            s.push('|');
            for (i, leg) in c.iter().enumerate() {
                if i > 0 {
                    s.push('+');
                }
                s.push_str(&leg.to_string());
            }
        }
        s.push(';');
        for (u, v, m) in &self.edges {
            s.push_str(&format!("{}-{}", u, v));
            if let Some(m) = m {
                s.push_str(&format!("({m})"));
            }
            s.push(',');
        }
        s
    }
}

/// Canonical key respecting momentum multisets and edge masses.
pub fn canonical_key(g: &Multigraph) -> CanonicalKey {
    canonical_key_with(g, true)
}

/// Canonical key of the underlying mass-colored structure, ignoring momenta.
pub fn structural_key(g: &Multigraph) -> CanonicalKey {
    canonical_key_with(g, false)
}

/// All structure-preserving vertex bijections (masses respected, momentum
/// labels ignored), as maps old-id -> old-id.
pub fn automorphisms(g: &Multigraph) -> Vec<BTreeMap<VertexId, VertexId>> {
    let data = GraphData::new(g, false);
    let classes = refine(&data);
    let reference = data.edge_key(&identity(data.n));
    let mut out = Vec::new();
    for perm in class_orderings(&classes) {
        // Any automorphism maps each refinement class onto itself, so the
        // candidates are exactly the per-class bijections: reading the
        // classes in order, the j-th member of class k is sent to the vertex
        // occupying the j-th slot of class k in `perm`.  Keep candidates
        // that reproduce the original edge multiset.
        let mut phi = vec![0usize; data.n];
        let mut slot = perm.iter();
        for class in &classes {
            for &member in class {
                phi[member] = *slot.next().expect("perm covers every vertex");
            }
        }
        let mut image: Vec<(usize, usize, Option<String>)> = data
            .edges
            .iter()
            .map(|&(u, v, ref m)| order_pair(phi[u], phi[v], m.clone()))
            .collect();
        image.sort();
        if image == reference {
            out.push((0..data.n).map(|i| (data.verts[i], data.verts[phi[i]])).collect());
        }
    }
    out
}

fn canonical_key_with(g: &Multigraph, use_momenta: bool) -> CanonicalKey {
    let data = GraphData::new(g, use_momenta);
    if data.n == 0 {
        return CanonicalKey {
            n: 0,
            vertex_colors: Vec::new(),
            edges: Vec::new(),
        };
    }
    let classes = refine(&data);
    let mut best: Option<CanonicalKey> = None;
    for perm in class_orderings(&classes) {
        let mut to_new = vec![0usize; data.n];
        for (new, &old) in perm.iter().enumerate() {
            to_new[old] = new;
        }
        let mut edges: Vec<(usize, usize, Option<String>)> = data
            .edges
            .iter()
            .map(|&(u, v, ref m)| order_pair(to_new[u], to_new[v], m.clone()))
            .collect();
        edges.sort();
        let key = CanonicalKey {
            n: data.n,
            vertex_colors: perm.iter().map(|&old| data.colors[old].clone()).collect(),
            edges,
        };
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }
    }
    best.expect("nonempty class ordering")
}

struct GraphData {
    n: usize,
    verts: Vec<VertexId>,
    /// Momentum color per vertex (empty when momenta are ignored).
    colors: Vec<Vec<u32>>,
    edges: Vec<(usize, usize, Option<String>)>,
}

impl GraphData {
    fn new(g: &Multigraph, use_momenta: bool) -> Self {
        let (index, verts) = g.vertex_index();
        let colors = verts
            .iter()
            .map(|&v| {
                if use_momenta {
                    g.momentum(v).expect("listed vertex").to_vec()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let edges = g
            .edge_ids()
            .map(|e| {
                let d = g.edge(e).expect("listed edge");
                (index[&d.ends.0], index[&d.ends.1], d.mass.clone())
            })
            .collect();
        GraphData {
            n: verts.len(),
            verts,
            colors,
            edges,
        }
    }

    fn edge_key(&self, perm: &[usize]) -> Vec<(usize, usize, Option<String>)> {
        let mut to_new = vec![0usize; self.n];
        for (new, &old) in perm.iter().enumerate() {
            to_new[old] = new;
        }
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v, ref m)| order_pair(to_new[u], to_new[v], m.clone()))
            .collect();
        out.sort();
        out
    }
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn order_pair(a: usize, b: usize, m: Option<String>) -> (usize, usize, Option<String>) {
    if a <= b {
        (a, b, m)
    } else {
        (b, a, m)
    }
}

/// Iterated color refinement.  Colors are assigned by sorting the invariant
/// per-vertex keys each round, so the final class indices are themselves
/// isomorphism-invariant.  Returns the classes in canonical order.
fn refine(data: &GraphData) -> Vec<Vec<usize>> {
    let n = data.n;
    // Initial key: momentum color, degree (loops twice), loop count.
    let mut color: Vec<usize> = {
        let mut deg = vec![0usize; n];
        let mut loops = vec![0usize; n];
        for &(u, v, _) in &data.edges {
            deg[u] += 1;
            deg[v] += 1;
            if u == v {
                loops[u] += 1;
            }
        }
        let keys: Vec<(Vec<u32>, usize, usize)> = (0..n)
            .map(|i| (data.colors[i].clone(), deg[i], loops[i]))
            .collect();
        assign_indices(&keys)
    };
    loop {
        // New key: old color plus the sorted profile of (mass, other-end
        // color) over incident edges; loops contribute a self marker.
        let keys: Vec<(usize, Vec<(Option<String>, usize, bool)>)> = (0..n)
            .map(|i| {
                let mut profile = Vec::new();
                for &(u, v, ref m) in &data.edges {
                    if u == i || v == i {
                        let other = if u == i { v } else { u };
                        profile.push((m.clone(), color[other], u == v));
                    }
                }
                profile.sort();
                (color[i], profile)
            })
            .collect();
        let next = assign_indices(&keys);
        if next == color {
            break;
        }
        color = next;
    }
    let class_count = color.iter().max().map_or(0, |&c| c + 1);
    let mut classes = vec![Vec::new(); class_count];
    for (i, &c) in color.iter().enumerate() {
        classes[c].push(i);
    }
    classes
}

/// Replaces arbitrary comparable keys by dense indices in sorted-key order.
fn assign_indices<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

/// Every vertex order listing class 0 first, then class 1, and so on, with
/// all permutations within each class.
fn class_orderings(classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut orders = vec![Vec::new()];
    for class in classes {
        let perms = permutations(class);
        let mut next = Vec::with_capacity(orders.len() * perms.len());
        for base in &orders {
            for p in &perms {
                let mut o = base.clone();
                o.extend_from_slice(p);
                next.push(o);
            }
        }
        orders = next;
    }
    orders
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::testgraphs::*;
    use super::super::{EdgeId, Multigraph, VertexId};
    use super::*;

    fn relabeled_triangle() -> Multigraph {
        let mut g = Multigraph::new();
        for v in [5, 9, 11] {
            g.add_vertex(VertexId(v)).unwrap();
        }
        g.add_edge(EdgeId(3), VertexId(9), VertexId(5), None).unwrap();
        g.add_edge(EdgeId(1), VertexId(11), VertexId(9), None).unwrap();
        g.add_edge(EdgeId(7), VertexId(5), VertexId(11), None).unwrap();
        g
    }

    #[test]
    fn isomorphic_graphs_share_a_key() {
        assert_eq!(canonical_key(&triangle()), canonical_key(&relabeled_triangle()));
    }

    #[test]
    fn non_isomorphic_graphs_differ() {
        assert_ne!(canonical_key(&triangle()), canonical_key(&cycle(4)));
        let mut path = Multigraph::new();
        for v in 0..3 {
            path.add_vertex(VertexId(v)).unwrap();
        }
        path.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        path.add_edge(EdgeId(1), VertexId(1), VertexId(2), None).unwrap();
        assert_ne!(canonical_key(&triangle()), canonical_key(&path));
    }

    #[test]
    fn momenta_distinguish_keys_unless_ignored() {
        let plain = triangle();
        let mut rooted = triangle();
        rooted.set_momentum(VertexId(0), vec![1]).unwrap();
        assert_ne!(canonical_key(&plain), canonical_key(&rooted));
        assert_eq!(structural_key(&plain), structural_key(&rooted));
    }

    #[test]
    fn masses_distinguish_keys() {
        let plain = bubble();
        let mut massive = Multigraph::new();
        massive.add_vertex(VertexId(0)).unwrap();
        massive.add_vertex(VertexId(1)).unwrap();
        massive
            .add_edge(EdgeId(0), VertexId(0), VertexId(1), Some("m".into()))
            .unwrap();
        massive.add_edge(EdgeId(1), VertexId(0), VertexId(1), None).unwrap();
        assert_ne!(canonical_key(&plain), canonical_key(&massive));
    }

    #[test]
    fn parallel_edges_are_counted() {
        let two = bubble();
        let mut three = bubble();
        three.add_edge(EdgeId(2), VertexId(0), VertexId(1), None).unwrap();
        assert_ne!(canonical_key(&two), canonical_key(&three));
    }

    #[test]
    fn automorphism_group_sizes_of_small_graphs() {
        assert_eq!(automorphisms(&triangle()).len(), 6);
        assert_eq!(automorphisms(&complete(4)).len(), 24);
        assert_eq!(automorphisms(&cycle(4)).len(), 8);
        assert_eq!(automorphisms(&bubble()).len(), 2);
    }

    #[test]
    fn automorphisms_ignore_momentum_labels() {
        let mut rooted = triangle();
        rooted.set_momentum(VertexId(0), vec![1]).unwrap();
        assert_eq!(automorphisms(&rooted).len(), 6);
    }

    fn path3() -> Multigraph {
        let mut g = Multigraph::new();
        for v in 0..3 {
            g.add_vertex(VertexId(v)).unwrap();
        }
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        g.add_edge(EdgeId(1), VertexId(1), VertexId(2), None).unwrap();
        g
    }

    fn diamond() -> Multigraph {
        // Complete graph on four vertices minus the edge {2,3}.
        let mut g = Multigraph::new();
        for v in 0..4 {
            g.add_vertex(VertexId(v)).unwrap();
        }
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)];
        for (i, (u, v)) in edges.into_iter().enumerate() {
            g.add_edge(EdgeId(i as u32), VertexId(u), VertexId(v), None).unwrap();
        }
        g
    }

    #[test]
    fn automorphism_groups_with_several_degree_classes() {
        // These graphs split into more than one refinement class, so the
        // search has to pair class members with permuted class members
        // rather than with fresh canonical labels.
        assert_eq!(automorphisms(&path3()).len(), 2);
        assert_eq!(automorphisms(&diamond()).len(), 4);

        // Six-cycle with one short chord: only the reflection through the
        // chord survives even though the degree classes allow 2 * 24 maps.
        let mut g = cycle(6);
        g.add_edge(EdgeId(6), VertexId(0), VertexId(2), None).unwrap();
        assert_eq!(automorphisms(&g).len(), 2);
    }

    #[test]
    fn automorphisms_preserve_the_edge_multiset() {
        for g in [diamond(), path3(), triangle()] {
            let autos = automorphisms(&g);
            assert!(autos.iter().any(|a| a.iter().all(|(u, v)| u == v)), "identity missing");
            let original: std::collections::BTreeSet<(VertexId, VertexId)> = g
                .edge_ids()
                .map(|e| g.edge(e).unwrap().ends)
                .collect();
            for a in autos {
                for e in g.edge_ids() {
                    let (u, v) = g.edge(e).unwrap().ends;
                    let (x, y) = (a[&u].min(a[&v]), a[&u].max(a[&v]));
                    assert!(original.contains(&(x, y)), "image edge {x}-{y} missing");
                }
            }
        }
    }

    #[test]
    fn every_automorphism_is_a_bijection() {
        for a in automorphisms(&cycle(5)) {
            let mut seen: Vec<VertexId> = a.values().copied().collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), 5);
        }
    }
}
