//! Search for a minimal non-reducible 4-rooted graph that is free of rooted
//! K4 / W4 / K2_4 minors: enumerate small simple 2-connected graphs, screen,
//! decide reducibility, then check minor-minimality of the hits.

use feynred_core::graph::canon::{automorphisms, canonical_key};
use feynred_core::graph::minor::has_rooted_minor;
use feynred_core::graph::{EdgeId, Multigraph, VertexId};
use feynred_core::kinematics::KinematicsContext;
use feynred_core::reduction::{is_reducible, ReductionOptions};
use feynred_core::symanzik::{polynomial_pair, schwinger_vars};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

fn build(n: u32, edges: &[(u32, u32)], roots: &[u32]) -> Multigraph {
    let mut g = Multigraph::new();
    for v in 0..n {
        g.add_vertex(VertexId(v)).unwrap();
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        g.add_edge(EdgeId(i as u32), VertexId(u), VertexId(v), None).unwrap();
    }
    for (i, &r) in roots.iter().enumerate() {
        g.set_momentum(VertexId(r), vec![i as u32 + 1]).unwrap();
    }
    g
}

fn k4() -> Multigraph {
    build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], &[0, 1, 2, 3])
}

fn w4() -> Multigraph {
    build(
        5,
        &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)],
        &[1, 2, 3, 4],
    )
}

fn k2_4() -> Multigraph {
    build(
        6,
        &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5)],
        &[2, 3, 4, 5],
    )
}

/// All bijections from `from` onto `to`.
fn bijections(from: &[VertexId], to: &[VertexId]) -> Vec<BTreeMap<VertexId, VertexId>> {
    fn perms(items: &[VertexId]) -> Vec<Vec<VertexId>> {
        if items.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut p in perms(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    perms(to)
        .into_iter()
        .map(|p| from.iter().copied().zip(p).collect())
        .collect()
}

fn screened(g: &Multigraph, roots: &[VertexId]) -> bool {
    for h in [k4(), w4(), k2_4()] {
        if h.num_edges() > g.num_edges() {
            continue;
        }
        let maps = bijections(roots, &h.rooted_vertices());
        if has_rooted_minor(g, &h, &maps).unwrap() {
            return true;
        }
    }
    false
}

fn reducible(g: &Multigraph) -> Option<bool> {
    let ctx = KinematicsContext::new(4, &[1, 2, 3, 4]).unwrap();
    let (ring, psi, phi) = polynomial_pair(g, &ctx).unwrap();
    let vars = schwinger_vars(g, &ring).unwrap();
    let opts = ReductionOptions::default();
    match is_reducible(&ring, &[psi, phi], &vars, &opts) {
        Ok(w) => Some(w.is_some()),
        Err(_) => None,
    }
}

fn two_connected(g: &Multigraph) -> bool {
    if !g.is_connected() || g.num_vertices() < 3 {
        return false;
    }
    for v in g.vertex_ids() {
        let mut h = Multigraph::new();
        for u in g.vertex_ids().filter(|&u| u != v) {
            h.add_vertex(u).unwrap();
        }
        for e in g.edge_ids() {
            let d = g.edge(e).unwrap();
            if d.ends.0 != v && d.ends.1 != v {
                h.add_edge(e, d.ends.0, d.ends.1, None).unwrap();
            }
        }
        if !h.is_connected() {
            return false;
        }
    }
    true
}

/// Simple 2-connected graphs on exactly `n` vertices with `m` edges, up to
/// isomorphism, every vertex of degree >= 2.
fn enumerate(n: u32, m: usize) -> Vec<Multigraph> {
    let pairs: Vec<(u32, u32)> =
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let total = pairs.len();
    let mut pick = vec![0usize; m];
    // Lexicographic combinations of edge indices.
    fn next(pick: &mut Vec<usize>, total: usize) -> bool {
        let m = pick.len();
        let mut i = m;
        while i > 0 {
            i -= 1;
            if pick[i] < total - (m - i) {
                pick[i] += 1;
                for j in (i + 1)..m {
                    pick[j] = pick[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    for (i, slot) in pick.iter_mut().enumerate() {
        *slot = i;
    }
    if m > total {
        return out;
    }
    loop {
        let edges: Vec<(u32, u32)> = pick.iter().map(|&i| pairs[i]).collect();
        let g = build(n, &edges, &[]);
        if g.vertex_ids().all(|v| g.degree(v) >= 2) && two_connected(&g) {
            let key = canonical_key(&g).to_compact_string();
            if seen.insert(key) {
                out.push(g);
            }
        }
        if !next(&mut pick, total) {
            break;
        }
    }
    out
}

/// Distinct 4-subsets of vertices up to the automorphism group.
fn root_sets(g: &Multigraph) -> Vec<Vec<VertexId>> {
    let autos = automorphisms(g);
    let verts: Vec<VertexId> = g.vertex_ids().collect();
    let n = verts.len();
    let mut reps: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let set = vec![verts[a], verts[b], verts[c], verts[d]];
                    let orbit_min = autos
                        .iter()
                        .map(|phi| {
                            let mut img: Vec<VertexId> =
                                set.iter().map(|v| phi[v]).collect();
                            img.sort();
                            img
                        })
                        .min()
                        .unwrap();
                    if reps.insert(orbit_min.clone()) && orbit_min == set {
                        out.push(set);
                    }
                }
            }
        }
    }
    out
}

fn describe(g: &Multigraph, roots: &[VertexId]) -> String {
    let edges: Vec<String> = g
        .edge_ids()
        .map(|e| {
            let d = g.edge(e).unwrap();
            format!("({},{})", d.ends.0, d.ends.1)
        })
        .collect();
    let rs: Vec<String> = roots.iter().map(|v| v.to_string()).collect();
    format!("n={} edges=[{}] roots=[{}]", g.num_vertices(), edges.join(","), rs.join(","))
}

fn main() {
    let t0 = Instant::now();
    let mut candidates: Vec<(Multigraph, Vec<VertexId>)> = Vec::new();
    for n in 4..=7u32 {
        for m in (n as usize)..=8 {
            let graphs = enumerate(n, m);
            eprintln!("n={n} m={m}: {} two-connected graphs  [{:?}]", graphs.len(), t0.elapsed());
            for g in graphs {
                for roots in root_sets(&g) {
                    let mut rooted = g.clone();
                    for (i, &r) in roots.iter().enumerate() {
                        rooted.set_momentum(r, vec![i as u32 + 1]).unwrap();
                    }
                    if screened(&rooted, &roots) {
                        continue;
                    }
                    match reducible(&rooted) {
                        Some(true) => {}
                        Some(false) => {
                            eprintln!("NON-REDUCIBLE: {}", describe(&rooted, &roots));
                            candidates.push((rooted, roots));
                        }
                        None => eprintln!("BUDGET: {}", describe(&rooted, &roots)),
                    }
                }
            }
        }
    }
    eprintln!("\n=== minimality checks ({} candidates) ===", candidates.len());
    for (g, roots) in &candidates {
        let mut minimal = true;
        for e in g.edge_ids() {
            let del = g.delete_edge(e).unwrap();
            if del.is_connected() && reducible(&del) == Some(false) {
                eprintln!("  {} minus edge {e} still non-reducible", describe(g, roots));
                minimal = false;
            }
            let con = g.contract_edge(e).unwrap();
            if reducible(&con) == Some(false) {
                eprintln!("  {} contract edge {e} still non-reducible", describe(g, roots));
                minimal = false;
            }
        }
        if minimal {
            eprintln!("MINIMAL FORBIDDEN: {}", describe(g, roots));
        }
    }
    eprintln!("total {:?}", t0.elapsed());
}
