//! Minor and rooted-minor containment.
//!
//! H is a minor of G iff G's vertices admit pairwise-disjoint connected
//! branch sets, one per vertex of H, such that every H-edge between two
//! vertices is matched by that many distinct G-edges between the
//! corresponding branch sets, and every H-loop by a spare internal edge
//! beyond a branch set's spanning tree.  The rooted variant additionally
//! pins designated G-vertices inside prescribed branch sets.
//!
//! The search enumerates branch sets directly as bitmask subsets with
//! connectivity and multiplicity pruning at each level.  Graphs here are a
//! dozen vertices at most, so the exponential worst case never bites; a
//! canonical-key cache lets batch callers skip repeated unrooted queries.

use super::canon::structural_key;
use super::{GraphError, Multigraph, VertexId};
use std::collections::{BTreeMap, HashMap};

/// Memo for unrooted containment queries keyed by canonical structure.
#[derive(Debug, Default)]
pub struct MinorCache {
    map: HashMap<(String, String), bool>,
}

impl MinorCache {
    pub fn new() -> Self {
        MinorCache::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// True iff `h` is a minor of `g` (momentum labels play no role).
pub fn has_minor(g: &Multigraph, h: &Multigraph) -> bool {
    search(g, h, &BTreeMap::new())
}

/// As [`has_minor`], with memoization across calls.
pub fn has_minor_cached(g: &Multigraph, h: &Multigraph, cache: &mut MinorCache) -> bool {
    let key = (
        structural_key(g).to_compact_string(),
        structural_key(h).to_compact_string(),
    );
    if let Some(&hit) = cache.map.get(&key) {
        return hit;
    }
    let result = search(g, h, &BTreeMap::new());
    cache.map.insert(key, result);
    result
}

/// True iff some supplied root map admits a branch-set assignment in which
/// each mapped G-vertex lies inside the branch set of its image H-vertex.
/// Maps must be injective and reference existing vertices.
pub fn has_rooted_minor(
    g: &Multigraph,
    h: &Multigraph,
    root_maps: &[BTreeMap<VertexId, VertexId>],
) -> Result<bool, GraphError> {
    for map in root_maps {
        let mut images: Vec<VertexId> = map.values().copied().collect();
        images.sort();
        let before = images.len();
        images.dedup();
        if images.len() != before {
            return Err(GraphError::InvalidRootMap("map is not injective".into()));
        }
        for (&x, &hx) in map {
            if !g.has_vertex(x) {
                return Err(GraphError::UnknownVertex(x));
            }
            if !h.has_vertex(hx) {
                return Err(GraphError::UnknownVertex(hx));
            }
        }
    }
    Ok(root_maps.iter().any(|map| search(g, h, map)))
}

struct Search {
    /// Adjacency over dense G indices via non-loop edges.
    adj: Vec<u64>,
    /// For every unordered dense index pair (a<=b), the number of G-edges.
    g_mult: HashMap<(usize, usize), usize>,
    /// H vertices in assignment order with per-level data.
    levels: Vec<Level>,
    n_g: usize,
}

struct Level {
    /// G-vertices that must lie inside this branch set.
    required: u64,
    /// Loops demanded at this H-vertex.
    loops: usize,
    /// (earlier level, required multiplicity) for H-edges back to already
    /// assigned vertices.
    back_edges: Vec<(usize, usize)>,
}

fn search(g: &Multigraph, h: &Multigraph, root_map: &BTreeMap<VertexId, VertexId>) -> bool {
    let n_g = g.num_vertices();
    let n_h = h.num_vertices();
    if n_h == 0 {
        return true;
    }
    assert!(n_g <= 64, "graphs this size are out of scope");
    if n_g < n_h || g.num_edges() < h.num_edges() {
        return false;
    }

    let (g_index, _) = g.vertex_index();
    let mut adj = vec![0u64; n_g];
    let mut g_mult: HashMap<(usize, usize), usize> = HashMap::new();
    for e in g.edge_ids() {
        let d = g.edge(e).expect("listed edge");
        let (a, b) = (g_index[&d.ends.0], g_index[&d.ends.1]);
        if a != b {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        *g_mult.entry(key).or_insert(0) += 1;
    }

    // H data: multiplicities between distinct vertices, loops per vertex.
    let (h_index, _) = h.vertex_index();
    let mut h_mult: HashMap<(usize, usize), usize> = HashMap::new();
    let mut h_loops = vec![0usize; n_h];
    for e in h.edge_ids() {
        let d = h.edge(e).expect("listed edge");
        let (a, b) = (h_index[&d.ends.0], h_index[&d.ends.1]);
        if a == b {
            h_loops[a] += 1;
        } else {
            let key = if a <= b { (a, b) } else { (b, a) };
            *h_mult.entry(key).or_insert(0) += 1;
        }
    }

    // Required G-vertices per H vertex from the root map.
    let mut required = vec![0u64; n_h];
    for (&x, &hx) in root_map {
        required[h_index[&hx]] |= 1 << g_index[&x];
    }

    // Assignment order: rooted H-vertices first (most constrained), then by
    // descending degree; deterministic.
    let mut order: Vec<usize> = (0..n_h).collect();
    let h_deg = |i: usize| {
        (0..n_h)
            .filter(|&j| j != i)
            .map(|j| {
                let key = if i <= j { (i, j) } else { (j, i) };
                h_mult.get(&key).copied().unwrap_or(0)
            })
            .sum::<usize>()
            + 2 * h_loops[i]
    };
    order.sort_by_key(|&i| (required[i] == 0, std::cmp::Reverse(h_deg(i)), i));

    let levels: Vec<Level> = order
        .iter()
        .enumerate()
        .map(|(pos, &hi)| {
            let back_edges = order[..pos]
                .iter()
                .enumerate()
                .filter_map(|(earlier_pos, &hj)| {
                    let key = if hi <= hj { (hi, hj) } else { (hj, hi) };
                    h_mult.get(&key).map(|&m| (earlier_pos, m))
                })
                .collect();
            Level {
                required: required[hi],
                loops: h_loops[hi],
                back_edges,
            }
        })
        .collect();

    let mut s = Search {
        adj,
        g_mult,
        levels,
        n_g,
    };
    let mut chosen: Vec<u64> = Vec::with_capacity(n_h);
    assign(&mut s, &mut chosen, 0)
}

fn assign(s: &mut Search, chosen: &mut Vec<u64>, level: usize) -> bool {
    if level == s.levels.len() {
        return true;
    }
    let used: u64 = chosen.iter().fold(0, |a, &b| a | b);
    let free = !used & low_mask(s.n_g);
    let lv_required = s.levels[level].required;
    if lv_required & !free != 0 {
        return false;
    }
    // Enough free vertices must remain for this and all later levels.
    if (free.count_ones() as usize) < s.levels.len() - level {
        return false;
    }
    for cand in connected_subsets(&s.adj, free, lv_required) {
        if !branch_ok(s, chosen, level, cand) {
            continue;
        }
        chosen.push(cand);
        if assign(s, chosen, level + 1) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Multiplicity and loop-capacity checks for a candidate branch set.
fn branch_ok(s: &Search, chosen: &[u64], level: usize, cand: u64) -> bool {
    let lv = &s.levels[level];
    for &(earlier, need) in &lv.back_edges {
        if cross_edges(s, cand, chosen[earlier]) < need {
            return false;
        }
    }
    if lv.loops > 0 || cand.count_ones() > 1 {
        let internal = internal_edges(s, cand);
        let spanning = cand.count_ones() as usize - 1;
        if internal < spanning + lv.loops {
            return false;
        }
    }
    true
}

fn cross_edges(s: &Search, a: u64, b: u64) -> usize {
    let mut total = 0;
    for (&(x, y), &m) in &s.g_mult {
        let (bx, by) = (1u64 << x, 1u64 << y);
        if (a & bx != 0 && b & by != 0) || (a & by != 0 && b & bx != 0) {
            total += m;
        }
    }
    total
}

fn internal_edges(s: &Search, a: u64) -> usize {
    let mut total = 0;
    for (&(x, y), &m) in &s.g_mult {
        if a & (1 << x) != 0 && a & (1 << y) != 0 {
            total += m;
        }
    }
    total
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All nonempty subsets of `free` that are connected via `adj` and contain
/// `required`, ascending by size then numerically — deterministic order.
fn connected_subsets(adj: &[u64], free: u64, required: u64) -> Vec<u64> {
    let mut out = Vec::new();
    // Enumerate submasks of `free`.
    let mut sub = free;
    loop {
        if sub != 0 && sub & required == required && is_connected_mask(adj, sub) {
            out.push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    out.sort_by_key(|m| (m.count_ones(), *m));
    out
}

fn is_connected_mask(adj: &[u64], mask: u64) -> bool {
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v] & mask & !seen;
        }
        seen |= next;
        frontier = next;
    }
    seen == mask
}

#[cfg(test)]
mod tests {
    use super::super::testgraphs::*;
    use super::*;
    use crate::graph::EdgeId;

    fn single_vertex() -> Multigraph {
        let mut g = Multigraph::new();
        g.add_vertex(VertexId(0)).unwrap();
        g
    }

    #[test]
    fn k4_contains_a_triangle_minor() {
        assert!(has_minor(&complete(4), &triangle()));
    }

    #[test]
    fn c4_has_no_k4_minor() {
        assert!(!has_minor(&cycle(4), &complete(4)));
    }

    #[test]
    fn every_nonempty_graph_contains_the_single_vertex() {
        for g in [triangle(), bubble(), cycle(5)] {
            assert!(has_minor(&g, &single_vertex()));
        }
    }

    #[test]
    fn minor_relation_is_reflexive() {
        for g in [triangle(), bubble(), complete(4), cycle(5)] {
            assert!(has_minor(&g, &g));
        }
    }

    #[test]
    fn parallel_edge_demand_is_respected() {
        // A triangle contains a bubble minor (contract one edge), but a
        // simple path does not.
        assert!(has_minor(&triangle(), &bubble()));
        let mut path = Multigraph::new();
        for v in 0..3 {
            path.add_vertex(VertexId(v)).unwrap();
        }
        path.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        path.add_edge(EdgeId(1), VertexId(1), VertexId(2), None).unwrap();
        assert!(!has_minor(&path, &bubble()));
    }

    #[test]
    fn loop_minor_needs_a_cycle() {
        let mut looped = Multigraph::new();
        looped.add_vertex(VertexId(0)).unwrap();
        looped.add_edge(EdgeId(0), VertexId(0), VertexId(0), None).unwrap();
        // Any graph with a cycle can contract it down to a loop.
        assert!(has_minor(&triangle(), &looped));
        assert!(has_minor(&bubble(), &looped));
        // Trees cannot.
        let mut path = Multigraph::new();
        path.add_vertex(VertexId(0)).unwrap();
        path.add_vertex(VertexId(1)).unwrap();
        path.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        assert!(!has_minor(&path, &looped));
    }

    #[test]
    fn k5_contains_k4() {
        assert!(has_minor(&complete(5), &complete(4)));
    }

    #[test]
    fn rooted_identity_embedding_succeeds() {
        let mut g = complete(4);
        for v in 0..4 {
            g.set_momentum(VertexId(v), vec![v + 1]).unwrap();
        }
        let map: BTreeMap<VertexId, VertexId> =
            (0..4).map(|v| (VertexId(v), VertexId(v))).collect();
        assert_eq!(has_rooted_minor(&g, &complete(4), &[map]), Ok(true));
    }

    #[test]
    fn root_placement_changes_the_verdict() {
        // G: path 0-1-2-3 with roots at the two ends.  H: path a-b-c
        // (vertices 0,1,2).  Mapping the G-ends to the H-ends works; mapping
        // a G-end onto the H-middle cannot (the middle branch set would
        // swallow everything adjacent).
        let mut g = Multigraph::new();
        for v in 0..4 {
            g.add_vertex(VertexId(v)).unwrap();
        }
        for i in 0..3 {
            g.add_edge(EdgeId(i), VertexId(i), VertexId(i + 1), None).unwrap();
        }
        g.set_momentum(VertexId(0), vec![1]).unwrap();
        g.set_momentum(VertexId(3), vec![2]).unwrap();
        let mut h = Multigraph::new();
        for v in 0..3 {
            h.add_vertex(VertexId(v)).unwrap();
        }
        h.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        h.add_edge(EdgeId(1), VertexId(1), VertexId(2), None).unwrap();

        let ends: BTreeMap<VertexId, VertexId> =
            [(VertexId(0), VertexId(0)), (VertexId(3), VertexId(2))].into();
        let middle: BTreeMap<VertexId, VertexId> =
            [(VertexId(0), VertexId(1)), (VertexId(3), VertexId(0))].into();
        assert_eq!(has_rooted_minor(&g, &h, &[ends.clone()]), Ok(true));
        assert_eq!(has_rooted_minor(&g, &h, &[middle.clone()]), Ok(false));
        assert_eq!(has_rooted_minor(&g, &h, &[middle, ends]), Ok(true));
    }

    #[test]
    fn non_injective_root_map_is_rejected() {
        let map: BTreeMap<VertexId, VertexId> =
            [(VertexId(0), VertexId(0)), (VertexId(1), VertexId(0))].into();
        assert!(has_rooted_minor(&triangle(), &bubble(), &[map]).is_err());
    }

    #[test]
    fn minor_monotone_under_edge_addition() {
        let mut bigger = cycle(4);
        bigger.add_edge(EdgeId(9), VertexId(0), VertexId(2), None).unwrap();
        // C4 has a triangle minor (contract one edge); so must C4 + chord.
        assert!(has_minor(&cycle(4), &triangle()));
        assert!(has_minor(&bigger, &triangle()));
    }

    #[test]
    fn cache_round_trips() {
        let mut cache = MinorCache::new();
        assert!(has_minor_cached(&complete(4), &triangle(), &mut cache));
        assert_eq!(cache.len(), 1);
        assert!(has_minor_cached(&complete(4), &triangle(), &mut cache));
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn wheel_contains_k4_minor() {
        // W4: 4-cycle rim 1..4 plus hub 0 joined to every rim vertex.
        let mut w4 = Multigraph::new();
        for v in 0..5 {
            w4.add_vertex(VertexId(v)).unwrap();
        }
        let mut e = 0;
        for i in 1..5 {
            w4.add_edge(EdgeId(e), VertexId(0), VertexId(i), None).unwrap();
            e += 1;
        }
        for i in 1..5 {
            let j = if i == 4 { 1 } else { i + 1 };
            w4.add_edge(EdgeId(e), VertexId(i), VertexId(j), None).unwrap();
            e += 1;
        }
        assert!(has_minor(&w4, &complete(4)));
        assert!(!has_minor(&w4, &complete(5)));
    }
}
