//! Exact vertex width.
//!
//! The width of an edge order is the maximum, over prefixes, of the number
//! of vertices incident to both the prefix and the suffix; the vertex width
//! is the minimum over all edge orders.  Instead of branching over the m!
//! orders directly, the search runs over the subset lattice: the best
//! achievable width of a prefix depends only on the prefix *set*, giving
//!
//! f(S) = max(boundary(S), min over e in S of f(S minus e)),  f(empty) = 0,
//!
//! where boundary(S) counts vertices touched by S and its complement alike.
//! This explores each of the 2^m subsets once, which is exact and far
//! smaller than m! while agreeing with it (every order is a chain in the
//! lattice and every chain is an order).

use super::{GraphError, Multigraph};

/// Hard cap on the edge count: the table has 2^m entries.
const MAX_EDGES: usize = 22;

pub fn vertex_width(g: &Multigraph) -> Result<u32, GraphError> {
    let m = g.num_edges();
    if m == 0 {
        return Err(GraphError::Edgeless);
    }
    if m > MAX_EDGES {
        return Err(GraphError::ResourceLimit(format!(
            "vertex width needs 2^{m} table entries (limit 2^{MAX_EDGES})"
        )));
    }
    let (index, _) = g.vertex_index();
    assert!(index.len() <= 64, "vertex count fits the bitset");

    // Per-edge endpoint bitsets over vertices.
    let masks: Vec<u64> = g
        .edge_ids()
        .map(|e| {
            let d = g.edge(e).expect("listed edge");
            (1u64 << index[&d.ends.0]) | (1u64 << index[&d.ends.1])
        })
        .collect();

    let full: usize = (1usize << m) - 1;
    // Vertices touched by each edge subset, built incrementally.
    let mut touched = vec![0u64; full + 1];
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        touched[s] = touched[s & (s - 1)] | masks[low];
    }

    let mut f = vec![0u8; full + 1];
    for s in 1..=full {
        let boundary = (touched[s] & touched[full ^ s]).count_ones() as u8;
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            best = best.min(f[s ^ (1 << e)]);
        }
        f[s] = best.max(boundary);
    }
    Ok(f[full] as u32)
}

#[cfg(test)]
mod tests {
    use super::super::testgraphs::*;
    use super::super::{EdgeId, Multigraph, VertexId};
    use super::*;

    #[test]
    fn single_edge_has_width_zero() {
        let mut g = Multigraph::new();
        g.add_vertex(VertexId(0)).unwrap();
        g.add_vertex(VertexId(1)).unwrap();
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        assert_eq!(vertex_width(&g), Ok(0));
    }

    #[test]
    fn two_edge_path_has_width_one() {
        let mut g = Multigraph::new();
        for v in 0..3 {
            g.add_vertex(VertexId(v)).unwrap();
        }
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        g.add_edge(EdgeId(1), VertexId(1), VertexId(2), None).unwrap();
        assert_eq!(vertex_width(&g), Ok(1));
    }

    #[test]
    fn triangle_has_width_two() {
        assert_eq!(vertex_width(&triangle()), Ok(2));
    }

    #[test]
    fn cycles_have_width_two() {
        for n in 3..7 {
            assert_eq!(vertex_width(&cycle(n)), Ok(2), "C{n}");
        }
    }

    #[test]
    fn complete_graphs_grow_in_width() {
        assert_eq!(vertex_width(&complete(4)), Ok(3));
        assert_eq!(vertex_width(&complete(5)), Ok(4));
    }

    #[test]
    fn edgeless_graph_is_rejected() {
        let mut g = Multigraph::new();
        g.add_vertex(VertexId(0)).unwrap();
        assert_eq!(vertex_width(&g), Err(GraphError::Edgeless));
    }

    #[test]
    fn width_is_invariant_under_edge_relabeling() {
        let g = complete(4);
        let mut relabeled = Multigraph::new();
        for v in 0..4 {
            relabeled.add_vertex(VertexId(v)).unwrap();
        }
        // Same topology, edge ids scrambled.
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (i, &(u, v)) in edges.iter().enumerate() {
            relabeled
                .add_edge(EdgeId(90 - i as u32), VertexId(u), VertexId(v), None)
                .unwrap();
        }
        assert_eq!(vertex_width(&g), vertex_width(&relabeled));
    }

    #[test]
    fn width_bounded_by_vertex_count() {
        for g in [triangle(), complete(4), cycle(5), bubble()] {
            assert!(vertex_width(&g).unwrap() as usize <= g.num_vertices());
        }
    }

    #[test]
    fn loops_do_not_raise_width() {
        let mut g = triangle();
        g.add_edge(EdgeId(9), VertexId(0), VertexId(0), None).unwrap();
        assert_eq!(vertex_width(&g), Ok(2));
    }
}
