//! Catalog of known obstruction graphs and minor-based screening.
//!
//! Containing one of the cataloged graphs as a (rooted) minor certifies that
//! a graph's polynomials cannot be reduced, because reducibility is
//! inherited by minors.  Screening therefore only ever rules reduction out:
//! the verdict is either "non-reducible, witnessed by some entry" or "no
//! known obstruction" — never "reducible".

use crate::graph::canon::automorphisms;
use crate::graph::io;
use crate::graph::minor::{has_minor, has_rooted_minor};
use crate::graph::{GraphError, Multigraph, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// Which reducibility claim a screening verdict (or catalog entry) is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Notion {
    /// The first graph polynomial on its own; roots play no role.
    FirstPolynomial,
    /// The pair of first and second polynomials for a graph whose four
    /// external legs are all on shell; obstructions carry rooted vertices
    /// and are matched through rooted minors.
    FourPointPair,
}

/// One known obstruction graph.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    /// Short identifier, usable in reports (`K4`, `W4`, ...).
    pub name: &'static str,
    /// The graph itself; rooted entries mark their roots with external legs.
    pub graph: Multigraph,
    /// Where the roots sit, in words.  Empty for unrooted entries.
    pub placement: &'static str,
    /// Which notion of reducibility the entry obstructs.
    pub notion: Notion,
}

/// The built-in obstruction catalog.
///
/// Rooted entries (four-point pair): the complete graph `K4` rooted
/// everywhere, the four-spoke wheel `W4` rooted on its rim, the complete
/// bipartite `K2_4` rooted on the large side, and the two-triangle graph
/// `L`.  Unrooted entries (first polynomial): the complete bipartite `K3_4`
/// and `V8+02`, an eight-cycle with its four long chords plus one short
/// chord.
pub fn build_catalog() -> Vec<CatalogEntry> {
    let raw: [(&'static str, &'static str, &'static str, Notion); 6] = [
        (
            "K4",
            include_str!("../../../catalog/k4.graph"),
            "all four vertices",
            Notion::FourPointPair,
        ),
        (
            "W4",
            include_str!("../../../catalog/w4.graph"),
            "the four rim vertices of degree three",
            Notion::FourPointPair,
        ),
        (
            "K2_4",
            include_str!("../../../catalog/k2_4.graph"),
            "the four vertices of the large side",
            Notion::FourPointPair,
        ),
        (
            "L",
            include_str!("../../../catalog/l.graph"),
            "both vertices of each triangle that lie off the shared path",
            Notion::FourPointPair,
        ),
        ("K3_4", include_str!("../../../catalog/k3_4.graph"), "", Notion::FirstPolynomial),
        ("V8+02", include_str!("../../../catalog/v8_02.graph"), "", Notion::FirstPolynomial),
    ];
    raw.into_iter()
        .map(|(name, text, placement, notion)| {
            let (graph, _) = io::parse(text).expect("bundled catalog graph parses");
            CatalogEntry { name, graph, placement, notion }
        })
        .collect()
}

/// Outcome of matching one catalog entry against a host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryCheck {
    /// Name of the catalog entry.
    pub entry: &'static str,
    /// Whether the entry was found as a (rooted) minor of the host.
    pub found: bool,
}

/// Outcome of a screening pass.
///
/// `witness` names the first entry found inside the host; when present the
/// host is certainly non-reducible for the requested notion.  When absent
/// nothing is proved — the host may or may not be reducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreenReport {
    /// The notion the screening was asked about.
    pub notion: Notion,
    /// Per-entry results, in catalog order (inapplicable entries skipped).
    pub checks: Vec<EntryCheck>,
    /// First entry found, if any.
    pub witness: Option<&'static str>,
}

impl ScreenReport {
    /// Human-readable overall verdict.
    pub fn verdict(&self) -> String {
        match self.witness {
            Some(name) => format!("non-reducible ({name} minor)"),
            None => "no known obstruction".into(),
        }
    }
}

/// Screens a host graph against the catalog.
///
/// For [`Notion::FourPointPair`] the host must have exactly four rooted
/// vertices; every way of identifying them with an entry's roots is tried
/// (up to the entry's own symmetries).  First-polynomial entries are matched
/// as plain minors under both notions, since a reduction of the pair
/// restricts to a reduction of the first polynomial alone.
pub fn screen(g: &Multigraph, notion: Notion) -> Result<ScreenReport, GraphError> {
    let roots = g.rooted_vertices();
    if notion == Notion::FourPointPair && roots.len() != 4 {
        return Err(GraphError::InvalidRootMap(format!(
            "four-point screening needs exactly 4 rooted vertices, the graph has {}",
            roots.len()
        )));
    }
    let mut checks = Vec::new();
    let mut witness = None;
    for entry in build_catalog() {
        let applies = match notion {
            Notion::FirstPolynomial => entry.notion == Notion::FirstPolynomial,
            Notion::FourPointPair => true,
        };
        if !applies {
            continue;
        }
        let found = match entry.notion {
            Notion::FirstPolynomial => has_minor(g, &entry.graph),
            Notion::FourPointPair => {
                let maps = root_bijections(&roots, &entry.graph);
                has_rooted_minor(g, &entry.graph, &maps)?
            }
        };
        if found && witness.is_none() {
            witness = Some(entry.name);
        }
        checks.push(EntryCheck { entry: entry.name, found });
    }
    Ok(ScreenReport { notion, checks, witness })
}

/// All ways of identifying the host roots with an entry's roots, listed up
/// to the entry's root-preserving symmetries.  Two identifications that
/// differ by an automorphism of the entry describe the same embedding
/// problem, so only one representative per orbit is kept.
fn root_bijections(
    host_roots: &[VertexId],
    entry: &Multigraph,
) -> Vec<BTreeMap<VertexId, VertexId>> {
    let entry_roots = entry.rooted_vertices();
    let symmetries: Vec<BTreeMap<VertexId, VertexId>> = automorphisms(entry)
        .into_iter()
        .filter(|a| entry_roots.iter().all(|r| entry_roots.contains(&a[r])))
        .collect();
    let mut seen: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let mut out = Vec::new();
    for images in permutations(&entry_roots) {
        let orbit_min = symmetries
            .iter()
            .map(|s| images.iter().map(|v| s[v]).collect::<Vec<_>>())
            .min()
            .expect("identity symmetry always present");
        if seen.insert(orbit_min) {
            out.push(host_roots.iter().copied().zip(images).collect());
        }
    }
    out
}

fn permutations(items: &[VertexId]) -> Vec<Vec<VertexId>> {
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
    use super::*;
    use crate::graph::EdgeId;

    fn rooted_cycle(n: u32, roots: &[u32]) -> Multigraph {
        let mut g = Multigraph::new();
        for v in 0..n {
            g.add_vertex(VertexId(v)).unwrap();
        }
        for i in 0..n {
            g.add_edge(EdgeId(i), VertexId(i), VertexId((i + 1) % n), None).unwrap();
        }
        for (k, &r) in roots.iter().enumerate() {
            g.set_momentum(VertexId(r), vec![k as u32 + 1]).unwrap();
        }
        g
    }

    fn entry(name: &str) -> CatalogEntry {
        build_catalog().into_iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn catalog_has_the_expected_entries() {
        let catalog = build_catalog();
        let names: Vec<&str> = catalog.iter().map(|e| e.name).collect();
        assert_eq!(names, ["K4", "W4", "K2_4", "L", "K3_4", "V8+02"]);
        for e in &catalog {
            match e.notion {
                Notion::FourPointPair => {
                    assert_eq!(e.graph.rooted_vertices().len(), 4, "{}", e.name);
                    assert!(!e.placement.is_empty(), "{}", e.name);
                }
                Notion::FirstPolynomial => {
                    assert!(e.graph.rooted_vertices().is_empty(), "{}", e.name);
                }
            }
            assert!(e.graph.is_connected(), "{}", e.name);
        }
        let shape =
            |n: &str| (entry(n).graph.num_vertices(), entry(n).graph.num_edges());
        assert_eq!(shape("K4"), (4, 6));
        assert_eq!(shape("W4"), (5, 8));
        assert_eq!(shape("K2_4"), (6, 8));
        assert_eq!(shape("K3_4"), (7, 12));
        assert_eq!(shape("V8+02"), (8, 13));
    }

    #[test]
    fn four_point_screening_requires_exactly_four_roots() {
        let g = rooted_cycle(4, &[0, 1, 2]);
        assert!(matches!(
            screen(&g, Notion::FourPointPair),
            Err(GraphError::InvalidRootMap(_))
        ));
        // The first-polynomial notion does not care about roots.
        assert!(screen(&g, Notion::FirstPolynomial).is_ok());
    }

    #[test]
    fn rooted_entries_witness_themselves() {
        for name in ["K4", "W4", "K2_4", "L"] {
            let e = entry(name);
            let report = screen(&e.graph, Notion::FourPointPair).unwrap();
            assert!(
                report.checks.iter().any(|c| c.entry == name && c.found),
                "{name} not found in itself"
            );
            assert!(report.witness.is_some());
        }
    }

    #[test]
    fn unrooted_entries_witness_themselves_and_nothing_smaller() {
        for name in ["K3_4", "V8+02"] {
            let e = entry(name);
            let report = screen(&e.graph, Notion::FirstPolynomial).unwrap();
            assert_eq!(report.witness, Some(e.name), "{name}");
            // The two first-polynomial entries are incomparable: neither is
            // a minor of the other.
            for check in &report.checks {
                assert_eq!(check.found, check.entry == name, "{name} vs {}", check.entry);
            }
        }
    }

    #[test]
    fn four_cycle_screens_clean() {
        let g = rooted_cycle(4, &[0, 1, 2, 3]);
        let report = screen(&g, Notion::FourPointPair).unwrap();
        assert_eq!(report.witness, None);
        assert_eq!(report.verdict(), "no known obstruction");
        assert!(report.checks.iter().all(|c| !c.found));
    }

    #[test]
    fn verdict_strings_name_the_witness() {
        let e = entry("K4");
        let report = screen(&e.graph, Notion::FourPointPair).unwrap();
        assert_eq!(report.verdict(), "non-reducible (K4 minor)");
    }

    #[test]
    fn root_identifications_are_deduplicated_by_entry_symmetry() {
        let host_roots: Vec<VertexId> = (0..4).map(VertexId).collect();
        // All 24 identifications collapse under the full symmetric group of
        // K4 and of the large side of K2_4; the wheel's rim only admits its
        // eight rotations and reflections.
        assert_eq!(root_bijections(&host_roots, &entry("K4").graph).len(), 1);
        assert_eq!(root_bijections(&host_roots, &entry("W4").graph).len(), 3);
        assert_eq!(root_bijections(&host_roots, &entry("K2_4").graph).len(), 1);
    }

    #[test]
    fn screening_sees_through_subdivisions() {
        // Subdivide one rim edge of the wheel: the wheel is still a rooted
        // minor (contract the new edge back), so the witness must survive.
        let g = entry("W4").graph;
        let subdivided = EdgeId(4);
        let (u, v) = g.edge(subdivided).unwrap().ends;
        let g = {
            let mut h = g.delete_edge(subdivided).unwrap();
            h.add_vertex(VertexId(9)).unwrap();
            h.add_edge(EdgeId(8), u, VertexId(9), None).unwrap();
            h.add_edge(EdgeId(9), VertexId(9), v, None).unwrap();
            h
        };
        let report = screen(&g, Notion::FourPointPair).unwrap();
        assert_eq!(report.witness, Some("W4"));
    }

    #[test]
    fn first_polynomial_obstructions_also_obstruct_the_pair() {
        // Root four vertices of the bipartite obstruction arbitrarily: the
        // unrooted entry must still be matched under the pair notion.
        let mut g = entry("K3_4").graph;
        for (k, v) in [3u32, 4, 5, 6].into_iter().enumerate() {
            g.set_momentum(VertexId(v), vec![k as u32 + 1]).unwrap();
        }
        let report = screen(&g, Notion::FourPointPair).unwrap();
        let k34 = report.checks.iter().find(|c| c.entry == "K3_4").unwrap();
        assert!(k34.found);
        assert!(report.witness.is_some());
    }
}
