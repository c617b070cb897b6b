//! First and second graph polynomials.
//!
//! The first polynomial sums, over all spanning trees, the product of the
//! Schwinger variables of the edges *outside* the tree.  The second sums,
//! over all spanning two-forests, the squared momentum flowing between the
//! two parts times the product of the variables outside the forest, plus a
//! mass correction `Ψ · Σ α_e · msq_e` over the massive edges.
//!
//! Both are built by direct enumeration (the forest terms need per-forest
//! momentum partitions anyway); an independent reduced-Laplacian determinant
//! serves as a cross-check for the first polynomial.

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::kinematics::{KinematicsContext, KinematicsError};
use crate::poly::{Polynomial, Ring, Var, VarKind};
use num_rational::BigRational;
use num_traits::One;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymanzikError {
    #[error("ring is missing the variable `{0}`")]
    MissingVariable(String),
    #[error("the determinant oracle requires a connected graph")]
    Disconnected,
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("graph polynomial is malformed: {0}")]
    Internal(String),
}

/// Schwinger variable name for an edge: `a<id>`.
pub fn schwinger_name(e: EdgeId) -> String {
    format!("a{}", e.0)
}

/// Squared-mass symbol for a mass label: `msq_<label>`.
pub fn mass_square_name(sym: &str) -> String {
    format!("msq_{sym}")
}

/// Ring holding one Schwinger variable per edge (ascending edge id), then
/// the invariant basis of `ctx`, then the squared masses (ascending label).
pub fn ring_for(g: &Multigraph, ctx: &KinematicsContext) -> Ring {
    let mut vars: Vec<(String, VarKind)> = Vec::new();
    for e in g.edge_ids() {
        vars.push((schwinger_name(e), VarKind::Schwinger));
    }
    for name in ctx.basis() {
        vars.push((name, VarKind::Kinematic));
    }
    let mut mass_names: Vec<String> =
        g.mass_symbols().into_iter().map(|(_, sym)| mass_square_name(&sym)).collect();
    mass_names.sort();
    mass_names.dedup();
    for name in mass_names {
        vars.push((name, VarKind::Kinematic));
    }
    Ring::new(vars).expect("edge ids, invariant names, and mass labels cannot collide")
}

/// The Schwinger variables of `g` inside `ring`, ascending edge id.
pub fn schwinger_vars(g: &Multigraph, ring: &Ring) -> Result<Vec<Var>, SymanzikError> {
    g.edge_ids()
        .map(|e| {
            let name = schwinger_name(e);
            ring.var(&name).ok_or(SymanzikError::MissingVariable(name))
        })
        .collect()
}

/// First graph polynomial by spanning-tree enumeration.  Zero for
/// disconnected graphs; `1` for a graph on at most one vertex and no edges.
pub fn first_symanzik(g: &Multigraph, ring: &Ring) -> Result<Polynomial, SymanzikError> {
    let vars = edge_var_map(g, ring)?;
    let mut acc = Polynomial::zero(ring);
    for tree in g.spanning_trees() {
        acc = &acc + &complement_monomial(g, &tree, &vars, ring);
    }
    Ok(acc)
}

/// Second graph polynomial by two-forest enumeration plus the mass term.
/// Zero for disconnected graphs.
pub fn second_symanzik(
    g: &Multigraph,
    ctx: &KinematicsContext,
    ring: &Ring,
) -> Result<Polynomial, SymanzikError> {
    let vars = edge_var_map(g, ring)?;
    let mut acc = Polynomial::zero(ring);
    for forest in g.spanning_2forests() {
        let mut legs: Vec<u32> = Vec::new();
        for &v in &forest.part1 {
            legs.extend_from_slice(g.momentum(v).expect("forest vertices exist"));
        }
        let q2 = ctx.momentum_square(ring, &legs)?;
        if q2.is_zero() {
            continue;
        }
        let mut cut: BTreeSet<EdgeId> = forest.tree1.clone();
        cut.extend(forest.tree2.iter().copied());
        acc = &acc + &(&q2 * &complement_monomial(g, &cut, &vars, ring));
    }
    let masses = mass_term(g, ring)?;
    if !masses.is_zero() {
        let psi = first_symanzik(g, ring)?;
        acc = &acc + &(&psi * &masses);
    }
    Ok(acc)
}

/// `Σ_{massive e} α_e · msq_e`.
fn mass_term(g: &Multigraph, ring: &Ring) -> Result<Polynomial, SymanzikError> {
    let mut acc = Polynomial::zero(ring);
    for e in g.edge_ids() {
        if let Some(sym) = &g.edge(e).expect("edge exists").mass {
            let a = lookup(ring, &schwinger_name(e))?;
            let m = lookup(ring, &mass_square_name(sym))?;
            acc = &acc + &Polynomial::monomial(ring, &[(a, 1), (m, 1)], BigRational::one());
        }
    }
    Ok(acc)
}

/// Convenience: the shared ring plus both polynomials.
pub fn polynomial_pair(
    g: &Multigraph,
    ctx: &KinematicsContext,
) -> Result<(Ring, Polynomial, Polynomial), SymanzikError> {
    let ring = ring_for(g, ctx);
    let psi = first_symanzik(g, &ring)?;
    let phi = second_symanzik(g, ctx, &ring)?;
    Ok((ring, psi, phi))
}

/// Independent construction of the first polynomial: the reduced weighted
/// Laplacian determinant yields the spanning-tree generating polynomial
/// (each tree as the product of its *own* edges), which is then flipped to
/// the complement form.  Errors on disconnected input.
pub fn first_symanzik_oracle(g: &Multigraph, ring: &Ring) -> Result<Polynomial, SymanzikError> {
    if !g.is_connected() {
        return Err(SymanzikError::Disconnected);
    }
    let vars = edge_var_map(g, ring)?;
    let verts: Vec<VertexId> = g.vertex_ids().collect();
    let n = verts.len();
    if n <= 1 {
        // A single tree with no edges; its complement is every edge (loops).
        return Ok(complement_monomial(g, &BTreeSet::new(), &vars, ring));
    }
    let index: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = n - 1;
    let mut lap = vec![vec![Polynomial::zero(ring); m]; m];
    for e in g.edge_ids() {
        let data = g.edge(e).expect("edge exists");
        if g.is_loop(e).expect("edge exists") {
            continue;
        }
        let (u, v) = (index[&data.ends.0], index[&data.ends.1]);
        let a = Polynomial::variable(ring, vars[&e]);
        // Drop row/column 0 of the full Laplacian.
        if u > 0 {
            lap[u - 1][u - 1] = &lap[u - 1][u - 1] + &a;
        }
        if v > 0 {
            lap[v - 1][v - 1] = &lap[v - 1][v - 1] + &a;
        }
        if u > 0 && v > 0 {
            lap[u - 1][v - 1] = &lap[u - 1][v - 1] - &a;
            lap[v - 1][u - 1] = &lap[v - 1][u - 1] - &a;
        }
    }
    let kirchhoff = determinant(&lap, ring);
    // Flip each tree monomial to its complement.
    let mut acc = Polynomial::zero(ring);
    for (mono, coeff) in kirchhoff.terms_desc() {
        if !coeff.is_one() {
            return Err(SymanzikError::Internal(format!(
                "tree generating polynomial has coefficient {coeff}"
            )));
        }
        let tree: BTreeSet<EdgeId> = g
            .edge_ids()
            .filter(|e| mono.exp(vars[e]) > 0)
            .collect();
        if tree.len() != m {
            return Err(SymanzikError::Internal("tree monomial of wrong degree".into()));
        }
        acc = &acc + &complement_monomial(g, &tree, &vars, ring);
    }
    Ok(acc)
}

/// Laplace expansion along the first remaining row, memoized on the column
/// set (the row index is determined by the popcount).
fn determinant(mat: &[Vec<Polynomial>], ring: &Ring) -> Polynomial {
    fn rec(
        mat: &[Vec<Polynomial>],
        ring: &Ring,
        row: usize,
        cols: u64,
        memo: &mut HashMap<u64, Polynomial>,
    ) -> Polynomial {
        if row == mat.len() {
            return Polynomial::constant(ring, BigRational::one());
        }
        if let Some(hit) = memo.get(&cols) {
            return hit.clone();
        }
        let mut acc = Polynomial::zero(ring);
        let mut sign = true;
        for j in 0..mat.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = &mat[row][j];
            if !entry.is_zero() {
                let sub = rec(mat, ring, row + 1, cols & !(1 << j), memo);
                let term = entry * &sub;
                acc = if sign { &acc + &term } else { &acc - &term };
            }
            sign = !sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let full = if mat.is_empty() { 0 } else { (1u64 << mat.len()) - 1 };
    rec(mat, ring, 0, full, &mut HashMap::new())
}

fn lookup(ring: &Ring, name: &str) -> Result<Var, SymanzikError> {
    ring.var(name).ok_or_else(|| SymanzikError::MissingVariable(name.to_string()))
}

fn edge_var_map(g: &Multigraph, ring: &Ring) -> Result<HashMap<EdgeId, Var>, SymanzikError> {
    g.edge_ids()
        .map(|e| {
            let name = schwinger_name(e);
            ring.var(&name).map(|v| (e, v)).ok_or(SymanzikError::MissingVariable(name))
        })
        .collect()
}

/// Product of the Schwinger variables of the edges *not* in `kept`.
fn complement_monomial(
    g: &Multigraph,
    kept: &BTreeSet<EdgeId>,
    vars: &HashMap<EdgeId, Var>,
    ring: &Ring,
) -> Polynomial {
    let powers: Vec<(Var, u32)> = g
        .edge_ids()
        .filter(|e| !kept.contains(e))
        .map(|e| (vars[&e], 1))
        .collect();
    Polynomial::monomial(ring, &powers, BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testgraphs::{bubble, complete, cycle, triangle};
    use crate::graph::Multigraph;

    fn p(ring: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    fn no_momenta() -> KinematicsContext {
        KinematicsContext::trivial()
    }

    #[test]
    fn triangle_first_polynomial() {
        let g = triangle();
        let ring = ring_for(&g, &no_momenta());
        let psi = first_symanzik(&g, &ring).unwrap();
        assert_eq!(psi, p(&ring, "1*a1 + 1*a2 + 1*a3"));
    }

    #[test]
    fn bubble_first_polynomial() {
        let g = bubble();
        let ring = ring_for(&g, &no_momenta());
        assert_eq!(first_symanzik(&g, &ring).unwrap(), p(&ring, "1*a0 + 1*a1"));
    }

    #[test]
    fn tree_graph_has_unit_first_polynomial() {
        let mut g = Multigraph::new();
        for v in 0..3 {
            g.add_vertex(VertexId(v)).unwrap();
        }
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        g.add_edge(EdgeId(1), VertexId(1), VertexId(2), None).unwrap();
        let ring = ring_for(&g, &no_momenta());
        assert_eq!(first_symanzik(&g, &ring).unwrap(), p(&ring, "1"));
    }

    #[test]
    fn loop_edge_multiplies_first_polynomial() {
        // Bubble plus a loop at vertex 0: Ψ = α_loop · (α0 + α1).
        let mut g = bubble();
        g.add_edge(EdgeId(7), VertexId(0), VertexId(0), None).unwrap();
        let ring = ring_for(&g, &no_momenta());
        assert_eq!(
            first_symanzik(&g, &ring).unwrap(),
            p(&ring, "1*a0*a7 + 1*a1*a7")
        );
    }

    #[test]
    fn disconnected_graph_gives_zero() {
        let mut g = Multigraph::new();
        for v in 0..4 {
            g.add_vertex(VertexId(v)).unwrap();
        }
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), None).unwrap();
        g.add_edge(EdgeId(1), VertexId(2), VertexId(3), None).unwrap();
        let ctx = no_momenta();
        let ring = ring_for(&g, &ctx);
        assert!(first_symanzik(&g, &ring).unwrap().is_zero());
        assert!(second_symanzik(&g, &ctx, &ring).unwrap().is_zero());
        assert_eq!(first_symanzik_oracle(&g, &ring), Err(SymanzikError::Disconnected));
    }

    #[test]
    fn bubble_second_polynomial_off_shell() {
        // Two external legs ρ and -ρ on the bubble's vertices; massless.
        let mut g = bubble();
        g.set_momentum(VertexId(0), vec![1]).unwrap();
        g.set_momentum(VertexId(1), vec![2]).unwrap();
        let ctx = KinematicsContext::new(2, &[]).unwrap();
        let ring = ring_for(&g, &ctx);
        let phi = second_symanzik(&g, &ctx, &ring).unwrap();
        assert_eq!(phi, p(&ring, "1*a0*a1*s_1_1"));
    }

    #[test]
    fn massive_bubble_gains_mass_term() {
        let mut g = Multigraph::new();
        g.add_vertex(VertexId(0)).unwrap();
        g.add_vertex(VertexId(1)).unwrap();
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), Some("m".into())).unwrap();
        g.add_edge(EdgeId(1), VertexId(0), VertexId(1), None).unwrap();
        g.set_momentum(VertexId(0), vec![1]).unwrap();
        g.set_momentum(VertexId(1), vec![2]).unwrap();
        let ctx = KinematicsContext::new(2, &[]).unwrap();
        let ring = ring_for(&g, &ctx);
        let phi = second_symanzik(&g, &ctx, &ring).unwrap();
        // Φ = s·a0·a1 + (a0+a1)·a0·msq_m
        assert_eq!(
            phi,
            p(&ring, "1*a0*a1*s_1_1 + 1*a0^2*msq_m + 1*a0*a1*msq_m")
        );
    }

    #[test]
    fn onshell_legs_drop_forest_terms() {
        // Bubble with both legs on-shell: (ρ₁)² = 0, so Φ = 0 entirely.
        let mut g = bubble();
        g.set_momentum(VertexId(0), vec![1]).unwrap();
        g.set_momentum(VertexId(1), vec![2]).unwrap();
        let ctx = KinematicsContext::new(2, &[1, 2]).unwrap();
        let ring = ring_for(&g, &ctx);
        assert!(second_symanzik(&g, &ctx, &ring).unwrap().is_zero());
    }

    #[test]
    fn triangle_second_polynomial_three_point() {
        // One leg per vertex, all off-shell.
        let mut g = triangle();
        g.set_momentum(VertexId(0), vec![1]).unwrap();
        g.set_momentum(VertexId(1), vec![2]).unwrap();
        g.set_momentum(VertexId(2), vec![3]).unwrap();
        let ctx = KinematicsContext::new(3, &[]).unwrap();
        let ring = ring_for(&g, &ctx);
        let phi = second_symanzik(&g, &ctx, &ring).unwrap();
        // Forests split off one vertex each: {0} vs {1,2} cuts e1,e3 keeping
        // e2, etc.  (ρ₃)² = s_1_1 + s_1_2 + s_2_2.
        let want = p(
            &ring,
            "1*a1*a3*s_1_1 + 1*a1*a2*s_2_2 + \
             1*a2*a3*s_1_1 + 1*a2*a3*s_1_2 + 1*a2*a3*s_2_2",
        );
        assert_eq!(phi, want);
    }

    #[test]
    fn oracle_matches_enumeration_on_small_graphs() {
        let ctx = no_momenta();
        for g in [triangle(), bubble(), cycle(4), cycle(5), complete(4)] {
            let ring = ring_for(&g, &ctx);
            assert_eq!(
                first_symanzik(&g, &ring).unwrap(),
                first_symanzik_oracle(&g, &ring).unwrap(),
            );
        }
    }

    #[test]
    fn oracle_handles_loops_and_parallels() {
        let mut g = bubble();
        g.add_edge(EdgeId(5), VertexId(0), VertexId(0), None).unwrap();
        g.add_edge(EdgeId(6), VertexId(0), VertexId(1), None).unwrap();
        let ring = ring_for(&g, &no_momenta());
        assert_eq!(
            first_symanzik(&g, &ring).unwrap(),
            first_symanzik_oracle(&g, &ring).unwrap(),
        );
    }

    #[test]
    fn contraction_deletion_on_first_polynomial() {
        // Ψ_G = Ψ_{G∖e} · α_e + Ψ_{G/e} for a regular (non-loop, non-bridge)
        // edge e of the triangle.
        let g = triangle();
        let ring = ring_for(&g, &no_momenta());
        let psi = first_symanzik(&g, &ring).unwrap();
        let e = EdgeId(1);
        let v = ring.var("a1").unwrap();
        let deleted = first_symanzik(&g.delete_edge(e).unwrap(), &ring).unwrap();
        let contracted = first_symanzik(&g.contract_edge(e).unwrap(), &ring).unwrap();
        let rebuilt = &(&deleted * &Polynomial::variable(&ring, v)) + &contracted;
        assert_eq!(psi, rebuilt);
    }
}
