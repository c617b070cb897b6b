//! Compatibility-graph reduction of polynomial sets.
//!
//! A *labeled set* holds irreducible, canonically normalized polynomials,
//! each carrying provenance labels: 2-element tuples over `{0, 1…n, ∞}`
//! where `i` refers to the (1-based) position of a member in the set the
//! current one was derived from.  A *compatibility graph* on the set
//! licenses which pairwise resultants enter the next elimination step.
//!
//! One elimination step in variable `v` takes every member `f_i = g_i·v +
//! h_i` (linear in `v`, or the step fails) and collects the irreducible
//! factors of
//!
//! - each `g_i`, labeled `{0,i}`,
//! - each `h_i`, labeled `{i,∞}` — plus `{0,i}` as well when `g_i = 0`,
//! - each `g_i·h_j − h_i·g_j` over pairs `ij` adjacent in the compatibility
//!   graph, labeled `{i,j}`.
//!
//! Zeros vanish and constants are dropped (dropping never changes the
//! reducibility verdict; `keep_constants` retains them as the single member
//! `1` for cross-checks).  Two new members become adjacent exactly when some
//! label tuple of one intersects some tuple of the other.
//!
//! [`engine`] builds on the single step: order-symmetric bracket sets by
//! intersecting all one-variable extensions, and the subset dynamic program
//! deciding whether *any* elimination order works.

use crate::poly::{FactorBudget, PolyError, Polynomial, Ring, Var};
use num_rational::BigRational;
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub mod cache;
mod engine;

pub use engine::{fubini_is_reducible, is_reducible, is_reducible_with_order, ReductionState};

/// One end of a provenance label tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelEnd {
    Zero,
    /// 1-based position of a member in the pre-step set.
    Member(u32),
    Inf,
}

impl fmt::Display for LabelEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelEnd::Zero => write!(f, "0"),
            LabelEnd::Member(k) => write!(f, "{k}"),
            LabelEnd::Inf => write!(f, "inf"),
        }
    }
}

/// Unordered 2-tuple, stored sorted.
pub type LabelPair = (LabelEnd, LabelEnd);

fn label_pair(a: LabelEnd, b: LabelEnd) -> LabelPair {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn pairs_intersect(a: &LabelPair, b: &LabelPair) -> bool {
    a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
}

/// An irreducible, normalized polynomial with its provenance labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPoly {
    pub poly: Polynomial,
    pub labels: BTreeSet<LabelPair>,
}

/// Deduplicated (modulo constant prefactor), sorted set of labeled members.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledSet {
    pub members: Vec<LabeledPoly>,
}

impl LabeledSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn polys(&self) -> impl Iterator<Item = &Polynomial> {
        self.members.iter().map(|m| &m.poly)
    }

    /// All members linear (degree ≤ 1) in `v`.
    pub fn linear_in(&self, v: Var) -> bool {
        self.members.iter().all(|m| m.poly.linear_in(v))
    }

    pub fn first_nonlinear(&self, v: Var) -> Option<&Polynomial> {
        self.members.iter().map(|m| &m.poly).find(|p| !p.linear_in(v))
    }

    /// One member per line: `poly  {labels}`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.members {
            let labels: Vec<String> =
                m.labels.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
            out.push_str(&format!("{}  {}\n", m.poly.to_text(), labels.join(",")));
        }
        out
    }
}

/// Adjacency over member indices (0-based positions in `LabeledSet::members`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityGraph {
    pub n: usize,
    pub edges: BTreeSet<(u32, u32)>,
}

impl CompatibilityGraph {
    pub fn complete(n: usize) -> CompatibilityGraph {
        let mut edges = BTreeSet::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                edges.insert((i, j));
            }
        }
        CompatibilityGraph { n, edges }
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges.contains(&(a, b))
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("member `{member}` is not linear in {var}")]
    NotLinear { var: String, member: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("reduction cache: {0}")]
    Cache(String),
}

impl From<PolyError> for ReductionError {
    fn from(e: PolyError) -> ReductionError {
        ReductionError::Budget(e.to_string())
    }
}

/// Knobs shared by every entry point.
#[derive(Debug, Clone)]
pub struct ReductionOptions {
    /// Retain constants as the single member `1` instead of dropping them.
    pub keep_constants: bool,
    /// Require every branch of a bracket intersection to exist, instead of
    /// intersecting over those that do.
    pub strict_brackets: bool,
    /// Force every compatibility graph complete (all pairwise resultants).
    pub fubini: bool,
    pub factor_budget: FactorBudget,
    /// Hard cap on the number of elimination variables (the subset program
    /// is exponential in it).
    pub max_vars: usize,
    /// Directory for the persistent bracket cache, if any.
    pub cache_dir: Option<std::path::PathBuf>,
}

impl Default for ReductionOptions {
    fn default() -> ReductionOptions {
        ReductionOptions {
            keep_constants: false,
            strict_brackets: false,
            fubini: false,
            factor_budget: FactorBudget::default(),
            max_vars: 12,
            cache_dir: None,
        }
    }
}

/// Normalizes the input polynomials into the starting state: zeros (and, by
/// default, constants) vanish, duplicates modulo constant prefactor merge,
/// and the compatibility graph is complete.
pub fn initial_state(
    ring: &Ring,
    polys: &[Polynomial],
    opts: &ReductionOptions,
) -> (LabeledSet, CompatibilityGraph) {
    let mut seen: BTreeSet<Polynomial> = BTreeSet::new();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        if p.is_constant() {
            if opts.keep_constants {
                seen.insert(Polynomial::constant(ring, BigRational::one()));
            }
            continue;
        }
        seen.insert(p.normalized());
    }
    let members: Vec<LabeledPoly> =
        seen.into_iter().map(|poly| LabeledPoly { poly, labels: BTreeSet::new() }).collect();
    let graph = CompatibilityGraph::complete(members.len());
    (LabeledSet { members }, graph)
}

/// One elimination step in `v`; errors if any member is nonlinear in `v`.
pub fn reduction_step(
    ring: &Ring,
    set: &LabeledSet,
    graph: &CompatibilityGraph,
    v: Var,
    opts: &ReductionOptions,
) -> Result<(LabeledSet, CompatibilityGraph), ReductionError> {
    if let Some(p) = set.first_nonlinear(v) {
        return Err(ReductionError::NotLinear {
            var: ring.name(v).to_string(),
            member: p.to_text(),
        });
    }
    let n = set.members.len();
    let gs: Vec<Polynomial> = set.members.iter().map(|m| m.poly.partial_derivative(v)).collect();
    let hs: Vec<Polynomial> = set.members.iter().map(|m| m.poly.eval_zero(v)).collect();

    let mut bucket: BTreeMap<Polynomial, BTreeSet<LabelPair>> = BTreeMap::new();
    let add = |bucket: &mut BTreeMap<Polynomial, BTreeSet<LabelPair>>,
                   poly: &Polynomial,
                   pair: LabelPair|
     -> Result<(), ReductionError> {
        if poly.is_zero() {
            return Ok(());
        }
        if poly.is_constant() {
            if opts.keep_constants {
                let one = Polynomial::constant(ring, BigRational::one());
                bucket.entry(one).or_default().insert(pair);
            }
            return Ok(());
        }
        for (factor, _mult) in poly.factor_over_q(&opts.factor_budget)?.factors {
            bucket.entry(factor).or_default().insert(pair);
        }
        Ok(())
    };

    for i in 0..n {
        let me = LabelEnd::Member(i as u32 + 1);
        add(&mut bucket, &gs[i], label_pair(LabelEnd::Zero, me))?;
        add(&mut bucket, &hs[i], label_pair(me, LabelEnd::Inf))?;
        if gs[i].is_zero() {
            // Degree-0 member: it survives unchanged and plays both roles.
            add(&mut bucket, &hs[i], label_pair(LabelEnd::Zero, me))?;
        }
    }
    let pairs: Vec<(u32, u32)> = if opts.fubini {
        CompatibilityGraph::complete(n).edges.into_iter().collect()
    } else {
        graph.edges.iter().copied().collect()
    };
    for (i, j) in pairs {
        let r = Polynomial::pair_resultant(
            &set.members[i as usize].poly,
            &set.members[j as usize].poly,
            v,
        )?;
        add(&mut bucket, &r, label_pair(LabelEnd::Member(i + 1), LabelEnd::Member(j + 1)))?;
    }

    let members: Vec<LabeledPoly> =
        bucket.into_iter().map(|(poly, labels)| LabeledPoly { poly, labels }).collect();
    let graph = graph_from_labels(&members, opts.fubini);
    Ok((LabeledSet { members }, graph))
}

fn graph_from_labels(members: &[LabeledPoly], fubini: bool) -> CompatibilityGraph {
    if fubini {
        return CompatibilityGraph::complete(members.len());
    }
    let mut edges = BTreeSet::new();
    for i in 0..members.len() as u32 {
        for j in (i + 1)..members.len() as u32 {
            let ml = &members[i as usize].labels;
            let nl = &members[j as usize].labels;
            if ml.iter().any(|a| nl.iter().any(|b| pairs_intersect(a, b))) {
                edges.insert((i, j));
            }
        }
    }
    CompatibilityGraph { n: members.len(), edges }
}

/// Where a single-order reduction stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleFailure {
    /// 0-based index into the order at which the step could not be taken.
    pub step: usize,
    pub var: Var,
    /// The offending nonlinear member.
    pub member: Polynomial,
}

/// All intermediate states of a single-order reduction; `states[0]` is the
/// initial state and `states[k]` the result after eliminating `order[k-1]`.
#[derive(Debug, Clone)]
pub struct SimpleReduction {
    pub states: Vec<(LabeledSet, CompatibilityGraph)>,
    pub failure: Option<SimpleFailure>,
}

impl SimpleReduction {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs the elimination along one fixed order, recording every state.
/// Nonlinearity is a reported outcome, not an error.
pub fn simple_reduction(
    ring: &Ring,
    polys: &[Polynomial],
    order: &[Var],
    opts: &ReductionOptions,
) -> Result<SimpleReduction, ReductionError> {
    let mut states = vec![initial_state(ring, polys, opts)];
    for (k, &v) in order.iter().enumerate() {
        let (set, graph) = states.last().unwrap();
        if let Some(p) = set.first_nonlinear(v) {
            let member = p.clone();
            return Ok(SimpleReduction {
                states,
                failure: Some(SimpleFailure { step: k, var: v, member }),
            });
        }
        let next = reduction_step(ring, set, graph, v, opts)?;
        states.push(next);
    }
    Ok(SimpleReduction { states, failure: None })
}
