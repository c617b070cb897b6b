//! Order-symmetric bracket sets and the reducibility decision.
//!
//! For a variable subset `A`, the bracket `S_[A]` intersects — modulo
//! constant prefactors, with edge sets intersected over matched members —
//! the one-step extensions `S_[A∖a](α_a)` over every `a ∈ A` whose branch
//! exists (i.e. `S_[A∖a]` is defined and linear in `α_a`).  A subset with no
//! existing branch is undefined.  With `strict_brackets`, *every* branch
//! must exist instead.
//!
//! The decision runs level by level over subset sizes, keeping only the
//! previous layer's sets in memory (evicted layers live in the optional
//! disk cache); per-subset definedness and admissible-next-variable bits are
//! retained throughout, which is all the witness reconstruction needs.  The
//! returned witness is the lexicographically least successful order by
//! variable id.

use super::cache::DiskCache;
use super::{
    initial_state, reduction_step, CompatibilityGraph, LabeledPoly, LabeledSet, ReductionError,
    ReductionOptions,
};
use crate::poly::{Polynomial, Ring, Var};
use std::collections::{BTreeSet, HashMap};

type State = (LabeledSet, CompatibilityGraph);

#[derive(Clone, Copy)]
struct SubsetInfo {
    defined: bool,
    /// Bit `j` set: every member of this subset's bracket is linear in
    /// `vars[j]` (only meaningful when `defined`).
    admissible: u64,
}

/// Memoized bracket-set computation over one polynomial set.
pub struct ReductionState {
    ring: Ring,
    vars: Vec<Var>,
    opts: ReductionOptions,
    /// Normalized input state — the empty subset's bracket, kept permanently
    /// so evicted subtrees can always be recomputed from the bottom.
    base: State,
    /// Bracket sets; entries may be evicted once their layer is complete.
    resolved: HashMap<u64, State>,
    /// Permanent per-subset record (`None` state ⇒ undefined subsets simply
    /// have `defined = false`).
    info: HashMap<u64, SubsetInfo>,
    cache: Option<DiskCache>,
}

impl ReductionState {
    /// `vars` are the elimination variables (deduplicated and sorted by id;
    /// subset bits refer to that order).
    pub fn new(
        ring: &Ring,
        polys: &[Polynomial],
        vars: &[Var],
        opts: &ReductionOptions,
    ) -> Result<ReductionState, ReductionError> {
        let mut vars: Vec<Var> = vars.to_vec();
        vars.sort_unstable();
        vars.dedup();
        if vars.len() > opts.max_vars {
            return Err(ReductionError::Budget(format!(
                "{} elimination variables exceed the limit of {}",
                vars.len(),
                opts.max_vars
            )));
        }
        let base = initial_state(ring, polys, opts);
        let cache = match &opts.cache_dir {
            Some(dir) => Some(DiskCache::open(dir, ring, polys, &vars, opts)?),
            None => None,
        };
        let mut st = ReductionState {
            ring: ring.clone(),
            vars,
            opts: opts.clone(),
            base: base.clone(),
            resolved: HashMap::new(),
            info: HashMap::new(),
            cache,
        };
        st.record(0, Some(base))?;
        Ok(st)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    fn mask_of(&self, subset: &[Var]) -> Option<u64> {
        let mut mask = 0u64;
        for v in subset {
            mask |= 1 << self.vars.binary_search(v).ok()?;
        }
        Some(mask)
    }

    /// The bracket set of `subset`, resolving any unresolved subsets on
    /// demand (so the resolution order never matters).  `None` means the
    /// subset is undefined/unreachable.
    pub fn bracket(&mut self, subset: &[Var]) -> Result<Option<&State>, ReductionError> {
        let mask = match self.mask_of(subset) {
            Some(m) => m,
            None => return Ok(None),
        };
        if subset.len() != mask.count_ones() as usize {
            return Ok(None); // duplicates
        }
        self.resolve(mask)?;
        Ok(self.resolved.get(&mask))
    }

    /// Ensures `info` (and, when defined, `resolved`) holds `mask`.
    fn resolve(&mut self, mask: u64) -> Result<bool, ReductionError> {
        if let Some(i) = self.info.get(&mask) {
            let defined = i.defined;
            if !defined || self.resolved.contains_key(&mask) {
                return Ok(defined);
            }
            // Evicted: reload from disk or recompute below.
            if let Some(state) = self.cache_load(mask)? {
                self.resolved.insert(mask, state);
                return Ok(true);
            }
        } else if let Some(cached) = self.cache_probe(mask)? {
            let defined = cached.is_some();
            self.record_info(mask, &cached);
            if let Some(state) = cached {
                self.resolved.insert(mask, state);
            }
            return Ok(defined);
        }
        let state = self.compute(mask)?;
        self.record(mask, state)
    }

    /// Computes the bracket by intersecting branch extensions.
    fn compute(&mut self, mask: u64) -> Result<Option<State>, ReductionError> {
        if mask == 0 {
            return Ok(Some(self.base.clone()));
        }
        let mut acc: Option<State> = None;
        let mut all_branches = true;
        for j in 0..self.vars.len() {
            let bit = 1u64 << j;
            if mask & bit == 0 {
                continue;
            }
            let child = mask & !bit;
            let child_defined = self.resolve(child)?;
            let branch_ok = child_defined && {
                let set = &self.resolved[&child].0;
                set.linear_in(self.vars[j])
            };
            if !branch_ok {
                all_branches = false;
                if self.opts.strict_brackets {
                    return Ok(None);
                }
                continue;
            }
            let (set, graph) = &self.resolved[&child];
            let next = reduction_step(&self.ring, set, graph, self.vars[j], &self.opts)?;
            acc = Some(match acc {
                None => next,
                Some(prev) => intersect(&prev, &next),
            });
        }
        if self.opts.strict_brackets && !all_branches {
            return Ok(None);
        }
        Ok(acc)
    }

    fn record(&mut self, mask: u64, state: Option<State>) -> Result<bool, ReductionError> {
        self.record_info(mask, &state);
        if let Some(c) = &mut self.cache {
            c.store(mask, state.as_ref())?;
        }
        let defined = state.is_some();
        if let Some(s) = state {
            self.resolved.insert(mask, s);
        }
        Ok(defined)
    }

    fn record_info(&mut self, mask: u64, state: &Option<State>) {
        let info = match state {
            None => SubsetInfo { defined: false, admissible: 0 },
            Some((set, _)) => {
                let mut admissible = 0u64;
                for (j, &v) in self.vars.iter().enumerate() {
                    if mask & (1 << j) == 0 && set.linear_in(v) {
                        admissible |= 1 << j;
                    }
                }
                SubsetInfo { defined: true, admissible }
            }
        };
        self.info.insert(mask, info);
    }

    fn cache_probe(&mut self, mask: u64) -> Result<Option<Option<State>>, ReductionError> {
        match &mut self.cache {
            Some(c) => c.load(mask, &self.ring),
            None => Ok(None),
        }
    }

    fn cache_load(&mut self, mask: u64) -> Result<Option<State>, ReductionError> {
        Ok(self.cache_probe(mask)?.flatten())
    }

    /// Level-by-level reachability over all subsets, evicting completed
    /// layers.  Returns the witness order if the set is reducible.
    fn run(&mut self) -> Result<Option<Vec<Var>>, ReductionError> {
        let r = self.vars.len();
        if r == 0 {
            return Ok(Some(Vec::new()));
        }
        let mut frontier: Vec<u64> = vec![0];
        for _level in 1..r {
            let mut candidates: BTreeSet<u64> = BTreeSet::new();
            for &mask in &frontier {
                let adm = self.info[&mask].admissible;
                for j in 0..r {
                    if adm & (1 << j) != 0 {
                        candidates.insert(mask | (1 << j));
                    }
                }
            }
            let mut next = Vec::new();
            for mask in candidates {
                if self.resolve(mask)? {
                    next.push(mask);
                }
            }
            for &old in &frontier {
                self.resolved.remove(&old);
            }
            frontier = next;
            if frontier.is_empty() {
                return Ok(None);
            }
        }
        Ok(self.witness())
    }

    /// Greedy lexicographic search over the recorded definedness and
    /// admissibility bits; needs no bracket sets.
    fn witness(&self) -> Option<Vec<Var>> {
        let mut dead: BTreeSet<u64> = BTreeSet::new();
        let mut path: Vec<Var> = Vec::new();
        if self.dfs(0, &mut path, &mut dead) {
            Some(path)
        } else {
            None
        }
    }

    fn dfs(&self, mask: u64, path: &mut Vec<Var>, dead: &mut BTreeSet<u64>) -> bool {
        let r = self.vars.len();
        let info = match self.info.get(&mask) {
            Some(i) if i.defined => i,
            _ => return false,
        };
        for j in 0..r {
            if info.admissible & (1 << j) == 0 {
                continue;
            }
            path.push(self.vars[j]);
            if path.len() == r {
                return true;
            }
            let next = mask | (1 << j);
            if !dead.contains(&next) && self.dfs(next, path, dead) {
                return true;
            }
            path.pop();
        }
        dead.insert(mask);
        false
    }
}

/// Pointwise intersection of two states: members equal as polynomials
/// (already canonically normalized) survive with their labels merged; an
/// edge survives only if present in both graphs.
fn intersect(a: &State, b: &State) -> State {
    let (sa, ga) = a;
    let (sb, gb) = b;
    let mut members: Vec<LabeledPoly> = Vec::new();
    let mut ia: Vec<u32> = Vec::new();
    let mut ib: Vec<u32> = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < sa.members.len() && j < sb.members.len() {
        let ma = &sa.members[i];
        let mb = &sb.members[j];
        match ma.poly.cmp(&mb.poly) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let mut labels = ma.labels.clone();
                labels.extend(mb.labels.iter().copied());
                members.push(LabeledPoly { poly: ma.poly.clone(), labels });
                ia.push(i as u32);
                ib.push(j as u32);
                i += 1;
                j += 1;
            }
        }
    }
    let mut edges = BTreeSet::new();
    for p in 0..members.len() as u32 {
        for q in (p + 1)..members.len() as u32 {
            let (pa, qa) = (ia[p as usize], ia[q as usize]);
            let (pb, qb) = (ib[p as usize], ib[q as usize]);
            if ga.has_edge(pa, qa) && gb.has_edge(pb, qb) {
                edges.insert((p, q));
            }
        }
    }
    let n = members.len();
    (LabeledSet { members }, CompatibilityGraph { n, edges })
}

/// Decides compatibility-graph reducibility of `polys` over `vars`,
/// returning the lexicographically least witness order on success.
pub fn is_reducible(
    ring: &Ring,
    polys: &[Polynomial],
    vars: &[Var],
    opts: &ReductionOptions,
) -> Result<Option<Vec<Var>>, ReductionError> {
    ReductionState::new(ring, polys, vars, opts)?.run()
}

/// Order-interchange reducibility: every compatibility graph is forced
/// complete (no resultant pruning) and every branch of a bracket must
/// exist — each elimination order of a prefix has to succeed on its own,
/// mirroring the interchange-of-integration-order requirement.  This is
/// strictly stronger than [`is_reducible`]: the four-cycle's polynomial
/// pair with on-shell kinematics passes the plain search but fails here,
/// because the two "opposite pair" subsets are undefined and the plain
/// search may skip them while this one may not.
pub fn fubini_is_reducible(
    ring: &Ring,
    polys: &[Polynomial],
    vars: &[Var],
    opts: &ReductionOptions,
) -> Result<Option<Vec<Var>>, ReductionError> {
    let opts = ReductionOptions { fubini: true, strict_brackets: true, ..opts.clone() };
    is_reducible(ring, polys, vars, &opts)
}

/// Whether `polys` is reducible along exactly the given order: every prefix
/// bracket must be defined and linear in the next variable.
pub fn is_reducible_with_order(
    ring: &Ring,
    polys: &[Polynomial],
    order: &[Var],
    opts: &ReductionOptions,
) -> Result<bool, ReductionError> {
    let distinct: BTreeSet<Var> = order.iter().copied().collect();
    assert_eq!(distinct.len(), order.len(), "elimination order repeats a variable");
    let mut st = ReductionState::new(ring, polys, order, opts)?;
    let mut prefix: Vec<Var> = Vec::new();
    for &v in order {
        let admissible = match st.bracket(&prefix)? {
            None => false,
            Some((set, _)) => set.linear_in(v),
        };
        if !admissible {
            return Ok(false);
        }
        prefix.push(v);
    }
    Ok(true)
}
