//! Persistent bracket-set cache.
//!
//! One text file per reduction problem, keyed by a fingerprint of the ring,
//! the input polynomials, the elimination variables, and every option that
//! influences the result.  Each line records one variable subset (as a hex
//! bitmask over the sorted elimination variables) together with either its
//! bracket state or the fact that the subset is undefined.  Entries are
//! append-only and flushed immediately, so interrupted runs resume where
//! they stopped; a file that fails validation is discarded and rebuilt.

use super::{label_pair, CompatibilityGraph, LabelEnd, LabelPair, LabeledPoly, LabeledSet,
            ReductionError, ReductionOptions};
use crate::poly::{Polynomial, Ring, Var, VarKind};
use std::collections::{BTreeSet, HashMap};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

type State = (LabeledSet, CompatibilityGraph);

const VERSION: &str = "v1";

#[derive(Clone)]
enum Entry {
    Undefined,
    /// Serialized payload, parsed lazily against the caller's ring.
    Defined(String),
}

pub struct DiskCache {
    path: PathBuf,
    entries: HashMap<u64, Entry>,
    file: File,
}

impl DiskCache {
    /// Opens (or creates) the cache file for this exact reduction problem.
    pub fn open(
        dir: &Path,
        ring: &Ring,
        polys: &[Polynomial],
        vars: &[Var],
        opts: &ReductionOptions,
    ) -> Result<DiskCache, ReductionError> {
        std::fs::create_dir_all(dir).map_err(io_err)?;
        let fp = fingerprint(ring, polys, vars, opts);
        let path = dir.join(format!("red-{fp:016x}.{VERSION}.txt"));
        let header = header_line(fp);
        let mut entries = None;
        if path.exists() {
            if let Ok(text) = std::fs::read_to_string(&path) {
                entries = parse_file(&text, &header);
            }
        }
        let entries = match entries {
            Some(e) => e,
            None => {
                // Missing or invalid: rebuild from scratch.
                let mut f = File::create(&path).map_err(io_err)?;
                writeln!(f, "{header}").map_err(io_err)?;
                HashMap::new()
            }
        };
        let file = OpenOptions::new().append(true).open(&path).map_err(io_err)?;
        Ok(DiskCache { path, entries, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records a subset's outcome; repeated stores for a mask are no-ops.
    pub fn store(&mut self, mask: u64, state: Option<&State>) -> Result<(), ReductionError> {
        if self.entries.contains_key(&mask) {
            return Ok(());
        }
        let entry = match state {
            None => Entry::Undefined,
            Some(s) => Entry::Defined(serialize_state(s)),
        };
        match &entry {
            Entry::Undefined => writeln!(self.file, "{mask:x} -"),
            Entry::Defined(payload) => writeln!(self.file, "{mask:x} + {payload}"),
        }
        .map_err(io_err)?;
        self.file.flush().map_err(io_err)?;
        self.entries.insert(mask, entry);
        Ok(())
    }

    /// Outer `None`: no record for this mask.  `Some(None)`: recorded as
    /// undefined.  An unparseable record is dropped and reported as absent,
    /// so callers recompute instead of failing.
    pub fn load(&mut self, mask: u64, ring: &Ring) -> Result<Option<Option<State>>, ReductionError> {
        let entry = match self.entries.get(&mask) {
            None => return Ok(None),
            Some(e) => e.clone(),
        };
        match entry {
            Entry::Undefined => Ok(Some(None)),
            Entry::Defined(payload) => match parse_state(&payload, ring) {
                Some(state) => Ok(Some(Some(state))),
                None => {
                    self.entries.remove(&mask);
                    Ok(None)
                }
            },
        }
    }
}

fn io_err(e: std::io::Error) -> ReductionError {
    ReductionError::Cache(e.to_string())
}

fn header_line(fp: u64) -> String {
    format!("# feynred bracket cache {VERSION} {fp:016x}")
}

/// FNV-1a over everything that determines the bracket sets.
fn fingerprint(ring: &Ring, polys: &[Polynomial], vars: &[Var], opts: &ReductionOptions) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        h ^= 0xff; // field separator
        h = h.wrapping_mul(0x1000_0000_01b3);
    };
    eat(b"feynred-reduction");
    for v in ring.vars() {
        eat(ring.name(v).as_bytes());
        eat(match ring.kind(v) {
            VarKind::Schwinger => b"S",
            VarKind::Kinematic => b"K",
        });
    }
    let mut texts: Vec<String> = polys.iter().map(|p| p.to_text()).collect();
    texts.sort();
    for t in &texts {
        eat(t.as_bytes());
    }
    for v in vars {
        eat(v.0.to_string().as_bytes());
    }
    eat(if opts.keep_constants { b"keep" } else { b"drop" });
    eat(if opts.strict_brackets { b"strict" } else { b"loose" });
    eat(if opts.fubini { b"fubini" } else { b"compat" });
    eat(opts.factor_budget.max_total_degree.to_string().as_bytes());
    eat(opts.factor_budget.max_kronecker_degree.to_string().as_bytes());
    h
}

/// `None` on any validation failure; duplicate masks resolve to the last
/// occurrence (a re-store after a dropped record appends a fresh line).
fn parse_file(text: &str, header: &str) -> Option<HashMap<u64, Entry>> {
    let mut lines = text.lines();
    if lines.next()? != header {
        return None;
    }
    let mut entries = HashMap::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let (mask_text, rest) = line.split_once(' ')?;
        let mask = u64::from_str_radix(mask_text, 16).ok()?;
        let entry = if rest == "-" {
            Entry::Undefined
        } else {
            let payload = rest.strip_prefix("+ ").or_else(|| (rest == "+").then_some(""))?;
            if !payload.starts_with("M:") || !payload.contains("|E:") {
                return None;
            }
            Entry::Defined(payload.to_string())
        };
        entries.insert(mask, entry);
    }
    Some(entries)
}

/// `M:<members>|E:<edges>`; members `poly@labels` joined by `;`, labels
/// `end-end` joined by `,`, edges `i-j` joined by `,`.  Polynomial text never
/// contains `@`, `;`, or `|`.
fn serialize_state((set, graph): &State) -> String {
    let members: Vec<String> = set
        .members
        .iter()
        .map(|m| {
            let labels: Vec<String> =
                m.labels.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            format!("{}@{}", m.poly.to_text(), labels.join(","))
        })
        .collect();
    let edges: Vec<String> = graph.edges.iter().map(|(i, j)| format!("{i}-{j}")).collect();
    format!("M:{}|E:{}", members.join(";"), edges.join(","))
}

fn parse_state(payload: &str, ring: &Ring) -> Option<State> {
    let rest = payload.strip_prefix("M:")?;
    let (members_text, edges_text) = rest.split_once('|')?;
    let edges_text = edges_text.strip_prefix("E:")?;

    let mut members = Vec::new();
    if !members_text.is_empty() {
        for m in members_text.split(';') {
            let (poly_text, labels_text) = m.split_once('@')?;
            let poly = Polynomial::parse(ring, poly_text).ok()?;
            let mut labels: BTreeSet<LabelPair> = BTreeSet::new();
            if !labels_text.is_empty() {
                for pair in labels_text.split(',') {
                    let (a, b) = pair.split_once('-')?;
                    labels.insert(label_pair(parse_end(a)?, parse_end(b)?));
                }
            }
            members.push(LabeledPoly { poly, labels });
        }
    }

    let n = members.len();
    let mut edges = BTreeSet::new();
    if !edges_text.is_empty() {
        for pair in edges_text.split(',') {
            let (i, j) = pair.split_once('-')?;
            let i: u32 = i.parse().ok()?;
            let j: u32 = j.parse().ok()?;
            if i >= j || j as usize >= n {
                return None;
            }
            edges.insert((i, j));
        }
    }
    Some((LabeledSet { members }, CompatibilityGraph { n, edges }))
}

fn parse_end(s: &str) -> Option<LabelEnd> {
    match s {
        "0" => Some(LabelEnd::Zero),
        "inf" => Some(LabelEnd::Inf),
        _ => {
            let k: u32 = s.parse().ok()?;
            (k >= 1).then_some(LabelEnd::Member(k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::ring_n;
    use super::super::{initial_state, reduction_step};
    use super::*;

    fn p(ring: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    fn sample_state(ring: &Ring) -> State {
        let opts = ReductionOptions::default();
        let polys = [p(ring, "1*a1 + 1*a2"), p(ring, "1*a1 + 1*a3")];
        let (set, graph) = initial_state(ring, &polys, &opts);
        reduction_step(ring, &set, &graph, ring.var("a1").unwrap(), &opts).unwrap()
    }

    fn open_cache(dir: &Path, ring: &Ring, opts: &ReductionOptions) -> DiskCache {
        let polys = [p(ring, "1*a1 + 1*a2"), p(ring, "1*a1 + 1*a3")];
        let vars: Vec<Var> = ring.vars().collect();
        DiskCache::open(dir, ring, &polys, &vars, opts).unwrap()
    }

    #[test]
    fn states_round_trip_across_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let ring = ring_n(3);
        let opts = ReductionOptions::default();
        let state = sample_state(&ring);

        let mut c = open_cache(dir.path(), &ring, &opts);
        c.store(0b001, Some(&state)).unwrap();
        c.store(0b010, None).unwrap();
        drop(c);

        let mut c = open_cache(dir.path(), &ring, &opts);
        assert_eq!(c.len(), 2);
        let loaded = c.load(0b001, &ring).unwrap().unwrap().unwrap();
        assert_eq!(loaded, state);
        assert_eq!(c.load(0b010, &ring).unwrap(), Some(None));
        assert_eq!(c.load(0b100, &ring).unwrap(), None);
    }

    #[test]
    fn empty_state_round_trips() {
        let ring = ring_n(3);
        let empty = (LabeledSet::default(), CompatibilityGraph::complete(0));
        let payload = serialize_state(&empty);
        assert_eq!(payload, "M:|E:");
        assert_eq!(parse_state(&payload, &ring).unwrap(), empty);
    }

    #[test]
    fn corrupt_file_is_discarded() {
        let dir = tempfile::tempdir().unwrap();
        let ring = ring_n(3);
        let opts = ReductionOptions::default();
        let state = sample_state(&ring);

        let mut c = open_cache(dir.path(), &ring, &opts);
        c.store(1, Some(&state)).unwrap();
        let path = c.path().to_path_buf();
        drop(c);

        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("not a cache line\n");
        std::fs::write(&path, text).unwrap();

        let mut c = open_cache(dir.path(), &ring, &opts);
        assert!(c.is_empty());
        assert_eq!(c.load(1, &ring).unwrap(), None);
        c.store(1, Some(&state)).unwrap(); // rebuilt file accepts entries again
        drop(c);
        let c = open_cache(dir.path(), &ring, &opts);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn result_affecting_options_change_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let ring = ring_n(3);
        let plain = open_cache(dir.path(), &ring, &ReductionOptions::default());
        let fub = open_cache(
            dir.path(),
            &ring,
            &ReductionOptions { fubini: true, ..Default::default() },
        );
        assert_ne!(plain.path(), fub.path());
    }

    #[test]
    fn duplicate_store_is_a_single_line() {
        let dir = tempfile::tempdir().unwrap();
        let ring = ring_n(3);
        let opts = ReductionOptions::default();
        let state = sample_state(&ring);
        let mut c = open_cache(dir.path(), &ring, &opts);
        c.store(3, Some(&state)).unwrap();
        c.store(3, Some(&state)).unwrap();
        c.store(3, None).unwrap(); // ignored: first record wins in memory
        let text = std::fs::read_to_string(c.path()).unwrap();
        assert_eq!(text.lines().count(), 2); // header + one record
    }
}
