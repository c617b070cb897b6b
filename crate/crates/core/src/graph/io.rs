//! Line-oriented text format for multigraphs.
//!
//! ```text
//! # comment
//! momenta r=4 onshell=1,2,3,4
//! v 0 momentum=p1+p2
//! v 1
//! e 0 0 1 mass=m
//! ```
//!
//! `momenta` (optional, at most once) declares the number of external legs
//! and which of them are on-shell (1-based indices).  `momentum=` lists the
//! legs entering a vertex; `mass=` names an edge's mass symbol.  Parsing is
//! strict: unknown directives, duplicate ids, dangling endpoints, or leg
//! labels without a header are errors carrying the offending line number.

use super::{EdgeId, GraphError, Multigraph, VertexId};
use std::fmt::Write as _;

/// External-leg declaration from a `momenta` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentaHeader {
    /// Number of external legs; labels range over `1..=r`.
    pub r: u32,
    /// Sorted 1-based indices of on-shell legs.
    pub onshell: Vec<u32>,
}

/// Parses the text format.  Returns the graph and the header if one was
/// present.
pub fn parse(text: &str) -> Result<(Multigraph, Option<MomentaHeader>), GraphError> {
    let mut g = Multigraph::new();
    let mut header: Option<MomentaHeader> = None;
    let mut max_leg_seen: Option<(u32, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| GraphError::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next().unwrap() {
            "momenta" => {
                if header.is_some() {
                    return Err(err("duplicate momenta header".into()));
                }
                header = Some(parse_header(tokens, line_no)?);
            }
            "v" => {
                let id = parse_u32(tokens.next(), "vertex id", line_no)?;
                let mut legs = Vec::new();
                for opt in tokens {
                    match opt.strip_prefix("momentum=") {
                        Some(spec) => legs = parse_legs(spec, line_no)?,
                        None => return Err(err(format!("unknown vertex option `{opt}`"))),
                    }
                }
                g.add_vertex(VertexId(id)).map_err(|e| err(e.to_string()))?;
                if !legs.is_empty() {
                    if let Some(&m) = legs.iter().max() {
                        if max_leg_seen.map_or(true, |(old, _)| m > old) {
                            max_leg_seen = Some((m, line_no));
                        }
                    }
                    g.set_momentum(VertexId(id), legs).map_err(|e| err(e.to_string()))?;
                }
            }
            "e" => {
                let id = parse_u32(tokens.next(), "edge id", line_no)?;
                let u = parse_u32(tokens.next(), "endpoint", line_no)?;
                let v = parse_u32(tokens.next(), "endpoint", line_no)?;
                let mut mass = None;
                for opt in tokens {
                    match opt.strip_prefix("mass=") {
                        Some(sym) => {
                            check_symbol(sym, line_no)?;
                            mass = Some(sym.to_string());
                        }
                        None => return Err(err(format!("unknown edge option `{opt}`"))),
                    }
                }
                g.add_edge(EdgeId(id), VertexId(u), VertexId(v), mass)
                    .map_err(|e| err(e.to_string()))?;
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }

    if let Some((max_leg, line)) = max_leg_seen {
        match &header {
            None => {
                return Err(GraphError::Parse {
                    line,
                    msg: "momentum labels require a `momenta` header".into(),
                })
            }
            Some(h) if max_leg > h.r => {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("leg p{max_leg} exceeds r={}", h.r),
                })
            }
            Some(_) => {}
        }
    }
    Ok((g, header))
}

fn parse_header(
    tokens: std::str::SplitWhitespace<'_>,
    line: usize,
) -> Result<MomentaHeader, GraphError> {
    let err = |msg: String| GraphError::Parse { line, msg };
    let mut r = None;
    let mut onshell = Vec::new();
    for opt in tokens {
        if let Some(val) = opt.strip_prefix("r=") {
            r = Some(val.parse::<u32>().map_err(|_| err(format!("bad r `{val}`")))?);
        } else if let Some(val) = opt.strip_prefix("onshell=") {
            for part in val.split(',').filter(|p| !p.is_empty()) {
                onshell
                    .push(part.parse::<u32>().map_err(|_| err(format!("bad onshell `{part}`")))?);
            }
        } else {
            return Err(err(format!("unknown momenta option `{opt}`")));
        }
    }
    let r = r.ok_or_else(|| err("momenta header needs r=<n>".into()))?;
    onshell.sort_unstable();
    onshell.dedup();
    if let Some(&bad) = onshell.iter().find(|&&i| i == 0 || i > r) {
        return Err(err(format!("onshell index {bad} out of range 1..={r}")));
    }
    Ok(MomentaHeader { r, onshell })
}

fn parse_legs(spec: &str, line: usize) -> Result<Vec<u32>, GraphError> {
    let err = |msg: String| GraphError::Parse { line, msg };
    let mut legs = Vec::new();
    for part in spec.split('+') {
        let num = part
            .strip_prefix('p')
            .ok_or_else(|| err(format!("momentum labels look like p3, got `{part}`")))?;
        let k: u32 = num.parse().map_err(|_| err(format!("bad momentum label `{part}`")))?;
        if k == 0 {
            return Err(err("momentum labels are 1-based".into()));
        }
        legs.push(k);
    }
    Ok(legs)
}

fn parse_u32(tok: Option<&str>, what: &str, line: usize) -> Result<u32, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| GraphError::Parse { line, msg: format!("bad {what} `{tok}`") })
}

fn check_symbol(sym: &str, line: usize) -> Result<(), GraphError> {
    let mut chars = sym.chars();
    let ok = chars.next().map_or(false, |c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(GraphError::Parse { line, msg: format!("bad mass symbol `{sym}`") })
    }
}

/// Writes the deterministic form: header first, vertices ascending, edges
/// ascending.  `parse(write(g)) == g`.
pub fn write(g: &Multigraph, header: Option<&MomentaHeader>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        let legs: Vec<String> = h.onshell.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "momenta r={} onshell={}", h.r, legs.join(","));
    }
    for v in g.vertex_ids() {
        let legs = g.momentum(v).unwrap();
        if legs.is_empty() {
            let _ = writeln!(out, "v {v}");
        } else {
            let labels: Vec<String> = legs.iter().map(|k| format!("p{k}")).collect();
            let _ = writeln!(out, "v {v} momentum={}", labels.join("+"));
        }
    }
    for e in g.edge_ids() {
        let d = g.edge(e).unwrap();
        match &d.mass {
            Some(m) => {
                let _ = writeln!(out, "e {e} {} {} mass={m}", d.ends.0, d.ends.1);
            }
            None => {
                let _ = writeln!(out, "e {e} {} {}", d.ends.0, d.ends.1);
            }
        }
    }
    out
}
