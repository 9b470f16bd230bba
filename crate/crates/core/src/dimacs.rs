//! Reader for DIMACS max-flow files.
//!
//! ```text
//! c comment
//! p max <nodes> <arcs>
//! n <id> s
//! n <id> t
//! a <from> <to> <capacity>
//! ```
//!
//! Non-terminal nodes become the ground set, in increasing id order. Arcs
//! leaving the source or entering the sink become modular terms, a direct
//! source-to-sink arc becomes a constant, and arcs into the source or out of
//! the sink are dropped since they never cross an `s`–`t` cut.

use std::path::Path;

use crate::error::{Error, Result};
use crate::zoo::cut::CutInstance;

#[derive(Debug, Clone)]
pub struct DimacsGraph {
    pub instance: CutInstance,
    pub nodes: usize,
    pub arcs: usize,
    /// DIMACS id of ground-set element `i`.
    pub node_ids: Vec<usize>,
}

pub fn read_dimacs(path: impl AsRef<Path>) -> Result<DimacsGraph> {
    parse_dimacs(&std::fs::read_to_string(path)?)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_dimacs(text: &str) -> Result<DimacsGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut source: Option<usize> = None;
    let mut sink: Option<usize> = None;
    let mut arcs: Vec<(usize, usize, f64, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                if tok.next() != Some("max") {
                    return Err(parse_err(line, "expected 'p max <nodes> <arcs>'"));
                }
                let n: usize = field(tok.next(), line, "node count")?;
                let m: usize = field(tok.next(), line, "arc count")?;
                header = Some((n, m));
            }
            "n" | "a" if header.is_none() => {
                return Err(parse_err(line, "descriptor before problem line"));
            }
            "n" => {
                let (n, _) = header.expect("checked");
                let id: usize = field(tok.next(), line, "node id")?;
                if id == 0 || id > n {
                    return Err(parse_err(line, format!("node id {id} out of range 1..={n}")));
                }
                let slot = match tok.next() {
                    Some("s") => &mut source,
                    Some("t") => &mut sink,
                    other => {
                        return Err(parse_err(line, format!("expected 's' or 't', got {other:?}")))
                    }
                };
                if slot.replace(id).is_some() {
                    return Err(parse_err(line, "terminal declared twice"));
                }
            }
            "a" => {
                let (n, _) = header.expect("checked");
                let u: usize = field(tok.next(), line, "arc tail")?;
                let v: usize = field(tok.next(), line, "arc head")?;
                let cap: f64 = field(tok.next(), line, "capacity")?;
                if u == 0 || u > n || v == 0 || v > n {
                    return Err(parse_err(line, format!("arc ({u}, {v}) references a node outside 1..={n}")));
                }
                if !(cap >= 0.0) || !cap.is_finite() {
                    return Err(parse_err(line, format!("capacity must be finite and >= 0, got {cap}")));
                }
                arcs.push((u, v, cap, line));
            }
            other => return Err(parse_err(line, format!("unknown line type '{other}'"))),
        }
    }

    let last = text.lines().count().max(1);
    let (n, m) = header.ok_or_else(|| parse_err(last, "missing problem line"))?;
    let s = source.ok_or_else(|| parse_err(last, "no source node"))?;
    let t = sink.ok_or_else(|| parse_err(last, "no sink node"))?;
    if s == t {
        return Err(parse_err(last, "source and sink coincide"));
    }
    if arcs.len() != m {
        return Err(parse_err(last, format!("header announces {m} arcs, found {}", arcs.len())));
    }

    let node_ids: Vec<usize> = (1..=n).filter(|&id| id != s && id != t).collect();
    if node_ids.is_empty() {
        return Err(Error::NoFreeNodes);
    }
    let d = node_ids.len();
    let index = |id: usize| node_ids.binary_search(&id).expect("free node");

    let mut inner = Vec::new();
    let mut src = vec![0.0; d];
    let mut snk = vec![0.0; d];
    let mut constant = 0.0;
    for &(u, v, cap, _) in &arcs {
        match (u == s, u == t, v == s, v == t) {
            (true, _, _, true) => constant += cap,
            (true, _, false, false) => src[index(v)] += cap,
            (false, false, _, true) => snk[index(u)] += cap,
            (false, false, false, false) => inner.push((index(u), index(v), cap)),
            _ => {}
        }
    }
    let instance = CutInstance::directed(d, &inner)?
        .with_terminals(&src, &snk)?
        .with_offset(constant);
    Ok(DimacsGraph {
        instance,
        nodes: n,
        arcs: m,
        node_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhaustive::brute_force_min;
    use crate::oracle::Counted;

    #[test]
    fn diamond() {
        let text = "c diamond\np max 4 4\nn 1 s\nn 4 t\na 1 2 1\na 1 3 1\na 2 4 1\na 3 4 1\n";
        let g = parse_dimacs(text).unwrap();
        assert_eq!(crate::oracle::SetFunction::dim(&g.instance), 2);
        assert_eq!(g.node_ids, vec![2, 3]);
        let (s, v) = brute_force_min(&Counted::new(g.instance.clone())).unwrap();
        assert_eq!(g.instance.raw_cut_value(s), 2.0);
        assert_eq!(v + g.instance.offset(), 2.0);
    }

    #[test]
    fn no_free_nodes() {
        let text = "p max 2 1\nn 1 s\nn 2 t\na 1 2 3\n";
        assert!(matches!(parse_dimacs(text), Err(Error::NoFreeNodes)));
    }

    #[test]
    fn malformed_input_reports_line() {
        let err = parse_dimacs("c x\np min 4 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_dimacs("p max 3 1\nn 1 s\nn 3 t\na 1 x 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = parse_dimacs("a 1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
