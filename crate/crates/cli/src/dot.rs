//! Hasse diagrams in Graphviz DOT.

use std::fmt::Write;

use arthurlab::orders::{poset_edges, OrderError, OrderKind};
use arthurlab::ArthurParam;

use crate::ops::step_label;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per parameter, one edge per covering pair drawn upward. Under
/// `O`, edges carry the kind of the raising step when a single step suffices.
pub fn emit_dot(candidates: &[ArthurParam], kind: OrderKind) -> Result<String, OrderError> {
    let edges = poset_edges(candidates, kind)?;
    let mut out = String::new();
    writeln!(out, "digraph poset {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  label={};", quote(&format!("order {kind}"))).unwrap();
    for (i, p) in candidates.iter().enumerate() {
        writeln!(out, "  n{i} [label={}];", quote(&p.to_string())).unwrap();
    }
    for c in &edges {
        let label = if kind == OrderKind::O { step_label(&candidates[c.lower], &candidates[c.upper]) } else { None };
        match label {
            Some(l) => writeln!(out, "  n{} -> n{} [label={}];", c.lower, c.upper, quote(l)).unwrap(),
            None => writeln!(out, "  n{} -> n{};", c.lower, c.upper).unwrap(),
        }
    }
    out.push_str("}\n");
    Ok(out)
}
