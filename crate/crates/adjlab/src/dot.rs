//! Graphviz export of the blowup tree of a cover run.

use std::collections::BTreeMap;
use std::fmt::Write;

use adjlab_core::cover::{CoverState, StepKind, StepRecord};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per exceptional divisor, labelled with the divisorial part and
/// the predicted codiscrepancy at the time it was created.
pub fn blowup_tree(state: &CoverState, trace: &[StepRecord]) -> String {
    let base = state.base();
    let records: BTreeMap<_, _> = trace
        .iter()
        .filter(|r| r.kind == StepKind::Blowup)
        .filter_map(|r| r.exceptional.map(|e| (e, r)))
        .collect();
    let mut out = String::from("digraph blowups {\n  node [shape=box, fontname=\"monospace\"];\n");
    let roots: Vec<String> = base
        .divisors()
        .iter()
        .filter(|d| d.origin == adjlab_core::surface::Origin::Original)
        .map(|d| d.name.clone())
        .collect();
    let _ = writeln!(out, "  base [label=\"{}\", shape=ellipse];", escape(&roots.join(", ")));
    for (i, node) in base.tree().iter().enumerate() {
        let name = base.divisor(node.exceptional).map(|d| d.name.clone()).unwrap_or_default();
        let (status, colour, detail) = match records.get(&node.exceptional) {
            Some(r) => {
                let ok = r.bp_ok().unwrap_or(false);
                let predicted = r.predicted.as_ref().map(|p| p.to_string()).unwrap_or_default();
                (
                    if ok { "ok" } else { "violated" },
                    if ok { "darkgreen" } else { "red" },
                    format!("D_div {}\\npredicted {}", escape(&r.ddiv_mult.to_string()), escape(&predicted)),
                )
            }
            None => ("history", "gray", String::new()),
        };
        let _ = writeln!(
            out,
            "  n{i} [label=\"{} over {}\\n{}\\n{}\", color={colour}];",
            escape(&name),
            escape(&node.point.name),
            detail,
            status
        );
        match node.parent {
            Some(p) => {
                let _ = writeln!(out, "  n{p} -> n{i};");
            }
            None => {
                let _ = writeln!(out, "  base -> n{i};");
            }
        }
    }
    out.push_str("}\n");
    out
}
