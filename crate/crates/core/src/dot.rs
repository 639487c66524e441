//! Graphviz rendering of a PCG.
//!
//! Output is byte-stable: vertices in index order, edges in list order.
//! Filled nodes are Z = +1 (•), hollow nodes Z = −1 (○). Pair-edges become
//! colored DOT edges; larger hyperedges become a small colored auxiliary
//! node joined to each member.

use std::fmt::Write;

use crate::coloring::Pcg;
use crate::qubits::Sign;

fn color(weight: Sign) -> &'static str {
    match weight {
        Sign::Plus => "green",
        Sign::Minus => "red",
    }
}

pub fn export_dot(pcg: &Pcg) -> String {
    let mut out = String::new();
    out.push_str("graph pcg {\n");
    out.push_str("  node [shape=circle, width=0.3, fixedsize=true, fontsize=10];\n");
    for (i, mark) in pcg.marks().iter().enumerate() {
        let style = match mark {
            Sign::Plus => "style=filled, fillcolor=black, fontcolor=white",
            Sign::Minus => "style=solid, fillcolor=white, fontcolor=black",
        };
        writeln!(out, "  v{} [label=\"{}\", {style}];", i + 1, i + 1).unwrap();
    }
    for (k, e) in pcg.edges().iter().enumerate() {
        let c = color(e.weight);
        let members: Vec<usize> = e.vertices.to_one_based();
        if let [a, b] = members[..] {
            writeln!(out, "  v{a} -- v{b} [color={c}, penwidth=2];").unwrap();
        } else {
            writeln!(out, "  e{} [shape=point, width=0.12, color={c}];", k + 1).unwrap();
            for v in members {
                writeln!(out, "  e{} -- v{v} [color={c}, penwidth=2];", k + 1).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
