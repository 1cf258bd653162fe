//! Graphviz DOT rendering.

use std::fmt::Write;

use super::{SpanningForest, WeightedGraph};

/// Quoted DOT identifier.
pub fn escape_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT graph of a forest: every graph node in graph order, then
/// the forest edges in selection order labelled with their weight.
pub fn forest_to_dot(name: &str, g: &WeightedGraph, f: &SpanningForest) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", escape_id(name));
    for n in g.nodes() {
        let _ = writeln!(out, "  {};", escape_id(n));
    }
    for e in &f.edges {
        let _ = writeln!(
            out,
            "  {} -- {} [label=\"{:.6}\"];",
            escape_id(&e.u),
            escape_id(&e.v),
            e.w
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{kruskal_max_forest, Edge};

    #[test]
    fn triangle_dot() {
        let g = WeightedGraph::new(
            vec!["A".into(), "B".into(), "C \"x\"".into()],
            vec![Edge::new("A", "B", 0.49), Edge::new("B", "C \"x\"", 0.143735)],
        )
        .unwrap();
        let f = kruskal_max_forest(&g);
        let dot = forest_to_dot("Media", &g, &f);
        assert_eq!(
            dot,
            "graph \"Media\" {\n  \"A\";\n  \"B\";\n  \"C \\\"x\\\"\";\n  \"A\" -- \"B\" [label=\"0.490000\"];\n  \"B\" -- \"C \\\"x\\\"\" [label=\"0.143735\"];\n}\n"
        );
    }
}
