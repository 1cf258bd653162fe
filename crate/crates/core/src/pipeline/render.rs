//! JSON, DOT and plain-text renderings of a [`PreferenceModel`].
//!
//! JSON keeps full f64 precision; DOT and the text report print weights with
//! six decimals.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use super::PreferenceModel;
use crate::graph::escape_id;

pub fn model_to_json(model: &PreferenceModel) -> String {
    let mut groups = Map::new();
    for g in &model.groups {
        let mut entry = Map::new();
        if let Some(label) = &g.label {
            entry.insert("label".into(), json!(label));
        }
        entry.insert("coefficient".into(), json!(g.coefficient));
        entry.insert("attribute_order".into(), json!(g.attribute_order));
        entry.insert(
            "edges".into(),
            g.forest
                .edges
                .iter()
                .map(|e| json!({"u": e.u, "v": e.v, "w": e.w}))
                .collect(),
        );
        entry.insert(
            "removed_edges".into(),
            g.removed_edges
                .iter()
                .map(|r| json!({"u": r.u, "v": r.v, "r": r.r}))
                .collect(),
        );
        entry.insert("component_count".into(), json!(g.forest.component_count));
        groups.insert(g.name.clone(), Value::Object(entry));
    }
    let doc = json!({
        "population": model.population,
        "group_order": model.group_order(),
        "groups": groups,
        "total_cost": model.total_cost,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("model JSON is serializable");
    text.push('\n');
    text
}

/// One undirected graph with a cluster per group, in preference order.
pub fn model_to_dot(model: &PreferenceModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", escape_id(&format!("{} preference model", model.population)));
    for (rank, g) in model.groups.iter().enumerate() {
        let _ = writeln!(out, "  subgraph {} {{", escape_id(&format!("cluster_{}", rank + 1)));
        let _ = writeln!(out, "    label={};", escape_id(&format!("{}. {}", rank + 1, g.display_name())));
        for n in &g.nodes {
            let _ = writeln!(out, "    {};", escape_id(n));
        }
        for e in &g.forest.edges {
            let _ = writeln!(
                out,
                "    {} -- {} [label=\"{:.6}\"];",
                escape_id(&e.u),
                escape_id(&e.v),
                e.w
            );
        }
        out.push_str("  }\n");
    }
    let _ = writeln!(out, "  label={};", escape_id(&format!("total cost {:.6}", model.total_cost)));
    out.push_str("}\n");
    out
}

pub fn model_to_report(model: &PreferenceModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Order of preferences for {}", model.population);
    for (gi, g) in model.groups.iter().enumerate() {
        let _ = writeln!(out);
        let _ = writeln!(out, "{}. {} (coefficient {:.6})", gi + 1, g.display_name(), g.coefficient);
        for (ai, a) in g.attribute_order.iter().enumerate() {
            let _ = writeln!(out, "   {}.{} {}", gi + 1, ai + 1, a);
        }
        let _ = writeln!(out, "   forest edges:");
        if g.forest.edges.is_empty() {
            let _ = writeln!(out, "     (none)");
        }
        for e in &g.forest.edges {
            let _ = writeln!(out, "     {} -- {}  {:.6}", e.u, e.v, e.w);
        }
        if !g.removed_edges.is_empty() {
            let _ = writeln!(out, "   removed pairs:");
            for r in &g.removed_edges {
                match r.r {
                    Some(v) => {
                        let _ = writeln!(out, "     {} -- {}  r={:.6}", r.u, r.v, v);
                    }
                    None => {
                        let _ = writeln!(out, "     {} -- {}  r=undefined", r.u, r.v);
                    }
                }
            }
        }
        let _ = writeln!(
            out,
            "   subtotal {:.6}, {} component(s)",
            g.forest.total_weight, g.forest.component_count
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "Total cost {:.6}", model.total_cost);
    out
}
