//! The preference model and the steps that assemble it from correlations.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::graph::{Edge, SpanningForest, WeightedGraph};
use crate::stats::CorrelationMatrix;

/// Candidate pair dropped by feature selection. `r` is `None` when the
/// correlation is undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemovedEdge {
    pub u: String,
    pub v: String,
    pub r: Option<f64>,
}

/// Keeps the strictly positive correlations of `m` as weighted edges over
/// all of its attributes. Pairs with `r ≤ 0` or undefined `r` are returned
/// separately.
pub fn select_positive_edges(m: &CorrelationMatrix) -> (WeightedGraph, Vec<RemovedEdge>) {
    let names = m.names();
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for (i, j, r) in m.pairs() {
        match r {
            Some(r) if r > 0.0 => kept.push(Edge::new(names[i].clone(), names[j].clone(), r)),
            _ => removed.push(RemovedEdge {
                u: names[i].clone(),
                v: names[j].clone(),
                r,
            }),
        }
    }
    // names are unique and pairs come from the upper triangle
    let graph = WeightedGraph::new(names.to_vec(), kept).expect("correlation pairs form a simple graph");
    (graph, removed)
}

/// Sum of every selected edge weight across all forests.
pub fn compute_total_cost<'a>(forests: impl IntoIterator<Item = &'a SpanningForest>) -> f64 {
    forests
        .into_iter()
        .flat_map(|f| f.edges.iter())
        .map(|e| e.w)
        .sum()
}

/// Orders a group's attributes from its forest.
///
/// The first attribute is the one with the largest total weight of incident
/// forest edges. The rest follow in descending weight of the first forest
/// edge (in selection order) that touches them; attributes with no forest
/// edge come last. Ties go to the lexicographically smaller name.
pub fn attribute_order(nodes: &[String], forest: &SpanningForest) -> Vec<String> {
    let mut incident: HashMap<&str, f64> = nodes.iter().map(|n| (n.as_str(), 0.0)).collect();
    let mut first_edge: HashMap<&str, f64> = HashMap::new();
    for e in &forest.edges {
        for end in [e.u.as_str(), e.v.as_str()] {
            *incident.entry(end).or_insert(0.0) += e.w;
            first_edge.entry(end).or_insert(e.w);
        }
    }
    let Some(root) = nodes
        .iter()
        .max_by(|a, b| incident[a.as_str()].total_cmp(&incident[b.as_str()]).then_with(|| b.cmp(a)))
    else {
        return Vec::new();
    };
    let mut rest: Vec<&String> = nodes.iter().filter(|n| *n != root).collect();
    rest.sort_by(|a, b| {
        match (first_edge.get(a.as_str()), first_edge.get(b.as_str())) {
            (Some(x), Some(y)) => y.total_cmp(x),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
        .then_with(|| a.cmp(b))
    });
    std::iter::once(root).chain(rest).cloned().collect()
}

/// One group of the preference model.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupModel {
    pub name: String,
    pub label: Option<String>,
    /// Classification-function coefficient that ranked this group.
    pub coefficient: f64,
    /// Member composites in schema order.
    pub nodes: Vec<String>,
    pub attribute_order: Vec<String>,
    pub forest: SpanningForest,
    pub removed_edges: Vec<RemovedEdge>,
}

impl GroupModel {
    pub fn display_name(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }
}

/// Final output: ordered groups, ordered attributes, per-group forests.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceModel {
    /// Class whose classification function ranked the groups.
    pub population: String,
    /// Groups in preference order.
    pub groups: Vec<GroupModel>,
    pub total_cost: f64,
}

impl PreferenceModel {
    pub fn assemble(population: String, groups: Vec<GroupModel>) -> Self {
        let total_cost = compute_total_cost(groups.iter().map(|g| &g.forest));
        Self {
            population,
            groups,
            total_cost,
        }
    }

    pub fn group_order(&self) -> Vec<&str> {
        self.groups.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn group(&self, name: &str) -> Option<&GroupModel> {
        self.groups.iter().find(|g| g.name == name)
    }
}
