use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{DisjointSet, Edge, WeightedGraph, WEIGHT_TOLERANCE};
use crate::error::{Error, Result};

/// Maximum-weight spanning forest of a [`WeightedGraph`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningForest {
    /// Selected edges in the order Kruskal accepted them.
    pub edges: Vec<Edge>,
    /// Edges per connected component; components are ordered by their first
    /// node in graph order, and isolated nodes get an empty list.
    pub trees: Vec<Vec<Edge>>,
    pub total_weight: f64,
    pub component_count: usize,
}

impl SpanningForest {
    pub fn is_connected(&self) -> bool {
        self.component_count <= 1
    }
}

/// Descending weight, then lexicographic (min endpoint, max endpoint).
fn selection_order(a: &Edge, b: &Edge) -> Ordering {
    match b.w.total_cmp(&a.w) {
        Ordering::Equal => a.key().cmp(&b.key()),
        o => o,
    }
}

/// Kruskal's algorithm, taking the heaviest remaining edge first. A
/// disconnected graph yields one tree per component.
pub fn kruskal_max_forest(g: &WeightedGraph) -> SpanningForest {
    let n = g.nodes().len();
    let mut order: Vec<&Edge> = g.edges().iter().collect();
    order.sort_by(|a, b| selection_order(a, b));

    let mut ds = DisjointSet::new(n);
    let mut selected = Vec::with_capacity(n.saturating_sub(1));
    for e in order {
        if ds.components() <= 1 {
            break;
        }
        let (a, b) = g.endpoints(e);
        // endpoints come from the graph's own index
        if ds.union(a, b).unwrap_or(false) {
            selected.push(e.clone());
        }
    }

    let mut tree_of_root: HashMap<usize, usize> = HashMap::new();
    let mut node_tree = vec![0; n];
    for (i, slot) in node_tree.iter_mut().enumerate() {
        let root = ds.find(i).unwrap_or(i);
        let next = tree_of_root.len();
        *slot = *tree_of_root.entry(root).or_insert(next);
    }
    let mut trees = vec![Vec::new(); tree_of_root.len()];
    for e in &selected {
        let (a, _) = g.endpoints(e);
        trees[node_tree[a]].push(e.clone());
    }

    SpanningForest {
        total_weight: selected.iter().map(|e| e.w).sum(),
        component_count: ds.components(),
        edges: selected,
        trees,
    }
}

/// Outcome of [`validate_forest`]; each flag is one structural check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestReport {
    /// Edge count equals node count minus component count.
    pub edge_count: bool,
    pub acyclic: bool,
    /// Forest components coincide with graph components.
    pub spanning: bool,
    /// Every non-forest edge weighs no more than the lightest forest edge on
    /// the path between its endpoints.
    pub cycle_property: bool,
    pub violations: Vec<String>,
}

impl ForestReport {
    pub fn passed(&self) -> bool {
        self.edge_count && self.acyclic && self.spanning && self.cycle_property
    }
}

/// Checks a forest against the graph it claims to span.
pub fn validate_forest(g: &WeightedGraph, f: &SpanningForest) -> Result<ForestReport> {
    let n = g.nodes().len();
    let by_key: HashMap<(&str, &str), &Edge> = g.edges().iter().map(|e| (e.key(), e)).collect();
    for e in &f.edges {
        match by_key.get(&e.key()) {
            Some(ge) if ge.w == e.w => {}
            _ => {
                return Err(Error::EdgeNotInGraph {
                    u: e.u.clone(),
                    v: e.v.clone(),
                })
            }
        }
    }

    let mut violations = Vec::new();
    let mut ds = DisjointSet::new(n);
    let mut acyclic = true;
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &f.edges {
        let (a, b) = g.endpoints(e);
        if !ds.union(a, b)? {
            acyclic = false;
            violations.push(format!("edge {} -- {} closes a cycle", e.u, e.v));
        }
        adj[a].push((b, e.w));
        adj[b].push((a, e.w));
    }

    let graph_components = g.component_count();
    let forest_components = ds.components();
    let edge_count = f.edges.len() + forest_components == n
        && forest_components == f.component_count
        && f.edges.len() + f.component_count == n;
    if !edge_count {
        violations.push(format!(
            "{} edges for {n} nodes and {} components",
            f.edges.len(),
            f.component_count
        ));
    }
    let spanning = forest_components == graph_components;
    if !spanning {
        violations.push(format!(
            "forest has {forest_components} components, graph has {graph_components}"
        ));
    }

    let mut cycle_property = true;
    if acyclic {
        let in_forest: std::collections::HashSet<(&str, &str)> =
            f.edges.iter().map(|e| e.key()).collect();
        for e in g.edges() {
            if in_forest.contains(&e.key()) {
                continue;
            }
            let (a, b) = g.endpoints(e);
            match min_on_path(&adj, a, b) {
                Some(lightest) if e.w <= lightest + WEIGHT_TOLERANCE => {}
                Some(lightest) => {
                    cycle_property = false;
                    violations.push(format!(
                        "non-forest edge {} -- {} ({}) outweighs forest path minimum {}",
                        e.u, e.v, e.w, lightest
                    ));
                }
                // endpoints in different forest components: already a
                // spanning failure, and the edge could be added
                None => {
                    cycle_property = false;
                    violations.push(format!(
                        "non-forest edge {} -- {} joins two forest components",
                        e.u, e.v
                    ));
                }
            }
        }
    } else {
        cycle_property = false;
    }

    Ok(ForestReport {
        edge_count,
        acyclic,
        spanning,
        cycle_property,
        violations,
    })
}

/// Minimum edge weight on the unique forest path from `from` to `to`.
fn min_on_path(adj: &[Vec<(usize, f64)>], from: usize, to: usize) -> Option<f64> {
    let mut best = vec![None; adj.len()];
    best[from] = Some(f64::INFINITY);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            return best[x];
        }
        let here = best[x].unwrap_or(f64::INFINITY);
        for &(y, w) in &adj[x] {
            if best[y].is_none() {
                best[y] = Some(here.min(w));
                queue.push_back(y);
            }
        }
    }
    None
}
