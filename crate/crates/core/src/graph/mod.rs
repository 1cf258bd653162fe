//! Weighted undirected graphs and maximum spanning forests.

mod dot;
mod dsu;
mod kruskal;
mod oracle;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dot::{escape_id, forest_to_dot};
pub use dsu::DisjointSet;
pub use kruskal::{kruskal_max_forest, validate_forest, ForestReport, SpanningForest};
pub use oracle::{brute_force_max_spanning_weight, BRUTE_FORCE_NODE_LIMIT};

/// Tolerance used when comparing edge weights in forest validation.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Undirected weighted edge between two named nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: String,
    pub v: String,
    pub w: f64,
}

impl Edge {
    pub fn new(u: impl Into<String>, v: impl Into<String>, w: f64) -> Self {
        Self {
            u: u.into(),
            v: v.into(),
            w,
        }
    }

    /// Endpoints in lexicographic order.
    pub fn key(&self) -> (&str, &str) {
        if self.u <= self.v {
            (&self.u, &self.v)
        } else {
            (&self.v, &self.u)
        }
    }
}

/// Simple undirected graph: no self-loops, no repeated node pairs, finite
/// weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

impl WeightedGraph {
    pub fn new(nodes: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Graph(format!("duplicate node {n:?}")));
            }
        }
        let mut pairs = HashSet::new();
        for e in &edges {
            for end in [&e.u, &e.v] {
                if !index.contains_key(end) {
                    return Err(Error::Graph(format!("edge endpoint {end:?} is not a node")));
                }
            }
            if e.u == e.v {
                return Err(Error::Graph(format!("self-loop on {:?}", e.u)));
            }
            if !e.w.is_finite() {
                return Err(Error::Graph(format!("non-finite weight on {:?} -- {:?}", e.u, e.v)));
            }
            let (a, b) = e.key();
            if !pairs.insert((a.to_string(), b.to_string())) {
                return Err(Error::Graph(format!("duplicate edge {a:?} -- {b:?}")));
            }
        }
        Ok(Self { nodes, edges, index })
    }

    /// Graph over `nodes` plus any endpoint not already listed, appended in
    /// order of first appearance.
    pub fn from_edges(mut nodes: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            for end in [&e.u, &e.v] {
                if !nodes.contains(end) {
                    nodes.push(end.clone());
                }
            }
        }
        Self::new(nodes, edges)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub(crate) fn endpoints(&self, e: &Edge) -> (usize, usize) {
        (self.index[&e.u], self.index[&e.v])
    }

    /// Connected components counted by breadth-first search.
    pub fn component_count(&self) -> usize {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            let (a, b) = self.endpoints(e);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(x) = queue.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push(y);
                    }
                }
            }
        }
        count
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.u.clone(), e.v.clone(), e.w * factor))
            .collect();
        Self::new(self.nodes.clone(), edges)
    }
}
