//! Exhaustive maximum spanning forest weight, used to cross-check Kruskal.
//!
//! Enumerates every acyclic edge subset of size `n − components` by
//! backtracking. Shares no code with the greedy path.

use super::WeightedGraph;
use crate::error::{Error, Result};

pub const BRUTE_FORCE_NODE_LIMIT: usize = 10;

pub fn brute_force_max_spanning_weight(g: &WeightedGraph) -> Result<f64> {
    let n = g.nodes().len();
    if n > BRUTE_FORCE_NODE_LIMIT {
        return Err(Error::GraphTooLarge {
            nodes: n,
            limit: BRUTE_FORCE_NODE_LIMIT,
        });
    }
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = g.endpoints(e);
            (a, b, e.w)
        })
        .collect();

    let labels = connected_labels(n, &edges);
    let components = labels.iter().enumerate().filter(|&(i, &l)| l == i).count();
    let target = n - components;

    let mut search = Search {
        edges: &edges,
        target,
        best: None,
    };
    search.run(0, 0, 0.0, (0..n).collect());
    // a spanning forest always exists, so `best` is set
    Ok(search.best.unwrap_or(0.0))
}

/// Component label per node: the smallest node index reachable from it.
fn connected_labels(n: usize, edges: &[(usize, usize, f64)]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(a, b, _) in edges {
            let m = label[a].min(label[b]);
            if label[a] != m || label[b] != m {
                label[a] = m;
                label[b] = m;
                changed = true;
            }
        }
        if !changed {
            return label;
        }
    }
}

struct Search<'a> {
    edges: &'a [(usize, usize, f64)],
    target: usize,
    best: Option<f64>,
}

impl Search<'_> {
    /// `comp[i]` labels the partial forest's component containing node `i`.
    fn run(&mut self, next: usize, taken: usize, weight: f64, comp: Vec<usize>) {
        if taken == self.target {
            if self.best.is_none_or(|b| weight > b) {
                self.best = Some(weight);
            }
            return;
        }
        if self.edges.len() - next < self.target - taken {
            return;
        }
        let (a, b, w) = self.edges[next];
        if comp[a] != comp[b] {
            let (from, to) = (comp[b], comp[a]);
            let merged = comp.iter().map(|&c| if c == from { to } else { c }).collect();
            self.run(next + 1, taken + 1, weight + w, merged);
        }
        self.run(next + 1, taken, weight, comp);
    }
}
