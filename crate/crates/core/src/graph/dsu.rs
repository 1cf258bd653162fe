//! Disjoint-set union with path compression and union by rank.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    components: usize,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            components: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of disjoint sets.
    pub fn components(&self) -> usize {
        self.components
    }

    fn check(&self, x: usize) -> Result<()> {
        if x < self.parent.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(x))
        }
    }

    pub fn find(&mut self, x: usize) -> Result<usize> {
        self.check(x)?;
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        Ok(root)
    }

    /// Merges the sets containing `a` and `b`. Returns `false` if they were
    /// already the same set.
    pub fn union(&mut self, a: usize, b: usize) -> Result<bool> {
        let ra = self.find(a)?;
        let rb = self.find(b)?;
        if ra == rb {
            return Ok(false);
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.components -= 1;
        Ok(true)
    }

    pub fn same(&mut self, a: usize, b: usize) -> Result<bool> {
        Ok(self.find(a)? == self.find(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_examples() {
        let mut ds = DisjointSet::new(3);
        assert!(ds.union(0, 1).unwrap());
        assert!(!ds.union(0, 1).unwrap());
        assert!(ds.union(1, 2).unwrap());
        assert_eq!(ds.find(0).unwrap(), ds.find(2).unwrap());
        assert_eq!(ds.components(), 1);
    }

    #[test]
    fn unknown_element() {
        let mut ds = DisjointSet::new(2);
        assert!(matches!(ds.union(0, 5), Err(Error::UnknownElement(5))));
        assert!(matches!(ds.find(2), Err(Error::UnknownElement(2))));
    }

    #[test]
    fn find_returns_root_and_count_tracks_unions() {
        let mut ds = DisjointSet::new(10);
        let pairs = [(0, 1), (2, 3), (1, 3), (4, 5), (0, 2), (7, 8), (8, 9), (9, 7)];
        let mut merged = 0;
        for (a, b) in pairs {
            if ds.union(a, b).unwrap() {
                merged += 1;
            }
        }
        assert_eq!(ds.components(), 10 - merged);
        for x in 0..10 {
            let r = ds.find(x).unwrap();
            assert_eq!(ds.find(r).unwrap(), r);
        }
        assert!(ds.same(0, 3).unwrap());
        assert!(!ds.same(0, 4).unwrap());
    }
}
