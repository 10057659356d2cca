//! Small simple undirected graphs on vertices `0..n`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Precondition(format!("edge ({}, {}) out of range for {} vertices", u, v, n)));
            }
            if u == v {
                return Err(Error::Precondition(format!("self-loop at {}", u)));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(0, n - 1);
        }
        g
    }

    /// `rows × cols` grid; vertex `(r, c)` is `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut g = Graph::new(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    g.add_edge(v, v + 1);
                }
                if r + 1 < rows {
                    g.add_edge(v, v + cols);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    /// Adds `{u, v}`; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, s) in self.adj.iter().enumerate() {
            for &v in s.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_forest(&self) -> bool {
        self.num_edges() + self.components().len() == self.len()
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.is_forest()
    }

    /// Shortest path from `s` to `t` avoiding `blocked`, preferring
    /// lexicographically least vertex sequences among shortest ones.
    pub fn shortest_path(&self, s: usize, t: usize, blocked: &[bool]) -> Option<Vec<usize>> {
        let n = self.len();
        let mut dist = vec![usize::MAX; n];
        dist[t] = 0;
        let mut queue = std::collections::VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX && (!blocked[w] || w == s) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist[s] == usize::MAX {
            return None;
        }
        let mut path = vec![s];
        let mut v = s;
        while v != t {
            v = *self.adj[v].iter().find(|&&w| dist[w] != usize::MAX && dist[w] + 1 == dist[v]).unwrap();
            path.push(v);
        }
        Some(path)
    }

    /// Subgraph induced by `vertices` (relabelled in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut idx = vec![usize::MAX; self.len()];
        for (i, &v) in vertices.iter().enumerate() {
            idx[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if idx[w] != usize::MAX {
                    g.add_edge(i, idx[w]);
                }
            }
        }
        g
    }

    /// Quotient graph where vertex `v` becomes `class[v]`; loops dropped.
    pub fn contract(&self, class: &[usize], classes: usize) -> Graph {
        let mut g = Graph::new(classes);
        for (u, v) in self.edges() {
            g.add_edge(class[u], class[v]);
        }
        g
    }
}
