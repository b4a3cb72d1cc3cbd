//! Simple undirected graphs over integer vertex ids `0..n`.
//!
//! Graphs are immutable after construction; every editing operation returns
//! a new graph together with an explicit old-id → new-id mapping so that
//! callers (the kernelizer in particular) can map solutions back.

use std::collections::BTreeSet;

use thiserror::Error;

/// An ordered set of vertex ids within some host graph.
pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0} not allowed")]
    SelfLoop(usize),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("vertex sets must be disjoint but share vertex {0}")]
    SetsOverlap(usize),
}

/// A simple undirected graph: no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
    m: usize,
}

impl Graph {
    /// An edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.adj[u].insert(v) {
                g.adj[v].insert(u);
                g.m += 1;
            }
        }
        Ok(g)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("complete graph edges are valid")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle edges are valid")
    }

    /// Path on `n` vertices (n - 1 edges).
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    /// All edges as ordered pairs (u, v) with u < v, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in self.adj[u].range((u + 1)..) {
                out.push((u, v));
            }
        }
        out
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if let Some(&v) = s.iter().next_back() {
            self.check_vertex(v)?;
        }
        Ok(())
    }

    /// ∂(W): the vertices of `w` with a neighbor outside `w`.
    pub fn boundary(&self, w: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_set(w)?;
        Ok(w.iter()
            .copied()
            .filter(|&v| self.adj[v].iter().any(|u| !w.contains(u)))
            .collect())
    }

    /// N(W): the vertices outside `w` adjacent to `w`; equals ∂(V ∖ W).
    pub fn neighborhood(&self, w: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_set(w)?;
        let mut out = VertexSet::new();
        for &v in w {
            for &u in &self.adj[v] {
                if !w.contains(&u) {
                    out.insert(u);
                }
            }
        }
        Ok(out)
    }

    /// D_X(Y): the number of vertices of `x` with at least one neighbor in `y`.
    /// The sets must be disjoint.
    pub fn degree_wrt(&self, x: &VertexSet, y: &VertexSet) -> Result<usize, GraphError> {
        self.check_set(x)?;
        self.check_set(y)?;
        if let Some(&v) = x.intersection(y).next() {
            return Err(GraphError::SetsOverlap(v));
        }
        Ok(x.iter()
            .filter(|&&u| self.adj[u].iter().any(|v| y.contains(v)))
            .count())
    }

    /// Contracts the edge (u, v) into a single vertex adjacent to the union
    /// of the endpoints' former neighborhoods. Returns the new graph and the
    /// old-id → new-id mapping (both endpoints map to the merged vertex).
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<(Graph, Vec<usize>), GraphError> {
        if !self.has_edge(u, v) {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
            return Err(GraphError::NotAnEdge(u, v));
        }
        let (keep, drop) = if u < v { (u, v) } else { (v, u) };
        // Old ids above `drop` shift down by one; `drop` maps onto `keep`.
        let map: Vec<usize> = (0..self.n)
            .map(|w| {
                if w == drop {
                    keep
                } else if w > drop {
                    w - 1
                } else {
                    w
                }
            })
            .collect();
        let mut edges = Vec::with_capacity(self.m);
        for (a, b) in self.edges() {
            let (na, nb) = (map[a], map[b]);
            if na != nb {
                edges.push((na, nb));
            }
        }
        let g = Graph::from_edges(self.n - 1, &edges)?;
        Ok((g, map))
    }

    /// Induced subgraph on `s`. Returns the graph and the new-id → old-id
    /// mapping (new ids follow the sorted order of `s`).
    pub fn induced(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_set(s)?;
        let order: Vec<usize> = s.iter().copied().collect();
        let index_of = |v: usize| order.binary_search(&v).ok();
        let mut edges = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            for &u in self.adj[v].range((v + 1)..) {
                if let Some(j) = index_of(u) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(order.len(), &edges)?;
        Ok((g, order))
    }

    /// Connected components as vertex sets, sorted by minimum vertex id.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Component of `G − removed` containing `start`, or `None` when
    /// `start` itself is removed.
    pub fn component_avoiding(&self, start: usize, removed: &VertexSet) -> Option<VertexSet> {
        if removed.contains(&start) || start >= self.n {
            return None;
        }
        let mut comp = VertexSet::new();
        let mut stack = vec![start];
        comp.insert(start);
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !removed.contains(&u) && comp.insert(u) {
                    stack.push(u);
                }
            }
        }
        Some(comp)
    }

    /// Connected components of `G − removed`.
    pub fn components_avoiding(&self, removed: &VertexSet) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        for &v in removed {
            if v < self.n {
                seen[v] = true;
            }
        }
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// True iff the induced subgraph on `s` is connected (empty sets count
    /// as connected).
    pub fn is_connected_subset(&self, s: &VertexSet) -> bool {
        let Some(&start) = s.iter().next() else {
            return true;
        };
        let mut seen = VertexSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if s.contains(&u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == s.len()
    }

    /// True iff the graph has no cycle.
    pub fn is_acyclic(&self) -> bool {
        let mut parent = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if u == parent[v] {
                        continue;
                    }
                    if seen[u] {
                        return false;
                    }
                    seen[u] = true;
                    parent[u] = v;
                    stack.push(u);
                }
            }
        }
        true
    }
}

/// Convenience constructor for vertex sets in tests and call sites.
pub fn vset<I: IntoIterator<Item = usize>>(vs: I) -> VertexSet {
    vs.into_iter().collect()
}
