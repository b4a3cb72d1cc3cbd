//! Exact solvers (branch and bound) and 2-approximations for feedback
//! vertex set and vertex cover, with support for forced / forbidden
//! vertices. These back the problem signatures and serve as the oracle in
//! every soundness test.

use std::collections::BTreeSet;

use num_rational::Rational64;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph with {n} vertices exceeds solver cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("solver requires at most 64 vertices, got {0}")]
    BitsetOverflow(usize),
}

/// Default vertex-count cap for the exact solvers.
pub const EXACT_SOLVE_CAP: usize = 25;

fn bitmask_adjacency(g: &Graph) -> Result<Vec<u64>, SolveError> {
    if g.n() > 64 {
        return Err(SolveError::BitsetOverflow(g.n()));
    }
    let mut adj = vec![0u64; g.n()];
    for (u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    Ok(adj)
}

// ---------------------------------------------------------------------------
// Feedback vertex set
// ---------------------------------------------------------------------------

struct FvsSearch {
    adj: Vec<u64>,
    forbidden: u64,
    best: Option<(u32, u64)>,
}

impl FvsSearch {
    /// Removes degree <= 1 vertices until none remain; they lie on no cycle.
    fn prune_acyclic_fringe(&self, mut active: u64) -> u64 {
        loop {
            let mut changed = false;
            let mut rest = active;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if (self.adj[v] & active).count_ones() <= 1 {
                    active &= !(1 << v);
                    changed = true;
                }
            }
            if !changed {
                return active;
            }
        }
    }

    /// A shortest cycle in the active subgraph, as a vertex list.
    /// Assumes every active vertex has degree >= 2 (fringe pruned).
    fn shortest_cycle(&self, active: u64) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        let mut rest = active;
        while rest != 0 {
            let root = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // BFS from root; the first non-tree edge seen closes a shortest
            // cycle through root.
            let mut parent = vec![usize::MAX; 64];
            let mut dist = vec![u32::MAX; 64];
            dist[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            'bfs: while let Some(v) = queue.pop_front() {
                let mut nbrs = self.adj[v] & active;
                while nbrs != 0 {
                    let u = nbrs.trailing_zeros() as usize;
                    nbrs &= nbrs - 1;
                    if u == parent[v] {
                        continue;
                    }
                    if dist[u] == u32::MAX {
                        dist[u] = dist[v] + 1;
                        parent[u] = v;
                        queue.push_back(u);
                    } else {
                        // Close the cycle through the walk-up to the meeting point.
                        let mut left = vec![v];
                        let mut right = vec![u];
                        let (mut a, mut b) = (v, u);
                        while a != b {
                            if dist[a] >= dist[b] {
                                a = parent[a];
                                left.push(a);
                            } else {
                                b = parent[b];
                                right.push(b);
                            }
                        }
                        right.pop();
                        right.reverse();
                        left.extend(right);
                        if best.as_ref().is_none_or(|c| left.len() < c.len()) {
                            best = Some(left);
                        }
                        break 'bfs;
                    }
                }
            }
        }
        best
    }

    /// Greedy vertex-disjoint cycle packing; each packed cycle forces one
    /// deletion, so the count is a lower bound.
    fn packing_lower_bound(&self, mut active: u64) -> u32 {
        let mut count = 0;
        loop {
            active = self.prune_acyclic_fringe(active);
            match self.shortest_cycle(active) {
                Some(cycle) => {
                    for v in cycle {
                        active &= !(1 << v);
                    }
                    count += 1;
                }
                None => return count,
            }
        }
    }

    fn branch(&mut self, active: u64, taken: u64, count: u32) {
        if let Some((bound, _)) = self.best {
            if count >= bound {
                return;
            }
        }
        let active = self.prune_acyclic_fringe(active);
        let Some(cycle) = self.shortest_cycle(active) else {
            if self.best.is_none_or(|(b, _)| count < b) {
                self.best = Some((count, taken));
            }
            return;
        };
        if let Some((bound, _)) = self.best {
            if count + self.packing_lower_bound(active) >= bound {
                return;
            }
        }
        // Every feedback set hits this cycle; deleting vertices off it
        // cannot break it, so branching over its deletable vertices is
        // exhaustive. No deletable vertex means this branch is infeasible.
        for &v in &cycle {
            if self.forbidden >> v & 1 == 1 {
                continue;
            }
            self.branch(active & !(1 << v), taken | 1 << v, count + 1);
        }
    }
}

/// Minimum feedback vertex set avoiding `forbidden`, with witness.
/// Returns `None` when some cycle consists entirely of forbidden vertices.
pub fn min_fvs_constrained(
    g: &Graph,
    forbidden: &VertexSet,
) -> Result<Option<(u64, VertexSet)>, SolveError> {
    let adj = bitmask_adjacency(g)?;
    let forbidden_mask = forbidden.iter().fold(0u64, |m, &v| m | 1 << v);
    let mut search = FvsSearch {
        adj,
        forbidden: forbidden_mask,
        best: None,
    };
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    search.branch(all, 0, 0);
    Ok(search.best.map(|(count, taken)| {
        let set: VertexSet = (0..g.n()).filter(|&v| taken >> v & 1 == 1).collect();
        (count as u64, set)
    }))
}

/// Minimum feedback vertex set with witness, capped at `cap` vertices.
pub fn min_fvs(g: &Graph, cap: usize) -> Result<(u64, VertexSet), SolveError> {
    if g.n() > cap {
        return Err(SolveError::TooLarge { n: g.n(), cap });
    }
    let result = min_fvs_constrained(g, &VertexSet::new())?;
    Ok(result.expect("unconstrained feedback vertex set always exists"))
}

// ---------------------------------------------------------------------------
// Vertex cover
// ---------------------------------------------------------------------------

struct VcSearch {
    adj: Vec<u64>,
    best: Option<(u32, u64)>,
}

impl VcSearch {
    fn branch(&mut self, mut active: u64, mut taken_count: u32, mut taken: u64) {
        // Degree-0 vertices are irrelevant; degree-1 vertices are dominated
        // by their neighbor.
        loop {
            let mut changed = false;
            let mut rest = active;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let deg = (self.adj[v] & active).count_ones();
                if deg == 0 {
                    active &= !(1 << v);
                    changed = true;
                } else if deg == 1 {
                    let u = (self.adj[v] & active).trailing_zeros() as usize;
                    taken |= 1 << u;
                    taken_count += 1;
                    active &= !(1 << u) & !(1 << v);
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
            if let Some((bound, _)) = self.best {
                if taken_count >= bound {
                    return;
                }
            }
        }
        if active == 0 {
            if self.best.is_none_or(|(b, _)| taken_count < b) {
                self.best = Some((taken_count, taken));
            }
            return;
        }
        if let Some((bound, _)) = self.best {
            // Matching lower bound: every matched edge needs one endpoint.
            let mut matched = 0;
            let mut avail = active;
            while avail != 0 {
                let v = avail.trailing_zeros() as usize;
                avail &= !(1 << v);
                let nbrs = self.adj[v] & avail;
                if nbrs != 0 {
                    let u = nbrs.trailing_zeros() as usize;
                    avail &= !(1 << u);
                    matched += 1;
                }
            }
            if taken_count + matched >= bound {
                return;
            }
        }
        // Branch on a maximum-degree vertex: take it, or take its whole
        // neighborhood.
        let v = {
            let mut best_v = usize::MAX;
            let mut best_deg = 0;
            let mut rest = active;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let deg = (self.adj[u] & active).count_ones();
                if deg > best_deg {
                    best_deg = deg;
                    best_v = u;
                }
            }
            best_v
        };
        let nbrs = self.adj[v] & active;
        self.branch(active & !(1 << v), taken_count + 1, taken | 1 << v);
        self.branch(
            active & !nbrs & !(1 << v),
            taken_count + nbrs.count_ones(),
            taken | nbrs,
        );
    }
}

/// Minimum vertex cover containing all of `forced_in` and none of
/// `forced_out`, with witness. Returns `None` when an edge joins two
/// forced-out vertices.
pub fn min_vc_constrained(
    g: &Graph,
    forced_in: &VertexSet,
    forced_out: &VertexSet,
) -> Result<Option<(u64, VertexSet)>, SolveError> {
    let adj = bitmask_adjacency(g)?;
    let mut taken = 0u64;
    for &v in forced_in {
        taken |= 1 << v;
    }
    // Neighbors of forced-out vertices must join the cover.
    for &v in forced_out {
        for &u in g.neighbors(v) {
            if forced_out.contains(&u) {
                return Ok(None);
            }
            taken |= 1 << u;
        }
    }
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    // Remove covered vertices; remaining graph must be covered from scratch.
    let mut active = all & !taken;
    for &v in forced_out {
        active &= !(1 << v);
    }
    let mut search = VcSearch { adj, best: None };
    search.branch(active, taken.count_ones(), taken);
    Ok(search.best.map(|(count, mask)| {
        let set: VertexSet = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        (count as u64, set)
    }))
}

/// Minimum vertex cover with witness, capped at `cap` vertices.
pub fn min_vc(g: &Graph, cap: usize) -> Result<(u64, VertexSet), SolveError> {
    if g.n() > cap {
        return Err(SolveError::TooLarge { n: g.n(), cap });
    }
    let result = min_vc_constrained(g, &VertexSet::new(), &VertexSet::new())?;
    Ok(result.expect("unconstrained vertex cover always exists"))
}

// ---------------------------------------------------------------------------
// Approximations
// ---------------------------------------------------------------------------

/// 2-approximate vertex cover: both endpoints of a greedy maximal matching.
pub fn vc_two_approx(g: &Graph) -> VertexSet {
    let mut cover = VertexSet::new();
    for (u, v) in g.edges() {
        if !cover.contains(&u) && !cover.contains(&v) {
            cover.insert(u);
            cover.insert(v);
        }
    }
    cover
}

/// 2-approximate feedback vertex set via the local-ratio scheme: lower
/// weights along semidisjoint cycles (or uniformly scaled by degree), pick
/// zero-weight vertices, then drop redundant picks in reverse order.
pub fn fvs_two_approx(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut weight: Vec<Rational64> = vec![Rational64::from_integer(1); n];
    let mut stack: Vec<usize> = Vec::new();

    let clean = |alive: &mut BTreeSet<usize>, adj: &mut Vec<BTreeSet<usize>>| loop {
        let Some(&v) = alive.iter().find(|&&v| adj[v].len() <= 1) else {
            return;
        };
        alive.remove(&v);
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for u in nbrs {
            adj[u].remove(&v);
        }
        adj[v].clear();
    };

    clean(&mut alive, &mut adj);
    while !alive.is_empty() {
        match semidisjoint_cycle(&alive, &adj) {
            Some(cycle) => {
                let gamma = cycle.iter().map(|&v| weight[v]).min().unwrap();
                for &v in &cycle {
                    weight[v] -= gamma;
                }
            }
            None => {
                let gamma = alive
                    .iter()
                    .map(|&v| weight[v] / Rational64::from_integer(adj[v].len() as i64 - 1))
                    .min()
                    .unwrap();
                for &v in alive.iter() {
                    weight[v] -= gamma * Rational64::from_integer(adj[v].len() as i64 - 1);
                }
            }
        }
        let zeroed: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&v| weight[v] == Rational64::from_integer(0))
            .collect();
        for v in zeroed {
            alive.remove(&v);
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            for u in nbrs {
                adj[u].remove(&v);
            }
            adj[v].clear();
            stack.push(v);
        }
        clean(&mut alive, &mut adj);
    }

    // Reverse delete: keep a pick only if dropping it reintroduces a cycle.
    let mut solution: VertexSet = stack.iter().copied().collect();
    for &v in stack.iter().rev() {
        let mut trial = solution.clone();
        trial.remove(&v);
        let keep: VertexSet = (0..n).filter(|u| !trial.contains(u)).collect();
        let (h, _) = g.induced(&keep).expect("vertex set is in range");
        if h.is_acyclic() {
            solution.remove(&v);
        }
    }
    solution
}

/// A cycle in which at most one vertex has degree >= 3: either a component
/// that is itself a cycle, or a chain of degree-2 vertices whose two chain
/// ends attach to the same higher-degree vertex.
fn semidisjoint_cycle(alive: &BTreeSet<usize>, adj: &[BTreeSet<usize>]) -> Option<Vec<usize>> {
    let mut visited = BTreeSet::new();
    for &start in alive.iter().filter(|&&v| adj[v].len() == 2) {
        if visited.contains(&start) {
            continue;
        }
        // Walk the degree-2 chain through `start` in both directions.
        let mut chain = vec![start];
        visited.insert(start);
        let mut endpoints = Vec::new();
        let mut closed = false;
        for &first in adj[start].iter() {
            if closed {
                break;
            }
            let (mut prev, mut cur) = (start, first);
            loop {
                if cur == start {
                    closed = true;
                    break;
                }
                if adj[cur].len() != 2 {
                    endpoints.push(cur);
                    break;
                }
                visited.insert(cur);
                chain.push(cur);
                let next = *adj[cur].iter().find(|&&u| u != prev).unwrap();
                prev = cur;
                cur = next;
            }
        }
        if closed {
            return Some(chain); // a pure cycle of degree-2 vertices
        }
        if endpoints.len() == 2 && endpoints[0] == endpoints[1] {
            chain.push(endpoints[0]);
            return Some(chain);
        }
    }
    None
}
