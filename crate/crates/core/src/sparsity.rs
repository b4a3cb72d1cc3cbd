//! Sparsity certificates for graphs excluding a fixed topological minor:
//! the average-degree bound, total clique counting, and a brute-force
//! subdivision tester for small pattern graphs.

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SparsityError {
    #[error("average degree is undefined on the empty graph")]
    EmptyGraph,
    #[error("pattern graph with {n} vertices exceeds the tester cap {cap}")]
    PatternTooLarge { n: usize, cap: usize },
    #[error("excluded-clique order must be at least 3, got {0}")]
    OrderTooSmall(usize),
}

/// Default cap on the pattern size for [`contains_topological_minor`].
pub const PATTERN_CAP: usize = 6;

/// The constants of the sparsity bounds: average degree below `beta * r^2`
/// and at most `2^(tau * r * log r) * n` cliques, where `r` is the order of
/// the excluded clique.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityConstants {
    pub r: usize,
    pub beta: Rational64,
    pub tau: Rational64,
    /// Base of the logarithm in the clique-count exponent.
    pub log_base: f64,
}

impl SparsityConstants {
    /// Constants for excluding a topological clique of order `r >= 3`.
    pub fn for_excluded_order(r: usize) -> Result<Self, SparsityError> {
        if r < 3 {
            return Err(SparsityError::OrderTooSmall(r));
        }
        Ok(SparsityConstants {
            r,
            beta: Rational64::from_integer(10),
            tau: Rational64::new(451, 100),
            log_base: 2.0,
        })
    }

    /// The average-degree bound `beta * r^2`.
    pub fn average_degree_bound(&self) -> Rational64 {
        self.beta * Rational64::from_integer((self.r * self.r) as i64)
    }

    /// The per-vertex clique-count factor `2^(tau * r * log r)`.
    pub fn clique_factor(&self) -> f64 {
        let tau = *self.tau.numer() as f64 / *self.tau.denom() as f64;
        let log_r = (self.r as f64).ln() / self.log_base.ln();
        2f64.powf(tau * self.r as f64 * log_r)
    }
}

/// Exact average degree `2|E| / |V|`.
pub fn average_degree(g: &Graph) -> Result<Rational64, SparsityError> {
    if g.n() == 0 {
        return Err(SparsityError::EmptyGraph);
    }
    Ok(Rational64::new(2 * g.m() as i64, g.n() as i64))
}

/// Number of non-empty vertex subsets inducing a complete subgraph;
/// singletons and edges count, the empty set does not.
pub fn count_cliques(g: &Graph) -> u64 {
    fn extend(g: &Graph, candidates: &[usize], count: &mut u64) {
        for (i, &v) in candidates.iter().enumerate() {
            *count += 1;
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&u| g.has_edge(u, v))
                .collect();
            extend(g, &next, count);
        }
    }
    let all: Vec<usize> = g.vertices().collect();
    let mut count = 0;
    extend(g, &all, &mut count);
    count
}

/// One row of a sparsity audit: measured quantities against their bounds.
#[derive(Debug, Clone, Serialize)]
pub struct SparsityCheck {
    pub average_degree: f64,
    pub average_degree_bound: f64,
    pub average_degree_holds: bool,
    pub clique_count: u64,
    pub clique_bound: f64,
    pub clique_count_holds: bool,
}

/// Measures the graph against both sparsity bounds. The empty graph
/// passes vacuously with zero measurements.
pub fn check_sparsity_bounds(g: &Graph, c: &SparsityConstants) -> SparsityCheck {
    let (avg, avg_holds) = if g.n() == 0 {
        (Rational64::from_integer(0), true)
    } else {
        let avg = average_degree(g).expect("nonempty");
        (avg, avg < c.average_degree_bound())
    };
    let bound = c.average_degree_bound();
    let clique_count = count_cliques(g);
    let clique_bound = c.clique_factor() * g.n() as f64;
    SparsityCheck {
        average_degree: *avg.numer() as f64 / *avg.denom() as f64,
        average_degree_bound: *bound.numer() as f64 / *bound.denom() as f64,
        average_degree_holds: avg_holds,
        clique_count,
        clique_bound,
        clique_count_holds: clique_count as f64 <= clique_bound,
    }
}

/// Tests whether `g` contains a subdivision of `h`: an injective assignment
/// of branch vertices plus internally vertex-disjoint connecting paths.
/// Exhaustive search with degree pruning; `h` is capped at [`PATTERN_CAP`]
/// vertices.
pub fn contains_topological_minor(g: &Graph, h: &Graph) -> Result<bool, SparsityError> {
    contains_topological_minor_capped(g, h, PATTERN_CAP)
}

pub fn contains_topological_minor_capped(
    g: &Graph,
    h: &Graph,
    cap: usize,
) -> Result<bool, SparsityError> {
    if h.n() > cap {
        return Err(SparsityError::PatternTooLarge { n: h.n(), cap });
    }
    if h.n() > g.n() || h.m() > g.m() {
        return Ok(false);
    }
    let mut finder = SubdivisionFinder {
        g,
        h,
        assignment: vec![usize::MAX; h.n()],
        used: vec![false; g.n()],
        order: branch_order(h),
    };
    Ok(finder.assign(0))
}

/// Branch vertices in descending pattern degree, so the most constrained
/// choices come first.
fn branch_order(h: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = h.vertices().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(h.degree(v)));
    order
}

struct SubdivisionFinder<'a> {
    g: &'a Graph,
    h: &'a Graph,
    assignment: Vec<usize>,
    used: Vec<bool>,
    order: Vec<usize>,
}

impl SubdivisionFinder<'_> {
    fn assign(&mut self, idx: usize) -> bool {
        if idx == self.order.len() {
            let edges = self.h.edges();
            return self.route(&edges, 0);
        }
        let hv = self.order[idx];
        let needed = self.h.degree(hv);
        // Candidates in degree-descending order, ties by id.
        let mut candidates: Vec<usize> = self
            .g
            .vertices()
            .filter(|&v| !self.used[v] && self.g.degree(v) >= needed)
            .collect();
        candidates.sort_by_key(|&v| (std::cmp::Reverse(self.g.degree(v)), v));
        for v in candidates {
            self.assignment[hv] = v;
            self.used[v] = true;
            if self.assign(idx + 1) {
                return true;
            }
            self.used[v] = false;
            self.assignment[hv] = usize::MAX;
        }
        false
    }

    /// Routes the pattern edges one at a time, enumerating simple paths for
    /// the current edge shortest-first and backtracking across edges.
    /// Interior path vertices stay flagged `used` while later edges are
    /// routed, which enforces internal disjointness.
    fn route(&mut self, edges: &[(usize, usize)], idx: usize) -> bool {
        if idx == edges.len() {
            return true;
        }
        let (source, target) = (self.assignment[edges[idx].0], self.assignment[edges[idx].1]);
        let dist = self.distances_to(target);
        self.extend_path(source, target, &dist, edges, idx)
    }

    /// BFS distances to `target` through currently free vertices; used to
    /// order the path search (short detours first) and prune dead ends.
    fn distances_to(&self, target: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.g.n()];
        dist[target] = 0;
        let mut queue = std::collections::VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            for &u in self.g.neighbors(v) {
                if dist[u] == usize::MAX && !self.used[u] {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    fn extend_path(
        &mut self,
        current: usize,
        target: usize,
        dist: &[usize],
        edges: &[(usize, usize)],
        idx: usize,
    ) -> bool {
        if self.g.has_edge(current, target) && self.route(edges, idx + 1) {
            return true;
        }
        // Availability only shrinks while a path grows, so vertices
        // unreachable at routing start stay unreachable.
        let mut nexts: Vec<usize> = self
            .g
            .neighbors(current)
            .iter()
            .copied()
            .filter(|&u| u != target && !self.used[u] && dist[u] != usize::MAX)
            .collect();
        nexts.sort_by_key(|&u| (dist[u], u));
        for u in nexts {
            self.used[u] = true;
            if self.extend_path(u, target, dist, edges, idx) {
                return true;
            }
            self.used[u] = false;
        }
        false
    }
}

/// The Petersen graph: vertices 0..5 outer cycle, 5..10 inner pentagram.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("petersen edges are valid")
}

/// Complete bipartite graph with sides `a` and `b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Graph::from_edges(a + b, &edges).expect("bipartite edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn average_degree_values() {
        assert_eq!(
            average_degree(&Graph::complete(4)).unwrap(),
            Rational64::from_integer(3)
        );
        assert_eq!(
            average_degree(&Graph::path(4)).unwrap(),
            Rational64::new(3, 2)
        );
        assert_eq!(
            average_degree(&Graph::new(5)).unwrap(),
            Rational64::from_integer(0)
        );
        assert_eq!(average_degree(&Graph::new(0)), Err(SparsityError::EmptyGraph));
    }

    #[test]
    fn clique_counts() {
        // K_3: 3 singletons + 3 edges + 1 triangle
        assert_eq!(count_cliques(&Graph::complete(3)), 7);
        assert_eq!(count_cliques(&Graph::new(6)), 6);
        // K_4: every non-empty subset is a clique
        assert_eq!(count_cliques(&Graph::complete(4)), 15);
        // path a-b-c: 3 singletons + 2 edges
        assert_eq!(count_cliques(&Graph::path(3)), 5);
    }

    #[test]
    fn clique_count_matches_subset_enumeration() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])
            .unwrap();
        let mut expected = 0;
        for mask in 1u32..(1 << g.n()) {
            let vs: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
            let complete = vs
                .iter()
                .enumerate()
                .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)));
            if complete {
                expected += 1;
            }
        }
        assert_eq!(count_cliques(&g), expected);
    }

    #[test]
    fn identity_embedding() {
        let k5 = Graph::complete(5);
        assert!(contains_topological_minor(&k5, &k5).unwrap());
    }

    #[test]
    fn cycles_are_subdivisions_of_triangles() {
        for n in 3..8 {
            assert!(contains_topological_minor(&Graph::cycle(n), &Graph::complete(3)).unwrap());
        }
    }

    #[test]
    fn petersen_has_no_k5_subdivision() {
        // All Petersen vertices have degree 3; K_5 branch vertices need 4.
        assert!(!contains_topological_minor(&petersen(), &Graph::complete(5)).unwrap());
    }

    #[test]
    fn petersen_has_k4_subdivision() {
        assert!(contains_topological_minor(&petersen(), &Graph::complete(4)).unwrap());
    }

    #[test]
    fn k33_has_k4_subdivision() {
        assert!(
            contains_topological_minor(&complete_bipartite(3, 3), &Graph::complete(4)).unwrap()
        );
    }

    #[test]
    fn k33_has_no_k5_subdivision() {
        assert!(
            !contains_topological_minor(&complete_bipartite(3, 3), &Graph::complete(5)).unwrap()
        );
    }

    #[test]
    fn path_patterns_and_disconnected_patterns() {
        // P_3 inside a long cycle.
        assert!(contains_topological_minor(&Graph::cycle(6), &Graph::path(3)).unwrap());
        // Two disjoint edges need four distinct vertices.
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(contains_topological_minor(&Graph::path(4), &two_edges).unwrap());
        assert!(!contains_topological_minor(&Graph::path(3), &two_edges).unwrap());
    }

    #[test]
    fn pattern_cap_enforced() {
        let big = Graph::complete(7);
        assert_eq!(
            contains_topological_minor(&Graph::complete(8), &big),
            Err(SparsityError::PatternTooLarge { n: 7, cap: 6 })
        );
    }

    #[test]
    fn bounds_check_on_small_graphs() {
        let c = SparsityConstants::for_excluded_order(5).unwrap();
        let report = check_sparsity_bounds(&Graph::complete(4), &c);
        assert!(report.average_degree_holds);
        assert!(report.clique_count_holds);
        assert_eq!(report.average_degree, 3.0);
        assert_eq!(report.average_degree_bound, 250.0);

        let edgeless = check_sparsity_bounds(&Graph::new(7), &c);
        assert!(edgeless.average_degree_holds && edgeless.clique_count_holds);
    }

    #[test]
    fn subdivision_free_graphs_satisfy_the_degree_bound() {
        // Checked universally over a seeded corpus: a graph without a
        // K_r subdivision keeps its average degree below beta * r^2.
        let mut state = 0x5eedu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for r in [3usize, 4] {
            let constants = SparsityConstants::for_excluded_order(r).unwrap();
            for _ in 0..60 {
                let n = 4 + (next() % 6) as usize;
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in (u + 1)..n {
                        if next() % 3 == 0 {
                            edges.push((u, v));
                        }
                    }
                }
                let g = Graph::from_edges(n, &edges).unwrap();
                if !contains_topological_minor(&g, &Graph::complete(r)).unwrap() {
                    assert!(average_degree(&g).unwrap() < constants.average_degree_bound());
                }
            }
        }
    }

    #[test]
    fn constants_require_r_at_least_three() {
        assert_eq!(
            SparsityConstants::for_excluded_order(2).unwrap_err(),
            SparsityError::OrderTooSmall(2)
        );
    }
}
