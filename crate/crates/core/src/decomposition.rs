//! Tree decompositions: validation against the three defining conditions,
//! exact treewidth for small graphs (subset dynamic programming over
//! elimination orderings), a min-fill heuristic, and rooted forest
//! decompositions of `G − X`.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("graph with {n} vertices exceeds exact-treewidth cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("component containing vertex {witness} has width {width}, above the bound {bound}")]
    WidthExceeded {
        witness: usize,
        width: i64,
        bound: i64,
    },
    #[error("node set is not connected in the decomposition tree")]
    SubtreeNotConnected,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
}

/// A violated tree-decomposition condition, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The node graph is not a tree (or a bag mentions a missing vertex).
    NotATree,
    BagVertexOutOfRange { node: usize, vertex: usize },
    /// Condition 1: some graph vertex occurs in no bag.
    VertexNotCovered(usize),
    /// Condition 2: some edge has no bag containing both endpoints.
    EdgeNotCovered(usize, usize),
    /// Condition 3: the bags containing this vertex are not connected.
    DisconnectedOccurrences(usize),
}

/// A tree of bags over a host graph. Nodes are `0..bags.len()`; `edges`
/// are the tree edges; `root` is set for rooted decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
    pub root: Option<usize>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<VertexSet>, edges: Vec<(usize, usize)>) -> Self {
        TreeDecomposition {
            bags,
            edges,
            root: None,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.bags.len()
    }

    /// Width = max bag size − 1; −1 for the empty decomposition.
    pub fn width(&self) -> i64 {
        self.bags
            .iter()
            .map(|b| b.len() as i64 - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn node_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Parent of every node with respect to the root (root has none).
    pub fn parent_map(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.num_nodes()];
        let Some(root) = self.root else {
            return parents;
        };
        let adj = self.node_neighbors();
        let mut seen = vec![false; self.num_nodes()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parents[u] = Some(v);
                    queue.push_back(u);
                }
            }
        }
        parents
    }

    /// Nodes in breadth-first order from the root.
    pub fn bfs_order(&self) -> Vec<usize> {
        let Some(root) = self.root else {
            return (0..self.num_nodes()).collect();
        };
        let adj = self.node_neighbors();
        let mut order = Vec::with_capacity(self.num_nodes());
        let mut seen = vec![false; self.num_nodes()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        order
    }

    pub fn depths(&self, parents: &[Option<usize>]) -> Vec<usize> {
        let mut depth = vec![0; self.num_nodes()];
        for v in self.bfs_order() {
            if let Some(p) = parents[v] {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// Least common ancestor with respect to the root.
    pub fn lca(&self, parents: &[Option<usize>], depths: &[usize], a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        while depths[a] > depths[b] {
            a = parents[a].expect("depth > 0 has a parent");
        }
        while depths[b] > depths[a] {
            b = parents[b].expect("depth > 0 has a parent");
        }
        while a != b {
            a = parents[a].expect("distinct nodes at equal depth have parents");
            b = parents[b].expect("distinct nodes at equal depth have parents");
        }
        a
    }

    /// All nodes in the subtree rooted at `node` (with respect to `parents`).
    pub fn subtree_nodes(&self, node: usize, parents: &[Option<usize>]) -> BTreeSet<usize> {
        let adj = self.node_neighbors();
        let mut nodes = BTreeSet::from([node]);
        let mut stack = vec![node];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if parents[u] == Some(v) && nodes.insert(u) {
                    stack.push(u);
                }
            }
        }
        nodes
    }

    /// Union of the bags of `nodes`.
    pub fn bag_union(&self, nodes: &BTreeSet<usize>) -> VertexSet {
        let mut out = VertexSet::new();
        for &v in nodes {
            out.extend(self.bags[v].iter().copied());
        }
        out
    }

    /// True iff `nodes` is non-empty and connected in the decomposition tree.
    pub fn is_connected_node_set(&self, nodes: &BTreeSet<usize>) -> bool {
        let Some(&start) = nodes.iter().next() else {
            return false;
        };
        let adj = self.node_neighbors();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if nodes.contains(&u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == nodes.len()
    }
}

/// Checks the three tree-decomposition conditions plus structural sanity;
/// returns every violation found (empty means valid).
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Vec<Violation> {
    let mut violations = Vec::new();
    let nodes = td.num_nodes();

    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n() {
                violations.push(Violation::BagVertexOutOfRange { node: i, vertex: v });
            }
        }
    }
    if !violations.is_empty() {
        return violations;
    }

    // The node graph must be a tree; an empty one is allowed only when the
    // graph itself is empty.
    let tree_ok = if nodes == 0 {
        g.n() == 0
    } else if td.edges.len() != nodes - 1
        || td.edges.iter().any(|&(a, b)| a >= nodes || b >= nodes)
    {
        false
    } else {
        let adj = td.node_neighbors();
        let mut seen = vec![false; nodes];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == nodes
    };
    if !tree_ok {
        violations.push(Violation::NotATree);
        return violations;
    }

    // Condition 1: bags cover V.
    let mut covered = vec![false; g.n()];
    for bag in &td.bags {
        for &v in bag {
            covered[v] = true;
        }
    }
    for (v, seen) in covered.iter().enumerate() {
        if !seen {
            violations.push(Violation::VertexNotCovered(v));
        }
    }

    // Condition 2: every edge inside some bag.
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            violations.push(Violation::EdgeNotCovered(u, v));
        }
    }

    // Condition 3: per-vertex occurrences induce a subtree.
    let adj = td.node_neighbors();
    for v in 0..g.n() {
        let occurrences: BTreeSet<usize> =
            (0..nodes).filter(|&i| td.bags[i].contains(&v)).collect();
        if occurrences.is_empty() {
            continue; // already reported as uncovered
        }
        let &start = occurrences.iter().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for &b in &adj[a] {
                if occurrences.contains(&b) && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        if seen.len() != occurrences.len() {
            violations.push(Violation::DisconnectedOccurrences(v));
        }
    }

    violations
}

pub fn is_valid(g: &Graph, td: &TreeDecomposition) -> bool {
    validate(g, td).is_empty()
}

/// Default vertex-count cap for [`treewidth_exact`].
pub const TREEWIDTH_EXACT_N_CAP: usize = 14;

#[derive(Debug, Clone)]
pub enum ExactTreewidth {
    /// Optimal width within the requested cap, with a certifying
    /// decomposition.
    Within {
        width: i64,
        decomposition: TreeDecomposition,
    },
    /// The optimum exceeds the requested width cap.
    ExceedsCap { optimum: i64 },
}

/// Exact treewidth by dynamic programming over elimination prefixes:
/// `TW(S) = min_{v in S} max(TW(S − v), degree of v after eliminating S − v)`.
pub fn treewidth_exact(g: &Graph, width_cap: i64) -> Result<ExactTreewidth, DecompositionError> {
    treewidth_exact_capped(g, width_cap, TREEWIDTH_EXACT_N_CAP)
}

pub fn treewidth_exact_capped(
    g: &Graph,
    width_cap: i64,
    n_cap: usize,
) -> Result<ExactTreewidth, DecompositionError> {
    let n = g.n();
    if n > n_cap || n > 22 {
        return Err(DecompositionError::TooLarge {
            n,
            cap: n_cap.min(22),
        });
    }
    if n == 0 {
        return Ok(ExactTreewidth::Within {
            width: -1,
            decomposition: TreeDecomposition::new(Vec::new(), Vec::new()),
        });
    }

    // Q(S, v): neighbors of v outside S reachable through S.
    let eliminated_degree = |mask: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut reached = 0u32;
        let mut stack = vec![v];
        while let Some(a) = stack.pop() {
            for &b in g.neighbors(a) {
                if seen >> b & 1 == 1 {
                    continue;
                }
                seen |= 1 << b;
                if mask >> b & 1 == 1 {
                    stack.push(b);
                } else {
                    reached += 1;
                }
            }
        }
        reached
    };

    let full = (1u32 << n) - 1;
    let mut tw = vec![u8::MAX; 1 << n];
    tw[0] = 0;
    for mask in 1u32..=full {
        let mut best = u8::MAX;
        let mut sub = mask;
        while sub != 0 {
            let v = sub.trailing_zeros() as usize;
            sub &= sub - 1;
            let prev = mask & !(1 << v);
            let deg = eliminated_degree(prev, v) as u8;
            let candidate = tw[prev as usize].max(deg);
            if candidate < best {
                best = candidate;
            }
        }
        tw[mask as usize] = best;
    }

    let optimum = tw[full as usize] as i64;
    if optimum > width_cap {
        return Ok(ExactTreewidth::ExceedsCap { optimum });
    }

    // Recover an optimal elimination ordering by walking the table down.
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    while mask != 0 {
        let target = tw[mask as usize];
        let mut sub = mask;
        let mut picked = None;
        while sub != 0 {
            let v = sub.trailing_zeros() as usize;
            sub &= sub - 1;
            let prev = mask & !(1 << v);
            let deg = eliminated_degree(prev, v) as u8;
            if tw[prev as usize].max(deg) == target {
                picked = Some(v);
                break;
            }
        }
        let v = picked.expect("the table minimum is attained by some vertex");
        order.push(v);
        mask &= !(1 << v);
    }
    order.reverse(); // order[0] eliminated first

    let decomposition = decomposition_from_elimination(g, &order);
    debug_assert!(decomposition.width() <= optimum.max(0));
    Ok(ExactTreewidth::Within {
        width: optimum,
        decomposition,
    })
}

/// Builds a tree decomposition from an elimination ordering: the bag of v
/// is v plus its neighborhood at elimination time (after fill-in), and v's
/// node hangs below the earliest-eliminated remaining neighbor.
fn decomposition_from_elimination(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut bags: Vec<VertexSet> = vec![VertexSet::new(); n];
    let mut tree_edges = Vec::new();
    let mut component_roots = Vec::new();

    for &v in order {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = VertexSet::from([v]);
        bag.extend(nbrs.iter().copied());
        bags[position[v]] = bag;
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        match nbrs.iter().map(|&u| position[u]).min() {
            Some(parent_pos) => tree_edges.push((position[v], parent_pos)),
            None => component_roots.push(position[v]),
        }
    }
    // Chain leftover roots so the node graph is a single tree even when the
    // host graph is disconnected.
    for pair in component_roots.windows(2) {
        tree_edges.push((pair[0], pair[1]));
    }
    TreeDecomposition::new(bags, tree_edges)
}

/// Min-fill elimination heuristic; always returns a valid decomposition,
/// with no optimality guarantee.
pub fn tree_decomposition_heuristic(g: &Graph) -> TreeDecomposition {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut remaining: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let fill_count = |v: usize, adj: &[BTreeSet<usize>]| -> usize {
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !adj[a].contains(&b) {
                        fill += 1;
                    }
                }
            }
            fill
        };
        let &v = remaining
            .iter()
            .min_by_key(|&&v| (fill_count(v, &adj), v))
            .unwrap();
        remaining.remove(&v);
        order.push(v);
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
    }
    decomposition_from_elimination(g, &order)
}

/// Rooted tree decomposition of a single component, with bags in host-graph
/// vertex ids.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub decomposition: TreeDecomposition,
    pub component: VertexSet,
}

/// One rooted tree decomposition per connected component of `G − X`.
#[derive(Debug, Clone)]
pub struct ForestDecomposition {
    pub trees: Vec<RootedTree>,
}

impl ForestDecomposition {
    /// Union of the components covered by the forest.
    pub fn covered_vertices(&self) -> VertexSet {
        let mut out = VertexSet::new();
        for tree in &self.trees {
            out.extend(tree.component.iter().copied());
        }
        out
    }
}

/// Decomposes every component of `G − X` with width at most `t`, rooting
/// each tree at a bag of degree at least two where the tree has one
/// (smaller trees are rooted at node 0).
pub fn rooted_forest_decomposition(
    g: &Graph,
    x: &VertexSet,
    t: i64,
) -> Result<ForestDecomposition, DecompositionError> {
    let mut trees = Vec::new();
    for component in g.components_avoiding(x) {
        let tree = decompose_component(g, &component, t)?;
        trees.push(tree);
    }
    Ok(ForestDecomposition { trees })
}

/// Decomposes the single component `component` of `G − X`.
pub fn decompose_component(
    g: &Graph,
    component: &VertexSet,
    t: i64,
) -> Result<RootedTree, DecompositionError> {
    let witness = *component.iter().next().expect("components are non-empty");
    let (sub, back) = g.induced(component).expect("component ids are in range");
    let local = if sub.n() <= TREEWIDTH_EXACT_N_CAP {
        match treewidth_exact(&sub, t).expect("size checked") {
            ExactTreewidth::Within { decomposition, .. } => decomposition,
            ExactTreewidth::ExceedsCap { optimum } => {
                return Err(DecompositionError::WidthExceeded {
                    witness,
                    width: optimum,
                    bound: t,
                })
            }
        }
    } else {
        let heuristic = tree_decomposition_heuristic(&sub);
        if heuristic.width() > t {
            return Err(DecompositionError::WidthExceeded {
                witness,
                width: heuristic.width(),
                bound: t,
            });
        }
        heuristic
    };

    let mut decomposition = TreeDecomposition::new(
        local
            .bags
            .iter()
            .map(|bag| bag.iter().map(|&v| back[v]).collect())
            .collect(),
        local.edges.clone(),
    );
    decomposition.root = Some(pick_root(&decomposition));
    Ok(RootedTree {
        decomposition,
        component: component.clone(),
    })
}

/// The smallest bag of degree >= 2 when the tree has at least three nodes;
/// node 0 otherwise (the degree requirement is vacuous there).
fn pick_root(td: &TreeDecomposition) -> usize {
    if td.num_nodes() >= 3 {
        let adj = td.node_neighbors();
        if let Some(v) = (0..td.num_nodes()).find(|&v| adj[v].len() >= 2) {
            return v;
        }
    }
    0
}

/// Induced subgraph on the union of the bags of a connected node set.
/// Returns the graph and the new-id → old-id mapping.
pub fn induced_by_subtree(
    g: &Graph,
    td: &TreeDecomposition,
    nodes: &BTreeSet<usize>,
) -> Result<(Graph, Vec<usize>), DecompositionError> {
    if let Some(&max) = nodes.iter().next_back() {
        if max >= td.num_nodes() {
            return Err(DecompositionError::NodeOutOfRange(max));
        }
    }
    if !td.is_connected_node_set(nodes) {
        return Err(DecompositionError::SubtreeNotConnected);
    }
    let union = td.bag_union(nodes);
    Ok(g.induced(&union).expect("bags hold valid vertices"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;

    fn path_decomposition(g: &Graph) -> TreeDecomposition {
        // natural width-1 decomposition of a path graph
        let bags: Vec<VertexSet> = (1..g.n()).map(|i| vset([i - 1, i])).collect();
        let edges: Vec<(usize, usize)> = (1..bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(bags, edges)
    }

    #[test]
    fn path_decomposition_is_valid() {
        let g = Graph::path(5);
        let td = path_decomposition(&g);
        assert!(validate(&g, &td).is_empty());
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn missing_edge_bag_is_reported() {
        let g = Graph::path(3);
        let td = TreeDecomposition::new(vec![vset([0, 1]), vset([2])], vec![(0, 1)]);
        assert_eq!(validate(&g, &td), vec![Violation::EdgeNotCovered(1, 2)]);
    }

    #[test]
    fn split_occurrences_are_reported() {
        // vertex 0 appears in two bags that are not adjacent
        let g = Graph::path(3);
        let td = TreeDecomposition::new(
            vec![vset([0, 1]), vset([1, 2]), vset([0, 2])],
            vec![(0, 1), (1, 2)],
        );
        assert_eq!(
            validate(&g, &td),
            vec![Violation::DisconnectedOccurrences(0)]
        );
    }

    #[test]
    fn non_tree_is_reported() {
        let g = Graph::path(2);
        let td = TreeDecomposition::new(vec![vset([0, 1]), vset([0, 1])], vec![]);
        assert_eq!(validate(&g, &td), vec![Violation::NotATree]);
    }

    #[test]
    fn exact_treewidth_of_standard_graphs() {
        let tree =
            Graph::from_edges(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        match treewidth_exact(&tree, 10).unwrap() {
            ExactTreewidth::Within {
                width,
                decomposition,
            } => {
                assert_eq!(width, 1);
                assert!(validate(&tree, &decomposition).is_empty());
            }
            _ => panic!("within cap"),
        }
        for n in 3..8 {
            let g = Graph::cycle(n);
            match treewidth_exact(&g, 10).unwrap() {
                ExactTreewidth::Within {
                    width,
                    decomposition,
                } => {
                    assert_eq!(width, 2, "cycle {n}");
                    assert!(validate(&g, &decomposition).is_empty());
                }
                _ => panic!("within cap"),
            }
        }
        let k5 = Graph::complete(5);
        match treewidth_exact(&k5, 10).unwrap() {
            ExactTreewidth::Within {
                width,
                decomposition,
            } => {
                assert_eq!(width, 4);
                assert!(validate(&k5, &decomposition).is_empty());
            }
            _ => panic!("within cap"),
        }
    }

    #[test]
    fn width_cap_is_reported() {
        match treewidth_exact(&Graph::complete(6), 2).unwrap() {
            ExactTreewidth::ExceedsCap { optimum } => assert_eq!(optimum, 5),
            _ => panic!("K6 exceeds width 2"),
        }
    }

    #[test]
    fn n_cap_is_enforced() {
        let g = Graph::path(20);
        assert_eq!(
            treewidth_exact(&g, 5).unwrap_err(),
            DecompositionError::TooLarge { n: 20, cap: 14 }
        );
    }

    /// Brute-force treewidth: minimum over all elimination orderings of the
    /// maximum elimination degree.
    fn treewidth_by_permutations(g: &Graph) -> i64 {
        use itertools::Itertools;
        let mut best = i64::MAX;
        for order in (0..g.n()).permutations(g.n()) {
            let mut adj: Vec<BTreeSet<usize>> =
                (0..g.n()).map(|v| g.neighbors(v).clone()).collect();
            let mut worst = 0i64;
            for &v in &order {
                let nbrs: Vec<usize> = adj[v].iter().copied().collect();
                worst = worst.max(nbrs.len() as i64);
                for (i, &a) in nbrs.iter().enumerate() {
                    adj[a].remove(&v);
                    for &b in &nbrs[i + 1..] {
                        adj[a].insert(b);
                        adj[b].insert(a);
                    }
                }
                adj[v].clear();
            }
            best = best.min(worst);
        }
        best
    }

    fn seeded_graph(n: usize, seed: u64, density_mod: u64) -> Graph {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if next() % density_mod == 0 {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn exact_treewidth_matches_permutation_search() {
        for seed in 0..25 {
            let g = seeded_graph(7, seed, 3);
            let expected = treewidth_by_permutations(&g);
            match treewidth_exact(&g, 10).unwrap() {
                ExactTreewidth::Within {
                    width,
                    decomposition,
                } => {
                    assert_eq!(width, expected, "seed {seed}");
                    assert!(validate(&g, &decomposition).is_empty(), "seed {seed}");
                }
                _ => panic!("within cap"),
            }
        }
        // a few eight-vertex instances against the full 8! search
        for seed in 0..4 {
            let g = seeded_graph(8, seed, 3);
            let expected = treewidth_by_permutations(&g);
            match treewidth_exact(&g, 10).unwrap() {
                ExactTreewidth::Within { width, .. } => {
                    assert_eq!(width, expected, "n=8 seed {seed}")
                }
                _ => panic!("within cap"),
            }
        }
    }

    #[test]
    fn heuristic_produces_valid_decompositions() {
        let forest = Graph::from_edges(7, &[(0, 1), (1, 2), (3, 4), (4, 5), (5, 6)]).unwrap();
        let td = tree_decomposition_heuristic(&forest);
        assert!(validate(&forest, &td).is_empty());
        assert_eq!(td.width(), 1);

        let c6 = Graph::cycle(6);
        let td = tree_decomposition_heuristic(&c6);
        assert!(validate(&c6, &td).is_empty());
        assert_eq!(td.width(), 2);

        // 3x3 grid has treewidth 3.
        let mut edges = Vec::new();
        for row in 0..3 {
            for col in 0..3 {
                let v = 3 * row + col;
                if col + 1 < 3 {
                    edges.push((v, v + 1));
                }
                if row + 1 < 3 {
                    edges.push((v, v + 3));
                }
            }
        }
        let grid = Graph::from_edges(9, &edges).unwrap();
        let td = tree_decomposition_heuristic(&grid);
        assert!(validate(&grid, &td).is_empty());
        assert!(td.width() <= 3);
    }

    #[test]
    fn heuristic_on_random_graphs_is_always_valid() {
        for seed in 0..20 {
            let g = seeded_graph(10, seed, 3);
            let td = tree_decomposition_heuristic(&g);
            assert!(validate(&g, &td).is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn forest_decomposition_of_path_components() {
        // G − X a path: single path-shaped decomposition rooted internally.
        let g = Graph::path(6);
        let fd = rooted_forest_decomposition(&g, &vset([]), 1).unwrap();
        assert_eq!(fd.trees.len(), 1);
        let tree = &fd.trees[0];
        assert_eq!(tree.component, vset(0..6));
        let root = tree.decomposition.root.unwrap();
        assert!(tree.decomposition.node_neighbors()[root].len() >= 2);
        assert!(tree.decomposition.bags.iter().all(|b| b.len() <= 2));
    }

    #[test]
    fn forest_decomposition_of_empty_remainder() {
        let g = Graph::complete(3);
        let fd = rooted_forest_decomposition(&g, &vset(0..3), 1).unwrap();
        assert!(fd.trees.is_empty());
    }

    #[test]
    fn forest_decomposition_of_two_triangles() {
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 6)])
            .unwrap();
        let fd = rooted_forest_decomposition(&g, &vset([6]), 2).unwrap();
        assert_eq!(fd.trees.len(), 2);
        for tree in &fd.trees {
            assert!(tree.decomposition.bags.iter().all(|b| b.len() <= 3));
            assert_eq!(
                tree.decomposition
                    .bag_union(&(0..tree.decomposition.num_nodes()).collect()),
                tree.component
            );
        }
        assert_eq!(fd.covered_vertices(), vset(0..6));
    }

    #[test]
    fn forest_decomposition_rejects_wide_components() {
        let g = Graph::complete(4);
        match rooted_forest_decomposition(&g, &vset([]), 1) {
            Err(DecompositionError::WidthExceeded {
                witness,
                width,
                bound,
            }) => {
                assert_eq!((witness, width, bound), (0, 3, 1));
            }
            other => panic!("expected width error, got {other:?}"),
        }
    }

    #[test]
    fn induced_by_subtree_cases() {
        let g = Graph::path(5);
        let fd = rooted_forest_decomposition(&g, &vset([]), 1).unwrap();
        let td = &fd.trees[0].decomposition;

        // single bag
        let one = BTreeSet::from([0usize]);
        let (sub, _) = induced_by_subtree(&g, td, &one).unwrap();
        assert_eq!(sub.n(), td.bags[0].len());

        // whole tree covers the component
        let all: BTreeSet<usize> = (0..td.num_nodes()).collect();
        let (sub, _) = induced_by_subtree(&g, td, &all).unwrap();
        assert_eq!(sub.n(), 5);

        // disconnected node sets are rejected (the two end bags)
        if td.num_nodes() >= 3 {
            let adj = td.node_neighbors();
            let leaves: Vec<usize> = (0..td.num_nodes()).filter(|&v| adj[v].len() == 1).collect();
            let split = BTreeSet::from([leaves[0], leaves[1]]);
            assert_eq!(
                induced_by_subtree(&g, td, &split).unwrap_err(),
                DecompositionError::SubtreeNotConnected
            );
        }
    }

    #[test]
    fn two_adjacent_bags_induce_their_union() {
        let g = Graph::path(4);
        let td = path_decomposition(&g); // bags {0,1},{1,2},{2,3}
        let (sub, back) = induced_by_subtree(&g, &td, &BTreeSet::from([0, 1])).unwrap();
        assert_eq!(back, vec![0, 1, 2]);
        assert_eq!(sub.m(), 2);
    }
}
