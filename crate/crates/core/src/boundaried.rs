//! t-boundaried graphs: graphs with `t` distinguished vertices labeled 1
//! through t. Gluing identifies equal labels, replacement swaps a
//! protrusion for a boundaried graph, and canonical codes make exhaustive
//! enumeration up to label-preserving isomorphism possible.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundariedError {
    #[error("boundary labels must be injective vertex ids below {n}: {details}")]
    InvalidBoundary { n: usize, details: String },
    #[error("boundary sizes differ: {left} vs {right}")]
    MismatchedT { left: usize, right: usize },
    #[error("labeling must be a bijection from the boundary onto 1..={t}: {details}")]
    InvalidLabeling { t: usize, details: String },
    #[error("replacement boundary size {rep} does not match |∂(W)| = {actual}")]
    BoundarySizeMismatch { rep: usize, actual: usize },
    #[error("{what} {value} exceeds enumeration cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("n_max {n_max} is below the boundary size {t}")]
    NMaxBelowT { n_max: usize, t: usize },
}

/// A graph with `t` labeled boundary vertices; `boundary[i]` carries
/// label `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundariedGraph {
    graph: Graph,
    boundary: Vec<usize>,
}

impl BoundariedGraph {
    pub fn new(graph: Graph, boundary: Vec<usize>) -> Result<Self, BoundariedError> {
        let n = graph.n();
        let mut seen = VertexSet::new();
        for &v in &boundary {
            if v >= n {
                return Err(BoundariedError::InvalidBoundary {
                    n,
                    details: format!("vertex {v} out of range"),
                });
            }
            if !seen.insert(v) {
                return Err(BoundariedError::InvalidBoundary {
                    n,
                    details: format!("vertex {v} labeled twice"),
                });
            }
        }
        Ok(BoundariedGraph { graph, boundary })
    }

    /// The edgeless graph consisting only of `t` labeled vertices.
    pub fn boundary_only(t: usize) -> Self {
        BoundariedGraph {
            graph: Graph::new(t),
            boundary: (0..t).collect(),
        }
    }

    pub fn t(&self) -> usize {
        self.boundary.len()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn boundary_set(&self) -> VertexSet {
        self.boundary.iter().copied().collect()
    }

    pub fn internal_vertices(&self) -> VertexSet {
        let b = self.boundary_set();
        self.graph.vertices().filter(|v| !b.contains(v)).collect()
    }
}

/// Result of gluing two boundaried graphs: the combined graph, the ids of
/// the identified boundary (by label), and where each operand's vertices
/// ended up.
#[derive(Debug, Clone)]
pub struct Glued {
    pub graph: Graph,
    pub boundary: Vec<usize>,
    pub left_map: Vec<usize>,
    pub right_map: Vec<usize>,
}

/// Glues two t-boundaried graphs by identifying equally labeled vertices.
/// Left vertices keep their ids; right internals are appended.
pub fn glue(left: &BoundariedGraph, right: &BoundariedGraph) -> Result<Glued, BoundariedError> {
    if left.t() != right.t() {
        return Err(BoundariedError::MismatchedT {
            left: left.t(),
            right: right.t(),
        });
    }
    let n_left = left.graph.n();
    let left_map: Vec<usize> = (0..n_left).collect();
    let mut right_map = vec![usize::MAX; right.graph.n()];
    for (i, &v) in right.boundary.iter().enumerate() {
        right_map[v] = left.boundary[i];
    }
    let mut next = n_left;
    for target in right_map.iter_mut() {
        if *target == usize::MAX {
            *target = next;
            next += 1;
        }
    }
    let mut edges = left.graph.edges();
    for (u, v) in right.graph.edges() {
        edges.push((right_map[u], right_map[v]));
    }
    let graph = Graph::from_edges(next, &edges).expect("glued ids are dense and loop-free");
    Ok(Glued {
        graph,
        boundary: left.boundary.clone(),
        left_map,
        right_map,
    })
}

/// Result of replacing a protrusion: the new graph, where every kept vertex
/// went, and the ids of the former boundary, by label.
#[derive(Debug, Clone)]
pub struct Replaced {
    pub graph: Graph,
    /// old id → new id for every vertex of `V ∖ W'` (kept vertices).
    pub kept: BTreeMap<usize, usize>,
    pub boundary: Vec<usize>,
}

/// Replaces the restricted protrusion `W' = W ∖ ∂(W)` by `rep`:
/// the result is `G[V ∖ W'] ⊕ rep`, where ∂(W) is labeled by `labeling`
/// (vertex → label in 1..=t) and identified with `rep`'s boundary.
pub fn replace_protrusion(
    g: &Graph,
    w: &VertexSet,
    rep: &BoundariedGraph,
    labeling: &BTreeMap<usize, usize>,
) -> Result<Replaced, BoundariedError> {
    let boundary = g.boundary(w).map_err(|e| BoundariedError::InvalidBoundary {
        n: g.n(),
        details: e.to_string(),
    })?;
    let t = rep.t();
    if boundary.len() != t {
        return Err(BoundariedError::BoundarySizeMismatch {
            rep: t,
            actual: boundary.len(),
        });
    }
    if labeling.len() != t {
        return Err(BoundariedError::InvalidLabeling {
            t,
            details: format!("labeling has {} entries", labeling.len()),
        });
    }
    let mut by_label = vec![usize::MAX; t];
    for (&v, &label) in labeling {
        if !boundary.contains(&v) || label == 0 || label > t || by_label[label - 1] != usize::MAX {
            return Err(BoundariedError::InvalidLabeling {
                t,
                details: format!("vertex {v} with label {label}"),
            });
        }
        by_label[label - 1] = v;
    }

    let restricted: VertexSet = w.difference(&boundary).copied().collect();
    let kept_old: Vec<usize> = g.vertices().filter(|v| !restricted.contains(v)).collect();
    let old_to_new: BTreeMap<usize, usize> =
        kept_old.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        if let (Some(&nu), Some(&nv)) = (old_to_new.get(&u), old_to_new.get(&v)) {
            edges.push((nu, nv));
        }
    }
    let host = Graph::from_edges(kept_old.len(), &edges).expect("kept ids are dense");
    let host_boundary: Vec<usize> = by_label.iter().map(|&v| old_to_new[&v]).collect();
    let host_bg = BoundariedGraph::new(host, host_boundary).expect("labels are injective");
    let glued = glue(&host_bg, rep)?;

    let kept = old_to_new
        .into_iter()
        .map(|(old, mid)| (old, glued.left_map[mid]))
        .collect();
    Ok(Replaced {
        graph: glued.graph,
        kept,
        boundary: glued.boundary,
    })
}

/// A stable, serializable code equal for two boundaried graphs exactly when
/// they are isomorphic via a map fixing every boundary label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Minimum adjacency code over all vertex orderings that fix the boundary
/// labels: the boundary comes first in label order, internal vertices are
/// permuted exhaustively. Factorial in the internal count, which is fine
/// at enumeration scale.
pub fn canonical_form(bg: &BoundariedGraph) -> CanonicalCode {
    let n = bg.graph.n();
    let t = bg.t();
    let internals: Vec<usize> = bg.internal_vertices().into_iter().collect();
    let mut order: Vec<usize> = bg.boundary.to_vec();
    order.extend(internals.iter().copied());

    let bit_count = n * n.saturating_sub(1) / 2;
    let words = bit_count.div_ceil(64).max(1);
    let pack = |order: &[usize]| -> Vec<u64> {
        let mut bits = vec![0u64; words];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if bg.graph.has_edge(order[i], order[j]) {
                    bits[k / 64] |= 1u64 << (63 - k % 64);
                }
                k += 1;
            }
        }
        bits
    };

    let mut best = pack(&order);
    let mut perm = internals;
    permute(&mut perm, 0, &mut |p| {
        let mut candidate_order: Vec<usize> = bg.boundary.to_vec();
        candidate_order.extend(p.iter().copied());
        let candidate = pack(&candidate_order);
        if candidate < best {
            best = candidate;
        }
    });

    let hex: String = best.iter().map(|w| format!("{w:016x}")).collect();
    let hex = &hex[..bit_count.div_ceil(4).max(1)];
    CanonicalCode(format!("t{t}n{n}:{hex}"))
}

fn permute(items: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start >= items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// Which boundaried graphs the enumerator yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectivityRule {
    /// Every component contains a boundary vertex (equivalently, every
    /// non-boundary vertex lies in a component meeting the boundary).
    BoundaryAnchored,
    /// No restriction.
    Unrestricted,
}

/// Enumeration caps; the defaults keep the exhaustive search at desk scale.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationCaps {
    pub max_t: usize,
    pub max_n: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps { max_t: 2, max_n: 6 }
    }
}

/// Every boundaried graph with at most `n_max` vertices satisfying the
/// connectivity rule, exactly once up to [`canonical_form`], sorted by
/// (vertex count, edge count, code).
pub fn enumerate_boundaried(
    t: usize,
    n_max: usize,
    rule: ConnectivityRule,
    caps: EnumerationCaps,
) -> Result<Vec<BoundariedGraph>, BoundariedError> {
    if t > caps.max_t {
        return Err(BoundariedError::CapExceeded {
            what: "boundary size",
            value: t,
            cap: caps.max_t,
        });
    }
    if n_max > caps.max_n {
        return Err(BoundariedError::CapExceeded {
            what: "vertex cap",
            value: n_max,
            cap: caps.max_n,
        });
    }
    if n_max < t {
        return Err(BoundariedError::NMaxBelowT { n_max, t });
    }

    let mut seen: BTreeMap<CanonicalCode, BoundariedGraph> = BTreeMap::new();
    for n in t..=n_max {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u64..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let graph = Graph::from_edges(n, &edges).expect("generated edges are valid");
            if rule == ConnectivityRule::BoundaryAnchored
                && !graph
                    .connected_components()
                    .iter()
                    .all(|comp| comp.iter().any(|&v| v < t))
            {
                continue;
            }
            let bg = BoundariedGraph::new(graph, (0..t).collect()).expect("boundary is 0..t");
            seen.entry(canonical_form(&bg)).or_insert(bg);
        }
    }
    let mut out: Vec<(CanonicalCode, BoundariedGraph)> = seen.into_iter().collect();
    out.sort_by(|(ca, a), (cb, b)| {
        (a.graph.n(), a.graph.m(), ca).cmp(&(b.graph.n(), b.graph.m(), cb))
    });
    Ok(out.into_iter().map(|(_, bg)| bg).collect())
}
