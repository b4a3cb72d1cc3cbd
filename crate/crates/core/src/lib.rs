//! Protrusion-based kernelization for sparse graphs, together with an
//! audit harness that measures the structural counting bounds the kernel
//! size argument rests on.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`] — simple undirected graphs and the vertex-set operators
//!   (boundary, neighborhood, `D_X`, contraction, components).
//! * [`sparsity`] — average-degree and clique-count checks for graphs
//!   excluding a fixed topological minor, plus a brute-force subdivision
//!   tester for small pattern graphs.
//! * [`decomposition`] — tree decompositions: validation, exact small-width
//!   search, a min-fill heuristic, and rooted forest decompositions of `G − X`.
//! * [`boundaried`] — t-boundaried graphs, gluing, replacement, canonical
//!   codes, and exhaustive enumeration up to label-preserving isomorphism.
//! * [`fii`] — problem signatures (feedback vertex set, vertex cover) on
//!   boundaried graphs and representative tables for the equivalence
//!   relation they induce.
//! * [`kernelizer`] — the executable reduction rule: find a modulator,
//!   locate small-boundary protrusions, replace them by table
//!   representatives, and adjust the parameter.
//! * [`audit`] — component classification, the bag-marking algorithm with
//!   scrubs and twigs, central paths, the cutting-up decomposition, and a
//!   checker for every counting bound.

pub mod audit;
pub mod boundaried;
pub mod decomposition;
pub mod fii;
pub mod graph;
pub mod kernelizer;
pub mod solvers;
pub mod sparsity;

pub use graph::{Graph, VertexSet};
