//! The executable reduction rule: find a treewidth modulator, locate
//! protrusions with small boundary, replace each by its table
//! representative, adjust the parameter by the class offset, and emit a
//! verified kernel with a step-by-step trace.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundaried::{replace_protrusion, BoundariedError, BoundariedGraph};
use crate::decomposition::{
    self, DecompositionError, TreeDecomposition,
};
use crate::fii::{lookup_representative, FiiError, FiiTable, Lookup, ProblemId, ProblemSpec};
use crate::graph::{Graph, VertexSet};
use crate::solvers::{
    fvs_two_approx, min_fvs, min_vc, vc_two_approx, SolveError,
};
use crate::sparsity::{contains_topological_minor_capped, SparsityError};

#[derive(Debug, Error)]
pub enum KernelizerError {
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Fii(#[from] FiiError),
    #[error(transparent)]
    Boundaried(#[from] BoundariedError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Sparsity(#[from] SparsityError),
    #[error("protrusion boundary size {boundary} does not match table t = {table}")]
    TableMismatch { boundary: usize, table: usize },
}

/// A problem instance: graph, parameter, problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub k: i64,
    pub problem: ProblemSpec,
}

/// A located protrusion: the vertex set, its boundary in the host graph,
/// and a validated width certificate for `G[W]`.
#[derive(Debug, Clone)]
pub struct Protrusion {
    pub w: VertexSet,
    pub boundary: VertexSet,
    pub certificate: TreeDecomposition,
}

impl Protrusion {
    pub fn restricted_size(&self) -> usize {
        self.w.len() - self.boundary.len()
    }
}

/// One replacement step of the reduction trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub w_size: usize,
    pub boundary_size: usize,
    pub class_key: String,
    pub offset: i64,
    pub vertices_after: usize,
}

/// The full reduction trace. When `trivialized_no` is set, the final
/// instance is the canonical trivial NO and `k_final` is 0 regardless of
/// the offset sum.
#[derive(Debug, Clone, Default)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    pub k_initial: i64,
    pub k_final: i64,
    pub trivialized_no: bool,
}

impl ReductionTrace {
    pub fn offset_sum(&self) -> i64 {
        self.steps.iter().map(|s| s.offset).sum()
    }

    /// Line-delimited serialization, one JSON record per step.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("trace steps serialize"));
            out.push('\n');
        }
        out
    }

    pub fn steps_from_jsonl(text: &str) -> Result<Vec<TraceStep>, serde_json::Error> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect()
    }
}

/// Kernelization knobs. Tables are supplied separately, one per boundary
/// size.
#[derive(Debug, Clone)]
pub struct KernelizeConfig {
    /// Largest protrusion boundary the rule is applied to.
    pub boundary_budget: usize,
    /// Width bound a candidate's certificate must satisfy.
    pub width_budget: i64,
    /// Largest instance solved exactly when computing the modulator.
    pub modulator_exact_cap: usize,
    /// When set, the final kernel is checked to still exclude this pattern
    /// as a topological minor.
    pub verify_excluded_pattern: Option<Graph>,
}

impl Default for KernelizeConfig {
    fn default() -> Self {
        KernelizeConfig {
            boundary_budget: 2,
            width_budget: 2,
            modulator_exact_cap: crate::solvers::EXACT_SOLVE_CAP,
            verify_excluded_pattern: None,
        }
    }
}

/// Exact optimum with witness for either problem, capped at `cap` vertices.
pub fn exact_solve(
    problem: ProblemId,
    g: &Graph,
    cap: usize,
) -> Result<(u64, VertexSet), SolveError> {
    match problem {
        ProblemId::Fvs => min_fvs(g, cap),
        ProblemId::Vc => min_vc(g, cap),
    }
}

/// A treewidth modulator: the problem's solution set, exact up to
/// `exact_cap` vertices and 2-approximate beyond.
pub fn find_modulator(instance: &Instance, exact_cap: usize) -> VertexSet {
    let g = &instance.graph;
    match instance.problem.id {
        ProblemId::Fvs => {
            if g.n() <= exact_cap && g.n() <= 64 {
                min_fvs(g, exact_cap).expect("within cap").1
            } else {
                fvs_two_approx(g)
            }
        }
        ProblemId::Vc => {
            if g.n() <= exact_cap && g.n() <= 64 {
                min_vc(g, exact_cap).expect("within cap").1
            } else {
                vc_two_approx(g)
            }
        }
    }
}

/// Protrusion candidates from two strategies over the rooted forest
/// decomposition of `G − X`: whole components, and rooted subtrees of
/// each component's decomposition. Every candidate carries a validated
/// width certificate; candidates are ordered largest-restricted-part
/// first, ties by boundary size, then by vertex set.
pub fn find_protrusions(
    g: &Graph,
    x: &VertexSet,
    boundary_budget: usize,
    width_budget: i64,
    t: i64,
) -> Result<Vec<Protrusion>, KernelizerError> {
    let forest = decomposition::rooted_forest_decomposition(g, x, t)?;
    let mut seen: BTreeMap<Vec<usize>, Protrusion> = BTreeMap::new();
    let mut consider = |w: VertexSet, certificate: TreeDecomposition| {
        if certificate.width() > width_budget {
            return;
        }
        let boundary = g.boundary(&w).expect("w is in range");
        if boundary.len() > boundary_budget {
            return;
        }
        let key: Vec<usize> = w.iter().copied().collect();
        seen.entry(key).or_insert(Protrusion {
            w,
            boundary,
            certificate,
        });
    };

    for tree in &forest.trees {
        // Component strategy: the whole component with its decomposition.
        consider(tree.component.clone(), tree.decomposition.clone());

        // Subtree strategy: every proper rooted subtree.
        let td = &tree.decomposition;
        let parents = td.parent_map();
        for node in 0..td.num_nodes() {
            if td.root == Some(node) {
                continue; // the root subtree is the component itself
            }
            let nodes = td.subtree_nodes(node, &parents);
            let w = td.bag_union(&nodes);
            let ordered: Vec<usize> = nodes.iter().copied().collect();
            let index_of = |n: usize| ordered.binary_search(&n).expect("node in subtree");
            let bags: Vec<VertexSet> = ordered.iter().map(|&n| td.bags[n].clone()).collect();
            let edges: Vec<(usize, usize)> = td
                .edges
                .iter()
                .filter(|(a, b)| nodes.contains(a) && nodes.contains(b))
                .map(|&(a, b)| (index_of(a), index_of(b)))
                .collect();
            let mut certificate = TreeDecomposition::new(bags, edges);
            certificate.root = Some(index_of(node));
            consider(w, certificate);
        }
    }

    let mut out: Vec<Protrusion> = seen.into_values().collect();
    out.sort_by(|a, b| {
        b.restricted_size()
            .cmp(&a.restricted_size())
            .then(a.boundary.len().cmp(&b.boundary.len()))
            .then(a.w.cmp(&b.w))
    });
    Ok(out)
}

/// Why a reduction step did not fire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    /// The signature class has no representative within the table's cap.
    UnknownClass,
    /// Replacement would not strictly shrink the graph.
    NoShrink,
}

#[derive(Debug, Clone)]
pub enum ApplyOutcome {
    Applied {
        instance: Instance,
        step: TraceStep,
        /// The offset drove k below zero and the instance was replaced by
        /// the canonical trivial NO.
        trivialized: bool,
    },
    Skipped(SkipReason),
}

/// The boundaried graph `G[W]` with boundary labels 1..t assigned in
/// ascending vertex order, plus the matching labeling map.
fn protrusion_boundaried(
    g: &Graph,
    p: &Protrusion,
) -> (BoundariedGraph, BTreeMap<usize, usize>) {
    let (sub, back) = g.induced(&p.w).expect("protrusion in range");
    let mut boundary_local = Vec::new();
    let mut labeling = BTreeMap::new();
    for (label_minus_one, &v) in p.boundary.iter().enumerate() {
        let local = back.binary_search(&v).expect("boundary inside w");
        boundary_local.push(local);
        labeling.insert(v, label_minus_one + 1);
    }
    let bg = BoundariedGraph::new(sub, boundary_local).expect("boundary labels are injective");
    (bg, labeling)
}

/// Applies the reduction rule to one protrusion: replace `G[W]` by its
/// class representative and decrease k by the class offset. Skips when the
/// class is unknown or replacement would not shrink the graph. A parameter
/// driven below zero yields the canonical trivial NO instance.
pub fn apply_reduction(
    instance: &Instance,
    p: &Protrusion,
    table: &FiiTable,
    step_index: usize,
) -> Result<ApplyOutcome, KernelizerError> {
    if p.boundary.len() != table.t {
        return Err(KernelizerError::TableMismatch {
            boundary: p.boundary.len(),
            table: table.t,
        });
    }
    let (bg, labeling) = protrusion_boundaried(&instance.graph, p);
    let (class_index, offset) = match lookup_representative(table, &bg)? {
        Lookup::Found {
            class_index,
            offset,
        } => (class_index, offset),
        Lookup::UnknownClass => return Ok(ApplyOutcome::Skipped(SkipReason::UnknownClass)),
    };
    let class = &table.classes[class_index];
    let rep = &class.representative;
    if p.restricted_size() <= rep.graph().n() {
        return Ok(ApplyOutcome::Skipped(SkipReason::NoShrink));
    }

    let replaced = replace_protrusion(&instance.graph, &p.w, rep, &labeling)?;
    let new_k = instance.k - offset;
    let trivialized = new_k < 0;
    let (graph, k) = if trivialized {
        (trivial_no_graph(instance.problem.id), 0)
    } else {
        (replaced.graph, new_k)
    };
    let step = TraceStep {
        step: step_index,
        w_size: p.w.len(),
        boundary_size: p.boundary.len(),
        class_key: class.key.0.clone(),
        offset,
        vertices_after: graph.n(),
    };
    Ok(ApplyOutcome::Applied {
        instance: Instance {
            graph,
            k,
            problem: instance.problem,
        },
        step,
        trivialized,
    })
}

/// A fixed small instance with optimum exceeding k = 0: a triangle for
/// feedback vertex set, a single edge for vertex cover.
pub fn trivial_no_graph(problem: ProblemId) -> Graph {
    match problem {
        ProblemId::Fvs => Graph::complete(3),
        ProblemId::Vc => Graph::complete(2),
    }
}

/// Result of a full kernelization run.
#[derive(Debug, Clone)]
pub struct KernelizeResult {
    pub instance: Instance,
    pub trace: ReductionTrace,
    /// Set when the config requested a post-run excluded-pattern check.
    pub excluded_pattern_ok: Option<bool>,
}

/// Applies the reduction rule to exhaustion, recomputing the modulator and
/// the candidate list after each change. Terminates because every applied
/// step strictly decreases the vertex count.
pub fn kernelize(
    instance: Instance,
    tables: &BTreeMap<usize, FiiTable>,
    config: &KernelizeConfig,
) -> Result<KernelizeResult, KernelizerError> {
    let k_initial = instance.k;
    let mut current = instance;
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut trivialized_no = false;

    'outer: loop {
        let x = find_modulator(&current, config.modulator_exact_cap);
        let candidates = find_protrusions(
            &current.graph,
            &x,
            config.boundary_budget,
            config.width_budget,
            current.problem.residual_treewidth,
        )?;
        for candidate in &candidates {
            let Some(table) = tables.get(&candidate.boundary.len()) else {
                continue;
            };
            match apply_reduction(&current, candidate, table, steps.len())? {
                ApplyOutcome::Applied {
                    instance,
                    step,
                    trivialized,
                } => {
                    steps.push(step);
                    current = instance;
                    if trivialized {
                        trivialized_no = true;
                        break 'outer;
                    }
                    continue 'outer;
                }
                ApplyOutcome::Skipped(_) => continue,
            }
        }
        break;
    }

    let excluded_pattern_ok = match &config.verify_excluded_pattern {
        Some(pattern) => Some(!contains_topological_minor_capped(
            &current.graph,
            pattern,
            pattern.n(),
        )?),
        None => None,
    };
    let trace = ReductionTrace {
        steps,
        k_initial,
        k_final: current.k,
        trivialized_no,
    };
    Ok(KernelizeResult {
        instance: current,
        trace,
        excluded_pattern_ok,
    })
}
