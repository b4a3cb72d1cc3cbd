//! Seeded instance generators. The planted-modulator family builds a
//! low-treewidth part (a forest for feedback vertex set, an independent
//! set for vertex cover) plus k modulator vertices, so the planted set is
//! a valid treewidth modulator by construction. The bounded-degree family
//! targets graphs of maximum degree d; such graphs contain no subdivision
//! of a clique on d + 2 vertices, since its branch vertices would need
//! degree d + 1.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use hedgetrim_core::fii::{ProblemId, ProblemSpec};
use hedgetrim_core::graph::{Graph, VertexSet};
use hedgetrim_core::kernelizer::Instance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PlantedModulator,
    BoundedDegreeRandom,
    PendantRich,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::PlantedModulator => "planted-modulator",
            Family::BoundedDegreeRandom => "bounded-degree-random",
            Family::PendantRich => "pendant-rich",
        };
        f.write_str(name)
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "planted-modulator" | "planted" => Ok(Family::PlantedModulator),
            "bounded-degree-random" | "bounded-degree" => Ok(Family::BoundedDegreeRandom),
            "pendant-rich" => Ok(Family::PendantRich),
            other => Err(format!("unknown family: {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub problem: ProblemId,
    pub n: usize,
    pub k: usize,
    pub degree_cap: usize,
    pub attachment_cap: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub instance: Instance,
    pub planted_modulator: Option<VertexSet>,
}

/// Deterministic per (spec, seed).
pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedInstance, GenerateError> {
    if spec.n == 0 {
        return Err(GenerateError::Infeasible("n must be positive".into()));
    }
    if spec.k > spec.n {
        return Err(GenerateError::Infeasible(format!(
            "k = {} exceeds n = {}",
            spec.k, spec.n
        )));
    }
    if spec.degree_cap == 0 {
        return Err(GenerateError::Infeasible("degree cap must be positive".into()));
    }
    if spec.family == Family::PlantedModulator && spec.k > 0 {
        if spec.attachment_cap == 0 {
            return Err(GenerateError::Infeasible(
                "attachment cap must be positive when planting a modulator".into(),
            ));
        }
        if spec.attachment_cap > spec.degree_cap {
            return Err(GenerateError::Infeasible(format!(
                "attachment cap {} exceeds degree cap {}",
                spec.attachment_cap, spec.degree_cap
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::PlantedModulator => planted(spec, &mut rng),
        Family::BoundedDegreeRandom => Ok(bounded_degree(spec, &mut rng)),
        Family::PendantRich => Ok(pendant_rich(spec, &mut rng)),
    }
}

struct EdgeBuilder {
    n: usize,
    cap: usize,
    degree: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl EdgeBuilder {
    fn new(n: usize, cap: usize) -> Self {
        EdgeBuilder {
            n,
            cap,
            degree: vec![0; n],
            edges: Vec::new(),
        }
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.contains(&e)
    }

    fn can_add(&self, u: usize, v: usize) -> bool {
        u != v && self.degree[u] < self.cap && self.degree[v] < self.cap && !self.has_edge(u, v)
    }

    fn add(&mut self, u: usize, v: usize) {
        self.edges.push((u.min(v), u.max(v)));
        self.degree[u] += 1;
        self.degree[v] += 1;
    }

    fn graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges).expect("builder keeps edges simple")
    }
}

/// Modulator vertices 0..k plus a degree-capped forest (feedback vertex
/// set) or independent set (vertex cover) on the rest; each modulator
/// vertex is attached by 1..=attachment_cap edges.
fn planted(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<GeneratedInstance, GenerateError> {
    let mut builder = EdgeBuilder::new(spec.n, spec.degree_cap);
    let k = spec.k;

    if spec.problem == ProblemId::Fvs {
        // random forest over the non-modulator part
        for v in (k + 1)..spec.n {
            let candidates: Vec<usize> = (k..v).filter(|&u| builder.degree[u] < spec.degree_cap)
                .collect();
            if !candidates.is_empty() && rng.gen_bool(0.75) {
                let target = candidates[rng.gen_range(0..candidates.len())];
                builder.add(v, target);
            }
        }
    }

    for x in 0..k {
        let lo = spec.attachment_cap.min(2);
        let wanted = rng.gen_range(lo..=spec.attachment_cap);
        let mut attached = 0;
        // For feedback vertex set, close a cycle through x where possible:
        // two attachments into the same tree of the forest part.
        if spec.problem == ProblemId::Fvs && wanted >= 2 {
            let forest: VertexSet = (k..spec.n).collect();
            let modulator: VertexSet = (0..k).collect();
            let trees: Vec<Vec<usize>> = builder
                .graph()
                .components_avoiding(&modulator)
                .into_iter()
                .filter(|c| c.is_subset(&forest))
                .map(|c| {
                    c.into_iter()
                        .filter(|&u| builder.can_add(x, u))
                        .collect::<Vec<usize>>()
                })
                .filter(|eligible| eligible.len() >= 2)
                .collect();
            if !trees.is_empty() {
                let tree = &trees[rng.gen_range(0..trees.len())];
                let first = rng.gen_range(0..tree.len());
                let mut second = rng.gen_range(0..tree.len() - 1);
                if second >= first {
                    second += 1;
                }
                builder.add(x, tree[first]);
                builder.add(x, tree[second]);
                attached = 2;
            }
        }
        while attached < wanted {
            let candidates: Vec<usize> = (0..spec.n)
                .filter(|&u| u != x && builder.can_add(x, u))
                .collect();
            if candidates.is_empty() {
                if attached == 0 {
                    return Err(GenerateError::Infeasible(format!(
                        "no attachment target left for modulator vertex {x}"
                    )));
                }
                break;
            }
            builder.add(x, candidates[rng.gen_range(0..candidates.len())]);
            attached += 1;
        }
    }

    Ok(GeneratedInstance {
        instance: Instance {
            graph: builder.graph(),
            k: spec.k as i64,
            problem: ProblemSpec::from_id(spec.problem),
        },
        planted_modulator: Some((0..k).collect()),
    })
}

/// Random graph of maximum degree at most `degree_cap`.
fn bounded_degree(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> GeneratedInstance {
    let mut builder = EdgeBuilder::new(spec.n, spec.degree_cap);
    let target = spec.n * spec.degree_cap / 3;
    let attempts = 20 * spec.n.max(1) * spec.degree_cap;
    for _ in 0..attempts {
        if builder.edges.len() >= target {
            break;
        }
        let u = rng.gen_range(0..spec.n);
        let v = rng.gen_range(0..spec.n);
        if builder.can_add(u, v) {
            builder.add(u, v);
        }
    }
    GeneratedInstance {
        instance: Instance {
            graph: builder.graph(),
            k: spec.k as i64,
            problem: ProblemSpec::from_id(spec.problem),
        },
        planted_modulator: None,
    }
}

/// A denser core on roughly a third of the vertices with pendant trees
/// hanging off it: rich in small-boundary protrusions.
fn pendant_rich(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> GeneratedInstance {
    let core = (spec.n / 3).max(3).min(spec.n);
    let mut builder = EdgeBuilder::new(spec.n, spec.degree_cap);
    let core_target = core * spec.degree_cap.min(3) / 2;
    let attempts = 20 * core * spec.degree_cap;
    for _ in 0..attempts {
        if builder.edges.len() >= core_target {
            break;
        }
        let u = rng.gen_range(0..core);
        let v = rng.gen_range(0..core);
        if builder.can_add(u, v) {
            builder.add(u, v);
        }
    }
    for v in core..spec.n {
        let candidates: Vec<usize> = (0..v)
            .filter(|&u| builder.degree[u] < spec.degree_cap)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let target = candidates[rng.gen_range(0..candidates.len())];
        builder.add(v, target);
    }
    GeneratedInstance {
        instance: Instance {
            graph: builder.graph(),
            k: spec.k as i64,
            problem: ProblemSpec::from_id(spec.problem),
        },
        planted_modulator: None,
    }
}
