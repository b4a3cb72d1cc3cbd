//! Finite-integer-index machinery for concrete problems: signatures of
//! boundaried graphs under feedback vertex set and vertex cover,
//! equivalence-up-to-constant testing, representative tables built by
//! exhaustive enumeration, and the derived statistic ϖ̂(t) (the largest
//! representative size).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundaried::{
    canonical_form, enumerate_boundaried, BoundariedError, BoundariedGraph, CanonicalCode,
    ConnectivityRule, EnumerationCaps,
};
use crate::graph::{Graph, VertexSet};
use crate::solvers::{min_fvs_constrained, min_vc_constrained, SolveError};

/// Boundary-size cap for feedback vertex set signatures (the state space
/// grows with the Bell numbers).
pub const FVS_SIGNATURE_T_CAP: usize = 4;

pub const TABLE_FORMAT_VERSION: &str = "hedgetrim-fii-table v1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiiError {
    #[error("signatures disagree on problem or boundary size")]
    MismatchedSignatures,
    #[error("table is for t = {table} but the graph has boundary size {graph}")]
    MismatchedT { table: usize, graph: usize },
    #[error("boundary size {t} exceeds the signature cap {cap}")]
    TCapExceeded { t: usize, cap: usize },
    #[error("truncation is only implemented for vertex cover")]
    UnsupportedTruncation,
    #[error(transparent)]
    Enumeration(#[from] BoundariedError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("table parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// The two implemented problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemId {
    Fvs,
    Vc,
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemId::Fvs => f.write_str("fvs"),
            ProblemId::Vc => f.write_str("vc"),
        }
    }
}

impl std::str::FromStr for ProblemId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fvs" => Ok(ProblemId::Fvs),
            "vc" => Ok(ProblemId::Vc),
            other => Err(format!("unknown problem id: {other}")),
        }
    }
}

/// A problem together with its treewidth-bounding constants: every
/// yes-instance has a modulator X with |X| <= c·k and tw(G − X) <= t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub modulator_factor: u32,
    pub residual_treewidth: i64,
}

impl ProblemSpec {
    /// Feedback vertex set: deleting the solution leaves a forest.
    pub fn fvs() -> Self {
        ProblemSpec {
            id: ProblemId::Fvs,
            modulator_factor: 1,
            residual_treewidth: 1,
        }
    }

    /// Vertex cover: deleting the solution leaves an edgeless graph.
    pub fn vc() -> Self {
        ProblemSpec {
            id: ProblemId::Vc,
            modulator_factor: 1,
            residual_treewidth: 0,
        }
    }

    pub fn from_id(id: ProblemId) -> Self {
        match id {
            ProblemId::Fvs => ProblemSpec::fvs(),
            ProblemId::Vc => ProblemSpec::vc(),
        }
    }
}

/// One state of a signature.
///
/// Vertex cover: the subset S of boundary labels put into the cover.
/// Feedback vertex set: the subset S of deleted boundary labels plus a
/// partition of the remaining labels (blocks = externally connected), as a
/// restricted-growth string over the remaining labels in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateKey {
    VcIn { mask: u64 },
    Fvs { deleted: u64, blocks: Vec<u8> },
}

/// All states of a problem at boundary size `t`, in canonical order:
/// masks ascending, partitions in lexicographic restricted-growth order.
pub fn states(problem: ProblemId, t: usize) -> Vec<StateKey> {
    match problem {
        ProblemId::Vc => (0..1u64 << t).map(|mask| StateKey::VcIn { mask }).collect(),
        ProblemId::Fvs => {
            let mut out = Vec::new();
            for deleted in 0..1u64 << t {
                let remaining = t - deleted.count_ones() as usize;
                for blocks in restricted_growth_strings(remaining) {
                    out.push(StateKey::Fvs { deleted, blocks });
                }
            }
            out
        }
    }
}

/// All restricted-growth strings of the given length, lexicographically.
fn restricted_growth_strings(len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = vec![0u8; len];
    fn rec(current: &mut Vec<u8>, idx: usize, max_used: u8, out: &mut Vec<Vec<u8>>) {
        if idx == current.len() {
            out.push(current.clone());
            return;
        }
        for b in 0..=max_used.saturating_add(1) {
            current[idx] = b;
            rec(current, idx + 1, max_used.max(b), out);
        }
    }
    if len == 0 {
        out.push(Vec::new());
    } else {
        for b in 0..1u8 {
            current[0] = b;
            rec(&mut current, 1, 0, &mut out);
        }
    }
    out
}

/// A problem signature: one optimal value (or ∞) per state, in the
/// canonical state order of [`states`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub problem: ProblemId,
    pub t: usize,
    pub values: Vec<Option<u64>>,
}

impl Signature {
    /// Subtracts the minimum finite entry; returns the normalized key and
    /// the subtracted normalizer (0 for the all-∞ signature).
    pub fn normalize(&self) -> (SignatureKey, u64) {
        let normalizer = self.values.iter().flatten().copied().min().unwrap_or(0);
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|v| match v {
                Some(x) => (x - normalizer).to_string(),
                None => "inf".to_string(),
            })
            .collect();
        (SignatureKey(parts.join(",")), normalizer)
    }
}

/// Normalized signature rendered as a stable string key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignatureKey(pub String);

impl fmt::Display for SignatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Vertex cover signature: for each boundary subset S, the minimum size of
/// a cover X with X ∩ B = S (∞ when an edge lies inside B ∖ S).
pub fn signature_vc(bg: &BoundariedGraph) -> Result<Signature, FiiError> {
    let t = bg.t();
    let mut values = Vec::with_capacity(1 << t);
    for state in states(ProblemId::Vc, t) {
        let StateKey::VcIn { mask } = state else {
            unreachable!()
        };
        let forced_in: VertexSet = bg
            .boundary()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let forced_out: VertexSet = bg
            .boundary()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 0)
            .map(|(_, &v)| v)
            .collect();
        let entry = min_vc_constrained(bg.graph(), &forced_in, &forced_out)?;
        values.push(entry.map(|(size, _)| size));
    }
    Ok(Signature {
        problem: ProblemId::Vc,
        t,
        values,
    })
}

/// Feedback vertex set signature: for each state (S, P), the minimum number
/// of internal deletions X_I such that the graph minus S ∪ X_I, with each
/// block of P identified to a single vertex, is a forest. Multi-edges
/// arising from identification count as cycles.
pub fn signature_fvs(bg: &BoundariedGraph) -> Result<Signature, FiiError> {
    let t = bg.t();
    if t > FVS_SIGNATURE_T_CAP {
        return Err(FiiError::TCapExceeded {
            t,
            cap: FVS_SIGNATURE_T_CAP,
        });
    }
    let mut values = Vec::new();
    for state in states(ProblemId::Fvs, t) {
        let StateKey::Fvs { deleted, blocks } = state else {
            unreachable!()
        };
        values.push(fvs_state_value(bg, deleted, &blocks)?);
    }
    Ok(Signature {
        problem: ProblemId::Fvs,
        t,
        values,
    })
}

fn fvs_state_value(
    bg: &BoundariedGraph,
    deleted: u64,
    blocks: &[u8],
) -> Result<Option<u64>, FiiError> {
    let internals: Vec<usize> = bg.internal_vertices().into_iter().collect();
    let num_blocks = blocks.iter().map(|&b| b as usize + 1).max().unwrap_or(0);

    // Identified vertex of each original vertex: internals keep their own
    // slot, surviving boundary vertices collapse onto their block.
    let mut image = vec![None; bg.graph().n()];
    for (i, &v) in internals.iter().enumerate() {
        image[v] = Some(i);
    }
    let mut remaining_pos = 0;
    for (label_idx, &v) in bg.boundary().iter().enumerate() {
        if deleted >> label_idx & 1 == 1 {
            continue; // deleted via S
        }
        image[v] = Some(internals.len() + blocks[remaining_pos] as usize);
        remaining_pos += 1;
    }

    let block_base = internals.len();
    let mut multiplicity: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut forced: VertexSet = VertexSet::new();
    for (u, v) in bg.graph().edges() {
        let (Some(a), Some(b)) = (image[u], image[v]) else {
            continue; // incident to a deleted boundary vertex
        };
        if a == b {
            // A loop on an identified block is an undeletable cycle.
            return Ok(None);
        }
        let key = (a.min(b), a.max(b));
        let count = multiplicity.entry(key).or_insert(0);
        *count += 1;
        if *count >= 2 {
            // A multi-edge is a 2-cycle: break it by deleting an internal
            // endpoint, or give up when both endpoints are blocks.
            if a >= block_base && b >= block_base {
                return Ok(None);
            }
            forced.insert(if a < block_base { a } else { b });
        }
    }

    // Build the simple residual graph without the forced internals.
    let total = internals.len() + num_blocks;
    let alive: Vec<usize> = (0..total).filter(|v| !forced.contains(v)).collect();
    let position: BTreeMap<usize, usize> = alive.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for &(a, b) in multiplicity.keys() {
        if let (Some(&pa), Some(&pb)) = (position.get(&a), position.get(&b)) {
            edges.push((pa, pb));
        }
    }
    let residual = Graph::from_edges(alive.len(), &edges).expect("identified ids are dense");
    let forbidden: VertexSet = alive
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= block_base)
        .map(|(i, _)| i)
        .collect();
    let solved = min_fvs_constrained(&residual, &forbidden)?;
    Ok(solved.map(|(size, _)| size + forced.len() as u64))
}

/// Tests whether two signatures are equivalent up to a constant: identical
/// ∞-patterns and a constant difference `c = s1 − s2` on finite entries.
/// Replacing a graph of signature `s1` by one of signature `s2` shifts the
/// parameter by `c`.
pub fn equivalent(s1: &Signature, s2: &Signature) -> Result<Option<i64>, FiiError> {
    if s1.problem != s2.problem || s1.t != s2.t || s1.values.len() != s2.values.len() {
        return Err(FiiError::MismatchedSignatures);
    }
    let mut offset: Option<i64> = None;
    for (a, b) in s1.values.iter().zip(&s2.values) {
        match (a, b) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                let diff = *x as i64 - *y as i64;
                match offset {
                    None => offset = Some(diff),
                    Some(c) if c == diff => {}
                    Some(_) => return Ok(None),
                }
            }
            _ => return Ok(None),
        }
    }
    // Two all-∞ signatures are equivalent with offset 0.
    Ok(Some(offset.unwrap_or(0)))
}

/// Vertex cover truncation: caps each entry at
/// `min over S' ⊇ S of value(S') + |S' ∖ S|`, the cost of adding the extra
/// boundary vertices to the cover. Collapses glue-indistinguishable states;
/// idempotent.
pub fn truncate_signature(s: &Signature) -> Result<Signature, FiiError> {
    if s.problem != ProblemId::Vc {
        return Err(FiiError::UnsupportedTruncation);
    }
    let t = s.t;
    let mut values = Vec::with_capacity(s.values.len());
    for mask in 0..1u64 << t {
        let mut best: Option<u64> = None;
        for sup in 0..1u64 << t {
            if sup & mask != mask {
                continue;
            }
            if let Some(v) = s.values[sup as usize] {
                let candidate = v + (sup & !mask).count_ones() as u64;
                best = Some(best.map_or(candidate, |b: u64| b.min(candidate)));
            }
        }
        values.push(best);
    }
    Ok(Signature {
        problem: ProblemId::Vc,
        t,
        values,
    })
}

/// Signature of `bg` under `problem`, truncated where a truncation rule is
/// implemented (vertex cover).
pub fn table_signature(problem: ProblemId, bg: &BoundariedGraph) -> Result<Signature, FiiError> {
    match problem {
        ProblemId::Vc => truncate_signature(&signature_vc(bg)?),
        ProblemId::Fvs => signature_fvs(bg),
    }
}

/// One equivalence class of the representative table.
#[derive(Debug, Clone)]
pub struct FiiClass {
    pub key: SignatureKey,
    pub representative: BoundariedGraph,
    pub rep_code: CanonicalCode,
    pub normalizer: u64,
    pub member_count: u64,
}

/// Representative table: equivalence classes of t-boundaried graphs keyed
/// by normalized signature, each with its minimum representative.
#[derive(Debug, Clone)]
pub struct FiiTable {
    pub problem: ProblemId,
    pub t: usize,
    pub n_max: usize,
    pub classes: Vec<FiiClass>,
    /// ϖ̂(t): vertex count of the largest representative.
    pub varpi_hat: u64,
}

impl FiiTable {
    pub fn class_by_key(&self, key: &SignatureKey) -> Option<&FiiClass> {
        self.classes
            .binary_search_by(|c| c.key.cmp(key))
            .ok()
            .map(|i| &self.classes[i])
    }
}

/// Builds the representative table by enumerating boundaried graphs,
/// computing signatures, and keeping the smallest member per normalized
/// key (ties by edge count, then canonical code). Deterministic.
pub fn build_table(
    spec: &ProblemSpec,
    t: usize,
    n_max: usize,
    caps: EnumerationCaps,
) -> Result<FiiTable, FiiError> {
    let members = enumerate_boundaried(t, n_max, ConnectivityRule::BoundaryAnchored, caps)?;
    let mut classes: BTreeMap<SignatureKey, FiiClass> = BTreeMap::new();
    // Enumeration order is (n, m, code) ascending, so the first member of a
    // class is its representative under the tie-break rule.
    for bg in members {
        let sig = table_signature(spec.id, &bg)?;
        let (key, normalizer) = sig.normalize();
        match classes.get_mut(&key) {
            Some(class) => class.member_count += 1,
            None => {
                let rep_code = canonical_form(&bg);
                classes.insert(
                    key.clone(),
                    FiiClass {
                        key,
                        representative: bg,
                        rep_code,
                        normalizer,
                        member_count: 1,
                    },
                );
            }
        }
    }
    let classes: Vec<FiiClass> = classes.into_values().collect();
    let varpi_hat = classes
        .iter()
        .map(|c| c.representative.graph().n() as u64)
        .max()
        .unwrap_or(0);
    Ok(FiiTable {
        problem: spec.id,
        t,
        n_max,
        classes,
        varpi_hat,
    })
}

/// Outcome of looking a boundaried graph up in a table.
#[derive(Debug, Clone)]
pub enum Lookup {
    /// The class exists; `optimum(bg ⊕ Z) = optimum(rep ⊕ Z) + offset`
    /// for every completion Z.
    Found { class_index: usize, offset: i64 },
    /// The signature key has no member within the table's n_max.
    UnknownClass,
}

/// Finds the representative class of `bg` and the parameter offset
/// `c = normalizer(bg) − normalizer(rep)`.
pub fn lookup_representative(table: &FiiTable, bg: &BoundariedGraph) -> Result<Lookup, FiiError> {
    if bg.t() != table.t {
        return Err(FiiError::MismatchedT {
            table: table.t,
            graph: bg.t(),
        });
    }
    let sig = table_signature(table.problem, bg)?;
    let (key, normalizer) = sig.normalize();
    match table.classes.binary_search_by(|c| c.key.cmp(&key)) {
        Ok(class_index) => Ok(Lookup::Found {
            class_index,
            offset: normalizer as i64 - table.classes[class_index].normalizer as i64,
        }),
        Err(_) => Ok(Lookup::UnknownClass),
    }
}

/// ϖ̂ is monotone in n_max; the table has saturated when growing the cap by
/// one does not change the class count. A false result flags n_max as too
/// low for the class structure to have stabilized.
pub fn saturation_check(
    spec: &ProblemSpec,
    t: usize,
    n_max: usize,
    caps: EnumerationCaps,
) -> Result<bool, FiiError> {
    let here = build_table(spec, t, n_max, caps)?;
    let next = build_table(spec, t, n_max + 1, caps)?;
    Ok(here.classes.len() == next.classes.len())
}

// ---------------------------------------------------------------------------
// Table file format
// ---------------------------------------------------------------------------

/// Serializes a table: versioned header, then one block per class in key
/// order, with the representative as boundary labels plus edge list.
pub fn table_to_string(table: &FiiTable) -> String {
    let mut out = String::new();
    out.push_str(TABLE_FORMAT_VERSION);
    out.push('\n');
    out.push_str(&format!("problem {}\n", table.problem));
    out.push_str(&format!("t {}\n", table.t));
    out.push_str(&format!("n_max {}\n", table.n_max));
    out.push_str(&format!("varpi_hat {}\n", table.varpi_hat));
    out.push_str(&format!("classes {}\n", table.classes.len()));
    for class in &table.classes {
        let rep = &class.representative;
        let boundary = if rep.boundary().is_empty() {
            "-".to_string()
        } else {
            rep.boundary()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let edges = if rep.graph().m() == 0 {
            "-".to_string()
        } else {
            rep.graph()
                .edges()
                .iter()
                .map(|(u, v)| format!("{u}-{v}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!(
            "class {} n {} boundary {} edges {} normalizer {} members {}\n",
            class.key,
            rep.graph().n(),
            boundary,
            edges,
            class.normalizer,
            class.member_count
        ));
    }
    out
}

/// Parses a table file; rejects unknown format versions.
pub fn table_from_string(text: &str) -> Result<FiiTable, FiiError> {
    let mut lines = text.lines().enumerate();
    let mut next_line = |expect: &str| -> Result<(usize, String), FiiError> {
        lines
            .next()
            .map(|(i, l)| (i + 1, l.to_string()))
            .ok_or_else(|| FiiError::Parse {
                line: 0,
                message: format!("unexpected end of file, expected {expect}"),
            })
    };
    let (line, header) = next_line("version header")?;
    if header != TABLE_FORMAT_VERSION {
        return Err(FiiError::Parse {
            line,
            message: format!("unsupported format version: {header:?}"),
        });
    }
    let field = |line: usize, text: &str, name: &str| -> Result<String, FiiError> {
        text.strip_prefix(name)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(|s| s.to_string())
            .ok_or_else(|| FiiError::Parse {
                line,
                message: format!("expected `{name} ...`, got {text:?}"),
            })
    };
    let parse_num = |line: usize, s: &str| -> Result<u64, FiiError> {
        s.parse().map_err(|_| FiiError::Parse {
            line,
            message: format!("expected a number, got {s:?}"),
        })
    };

    let (l, text) = next_line("problem")?;
    let problem: ProblemId = field(l, &text, "problem")?
        .parse()
        .map_err(|message| FiiError::Parse { line: l, message })?;
    let (l, text) = next_line("t")?;
    let t = parse_num(l, &field(l, &text, "t")?)? as usize;
    let (l, text) = next_line("n_max")?;
    let n_max = parse_num(l, &field(l, &text, "n_max")?)? as usize;
    let (l, text) = next_line("varpi_hat")?;
    let varpi_hat = parse_num(l, &field(l, &text, "varpi_hat")?)?;
    let (l, text) = next_line("classes")?;
    let count = parse_num(l, &field(l, &text, "classes")?)? as usize;

    let mut classes = Vec::with_capacity(count);
    for _ in 0..count {
        let (l, text) = next_line("class record")?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 12
            || parts[0] != "class"
            || parts[2] != "n"
            || parts[4] != "boundary"
            || parts[6] != "edges"
            || parts[8] != "normalizer"
            || parts[10] != "members"
        {
            return Err(FiiError::Parse {
                line: l,
                message: format!("malformed class record: {text:?}"),
            });
        }
        let key = SignatureKey(parts[1].to_string());
        let n = parse_num(l, parts[3])? as usize;
        let boundary: Vec<usize> = if parts[5] == "-" {
            Vec::new()
        } else {
            parts[5]
                .split(',')
                .map(|s| parse_num(l, s).map(|x| x as usize))
                .collect::<Result<_, _>>()?
        };
        let edges: Vec<(usize, usize)> = if parts[7] == "-" {
            Vec::new()
        } else {
            parts[7]
                .split(',')
                .map(|pair| {
                    let (a, b) = pair.split_once('-').ok_or_else(|| FiiError::Parse {
                        line: l,
                        message: format!("malformed edge: {pair:?}"),
                    })?;
                    Ok((parse_num(l, a)? as usize, parse_num(l, b)? as usize))
                })
                .collect::<Result<_, FiiError>>()?
        };
        let normalizer = parse_num(l, parts[9])?;
        let member_count = parse_num(l, parts[11])?;
        let graph = Graph::from_edges(n, &edges).map_err(|e| FiiError::Parse {
            line: l,
            message: e.to_string(),
        })?;
        let representative = BoundariedGraph::new(graph, boundary).map_err(|e| FiiError::Parse {
            line: l,
            message: e.to_string(),
        })?;
        let rep_code = canonical_form(&representative);
        classes.push(FiiClass {
            key,
            representative,
            rep_code,
            normalizer,
            member_count,
        });
    }
    Ok(FiiTable {
        problem,
        t,
        n_max,
        classes,
        varpi_hat,
    })
}
