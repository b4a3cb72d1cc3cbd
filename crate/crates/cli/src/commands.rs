//! Command drivers: each one reads the configuration, runs a module
//! pipeline, and writes its artifacts (table files, kernel plus trace,
//! report CSV/JSON, solution, instance files). Every artifact carries a
//! version header and every run is deterministic given (config, seed).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use hedgetrim_core::audit::{audit_report, AuditParams, AuditReport, VarpiTable};
use hedgetrim_core::boundaried::EnumerationCaps;
use hedgetrim_core::fii::{
    build_table, table_from_string, table_to_string, FiiTable, ProblemId, ProblemSpec,
};
use hedgetrim_core::graph::{Graph, VertexSet};
use hedgetrim_core::kernelizer::{
    exact_solve, find_modulator, kernelize, Instance, KernelizeConfig, KernelizeResult,
};

use crate::config::Config;
use crate::generate::{generate, Family, GeneratorSpec};
use crate::io::{write_dimacs, GraphFormat};

pub const INSTANCE_FORMAT_VERSION: &str = "hedgetrim-instance v1";
pub const KERNEL_SUMMARY_VERSION: &str = "hedgetrim-kernel v1";
pub const SOLUTION_FORMAT_VERSION: &str = "hedgetrim-solution v1";

/// Sidecar metadata written next to a generated graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub format: String,
    pub family: Family,
    pub problem: ProblemId,
    pub n: usize,
    pub k: usize,
    pub degree_cap: usize,
    pub attachment_cap: usize,
    pub seed: u64,
    pub planted_modulator: Option<Vec<usize>>,
    pub graph_file: String,
}

impl InstanceMeta {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading metadata {}", path.display()))?;
        let meta: InstanceMeta = serde_json::from_str(&text)
            .with_context(|| format!("parsing metadata {}", path.display()))?;
        if meta.format != INSTANCE_FORMAT_VERSION {
            bail!(
                "metadata {} has format {:?}, expected {:?}",
                path.display(),
                meta.format,
                INSTANCE_FORMAT_VERSION
            );
        }
        Ok(meta)
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating directory {}", parent.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

pub struct GenOutput {
    pub graph_path: PathBuf,
    pub meta_path: PathBuf,
    pub instance_n: usize,
    pub instance_m: usize,
}

/// Generates an instance and writes `<base>.gr` plus `<base>.json`.
pub fn run_gen(spec: &GeneratorSpec, out_base: &Path) -> anyhow::Result<GenOutput> {
    let generated = generate(spec)?;
    let graph_path = out_base.with_extension("gr");
    let meta_path = out_base.with_extension("json");
    write_file(&graph_path, &write_dimacs(&generated.instance.graph))?;
    let meta = InstanceMeta {
        format: INSTANCE_FORMAT_VERSION.to_string(),
        family: spec.family,
        problem: spec.problem,
        n: spec.n,
        k: spec.k,
        degree_cap: spec.degree_cap,
        attachment_cap: spec.attachment_cap,
        seed: spec.seed,
        planted_modulator: generated
            .planted_modulator
            .as_ref()
            .map(|s| s.iter().copied().collect()),
        graph_file: graph_path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    write_file(&meta_path, &format!("{}\n", serde_json::to_string_pretty(&meta)?))?;
    Ok(GenOutput {
        graph_path,
        meta_path,
        instance_n: generated.instance.graph.n(),
        instance_m: generated.instance.graph.m(),
    })
}

// ---------------------------------------------------------------------------
// build-table
// ---------------------------------------------------------------------------

pub fn table_file_name(problem: ProblemId, t: usize, n_max: usize) -> String {
    format!("{problem}-t{t}-n{n_max}.v1.fii")
}

fn enumeration_caps(config: &Config) -> EnumerationCaps {
    EnumerationCaps {
        max_t: config.boundary_budget.max(2),
        max_n: config.n_max.max(6),
    }
}

pub struct TableBuildOutput {
    pub path: PathBuf,
    pub t: usize,
    pub classes: usize,
    pub varpi_hat: u64,
    pub cache_hit: bool,
}

/// Builds (or reuses from cache) the table for one boundary size. Cached
/// files are content-addressed by problem, t, n_max, and format version.
pub fn run_build_table(config: &Config, t: usize) -> anyhow::Result<TableBuildOutput> {
    let path = config.cache_dir().join(table_file_name(config.problem, t, config.n_max));
    if path.exists() {
        let table = load_table_file(&path)?;
        if table.problem == config.problem && table.t == t && table.n_max == config.n_max {
            return Ok(TableBuildOutput {
                path,
                t,
                classes: table.classes.len(),
                varpi_hat: table.varpi_hat,
                cache_hit: true,
            });
        }
        bail!(
            "cache file {} does not match problem={} t={} n_max={}",
            path.display(),
            config.problem,
            t,
            config.n_max
        );
    }
    let spec = ProblemSpec::from_id(config.problem);
    let table = build_table(&spec, t, config.n_max, enumeration_caps(config))?;
    write_file(&path, &table_to_string(&table))?;
    Ok(TableBuildOutput {
        path,
        t,
        classes: table.classes.len(),
        varpi_hat: table.varpi_hat,
        cache_hit: false,
    })
}

/// Builds every table needed by the configured boundary budget.
pub fn run_build_all_tables(config: &Config) -> anyhow::Result<Vec<TableBuildOutput>> {
    (0..=config.boundary_budget)
        .map(|t| run_build_table(config, t))
        .collect()
}

fn load_table_file(path: &Path) -> anyhow::Result<FiiTable> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading table {}", path.display()))?;
    Ok(table_from_string(&text)?)
}

/// Loads the cached tables for boundary sizes 0..=boundary_budget; a
/// missing file is an error naming the build-table invocation.
pub fn load_tables(config: &Config) -> anyhow::Result<BTreeMap<usize, FiiTable>> {
    let mut tables = BTreeMap::new();
    for t in 0..=config.boundary_budget {
        let path = config.cache_dir().join(table_file_name(config.problem, t, config.n_max));
        if !path.exists() {
            bail!(
                "table {} is missing; run `hedgetrim build-table --problem {} --n-max {}` first",
                path.display(),
                config.problem,
                config.n_max
            );
        }
        tables.insert(t, load_table_file(&path)?);
    }
    Ok(tables)
}

// ---------------------------------------------------------------------------
// kernelize
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct KernelSummary {
    pub format: String,
    pub problem: ProblemId,
    pub k_initial: i64,
    pub k_final: i64,
    pub vertices_initial: usize,
    pub vertices_final: usize,
    pub edges_final: usize,
    pub steps: usize,
    pub trivialized_no: bool,
    pub excluded_pattern_ok: Option<bool>,
}

pub struct KernelizeOutput {
    pub result: KernelizeResult,
    pub kernel_path: PathBuf,
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Kernelizes and writes `<base>.kernel.gr`, `<base>.trace.jsonl`, and
/// `<base>.kernel.json`.
pub fn run_kernelize(
    config: &Config,
    graph: Graph,
    k: i64,
    out_base: &Path,
    verify_excluded_clique: Option<usize>,
) -> anyhow::Result<KernelizeOutput> {
    let tables = load_tables(config)?;
    let problem = ProblemSpec::from_id(config.problem);
    let instance = Instance {
        graph,
        k,
        problem,
    };
    let vertices_initial = instance.graph.n();
    let kernelize_config = KernelizeConfig {
        boundary_budget: config.boundary_budget,
        width_budget: problem.residual_treewidth.max(2),
        modulator_exact_cap: config.exact_cap,
        verify_excluded_pattern: verify_excluded_clique.map(Graph::complete),
    };
    let result = kernelize(instance, &tables, &kernelize_config)?;

    let kernel_path = with_suffix(out_base, "kernel.gr");
    let trace_path = with_suffix(out_base, "trace.jsonl");
    let summary_path = with_suffix(out_base, "kernel.json");
    write_file(&kernel_path, &write_dimacs(&result.instance.graph))?;
    write_file(&trace_path, &result.trace.to_jsonl())?;
    let summary = KernelSummary {
        format: KERNEL_SUMMARY_VERSION.to_string(),
        problem: config.problem,
        k_initial: result.trace.k_initial,
        k_final: result.trace.k_final,
        vertices_initial,
        vertices_final: result.instance.graph.n(),
        edges_final: result.instance.graph.m(),
        steps: result.trace.steps.len(),
        trivialized_no: result.trace.trivialized_no,
        excluded_pattern_ok: result.excluded_pattern_ok,
    };
    write_file(
        &summary_path,
        &format!("{}\n", serde_json::to_string_pretty(&summary)?),
    )?;
    Ok(KernelizeOutput {
        result,
        kernel_path,
        trace_path,
        summary_path,
    })
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push('.');
    name.push_str(suffix);
    base.with_file_name(name)
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

pub struct AuditOutput {
    pub report: AuditReport,
    pub modulator: VertexSet,
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
}

/// Audits the graph against every counting bound using either the supplied
/// modulator or a freshly computed one; writes the report as CSV and JSON
/// side by side.
pub fn run_audit(
    config: &Config,
    graph: &Graph,
    modulator: Option<VertexSet>,
    out_base: &Path,
) -> anyhow::Result<AuditOutput> {
    let tables = load_tables(config)?;
    let problem = ProblemSpec::from_id(config.problem);
    let modulator = match modulator {
        Some(x) => x,
        None => {
            let instance = Instance {
                graph: graph.clone(),
                k: 0,
                problem,
            };
            find_modulator(&instance, config.exact_cap)
        }
    };
    let mut params = AuditParams::new(
        config.r,
        problem.residual_treewidth,
        VarpiTable::from_tables(&tables),
    );
    params.log_base = config.log_base;
    let report = audit_report(graph, &modulator, &params)?;
    let csv_path = with_suffix(out_base, "audit.csv");
    let json_path = with_suffix(out_base, "audit.json");
    write_file(&csv_path, &report.to_csv())?;
    write_file(&json_path, &format!("{}\n", report.to_json()))?;
    Ok(AuditOutput {
        report,
        modulator,
        csv_path,
        json_path,
    })
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SolutionRecord {
    pub format: String,
    pub problem: ProblemId,
    pub optimum: u64,
    pub witness: Vec<usize>,
    pub witness_verified: bool,
}

pub struct SolveOutput {
    pub record: SolutionRecord,
    pub path: PathBuf,
}

/// Solves the instance exactly and writes `<base>.solution.json` with a
/// verified witness.
pub fn run_solve(config: &Config, graph: &Graph, out_base: &Path) -> anyhow::Result<SolveOutput> {
    let (optimum, witness) = exact_solve(config.problem, graph, config.exact_cap)?;
    let verified = match config.problem {
        ProblemId::Fvs => {
            let keep: VertexSet = graph.vertices().filter(|v| !witness.contains(v)).collect();
            graph.induced(&keep)?.0.is_acyclic()
        }
        ProblemId::Vc => graph
            .edges()
            .iter()
            .all(|(u, v)| witness.contains(u) || witness.contains(v)),
    };
    let record = SolutionRecord {
        format: SOLUTION_FORMAT_VERSION.to_string(),
        problem: config.problem,
        optimum,
        witness: witness.iter().copied().collect(),
        witness_verified: verified,
    };
    let path = with_suffix(out_base, "solution.json");
    write_file(&path, &format!("{}\n", serde_json::to_string_pretty(&record)?))?;
    Ok(SolveOutput { record, path })
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

/// Reads a graph file, guessing the format from the extension.
pub fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading graph {}", path.display()))?;
    let format = GraphFormat::from_path(path);
    let (graph, warnings) = crate::io::parse_graph(&text, format)
        .with_context(|| format!("parsing graph {}", path.display()))?;
    for warning in warnings {
        eprintln!("{}: line {}: {}", path.display(), warning.line, warning.message);
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hedgetrim_core::fii::ProblemId;

    fn temp_config(dir: &Path) -> Config {
        Config {
            out_dir: dir.to_path_buf(),
            cache_dir: Some(dir.join("tables")),
            n_max: 4,
            ..Config::default()
        }
    }

    #[test]
    fn tables_are_cached_byte_identically() {
        let dir = tempfile::tempdir().unwrap();
        let config = temp_config(dir.path());
        let first = run_build_all_tables(&config).unwrap();
        assert!(first.iter().all(|t| !t.cache_hit));
        let bytes: Vec<Vec<u8>> = first
            .iter()
            .map(|t| std::fs::read(&t.path).unwrap())
            .collect();
        let second = run_build_all_tables(&config).unwrap();
        assert!(second.iter().all(|t| t.cache_hit));
        for (out, expected) in second.iter().zip(&bytes) {
            assert_eq!(&std::fs::read(&out.path).unwrap(), expected);
        }
    }

    #[test]
    fn missing_tables_name_the_build_invocation() {
        let dir = tempfile::tempdir().unwrap();
        let config = temp_config(dir.path());
        let err = load_tables(&config).unwrap_err().to_string();
        assert!(err.contains("build-table"), "{err}");
    }

    #[test]
    fn gen_kernelize_solve_pipeline_produces_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let config = temp_config(dir.path());
        run_build_all_tables(&config).unwrap();

        let spec = GeneratorSpec {
            family: Family::PlantedModulator,
            problem: ProblemId::Fvs,
            n: 18,
            k: 2,
            degree_cap: 4,
            attachment_cap: 2,
            seed: 11,
        };
        let gen_out = run_gen(&spec, &dir.path().join("inst")).unwrap();
        let meta = InstanceMeta::load(&gen_out.meta_path).unwrap();
        assert_eq!(meta.k, 2);

        let graph = read_graph(&gen_out.graph_path).unwrap();
        assert_eq!(graph.n(), 18);
        let kernel_out =
            run_kernelize(&config, graph.clone(), 2, &dir.path().join("run"), None).unwrap();
        assert!(kernel_out.kernel_path.exists());
        assert!(kernel_out.trace_path.exists());
        assert!(kernel_out.summary_path.exists());
        assert!(kernel_out.result.instance.graph.n() <= graph.n());

        let solve_out = run_solve(&config, &graph, &dir.path().join("run")).unwrap();
        assert!(solve_out.record.witness_verified);

        let audit_out = run_audit(&config, &graph, None, &dir.path().join("run")).unwrap();
        assert!(audit_out.csv_path.exists());
        assert!(audit_out.json_path.exists());
        assert_eq!(
            audit_out.report.entries.len(),
            hedgetrim_core::audit::ENABLED_CHECKS
        );
    }

    #[test]
    fn suffix_paths_preserve_the_base_name() {
        assert_eq!(
            with_suffix(Path::new("runs/batch/inst7"), "trace.jsonl"),
            PathBuf::from("runs/batch/inst7.trace.jsonl")
        );
    }
}
