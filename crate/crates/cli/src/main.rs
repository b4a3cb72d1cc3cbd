//! `hedgetrim`: generate instances, build representative tables, kernelize
//! via protrusion replacement, audit the counting bounds, and solve small
//! instances exactly.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use hedgetrim_cli::commands::{
    read_graph, run_audit, run_build_all_tables, run_build_table, run_gen, run_kernelize,
    run_solve, InstanceMeta,
};
use hedgetrim_cli::config::{Config, Overrides};
use hedgetrim_cli::generate::{Family, GeneratorSpec};
use hedgetrim_core::fii::ProblemId;
use hedgetrim_core::graph::VertexSet;

#[derive(Parser)]
#[command(
    name = "hedgetrim",
    about = "Protrusion-replacement kernels and counting-bound audits for sparse graph problems",
    version
)]
struct Cli {
    /// TOML configuration file; flags override its settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    problem: Option<ProblemId>,
    /// Excluded-clique order used by audits.
    #[arg(long, global = true)]
    r: Option<usize>,
    /// Largest protrusion boundary the reduction rule is applied to.
    #[arg(long, global = true)]
    boundary_budget: Option<usize>,
    /// Enumeration cap for table building.
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Largest instance the exact solvers run on.
    #[arg(long, global = true)]
    exact_cap: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Table cache directory (also via HEDGETRIM_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphInput {
    /// Graph file (.gr/.col/.dimacs for DIMACS, anything else edge list).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Instance metadata written by `gen`; supplies the graph and defaults.
    #[arg(long)]
    meta: Option<PathBuf>,
}

impl GraphInput {
    fn load(&self) -> anyhow::Result<(hedgetrim_core::graph::Graph, Option<InstanceMeta>)> {
        match (&self.graph, &self.meta) {
            (Some(path), meta) => {
                let meta = meta.as_ref().map(|m| InstanceMeta::load(m)).transpose()?;
                Ok((read_graph(path)?, meta))
            }
            (None, Some(meta_path)) => {
                let meta = InstanceMeta::load(meta_path)?;
                let dir = meta_path.parent().unwrap_or(std::path::Path::new("."));
                let graph = read_graph(&dir.join(&meta.graph_file))?;
                Ok((graph, Some(meta)))
            }
            (None, None) => bail!("pass --graph or --meta"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance and its metadata sidecar.
    Gen {
        #[arg(long, default_value = "planted-modulator")]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        degree_cap: usize,
        #[arg(long, default_value_t = 2)]
        attachment_cap: usize,
        /// Output base path; writes <out>.gr and <out>.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build (or reuse) the representative tables for the configured
    /// boundary budget.
    BuildTable {
        /// Build a single boundary size instead of 0..=boundary_budget.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Apply the reduction rule to exhaustion and write the kernel, the
    /// trace, and a summary.
    Kernelize {
        #[command(flatten)]
        input: GraphInput,
        /// Parameter; defaults to the metadata's k.
        #[arg(long)]
        k: Option<i64>,
        /// Check that the kernel still excludes a clique subdivision of
        /// this order.
        #[arg(long)]
        verify_excluded_clique: Option<usize>,
        /// Output base path; defaults to <out_dir>/<graph stem>.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure every counting bound and write the report.
    Audit {
        #[command(flatten)]
        input: GraphInput,
        /// Audit against the planted modulator from the metadata instead
        /// of a computed one.
        #[arg(long)]
        use_planted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the instance exactly and write the verified witness.
    Solve {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn out_base(config: &Config, explicit: Option<PathBuf>, input: &GraphInput) -> PathBuf {
    if let Some(path) = explicit {
        return path;
    }
    let stem = input
        .graph
        .as_ref()
        .or(input.meta.as_ref())
        .and_then(|p| p.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".to_string());
    config.out_dir.join(stem)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let overrides = Overrides {
        problem: cli.problem,
        r: cli.r,
        boundary_budget: cli.boundary_budget,
        n_max: cli.n_max,
        exact_cap: cli.exact_cap,
        seed: cli.seed,
        cache_dir: cli.cache_dir.clone(),
        out_dir: cli.out_dir.clone(),
    };
    let config = overrides.apply(Config::load(cli.config.as_deref())?);
    config.validate()?;

    match cli.command {
        Command::Gen {
            family,
            n,
            k,
            degree_cap,
            attachment_cap,
            out,
        } => {
            let spec = GeneratorSpec {
                family,
                problem: config.problem,
                n,
                k,
                degree_cap,
                attachment_cap,
                seed: config.seed,
            };
            let output = run_gen(&spec, &out)?;
            println!(
                "wrote {} ({} vertices, {} edges) and {}",
                output.graph_path.display(),
                output.instance_n,
                output.instance_m,
                output.meta_path.display()
            );
        }
        Command::BuildTable { t } => {
            let outputs = match t {
                Some(t) => vec![run_build_table(&config, t)?],
                None => run_build_all_tables(&config)?,
            };
            for out in outputs {
                println!(
                    "{} t={} classes={} varpi_hat={}{}",
                    out.path.display(),
                    out.t,
                    out.classes,
                    out.varpi_hat,
                    if out.cache_hit { " (cache hit)" } else { "" }
                );
            }
        }
        Command::Kernelize {
            input,
            k,
            verify_excluded_clique,
            out,
        } => {
            let (graph, meta) = input.load()?;
            let k = k
                .or(meta.as_ref().map(|m| m.k as i64))
                .context("pass --k or a metadata file that records it")?;
            let base = out_base(&config, out, &input);
            let output = run_kernelize(&config, graph, k, &base, verify_excluded_clique)?;
            println!(
                "kernel {} vertices (k {} -> {}), {} steps; wrote {}, {}, {}",
                output.result.instance.graph.n(),
                output.result.trace.k_initial,
                output.result.trace.k_final,
                output.result.trace.steps.len(),
                output.kernel_path.display(),
                output.trace_path.display(),
                output.summary_path.display()
            );
        }
        Command::Audit {
            input,
            use_planted,
            out,
        } => {
            let (graph, meta) = input.load()?;
            let modulator: Option<VertexSet> = if use_planted {
                let planted = meta
                    .as_ref()
                    .and_then(|m| m.planted_modulator.as_ref())
                    .context("--use-planted needs metadata with a planted modulator")?;
                Some(planted.iter().copied().collect())
            } else {
                None
            };
            let base = out_base(&config, out, &input);
            let output = run_audit(&config, &graph, modulator, &base)?;
            let failed: Vec<&str> = output
                .report
                .entries
                .iter()
                .filter(|e| !e.holds)
                .map(|e| e.check_id.as_str())
                .collect();
            println!(
                "audit |X|={} checks={} all_hold={}; wrote {}, {}",
                output.modulator.len(),
                output.report.entries.len(),
                output.report.all_hold(),
                output.csv_path.display(),
                output.json_path.display()
            );
            if !failed.is_empty() {
                bail!("audit checks failed: {}", failed.join(", "));
            }
        }
        Command::Solve { input, out } => {
            let (graph, _) = input.load()?;
            let base = out_base(&config, out, &input);
            let output = run_solve(&config, &graph, &base)?;
            println!(
                "optimum {} (witness verified: {}); wrote {}",
                output.record.optimum,
                output.record.witness_verified,
                output.path.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            let payload = serde_json::json!({ "error": format!("{error:#}") });
            eprintln!("{payload}");
            ExitCode::FAILURE
        }
    }
}
