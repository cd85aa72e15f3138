//! `tiling-lab`: generate graphs, decide and count clique factors, build
//! and verify good partitions, and run the factor pipeline.
//!
//! Data goes to standard output (or `--out`) as canonical JSON; diagnostics
//! go to standard error. Exit status: 0 on success, 1 on input errors, 2 when
//! a search ran out of budget, a result is not exact, or a stage failed.

mod config;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;
use tiling_lab::constructions::{generate, FamilySpec};
use tiling_lab::factor::TilingJson;
use tiling_lab::io::{parse_graph, write_edge_list, write_json, PartitionJson};
use tiling_lab::partition::{
    build_good_partition, has_gamma_independent_set, min_edges_subset, verify_good_partition, BuildStatus,
    PartitionParams,
};
use tiling_lab::pipeline::{run_pipeline, vertex_cover_sweep, PipelineConfig, PipelineError, Stage};
use tiling_lab::report::{canonical_string, envelope};
use tiling_lab::robustness::{
    count_factor_subsets, estimate_factor_probability, RobustnessError, RobustnessEstimate, SamplingConfig,
};
use tiling_lab::{has_kr_factor, Graph, LabeledPartition, Verdict};

use config::{FileConfig, ParamArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Undecided(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Undecided(_) => 2,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "tiling-lab", version, about = "Clique-factor laboratory")]
struct Cli {
    /// TOML settings file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Node limit for each exact search.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    /// Wall-clock limit in seconds for each exact search.
    #[arg(long, global = true)]
    timeout_secs: Option<u64>,
    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphOut {
    EdgeList,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph family, e.g. `balanced:r=3,n=3` or a JSON spec.
    Gen {
        spec: String,
        #[arg(long, value_enum, default_value = "edge-list")]
        format: GraphOut,
        /// Also write the family's partition (and parameters) as JSON.
        #[arg(long)]
        partition_out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decide whether the graph has a K_r-factor.
    CheckFactor {
        graph: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Count vertex subsets inducing a K_r-factor, exactly.
    CountSubsets {
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        /// Emit a CSV row instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Estimate P[G[p] has a K_r-factor] by sampling.
    EstimateProb {
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: bool,
    },
    /// Find a vertex set of the given size spanning the fewest edges.
    FindSparse {
        graph: PathBuf,
        #[arg(long)]
        size: usize,
        /// Also decide whether the set spans at most gamma·n_scale² edges.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        n_scale: Option<usize>,
    },
    /// Build a good partition.
    BuildPartition {
        graph: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated extraction thresholds, one per round.
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<f64>>,
        /// Write the partition (and parameters) as JSON.
        #[arg(long)]
        partition_out: Option<PathBuf>,
    },
    /// Check the good-partition conditions and report witnesses.
    VerifyPartition {
        graph: PathBuf,
        partition: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Build a K_r-factor from a good partition.
    RunPipeline {
        graph: PathBuf,
        partition: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Let clique extensions fall back to non-good vertices.
        #[arg(long)]
        relaxed: bool,
        /// Write the stage trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Minimum vertex covers of the classes of random balanced partitions.
    VcSweep {
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        partitions: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Accept near-regular graphs.
        #[arg(long)]
        relaxed: bool,
    },
    /// Merge JSON outputs of other commands into one report.
    Report {
        inputs: Vec<PathBuf>,
        /// Emit CSV rows for the subset-count and estimate results.
        #[arg(long)]
        csv: bool,
    },
}

struct Output {
    text: String,
    /// Reason for exit status 2 while still emitting `text`.
    undecided: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, undecided: None }
    }

    fn flag(text: String, reason: Option<String>) -> Self {
        Self {
            text,
            undecided: reason,
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Accepts a bare partition, `{"partition": .., "params": ..}`, or the
/// output of `build-partition`.
fn read_partition(path: &Path) -> Result<(LabeledPartition, Option<PartitionParams>), CliError> {
    let v: Value =
        serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let holder = v.get("result").unwrap_or(&v);
    let (pj, params) = if holder.get("classes").is_some() {
        (holder.clone(), None)
    } else if let Some(p) = holder.get("partition") {
        (p.clone(), holder.get("params").cloned())
    } else {
        return Err(CliError::Input(format!("{}: no partition found", path.display())));
    };
    let pj: PartitionJson = serde_json::from_value(pj).map_err(input)?;
    let p = pj.to_partition().map_err(input)?;
    let params = match params {
        Some(Value::Null) | None => None,
        Some(x) => Some(serde_json::from_value(x).map_err(input)?),
    };
    Ok((p, params))
}

fn json_out(command: &str, v: &impl serde::Serialize) -> Result<String, CliError> {
    envelope(command, v).map_err(input)
}

fn partition_doc(p: &LabeledPartition, params: Option<&PartitionParams>) -> Value {
    json!({ "partition": PartitionJson::from_partition(p), "params": params })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn robustness_error(e: RobustnessError) -> CliError {
    match e {
        RobustnessError::Unknown(_) => CliError::Undecided(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn run(cli: &Cli, cfg: &FileConfig) -> Result<Output, CliError> {
    let budget = cfg.budget(cli.max_nodes, cli.timeout_secs)?;
    let seed_or = |s: Option<u64>| s.or(cfg.seed).unwrap_or(0);
    match &cli.command {
        Command::Gen {
            spec,
            format,
            partition_out,
            seed,
        } => {
            let mut spec = FamilySpec::parse(spec).map_err(input)?;
            if let Some(s) = seed.or(spec.seed).or(cfg.seed) {
                spec.seed = Some(s);
            }
            let gen = generate(&spec).map_err(input)?;
            if let Some(path) = partition_out {
                let p = gen
                    .partition
                    .as_ref()
                    .ok_or_else(|| CliError::Input(format!("family {} has no partition", spec.family.name())))?;
                let doc = partition_doc(p, gen.params.as_ref());
                write_file(path, &canonical_string(&doc).map_err(input)?)?;
            }
            Ok(Output::ok(match format {
                GraphOut::EdgeList => write_edge_list(&gen.graph, &gen.provenance),
                GraphOut::Json => write_json(&gen.graph),
            }))
        }
        Command::CheckFactor { graph, r } => {
            let g = read_graph(graph)?;
            let res = has_kr_factor(&g, *r, &budget).map_err(input)?;
            let body = json!({
                "r": r,
                "n_vertices": g.n(),
                "exists": res.exists,
                "factor": res.factor.as_ref().map(|t| TilingJson::new(*r, t)),
                "nodes_explored": res.nodes_explored,
                "timed_out": res.timed_out,
            });
            let undecided = (res.exists == Verdict::Unknown).then(|| "search budget exhausted".to_string());
            Ok(Output::flag(json_out("check-factor", &body)?, undecided))
        }
        Command::CountSubsets { graph, r, csv } => {
            let g = read_graph(graph)?;
            let est = count_factor_subsets(&g, *r, &budget).map_err(robustness_error)?;
            Ok(Output::ok(if *csv {
                csv_text(&[(graph_id(graph), est)])
            } else {
                json_out("count-subsets", &est)?
            }))
        }
        Command::EstimateProb {
            graph,
            r,
            p,
            trials,
            seed,
            csv,
        } => {
            let g = read_graph(graph)?;
            let mut sc = SamplingConfig::new(
                p.or(cfg.sampling.p).unwrap_or(0.5),
                trials.or(cfg.sampling.trials).unwrap_or(10_000),
                seed_or(*seed),
            );
            sc.budget_per_trial = budget;
            let est = estimate_factor_probability(&g, *r, &sc).map_err(robustness_error)?;
            let undecided = (est.unknown_trials > 0).then(|| format!("{} trials undecided", est.unknown_trials));
            let text = if *csv {
                csv_text(&[(graph_id(graph), est)])
            } else {
                json_out("estimate-prob", &est)?
            };
            Ok(Output::flag(text, undecided))
        }
        Command::FindSparse {
            graph,
            size,
            gamma,
            n_scale,
        } => {
            let g = read_graph(graph)?;
            let (body, undecided) = match gamma {
                Some(gm) => {
                    let ns = n_scale.unwrap_or(*size);
                    let ans = has_gamma_independent_set(&g, *size, *gm, ns, &budget).map_err(input)?;
                    let und = (ans.verdict == Verdict::Unknown).then(|| "sparse-set search was heuristic".to_string());
                    (
                        json!({
                            "size": size,
                            "gamma": gm,
                            "n_scale": ns,
                            "verdict": ans.verdict,
                            "limit": ans.limit,
                            "set": ans.min_edges.set.to_vec(),
                            "edges_inside": ans.min_edges.edges_inside,
                            "is_exact": ans.min_edges.is_exact,
                        }),
                        und,
                    )
                }
                None => {
                    let res = min_edges_subset(&g, *size, &budget).map_err(input)?;
                    let und = (!res.is_exact).then(|| "result is heuristic, not proven minimal".to_string());
                    (
                        json!({
                            "size": size,
                            "set": res.set.to_vec(),
                            "edges_inside": res.edges_inside,
                            "is_exact": res.is_exact,
                        }),
                        und,
                    )
                }
            };
            Ok(Output::flag(json_out("find-sparse", &body)?, undecided))
        }
        Command::BuildPartition {
            graph,
            params,
            gammas,
            partition_out,
        } => {
            let g = read_graph(graph)?;
            let prm = params.resolve(g.n(), cfg, None)?;
            let out = build_good_partition(&g, &prm, gammas.as_deref(), &budget).map_err(input)?;
            if let (Some(path), Some(p)) = (partition_out, out.partition.as_ref()) {
                write_file(path, &canonical_string(&partition_doc(p, Some(&prm))).map_err(input)?)?;
            }
            let body = json!({
                "outcome": out,
                "partition": out.partition.as_ref().map(PartitionJson::from_partition),
                "params": prm,
            });
            let undecided = match out.status {
                BuildStatus::Built => None,
                BuildStatus::Failed => Some(format!(
                    "construction failed in phase {}: {}",
                    out.phase.as_deref().unwrap_or("?"),
                    out.reason.as_deref().unwrap_or("")
                )),
                BuildStatus::Unknown => Some("construction ran out of budget".into()),
            };
            Ok(Output::flag(json_out("build-partition", &body)?, undecided))
        }
        Command::VerifyPartition {
            graph,
            partition,
            params,
        } => {
            let g = read_graph(graph)?;
            let (p, stored) = read_partition(partition)?;
            let prm = params.resolve(g.n(), cfg, stored.as_ref())?;
            let rep = verify_good_partition(&g, &p, &prm, &budget).map_err(input)?;
            let body = json!({ "good": rep.is_good(), "inconclusive": rep.is_inconclusive(), "report": rep });
            let undecided = rep
                .is_inconclusive()
                .then(|| "a condition could not be decided".to_string());
            Ok(Output::flag(json_out("verify-partition", &body)?, undecided))
        }
        Command::RunPipeline {
            graph,
            partition,
            params,
            relaxed,
            trace,
        } => {
            let g = read_graph(graph)?;
            let (p, stored) = read_partition(partition)?;
            let prm = params.resolve(g.n(), cfg, stored.as_ref())?;
            let pc = PipelineConfig {
                budget,
                relaxed: *relaxed || cfg.relaxed.unwrap_or(false),
            };
            let st = match run_pipeline(&g, &p, &prm, pc) {
                Ok(st) => st,
                Err(PipelineError::Inconclusive(_)) => {
                    return Err(CliError::Undecided("good-partition check was inconclusive".into()))
                }
                Err(e) => return Err(input(e)),
            };
            if let Some(path) = trace {
                write_file(path, &st.trace_jsonl())?;
            }
            let body = json!({
                "stage": st.stage,
                "r": st.r,
                "s": st.s,
                "n": st.n,
                "factor": st.factor.as_ref().map(|t| TilingJson::new(st.r, t)),
                "failure": st.failure,
                "ledger": st.ledger,
                "tilings": st.tilings.sizes(),
                "notes": st.notes,
            });
            let undecided = st
                .failure
                .as_ref()
                .filter(|_| st.stage != Stage::Done)
                .map(|f| format!("stage {} failed: {}", f.stage, f.reason));
            Ok(Output::flag(json_out("run-pipeline", &body)?, undecided))
        }
        Command::VcSweep {
            graph,
            r,
            n,
            partitions,
            seed,
            relaxed,
        } => {
            let g = read_graph(graph)?;
            if *r == 0 || g.n() % r != 0 {
                return Err(CliError::Input(format!("|V| = {} is not a multiple of r = {r}", g.n())));
            }
            let n = n.unwrap_or(g.n() / r);
            let rep = vertex_cover_sweep(&g, *r, n, *partitions, seed_or(*seed), *relaxed, &budget).map_err(input)?;
            let undecided = (!rep.exact).then(|| "a vertex cover search ran out of budget".to_string());
            Ok(Output::flag(json_out("vc-sweep", &rep)?, undecided))
        }
        Command::Report { inputs, csv } => {
            let mut docs = Vec::new();
            for path in inputs {
                let v: Value = serde_json::from_str(&read_text(path)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                docs.push((path, v));
            }
            if *csv {
                let mut rows = Vec::new();
                for (path, v) in &docs {
                    if matches!(v["command"].as_str(), Some("count-subsets" | "estimate-prob")) {
                        let est: RobustnessEstimate = serde_json::from_value(v["result"].clone()).map_err(input)?;
                        rows.push((graph_id(path), est));
                    }
                }
                return Ok(Output::ok(csv_text(&rows)));
            }
            let entries: Vec<Value> = docs
                .into_iter()
                .map(|(path, v)| json!({ "file": path.display().to_string(), "document": v }))
                .collect();
            Ok(Output::ok(json_out("report", &json!({ "inputs": entries }))?))
        }
    }
}

fn graph_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn csv_text(rows: &[(String, RobustnessEstimate)]) -> String {
    let mut s = String::from(RobustnessEstimate::CSV_HEADER);
    s.push('\n');
    for (id, est) in rows {
        s.push_str(&est.csv_row(id));
        s.push('\n');
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let cfg = match cli.config.as_deref().map(FileConfig::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code());
        }
    };
    let threads = cli.threads.or(cfg.threads);
    if let Some(t) = threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli, &cfg) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text).and_then(|_| {
                    let meta = json!({
                        "elapsed_ms": started.elapsed().as_millis() as u64,
                        "threads": rayon::current_num_threads(),
                    });
                    std::fs::write(sidecar(path), format!("{meta}\n"))
                }),
                None => std::io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            match out.undecided {
                Some(reason) => {
                    eprintln!("undecided: {reason}");
                    ExitCode::from(2)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// `out.json` -> `out.json.meta.json`: run metadata kept out of the
/// canonical output.
fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}
