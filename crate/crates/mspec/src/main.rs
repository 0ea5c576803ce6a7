//! Command-line front-end: every solver, the verifier, the oracle, and the
//! barrier pipeline behind one binary with machine-readable JSON reports.
//!
//! Reports go to stdout, diagnostics to stderr. Exit codes: 0 on success,
//! 2 on an infeasible instance, 1 on usage or parse errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use mspec::barrier::{min_shrinkage_run, render_svg, DiskConfig, ShrinkMode};
use mspec::bottleneck::solve_bottleneck;
use mspec::domain::{solve_discrete_with, solve_domain_run, DomainSolution, PowerDomain};
use mspec::fptas::{
    solve_costed_fptas_run, solve_fast_fptas_run, solve_fptas_run, solve_integer_run,
    solve_uniform_run, SolveOptions, SolverStats, DEFAULT_COPY_CAP,
};
use mspec::instance::{is_feasible_cut, CutVerdict};
use mspec::oracle::{oracle_opt_with_cap, DEFAULT_ORACLE_CAP};
use mspec::{Error, Instance, PowerAssignment, SolveResult};

#[derive(Parser)]
#[command(
    name = "mspec",
    version,
    about = "Minimum shared-power edge cut solvers and the disk-barrier shrinkage pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Input file (instance JSON, or disk configuration for `barrier`)
    #[arg(long)]
    input: PathBuf,
    /// Pretty-print the JSON report and write a summary line to stderr
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExactMethod {
    Integer,
    Uniform,
}

#[derive(Subcommand)]
enum Command {
    /// Solve to within (1 + eps) of the optimum, or exactly with --exact
    Solve {
        #[command(flatten)]
        common: Common,
        /// Approximation parameter
        #[arg(long, required_unless_present = "exact", conflicts_with = "exact")]
        eps: Option<f64>,
        /// Use the discrete-2-approximation pipeline (fewer vertex copies)
        #[arg(long, conflicts_with_all = ["exact", "costs"])]
        fast: bool,
        /// Vertex-cost file `{"u": 10.0}`; minimizes the cost-weighted power sum
        #[arg(long, conflicts_with = "exact")]
        costs: Option<PathBuf>,
        /// Exact solver for integral or uniform weights
        #[arg(long, value_enum)]
        exact: Option<ExactMethod>,
        /// Cap on the total number of vertex copies
        #[arg(long, default_value_t = DEFAULT_COPY_CAP)]
        copy_cap: u64,
    },
    /// Minimum uniform power whose removals disconnect s and t
    Bottleneck {
        #[command(flatten)]
        common: Common,
    },
    /// Exact solvers for integral or uniform edge weights
    Exact {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: ExactMethod,
        #[arg(long, default_value_t = DEFAULT_COPY_CAP)]
        copy_cap: u64,
    },
    /// Exact solve with per-vertex finite power menus
    Domain {
        #[command(flatten)]
        common: Common,
        /// Domain file `{"u": [0, 1, 2.5]}`
        #[arg(long)]
        domains: PathBuf,
        #[arg(long, default_value_t = DEFAULT_COPY_CAP)]
        copy_cap: u64,
    },
    /// Exact solve with powers restricted to incident edge weights
    Discrete {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_COPY_CAP)]
        copy_cap: u64,
    },
    /// Minimum total disk shrinkage for rectangular barrier coverage
    Barrier {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: f64,
        /// Render the shrunken configuration to this SVG file
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        fast: bool,
        #[arg(long, default_value_t = DEFAULT_COPY_CAP)]
        copy_cap: u64,
    },
    /// Check whether a power assignment disconnects s and t
    Verify {
        #[command(flatten)]
        common: Common,
        /// Power assignment file `{"powers": {"u": 3.0}}`
        #[arg(long)]
        powers: PathBuf,
    },
    /// Brute-force optimum with a partition certificate (desk scale)
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Cap on the number of intermediate vertices
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: usize,
    },
}

struct Report {
    subcommand: &'static str,
    digest: String,
    parameters: Map<String, Value>,
    started: Instant,
}

impl Report {
    fn new(subcommand: &'static str, input: &[u8]) -> Self {
        let hex: String = Sha256::digest(input)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        Report {
            subcommand,
            digest: format!("sha256:{hex}"),
            parameters: Map::new(),
            started: Instant::now(),
        }
    }

    fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    fn finish(self, result: Value, stats: Option<SolverStats>) -> Value {
        json!({
            "subcommand": self.subcommand,
            "input_digest": self.digest,
            "parameters": Value::Object(self.parameters),
            "result": result,
            "stats": stats.map(|s| serde_json::to_value(s).expect("stats serialize")),
            "duration_seconds": self.started.elapsed().as_secs_f64(),
        })
    }
}

fn solve_result_value(result: &SolveResult) -> Value {
    serde_json::to_value(result).expect("result serialize")
}

/// Re-checks a solver output against the feasibility checker before the
/// report is emitted.
fn verified(inst: &Instance, result: SolveResult) -> Result<SolveResult, Error> {
    if !is_feasible_cut(inst, &result.assignment)?.is_feasible() {
        return Err(Error::NotASeparator);
    }
    Ok(result)
}

fn emit(report: Value, pretty: bool, summary: String) {
    if pretty {
        eprintln!("{summary}");
        println!("{}", serde_json::to_string_pretty(&report).expect("report"));
    } else {
        println!("{}", serde_json::to_string(&report).expect("report"));
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Error> {
    Ok(std::fs::read(path)?)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve {
            common,
            eps,
            fast,
            costs,
            exact,
            copy_cap,
        } => {
            let raw = read_input(&common.input)?;
            let inst = Instance::parse_json(&String::from_utf8_lossy(&raw))?;
            let opts = SolveOptions { copy_cap };
            let mut report = Report::new("solve", &raw);
            report.param("copy_cap", copy_cap);

            let (result, stats, summary) = match (exact, costs) {
                (Some(method), _) => {
                    let (result, stats) = run_exact(&inst, method, &opts, &mut report)?;
                    (result, stats, "exact solve".to_string())
                }
                (None, Some(cost_path)) => {
                    let eps = eps.expect("clap enforces eps without --exact");
                    let cost_map: BTreeMap<String, f64> =
                        serde_json::from_slice(&std::fs::read(&cost_path)?)
                            .map_err(|e| Error::Malformed(e.to_string()))?;
                    let run = solve_costed_fptas_run(&inst, &cost_map, eps, &opts)?;
                    report.param("mode", "costed");
                    report.param("eps", eps);
                    report.param("cost_bottleneck", run.cost_bottleneck);
                    report.param("alpha", run.alpha);
                    report.param("copies", run.copies);
                    (
                        verified(&inst, run.result)?,
                        Some(run.stats),
                        format!("costed solve within (1+{eps})"),
                    )
                }
                (None, None) => {
                    let eps = eps.expect("clap enforces eps without --exact");
                    if fast {
                        let run = solve_fast_fptas_run(&inst, eps, &opts)?;
                        report.param("mode", "fast");
                        report.param("eps", eps);
                        report.param("z", run.z);
                        report.param("alpha", run.alpha);
                        report.param("copies", run.copies);
                        (
                            verified(&inst, run.result)?,
                            Some(run.stats),
                            format!("fast solve within (1+{eps})"),
                        )
                    } else {
                        let run = solve_fptas_run(&inst, eps, &opts)?;
                        report.param("mode", "fptas");
                        report.param("eps", eps);
                        report.param("p_star", run.p_star);
                        report.param("alpha", run.alpha);
                        report.param("copies", run.copies);
                        (
                            verified(&inst, run.result)?,
                            Some(run.stats),
                            format!("solve within (1+{eps})"),
                        )
                    }
                }
            };
            let objective = result.objective;
            emit(
                report.finish(solve_result_value(&result), stats),
                common.pretty,
                format!("{summary}: objective {objective}"),
            );
        }
        Command::Bottleneck { common } => {
            let raw = read_input(&common.input)?;
            let inst = Instance::parse_json(&String::from_utf8_lossy(&raw))?;
            let report = Report::new("bottleneck", &raw);
            let out = solve_bottleneck(&inst)?;
            let summary = format!("bottleneck power {}", out.p_star);
            emit(
                report.finish(serde_json::to_value(&out).expect("serialize"), None),
                common.pretty,
                summary,
            );
        }
        Command::Exact {
            common,
            method,
            copy_cap,
        } => {
            let raw = read_input(&common.input)?;
            let inst = Instance::parse_json(&String::from_utf8_lossy(&raw))?;
            let opts = SolveOptions { copy_cap };
            let mut report = Report::new("exact", &raw);
            report.param("copy_cap", copy_cap);
            let (result, stats) = run_exact(&inst, method, &opts, &mut report)?;
            let objective = result.objective;
            emit(
                report.finish(solve_result_value(&result), stats),
                common.pretty,
                format!("exact objective {objective}"),
            );
        }
        Command::Domain {
            common,
            domains,
            copy_cap,
        } => {
            let raw = read_input(&common.input)?;
            let inst = Instance::parse_json(&String::from_utf8_lossy(&raw))?;
            let domain =
                PowerDomain::parse_json(&String::from_utf8_lossy(&std::fs::read(&domains)?))?;
            let opts = SolveOptions { copy_cap };
            let mut report = Report::new("domain", &raw);
            report.param("copy_cap", copy_cap);
            let run = solve_domain_run(&inst, &domain, &opts)?;
            match run.solution {
                DomainSolution::Feasible(result) => {
                    let result = verified(&inst, result)?;
                    let objective = result.objective;
                    let mut value = solve_result_value(&result);
                    value["feasible"] = Value::Bool(true);
                    emit(
                        report.finish(value, Some(run.stats)),
                        common.pretty,
                        format!("domain objective {objective}"),
                    );
                }
                DomainSolution::Infeasible => {
                    emit(
                        report.finish(json!({"feasible": false}), Some(run.stats)),
                        common.pretty,
                        "no domain assignment disconnects s and t".to_string(),
                    );
                    return Err(Error::InfeasibleInstance);
                }
            }
        }
        Command::Discrete { common, copy_cap } => {
            let raw = read_input(&common.input)?;
            let inst = Instance::parse_json(&String::from_utf8_lossy(&raw))?;
            let opts = SolveOptions { copy_cap };
            let mut report = Report::new("discrete", &raw);
            report.param("copy_cap", copy_cap);
            let run = solve_discrete_with(&inst, &opts)?;
            let result = verified(&inst, run.result)?;
            let objective = result.objective;
            let mut value = solve_result_value(&result);
            value["feasible"] = Value::Bool(true);
            emit(
                report.finish(value, Some(run.stats)),
                common.pretty,
                format!("discrete objective {objective}"),
            );
        }
        Command::Barrier {
            common,
            eps,
            svg,
            fast,
            copy_cap,
        } => {
            let raw = read_input(&common.input)?;
            let cfg = DiskConfig::parse_json(&String::from_utf8_lossy(&raw))?;
            let opts = SolveOptions { copy_cap };
            let mode = if fast {
                ShrinkMode::Fast
            } else {
                ShrinkMode::Fptas
            };
            let mut report = Report::new("barrier", &raw);
            report.param("eps", eps);
            report.param("mode", if fast { "fast" } else { "fptas" });
            report.param("copy_cap", copy_cap);
            let run = min_shrinkage_run(&cfg, eps, mode, &opts)?;
            for warning in &run.result.warnings {
                eprintln!("warning: {warning}");
            }
            if let Some(svg_path) = svg {
                std::fs::write(&svg_path, render_svg(&cfg, &run.result.shrinks)?)?;
            }
            let objective = run.result.objective;
            emit(
                report.finish(
                    serde_json::to_value(&run.result).expect("serialize"),
                    Some(run.stats),
                ),
                common.pretty,
                format!("total shrinkage {objective}"),
            );
        }
        Command::Verify { common, powers } => {
            let raw = read_input(&common.input)?;
            let inst = Instance::parse_json(&String::from_utf8_lossy(&raw))?;
            let assignment =
                PowerAssignment::parse_json(&String::from_utf8_lossy(&std::fs::read(&powers)?))?;
            let report = Report::new("verify", &raw);
            let (value, summary) = match is_feasible_cut(&inst, &assignment)? {
                CutVerdict::Disconnected { removed_edges } => (
                    json!({
                        "feasible": true,
                        "removed_edges": removed_edges
                            .iter()
                            .map(|&i| inst.record(&inst.edges()[i]))
                            .collect::<Vec<_>>(),
                    }),
                    "assignment disconnects s and t".to_string(),
                ),
                CutVerdict::Connected { path } => (
                    json!({
                        "feasible": false,
                        "witness_path": path
                            .iter()
                            .map(|&n| inst.node_name(n).to_string())
                            .collect::<Vec<_>>(),
                    }),
                    "assignment leaves s and t connected".to_string(),
                ),
            };
            emit(report.finish(value, None), common.pretty, summary);
        }
        Command::Oracle { common, cap } => {
            let raw = read_input(&common.input)?;
            let inst = Instance::parse_json(&String::from_utf8_lossy(&raw))?;
            let mut report = Report::new("oracle", &raw);
            report.param("cap", cap);
            let (opt, witness, certificate) = oracle_opt_with_cap(&inst, cap)?;
            let value = json!({
                "opt": opt,
                "witness": serde_json::from_str::<Value>(&witness.to_json()).expect("json"),
                "certificate": serde_json::to_value(&certificate).expect("serialize"),
            });
            emit(
                report.finish(value, None),
                common.pretty,
                format!("optimum {opt}"),
            );
        }
    }
    Ok(())
}

fn run_exact(
    inst: &Instance,
    method: ExactMethod,
    opts: &SolveOptions,
    report: &mut Report,
) -> Result<(SolveResult, Option<SolverStats>), Error> {
    match method {
        ExactMethod::Integer => {
            let run = solve_integer_run(inst, opts)?;
            report.param("mode", "integer");
            report.param("max_weight", run.max_weight);
            Ok((verified(inst, run.result)?, Some(run.stats)))
        }
        ExactMethod::Uniform => {
            let run = solve_uniform_run(inst, opts)?;
            report.param("mode", "uniform");
            report.param("weight", run.weight);
            Ok((verified(inst, run.result)?, Some(run.stats)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::InfeasibleInstance) => {
            eprintln!("error: instance infeasible");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
