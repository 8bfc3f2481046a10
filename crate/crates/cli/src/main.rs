//! `cagvrp`: generate instances, run the solvers, verify plans and produce
//! benchmark tables.
//!
//! Exit codes: 0 on success, 1 when a solve fails, is infeasible or does not
//! verify, 2 for usage and input errors.

mod plotdata;
mod report;
mod run;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use cagvrp::{
    build_model, build_transformed_graph, generate_instance, Instance, InstanceClass, ModelOptions, SolutionFile,
};
use clap::{Args, Parser, Subcommand};
use log::info;

use report::{instance_files, read_report, run_bench, write_report, BenchConfig};
use run::{run_method, verify_plan, Method};

#[derive(Parser)]
#[command(name = "cagvrp", version, about = "Cooperative aerial-ground vehicle routing solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances.
    Gen(GenArgs),
    /// Solve one instance.
    Solve(SolveArgs),
    /// Check a solution file against its instance.
    Verify(VerifyArgs),
    /// Run several methods over a directory of instances.
    Bench(BenchArgs),
    /// Turn a benchmark report into plot-ready CSV files.
    ExportPlotdata(PlotArgs),
    /// Write the MILP in LP format and/or the transformed GTSP graph.
    Export(ExportArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_class)]
    class: InstanceClass,
    /// Number of targets, base included.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Seed of the first instance; later ones use consecutive seeds.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[arg(long = "in")]
    input: PathBuf,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    /// Solution file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the GTSP heuristic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    dir: PathBuf,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "bnc,gtsp")]
    methods: Vec<Method>,
    #[arg(long, default_value = "report.csv")]
    out: PathBuf,
    /// Per-solve limit in seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 uses every core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Histogram bin width in seconds.
    #[arg(long, default_value_t = 10.0)]
    bin_width: f64,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    lp: Option<PathBuf>,
    #[arg(long)]
    gtsp: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<cagvrp::Error> for Failure {
    fn from(e: cagvrp::Error) -> Self {
        use cagvrp::Error::*;
        match e {
            Io(_) | Parse { .. } | Validation { .. } | InvalidArgument(_) | SizeCap(_) => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn parse_class(s: &str) -> Result<InstanceClass, String> {
    s.parse().map_err(|e: cagvrp::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn limit(secs: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(secs).map_err(|_| Failure::Usage(format!("invalid time limit {secs}")))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    Instance::load(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    fs::create_dir_all(&a.out).map_err(|e| Failure::Usage(format!("{}: {e}", a.out.display())))?;
    for k in 0..a.count as u64 {
        let seed = a.seed + k;
        let inst = generate_instance(a.class, a.n, a.alpha, seed)?;
        let path = a.out.join(format!("{}_n{}_a{}_s{seed}.inst", a.class, a.n, a.alpha));
        inst.save(&path)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let inst = load_instance(&a.input)?;
    if !a.method.applies_to(&inst) {
        return Err(Failure::Usage(format!("{} cannot handle {} targets", a.method, inst.len())));
    }
    let out = run_method(&inst, a.method, limit(a.time_limit)?, a.seed)?;
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    println!(
        "method={} status={} cost={} bound={} nodes={} cuts={} seconds={:.3}",
        out.method,
        out.status,
        opt(out.cost.map(|c| format!("{c:.6}"))),
        opt(out.bound.map(|b| format!("{b:.6}"))),
        opt(out.nodes.map(|n| n.to_string())),
        opt(out.total_cuts().map(|n| n.to_string())),
        out.seconds
    );
    let (Some(sol), Some(cost)) = (out.solution, out.cost) else {
        return Err(Failure::Failed(format!("no feasible plan ({})", out.status)));
    };
    verify_plan(&inst, &sol, Some(cost)).map_err(|e| Failure::Failed(format!("solver output rejected: {e}")))?;
    let text = SolutionFile::new(sol, cost).to_string();
    match &a.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let inst = load_instance(&a.instance)?;
    let text = fs::read_to_string(&a.solution).map_err(|e| Failure::Usage(format!("{}: {e}", a.solution.display())))?;
    let file: SolutionFile = text.parse().map_err(|e| Failure::Usage(format!("{}: {e}", a.solution.display())))?;
    match verify_plan(&inst, &file.solution, file.cost) {
        Ok(cost) => {
            println!("feasible cost={cost:.6}");
            Ok(())
        }
        Err(why) => {
            println!("infeasible");
            Err(Failure::Failed(why))
        }
    }
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let files = instance_files(&a.dir).map_err(|e| Failure::Usage(format!("{}: {e}", a.dir.display())))?;
    if files.is_empty() {
        return Err(Failure::Usage(format!("no .inst files in {}", a.dir.display())));
    }
    let instances = files
        .iter()
        .map(|p| {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            load_instance(p).map(|inst| (name, inst))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = BenchConfig { methods: a.methods, time_limit: limit(a.time_limit)?, seed: a.seed };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    info!("running {} instances", instances.len());
    let rows = pool.install(|| run_bench(&instances, &cfg));
    let file = fs::File::create(&a.out).map_err(|e| Failure::Usage(format!("{}: {e}", a.out.display())))?;
    write_report(file, &rows).map_err(Failure::Failed)?;
    let bad = rows.iter().filter(|r| r.cost.is_none()).count();
    println!("{} rows written to {} ({bad} without a verified plan)", rows.len(), a.out.display());
    if bad > 0 {
        return Err(Failure::Failed(format!("{bad} solves failed")));
    }
    Ok(())
}

fn cmd_plot(a: PlotArgs) -> CmdResult {
    if !(a.bin_width > 0.0) {
        return Err(Failure::Usage(format!("bin width must be positive, got {}", a.bin_width)));
    }
    let file = fs::File::open(&a.report).map_err(|e| Failure::Usage(format!("{}: {e}", a.report.display())))?;
    let rows = read_report(file).map_err(|e| Failure::Usage(format!("{}: {e}", a.report.display())))?;
    for p in plotdata::export(&rows, &a.out, a.bin_width).map_err(Failure::Usage)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn cmd_export(a: ExportArgs) -> CmdResult {
    if a.lp.is_none() && a.gtsp.is_none() {
        return Err(Failure::Usage("nothing to export: pass --lp and/or --gtsp".into()));
    }
    let inst = load_instance(&a.input)?;
    if let Some(path) = &a.lp {
        write_file(path, &build_model(&inst, ModelOptions::default()).to_lp_string(&[]))?;
    }
    if let Some(path) = &a.gtsp {
        write_file(path, &build_transformed_graph(&inst)?.to_text())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::ExportPlotdata(a) => cmd_plot(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
