use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use vcover_core::bench::{self, SuiteConfig};
use vcover_core::io::{self, Instance};
use vcover_core::kernel::{kernelize_with, RuleSet};
use vcover_core::portfolio::{self, Ablation, PhasePlan, TestBudgets};

const STACK_BYTES: usize = 1 << 29;

#[derive(Parser)]
#[command(name = "vcover", version, about = "Exact minimum vertex cover solver")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (`.gr` or `.gr.gz`); reads stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Solution file; writes stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Total wall-clock budget in seconds.
    #[arg(long, default_value_t = 1800.0)]
    time_limit: f64,
    /// Budget for each short branch-and-reduce run, in seconds.
    #[arg(long)]
    short_limit: Option<f64>,
    /// Budget for the long branch-and-reduce run, in seconds.
    #[arg(long)]
    long_limit: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the reduced kernel instead of solving.
    #[arg(long)]
    kernel_only: bool,
    /// Write a JSON report of the run.
    #[arg(long)]
    stats_json: Option<PathBuf>,
    /// Maximum-independent-set solver used on the original graph in the last phase.
    #[arg(long)]
    external_clique_solver: Option<PathBuf>,
    #[arg(long, hide = true, default_value = "FullA")]
    ablation: Ablation,
    /// Replace wall-clock limits by fixed node budgets.
    #[arg(long, hide = true)]
    test_mode: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a solution file against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Benchmark runs and solved-over-time curves.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Solve every instance in a directory, one process each, appending to a CSV.
    Run {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value = "FullA")]
        ablation: Ablation,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1800.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 10.0)]
        grace: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        test_mode: bool,
    },
    /// Turn a results CSV into a solved-over-time curve.
    Curve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn seconds(s: f64) -> anyhow::Result<Duration> {
    Duration::try_from_secs_f64(s).map_err(|_| anyhow::anyhow!("invalid duration {s}"))
}

fn read_input(path: Option<&Path>) -> anyhow::Result<(Instance, String)> {
    match path {
        Some(p) => {
            let inst = io::read_instance_file(p).with_context(|| format!("reading {}", p.display()))?;
            Ok((inst, bench::instance_name(p)))
        }
        None => {
            let inst = io::parse_instance(BufReader::new(std::io::stdin().lock())).context("reading stdin")?;
            Ok((inst, "stdin".to_string()))
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn kernel_only(args: &SolveArgs, inst: &Instance) -> anyhow::Result<u8> {
    let k = kernelize_with(&inst.graph, RuleSet::ALL);
    let mut text = format!("c kernel n'={} m'={} offset={}\n", k.n_prime(), k.m_prime(), k.offset());
    text.push_str(&io::write_instance(&k.kernel, &inst.header.descriptor));
    emit(args.output.as_deref(), &text)?;
    if let Some(p) = &args.stats_json {
        let stats = serde_json::json!({
            "n": inst.graph.alive_count(),
            "m": inst.graph.edge_count(),
            "n_prime": k.n_prime(),
            "m_prime": k.m_prime(),
            "offset": k.offset(),
        });
        std::fs::write(p, serde_json::to_string_pretty(&stats)? + "\n")?;
    }
    Ok(0)
}

fn solve(args: SolveArgs) -> anyhow::Result<u8> {
    let (inst, name) = read_input(args.input.as_deref())?;
    if args.kernel_only {
        return kernel_only(&args, &inst);
    }
    let total = seconds(args.time_limit)?;
    let mut plan =
        if args.test_mode { PhasePlan::test(TestBudgets::default(), args.seed) } else { PhasePlan::with_total(total) };
    if !args.test_mode {
        if let Some(s) = args.short_limit {
            plan.short_limit = seconds(s)?;
        }
        if let Some(s) = args.long_limit {
            plan.long_limit = seconds(s)?;
        }
    }
    plan.seed = args.seed;
    plan.ablation = args.ablation;
    plan.external_clique_solver = args.external_clique_solver.clone();
    plan.validate()?;

    let cancel = Arc::new(AtomicBool::new(false));
    if !args.test_mode {
        plan.cancel = Some(cancel.clone());
        let flag = cancel.clone();
        std::thread::spawn(move || {
            std::thread::sleep(total);
            flag.store(true, Ordering::Relaxed);
        });
    }
    let graph = inst.graph.clone();
    let report = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || portfolio::solve(&graph, &plan, &name))?
        .join()
        .map_err(|_| anyhow::anyhow!("solver thread panicked"))??;

    if let Some(p) = &args.stats_json {
        std::fs::write(p, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("writing {}", p.display()))?;
    }
    match &report.cover {
        Some(cover) if report.solved() => {
            if !report.verified {
                bail!("internal error: cover failed verification");
            }
            emit(args.output.as_deref(), &io::write_solution(cover, inst.header.n))?;
            log::info!("solved by {:?}, size {}", report.phase, cover.len());
            Ok(0)
        }
        _ => {
            eprintln!("no optimal cover found within the time limit");
            Ok(2)
        }
    }
}

fn verify(instance: &Path, solution: &Path) -> anyhow::Result<u8> {
    match bench::verify_solution(instance, solution) {
        Ok(size) => {
            println!("valid cover of size {size}");
            Ok(0)
        }
        Err(e) => {
            eprintln!("invalid: {e}");
            Ok(1)
        }
    }
}

fn bench_cmd(cmd: BenchCmd) -> anyhow::Result<u8> {
    match cmd {
        BenchCmd::Run { dir, ablation, jobs, out, time_limit, grace, seed, test_mode } => {
            let exe = std::env::current_exe().context("locating solver executable")?;
            let mut cfg = SuiteConfig::new(exe, dir, ablation, out);
            cfg.jobs = jobs;
            cfg.time_limit = seconds(time_limit)?;
            cfg.grace = seconds(grace)?;
            cfg.seed = seed;
            cfg.test_mode = test_mode;
            let rows = bench::run_suite(&cfg)?;
            let solved = rows.iter().filter(|r| r.solved == 1).count();
            println!("{} run, {solved} solved", rows.len());
            Ok(0)
        }
        BenchCmd::Curve { input, out } => {
            let rows = bench::read_rows(&input)?;
            bench::write_curve(&out, &bench::solved_over_time(&rows))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Cmd::Verify { instance, solution }) => verify(&instance, &solution),
        Some(Cmd::Bench(b)) => bench_cmd(b),
        None => solve(cli.solve),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
