//! Command-line front end for the tandem-line simulator.
//!
//! Four subcommands: `simulate` runs one workload through an engine,
//! `model` prints step-count predictions without simulating, `bench`
//! sweeps worker counts comparing measured steps against the model, and
//! `verify` cross-checks every engine and the event-driven oracle on
//! randomized workloads.
//!
//! Exit codes are fixed for CI use: 0 success, 1 I/O error, 2 usage or
//! validation error, 3 verification failure. Every command is
//! deterministic for fixed flags and seeds, except the wall-time fields
//! of reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use tandemsim::bench::{default_sweep, run_sweep, BenchOptions};
use tandemsim::gen::{generate, generate_uniform_ints, DistributionSpec, WorkloadSpec};
use tandemsim::io::{read_workload, write_workload, WorkloadFileError};
use tandemsim::metrics::compute_metrics;
use tandemsim::oracle::simulate_event_driven;
use tandemsim::perf;
use tandemsim::report::{ReportFormat, ReportPayload, SimReport};
use tandemsim::{
    parallel_wavefront, serial_full, serial_inplace, serial_inplace_ring, Workload,
};

#[derive(Parser)]
#[command(
    name = "tandemsim",
    version,
    about = "Simulates tandem queueing lines and models wavefront-parallel step counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one workload through an engine and report the results
    Simulate(SimulateArgs),
    /// Print exact and asymptotic step-count predictions (no simulation)
    Model(ModelArgs),
    /// Sweep worker counts and compare measured steps with the model
    Bench(BenchArgs),
    /// Cross-check all engines and the event-driven oracle on random workloads
    Verify(VerifyArgs),
}

/// Flags that select or generate the workload matrix.
#[derive(Args)]
struct SourceArgs {
    /// Number of stations M (required with --dist; cross-checked against --workload)
    #[arg(long, value_name = "M", value_parser = parse_servers)]
    servers: Option<usize>,

    /// Number of customers N (required with --dist; cross-checked against --workload)
    #[arg(long, value_name = "N", value_parser = parse_customers)]
    customers: Option<usize>,

    /// Workload CSV file: (M+1) x N times, row 0 the interarrival times
    #[arg(long, value_name = "FILE", conflicts_with_all = ["dist", "dist_row", "seed"])]
    workload: Option<PathBuf>,

    /// Distribution for every row: constant:C, uniform:A:B, or exponential:RATE
    #[arg(long, value_name = "SPEC")]
    dist: Option<String>,

    /// Override the distribution for one row (may repeat): --dist-row ROW SPEC
    #[arg(
        long = "dist-row",
        num_args = 2,
        value_names = ["ROW", "SPEC"],
        action = clap::ArgAction::Append,
        requires = "dist"
    )]
    dist_row: Vec<String>,

    /// Generator seed, decimal or 0x-prefixed hex
    #[arg(long, value_name = "SEED", default_value = "0", value_parser = parse_seed_flag)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Engine to run
    #[arg(long, value_enum, default_value_t = EngineArg::Serial)]
    engine: EngineArg,

    /// Worker threads for the parallel engine
    #[arg(
        long,
        value_name = "P",
        env = "TANDEMSIM_THREADS",
        default_value_t = 1,
        value_parser = parse_workers
    )]
    workers: usize,

    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// What to report
    #[arg(long, value_enum, default_value_t = EmitArg::Final)]
    emit: EmitArg,
}

#[derive(Args)]
struct ModelArgs {
    /// Number of stations M
    #[arg(long, value_name = "M", value_parser = parse_servers)]
    servers: usize,

    /// Number of customers N
    #[arg(long, value_name = "N", value_parser = parse_customers)]
    customers: usize,

    /// Comma-separated worker counts, e.g. 1,2,4
    #[arg(long = "workers-list", value_name = "LIST", value_parser = parse_workers_list)]
    workers_list: WorkersList,

    /// Write the table to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Comma-separated worker counts (default: 1..=min(M+1,N)+1)
    #[arg(long = "workers-list", value_name = "LIST", value_parser = parse_workers_list)]
    workers_list: Option<WorkersList>,

    /// Measured runs per worker count; the median wall time is reported
    #[arg(long, value_name = "R", default_value_t = 5, value_parser = parse_runs)]
    runs: usize,

    /// Warmup runs per worker count, excluded from timing
    #[arg(long, value_name = "W", default_value_t = 1)]
    warmup: usize,

    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of random workloads to check
    #[arg(long, value_name = "R", default_value_t = 100, value_parser = parse_trials)]
    trials: usize,

    /// Master seed, decimal or 0x-prefixed hex
    #[arg(long, value_name = "SEED", default_value = "0", value_parser = parse_seed_flag)]
    seed: u64,

    /// Largest M to draw
    #[arg(long = "max-servers", value_name = "M", default_value_t = 8, value_parser = parse_servers)]
    max_servers: usize,

    /// Largest N to draw
    #[arg(long = "max-customers", value_name = "N", default_value_t = 32, value_parser = parse_customers)]
    max_customers: usize,

    /// Where to write the offending workload if a mismatch is found
    #[arg(long = "replay-out", value_name = "FILE", default_value = "verify-failure.csv")]
    replay_out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    /// Full-table serial sweep
    Serial,
    /// In-place serial sweep; emits final departures only
    Inplace,
    /// Barrier-synchronized parallel wavefront
    Parallel,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitArg {
    /// Final departure epoch of the last customer at each station
    Final,
    /// The whole departure table
    Table,
    /// Per-customer waits and sojourn times
    Metrics,
}

#[derive(Clone, Debug)]
struct WorkersList(Vec<usize>);

fn positive(s: &str, what: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("{what} must be >= 1")),
    }
}

fn parse_servers(s: &str) -> Result<usize, String> {
    positive(s, "servers")
}

fn parse_customers(s: &str) -> Result<usize, String> {
    positive(s, "customers")
}

fn parse_workers(s: &str) -> Result<usize, String> {
    positive(s, "workers")
}

fn parse_trials(s: &str) -> Result<usize, String> {
    positive(s, "trials")
}

fn parse_runs(s: &str) -> Result<usize, String> {
    positive(s, "runs")
}

fn parse_seed_flag(s: &str) -> Result<u64, String> {
    tandemsim::gen::parse_seed(s).map_err(|e| e.to_string())
}

fn parse_workers_list(s: &str) -> Result<WorkersList, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("workers-list must not be empty".into());
    }
    t.split(',')
        .map(|tok| positive(tok, "every workers-list entry"))
        .collect::<Result<Vec<_>, _>>()
        .map(WorkersList)
}

/// Failures after flag parsing, carrying the exit code contract.
enum Failure {
    Io(String),
    Usage(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Usage(m) | Failure::Verification(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Model(a) => cmd_model(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// Builds the workload from --workload or --dist flags.
fn resolve_workload(src: &SourceArgs) -> Result<Workload<f64>, Failure> {
    match (&src.workload, &src.dist) {
        (Some(path), None) => {
            let w = read_workload::<f64>(path).map_err(|e| match e {
                WorkloadFileError::Io(io) => Failure::Io(format!("{}: {io}", path.display())),
                other => Failure::Usage(format!("--workload {}: {other}", path.display())),
            })?;
            if let Some(m) = src.servers {
                if m != w.num_servers() {
                    return Err(Failure::Usage(format!(
                        "--servers {m} does not match the workload file (M={})",
                        w.num_servers()
                    )));
                }
            }
            if let Some(n) = src.customers {
                if n != w.num_customers() {
                    return Err(Failure::Usage(format!(
                        "--customers {n} does not match the workload file (N={})",
                        w.num_customers()
                    )));
                }
            }
            Ok(w)
        }
        (None, Some(dist)) => {
            let m = src
                .servers
                .ok_or_else(|| Failure::Usage("--servers is required with --dist".into()))?;
            let n = src
                .customers
                .ok_or_else(|| Failure::Usage("--customers is required with --dist".into()))?;
            let default = dist
                .parse::<DistributionSpec>()
                .map_err(|e| Failure::Usage(format!("--dist: {e}")))?;
            let mut spec = WorkloadSpec::new(default);
            for pair in src.dist_row.chunks(2) {
                let row = pair[0].parse::<usize>().map_err(|_| {
                    Failure::Usage(format!("--dist-row: bad row index '{}'", pair[0]))
                })?;
                let d = pair[1]
                    .parse::<DistributionSpec>()
                    .map_err(|e| Failure::Usage(format!("--dist-row: {e}")))?;
                spec.row_overrides.push((row, d));
            }
            generate(&spec, m, n, src.seed).map_err(|e| Failure::Usage(e.to_string()))
        }
        (None, None) => Err(Failure::Usage(
            "either --workload or --dist is required".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects --workload with --dist"),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let w = resolve_workload(&args.source)?;
    let (m, n) = (w.num_servers(), w.num_customers());

    let report = match (args.engine, args.emit) {
        (EngineArg::Inplace, EmitArg::Final) => {
            let (finals, instr) = serial_inplace(&w);
            SimReport::new(m, n, &instr, ReportPayload::Final(finals))
        }
        (EngineArg::Inplace, _) => {
            return Err(Failure::Usage(
                "--engine inplace supports only --emit final".into(),
            ))
        }
        (engine, emit) => {
            let (table, instr) = match engine {
                EngineArg::Serial => serial_full(&w),
                EngineArg::Parallel => parallel_wavefront(&w, args.workers),
                EngineArg::Inplace => unreachable!("handled above"),
            };
            let payload = match emit {
                EmitArg::Final => ReportPayload::Final(table.final_departures()),
                EmitArg::Table => ReportPayload::table_from(&table),
                EmitArg::Metrics => ReportPayload::Metrics(
                    compute_metrics(&w, &table).expect("engine table matches workload shape"),
                ),
            };
            SimReport::new(m, n, &instr, payload)
        }
    };

    write_output(args.out.as_deref(), &report.render(args.format.into()))
}

fn cmd_model(args: &ModelArgs) -> Result<(), Failure> {
    let mut out = String::from("P,t_exact,t_serial,t_asymptotic,speedup,speedup_asymptotic\n");
    for &p in &args.workers_list.0 {
        let pr = perf::prediction(
            args.servers as u64,
            args.customers as u64,
            p as u64,
        )
        .map_err(|e| Failure::Usage(e.to_string()))?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            pr.processors, pr.t_exact, pr.t_serial, pr.t_asymptotic, pr.speedup,
            pr.speedup_asymptotic
        )
        .expect("writing to a String cannot fail");
    }
    write_output(args.out.as_deref(), &out)
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let w = resolve_workload(&args.source)?;
    let sweep = match &args.workers_list {
        Some(list) => list.0.clone(),
        None => default_sweep(w.num_servers(), w.num_customers()),
    };
    let opts = BenchOptions {
        warmup_runs: args.warmup,
        measured_runs: args.runs,
    };
    let table = run_sweep(&w, &sweep, &opts).map_err(|e| Failure::Usage(e.to_string()))?;
    write_output(
        args.out.as_deref(),
        &tandemsim::bench::emit_report(&table, args.format.into()),
    )?;
    let off: Vec<usize> = table
        .rows
        .iter()
        .filter(|r| r.delta != 0)
        .map(|r| r.p)
        .collect();
    if off.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "measured step counts deviate from the model at P = {off:?}"
        )))
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let mut master = ChaCha8Rng::seed_from_u64(args.seed);
    for trial in 0..args.trials {
        let m = 1 + (master.next_u64() % args.max_servers as u64) as usize;
        let n = 1 + (master.next_u64() % args.max_customers as u64) as usize;
        let wseed = master.next_u64();
        let w = generate_uniform_ints(m, n, 0, 9, wseed)
            .expect("verify draws valid workload shapes");
        if let Err(what) = check_trial(&w) {
            write_workload(&w, &args.replay_out)
                .map_err(|e| Failure::Io(format!("{}: {e}", args.replay_out.display())))?;
            return Err(Failure::Verification(format!(
                "trial {trial} (M={m}, N={n}, workload seed {wseed:#x}): {what}; \
                 workload written to {} for replay",
                args.replay_out.display()
            )));
        }
    }
    println!(
        "verify: {} trials passed (M <= {}, N <= {}, seed {})",
        args.trials, args.max_servers, args.max_customers, args.seed
    );
    Ok(())
}

/// Runs one workload through every engine and the oracle; reports the first
/// disagreement with the full-table serial result.
fn check_trial(w: &Workload<u64>) -> Result<(), String> {
    let m = w.num_servers();
    let (reference, _) = serial_full(w);

    let oracle = simulate_event_driven(w);
    if !reference.exact_eq(&oracle) {
        return Err("event-driven oracle disagrees with the serial engine".into());
    }

    let (finals, _) = serial_inplace(w);
    if finals != reference.final_departures() {
        return Err("in-place engine disagrees on final departures".into());
    }

    let (last_row, _) = serial_inplace_ring(w);
    if last_row.as_slice() != &reference.row(m)[1..] {
        return Err("ring engine disagrees on last-station departures".into());
    }

    for p in 1..=(m + 1).min(w.num_customers()) + 1 {
        let (par, _) = parallel_wavefront(w, p);
        if !par.exact_eq(&reference) {
            return Err(format!("parallel engine disagrees at P={p}"));
        }
    }
    Ok(())
}
