mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clusterability::harness::{
    assess_file, assess_file_lenient, bench_config, render_outcomes, render_rejection, render_runtime,
    render_verdicts, run_experiment, run_runtime_bench, ExperimentSpec, OutputFormat, DEFAULT_REPEATS,
    DEFAULT_REPLICATES, FILE_MODE_HOPKINS_RUNS,
};
use clusterability::simgen::catalog_document;
use clusterability::{scenario_catalog, Error, MethodId, MethodOutcome, PseudoPoints, StandardizationMode};

use crate::config::FileConfig;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

#[derive(Parser)]
#[command(name = "clusterability", version, about = "Test whether data has cluster structure")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CLUSTERABILITY_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assess a delimited numeric file.
    Assess(AssessArgs),
    /// Rejection proportions over simulated scenarios.
    Simulate(SimulateArgs),
    /// Mean runtime per method over simulated scenarios.
    Bench(BenchArgs),
    /// Print the built-in scenario catalog.
    ListScenarios {
        #[arg(long, default_value = "plain")]
        format: String,
    },
}

#[derive(Args)]
struct Common {
    /// Comma-separated method names, or `all`.
    #[arg(long, default_value = "all")]
    methods: String,
    #[arg(long)]
    alpha: Option<f64>,
    /// Config file (JSON or key = value lines); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dip_replicates: Option<usize>,
    #[arg(long)]
    silverman_replicates: Option<usize>,
    /// Use Silverman's original bandwidth instead of the calibrated one.
    #[arg(long)]
    uncalibrated: bool,
    /// Hopkins pseudo points: bounding-box or resample.
    #[arg(long)]
    hopkins_pseudo: Option<String>,
    /// plain, csv or json.
    #[arg(long, default_value = "plain")]
    format: String,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AssessArgs {
    #[arg(long)]
    input: PathBuf,
    /// The first line is a header.
    #[arg(long)]
    header: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// none, center or zscore.
    #[arg(long)]
    standardize: Option<String>,
    #[arg(long)]
    hopkins_runs: Option<usize>,
    /// Report failing methods as error records instead of stopping.
    #[arg(long)]
    keep_going: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    /// Comma-separated rows or ranges (e.g. 1,5,11-16), or `all`.
    #[arg(long)]
    rows: String,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    replicates: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    rows: String,
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_degeneracy() {
        EXIT_DEGENERATE
    } else if matches!(e.root(), Error::InvalidArgument(_)) {
        EXIT_USAGE
    } else {
        EXIT_DATA
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be >= 1".into()));
        }
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Assess(args) => assess(args),
        Command::Simulate(args) => simulate(args, cli.threads),
        Command::Bench(args) => bench(args),
        Command::ListScenarios { format } => {
            let out = match format.parse::<OutputFormat>()? {
                OutputFormat::Json => catalog_document(),
                OutputFormat::Csv => {
                    let mut s = String::from("row,n,d,description\n");
                    for sc in scenario_catalog() {
                        s += &format!("{},{},{},\"{}\"\n", sc.row_id, sc.expected_n, sc.expected_d, sc.description);
                    }
                    s
                }
                OutputFormat::Plain => {
                    let mut s = format!("{:>4} {:>5} {:>4}  description\n", "row", "n", "d");
                    for sc in scenario_catalog() {
                        s += &format!("{:>4} {:>5} {:>4}  {}\n", sc.row_id, sc.expected_n, sc.expected_d, sc.description);
                    }
                    s
                }
            };
            emit(&out, None)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Config file values, then command-line overrides.
fn merged(common: &Common) -> Result<FileConfig, Error> {
    let mut fc = match &common.config {
        Some(path) => config::load(path)?,
        None => FileConfig::default(),
    };
    let c = &mut fc.config;
    if let Some(a) = common.alpha {
        c.alpha = a;
    }
    if let Some(b) = common.dip_replicates {
        c.dip_null_replicates = b;
    }
    if let Some(b) = common.silverman_replicates {
        c.silverman_bootstrap = b;
    }
    if common.uncalibrated {
        c.silverman_calibrated = false;
    }
    if let Some(p) = &common.hopkins_pseudo {
        c.hopkins_pseudo = p.parse::<PseudoPoints>()?;
    }
    Ok(fc)
}

fn assess(args: AssessArgs) -> Result<ExitCode, Error> {
    let methods = MethodId::parse_list(&args.common.methods)?;
    let format: OutputFormat = args.common.format.parse()?;
    let mut fc = merged(&args.common)?;
    let c = &mut fc.config;
    if let Some(s) = args.seed {
        c.seed = s;
    }
    if let Some(s) = &args.standardize {
        c.standardization = s.parse::<StandardizationMode>()?;
    }
    c.hopkins_runs = match args.hopkins_runs {
        Some(r) => r,
        None if fc.keys.contains("hopkins_runs") => c.hopkins_runs,
        None => FILE_MODE_HOPKINS_RUNS,
    };
    c.validate()?;

    if args.keep_going {
        let outcomes = assess_file_lenient(&args.input, args.header, &methods, &fc.config)?;
        emit(&render_outcomes(&outcomes, format), args.common.out.as_ref())?;
        let first_failure = outcomes.iter().find_map(|o| match o {
            MethodOutcome::Failed { error, .. } => Some(exit_code(error)),
            MethodOutcome::Ok(_) => None,
        });
        return Ok(first_failure.map_or(ExitCode::SUCCESS, ExitCode::from));
    }
    let verdicts = assess_file(&args.input, args.header, &methods, &fc.config)?;
    emit(&render_verdicts(&verdicts, format), args.common.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn simulate(args: SimulateArgs, threads: Option<usize>) -> Result<ExitCode, Error> {
    let rows = parse_rows(&args.rows)?;
    let methods = MethodId::parse_list(&args.common.methods)?;
    let format: OutputFormat = args.common.format.parse()?;
    let fc = merged(&args.common)?;
    let mut spec = ExperimentSpec::new(rows, methods, args.replicates, args.seed);
    let shared = spec.config.shared_dip_null;
    spec.config = fc.config.clone();
    if !fc.sets("shared_dip_null") {
        spec.config.shared_dip_null = shared;
    }
    spec.parallelism = threads;
    let table = run_experiment(&spec)?;
    emit(&render_rejection(&table, format), args.common.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> Result<ExitCode, Error> {
    let rows = parse_rows(&args.rows)?;
    let methods = MethodId::parse_list(&args.common.methods)?;
    let format: OutputFormat = args.common.format.parse()?;
    let fc = merged(&args.common)?;
    let mut config = fc.config.clone();
    if !fc.sets("shared_dip_null") {
        config.shared_dip_null = bench_config(args.seed).shared_dip_null;
    }
    let table = run_runtime_bench(&rows, &methods, args.repeats, &config, args.seed)?;
    emit(&render_runtime(&table, format), args.common.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

/// `all`, or a comma-separated list of rows and inclusive ranges.
fn parse_rows(s: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::InvalidArgument(format!("invalid row list '{s}'"));
    if s.trim() == "all" {
        return Ok(scenario_catalog().iter().map(|sc| sc.row_id).collect());
    }
    let mut rows = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                rows.extend(a..=b);
            }
            None => rows.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(rows)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(Error::from)
        }
    }
}
