use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod classify;
mod measure;
mod output;
mod scan;

use output::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "tanglectl", version, about = "Entanglement measures, classification and family scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate entanglement measures on a state file.
    Measure(MeasureArgs),
    /// Print the entanglement class of a state and the values behind it.
    Classify(ClassifyArgs),
    /// Scan a symmetric family over its physical region and write CSV.
    Scan(ScanArgs),
    /// Evaluate a witness on a state.
    Witness(WitnessArgs),
}

#[derive(Args, Debug)]
struct OutputFlags {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Include wall-clock timing in the report; output is then no longer
    /// reproducible byte for byte.
    #[arg(long)]
    timing: bool,
}

impl OutputFlags {
    fn format(&self) -> Format {
        if self.csv {
            Format::Csv
        } else {
            Format::Json
        }
    }
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[arg(long)]
    state: PathBuf,
    /// Comma-separated measure names; all applicable measures when omitted.
    #[arg(long, value_delimiter = ',')]
    measures: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputFlags,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    state: PathBuf,
    #[command(flatten)]
    out: OutputFlags,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    Axi,
    Ghzsym,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Local dimension of the axisymmetric family.
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 100)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long)]
    state: PathBuf,
    /// proj2qubit, ghz_proj or ghz_opt.
    #[arg(long)]
    witness: String,
    #[command(flatten)]
    out: OutputFlags,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("TANGLEKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("TANGLEKIT_THREADS must be a positive integer, got '{v}'")))?;
    // A pool built earlier in the process keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn elapsed(start: Instant, on: bool) -> Option<f64> {
    on.then(|| start.elapsed().as_secs_f64() * 1e3)
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let start = Instant::now();
    let text = match cli.command {
        Command::Measure(a) => {
            let state = output::load_state(&a.state)?;
            let report = measure::run(&state, &a.measures, a.seed)?;
            let header = output::Header {
                input: &a.state,
                seed: a.seed,
                state: &state,
                timing_ms: elapsed(start, a.out.timing),
            };
            output::render(&header, &report, a.out.format())
        }
        Command::Classify(a) => {
            let state = output::load_state(&a.state)?;
            let report = classify::run(&state)?;
            let header =
                output::Header { input: &a.state, seed: 0, state: &state, timing_ms: elapsed(start, a.out.timing) };
            output::render(&header, &report, a.out.format())
        }
        Command::Witness(a) => {
            let state = output::load_state(&a.state)?;
            let kind = a.witness.parse().map_err(CliError::from_core)?;
            let report = measure::witness(&state, kind)?;
            let header =
                output::Header { input: &a.state, seed: 0, state: &state, timing_ms: elapsed(start, a.out.timing) };
            output::render(&header, &report, a.out.format())
        }
        Command::Scan(a) => {
            let rows = scan::run(a.family, a.d, a.grid)?;
            scan::write_csv(&a.out, &rows)?;
            format!("wrote {} rows to {}\n", rows.len(), a.out.display())
        }
    };
    print!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tanglectl: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
