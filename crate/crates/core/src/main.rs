use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use streamsample::bench;
use streamsample::cli::{run, CliConfig};
use streamsample::method::Method;
use streamsample::verify;

// Required by `bench run`: auxiliary memory is measured through
// allocator counters, not RSS.
#[global_allocator]
static ALLOCATOR: bench::alloc::CountingAllocator = bench::alloc::CountingAllocator;

/// Single-pass random sampling from streams: a line sampler, a
/// statistical verifier, and a benchmark harness.
#[derive(Parser)]
#[command(name = "streamsample", version)]
enum Cli {
    /// Sample lines from files or standard input in a single pass.
    Sample(SampleArgs),
    /// Check every sampler against its exact distribution oracle.
    Verify(VerifyArgs),
    /// Compare streaming samplers against population-based sampling.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Args)]
struct SampleArgs {
    /// Input files; standard input when none (or "-") is given.
    files: Vec<PathBuf>,

    /// Number of lines to sample.
    #[arg(short = 'n', long = "num", value_name = "K")]
    num: usize,

    /// Sample with replacement.
    #[arg(long)]
    replace: bool,

    /// 1-based column holding the line weight; enables weighted sampling.
    #[arg(long, value_name = "IDX")]
    weight_field: Option<usize>,

    /// Field delimiter for --weight-field (single byte; "\t" accepted).
    #[arg(long, short = 'd', value_name = "CHAR", default_value = "\t")]
    delimiter: String,

    /// Declared number of input lines; selects sequential sampling.
    #[arg(long, value_name = "N", conflicts_with = "total_weight")]
    total: Option<u64>,

    /// Declared total input weight; selects sequential sampling.
    #[arg(long, value_name = "W")]
    total_weight: Option<f64>,

    /// Algorithm override (AlgR, AlgL, AlgRSWRSKIP, AlgARes, AlgAExpJ,
    /// AlgWRSWRSKIP, AlgD, AlgHiddenShuffle, AlgORDSWR, AlgORDWSWR).
    #[arg(long, value_name = "NAME")]
    method: Option<Method>,

    /// Seed for the deterministic generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Pass the first line through untouched and exclude it from
    /// sampling.
    #[arg(long)]
    header: bool,

    /// Emit reservoir samples in input order (costs one index per slot).
    #[arg(long)]
    stable: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Monte-Carlo trials per matrix row.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Run the comparison suite and write results.csv plus SVG figures.
    Run {
        /// Stream length.
        #[arg(long, default_value_t = 10_000_000)]
        n: u64,
        /// Repetitions per measurement (median is reported).
        #[arg(long, default_value_t = 20)]
        reps: u32,
        /// Output directory for results.csv and fig_iter_*.svg.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Sample sizes; defaults to N/10^4 .. N/10.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<u64>>,
    },
}

fn parse_delimiter(raw: &str) -> Result<u8, String> {
    match raw {
        "\\t" => Ok(b'\t'),
        s if s.as_bytes().len() == 1 => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be a single byte (got `{raw}`)")),
    }
}

fn sample_command(args: SampleArgs) -> ExitCode {
    if let Some(0) = args.weight_field {
        eprintln!("streamsample: --weight-field is 1-based");
        return ExitCode::from(2);
    }
    if args.num == 0 {
        eprintln!("streamsample: -n must be at least 1");
        return ExitCode::from(2);
    }
    let delimiter = match parse_delimiter(&args.delimiter) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("streamsample: {e}");
            return ExitCode::from(2);
        }
    };
    let config = CliConfig {
        inputs: args.files,
        k: args.num,
        method: args.method,
        replace: args.replace,
        weight_field: args.weight_field,
        delimiter,
        total: args.total,
        total_weight: args.total_weight,
        seed: args.seed,
        header: args.header,
        stable: args.stable,
    };
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    match run(&config, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("streamsample: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn verify_command(args: VerifyArgs) -> ExitCode {
    let rows = verify::verification_matrix(args.trials);
    let mut failures = 0;
    for row in &rows {
        let status = if row.outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "{status}  {:<48} chi2={:8.3} crit={:8.3} df={}",
            row.name, row.outcome.statistic, row.outcome.critical, row.outcome.degrees_of_freedom
        );
        if !row.outcome.pass {
            failures += 1;
        }
    }
    println!(
        "{} of {} checks passed at alpha={} ({} trials each, one reseed permitted)",
        rows.len() - failures,
        rows.len(),
        verify::ALPHA,
        args.trials
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn bench_command(n: u64, reps: u32, out: PathBuf, k: Option<Vec<u64>>) -> ExitCode {
    let grid = k.unwrap_or_else(|| bench::default_k_grid(n));
    match bench::run_suite(n, &grid, reps, &out) {
        Ok(records) => {
            println!(
                "wrote {} measurements to {}",
                records.len(),
                out.join("results.csv").display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("streamsample: bench: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse() {
        Cli::Sample(args) => sample_command(args),
        Cli::Verify(args) => verify_command(args),
        Cli::Bench(BenchCmd::Run { n, reps, out, k }) => bench_command(n, reps, out, k),
    }
}
