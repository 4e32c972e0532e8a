use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use teleparallel_verify::{emit_report, parse_config, presets, run_suites, write_report, Format};

#[derive(Parser)]
#[command(name = "verify", version, about = "Check dual teleparallel identities on sampled points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites of a scenario config and write a report.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Report path; overrides the config. Standard output when neither is given.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<CliFormat>,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List metric presets.
    Presets,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Json,
    Csv,
}

impl From<CliFormat> for Format {
    fn from(f: CliFormat) -> Self {
        match f {
            CliFormat::Json => Format::Json,
            CliFormat::Csv => Format::Csv,
        }
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var("VERIFY_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(format!("VERIFY_THREADS must be a positive integer, got `{v}`")),
        },
    }
}

fn run(config: PathBuf, out: Option<PathBuf>, format: Option<CliFormat>, seed: Option<u64>) -> ExitCode {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let threads = match threads_from_env() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let format = format.map(Format::from).or(cfg.format).unwrap_or_default();
    let out = out.or_else(|| cfg.output.clone());

    let start = Instant::now();
    let report = run_with_threads(threads, || run_suites(&cfg));
    let elapsed = start.elapsed().as_secs_f64();

    let written = match &out {
        Some(path) => write_report(&report, format, path),
        None => emit_report(&report, format).map(|bytes| print!("{}", String::from_utf8_lossy(&bytes))),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_FAIL);
    }
    for s in &report.summary {
        let max = s.max_residual.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "n/a".into());
        eprintln!("{:<15} max {max:<10} pass {:>4}  fail {:>4}  errors {:>4}", s.suite.name(), s.passed, s.failed, s.errors);
    }
    eprintln!("{}: {} passed, {} failed in {elapsed:.2}s", report.scenario, report.passed(), report.failed());
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

#[cfg(feature = "parallel")]
fn run_with_threads<R: Send>(threads: Option<usize>, job: impl FnOnce() -> R + Send) -> R {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_with_threads<R: Send>(_threads: Option<usize>, job: impl FnOnce() -> R + Send) -> R {
    job()
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, out, format, seed } => run(config, out, format, seed),
        Command::Presets => {
            for (name, formula, note) in presets() {
                println!("{name:<14} {formula}\n{:<14} {note}", "");
            }
            ExitCode::SUCCESS
        }
    }
}
