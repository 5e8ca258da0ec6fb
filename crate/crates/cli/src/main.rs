use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use logres_core::branch::parse_branches;
use logres_core::corpus::{run, select, Outcome};
use logres_core::criteria::{analyze, AnalyzeOptions};
use logres_core::{CoreError, DivisorGerm};
use logres_engine::parse;

const EXIT_CORPUS_FAILURE: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser)]
#[command(name = "logres", version, about = "Logarithmic residues and normalizations of hypersurface germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the germ {h = 0} at the origin.
    Analyze(AnalyzeArgs),
    /// Run the bundled examples against their expected verdicts.
    Corpus {
        /// Only entries whose name contains this string.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',', required = true)]
    vars: Vec<String>,
    /// Defining equation h.
    #[arg(long)]
    poly: String,
    /// Semicolon-separated factorization of h into components.
    #[arg(long)]
    factors: Option<String>,
    /// JSON file with branch or chart parametrizations of the normalization.
    #[arg(long)]
    branches: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Minimum precision of automatically computed branch expansions.
    #[arg(long, default_value_t = 0)]
    precision: u32,
    /// Seed for the random choices (nonzerodivisor search).
    #[arg(long)]
    seed: Option<u64>,
    /// Record stage timings in the report.
    #[arg(long)]
    timings: bool,
}

fn exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::Consistency(_) => EXIT_INCONSISTENT,
        _ => EXIT_INVALID_INPUT,
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<String, CoreError> {
    let vars: Vec<String> = args.vars.iter().map(|v| v.trim().to_string()).collect();
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let h = parse(&args.poly, &names)?;
    let germ = match args.seed {
        Some(seed) => DivisorGerm::with_seed(vars.clone(), h, seed)?,
        None => DivisorGerm::new(vars.clone(), h)?,
    };
    let factors = args
        .factors
        .as_deref()
        .map(|text| {
            text.split(';').filter(|f| !f.trim().is_empty()).map(|f| germ.poly(f.trim())).collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let branches = args
        .branches
        .as_ref()
        .map(|path| {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CoreError::InvalidBranch(format!("{}: {e}", path.display())))?;
            parse_branches(&text, germ.vars())
        })
        .transpose()?;
    let opts = AnalyzeOptions { factors, branches, precision: args.precision, timings: args.timings };
    let report = analyze(&germ, &opts)?;
    Ok(match args.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    })
}

fn cmd_corpus(only: Option<&str>) -> ExitCode {
    let entries = select(only);
    if entries.is_empty() {
        eprintln!("no corpus entry matches {:?}", only.unwrap_or_default());
        return ExitCode::from(EXIT_INVALID_INPUT);
    }
    let outcomes: Vec<Outcome> = thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || run(e))).collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker panicked")).collect()
    });
    let mut first_failure = None;
    for o in &outcomes {
        println!("{:<4} {}", if o.passed() { "ok" } else { "FAIL" }, o.name);
        for f in &o.failures {
            println!("       {f}");
        }
        if first_failure.is_none() && !o.passed() {
            first_failure = Some(format!("{}: {}", o.name, o.failures[0]));
        }
    }
    match first_failure {
        None => {
            println!("{} corpus entries passed", outcomes.len());
            ExitCode::SUCCESS
        }
        Some(f) => {
            eprintln!("corpus failure: {f}");
            ExitCode::from(EXIT_CORPUS_FAILURE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze(args) => match cmd_analyze(args) {
            Ok(out) => {
                print!("{out}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code(&e))
            }
        },
        Command::Corpus { only } => cmd_corpus(only.as_deref()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&CoreError::Consistency("x".into())), EXIT_INCONSISTENT);
        assert_eq!(exit_code(&CoreError::InvalidGerm("not squarefree".into())), EXIT_INVALID_INPUT);
        assert_eq!(exit_code(&CoreError::InvalidFactors("x".into())), EXIT_INVALID_INPUT);
    }
}
