use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rigidcx::cli::{run_text, RunOptions, VERBS};
use rigidcx::exactlin::BaseRing;

/// Exact homological algebra from declaration files.
///
/// The input declares rings, maps, modules, matrices and homomorphisms and lists jobs; the
/// statements whose verb matches VERB are run and their reports printed.
#[derive(Parser, Debug)]
#[command(name = "rigidcx", version)]
struct Args {
    /// The verb to run.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(VERBS))]
    verb: String,
    /// Input file; `-` reads standard input.
    input: Option<PathBuf>,
    /// Program text given inline instead of a file.
    #[arg(short = 'e', long = "eval", conflicts_with = "input")]
    eval: Option<String>,
    /// Cohomology window for squaring jobs that do not state one.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i32>>,
    /// Coefficient ring for rings declared without one: QQ, ZZ, or Fp P.
    #[arg(long, num_args = 1..=2, value_names = ["BASE", "P"], default_value = "QQ")]
    base: Vec<String>,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include resolution traces in reports.
    #[arg(long)]
    trace: bool,
}

fn parse_base(words: &[String]) -> Result<BaseRing, String> {
    match words {
        [b] if b == "QQ" => Ok(BaseRing::Rationals),
        [b] if b == "ZZ" => Ok(BaseRing::Integers),
        [b, p] if b == "Fp" => p
            .parse::<u64>()
            .map_err(|e| e.to_string())
            .and_then(|p| BaseRing::prime_field(p).map_err(|e| e.to_string())),
        _ => Err(format!("unknown base '{}'", words.join(" "))),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let base = match parse_base(&args.base) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match (&args.eval, &args.input) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) if p.as_os_str() == "-" => {
            let mut s = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut s) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            s
        }
        (None, Some(p)) => match std::fs::read_to_string(p) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        (None, None) => {
            eprintln!("error: give an input file, `-`, or --eval");
            return ExitCode::from(2);
        }
    };
    let window = args.window.as_ref().map(|w| (w[0], w[1]));
    let opts = RunOptions { window, trace: args.trace };
    let reports = match run_text(&text, Some(&args.verb), base, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered: Vec<String> = reports.iter().map(|r| r.render()).collect();
    let output = rendered.join("\n");
    match &args.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &output) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{output}"),
    }
    if reports.iter().all(|r| r.passes()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
