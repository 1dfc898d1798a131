use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use periodlab_cli::{run_text, CliError, Overrides};

/// Period dimensions and high-precision periods of elliptic 1-motives.
///
/// Reads a `periodlab/1` job document and writes a JSON report.
#[derive(Parser, Debug)]
#[command(name = "periodlab", version)]
struct Args {
    /// Working precision in bits (overrides the document).
    #[arg(long = "prec")]
    prec: Option<u32>,
    /// Height bound for relation searches.
    #[arg(long)]
    height: Option<u64>,
    /// Significant decimal digits in the report.
    #[arg(long)]
    digits: Option<usize>,
    /// Input file, or `-` for stdin.
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
    /// Output file, or `-` for stdout.
    #[arg(long = "out", default_value = "-")]
    output: PathBuf,
}

fn is_stdio(p: &Path) -> bool {
    p.as_os_str() == "-"
}

fn read_input(p: &Path) -> io::Result<String> {
    if is_stdio(p) {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(p)
    }
}

fn write_output(p: &Path, text: &str) -> io::Result<()> {
    if is_stdio(p) {
        io::stdout().write_all(text.as_bytes())
    } else {
        fs::write(p, text)
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.input.display());
            return ExitCode::from(1);
        }
    };
    let o = Overrides { precision_bits: args.prec, height_bound: args.height, digits_out: args.digits };
    match run_text(&text, &o) {
        Ok(report) => match write_output(&args.output, &report) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("cannot write {}: {e}", args.output.display());
                ExitCode::from(1)
            }
        },
        Err(e) => fail(&e),
    }
}
