use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use recipro::pipeline::{verify_pair_within, Check, PairVerdict};
use recipro::report::{self, Format, RunMeta, Summary, SweepRow};
use recipro::residue::{legendre_euler, OddPrime};
use recipro::suites::{run_suite, Suite};
use recipro::{Budget, Error};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "recipro",
    version,
    about = "Verify the transversal proof of quadratic reciprocity pair by pair"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a single pair of distinct odd primes.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify every pair of odd primes p < q <= MAX.
    Sweep {
        #[arg(long)]
        max: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a seeded randomized suite.
    LemmaSuite {
        /// lemma1, lemma2, euler, wilson or lemma5
        #[arg(long, value_parser = parse_suite)]
        which: Suite,
        #[arg(long = "n")]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the Legendre symbol (q/p) by Euler's criterion.
    Legendre {
        /// odd prime modulus
        #[arg(long)]
        p: u64,
        /// integer coprime to p
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "csv", value_parser = parse_format)]
        format: Format,
    },
}

#[derive(clap::Args)]
struct OutputArgs {
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Force the named check to fail; exercises the failure path.
    #[arg(long, hide = true, value_parser = parse_check)]
    inject_fault: Option<Check>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_check(s: &str) -> Result<Check, String> {
    Check::parse(s).ok_or_else(|| format!("unknown check {s:?}"))
}

/// A failure that ends the run with a specific exit code.
struct Exit {
    code: u8,
    message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Exit {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(exit) => {
            eprintln!("error: {}", exit.message);
            ExitCode::from(exit.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Exit> {
    let budget = Budget::from_env()?;
    match cli.command {
        Command::Verify { p, q, output } => {
            let p = OddPrime::new(p)?;
            let q = OddPrime::new(q)?;
            let mut verdict = verify_pair_within(p, q, &budget)?;
            inject(&mut verdict, output.inject_fault);
            let meta = RunMeta::new("verify", output.seed, [("p", p.get()), ("q", q.get())]);
            let rows = vec![SweepRow::from(&verdict)];
            emit(&rows, &meta, &output)?;
            for check in verdict.failed_checks() {
                eprintln!("({p}, {q}): check {check} failed");
            }
            Ok(pass_code(verdict.all_pass()))
        }
        Command::Sweep { max, output } => {
            let mut verdicts = report::sweep(max, &budget)?;
            for v in &mut verdicts {
                inject(v, output.inject_fault);
            }
            let rows: Vec<SweepRow> = verdicts.iter().map(SweepRow::from).collect();
            let meta = RunMeta::new("sweep", output.seed, [("max", max)]);
            emit(&rows, &meta, &output)?;
            let summary = Summary::of(&rows);
            eprintln!("{summary}");
            Ok(pass_code(summary.failures == 0))
        }
        Command::LemmaSuite { which, n, seed } => {
            let report = run_suite(which, n, seed, &budget)?;
            for failure in &report.failures {
                eprintln!("FAIL {failure}");
            }
            println!("{report}");
            Ok(pass_code(report.all_pass()))
        }
        Command::Legendre { p, q, format } => {
            let p = OddPrime::new(p)?;
            let symbol = legendre_euler(q, p)?.as_i8();
            match format {
                Format::Csv => println!("a,p,symbol\n{q},{p},{symbol}"),
                Format::Json => println!(
                    "{}",
                    serde_json::json!({"a": q, "p": p.get(), "symbol": symbol})
                ),
            }
            Ok(EXIT_PASS)
        }
    }
}

fn inject(verdict: &mut PairVerdict, fault: Option<Check>) {
    if let Some(fault) = fault {
        for (check, ok) in &mut verdict.checks {
            if *check == fault {
                *ok = false;
            }
        }
    }
}

fn pass_code(all_pass: bool) -> u8 {
    if all_pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn emit(rows: &[SweepRow], meta: &RunMeta, output: &OutputArgs) -> Result<(), Exit> {
    let text = report::render(rows, meta, output.format)?;
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
