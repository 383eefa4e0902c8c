use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use knot_periods::cli::{
    analyze, catalog, parse_alexander, sweep, sweep_table, AnalyzeOptions, KnotInput, SweepRow, CATALOG,
};
use knot_periods::poly::DEFAULT_FACTOR_SEED;
use knot_periods::PrimeModulus;

#[derive(Parser)]
#[command(
    name = "knot-periods",
    version,
    about = "Orbit periods of knot group representations into Z/p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict the orbit periods for one knot and prime, and verify them.
    Analyze(AnalyzeArgs),
    /// List the built-in knots.
    Catalog(CatalogArgs),
    /// Analyze knots across several primes.
    Sweep(SweepArgs),
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Built-in knot name (see `catalog`).
    #[arg(long, group = "source")]
    knot: Option<String>,
    /// Presentation file.
    #[arg(long, group = "source")]
    presentation: Option<PathBuf>,
    /// Integer Alexander polynomial coefficients, low degree first, e.g. "1 -1 1".
    #[arg(long, group = "source", allow_hyphen_values = true)]
    alexander: Option<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    prime: u64,
    /// Run the oracle (default).
    #[arg(long, overrides_with = "no_verify")]
    verify: bool,
    /// Skip the oracle and report predictions only.
    #[arg(long)]
    no_verify: bool,
    /// For catalog knots, go through the built-in presentation instead of the polynomial.
    #[arg(long, requires = "knot")]
    via_presentation: bool,
    /// Seed for the randomized factorization step.
    #[arg(long, default_value_t = DEFAULT_FACTOR_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CatalogArgs {
    /// Show a single entry.
    #[arg(long)]
    knot: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Knots to sweep (repeatable); all catalog knots when omitted.
    #[arg(long)]
    knot: Vec<String>,
    /// Whitespace-separated primes, e.g. "2 3 5 7".
    #[arg(long)]
    primes: String,
    #[arg(long)]
    no_verify: bool,
    #[arg(long, default_value_t = DEFAULT_FACTOR_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

/// Exit status for a run that completed.
enum Outcome {
    Ok,
    Mismatch,
}

fn catalog_entry(name: &str) -> Result<&'static catalog::CatalogEntry> {
    catalog::lookup(name).with_context(|| format!("unknown knot `{name}`; run `catalog` for the built-in list"))
}

fn run_analyze(args: AnalyzeArgs) -> Result<Outcome> {
    let p = PrimeModulus::new(args.prime)?;
    let input = match (&args.source.knot, &args.source.presentation, &args.source.alexander) {
        (Some(name), _, _) if args.via_presentation => KnotInput::CatalogPresentation(catalog_entry(name)?),
        (Some(name), _, _) => KnotInput::Catalog(catalog_entry(name)?),
        (_, Some(path), _) => KnotInput::Presentation {
            name: path.display().to_string(),
            text: std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        },
        (_, _, Some(coeffs)) => KnotInput::Alexander(parse_alexander(coeffs)?),
        _ => bail!("one of --knot, --presentation or --alexander is required"),
    };
    let opts = AnalyzeOptions {
        verify: !args.no_verify,
        seed: args.seed,
    };
    let report = analyze(&input, p, opts)?;
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    eprintln!(
        "time: algebra {:.3} ms, oracle {:.3} ms",
        report.timings.algebra.as_secs_f64() * 1e3,
        report.timings.oracle.as_secs_f64() * 1e3
    );
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.verdict.is_failure() {
        Outcome::Mismatch
    } else {
        Outcome::Ok
    })
}

fn run_catalog(args: CatalogArgs) -> Result<Outcome> {
    let entries: Vec<&catalog::CatalogEntry> = match &args.knot {
        Some(name) => vec![catalog_entry(name)?],
        None => CATALOG.iter().collect(),
    };
    if args.json {
        #[derive(serde::Serialize)]
        struct Listed<'a> {
            #[serde(flatten)]
            entry: &'a catalog::CatalogEntry,
            presentation: Option<String>,
        }
        let listed: Vec<Listed<'_>> = entries
            .iter()
            .map(|e| Listed {
                entry: e,
                presentation: e.presentation(),
            })
            .collect();
        let value = if args.knot.is_some() {
            serde_json::to_value(&listed[0])?
        } else {
            serde_json::to_value(&listed)?
        };
        println!("{}", serde_json::to_string_pretty(&value)?);
        return Ok(Outcome::Ok);
    }
    for e in &entries {
        println!(
            "{:<10} Δ = {:<32} {}",
            e.name,
            e.alexander_poly().to_string(),
            if e.two_bridge { "two-bridge" } else { "" }
        );
        if args.knot.is_some() {
            if let Some(text) = e.presentation() {
                print!("{text}");
            }
        }
    }
    Ok(Outcome::Ok)
}

fn run_sweep(args: SweepArgs) -> Result<Outcome> {
    let primes = args
        .primes
        .split_whitespace()
        .map(|s| {
            let p: u64 = s.parse().with_context(|| format!("`{s}` is not an integer"))?;
            Ok(PrimeModulus::new(p)?)
        })
        .collect::<Result<Vec<_>>>()?;
    if primes.is_empty() {
        bail!("--primes must list at least one prime");
    }
    let knots = if args.knot.is_empty() {
        CATALOG.iter().map(KnotInput::Catalog).collect()
    } else {
        args.knot
            .iter()
            .map(|n| catalog_entry(n).map(KnotInput::Catalog))
            .collect::<Result<Vec<_>>>()?
    };
    let opts = AnalyzeOptions {
        verify: !args.no_verify,
        seed: args.seed,
    };
    let mut rows = Vec::new();
    let mut failed = false;
    for result in sweep(&knots, &primes, opts) {
        match result {
            Ok(report) => {
                failed |= report.verdict.is_failure();
                rows.push(SweepRow::from(&report));
            }
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&serde_json::to_value(&rows)?)?);
    } else {
        print!("{}", sweep_table(&rows));
    }
    Ok(if failed { Outcome::Mismatch } else { Outcome::Ok })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Catalog(args) => run_catalog(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
