use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use koszul_core::arith::DEFAULT_PRIMES;
use koszul_core::series::TruncatedSeries;
use koszul_core::trees::DEFAULT_BUDGET;
use serde::Serialize;

mod commands;
mod report;

use commands::{Method, Profile};
use report::{to_csv, Outcome, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] koszul_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use koszul_core::Error as E;
        match self {
            CliError::Core(E::Verification(_) | E::PrimeDisagreement(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

/// Exact verification of the non-Koszulness and positivity computations.
#[derive(Parser, Debug)]
#[command(name = "koszul", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on the number of trees or matrix columns any single step may build.
    #[arg(long, global = true, env = "KOSZUL_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Check that the differential of nu is n! times the left comb.
    VerifyBoundary {
        #[arg(long, value_parser = parse_n)]
        n: usize,
    },
    /// Build c_n and check that it is a cycle carrying the whistle-blower.
    Cycle {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        /// Also solve the exact linear system showing c_n is not a boundary.
        #[arg(long)]
        check_nonboundary: bool,
    },
    /// Compositional inverse of a series with zero constant term.
    #[command(group(ArgGroup::new("input").required(true).args(["coeffs", "file"])))]
    Invert {
        #[command(flatten)]
        #[serde(flatten)]
        input: SeriesInput,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "lagrange")]
        method: Method,
    },
    /// Minimal model generators of a Poincare series and the gap they show.
    Gap {
        #[arg(long)]
        gp_file: PathBuf,
        #[arg(long, value_parser = parse_n)]
        n: usize,
    },
    /// First negative coefficient of a series, or of its inverse.
    #[command(group(ArgGroup::new("input").required(true).args(["coeffs", "file", "trinomial"])))]
    ScanNegative {
        #[command(flatten)]
        #[serde(flatten)]
        input: SeriesInput,
        /// Use t - t^n + t^(2n-1).
        #[arg(long, value_parser = parse_n)]
        trinomial: Option<usize>,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        invert: bool,
    },
    /// Dimensions of the operad with one relation, weight by weight.
    Poincare {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        #[arg(long)]
        max_weight: usize,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PRIMES)]
        primes: Vec<u64>,
        /// Also compute ranks over the rationals up to this weight.
        #[arg(long, default_value_t = 0)]
        exact_upto: usize,
        /// Write each consequence matrix as triplets into this directory.
        #[arg(long)]
        export_matrix: Option<PathBuf>,
    },
    /// Check or rediscover the order-2 recurrence for a_n.
    #[command(group(ArgGroup::new("mode").required(true).args(["verify", "guess"])))]
    Recurrence {
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        guess: bool,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 20)]
        degree: usize,
        #[arg(long)]
        terms: Option<usize>,
        /// Search degrees 0..=degree and report the first that works.
        #[arg(long)]
        minimal: bool,
        /// Perturb one coefficient of the embedded recurrence.
        #[arg(long)]
        tamper: bool,
    },
    /// Radius of convergence of the inverse of t - t^8 + t^15.
    Radius,
    /// Step-by-step positivity certificate for a_n.
    Positivity {
        #[arg(long, default_value_t = 300)]
        terms: usize,
        #[arg(long)]
        tamper: bool,
    },
    /// Every check, under a quick or full profile.
    RunAll {
        #[arg(long, value_enum, default_value = "quick")]
        profile: Profile,
        #[arg(long)]
        tamper: bool,
    },
}

#[derive(clap::Args, Debug, Serialize)]
struct SeriesInput {
    /// Comma separated coefficients c0,c1,...
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// File with one "exponent coefficient" line per term.
    #[arg(long)]
    file: Option<PathBuf>,
}

fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 2 {
        return Err(format!("n must be at least 2 (got {n})"));
    }
    Ok(n)
}

impl SeriesInput {
    fn read(&self, order: usize) -> Result<TruncatedSeries, CliError> {
        match (&self.coeffs, &self.file) {
            (Some(c), _) => Ok(TruncatedSeries::parse_list(c, Some(order))?),
            (_, Some(p)) => Ok(TruncatedSeries::parse(
                &std::fs::read_to_string(p)?,
                Some(order),
            )?),
            _ => Err(CliError::Usage(
                "one of --coeffs or --file is required".into(),
            )),
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyBoundary { .. } => "verify-boundary",
            Command::Cycle { .. } => "cycle",
            Command::Invert { .. } => "invert",
            Command::Gap { .. } => "gap",
            Command::ScanNegative { .. } => "scan-negative",
            Command::Poincare { .. } => "poincare",
            Command::Recurrence { .. } => "recurrence",
            Command::Radius => "radius",
            Command::Positivity { .. } => "positivity",
            Command::RunAll { .. } => "run-all",
        }
    }

    fn execute(&self, budget: u128) -> Result<Outcome, CliError> {
        match self {
            Command::VerifyBoundary { n } => commands::verify_boundary(*n, budget),
            Command::Cycle {
                n,
                check_nonboundary,
            } => commands::cycle(*n, *check_nonboundary, budget),
            Command::Invert {
                input,
                order,
                method,
            } => commands::invert(&input.read(*order)?, *method),
            Command::Gap { gp_file, n } => {
                let gp = TruncatedSeries::parse(&std::fs::read_to_string(gp_file)?, None)?;
                commands::gap(&gp, *n)
            }
            Command::ScanNegative {
                input,
                trinomial,
                order,
                invert,
            } => {
                let f = match trinomial {
                    Some(n) => TruncatedSeries::koszul_dual_trinomial(*n, *order),
                    None => input.read(*order)?,
                };
                commands::scan_negative(&f, *invert)
            }
            Command::Poincare {
                n,
                max_weight,
                primes,
                exact_upto,
                export_matrix,
            } => commands::poincare(
                *n,
                *max_weight,
                primes,
                *exact_upto,
                export_matrix.as_deref(),
                budget,
            ),
            Command::Recurrence {
                verify,
                order,
                degree,
                terms,
                minimal,
                tamper,
                ..
            } => {
                if *verify {
                    commands::recurrence_verify(terms.unwrap_or(300), *tamper)
                } else {
                    let terms = terms.unwrap_or((order + 1) * (degree + 1) + order + 8);
                    commands::recurrence_guess(*order, *degree, terms, *minimal, *tamper)
                }
            }
            Command::Radius => commands::radius(),
            Command::Positivity { terms, tamper } => commands::positivity(*terms, *tamper),
            Command::RunAll { profile, tamper } => commands::run_all(*profile, *tamper, budget),
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command.execute(cli.budget) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("koszul {}: {e}", cli.command.name());
            return ExitCode::from(e.exit_code());
        }
    };
    let inputs = serde_json::to_value(&cli.command).expect("serializable");
    let report = RunReport::new(cli.command.name(), inputs, &outcome);
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Csv => to_csv(&outcome),
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("koszul: {e}");
        return ExitCode::from(2);
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!(
            "koszul {}: check failed: {} ({})",
            report.subcommand, c.name, c.detail
        );
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
