//! Command-line front end.
//!
//! Estimation commands (`hs`, `es`, `endpoints`, `table`) take a ring and an
//! ideal pair on the command line and print sampled values with their
//! extrapolation. Checking commands (`check`, `suite`) run statement checks
//! from a TOML suite file and emit a CSV report. Exit status: 0 when every
//! check passes (outright or in the limit), 1 when any check fails or is
//! inconclusive, 2 when any check could not run at all.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smult_core::monomial::Monomial;
use smult_core::ratio::{parse_rat, rat_decimal, rat_display};
use smult_core::ring::PolyRelation;
use smult_core::{
    e_estimate, endpoint_multiplicities, h_estimate, Error, HEstimate, HQuery, ModuleSpec,
    MonomialIdeal, Result, RingPresentation,
};
use smult_cli::{csv_report, human_summary, load_suite, run_all, table_csv, CheckReport, TheoremId};

#[derive(Parser)]
#[command(
    name = "smult",
    about = "h-function and s-multiplicity estimates and statement checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the normalized h-function and extrapolate.
    Hs(EstimateArgs),
    /// Sample the s-multiplicity (h normalized by the cut-cube volume).
    Es(EstimateArgs),
    /// Estimate both endpoint multiplicities (bracket-power and
    /// ordinary-power limits) of one ideal.
    Endpoints(EndpointArgs),
    /// Emit the sample table for one query as CSV.
    Table(TableArgs),
    /// Run the checks for one statement from a suite file.
    Check(CheckArgs),
    /// Run every check in a suite file and write the CSV report.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct RingArgs {
    /// Ring presentation: a path to a presentation file, or the
    /// presentation text itself.
    #[arg(long)]
    ring: String,
    /// Override the characteristic of the presentation.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args)]
struct PairArgs {
    /// Generators of the first ideal, comma separated (default: all
    /// variables).
    #[arg(long)]
    i: Option<String>,
    /// Generators of the second ideal, comma separated (default: all
    /// variables).
    #[arg(long)]
    j: Option<String>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[command(flatten)]
    pair: PairArgs,
    /// The interpolation parameter, as a rational like 3/2.
    #[arg(long)]
    s: String,
    /// Largest prime-power exponent to sample (e runs from 1).
    #[arg(long, default_value_t = 2)]
    e_max: u32,
}

#[derive(Args)]
struct EndpointArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Generators of the ideal, comma separated (default: all variables).
    #[arg(long)]
    i: Option<String>,
    #[arg(long, default_value_t = 2)]
    e_max: u32,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    s: String,
    #[arg(long, default_value_t = 2)]
    e_max: u32,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Statement identifier, e.g. T4.2.
    theorem: String,
    /// Suite file declaring rings, constructions, ideals, and checks.
    #[arg(long)]
    config: PathBuf,
    /// Override the tolerance of the selected checks.
    #[arg(long)]
    tolerance: Option<String>,
    /// Worker thread budget.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the CSV report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite file declaring rings, constructions, ideals, and checks.
    config: PathBuf,
    #[arg(long)]
    workers: Option<usize>,
    /// Where the CSV report goes.
    #[arg(long, default_value = "report.csv")]
    out: PathBuf,
}

fn load_ring(args: &RingArgs) -> Result<RingPresentation> {
    let text = if Path::new(&args.ring).exists() {
        std::fs::read_to_string(&args.ring)
            .map_err(|e| Error::MissingInput(format!("ring file {}: {e}", args.ring)))?
    } else {
        args.ring.clone()
    };
    let ring = RingPresentation::parse_spec(&text)?;
    match args.p {
        None => Ok(ring),
        Some(p) => {
            let polys = ring
                .poly_relations()
                .iter()
                .map(|f| PolyRelation::new(f.terms().to_vec(), p, f.is_parameter()))
                .collect::<Result<Vec<_>>>()?;
            RingPresentation::new(
                p,
                ring.labels().to_vec(),
                ring.monomial_relations().clone(),
                polys,
                ring.declared_dim(),
            )
        }
    }
}

fn parse_ideal(text: Option<&String>, ring: &RingPresentation) -> Result<MonomialIdeal> {
    match text {
        None => Ok(ring.maximal_ideal()),
        Some(list) => {
            let gens = list
                .split(',')
                .map(|part| Monomial::parse(part, ring.labels()))
                .collect::<Result<Vec<_>>>()?;
            MonomialIdeal::new(ring.vars(), gens)
        }
    }
}

fn build_query(
    ring_args: &RingArgs,
    pair: &PairArgs,
    s: &str,
    e_max: u32,
) -> Result<HQuery> {
    let ring = load_ring(ring_args)?;
    let i = parse_ideal(pair.i.as_ref(), &ring)?;
    let j = parse_ideal(pair.j.as_ref(), &ring)?;
    let s = parse_rat(s)?;
    let module = ModuleSpec::free(ring.vars());
    HQuery::new(ring, module, i, j, s, (1..=e_max).collect())
}

fn print_estimate(name: &str, estimate: &HEstimate) {
    const DIGITS: u32 = 12;
    println!("{name}:");
    for sample in &estimate.samples {
        println!(
            "  e={} q={} length={} value={} ~ {}",
            sample.e,
            sample.q,
            sample.length,
            rat_display(&sample.normalized),
            rat_decimal(&sample.normalized, DIGITS)
        );
    }
    println!(
        "  richardson={} ~ {}",
        rat_display(&estimate.richardson),
        rat_decimal(&estimate.richardson, DIGITS)
    );
    println!(
        "  gap={} ~ {}",
        rat_display(&estimate.gap),
        rat_decimal(&estimate.gap, DIGITS)
    );
}

fn run_estimate(args: &EstimateArgs, scaled: bool) -> Result<()> {
    let query = build_query(&args.ring, &args.pair, &args.s, args.e_max)?;
    let estimate = if scaled { e_estimate(&query)? } else { h_estimate(&query)? };
    print_estimate(if scaled { "s-multiplicity" } else { "h-function" }, &estimate);
    Ok(())
}

fn run_endpoints(args: &EndpointArgs) -> Result<()> {
    let ring = load_ring(&args.ring)?;
    let i = parse_ideal(args.i.as_ref(), &ring)?;
    let module = ModuleSpec::free(ring.vars());
    let (hk, hsam) =
        endpoint_multiplicities(&ring, &module, &i, &(1..=args.e_max).collect::<Vec<_>>())?;
    print_estimate("bracket-power endpoint", &hk);
    print_estimate("ordinary-power endpoint", &hsam);
    Ok(())
}

fn run_table(args: &TableArgs) -> Result<()> {
    let query = build_query(&args.ring, &args.pair, &args.s, args.e_max)?;
    let estimate = h_estimate(&query)?;
    let csv = table_csv(&query.s, &estimate);
    match &args.out {
        None => print!("{csv}"),
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| Error::MissingInput(format!("writing {}: {e}", path.display())))?,
    }
    Ok(())
}

fn report_exit(reports: &[CheckReport]) -> ExitCode {
    if reports.iter().any(|r| r.error.is_some()) {
        ExitCode::from(2)
    } else if reports.iter().any(|r| !r.verdict.acceptable()) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn emit_reports(reports: &[CheckReport], out: Option<&Path>) -> Result<()> {
    print!("{}", human_summary(reports));
    if let Some(path) = out {
        std::fs::write(path, csv_report(reports))
            .map_err(|e| Error::MissingInput(format!("writing {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_check_command(args: &CheckArgs) -> Result<ExitCode> {
    let theorem = TheoremId::parse(&args.theorem)?;
    let mut suite = load_suite(&args.config)?;
    suite.checks.retain(|c| c.theorem == theorem);
    if suite.checks.is_empty() {
        return Err(Error::MissingInput(format!(
            "the suite file configures no {theorem} check"
        )));
    }
    if let Some(text) = &args.tolerance {
        let tol = parse_rat(text)?;
        for check in &mut suite.checks {
            check.tolerance = Some(tol.clone());
        }
    }
    let workers = args.workers.or(suite.workers);
    let reports = run_all(&suite.checks, workers);
    emit_reports(&reports, args.out.as_deref())?;
    Ok(report_exit(&reports))
}

fn run_suite_command(args: &SuiteArgs) -> Result<ExitCode> {
    let suite = load_suite(&args.config)?;
    if suite.checks.is_empty() {
        return Err(Error::MissingInput("the suite file configures no checks".into()));
    }
    let workers = args.workers.or(suite.workers);
    let reports = run_all(&suite.checks, workers);
    emit_reports(&reports, Some(&args.out))?;
    Ok(report_exit(&reports))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Hs(args) => run_estimate(args, false).map(|()| ExitCode::SUCCESS),
        Command::Es(args) => run_estimate(args, true).map(|()| ExitCode::SUCCESS),
        Command::Endpoints(args) => run_endpoints(args).map(|()| ExitCode::SUCCESS),
        Command::Table(args) => run_table(args).map(|()| ExitCode::SUCCESS),
        Command::Check(args) => run_check_command(args),
        Command::Suite(args) => run_suite_command(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
