//! Command-line interface: print Stirling/Whitney triangles, expand
//! generating functions, run Monte-Carlo moment estimates, and drive the
//! identity-verification suite.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use degenlab::dowling::{WhitneyKind, WhitneyTable};
use degenlab::genfun::{gf_coefficients, GfKind, GfSpec};
use degenlab::poisson::{estimate_deg_moment, PoissonSpec};
use degenlab::stirling::{stirling_table, DegParams, TriangleKind};
use degenlab::verify::{run_suite, CheckId, CheckReport, Grid, SuiteConfig};
use degenlab::{Rat, Result};

#[derive(Parser)]
#[command(
    name = "degenlab",
    version,
    about = "Exact degenerate Stirling/Bell/Whitney/Dowling/Charlier families, \
             their generating functions, and the identity-verification suite"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a Stirling or Whitney triangle as CSV or JSON
    Table(TableArgs),
    /// Expand a generating function; prints n!-normalized coefficients
    Series(SeriesArgs),
    /// Monte-Carlo estimate of E[(mX+r)_{n,λ}] against its closed form
    Mc(McArgs),
    /// Run identity checks over a parameter grid; nonzero exit on failure
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKindArg {
    /// Stirling numbers of the first kind (signed)
    S1,
    /// Stirling numbers of the second kind
    S2,
    /// Degenerate Stirling numbers of the first kind
    S1deg,
    /// Degenerate Stirling numbers of the second kind
    S2deg,
    /// Classical Whitney numbers of the second kind
    W,
    /// Classical Whitney numbers of the first kind
    V,
    /// Degenerate Whitney numbers of the second kind (r = 1)
    Wdeg,
    /// Degenerate r-Whitney numbers of the second kind
    Wrdeg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    kind: TableKindArg,
    /// Degeneracy step λ as "p/q" (ignored by classical kinds)
    #[arg(long, default_value = "0")]
    lambda: Rat,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 10)]
    nmax: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Args)]
struct SeriesArgs {
    /// Generating-function kind: exp-deg, log-deg, bell, deg-bell, s1-deg,
    /// s2-deg, deg-whitney, deg-dowling, deg-r-dowling, charlier
    #[arg(long)]
    kind: String,
    #[arg(long, default_value = "0")]
    lambda: Rat,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Block index for the column kinds (s1-deg, s2-deg, deg-whitney)
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = degenlab::genfun::DEFAULT_ORDER)]
    order: usize,
    /// Pin x to a rational; omitted keeps x symbolic
    #[arg(long)]
    x: Option<Rat>,
    /// Charlier parameter α as "p/q"
    #[arg(long)]
    alpha: Option<Rat>,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value = "0")]
    lambda: Rat,
    #[arg(long, default_value = "1")]
    alpha: Rat,
    /// Moment order
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check id (repeatable) or "all"; e.g. --check T8 --check GF_ALL
    #[arg(long, default_value = "all")]
    check: Vec<String>,
    #[arg(long)]
    nmax: Option<usize>,
    /// Comma-separated λ list, e.g. "0,1/2,-1/3,2,-5"
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    /// Offsets the recorded Monte-Carlo seeds and the Vandermonde pairs
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per Monte-Carlo cell
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Table(args) => table_cmd(args)?,
        Cmd::Series(args) => series_cmd(args)?,
        Cmd::Mc(args) => mc_cmd(args)?,
        Cmd::Verify(args) => return verify_cmd(args),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_csv_rows(nmax: usize, entry: impl Fn(usize, i64) -> Rat) {
    let header: Vec<String> = std::iter::once("n".to_string())
        .chain((0..=nmax).map(|k| k.to_string()))
        .collect();
    println!("{}", header.join(","));
    for n in 0..=nmax {
        let row: Vec<String> = std::iter::once(n.to_string())
            .chain((0..=nmax as i64).map(|k| entry(n, k).to_string()))
            .collect();
        println!("{}", row.join(","));
    }
}

fn table_cmd(args: TableArgs) -> Result<()> {
    let params = DegParams::new(args.lambda.clone(), args.m, args.r)?;
    match args.kind {
        TableKindArg::S1 | TableKindArg::S2 | TableKindArg::S1deg | TableKindArg::S2deg => {
            let kind = match args.kind {
                TableKindArg::S1 => TriangleKind::S1,
                TableKindArg::S2 => TriangleKind::S2,
                TableKindArg::S1deg => TriangleKind::S1Deg,
                TableKindArg::S2deg => TriangleKind::S2Deg,
                _ => unreachable!(),
            };
            let table = stirling_table(kind, &args.lambda, args.nmax);
            match args.format {
                TableFormat::Csv => print_csv_rows(args.nmax, |n, k| table.entry(n, k)),
                TableFormat::Json => print_json(&*table),
            }
        }
        TableKindArg::W | TableKindArg::V | TableKindArg::Wdeg | TableKindArg::Wrdeg => {
            let kind = match args.kind {
                TableKindArg::W => WhitneyKind::WClassical,
                TableKindArg::V => WhitneyKind::VClassical,
                TableKindArg::Wdeg => WhitneyKind::WDeg,
                TableKindArg::Wrdeg => WhitneyKind::WRDeg,
                _ => unreachable!(),
            };
            let table = WhitneyTable::build(kind, &params, args.nmax);
            match args.format {
                TableFormat::Csv => print_csv_rows(args.nmax, |n, k| table.entry(n, k)),
                TableFormat::Json => print_json(&table),
            }
        }
    }
    Ok(())
}

fn series_cmd(args: SeriesArgs) -> Result<()> {
    let kind = GfKind::from_str(&args.kind)?;
    let params = DegParams::new(args.lambda, args.m, args.r)?;
    let mut spec = GfSpec::new(kind, params, args.order);
    spec.k = args.k;
    spec.x = args.x;
    spec.alpha = args.alpha;
    let coeffs = gf_coefficients(&spec)?;
    print_json(&coeffs);
    Ok(())
}

#[derive(Serialize)]
struct McOutput {
    mean: f64,
    std_error: f64,
    n_samples: usize,
    seed: u64,
    target_exact: f64,
    pass: bool,
}

fn mc_cmd(args: McArgs) -> Result<()> {
    let params = DegParams::new(args.lambda, args.m, args.r)?;
    let rate = args.alpha.checked_div(&params.m_rat())?.to_f64();
    let spec = PoissonSpec::new(rate, args.seed, args.samples)?;
    let est = estimate_deg_moment(&params, args.n, &args.alpha, &spec)?;
    let out = McOutput {
        mean: est.mean,
        std_error: est.std_error,
        n_samples: est.n_samples,
        seed: est.seed,
        target_exact: est.target_exact,
        pass: est.within(5.0),
    };
    print_json(&out);
    Ok(())
}

fn parse_lambdas(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(Rat::from_str)
        .collect()
}

fn verify_cmd(args: VerifyArgs) -> Result<ExitCode> {
    let mut grid = Grid::default();
    if let Some(nmax) = args.nmax {
        grid = grid.with_nmax(nmax);
    }
    if let Some(lambdas) = &args.lambdas {
        grid.lambdas = parse_lambdas(lambdas)?;
    }
    grid.seed = args.seed;
    grid.mc_samples = args.samples;

    let checks: Vec<CheckId> = if args.check.iter().any(|c| c.eq_ignore_ascii_case("all")) {
        CheckId::DEFAULT_SUITE.to_vec()
    } else {
        args.check
            .iter()
            .map(|c| c.parse())
            .collect::<Result<Vec<_>>>()?
    };

    let report = run_suite(&SuiteConfig { checks, grid });
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match args.format {
        ReportFormat::Json => print_json(&report.reports),
        ReportFormat::Csv => {
            println!("check_id,cells_run,cells_failed,seconds,witness");
            for r in &report.reports {
                println!(
                    "{},{},{},{:.3},{}",
                    r.check_id,
                    r.cells_run,
                    r.cells_failed,
                    r.seconds,
                    r.witness
                        .as_ref()
                        .map(|w| w.cell.replace(',', ";"))
                        .unwrap_or_default()
                );
            }
        }
        ReportFormat::Markdown => {
            println!("| check | cells | failed | seconds | witness |");
            println!("|---|---|---|---|---|");
            for r in &report.reports {
                println!(
                    "| {} | {} | {} | {:.3} | {} |",
                    r.check_id,
                    r.cells_run,
                    r.cells_failed,
                    r.seconds,
                    r.witness.as_ref().map(|w| w.cell.as_str()).unwrap_or("")
                );
            }
        }
    }
    print_failures(&report.reports);
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn print_failures(reports: &[CheckReport]) {
    for r in reports {
        if let Some(w) = &r.witness {
            eprintln!(
                "FAIL {}: {} cells failed; first witness at {} (lhs = {}, rhs = {})",
                r.check_id, r.cells_failed, w.cell, w.lhs, w.rhs
            );
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serialization")
    );
}
