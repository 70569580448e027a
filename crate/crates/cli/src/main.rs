//! Command-line frontend: table generation, exhaustive interval scans, gap
//! certificates, spacing grids, and bound evaluation.
//!
//! Exit codes: 0 success/pass, 1 verification failure or golden mismatch,
//! 2 usage error, 3 budget refusal.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kfree_core::bounds::{
    self, kfree_coefficient, n0_table, n0_table_csv, squarefree_coefficient, theorem_k_coefficient,
};
use kfree_core::field::Field;
use kfree_core::gap::{build_gap_interval, gap_cost, verify_gap_certificate, GapCertificate};
use kfree_core::intervals::{certify_all_intervals, count_non_k_free, find_k_free, Interval};
use kfree_core::irreducibles::{env_cache_root, IrreducibleTable};
use kfree_core::poly::Poly;
use kfree_core::spacing::{run_spacing_grid, SpacingGridConfig};

const EXIT_OK: u8 = 0;
const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "kfree", version, about = "k-free polynomials in short intervals over GF(q)")]
struct Cli {
    /// Worker threads for sharded scans (default: all cores). Results do not
    /// depend on the worker count.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cache directory for irreducible tables (overrides KFREE_CACHE_DIR).
    #[arg(long, global = true)]
    cache_root: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the n0(q, h) table; with --golden, compare against the embedded
    /// published values and fail on any mismatch.
    Table1(Table1Args),
    /// Exhaustively certify that every length-h interval of degree-n centers
    /// contains a k-free polynomial.
    Scan(ScanArgs),
    /// Count (non-)k-free members of one interval and report the first
    /// k-free member.
    Count(CountArgs),
    /// Build, save, and verify a certificate for an interval with no k-free
    /// polynomial.
    Gap(GapArgs),
    /// Verify a saved gap certificate.
    VerifyGap(VerifyGapArgs),
    /// Run the randomized spacing-law grid.
    Spacing(SpacingArgs),
    /// Evaluate the explicit bound coefficients for one (q, k, n, h).
    Bounds(BoundsArgs),
    /// Build the on-disk cache of irreducible tables.
    IrredCache(IrredCacheArgs),
}

#[derive(Args)]
struct Table1Args {
    /// Multiplicity threshold.
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Prime powers (columns); defaults to the published table's columns.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u32>,
    /// Interval lengths (rows); defaults to 1..=8.
    #[arg(long, value_delimiter = ',')]
    h: Vec<u32>,
    /// Compare against the embedded published table (k = 2 only).
    #[arg(long)]
    golden: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    h: usize,
    /// Budget in member factorizations (q^n per scan); larger scans are
    /// refused with a work estimate.
    #[arg(long, default_value_t = 1u128 << 26)]
    budget: u128,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    h: usize,
    /// Interval center in canonical text encoding; defaults to x^n.
    #[arg(long)]
    center: Option<String>,
}

#[derive(Args)]
struct GapArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    h: usize,
    /// Write the certificate JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyGapArgs {
    /// Certificate file produced by `gap --out`.
    file: PathBuf,
}

#[derive(Args)]
struct SpacingArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 3, 4, 5, 7, 9])]
    q: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 3, 4])]
    k: Vec<u32>,
    #[arg(long, default_value_t = 14)]
    n_max: usize,
    /// Random centers per (q, k, n, h) cell.
    #[arg(long, default_value_t = 200)]
    trials: u32,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    h: u32,
}

#[derive(Args)]
struct IrredCacheArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    max_d: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        // Ignore the error when a pool already exists (e.g. under tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                kfree_core::Error::TooLarge(_) => EXIT_BUDGET,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn header(cli: &Cli, command: &str, config: serde_json::Value) {
    eprintln!(
        "kfree v{} command={} format={} config={}",
        env!("CARGO_PKG_VERSION"),
        command,
        match cli.format {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        },
        config
    );
}

fn cache_root(cli: &Cli) -> Option<PathBuf> {
    cli.cache_root.clone().or_else(env_cache_root)
}

fn dispatch(cli: &Cli) -> kfree_core::Result<u8> {
    match &cli.command {
        Command::Table1(args) => cmd_table1(cli, args),
        Command::Scan(args) => cmd_scan(cli, args),
        Command::Count(args) => cmd_count(cli, args),
        Command::Gap(args) => cmd_gap(cli, args),
        Command::VerifyGap(args) => cmd_verify_gap(cli, args),
        Command::Spacing(args) => cmd_spacing(cli, args),
        Command::Bounds(args) => cmd_bounds(cli, args),
        Command::IrredCache(args) => cmd_irred_cache(cli, args),
    }
}

const TABLE1_QS: [u32; 11] = [2, 3, 4, 5, 7, 8, 9, 11, 19, 25, 27];

fn cmd_table1(cli: &Cli, args: &Table1Args) -> kfree_core::Result<u8> {
    let qs: Vec<u32> = if args.q.is_empty() { TABLE1_QS.to_vec() } else { args.q.clone() };
    let hs: Vec<u32> = if args.h.is_empty() { (1..=8).collect() } else { args.h.clone() };
    header(
        cli,
        "table1",
        serde_json::json!({"k": args.k, "q": qs, "h": hs, "golden": args.golden}),
    );
    for &q in &qs {
        Field::of_order(q)?;
    }

    if args.golden {
        if args.k != 2 {
            return Err(kfree_core::Error::InvalidArgument(
                "the golden table covers k = 2 only".into(),
            ));
        }
        let (matched, mismatches) = bounds::check_against_reference()?;
        match cli.format {
            Format::Json => println!(
                "{}",
                serde_json::json!({"matched": matched, "mismatches": mismatches})
            ),
            _ => {
                println!("golden table: {matched} entries matched, {} mismatches", mismatches.len());
                for m in &mismatches {
                    println!("  q={} h={}: expected {}, computed {}", m.q, m.h, m.expected, m.computed);
                }
            }
        }
        return Ok(if mismatches.is_empty() { EXIT_OK } else { EXIT_MISMATCH });
    }

    let entries = n0_table(args.k, &qs, &hs)?;
    match cli.format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&entries)?);
        }
        Format::Csv => print!("{}", n0_table_csv(&entries)),
        Format::Text => {
            for line in n0_table_csv(&entries).lines() {
                println!("{}", line.replace(',', "\t"));
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_scan(cli: &Cli, args: &ScanArgs) -> kfree_core::Result<u8> {
    header(
        cli,
        "scan",
        serde_json::json!({"q": args.q, "k": args.k, "n": args.n, "h": args.h, "budget": args.budget.to_string()}),
    );
    let field = Field::of_order(args.q)?;
    // A full scan visits q^n members, each costing roughly four
    // division-sized passes in the multiplicity decomposition.
    let work = (args.q as u128).checked_pow(args.n as u32).and_then(|m| m.checked_mul(4));
    match work {
        Some(w) if w <= args.budget => {}
        _ => {
            let estimate = work
                .map(|w| w.to_string())
                .unwrap_or_else(|| format!("4 * {}^{} (overflows u128)", args.q, args.n));
            return Err(kfree_core::Error::TooLarge(format!(
                "scan needs about {estimate} factorization passes, budget is {}; raise --budget to proceed",
                args.budget
            )));
        }
    }
    let report = certify_all_intervals(&field, args.n, args.h, args.k)?;
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        _ => {
            if report.pass {
                println!(
                    "pass: all {} intervals (q={} k={} n={} h={}) contain a k-free member [{} ms]",
                    report.intervals_scanned, args.q, args.k, args.n, args.h, report.elapsed_ms
                );
            } else {
                println!(
                    "FAIL: interval centered at {} has no k-free member",
                    report.counterexample.as_ref().unwrap().to_text()
                );
            }
        }
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_count(cli: &Cli, args: &CountArgs) -> kfree_core::Result<u8> {
    header(
        cli,
        "count",
        serde_json::json!({"q": args.q, "k": args.k, "n": args.n, "h": args.h, "center": args.center}),
    );
    let field = Field::of_order(args.q)?;
    let center = match &args.center {
        Some(text) => Poly::parse(&field, text)?,
        None => Poly::monomial(&field.one(), args.n),
    };
    if center.degree() != Some(args.n) {
        return Err(kfree_core::Error::InvalidArgument(format!(
            "center has degree {:?}, expected {}",
            center.degree(),
            args.n
        )));
    }
    let interval = Interval::new(center, args.h)?;
    let counts = count_non_k_free(&interval, args.k)?;
    let first = find_k_free(&interval, args.k)?;
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "q": args.q, "k": args.k, "n": args.n, "h": args.h,
                "center": interval.center().to_text(),
                "size": interval.size().to_string(),
                "non_k_free": counts.non_k_free.to_string(),
                "k_free": counts.k_free.to_string(),
                "first_k_free": first.map(|p| p.to_text()),
            })
        ),
        _ => {
            println!(
                "interval size {}: {} non-k-free, {} k-free",
                interval.size(),
                counts.non_k_free,
                counts.k_free
            );
            match first {
                Some(p) => println!("first k-free member: {}", p.to_text()),
                None => println!("no k-free member"),
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_gap(cli: &Cli, args: &GapArgs) -> kfree_core::Result<u8> {
    header(cli, "gap", serde_json::json!({"q": args.q, "k": args.k, "h": args.h, "out": args.out}));
    let field = Field::of_order(args.q)?;
    let mut table = match cache_root(cli) {
        Some(root) => IrreducibleTable::with_cache_root(&field, root),
        None => IrreducibleTable::new(&field),
    };
    let cert = build_gap_interval(&mut table, args.k, args.h)?;
    if let Some(path) = &args.out {
        std::fs::write(path, cert.to_json_string())?;
    }
    let verdict = verify_gap_certificate(&cert);
    let cost = gap_cost(&field, args.k, args.h).ok();
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "q": args.q, "k": args.k, "h": args.h,
                "congruences": cert.assignments.len(),
                "modulus_degree": cert.modulus.degree(),
                "crt_solution": cert.crt_solution.to_text(),
                "verified": verdict.ok,
                "failures": verdict.failures,
                "cost": cost,
            })
        ),
        _ => {
            println!(
                "certificate: {} congruences, modulus degree {}, F = {}",
                cert.assignments.len(),
                cert.modulus.degree().unwrap_or(0),
                cert.crt_solution.to_text()
            );
            if let Some(cost) = &cost {
                println!(
                    "cost estimate: ell={} m0={} m1={} m={} delta(m)={:.2}",
                    cost.ell, cost.m0, cost.m1, cost.m, cost.delta_m
                );
            }
            println!("verified: {}", verdict.ok);
            for failure in &verdict.failures {
                println!("  {failure}");
            }
        }
    }
    Ok(if verdict.ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_verify_gap(cli: &Cli, args: &VerifyGapArgs) -> kfree_core::Result<u8> {
    header(cli, "verify-gap", serde_json::json!({"file": args.file}));
    let text = std::fs::read_to_string(&args.file)?;
    let cert = GapCertificate::from_json_str(&text)?;
    let verdict = verify_gap_certificate(&cert);
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&verdict)?),
        _ => {
            println!("verified: {}", verdict.ok);
            for failure in &verdict.failures {
                println!("  {failure}");
            }
        }
    }
    Ok(if verdict.ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_spacing(cli: &Cli, args: &SpacingArgs) -> kfree_core::Result<u8> {
    header(
        cli,
        "spacing",
        serde_json::json!({
            "q": args.q, "k": args.k, "n_max": args.n_max,
            "trials": args.trials, "seed": args.seed,
        }),
    );
    for &q in &args.q {
        Field::of_order(q)?;
    }
    let cfg = SpacingGridConfig {
        qs: args.q.clone(),
        ks: args.k.clone(),
        n_max: args.n_max,
        trials: args.trials,
        seed: args.seed,
        ..Default::default()
    };
    let summary = run_spacing_grid(&cfg)?;
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&summary)?),
        _ => {
            println!(
                "{} cells, {} reports, {} skipped sub-cells, {} violations",
                summary.cells,
                summary.reports,
                summary.skipped_subcells,
                summary.violations.len()
            );
            for v in &summary.violations {
                println!(
                    "  q={} k={} n={} h={} seed={} center={}: {} (d={}) {}",
                    v.q, v.k, v.n, v.h, v.seed, v.center, v.violation.rule, v.violation.d,
                    v.violation.detail
                );
            }
        }
    }
    Ok(if summary.violations.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_bounds(cli: &Cli, args: &BoundsArgs) -> kfree_core::Result<u8> {
    header(
        cli,
        "bounds",
        serde_json::json!({"q": args.q, "k": args.k, "n": args.n, "h": args.h}),
    );
    let field = Field::of_order(args.q)?;
    let squarefree =
        if args.k == 2 { squarefree_coefficient(&field, args.n, args.h).ok() } else { None };
    let general = kfree_coefficient(&field, args.k, args.n, args.h).ok();
    let differencing = theorem_k_coefficient(&field, args.k, args.n, args.h).ok();
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "squarefree": squarefree,
                "k_free": general,
                "differencing": differencing,
            })
        ),
        _ => {
            let show = |name: &str, b: &Option<kfree_core::bounds::BoundBreakdown>| match b {
                Some(b) => println!(
                    "{name}: sigma1={:.6} sigma2={:.6} sigma3={:.6} total={:.6}{}",
                    b.sigma1,
                    b.sigma2,
                    b.sigma3,
                    b.total_coefficient,
                    if b.total_coefficient < 1.0 { " (< 1: k-free member certified)" } else { "" }
                ),
                None => println!("{name}: not applicable"),
            };
            show("squarefree", &squarefree);
            show("k-free", &general);
            show("differencing", &differencing);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_irred_cache(cli: &Cli, args: &IrredCacheArgs) -> kfree_core::Result<u8> {
    header(cli, "irred-cache", serde_json::json!({"q": args.q, "max_d": args.max_d}));
    let field = Field::of_order(args.q)?;
    let root = cache_root(cli).ok_or_else(|| {
        kfree_core::Error::InvalidArgument(
            "set --cache-root or KFREE_CACHE_DIR for the cache location".into(),
        )
    })?;
    let mut table = IrreducibleTable::with_cache_root(&field, root);
    for d in 1..=args.max_d {
        let count = table.enumerate(d).len();
        println!("q={} d={d}: {count} irreducibles cached", args.q);
    }
    Ok(EXIT_OK)
}
