//! negafib: evaluation, zero reports, identity sweeps and the bound chain
//! for the k-step Fibonacci sequence at negative indices.
//!
//! Exit codes: 0 all checks passed, 1 usage error, 2 verification failure.

mod cache;
mod output;

use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;

use negafib_core::bounds::{char_roots, k_upper_bound_cascade, n_bound_for_k, root_ratio_gap_check};
use negafib_core::report::Status;
use negafib_core::verify as suites;
use negafib_core::{lower_bound_n, zero_report_from_scan, zero_scan, SequenceParams};

use output::{EvalRow, Format, Rendered};

#[derive(Parser, Debug)]
#[command(
    name = "negafib",
    version,
    about = "Exact engine for the k-step Fibonacci sequence at negative indices",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits for the analytic commands (minimum 64).
    /// Falls back to NEGAFIB_PRECISION, then 192.
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Output format; json is canonical, csv and table are lossy views.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cache directory for zero scans (append-only, keyed by k, window and
    /// engine version). Results are identical with and without it.
    #[arg(long, global = true)]
    cache: Option<std::path::PathBuf>,

    /// Worker threads for sweeps (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate H_n exactly (spot values or ranges).
    Eval(EvalArgs),
    /// Zero-set report for one order, or a multiplicity sweep.
    Zeros(ZerosArgs),
    /// Run an identity/verification suite.
    Verify(VerifyArgs),
    /// Analytic bounds: the absolute-bound chain and per-k thresholds.
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Order k, single value or inclusive range a..b.
    #[arg(short, long)]
    k: RangeArg,
    /// Index n, single value or inclusive range a..b.
    #[arg(short, long)]
    n: RangeArg,
    /// Evaluation route.
    #[arg(long, value_enum, default_value_t = Method::Iter)]
    method: Method,
    /// Run all three routes and fail (exit 2) on any mismatch.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Args, Debug)]
struct ZerosArgs {
    /// Order k for a single report.
    #[arg(short, long, conflicts_with = "sweep")]
    k: Option<u32>,
    /// Inclusive range a..b of orders to sweep.
    #[arg(long)]
    sweep: Option<RangeArg>,
    /// Enumeration window end (default 50 k^2).
    #[arg(short, long)]
    n: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite: theorem1 | lemma1 | lemma2 | lemma3 | lemma4 | lemma5 |
    /// parity | kummer | gap | all.
    #[arg(long)]
    suite: String,
    /// Order range for the order-indexed suites.
    #[arg(short, long)]
    k: Option<RangeArg>,
    /// Grid ceiling for the psi-identity and valuation suites.
    #[arg(long)]
    v_max: Option<u64>,
    /// Index ceiling for the sequence-indexed suites.
    #[arg(long)]
    n_max: Option<u64>,
    /// Block ceiling for the block-identity suites.
    #[arg(long)]
    b_max: Option<u64>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(subcommand)]
    which: BoundsCommand,
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// The three-step chain ending in the contradiction for odd k > 500.
    Cascade,
    /// Ceiling on any zero index for one order k >= 4.
    NMax {
        #[arg(short, long)]
        k: u32,
    },
    /// 2-adic floor 2^((k-1)/2) on extra zeros for odd k.
    Lower {
        #[arg(short, long)]
        k: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Iter,
    Matrix,
    Closed,
}

/// Inclusive "a..b" range or a single value.
#[derive(Copy, Clone, Debug)]
struct RangeArg {
    lo: u64,
    hi: u64,
}

impl std::str::FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| format!("invalid number: {t:?}"))
        };
        if let Some((a, b)) = s.split_once("..") {
            let lo = parse(a)?;
            let hi = parse(b.strip_prefix('=').unwrap_or(b))?;
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok(RangeArg { lo, hi })
        } else {
            let v = parse(s)?;
            Ok(RangeArg { lo: v, hi: v })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn effective_precision(cli: &Cli) -> anyhow::Result<u32> {
    let bits = match cli.precision {
        Some(p) => p,
        None => match std::env::var("NEGAFIB_PRECISION") {
            Ok(s) => s
                .parse::<u32>()
                .with_context(|| format!("NEGAFIB_PRECISION={s:?} is not a number"))?,
            Err(_) => 192,
        },
    };
    if bits < 64 {
        return Err(anyhow!("precision must be at least 64 bits (got {bits})"));
    }
    Ok(bits)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("configuring the worker pool")?;
    }
    let precision = effective_precision(&cli)?;
    match &cli.command {
        Command::Eval(args) => cmd_eval(&cli, args),
        Command::Zeros(args) => cmd_zeros(&cli, args),
        Command::Verify(args) => cmd_verify(&cli, args, precision),
        Command::Bounds(args) => cmd_bounds(&cli, args, precision),
    }
}

fn params(k: u64) -> anyhow::Result<SequenceParams> {
    let k = u32::try_from(k).map_err(|_| anyhow!("order k = {k} out of range"))?;
    Ok(SequenceParams::new(k)?)
}

fn cmd_eval(cli: &Cli, args: &EvalArgs) -> anyhow::Result<u8> {
    let mut rows: Vec<EvalRow> = Vec::new();
    let mut mismatches = 0u64;
    for k in args.k.lo..=args.k.hi {
        let p = params(k)?;
        let values = p.h_range(args.n.lo, args.n.hi)?;
        for (i, iter_value) in values.into_iter().enumerate() {
            let n = args.n.lo + i as u64;
            let h = if args.cross_check {
                let closed = p.h_closed(n);
                let matrix = p.h_matrix(n);
                if closed != iter_value || matrix != iter_value {
                    mismatches += 1;
                }
                iter_value
            } else {
                match args.method {
                    Method::Iter => iter_value,
                    Method::Closed => p.h_closed(n),
                    Method::Matrix => p.h_matrix(n),
                }
            };
            rows.push(EvalRow {
                k: p.k(),
                n,
                h: h.to_string(),
            });
        }
    }
    let rendered = output::render_eval(&rows, args.cross_check, mismatches);
    print!("{}", rendered.in_format(cli.format));
    Ok(if mismatches > 0 { 2 } else { 0 })
}

fn cmd_zeros(cli: &Cli, args: &ZerosArgs) -> anyhow::Result<u8> {
    let orders: Vec<u64> = match (&args.k, &args.sweep) {
        (Some(k), None) => vec![*k as u64],
        (None, Some(r)) => (r.lo..=r.hi).collect(),
        (None, None) => return Err(anyhow!("zeros needs -k K or --sweep a..b")),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let cache_dir = cli.cache.clone();
    let reports = orders
        .par_iter()
        .map(|&k| {
            let p = params(k)?;
            let window = args.n.unwrap_or(50 * k * k);
            let scan = match cache_dir
                .as_deref()
                .and_then(|dir| cache::load_scan(dir, p.k(), window))
            {
                Some(scan) => scan,
                None => {
                    let scan = zero_scan(&p, window);
                    if let Some(dir) = cache_dir.as_deref() {
                        cache::store_scan(dir, &scan)?;
                    }
                    scan
                }
            };
            Ok(zero_report_from_scan(&p, &scan))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let failed = reports.iter().any(|r| r.status != Status::Pass);
    print!(
        "{}",
        output::render_zero_reports(&reports).in_format(cli.format)
    );
    Ok(if failed { 2 } else { 0 })
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs, precision: u32) -> anyhow::Result<u8> {
    let reports = run_suites(args, precision)?;
    let failed = reports.iter().any(|r| !r.passed());
    print!(
        "{}",
        output::render_verifications(&reports).in_format(cli.format)
    );
    Ok(if failed { 2 } else { 0 })
}

fn run_suites(
    args: &VerifyArgs,
    precision: u32,
) -> anyhow::Result<Vec<negafib_core::VerificationReport>> {
    let range = |dflt: (u64, u64)| {
        let r = args.k.map_or(dflt, |r| (r.lo, r.hi));
        (r.0 as u32, r.1 as u32)
    };
    let one = |name: &str| -> anyhow::Result<negafib_core::VerificationReport> {
        Ok(match name {
            "theorem1" => {
                let (lo, hi) = range((2, 12));
                suites::verify_theorem1(lo, hi, args.n_max)?
            }
            "lemma1" => {
                let (lo, hi) = range((3, 12));
                suites::verify_lemma1(lo, hi)?
            }
            "lemma2" => {
                let (lo, hi) = range((3, 12));
                suites::verify_lemma2(lo, hi, args.b_max.unwrap_or(6))?
            }
            "lemma3" => {
                let v = args.v_max.unwrap_or(200);
                suites::verify_lemma3(v, args.n_max.unwrap_or(v), v)?
            }
            "lemma4" => {
                let (lo, hi) = range((3, 12));
                suites::verify_lemma4(lo, hi)?
            }
            "lemma5" => {
                let (lo, hi) = range((3, 12));
                suites::verify_lemma5(lo, hi, args.b_max.unwrap_or(6))?
            }
            "parity" => {
                let (lo, hi) = range((4, 12));
                suites::verify_parity(lo, hi, args.n_max.unwrap_or(2000))?
            }
            "kummer" => suites::verify_kummer(args.v_max.unwrap_or(4096))?,
            "gap" => {
                let (lo, hi) = range((4, 40));
                verify_gap(lo.max(4), hi, precision)?
            }
            other => return Err(anyhow!("unknown suite {other:?}")),
        })
    };
    const ALL: [&str; 9] = [
        "theorem1", "lemma1", "lemma2", "lemma3", "lemma4", "lemma5", "parity", "kummer", "gap",
    ];
    if args.suite == "all" {
        ALL.iter().map(|s| one(s)).collect()
    } else {
        Ok(vec![one(&args.suite)?])
    }
}

fn verify_gap(
    k_lo: u32,
    k_hi: u32,
    precision: u32,
) -> anyhow::Result<negafib_core::VerificationReport> {
    let ks: Vec<u32> = (k_lo..=k_hi).collect();
    let parts = ks
        .par_iter()
        .map(|&k| {
            let p = SequenceParams::new(k)?;
            let roots = char_roots(&p, precision)?;
            root_ratio_gap_check(&p, &roots)
        })
        .collect::<negafib_core::Result<Vec<_>>>()?;
    let mut merged = negafib_core::VerificationReport::new("gap");
    let mut min_margin = f64::INFINITY;
    for part in parts {
        merged.cases += part.cases;
        if let Some(m) = part.metrics.get("min_margin").and_then(|v| v.as_f64()) {
            min_margin = min_margin.min(m);
        }
        for v in part.violations {
            merged.violation(v);
        }
    }
    if min_margin.is_finite() {
        merged.metric("min_margin", min_margin);
    }
    merged.param("k_min", k_lo).param("k_max", k_hi);
    Ok(merged)
}

fn cmd_bounds(cli: &Cli, args: &BoundsArgs, precision: u32) -> anyhow::Result<u8> {
    let rendered: Rendered = match args.which {
        BoundsCommand::Cascade => {
            let report = k_upper_bound_cascade(precision)?;
            let ok = report.contradiction && report.steps.iter().all(|s| s.bound_valid);
            let r = output::render_cascade(&report);
            print!("{}", r.in_format(cli.format));
            return Ok(if ok { 0 } else { 2 });
        }
        BoundsCommand::NMax { k } => {
            let p = SequenceParams::new(k)?;
            let n = n_bound_for_k(&p, precision)?;
            output::render_n_bound(k, &n)
        }
        BoundsCommand::Lower { k } => {
            let p = SequenceParams::new(k)?;
            let b: BigInt = lower_bound_n(&p)?;
            output::render_lower_bound(k, &b)
        }
    };
    print!("{}", rendered.in_format(cli.format));
    Ok(0)
}
