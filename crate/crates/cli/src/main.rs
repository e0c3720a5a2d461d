mod harness;

use clap::{Args, Parser, Subcommand};
use countfft::counting::with_tally;
use countfft::hprime::{lemma_checks, partition};
use countfft::predict::Ratio;
use countfft::rng::PRNG_ID;
use harness::{gen_input, records_to_csv, records_to_json, verify_one, Algo, BenchRecord};
use serde::Serialize;
use std::fs;
use std::process::ExitCode;

const VERIFY_MAX_LOG2N: u32 = 12;
const MATRIX_VERIFY_MAX_LOG2N: u32 = 10;
const BENCH_MAX_LOG2N: u32 = 22;
const QUADRATIC_MAX_LOG2N: u32 = 12;

/// Operation-exact Walsh-Hadamard / FFT verification and count benchmarks.
#[derive(Parser)]
#[command(name = "countfft", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a transform against its brute-force oracle on seeded inputs.
    Verify(VerifyArgs),
    /// Run transforms under an operation tally and report counts.
    Bench(BenchArgs),
    /// Measured total/(N log2 N) per algorithm next to its leading constant.
    Table(TableArgs),
    /// Exact identity checks for the H' partition counts.
    Lemmas(LemmasArgs),
    /// Print the H' index partition as JSON.
    Partition(PartitionArgs),
}

#[derive(Args, Clone)]
struct RangeArgs {
    /// Size range as `a..b` (inclusive) or a single log2 size.
    #[arg(long)]
    log2n: Option<String>,
    /// Smallest log2 size (overrides --log2n).
    #[arg(long)]
    log2n_min: Option<u32>,
    /// Largest log2 size (overrides --log2n).
    #[arg(long)]
    log2n_max: Option<u32>,
}

impl RangeArgs {
    fn resolve(&self, default: (u32, u32)) -> Result<(u32, u32), String> {
        let mut range = default;
        if let Some(spec) = &self.log2n {
            range = parse_range(spec)?;
        }
        if let Some(min) = self.log2n_min {
            range.0 = min;
        }
        if let Some(max) = self.log2n_max {
            range.1 = max;
        }
        if range.0 > range.1 {
            return Err(format!("empty size range {}..{}", range.0, range.1));
        }
        Ok(range)
    }
}

fn parse_range(spec: &str) -> Result<(u32, u32), String> {
    let bad = |_| format!("bad size range {spec:?}; expected `a..b` or a single integer");
    match spec.split_once("..") {
        Some((a, b)) => Ok((a.parse().map_err(bad)?, b.parse().map_err(bad)?)),
        None => {
            let k: u32 = spec.parse().map_err(bad)?;
            Ok((k, k))
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Transform to verify.
    #[arg(long, value_enum)]
    algo: Algo,
    #[command(flatten)]
    range: RangeArgs,
    /// Seeded random inputs per size.
    #[arg(long, default_value_t = 20)]
    trials: u32,
    /// PRNG seed (splitmix64 streams derive from it).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Maximum allowed relative error; defaults to 1e-12 for WHTs, 1e-10
    /// otherwise.
    #[arg(long)]
    tol: Option<f64>,
    /// Draw small integer inputs instead of uniform [-1, 1).
    #[arg(long)]
    integer: bool,
    /// Verify this JSON vector (array of [re, im] pairs) instead of random
    /// trials; its length fixes the size.
    #[arg(long)]
    input: Option<String>,
    /// Also emit per-size records in this format.
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    /// Write emitted records here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// Transform to count.
    #[arg(long, value_enum)]
    algo: Algo,
    #[command(flatten)]
    range: RangeArgs,
    /// Seed recorded in the output rows.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    emit: Emit,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Largest log2 size to measure.
    #[arg(long, default_value_t = 16)]
    log2n_max: u32,
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct LemmasArgs {
    /// Largest log2 size in the sweep.
    #[arg(long, default_value_t = 30)]
    log2n_max: u32,
}

#[derive(Args)]
struct PartitionArgs {
    /// log2 of the partitioned length.
    #[arg(long)]
    log2n: u32,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Emit {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Table(args) => cmd_table(args),
        Command::Lemmas(args) => cmd_lemmas(args),
        Command::Partition(args) => cmd_partition(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_out(path: &Option<String>, payload: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, payload).map_err(|e| format!("cannot write {p}: {e}")),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let tol = args.tol.unwrap_or_else(|| args.algo.default_tol());

    if let Some(path) = &args.input {
        return verify_input_file(&args, path, tol);
    }

    let max = match args.algo {
        Algo::Hprime => MATRIX_VERIFY_MAX_LOG2N,
        _ => VERIFY_MAX_LOG2N,
    };
    let (lo, hi) = args.range.resolve((0, max))?;
    if hi > max {
        return Err(format!(
            "verify sizes for {} are capped at log2n = {max} (oracle cost)",
            args.algo.id()
        ));
    }

    eprintln!(
        "verify {} log2n={lo}..{hi} trials={} seed={} tol={tol:e} prng={PRNG_ID}{}",
        args.algo.id(),
        args.trials,
        args.seed,
        if args.integer { " integer" } else { "" },
    );
    let mut records = Vec::new();
    let mut all_ok = true;
    for log2n in lo..=hi {
        let mut worst = 0.0f64;
        let mut tally = None;
        for trial in 0..args.trials {
            let x = gen_input(args.algo, log2n, trial, args.seed, args.integer);
            if trial == 0 {
                let (err, t) = with_tally(|| verify_one(args.algo, &x));
                worst = worst.max(err.map_err(|e| e.to_string())?);
                tally = Some(t);
            } else {
                worst = worst.max(verify_one(args.algo, &x).map_err(|e| e.to_string())?);
            }
        }
        let ok = worst <= tol;
        all_ok &= ok;
        eprintln!(
            "  n=2^{log2n:<2} max_rel_err={worst:9.3e}  {}",
            if ok { "ok" } else { "FAIL" }
        );
        records.push(BenchRecord::from_tally(
            args.algo,
            log2n,
            tally.unwrap_or_default(),
            Some(worst),
            args.seed,
        ));
    }
    emit_records(&args.emit, &args.out, &records)?;
    eprintln!("{}", if all_ok { "PASS" } else { "FAIL" });
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn verify_input_file(args: &VerifyArgs, path: &str, tol: f64) -> Result<ExitCode, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(&text).map_err(|e| format!("bad input vector in {path}: {e}"))?;
    let x: Vec<countfft::complex::ComplexPair> = pairs
        .iter()
        .map(|p| countfft::complex::ComplexPair::new(p[0], p[1]))
        .collect();
    if x.is_empty() || !x.len().is_power_of_two() {
        return Err(format!("input length {} is not a power of two", x.len()));
    }
    let log2n = x.len().trailing_zeros();
    let max = match args.algo {
        Algo::Hprime => MATRIX_VERIFY_MAX_LOG2N,
        _ => VERIFY_MAX_LOG2N,
    };
    if log2n > max {
        return Err(format!(
            "verify sizes for {} are capped at log2n = {max} (oracle cost)",
            args.algo.id()
        ));
    }
    let (err, tally) = with_tally(|| verify_one(args.algo, &x));
    let err = err.map_err(|e| e.to_string())?;
    let ok = err <= tol;
    eprintln!(
        "verify {} input={path} n=2^{log2n} max_rel_err={err:.3e} tol={tol:e} {}",
        args.algo.id(),
        if ok { "ok" } else { "FAIL" }
    );
    let records = vec![BenchRecord::from_tally(
        args.algo,
        log2n,
        tally,
        Some(err),
        args.seed,
    )];
    emit_records(&args.emit, &args.out, &records)?;
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn emit_records(
    emit: &Option<Emit>,
    out: &Option<String>,
    records: &[BenchRecord],
) -> Result<(), String> {
    match emit {
        None => Ok(()),
        Some(Emit::Csv) => write_out(out, &records_to_csv(records)),
        Some(Emit::Json) => write_out(out, &records_to_json(records)),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, String> {
    let max = if args.algo.is_quadratic() {
        QUADRATIC_MAX_LOG2N
    } else {
        BENCH_MAX_LOG2N
    };
    let (lo, hi) = args.range.resolve((0, 16.min(max)))?;
    if hi > max {
        return Err(format!(
            "bench sizes for {} are capped at log2n = {max}",
            args.algo.id()
        ));
    }
    let mut records = Vec::new();
    for log2n in lo..=hi {
        let x = gen_input(args.algo, log2n, 0, args.seed, false);
        let record = BenchRecord::measure(args.algo, log2n, &x, None, args.seed)
            .map_err(|e| e.to_string())?;
        records.push(record);
    }
    match args.emit {
        Emit::Csv => write_out(&args.out, &records_to_csv(&records))?,
        Emit::Json => write_out(&args.out, &records_to_json(&records))?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TableRow {
    algo: String,
    leading_constant: f64,
    log2n: u32,
    measured_ratio: f64,
}

fn cmd_table(args: TableArgs) -> Result<ExitCode, String> {
    if args.log2n_max > 20 {
        return Err("table sizes are capped at log2n = 20".into());
    }
    if args.log2n_max < 4 {
        return Err("table needs --log2n-max of at least 4".into());
    }
    let algos: [(Algo, Ratio); 6] = [
        (Algo::WhtFolklore, Ratio::int(1)),
        (Algo::WhtH4, Ratio::int(1)),
        (Algo::WhtH8, Ratio::new(23, 24)),
        (Algo::FftSr, Ratio::int(4)),
        (Algo::FftMsr, Ratio::new(34, 9)),
        (Algo::FftWhufft, Ratio::new(15, 4)),
    ];
    let mut sizes: Vec<u32> = (4..=args.log2n_max).filter(|l| l % 2 == 0).collect();
    if args.log2n_max % 2 == 1 {
        sizes.push(args.log2n_max);
    }
    let mut rows = Vec::new();
    for (algo, leading) in algos {
        for &log2n in &sizes {
            let x = gen_input(algo, log2n, 0, 1, false);
            let (res, tally) = with_tally(|| algo.run(&x));
            res.map_err(|e| e.to_string())?;
            let ratio = tally.total() as f64 / ((1u64 << log2n) as f64 * f64::from(log2n));
            rows.push(TableRow {
                algo: algo.id().to_string(),
                leading_constant: leading.to_f64(),
                log2n,
                measured_ratio: ratio,
            });
        }
    }
    match args.emit {
        Some(Emit::Json) => write_out(&args.out, &records_to_json(&rows))?,
        Some(Emit::Csv) => {
            let mut csv = String::from("algo,leading_constant,log2n,measured_ratio\n");
            for r in &rows {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    r.algo, r.leading_constant, r.log2n, r.measured_ratio
                ));
            }
            write_out(&args.out, &csv)?;
        }
        None => {
            let mut text = format!("{:<14}{:>10}", "algo", "leading");
            for &l in &sizes {
                text.push_str(&format!("{:>10}", format!("l={l}")));
            }
            text.push('\n');
            for (algo, leading) in algos {
                text.push_str(&format!("{:<14}{:>10.4}", algo.id(), leading.to_f64()));
                for r in rows.iter().filter(|r| r.algo == algo.id()) {
                    text.push_str(&format!("{:>10.4}", r.measured_ratio));
                }
                text.push('\n');
            }
            write_out(&args.out, &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lemmas(args: LemmasArgs) -> Result<ExitCode, String> {
    let report = lemma_checks(args.log2n_max).map_err(|e| e.to_string())?;
    let mass_ok = report.rows.iter().all(|r| r.block_mass_ok);
    let weighted_ok = report.rows.iter().all(|r| r.weighted_ok);
    println!(
        "block sizes sum to N for all N <= 2^{}: {}",
        args.log2n_max,
        if mass_ok { "PASS" } else { "FAIL" }
    );
    println!(
        "weighted block-size identity (exact rationals): {}",
        if weighted_ok { "PASS" } else { "FAIL" }
    );
    println!(
        "mod-3 mass bound N/12 + C*N^0.8: max observed C = {:.6}",
        report.max_c
    );
    Ok(if report.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_partition(args: PartitionArgs) -> Result<ExitCode, String> {
    if args.log2n > 22 {
        return Err("partition export is capped at log2n = 22".into());
    }
    let spec = partition(1usize << args.log2n).map_err(|e| e.to_string())?;
    let json = serde_json::to_string(&spec.subsets).expect("serializable");
    write_out(&args.out, &format!("{json}\n"))?;
    Ok(ExitCode::SUCCESS)
}
