//! `weil`: dimension queries, `Z` enumeration, construction, verification
//! and oracle comparison for skew-symmetric Leibniz maps on `D^r_k`.
//!
//! Exit codes: 0 success, 1 verification or comparison mismatch, 2 usage,
//! parse or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weil_core::lift_space::{
    construct, dimension, enumerate_z, CoefficientAssignment, LiftParams, LiftTable,
};
use weil_core::oracle::{self, OracleOptions, DEFAULT_MAX_UNKNOWNS};
use weil_core::verifier::{VerificationReport, Verifier, DEFAULT_WITNESS_LIMIT};

const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(
    name = "weil",
    version,
    about = "Skew-symmetric Leibniz maps on truncated polynomial algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dimension C(r+s-1, s) * C(r+k, r+s).
    Dim {
        #[command(flatten)]
        params: ParamArgs,
        /// Also enumerate Z and report its size.
        #[arg(long)]
        count_z: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the index set Z as JSON.
    Zset {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Write a coefficient assignment (random, zero, or a standard basis vector).
    Assign {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// All values zero.
        #[arg(long, conflicts_with = "basis")]
        zero: bool,
        /// One at the given position of Z (0-based, canonical order), zero elsewhere.
        #[arg(long)]
        basis: Option<usize>,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Build the table from an assignment and verify it.
    Construct {
        /// Assignment JSON; without it a random assignment is drawn from -r -k -s.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        params: OptionalParamArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long = "out")]
        output: Option<PathBuf>,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Verify a table JSON file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the report JSON here instead of stdout.
        #[arg(long = "out")]
        output: Option<PathBuf>,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Solve the brute-force linear system and compare with the formula.
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        /// Also compare against the constructed tables.
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_UNKNOWNS)]
        max_unknowns: usize,
        #[arg(long, default_value_t = DEFAULT_WITNESS_LIMIT)]
        witnesses: usize,
        /// Write the constraint matrix in MatrixMarket-style text.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(short = 'r')]
    r: u32,
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 's')]
    s: usize,
}

impl ParamArgs {
    fn lift(&self) -> LiftParams {
        LiftParams::new(self.r, self.k, self.s)
    }
}

#[derive(Args)]
struct OptionalParamArgs {
    #[arg(short = 'r', requires_all = ["k", "s"], conflicts_with = "input")]
    r: Option<u32>,
    #[arg(short = 'k', requires_all = ["r", "s"])]
    k: Option<usize>,
    #[arg(short = 's', requires_all = ["r", "k"])]
    s: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_WITNESS_LIMIT)]
    witnesses: usize,
    /// Check the product rule in every slot, not only the last.
    #[arg(long)]
    all_slots: bool,
}

impl VerifyArgs {
    fn verifier(&self) -> Verifier {
        Verifier {
            witness_limit: self.witnesses,
            all_slots: self.all_slots,
        }
    }
}

enum Status {
    Ok,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Dim {
            params,
            count_z,
            json,
        } => cmd_dim(&params, count_z, json),
        Command::Zset { params } => {
            let zs: Vec<_> = enumerate_z(&params.lift())
                .iter()
                .map(|z| z.to_json())
                .collect();
            write_stdout(&serde_json::to_string_pretty(&zs)?)?;
            Ok(Status::Ok)
        }
        Command::Assign {
            params,
            seed,
            zero,
            basis,
            output,
        } => {
            let p = params.lift();
            let assignment = match basis {
                Some(n) if n >= p.z().len() => {
                    bail!("basis position {n} out of range: |Z| = {}", p.z().len())
                }
                Some(n) => CoefficientAssignment::standard_basis(&p, n),
                None if zero => CoefficientAssignment::zero(&p),
                None => CoefficientAssignment::random(&p, &mut ChaCha8Rng::seed_from_u64(seed)),
            };
            emit(output.as_deref(), &assignment.to_json())?;
            Ok(Status::Ok)
        }
        Command::Construct {
            input,
            params,
            seed,
            output,
            verify,
        } => cmd_construct(input.as_deref(), &params, seed, output.as_deref(), &verify),
        Command::Verify {
            input,
            output,
            verify,
        } => {
            let table = LiftTable::from_json(&read_json(&input)?)
                .with_context(|| format!("reading table from {}", input.display()))?;
            let report = verify.verifier().run_all(&table);
            emit(output.as_deref(), &report.to_json())?;
            if output.is_some() {
                print_summary(&report);
            }
            Ok(status(report.passed))
        }
        Command::Oracle {
            params,
            compare,
            max_unknowns,
            witnesses,
            dump,
        } => cmd_oracle(&params, compare, max_unknowns, witnesses, dump.as_deref()),
    }
}

fn status(passed: bool) -> Status {
    if passed {
        Status::Ok
    } else {
        Status::Mismatch
    }
}

fn cmd_dim(params: &ParamArgs, count_z: bool, json: bool) -> Result<Status> {
    let p = params.lift();
    let dim = dimension(&p);
    let z_count = count_z.then(|| enumerate_z(&p).len());
    let agrees = z_count.is_none_or(|n| dim == n.into());
    if json {
        let mut doc = serde_json::json!({
            "r": params.r,
            "k": params.k,
            "s": params.s,
            "dimension": dim.to_string(),
        });
        if let Some(n) = z_count {
            doc["z_count"] = n.to_string().into();
        }
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        match z_count {
            Some(n) => println!("{dim} |Z|={n}"),
            None => println!("{dim}"),
        }
    }
    Ok(status(agrees))
}

fn cmd_construct(
    input: Option<&Path>,
    params: &OptionalParamArgs,
    seed: u64,
    output: Option<&Path>,
    verify: &VerifyArgs,
) -> Result<Status> {
    let assignment = match (input, params.r, params.k, params.s) {
        (Some(path), ..) => CoefficientAssignment::from_json(&read_json(path)?)
            .with_context(|| format!("reading assignment from {}", path.display()))?,
        (None, Some(r), Some(k), Some(s)) => CoefficientAssignment::random(
            &LiftParams::new(r, k, s),
            &mut ChaCha8Rng::seed_from_u64(seed),
        ),
        _ => bail!("construct needs --in PATH or all of -r, -k, -s"),
    };
    let table = construct(&assignment)?;
    emit(output, &table.to_json())?;
    let report = verify.verifier().run_all(&table);
    if output.is_some() {
        print_summary(&report);
    } else {
        eprint_summary(&report);
    }
    Ok(status(report.passed))
}

fn cmd_oracle(
    params: &ParamArgs,
    compare: bool,
    max_unknowns: usize,
    witnesses: usize,
    dump: Option<&Path>,
) -> Result<Status> {
    let p = params.lift();
    let options = OracleOptions {
        max_unknowns,
        witness_limit: witnesses,
        ..OracleOptions::default()
    };
    let system = oracle::build_constraints(&p, &options)?;
    if let Some(path) = dump {
        let mut file = std::io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        system.write_matrix_market(&mut file)?;
    }
    let null = oracle::nullspace(&system);
    let formula = dimension(&p);
    let iso = oracle::check_iso(&system, &null.basis);
    println!(
        "nullspace={} formula={} iso={}",
        null.dimension,
        formula,
        if iso { "ok" } else { "fail" }
    );
    let mut passed = iso && formula == null.dimension.into();
    if compare {
        let report = oracle::compare_with_construction(&p, &options)?;
        println!("compare={}", if report.passed { "ok" } else { "fail" });
        if !report.passed {
            println!("{}", serde_json::to_string_pretty(&report.to_json())?);
        }
        passed &= report.passed;
    }
    Ok(status(passed))
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(path) => {
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
        }
        None => write_stdout(&text),
    }
}

/// Writes `text` and a newline to stdout; a closed pipe (`weil zset … | head`)
/// is not an error.
fn write_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|()| out.flush()) {
        Err(err) if err.kind() != std::io::ErrorKind::BrokenPipe => Err(err.into()),
        _ => Ok(()),
    }
}

fn summary_lines(report: &VerificationReport) -> Vec<String> {
    let mut lines: Vec<String> = report
        .checks
        .iter()
        .map(|c| {
            format!(
                "{}: {} ({} checked, {} failed)",
                c.name,
                if c.failed == 0 { "pass" } else { "FAIL" },
                c.evaluated,
                c.failed
            )
        })
        .collect();
    for f in &report.failures {
        let witness: Vec<String> = f.witness.iter().map(|w| w.to_string()).collect();
        lines.push(format!(
            "  {} at [{}]: expected {}, got {}",
            f.check,
            witness.join(" "),
            f.expected,
            f.actual
        ));
    }
    lines.push(format!(
        "verification: {}",
        if report.passed { "passed" } else { "FAILED" }
    ));
    lines
}

fn print_summary(report: &VerificationReport) {
    for line in summary_lines(report) {
        println!("{line}");
    }
}

fn eprint_summary(report: &VerificationReport) {
    for line in summary_lines(report) {
        eprintln!("{line}");
    }
}
