//! `paritysum`: command-line front end for odd-multiplicity sumsets, the
//! arithmetic-progression lower bound and its certificates, and dilation scans.
//!
//! Exit codes: 0 success, 1 bound violated (or an oracle disagreed),
//! 2 input error, 3 arithmetic overflow, 4 budget exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use paritysum_core::pilz::{self, ScanConfig, DEFAULT_SCAN_BUDGET};
use paritysum_core::poly::{Gf2Poly, Kernel};
use paritysum_core::setops::{self, GridSet, IntSet};
use paritysum_core::theorem::{self, Instance};
use paritysum_core::{oracle, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "paritysum", version, about = "Odd-multiplicity sumsets over GF(2)")]
struct Cli {
    /// Output format for results.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Odd-representation sumset A ⊕ B ⊕ … of comma-separated sets.
    Oplus {
        #[arg(required = true, value_parser = parse_set)]
        sets: Vec<IntSet>,
        /// Recompute by brute-force counting and check agreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Symmetric difference of the given sets, or of A, 2A, …, nA with --dilations.
    Delta {
        #[arg(required = true, value_parser = parse_set)]
        sets: Vec<IntSet>,
        /// Treat the single operand as A and take A Δ 2A Δ … Δ nA.
        #[arg(long, value_name = "N")]
        dilations: Option<u64>,
        #[arg(long)]
        oracle: bool,
    },
    /// Odd-representation productset A ∇ B ∇ … of positive sets.
    Nabla {
        #[arg(required = true, value_parser = parse_set)]
        sets: Vec<IntSet>,
        #[arg(long)]
        oracle: bool,
    },
    /// Check |V ⊕ {a_1..n a_1} ⊕ … ⊕ {a_k..n a_k}| >= n.
    Verify {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        oracle: bool,
        /// Allow V of even size; prints the size without a pass/fail claim.
        #[arg(long)]
        explore: bool,
    },
    /// Build a certificate, write it, and audit it.
    Certify {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Certificate destination; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Term counts of q(x)·p_V(x) per residue mod t, after gcd normalization.
    ResidueCounts {
        #[command(flatten)]
        inst: InstanceArgs,
    },
    /// Exhaustive |A Δ 2A Δ … Δ nA| over nonempty A ⊆ [1, u], |A| <= s.
    PilzScan {
        #[arg(short = 'n')]
        n: u64,
        #[arg(short = 'u', long = "universe")]
        universe_max: u64,
        #[arg(short = 's', long = "max-size")]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
        budget: u64,
        /// CSV destination for the per-set records.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start at this set instead of {1}.
        #[arg(long, value_parser = parse_set)]
        resume: Option<IntSet>,
        /// Stop after this many sets.
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        oracle: bool,
    },
    /// Check |{0,1}^r ⊕ A| >= 2^r for a given or random grid set A.
    CubeCheck {
        #[arg(short = 'r')]
        r: usize,
        /// Grid literal such as "(0,0),(1,2)".
        #[arg(long, conflicts_with = "random")]
        set: Option<String>,
        /// Number of random sets to try.
        #[arg(long)]
        random: Option<usize>,
        /// Random coordinates are drawn from [0, coord_max).
        #[arg(long, default_value_t = 8)]
        coord_max: i64,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time dense multiplication of two random polynomials of the given degree.
    Bench {
        #[arg(short = 'd', long)]
        degree: u64,
        #[arg(short = 'r', long, default_value_t = 3)]
        repetitions: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compare against the pairwise-sum kernel on truncated inputs.
        #[arg(long)]
        check: bool,
    },
}

#[derive(clap::Args, Debug)]
struct InstanceArgs {
    #[arg(short = 'n')]
    n: u64,
    /// Steps a_1,…,a_k (repeats allowed).
    #[arg(short = 'a', required = true, value_delimiter = ',', num_args = 1)]
    a: Vec<u64>,
    /// Odd-size set V (defaults to {0}).
    #[arg(short = 'V', value_parser = parse_set)]
    v: Option<IntSet>,
}

fn parse_set(s: &str) -> Result<IntSet, String> {
    s.parse::<IntSet>().map_err(|e| e.to_string())
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
    /// A computed result contradicted a bound or a cross-check.
    Violation(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::Overflow(_) => 3,
                Error::BudgetExceeded(_) => 4,
                Error::BoundViolated(_) => 1,
                Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::Parse(_) => 2,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
            CliError::Violation(e) => write!(f, "{e}"),
        }
    }
}

type CliResult = Result<ExitCode, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let fmt = cli.format;
    match cli.command {
        Command::Oplus { sets, oracle } => {
            let result = setops::oplus_all(&sets)?;
            if oracle {
                let mut acc = IntSet::new([0]);
                for s in &sets {
                    acc = oracle::oplus(&acc, s)?;
                }
                check_agreement(&result, &acc)?;
            }
            print_set(fmt, &result);
        }
        Command::Delta { sets, dilations, oracle } => {
            let operands = match dilations {
                Some(n) => {
                    let [a] = sets.as_slice() else {
                        return Err(Error::InvalidArgument("--dilations takes exactly one set".into()).into());
                    };
                    if n == 0 {
                        return Err(Error::InvalidArgument("--dilations needs n >= 1".into()).into());
                    }
                    (1..=n).map(|i| setops::dilate(a, i)).collect::<Result<Vec<_>, _>>()?
                }
                None => sets,
            };
            let result = setops::symdiff(&operands);
            if oracle {
                check_agreement(&result, &oracle::symdiff(&operands))?;
            }
            print_set(fmt, &result);
        }
        Command::Nabla { sets, oracle } => {
            let (first, rest) = sets.split_first().expect("clap requires one set");
            let mut result = first.clone();
            let mut check = first.clone();
            if first.contains(0) {
                return Err(Error::InvalidArgument("productset operands must be positive".into()).into());
            }
            for s in rest {
                result = setops::nabla(&result, s)?;
                if oracle {
                    check = oracle::nabla(&check, s)?;
                }
            }
            if oracle {
                check_agreement(&result, &check)?;
            }
            print_set(fmt, &result);
        }
        Command::Verify { inst, oracle, explore } => return cmd_verify(fmt, inst, oracle, explore),
        Command::Certify { inst, out } => return cmd_certify(fmt, inst, out),
        Command::ResidueCounts { inst } => cmd_residue_counts(fmt, inst)?,
        Command::PilzScan { n, universe_max, max_size, budget, out, resume, limit, oracle } => {
            let cfg = ScanConfig { n, universe_max, max_size, budget, resume_from: resume, limit };
            return cmd_pilz_scan(fmt, &cfg, out, oracle);
        }
        Command::CubeCheck { r, set, random, coord_max, max_dim, seed } => {
            return cmd_cube_check(fmt, r, set, random, coord_max, max_dim, seed);
        }
        Command::Bench { degree, repetitions, seed, check } => {
            cmd_bench(fmt, degree, repetitions, seed, check)?
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn check_agreement(main: &IntSet, oracle: &IntSet) -> Result<(), CliError> {
    if main != oracle {
        return Err(CliError::Violation(format!(
            "oracle disagreement: polynomial route gave {{{main}}}, counting gave {{{oracle}}}"
        )));
    }
    Ok(())
}

fn render_set(s: &IntSet) -> String {
    if s.is_empty() {
        "{}".to_string()
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct SetOutput<'a> {
    elements: &'a IntSet,
    size: usize,
}

fn print_set(fmt: Format, s: &IntSet) {
    match fmt {
        Format::Text => println!("{} (size {})", render_set(s), s.len()),
        Format::Json => print_json(&SetOutput { elements: s, size: s.len() }),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("output serializes"));
}

fn instance(args: &InstanceArgs, allow_even: bool) -> Result<Instance, Error> {
    let v = args.v.clone().unwrap_or_else(|| IntSet::new([0]));
    if allow_even {
        Instance::exploratory(args.n, args.a.clone(), v)
    } else {
        Instance::with_v(args.n, args.a.clone(), v)
    }
}

fn cmd_verify(fmt: Format, args: InstanceArgs, use_oracle: bool, explore: bool) -> CliResult {
    let inst = instance(&args, explore)?;
    let size = theorem::build_p(&inst)?.support_size() as u64;
    if use_oracle {
        let mut sets: Vec<IntSet> = inst
            .a()
            .iter()
            .map(|&a| IntSet::arithmetic(a, inst.n()))
            .collect::<Result<_, _>>()?;
        sets.push(inst.v().clone());
        let brute = oracle::oplus_all(&sets)?.len() as u64;
        if brute != size {
            return Err(CliError::Violation(format!(
                "oracle disagreement: polynomial size {size}, counted size {brute}"
            )));
        }
    }
    if !inst.has_odd_v() {
        match fmt {
            Format::Text => println!("size={size} n={} (|V| even: no claim)", inst.n()),
            Format::Json => print_json(&serde_json::json!({
                "support_size": size, "n": inst.n(), "pass": null
            })),
        }
        return Ok(ExitCode::SUCCESS);
    }
    let report = theorem::verify_thm2(&inst)?;
    match fmt {
        Format::Text => println!(
            "size={} n={} {}",
            report.support_size,
            report.n,
            if report.pass { "PASS" } else { "FAIL" }
        ),
        Format::Json => print_json(&report),
    }
    if report.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("lower bound violated for n={} a={:?} V={{{}}}", inst.n(), inst.a(), inst.v());
        Ok(ExitCode::from(1))
    }
}

fn cmd_certify(fmt: Format, args: InstanceArgs, out: Option<PathBuf>) -> CliResult {
    let inst = instance(&args, false)?;
    let cert = theorem::make_certificate(&inst)?;
    let json = cert.to_json();
    match &out {
        Some(path) => fs::write(path, &json).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{json}"),
    }
    let audit = theorem::verify_certificate(&inst, &cert);
    match fmt {
        Format::Text => {
            let status = match &audit {
                Ok(()) => "OK".to_string(),
                Err(e) => format!("FAILED ({e})"),
            };
            println!(
                "audit {status} g={} alpha={} t={} |J|={} classes={} total={} truncated={}",
                cert.g,
                cert.alpha,
                cert.t,
                cert.j.len(),
                cert.residues.len(),
                cert.total,
                cert.truncated
            );
        }
        Format::Json => print_json(&serde_json::json!({
            "audit": audit.as_ref().map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()),
            "alpha": cert.alpha,
            "t": cert.t,
            "total": cert.total,
            "truncated": cert.truncated,
        })),
    }
    Ok(if audit.is_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_residue_counts(fmt: Format, args: InstanceArgs) -> Result<(), CliError> {
    let inst = instance(&args, false)?;
    let norm = theorem::normalize(&inst)?;
    let (alpha, t) = theorem::split_n(inst.n())?;
    let counts = theorem::residue_counts(&norm.instance)?;
    let uniform = counts.windows(2).all(|w| w[0] == w[1]);
    match fmt {
        Format::Text => {
            println!("g={} alpha={alpha} t={t} k={} |V|={}", norm.g, inst.k(), norm.instance.v().len());
            let cells: Vec<String> = counts.iter().enumerate().map(|(b, c)| format!("{b}:{c}")).collect();
            println!("F: {}", cells.join(" "));
            println!("uniform={uniform}");
        }
        Format::Json => print_json(&serde_json::json!({
            "g": norm.g,
            "alpha": alpha,
            "t": t,
            "counts": counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "uniform": uniform,
        })),
    }
    Ok(())
}

fn cmd_pilz_scan(fmt: Format, cfg: &ScanConfig, out: Option<PathBuf>, use_oracle: bool) -> CliResult {
    let result = pilz::scan(cfg)?;
    if use_oracle {
        for r in &result.records {
            let brute = pilz::pilz_size_oracle(&r.set, r.n)?;
            if brute != r.delta_size {
                return Err(CliError::Violation(format!(
                    "oracle disagreement on {{{}}}: {} vs {brute}",
                    r.set, r.delta_size
                )));
            }
        }
    }
    if let Some(path) = &out {
        let file = fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        pilz::write_csv(&result.records, std::io::BufWriter::new(file))?;
    }
    let s = &result.summary;
    let comparison = pilz::lower_bound_display(cfg.n).ok();
    match fmt {
        Format::Text => {
            let join = |sets: &[IntSet]| sets.iter().map(render_set).collect::<Vec<_>>().join(";");
            println!("n={} universe_max={} max_size={} scanned={}", s.n, s.universe_max, s.max_size, s.scanned);
            match s.min_size {
                Some(m) => println!("min_size={m}"),
                None => println!("min_size=none"),
            }
            println!("argmin={}", join(&s.argmin));
            println!("violations={}", s.violations.len());
            for v in &s.violations {
                println!("VIOLATION {}", render_set(v));
            }
            if let Some(next) = &s.next {
                println!("next={}", render_set(next));
            }
            if let Some(c) = comparison {
                println!("comparison n/(ln n)^{}={c:.4}", pilz::LAMBDA);
            }
        }
        Format::Json => print_json(&serde_json::json!({
            "summary": s,
            "comparison_natural_log": comparison,
        })),
    }
    if s.violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} set(s) below n found", s.violations.len());
        Ok(ExitCode::from(1))
    }
}

fn cmd_cube_check(
    fmt: Format,
    r: usize,
    set: Option<String>,
    random: Option<usize>,
    coord_max: i64,
    max_dim: usize,
    seed: u64,
) -> CliResult {
    let sets: Vec<GridSet> = match (set, random) {
        (Some(lit), _) => vec![GridSet::parse(&lit, Some(r))?],
        (None, Some(count)) => {
            if coord_max <= 0 {
                return Err(Error::InvalidArgument("--coord-max must be positive".into()).into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_grid(&mut rng, r, coord_max)).collect::<Result<_, _>>()?
        }
        (None, None) => return Err(Error::InvalidArgument("give --set or --random".into()).into()),
    };
    let mut failures = Vec::new();
    let mut min_size = usize::MAX;
    for a in &sets {
        let rep = pilz::cube_check(r, a, max_dim)?;
        min_size = min_size.min(rep.size);
        if !rep.pass {
            failures.push(a.to_string());
        }
    }
    match fmt {
        Format::Text => {
            if sets.len() == 1 {
                println!("size={min_size} {}", if failures.is_empty() { "PASS" } else { "FAIL" });
            } else {
                println!("r={r} trials={} min_size={min_size} failures={}", sets.len(), failures.len());
            }
            for f in &failures {
                println!("FAIL {f}");
            }
        }
        Format::Json => print_json(&serde_json::json!({
            "r": r,
            "trials": sets.len(),
            "min_size": min_size,
            "failures": failures,
        })),
    }
    Ok(if failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn random_grid(rng: &mut ChaCha8Rng, r: usize, coord_max: i64) -> Result<GridSet, Error> {
    let count = rng.random_range(1..=8);
    let points = (0..count).map(|_| (0..r).map(|_| rng.random_range(0..coord_max)).collect());
    GridSet::new(r, points)
}

/// Largest degree the bench accepts; keeps the product span under the dense limit.
const BENCH_MAX_DEGREE: u64 = (1 << 25) - 1;

fn random_poly(rng: &mut ChaCha8Rng, degree: u64) -> Gf2Poly {
    let words = (degree / 64 + 1) as usize;
    let mut v: Vec<u64> = (0..words).map(|_| rng.random()).collect();
    let top = degree % 64;
    let last = v.last_mut().unwrap();
    *last &= if top == 63 { u64::MAX } else { (1 << (top + 1)) - 1 };
    *last |= 1 << top;
    Gf2Poly::from_le_words(v)
}

fn cmd_bench(fmt: Format, degree: u64, reps: u32, seed: u64, check: bool) -> Result<(), CliError> {
    if degree == 0 || reps == 0 {
        return Err(Error::InvalidArgument("degree and repetitions must be positive".into()).into());
    }
    if degree > BENCH_MAX_DEGREE {
        return Err(Error::BudgetExceeded(format!("degree {degree} exceeds {BENCH_MAX_DEGREE}")).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_poly(&mut rng, degree);
    let b = random_poly(&mut rng, degree);

    let mut times = Vec::with_capacity(reps as usize);
    let mut product = Gf2Poly::zero();
    for _ in 0..reps {
        let start = Instant::now();
        product = a.mul_with(&b, Kernel::Dense)?;
        times.push(start.elapsed().as_secs_f64());
    }
    if product.degree() != Some(2 * degree) {
        return Err(CliError::Violation("product has the wrong degree".into()));
    }
    let best = times.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    let bits = (2 * degree + 1) as f64;

    let check_status = if check {
        let cut = degree.min(2047);
        let ta = Gf2Poly::from_set(a.iter().take_while(|&e| e <= cut));
        let tb = Gf2Poly::from_set(b.iter().take_while(|&e| e <= cut));
        let ok = ta.mul_with(&tb, Kernel::Dense)? == ta.mul_with(&tb, Kernel::Sparse)?;
        if !ok {
            return Err(CliError::Violation("dense and sparse kernels disagree".into()));
        }
        Some(ok)
    } else {
        None
    };

    match fmt {
        Format::Text => {
            println!(
                "degree={degree} reps={reps} best={best:.6}s mean={mean:.6}s throughput={:.3e} bits/s",
                bits / mean
            );
            if check_status.is_some() {
                println!("check=ok");
            }
        }
        Format::Json => print_json(&serde_json::json!({
            "degree": degree,
            "reps": reps,
            "best_seconds": best,
            "mean_seconds": mean,
            "bits_per_second": bits / mean,
            "check": check_status,
        })),
    }
    Ok(())
}
