use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordertype_core::{
    brute_force_max_homogeneous, convex_position_check, cupcap_extract, cyclic_polytope_check,
    gen_es_capcup, gen_es_monotone, gen_moment, gen_random, guarantee_threshold, is_homogeneous,
    lifting_extract, monotone_extract, pointfile, signature, BoundValue, Error, ExtractionResult,
    GpStatus, Homogeneity, Limits, PointSequence, Rational, Sign,
};
use serde::Serialize;

mod svg;

const EXIT_BELOW_TARGET: u8 = 1;
const EXIT_DEGENERATE: u8 = 2;
const EXIT_PROJECTION: u8 = 3;
const EXIT_RETRIES: u8 = 4;
const EXIT_BUDGET: u8 = 5;
const EXIT_INTERNAL: u8 = 70;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

const BUDGET_VAR: &str = "ORDERTYPE_BUDGET";

#[derive(Parser)]
#[command(
    name = "ordertype",
    version,
    about = "Exact order types and homogeneous subsequences"
)]
struct Cli {
    /// Worker threads for parallel predicate evaluation (results do not depend on it).
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Report the order type summary of a point file.
    Analyze { file: PathBuf },
    /// Extract a long homogeneous subsequence.
    Extract {
        file: PathBuf,
        #[arg(long)]
        target: usize,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
    },
    /// Check homogeneity (and optionally hull properties) of chosen points.
    Verify {
        file: PathBuf,
        /// Comma-separated 0-based indices, or `all`.
        #[arg(long)]
        indices: String,
        #[arg(long)]
        convex: bool,
        #[arg(long)]
        cyclic: bool,
    },
    /// Evaluate the size threshold guaranteeing a homogeneous subsequence.
    Bound {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        target: usize,
    },
    /// Draw a planar point file as SVG.
    Plot {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated indices to connect with a polyline.
        #[arg(long, default_value = "")]
        indices: String,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Points (t, t^2, ..., t^d) on the moment curve.
    Moment {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        t_start: Rational,
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        t_step: Rational,
        #[command(flatten)]
        out: OutArg,
    },
    /// (n-1)^2 values without a monotone run of n.
    EsMonotone {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// C(2n-4, n-2) planar points without an n-cup or n-cap.
    EsCapcup {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Seeded random integer points in general position.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Auto,
    Brute,
    Monotone,
    Cupcap,
    Lifting,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse()
        .map_err(|_| format!("'{s}' is not an integer or p/q rational"))
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidInput(_) => EXIT_USAGE,
            Error::InsufficientInput { .. } => EXIT_DATA,
            Error::DegenerateInput(_) => EXIT_DEGENERATE,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::RetriesExhausted { .. } => EXIT_RETRIES,
            Error::ProjectionRepair(_) => EXIT_PROJECTION,
            Error::InternalInvariantViolation(_) => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let json = cli.json;
    let outcome = run(cli);
    let code = match outcome {
        Ok(code) => code,
        Err(f) => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "error": f.message, "exit_code": f.code })
                );
            }
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> CmdResult {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(Failure::new(EXIT_USAGE, "--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    }
    let limits = limits_from_env()?;
    let json = cli.json;
    match cli.command {
        Command::Gen { kind } => cmd_gen(kind, &limits),
        Command::Analyze { file } => cmd_analyze(&file, json, &limits),
        Command::Extract { file, target, algo } => cmd_extract(&file, target, algo, json, &limits),
        Command::Verify {
            file,
            indices,
            convex,
            cyclic,
        } => cmd_verify(&file, &indices, convex, cyclic, json, &limits),
        Command::Bound { dim, target } => cmd_bound(dim, target, json, &limits),
        Command::Plot { file, out, indices } => cmd_plot(&file, &out, &indices),
    }
}

fn limits_from_env() -> Result<Limits, Failure> {
    let mut limits = Limits::default();
    if let Ok(v) = std::env::var(BUDGET_VAR) {
        limits.signature_budget = v.trim().parse().map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                format!("{BUDGET_VAR} must be a non-negative integer"),
            )
        })?;
    }
    Ok(limits)
}

fn read_points(path: &Path) -> Result<PointSequence, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::new(EXIT_DATA, format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?
    };
    pointfile::parse(&text).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", p.display())))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EXIT_DATA, e.to_string())),
    }
}

fn parse_indices(text: &str, n: usize) -> Result<Vec<usize>, Failure> {
    let text = text.trim();
    if text == "all" {
        return Ok((0..n).collect());
    }
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|w| {
            w.trim()
                .parse()
                .map_err(|_| Failure::new(EXIT_USAGE, format!("bad index '{w}'")))
        })
        .collect()
}

fn sign_value(s: Sign) -> i8 {
    s.to_i8()
}

fn cmd_gen(kind: GenKind, limits: &Limits) -> CmdResult {
    let (seq, out) = match kind {
        GenKind::Moment {
            dim,
            count,
            t_start,
            t_step,
            out,
        } => (gen_moment(dim, count, &t_start, &t_step)?, out),
        GenKind::EsMonotone { n, out } => (PointSequence::from_values(&gen_es_monotone(n)?), out),
        GenKind::EsCapcup { n, out } => (gen_es_capcup(n)?, out),
        GenKind::Random {
            dim,
            count,
            seed,
            bound,
            out,
        } => (gen_random(dim, count, seed, bound, limits)?, out),
    };
    write_output(out.out.as_deref(), &pointfile::format(&seq))?;
    Ok(0)
}

#[derive(Serialize)]
struct AnalyzeReport {
    dimension: usize,
    points: usize,
    general_position: &'static str,
    positive: usize,
    negative: usize,
    homogeneous: bool,
    sign: Option<i8>,
}

fn cmd_analyze(path: &Path, json: bool, limits: &Limits) -> CmdResult {
    let seq = read_points(path)?.verified(limits.gp_exhaustive_cap);
    let gp = match seq.status() {
        GpStatus::Verified => "verified",
        GpStatus::Unverified => "unverified",
        GpStatus::Degenerate(w) => {
            return Err(Failure::new(
                EXIT_DEGENERATE,
                format!("degenerate input: {w}"),
            ))
        }
    };
    let sig = signature(&seq, limits)?;
    let (positive, negative) = (sig.count(Sign::Positive), sig.count(Sign::Negative));
    let common = sig.common_sign();
    let report = AnalyzeReport {
        dimension: seq.dim(),
        points: seq.len(),
        general_position: gp,
        positive,
        negative,
        homogeneous: common.is_some() || sig.is_empty(),
        sign: common.map(sign_value),
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("dimension: {}", report.dimension);
        println!("points: {}", report.points);
        println!("general position: {gp}");
        let verdict = match (common, sig.is_empty()) {
            (Some(s), _) => format!("yes ({s})"),
            (None, true) => "yes (no tuples)".to_string(),
            (None, false) => "no".to_string(),
        };
        println!("+1: {positive}, -1: {negative}, homogeneous: {verdict}");
    }
    Ok(0)
}

#[derive(Serialize)]
struct ExtractReport<'a> {
    algorithm: String,
    indices: &'a [usize],
    sign: i8,
    size: usize,
    target: usize,
    verified: bool,
}

fn cmd_extract(path: &Path, target: usize, algo: Algo, json: bool, limits: &Limits) -> CmdResult {
    let seq = read_points(path)?;
    let d = seq.dim();
    let result: ExtractionResult = match algo {
        Algo::Auto | Algo::Lifting => lifting_extract(&seq, target, limits)?,
        Algo::Brute => brute_force_max_homogeneous(&seq, limits)?,
        Algo::Monotone => {
            if d != 1 {
                return Err(Failure::new(
                    EXIT_USAGE,
                    format!("monotone needs dimension 1, file has {d}"),
                ));
            }
            monotone_extract(&seq.values(), target)?
        }
        Algo::Cupcap => {
            if d != 2 {
                return Err(Failure::new(
                    EXIT_USAGE,
                    format!("cupcap needs dimension 2, file has {d}"),
                ));
            }
            cupcap_extract(&seq, target)?
        }
    };
    let report = ExtractReport {
        algorithm: result.algorithm.to_string(),
        indices: &result.indices,
        sign: sign_value(result.sign),
        size: result.len(),
        target,
        verified: result.verified,
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("algorithm: {}", report.algorithm);
        println!("indices: {}", join(report.indices, " "));
        println!("sign: {}", result.sign);
        println!("size: {}", report.size);
        println!("target: {target}");
        println!("verified: {}", yes_no(report.verified));
    }
    Ok(if report.size >= target {
        0
    } else {
        EXIT_BELOW_TARGET
    })
}

#[derive(Serialize)]
struct Counterexample {
    first: Vec<usize>,
    first_sign: i8,
    offending: Vec<usize>,
    offending_sign: i8,
}

#[derive(Serialize)]
struct VerifyReport {
    indices: Vec<usize>,
    homogeneous: bool,
    sign: Option<i8>,
    counterexample: Option<Counterexample>,
    convex: Option<bool>,
    cyclic: Option<bool>,
    pass: bool,
}

fn cmd_verify(
    path: &Path,
    indices: &str,
    convex: bool,
    cyclic: bool,
    json: bool,
    limits: &Limits,
) -> CmdResult {
    let seq = read_points(path)?;
    let indices = parse_indices(indices, seq.len())?;
    let hom = is_homogeneous(&seq, &indices)?;
    let convex = convex
        .then(|| convex_position_check(&seq, &indices, limits))
        .transpose()?;
    let cyclic = cyclic
        .then(|| cyclic_polytope_check(&seq, &indices, limits))
        .transpose()?;
    let counterexample = match &hom {
        Homogeneity::Mixed { first, offending } => Some(Counterexample {
            first: first.0.clone(),
            first_sign: sign_value(first.1),
            offending: offending.0.clone(),
            offending_sign: sign_value(offending.1),
        }),
        Homogeneity::Homogeneous(_) => None,
    };
    let pass = hom.sign().is_some() && convex != Some(false) && cyclic != Some(false);
    let report = VerifyReport {
        indices,
        homogeneous: hom.sign().is_some(),
        sign: hom.sign().map(sign_value),
        counterexample,
        convex,
        cyclic,
        pass,
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        match &hom {
            Homogeneity::Homogeneous(s) => println!("homogeneous: pass ({s})"),
            Homogeneity::Mixed { first, offending } => println!(
                "homogeneous: fail ({} has {} but {} has {})",
                join(&first.0, ","),
                first.1,
                join(&offending.0, ","),
                offending.1
            ),
        }
        if let Some(c) = convex {
            println!("convex: {}", pass_fail(c));
        }
        if let Some(c) = cyclic {
            println!("cyclic: {}", pass_fail(c));
        }
    }
    Ok(if pass { 0 } else { EXIT_BELOW_TARGET })
}

fn known_results(d: usize) -> &'static str {
    match d {
        1 => "OT_1(n) = (n-1)^2 + 1",
        2 => "OT_2(n) = 2^Theta(n)",
        3 => "OT_3(n) = 2^2^Theta(n)",
        _ => "2^2^Omega(n) <= OT_d(n) <= twr_d(O(n))",
    }
}

#[derive(Serialize)]
struct BoundReport {
    dim: usize,
    target: usize,
    kind: &'static str,
    /// Decimal value, exponent of two, or tower rendering, as text.
    value: String,
    rendered: String,
    known: &'static str,
}

fn cmd_bound(dim: usize, target: usize, json: bool, limits: &Limits) -> CmdResult {
    if dim == 0 || target <= dim {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--target must exceed --dim (got dim {dim}, target {target})"),
        ));
    }
    let bound = guarantee_threshold(dim, target, limits)?;
    let (kind, value) = match &bound {
        BoundValue::Exact(v) => ("exact", v.to_string()),
        BoundValue::PowerOfTwo(e) => ("power_of_two", e.to_string()),
        BoundValue::Tower { height, .. } => ("tower", height.to_string()),
    };
    let report = BoundReport {
        dim,
        target,
        kind,
        value,
        rendered: bound.to_string(),
        known: known_results(dim),
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("{}", report.rendered);
        println!("known: {}", report.known);
    }
    Ok(0)
}

fn cmd_plot(path: &Path, out: &Path, indices: &str) -> CmdResult {
    let seq = read_points(path)?;
    if seq.dim() != 2 {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("plot needs dimension 2, file has {}", seq.dim()),
        ));
    }
    let indices = parse_indices(indices, seq.len())?;
    if let Some(&bad) = indices.iter().find(|&&i| i >= seq.len()) {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("index {bad} out of range for {} points", seq.len()),
        ));
    }
    write_output(Some(out), &svg::render(&seq, &indices))?;
    Ok(0)
}

fn join(v: &[usize], sep: &str) -> String {
    v.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}
