//! `qperfect`: build, audit and export q-ary perfect and even-like codes.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 unsupported field
//! order, 3 invalid parameters or ingredients, 4 enumeration budget
//! exceeded, 5 manifest or file error, 64 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qperfect::code::{check_enumerable, min_distance, rank_of, DEFAULT_PAIR_BUDGET, DEFAULT_RANK_SAMPLES};
use qperfect::manifest::{build, Constructed, LambdaKind, LambdaSpec};
use qperfect::verify::{
    certify_distance_sampled, verify_even_like, verify_partition, verify_partition_sampled,
    verify_perfect_exhaustive, verify_perfect_sampled, verify_sampler, verify_singleton,
    verify_size, Mode, VerifyReport, DEFAULT_DISTANCE_TRIALS, DEFAULT_PERFECT_TRIALS,
};
use qperfect::{Code, ConstructionKind, Error, FamilyKind, FamilySpec, Manifest, QuasigroupChoice, WordFile};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "qperfect", version, about = "Build and audit q-ary 1-perfect and even-like codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and write its manifest (and word list when small enough).
    Construct(ConstructArgs),
    /// Audit the code described by a manifest.
    Verify(VerifyArgs),
    /// Print the parameters of a manifest's code.
    Info(ManifestArg),
    /// Print the rank of a manifest's code.
    Rank(RankArgs),
    /// Write the word list of a manifest's code.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QgArg {
    Modular,
    Isotope,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Constant,
    Keyed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LambdaArg {
    Zero,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// thm7, thm8, thm8-partition, vasilev, lindstrom-schonheim, mollard,
    /// hamming, evenlike-d3 or full-space.
    #[arg(long)]
    construction: String,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    s1: usize,
    #[arg(long)]
    s2: Option<usize>,
    #[arg(long, value_enum, default_value = "modular")]
    quasigroup: QgArg,
    #[arg(long, value_enum, default_value = "constant")]
    family: FamilyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "zero")]
    lambda: LambdaArg,
    /// Writes PREFIX.manifest.json and PREFIX.words; without it the
    /// manifest goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the word list even above the enumeration guard.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug)]
struct ManifestArg {
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Defaults to exhaustive when the ambient space is enumerable.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = DEFAULT_PERFECT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_DISTANCE_TRIALS)]
    distance_trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also certify minimum distance at least this.
    #[arg(long)]
    distance: Option<usize>,
    /// Worker threads for sampled trials (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
    /// Emit the report as JSON instead of key-value lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RANK_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::UnsupportedOrder(_)) => 2,
            CliError::Core(Error::BudgetExceeded { .. }) => 4,
            CliError::Core(Error::Manifest(_) | Error::WordFile(_)) | CliError::Io(_) => 5,
            CliError::Core(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => f.write_str(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> CliResult<(Manifest, Constructed)> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let m = Manifest::from_json(&text)?;
    let built = build(&m)?;
    Ok((m, built))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_construct(a: ConstructArgs) -> CliResult<u8> {
    let kind: ConstructionKind = a.construction.parse()?;
    let spec = FamilySpec {
        kind: match a.quasigroup {
            QgArg::Modular => QuasigroupChoice::Modular,
            QgArg::Isotope => QuasigroupChoice::Isotope,
        },
        family: match a.family {
            FamilyArg::Constant => FamilyKind::Constant,
            FamilyArg::Keyed => FamilyKind::Keyed,
        },
        seed: a.seed,
    };
    let lambda = LambdaSpec {
        kind: match a.lambda {
            LambdaArg::Zero => LambdaKind::Zero,
            LambdaArg::Random => LambdaKind::Random,
        },
        seed: a.seed,
    };
    let (manifest, built) = Manifest::create(kind, a.q, a.s1, a.s2, spec, lambda)?;
    warn_small_parameters(&manifest);
    let Some(prefix) = a.out else {
        print!("{}", manifest.to_json());
        return Ok(0);
    };
    let mpath = with_suffix(&prefix, ".manifest.json");
    write_file(&mpath, &manifest.to_json())?;
    println!("manifest: {}", mpath.display());
    if built.is_partition() {
        println!("words: skipped (partition manifest)");
        return Ok(0);
    }
    let log2 = built.code.cardinality().log2();
    if check_enumerable("word list", log2, false).is_ok() || a.force {
        let wf = WordFile::from_code(built.code.as_ref(), a.force)?;
        let wpath = with_suffix(&prefix, ".words");
        write_file(&wpath, &wf.emit())?;
        println!("words: {} ({} lines)", wpath.display(), wf.words.len());
    } else {
        println!("words: skipped ({} words exceeds the enumeration guard)", built.code.cardinality());
    }
    Ok(0)
}

fn warn_small_parameters(m: &Manifest) {
    if matches!(m.construction, ConstructionKind::Thm8 | ConstructionKind::Thm8Partition)
        && (m.s1 < 2 || m.s2.is_some_and(|s| s < 2))
    {
        eprintln!("warning: s1 or s2 below 2 is outside the usual parameter range");
    }
}

fn space_is_enumerable(code: &dyn Code) -> bool {
    let log2 = code.len() as f64 * (code.field().q() as f64).log2();
    check_enumerable("", log2, false).is_ok()
}

fn run_verify(a: &VerifyArgs, built: &Constructed) -> CliResult<VerifyReport> {
    let code = built.code.as_ref();
    let exhaustive = match a.mode {
        Some(ModeArg::Exhaustive) => true,
        Some(ModeArg::Sample) => false,
        None => space_is_enumerable(code),
    };
    let mut report = VerifyReport::new(if exhaustive { Mode::Exhaustive } else { Mode::Sampled });
    report.merge(verify_singleton(built.params()));

    if built.is_partition() {
        let parts: Vec<&dyn Code> = built.members.iter().map(|c| c.as_ref()).collect();
        report.merge(if exhaustive {
            verify_partition(&parts, code)?
        } else {
            verify_partition_sampled(&parts, code, a.trials, a.seed)?
        });
        report.note("parts", parts.len().to_string());
        return Ok(report);
    }

    let enumerable = check_enumerable("", code.cardinality().log2(), false).is_ok();
    if exhaustive {
        if enumerable {
            report.merge(verify_size(code, built.derived.logq_size)?);
        }
        if !built.derived.even_like {
            report.merge(verify_perfect_exhaustive(code)?);
        }
    } else {
        report.merge(verify_sampler(code, a.trials.min(DEFAULT_DISTANCE_TRIALS), a.seed));
        if !built.derived.even_like {
            report.merge(verify_perfect_sampled(code, a.trials, a.seed));
        }
    }
    if built.derived.even_like {
        report.merge(verify_even_like(code, a.trials, a.seed));
    }
    if let Some(t) = a.distance {
        if exhaustive && enumerable {
            let e = qperfect::enumerate(code, false)?;
            let d = min_distance(&e, DEFAULT_PAIR_BUDGET)?;
            report.note("min_distance", d.to_string());
            let name = format!("distance_ge_{t}");
            report.set_check(&name, true);
            if d < t {
                report.fail(&name, &[], format!("minimum distance is {d}"));
            }
        } else {
            report.merge(certify_distance_sampled(code, t, a.distance_trials, a.seed));
        }
    }
    Ok(report)
}

fn cmd_verify(a: VerifyArgs) -> CliResult<u8> {
    let (_, built) = load(&a.manifest)?;
    let start = Instant::now();
    let report = match a.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?
            .install(|| run_verify(&a, &built))?,
        None => run_verify(&a, &built)?,
    };
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", report.render());
    }
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    Ok(if report.passed() { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_info(a: ManifestArg) -> CliResult<u8> {
    let (m, built) = load(&a.manifest)?;
    warn_small_parameters(&m);
    let d = &built.derived;
    println!("construction: {}", m.construction);
    println!("q: {}", m.q);
    println!("length: {}", d.length);
    println!("logq_size: {}", d.logq_size);
    println!("claimed_distance: {}", d.claimed_distance);
    println!("even_like: {}", d.even_like);
    println!("singleton_slack: {}", built.params().singleton_slack());
    if let Some(p) = d.parts {
        println!("parts: {p}");
    }
    Ok(0)
}

fn cmd_rank(a: RankArgs) -> CliResult<u8> {
    let (_, built) = load(&a.manifest)?;
    let code = built.members.first().unwrap_or(&built.code);
    let r = rank_of(code.as_ref(), a.samples, a.seed);
    println!("rank: {}", r.rank);
    println!(
        "exact: {}",
        if r.exact { "true" } else { "false (sampled lower bound)" }
    );
    Ok(0)
}

fn cmd_export(a: ExportArgs) -> CliResult<u8> {
    let (_, built) = load(&a.manifest)?;
    let wf = WordFile::from_code(built.code.as_ref(), a.force)?;
    write_file(&a.out, &wf.emit())?;
    println!("words: {} ({} lines)", a.out.display(), wf.words.len());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Info(a) => cmd_info(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
