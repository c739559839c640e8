use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use confext::classify::{classify_grid, GridOptions, DEFAULT_CAP};
use confext::equiv::{check_equivalent, default_betas, search_equivalence, SearchOutcome, DEFAULT_DEG_BOUND};
use confext::extend::{build_unified, check_ace, check_cce, check_special, extract_datum, SpecialKind, SplitAlgebra};
use confext::flag::{check_flag, datum_to_flag, fixtures, flag_to_datum, FixtureSet};
use confext::format;
use confext::poly::{fmt_rational, parse_rational};
use confext::repchecks::{check_bimodule, check_left_module, check_right_module, Side};
use confext::{Error, Rational, Report};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Thread count for the rayon pool.
const THREADS_ENV: &str = "CONFEXT_THREADS";

#[derive(Parser)]
#[command(name = "confext", version, about = "Exact verifier for conformal algebras and their extending structures")]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check associativity of an algebra file.
    VerifyAlgebra { file: PathBuf },
    /// Check commutativity of an algebra file.
    VerifyCommutative { file: PathBuf },
    /// Check one action (left or right module) or two actions (bimodule).
    VerifyModule {
        algebra: PathBuf,
        action: PathBuf,
        /// Right action when checking a bimodule.
        second: Option<PathBuf>,
    },
    /// Check ACE1–ACE14 for a datum file.
    VerifyDatum { file: PathBuf },
    /// Check the condition list of a special unified product.
    VerifySpecial {
        #[arg(long)]
        kind: String,
        file: PathBuf,
    },
    /// Check CCE1–CCE7 for a reduced datum over a commutative base.
    VerifyCce { file: PathBuf },
    /// Write the unified product of a datum as an algebra file.
    BuildUnified {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Read a datum off an algebra whose first `split` basis vectors span A.
    Extract {
        file: PathBuf,
        #[arg(long)]
        split: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check f1–f14 for a flag file.
    VerifyFlag { file: PathBuf },
    /// Convert a flag file to a datum file or a rank-1 datum file to a flag file.
    FlagConvert {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check or search an equivalence d ≡ d′.
    Equiv(EquivArgs),
    /// Enumerate and classify rank-1 flag datums on a polynomial grid.
    Classify(ClassifyArgs),
    /// Write the classification fixtures as flag files.
    Fixtures {
        #[arg(long)]
        which: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct EquivArgs {
    datum: PathBuf,
    datum_prime: PathBuf,
    #[arg(long, conflicts_with = "search", required_unless_present = "search")]
    witness: Option<PathBuf>,
    #[arg(long)]
    search: bool,
    #[arg(long, default_value_t = DEFAULT_DEG_BOUND)]
    deg: u32,
    /// Comma-separated rationals.
    #[arg(long)]
    betas: Option<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, conflicts_with = "algebra", required_unless_present = "algebra")]
    fixture: Option<String>,
    #[arg(long)]
    algebra: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    deg: u32,
    #[arg(long, default_value = "0,1")]
    coeffs: String,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
}

/// A failure that maps to exit code 2.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<u8, UsageError>;

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), UsageError> {
    fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

/// Parses file contents, prefixing errors with the path.
fn load<T>(path: &Path, parse: impl Fn(&str) -> confext::Result<T>) -> Result<T, UsageError> {
    parse(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn rationals(list: &str) -> Result<Vec<Rational>, UsageError> {
    list.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| UsageError(format!("bad rational '{}': {e}", s.trim()))))
        .collect()
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit_report(r: &Report, fmt: OutputFormat) -> u8 {
    match fmt {
        OutputFormat::Text => out(&r.to_text()),
        OutputFormat::Json => out(&to_json(r)),
    }
    if r.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn emit_done(message: &str, value: serde_json::Value, fmt: OutputFormat) -> u8 {
    match fmt {
        OutputFormat::Text => out(&format!("{message}\n")),
        OutputFormat::Json => out(&to_json(&value)),
    }
    EXIT_PASS
}

fn run(cli: Cli) -> CmdResult {
    let fmt = cli.format;
    match cli.command {
        Command::VerifyAlgebra { file } => {
            let a = load(&file, format::algebra_from_json)?;
            Ok(emit_report(&a.check_associativity(), fmt))
        }
        Command::VerifyCommutative { file } => {
            let a = load(&file, format::algebra_from_json)?;
            Ok(emit_report(&a.check_commutativity(), fmt))
        }
        Command::VerifyModule { algebra, action, second } => {
            let a = load(&algebra, format::algebra_from_json)?;
            let first = load(&action, |t| format::action_from_json(t, a.rank()))?;
            let report = match second {
                None => match first.side() {
                    Side::Left => check_left_module(&a, &first)?,
                    Side::Right => check_right_module(&a, &first)?,
                },
                Some(p) => {
                    let other = load(&p, |t| format::action_from_json(t, a.rank()))?;
                    let (l, r) = if first.side() == Side::Left { (first, other) } else { (other, first) };
                    check_bimodule(&a, &l, &r)?
                }
            };
            Ok(emit_report(&report, fmt))
        }
        Command::VerifyDatum { file } => {
            let d = load(&file, format::datum_from_json)?;
            Ok(emit_report(&check_ace(&d), fmt))
        }
        Command::VerifySpecial { kind, file } => {
            let k = SpecialKind::parse(&kind).ok_or_else(|| {
                let names: Vec<&str> = SpecialKind::ALL.iter().map(|k| k.name()).collect();
                UsageError(format!("unknown kind '{kind}', expected one of {}", names.join(", ")))
            })?;
            let d = load(&file, format::datum_from_json)?;
            Ok(emit_report(&check_special(&d, k)?, fmt))
        }
        Command::VerifyCce { file } => {
            let d = load(&file, format::reduced_from_json)?;
            Ok(emit_report(&check_cce(&d)?, fmt))
        }
        Command::BuildUnified { file, output } => {
            let d = load(&file, format::datum_from_json)?;
            let e = build_unified(&d);
            write(&output, &format::algebra_to_json(&e.algebra))?;
            let msg = format!("wrote rank {} algebra (A spans the first {}) to {}", e.algebra.rank(), e.split, output.display());
            Ok(emit_done(&msg, json!({"output": output, "rank": e.algebra.rank(), "split": e.split}), fmt))
        }
        Command::Extract { file, split, output } => {
            let a = load(&file, format::algebra_from_json)?;
            let d = extract_datum(&SplitAlgebra::new(a, split)?)?;
            let text = format::datum_to_json(&d);
            match output {
                Some(p) => {
                    write(&p, &text)?;
                    let msg = format!("wrote datum with n = {}, m = {} to {}", d.n(), d.q_rank(), p.display());
                    Ok(emit_done(&msg, json!({"output": p, "n": d.n(), "q_rank": d.q_rank()}), fmt))
                }
                None => {
                    out(&text);
                    Ok(EXIT_PASS)
                }
            }
        }
        Command::VerifyFlag { file } => {
            let fd = load(&file, format::flag_from_json)?;
            Ok(emit_report(&check_flag(&fd), fmt))
        }
        Command::FlagConvert { file, output } => {
            let text = read(&file)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", file.display())))?;
            let converted = if value.get("q_rank").is_some() {
                let d = format::datum_from_json(&text)?;
                format::flag_to_json(&datum_to_flag(&d)?)
            } else {
                let fd = format::flag_from_json(&text)?;
                format::datum_to_json(&flag_to_datum(&fd)?)
            };
            match output {
                Some(p) => write(&p, &converted)?,
                None => out(&converted),
            }
            Ok(EXIT_PASS)
        }
        Command::Equiv(args) => equiv(args, fmt),
        Command::Classify(args) => classify(args, fmt),
        Command::Fixtures { which, output } => {
            let set = FixtureSet::parse(&which)
                .ok_or_else(|| UsageError(format!("unknown fixture set '{which}', expected hh2 or hh3")))?;
            fs::create_dir_all(&output).map_err(|e| UsageError(format!("{}: {e}", output.display())))?;
            let mut written = Vec::new();
            for f in fixtures(set) {
                let path = output.join(format!("{}.flag", fixture_stem(&f)));
                write(&path, &format::flag_to_json(&f.flag))?;
                written.push(path);
            }
            let msg = format!("wrote {} fixtures to {}", written.len(), output.display());
            Ok(emit_done(&msg, json!({"files": written}), fmt))
        }
    }
}

/// `hh3_7_cm1` for family (7) at c = -1, `hh2_1_LpD` for Q = L + D.
fn fixture_stem(f: &confext::flag::Fixture) -> String {
    let mut stem = format!("{}_{}", f.set.name(), f.family);
    if let Some(p) = &f.param {
        let tag = if f.set == FixtureSet::Hh3 { "c" } else { "q" };
        let param: String = p
            .chars()
            .filter_map(|ch| match ch {
                '-' => Some('m'),
                '+' => Some('p'),
                '/' => Some('_'),
                c if c.is_ascii_alphanumeric() => Some(c),
                _ => None,
            })
            .collect();
        stem.push_str(&format!("_{tag}{param}"));
    }
    stem
}

fn equiv(args: EquivArgs, fmt: OutputFormat) -> CmdResult {
    let d = load(&args.datum, format::datum_from_json)?;
    let dp = load(&args.datum_prime, format::datum_from_json)?;
    if let Some(w) = args.witness {
        let w = load(&w, format::witness_from_json)?;
        return Ok(emit_report(&check_equivalent(&d, &dp, &w), fmt));
    }
    let betas = match &args.betas {
        Some(list) => rationals(list)?,
        None => default_betas(),
    };
    let outcome = search_equivalence(&d, &dp, args.deg, &betas)?;
    let betas_text: Vec<String> = betas.iter().map(fmt_rational).collect();
    let (label, code) = match &outcome {
        SearchOutcome::Found(_) => ("FOUND", EXIT_PASS),
        SearchOutcome::ProvedInequivalent(_) => ("INEQUIVALENT", EXIT_FAIL),
        SearchOutcome::NotFound => ("NOT_FOUND", EXIT_FAIL),
    };
    match fmt {
        OutputFormat::Text => {
            out(&format!("equivalence search: {label}\n"));
            match &outcome {
                SearchOutcome::Found(w) => out(&format::witness_to_json(w)),
                SearchOutcome::ProvedInequivalent(reason) => out(&format!("  {reason}\n")),
                SearchOutcome::NotFound => out(&format!(
                    "  no witness with deg_bound {} and betas {{{}}}\n",
                    args.deg,
                    betas_text.join(", ")
                )),
            }
        }
        OutputFormat::Json => {
            let mut v = json!({"outcome": label, "deg_bound": args.deg, "betas": betas_text});
            match &outcome {
                SearchOutcome::Found(w) => {
                    v["witness"] = serde_json::from_str(&format::witness_to_json(w)).expect("witness json");
                }
                SearchOutcome::ProvedInequivalent(reason) => v["reason"] = json!(reason),
                SearchOutcome::NotFound => {}
            }
            out(&to_json(&v));
        }
    }
    Ok(code)
}

fn classify(args: ClassifyArgs, fmt: OutputFormat) -> CmdResult {
    let base = match (&args.fixture, &args.algebra) {
        (Some(name), _) => FixtureSet::parse(name)
            .ok_or_else(|| UsageError(format!("unknown fixture set '{name}', expected hh2 or hh3")))?
            .base(),
        (None, Some(path)) => load(path, format::algebra_from_json)?,
        (None, None) => return Err(UsageError("either --fixture or --algebra is required".into())),
    };
    let mut opts = GridOptions::new(args.deg, rationals(&args.coeffs)?);
    opts.cap = args.cap;
    let c = classify_grid(&base, &opts)?;
    match fmt {
        OutputFormat::Text => out(&c.to_text()),
        OutputFormat::Json => out(&to_json(&c)),
    }
    Ok(if c.unmatched == 0 { EXIT_PASS } else { EXIT_FAIL })
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| UsageError(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError(format!("cannot configure threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| run(cli));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
