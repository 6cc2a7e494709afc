//! The `idem` command line.
//!
//! Exit codes: 0 when every check passes, 1 on a semantic failure (a failed
//! check, an index mismatch, a refused semiring), 2 on a parse or usage
//! error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exttensor::{FinSemimodule, TensorSpace};
use crate::freetensor::outer;
use crate::harness::{self, Config, DEFAULT_SEED, DEFAULT_SIZE, SUITES};
use crate::kernelop::{compose, Kernel};
use crate::report::ValidationReport;
use crate::semiring::Semiring;
use crate::text::{self, FileKind};

#[derive(Debug, Parser)]
#[command(name = "idem", version, about = "Idempotent semiring algebra and tensor products")]
struct Cli {
    /// Builtin semiring name or table file.
    #[arg(long, global = true)]
    semiring: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Cap on exhaustively enumerated dimensions.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE)]
    size: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a semiring, module or polymap file, or `--semiring`.
    Validate { path: Option<PathBuf> },
    /// Apply a kernel to a vector.
    Apply { kernel: PathBuf, vector: PathBuf },
    /// Compose two kernels, the first applied first.
    Compose { first: PathBuf, second: PathBuf },
    /// Kronecker product of two kernels.
    Kron { left: PathBuf, right: PathBuf },
    /// Pure tensor of two vectors.
    Outer { left: PathBuf, right: PathBuf },
    /// Rank-one decomposition of a kernel.
    Nuclear { kernel: PathBuf },
    /// Canonical representation of a set of points.
    Closure {
        /// One module file per factor.
        #[arg(required = true)]
        modules: Vec<PathBuf>,
        /// Points file; the empty set when absent.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Run a property suite, or `all`.
    Check { suite: String },
}

/// A failure that has already been reported and maps to an exit code.
enum Exit {
    Usage(String),
    Failed(String),
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Exit::Usage(e.to_string()),
            other => Exit::Failed(other.to_string()),
        }
    }
}

/// Runs the command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Exit::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Exit::Failed(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit::Usage(format!("{}: {e}", path.display())))
}

/// Resolves a semiring token: a builtin name, else a table file relative
/// to `base`.
fn resolve_in(base: &Path, token: &str) -> Result<Semiring> {
    if let Some(k) = Semiring::builtin(token) {
        return Ok(k);
    }
    let path = base.join(token);
    let body = fs::read_to_string(&path)
        .map_err(|_| Error::Unsupported(format!("unknown semiring `{token}`")))?;
    text::parse_semiring(&body, &text::builtin_resolver)
}

/// Reads a file and parses it with a resolver relative to its directory.
fn load<T>(path: &Path, parse: impl Fn(&str, text::Resolver) -> Result<T>) -> std::result::Result<T, Exit> {
    let body = read(path)?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let resolve = move |t: &str| resolve_in(&base, t);
    parse(&body, &resolve).map_err(|e| match e {
        Error::Parse { line, msg } => Exit::Usage(format!("{}:{line}: {msg}", path.display())),
        other => Exit::from(other),
    })
}

fn emit(out: &mut dyn Write, s: &str) -> std::result::Result<(), Exit> {
    out.write_all(s.as_bytes())
        .map_err(|e| Exit::Failed(format!("write failed: {e}")))
}

fn emit_report(cli: &Cli, out: &mut dyn Write, r: &ValidationReport) -> std::result::Result<bool, Exit> {
    let body = match cli.format {
        Format::Lines => r.render_lines(),
        Format::Text => format!("{r}\n"),
    };
    emit(out, &body)?;
    Ok(r.passed())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> std::result::Result<bool, Exit> {
    match &cli.command {
        Command::Validate { path } => validate(cli, path.as_deref(), out),
        Command::Apply { kernel, vector } => {
            let m = load(kernel, text::parse_kernel)?;
            let v = load(vector, text::parse_vector)?;
            emit(out, &text::format_vector(&m.apply(&v)?))?;
            Ok(true)
        }
        Command::Compose { first, second } => {
            let a = load(first, text::parse_kernel)?;
            let b = load(second, text::parse_kernel)?;
            emit(out, &text::format_kernel(&compose(&a, &b)?))?;
            Ok(true)
        }
        Command::Kron { left, right } => {
            let a = load(left, text::parse_kernel)?;
            let b = load(right, text::parse_kernel)?;
            emit(out, &text::format_kernel(&a.kron(&b)?))?;
            Ok(true)
        }
        Command::Outer { left, right } => {
            let a = load(left, text::parse_vector)?;
            let b = load(right, text::parse_vector)?;
            emit(out, &text::format_kernel(&outer(&[&a, &b])?.as_kernel()))?;
            Ok(true)
        }
        Command::Nuclear { kernel } => nuclear(&load(kernel, text::parse_kernel)?, out),
        Command::Closure { modules, points } => closure(modules, points.as_deref(), out),
        Command::Check { suite } => check(cli, suite, out),
    }
}

fn validate(cli: &Cli, path: Option<&Path>, out: &mut dyn Write) -> std::result::Result<bool, Exit> {
    let report = match (path, &cli.semiring) {
        (Some(p), _) => {
            let kind = load(p, |body, _| text::detect_kind(body))?;
            match kind {
                FileKind::Semiring => load(p, text::parse_semiring)?.validate(),
                FileKind::Module => load(p, text::parse_module)?.validate(),
                FileKind::Polymap => load(p, text::parse_polymap)?.validate(),
                FileKind::Vector | FileKind::Kernel | FileKind::Points => {
                    return Err(Exit::Usage(format!(
                        "{}: only semiring, module and polymap files can be validated",
                        p.display()
                    )))
                }
            }
        }
        (None, Some(token)) => resolve_in(Path::new("."), token)
            .map_err(|e| match e {
                Error::Unsupported(m) => Exit::Usage(m),
                other => Exit::from(other),
            })?
            .validate(),
        (None, None) => return Err(Exit::Usage("validate needs a file or --semiring".into())),
    };
    emit_report(cli, out, &report)
}

fn nuclear(m: &Kernel, out: &mut dyn Write) -> std::result::Result<bool, Exit> {
    let terms = m.nuclear_decompose();
    let mut body = format!("terms {}\n", terms.len());
    let mut parts = Vec::with_capacity(terms.len());
    for t in &terms {
        body.push_str(&format!("{} ; {}\n", t.functional.format_values(), t.vector.format_values()));
        parts.push(t.to_kernel()?);
    }
    let ok = Kernel::sup(m.rows(), m.cols(), m.semiring(), &parts)? == *m;
    body.push_str(if ok { "recompose: ok\n" } else { "recompose: fail\n" });
    emit(out, &body)?;
    Ok(ok)
}

fn closure(modules: &[PathBuf], points: Option<&Path>, out: &mut dyn Write) -> std::result::Result<bool, Exit> {
    let factors = modules
        .iter()
        .map(|p| load(p, text::parse_module))
        .collect::<std::result::Result<Vec<FinSemimodule>, Exit>>()?;
    let space = TensorSpace::new(factors.clone())?;
    let pts = match points {
        Some(p) => load(p, |body, _| text::parse_points(body, &factors))?,
        None => Vec::new(),
    };
    emit(out, &text::format_points(&space.tau_hull(&pts)?))?;
    Ok(true)
}

fn check(cli: &Cli, suite: &str, out: &mut dyn Write) -> std::result::Result<bool, Exit> {
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(Exit::Usage(format!(
            "unknown suite `{suite}`; expected one of: all {}",
            SUITES.join(" ")
        )));
    }
    let semiring = match &cli.semiring {
        Some(token) => Some(resolve_in(Path::new("."), token).map_err(|e| match e {
            Error::Unsupported(m) => Exit::Usage(m),
            other => Exit::from(other),
        })?),
        None => None,
    };
    let cfg = Config {
        seed: cli.seed,
        size: cli.size,
        semiring,
    };
    let mut passed = true;
    for report in harness::run(suite, &cfg)? {
        passed &= report.passed();
        let body = match cli.format {
            Format::Lines => report.render_lines(),
            Format::Text => report.render_text(),
        };
        emit(out, &body)?;
    }
    Ok(passed)
}
