//! Subcommands of the `equispace` binary, returning their output and exit
//! code instead of printing, so they can be driven from tests.

use std::ffi::OsString;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use equispace::analytic::{from_signature, sample, sig_of, AnalyticSpacing, Flavor};
use equispace::bench::bench_verify;
use equispace::gluing::{glue, glueable};
use equispace::linalg::Vector;
use equispace::orthocentric::check_system;
use equispace::signatures::{count_maximal, enumerate_eq, enumerate_neq, Signature};
use equispace::spacing::{verify, verify_naive, LabeledPointSet};
use equispace::transforms::to_equilateral_normal_form;
use equispace::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const ENUMERATE_CSV_HEADER: &str = "family,signature,I,n";

#[derive(Parser, Debug)]
#[command(name = "equispace", version, about = "Equidistant spacings toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Numerical tolerance.
    #[arg(long, global = true, env = "EQUISPACE_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the main output here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Eq,
    Neq,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlavorArg {
    Coincident,
    Distinct,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Coincident => Flavor::Coincident,
            FlavorArg::Distinct => Flavor::Distinct,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a labeled point set is an equidistant spacing.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        /// Use the pairwise oracle instead of the linear-time verifier.
        #[arg(long)]
        naive: bool,
    },
    /// Build the normal-form spacing of a signature such as "0;(2,1)".
    Construct {
        signature: String,
        #[arg(long, value_enum, default_value = "distinct")]
        flavor: FlavorArg,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        /// Also sample this many points per class.
        #[arg(long)]
        samples: Option<usize>,
        /// Where to write the sample (stdout after the spacing when omitted).
        #[arg(long)]
        sample_output: Option<PathBuf>,
    },
    /// List the signatures with total `sum` and where they are maximal.
    Enumerate {
        #[arg(long)]
        sum: usize,
        #[arg(long, value_enum, default_value = "both")]
        family: Family,
    },
    /// Count isometry classes of maximal spacings in R^n.
    Count { n: usize },
    /// Signature of a maximal spacing.
    Sig {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Glue two spacings.
    Glue { a: PathBuf, b: PathBuf },
    /// Equilateral normal form of a maximal spacing, with the isometry used.
    Normalize {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
    },
    /// Test whether points form an orthocentric system. The input is a JSON
    /// list of points or a labeled point set (one point per class).
    Orthocheck {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Sample a symbolic spacing into a labeled point set.
    Sample {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Time the linear-time verifier against the pairwise oracle.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000,8000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        classes: usize,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Exit code for a library error: bad input is a usage error, everything else
/// a negative answer.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSignature(_)
        | Error::InvalidPartition(_)
        | Error::OutOfRange(_)
        | Error::Malformed(_)
        | Error::DimensionMismatch { .. }
        | Error::Empty(_) => EXIT_USAGE,
        _ => EXIT_NEGATIVE,
    }
}

fn from_error(e: Error) -> Outcome {
    Outcome::fail(error_code(&e), format!("error: {e}"))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn read_text(path: &Path) -> Result<String, Outcome> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Outcome> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Outcome> {
    fs::write(path, text)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: cannot write {}: {e}", path.display())))
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let common = &cli.common;
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        return Outcome::fail(EXIT_USAGE, format!("error: tolerance must be positive, got {}", common.tol));
    }
    let result = match &cli.command {
        Command::Verify { input, naive } => cmd_verify(input, *naive, common.tol),
        Command::Construct {
            signature,
            flavor,
            r,
            samples,
            sample_output,
        } => cmd_construct(
            signature,
            (*flavor).into(),
            *r,
            *samples,
            sample_output.as_deref(),
            common.seed,
        ),
        Command::Enumerate { sum, family } => {
            cmd_enumerate(*sum, *family, common.format.unwrap_or(Format::Csv))
        }
        Command::Count { n } => Ok(cmd_count(*n, common.format)),
        Command::Sig { input } => cmd_sig(input, common.tol),
        Command::Glue { a, b } => cmd_glue(a, b, common.tol),
        Command::Normalize { input, r } => cmd_normalize(input, *r, common.tol),
        Command::Orthocheck { input } => cmd_orthocheck(input, common.tol),
        Command::Sample { input, samples } => cmd_sample(input, *samples, common.seed),
        Command::Bench {
            sizes,
            classes,
            dim,
            repeats,
        } => cmd_bench(
            sizes,
            *classes,
            *dim,
            *repeats,
            common.seed,
            common.tol,
            common.format.unwrap_or(Format::Csv),
        ),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(o) => return o,
    };
    match &common.output {
        Some(path) if !outcome.stdout.is_empty() => match write_file(path, &outcome.stdout) {
            Ok(()) => Outcome {
                stdout: String::new(),
                ..outcome
            },
            Err(o) => o,
        },
        _ => outcome,
    }
}

type CmdResult = Result<Outcome, Outcome>;

pub fn cmd_verify(input: &Path, naive: bool, tol: f64) -> CmdResult {
    let y: LabeledPointSet = read_json(input)?;
    let report = if naive {
        verify_naive(&y, tol)
    } else {
        verify(&y, tol)
    };
    let code = if report.accepted { EXIT_OK } else { EXIT_NEGATIVE };
    let mut out = Outcome::with_code(code, pretty(&report));
    if let Some(f) = &report.failure {
        out.stderr = format!("rejected at stage {}\n", f.stage.name());
    }
    Ok(out)
}

fn parse_signature(text: &str) -> Result<Signature, Outcome> {
    text.parse::<Signature>().map_err(from_error)
}

pub fn cmd_construct(
    signature: &str,
    flavor: Flavor,
    r: f64,
    samples: Option<usize>,
    sample_output: Option<&Path>,
    seed: u64,
) -> CmdResult {
    let sig = parse_signature(signature)?;
    let spacing = from_signature(&sig, flavor, r, 0).map_err(from_error)?;
    let mut stdout = pretty(&spacing);
    if let Some(k) = samples {
        let y = sample(&spacing, k, seed).map_err(from_error)?;
        match sample_output {
            Some(path) => write_file(path, &pretty(&y))?,
            None => stdout.push_str(&pretty(&y)),
        }
    }
    Ok(Outcome::ok(stdout))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerateRow {
    pub family: &'static str,
    pub signature: String,
    #[serde(rename = "I")]
    pub classes: usize,
    pub n: usize,
}

/// Rows of `enumerate`: coincident family first, each in generation order.
pub fn enumerate_rows(sum: usize, family: Family) -> Result<Vec<EnumerateRow>, Error> {
    let mut rows = Vec::new();
    if matches!(family, Family::Eq | Family::Both) {
        for s in enumerate_eq(sum)? {
            let p = s.eq_placement().expect("generated signatures are placed");
            rows.push(EnumerateRow {
                family: "eq",
                signature: s.to_string(),
                classes: p.classes,
                n: p.dimension,
            });
        }
    }
    if matches!(family, Family::Neq | Family::Both) {
        for s in enumerate_neq(sum)? {
            let p = s.neq_placement().expect("generated signatures are placed");
            rows.push(EnumerateRow {
                family: "neq",
                signature: s.to_string(),
                classes: p.classes,
                n: p.dimension,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_enumerate(sum: usize, family: Family, format: Format) -> CmdResult {
    let rows = enumerate_rows(sum, family).map_err(from_error)?;
    let text = match format {
        Format::Json => pretty(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).expect("in-memory csv");
            }
            let bytes = w.into_inner().expect("in-memory csv");
            let mut text = String::from_utf8(bytes).expect("utf-8 csv");
            if rows.is_empty() {
                text = format!("{ENUMERATE_CSV_HEADER}\n");
            }
            text
        }
    };
    Ok(Outcome::ok(text))
}

pub fn cmd_count(n: usize, format: Option<Format>) -> Outcome {
    let c = count_maximal(n);
    let text = match format {
        Some(Format::Json) => {
            #[derive(Serialize)]
            struct Counted {
                n: usize,
                #[serde(flatten)]
                count: equispace::signatures::MaximalCount,
            }
            pretty(&Counted { n, count: c })
        }
        _ => format!("eq={} neq={} total={}\n", c.eq, c.neq, c.total),
    };
    Outcome::ok(text)
}

pub fn cmd_sig(input: &Path, tol: f64) -> CmdResult {
    let s: AnalyticSpacing = read_json(input)?;
    let sig = sig_of(&s, tol).map_err(from_error)?;
    Ok(Outcome::ok(format!("{sig}\n")))
}

pub fn cmd_glue(a: &Path, b: &Path, tol: f64) -> CmdResult {
    let a: AnalyticSpacing = read_json(a)?;
    let b: AnalyticSpacing = read_json(b)?;
    let verdict = glueable(&a, &b, None, tol).map_err(from_error)?;
    if !verdict.glueable {
        return Ok(Outcome::with_code(EXIT_NEGATIVE, pretty(&verdict)));
    }
    let g = glue(&a, &b, tol).map_err(from_error)?;
    Ok(Outcome::ok(pretty(&g)))
}

pub fn cmd_normalize(input: &Path, r: f64, tol: f64) -> CmdResult {
    let s: AnalyticSpacing = read_json(input)?;
    let (out, record) = to_equilateral_normal_form(&s, r, tol).map_err(from_error)?;
    Ok(Outcome::ok(pretty(&json!({
        "spacing": out,
        "record": record,
    }))))
}

pub fn cmd_orthocheck(input: &Path, tol: f64) -> CmdResult {
    let text = read_text(input)?;
    let points: Vec<Vector> = match serde_json::from_str::<Vec<Vector>>(&text) {
        Ok(p) => p,
        Err(_) => {
            let y: LabeledPointSet = serde_json::from_str(&text)
                .map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: {}: {e}", input.display())))?;
            y.classes.into_iter().flat_map(|c| c.points).collect()
        }
    };
    let report = check_system(&points, tol).map_err(from_error)?;
    let code = if report.orthocentric {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    Ok(Outcome::with_code(code, pretty(&report)))
}

pub fn cmd_sample(input: &Path, samples: usize, seed: u64) -> CmdResult {
    let s: AnalyticSpacing = read_json(input)?;
    let y = sample(&s, samples, seed).map_err(from_error)?;
    Ok(Outcome::ok(pretty(&y)))
}

pub fn cmd_bench(
    sizes: &[usize],
    classes: usize,
    dim: usize,
    repeats: usize,
    seed: u64,
    tol: f64,
    format: Format,
) -> CmdResult {
    let report = bench_verify(sizes, classes, dim, repeats, seed, tol).map_err(from_error)?;
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => pretty(&report),
    };
    let code = if report.verdicts_agree {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    Ok(Outcome::with_code(code, text))
}
