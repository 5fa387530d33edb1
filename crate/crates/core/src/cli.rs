//! `trimat`: command-line calculator over `.m3` documents.
//!
//! Results go to stdout as a bare object (`mscalar 2 [25 -6]`,
//! `matrix 3x3x2 { ... }`), or to `-o FILE` as a complete document.
//! Diagnostics go to stderr. Exit status: 0 success, 1 domain error (singular
//! matrix, shape mismatch, failed verification), 2 usage or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::AlgebraError;
use crate::field::FieldSpec;
use crate::grouplab::{self, LabError, Law};
use crate::tensor3d::{Matrix3, MultiScalar};
use crate::textio::{self, Document, Object};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable supplying the default `--seed` for `verify`.
pub const SEED_ENV: &str = "TRIMAT_SEED";

#[derive(Debug, Parser)]
#[command(name = "trimat", version, about = "Layered 3D-matrix calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write a full document to this file instead of printing to stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Object name used in the `-o` document.
    #[arg(long = "as", value_name = "NAME")]
    rename: Option<String>,
    /// Additional documents whose objects may be referenced by name.
    #[arg(long = "with")]
    with: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Multi-scalar determinant (one determinant per layer).
    Det {
        file: PathBuf,
        name: String,
        #[command(flatten)]
        out: Output,
    },
    /// Inverse via hat(det) ∗ adjugate.
    Inv {
        file: PathBuf,
        name: String,
        #[command(flatten)]
        out: Output,
    },
    /// Page-by-page adjugate.
    Adj {
        file: PathBuf,
        name: String,
        #[command(flatten)]
        out: Output,
    },
    /// Layer-wise product A ⊙ B.
    Mul {
        file: PathBuf,
        a: String,
        b: String,
        #[command(flatten)]
        out: Output,
    },
    /// Entrywise sum A + B.
    Add {
        file: PathBuf,
        a: String,
        b: String,
        #[command(flatten)]
        out: Output,
    },
    /// Multi-scalar action S ∗ A.
    Smul {
        file: PathBuf,
        s: String,
        a: String,
        #[command(flatten)]
        out: Output,
    },
    /// Check the additive group, monoid, closure and group laws on random samples.
    Verify {
        /// `rational`, `gf7` / `gf:7`, `float` / `float:1e-9`.
        #[arg(long)]
        field: String,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'p')]
        p: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Defaults to $TRIMAT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// add-group, semigroup, closure, gl-group or all.
        #[arg(long, default_value = "all")]
        law: String,
    },
    /// Count invertible n x n x p matrices over GF(q) by enumeration.
    Census {
        #[arg(long)]
        q: u64,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'p')]
        p: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::NotFinite(_) | LabError::NoSamples => CliError::Usage(e.to_string()),
            LabError::Algebra(AlgebraError::Field(_)) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

fn load(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|ext| ext == "json") {
        textio::document_from_json(&text)
    } else {
        textio::parse_document(&text)
    };
    parsed.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_all(file: &Path, with: &[PathBuf]) -> Result<Document, CliError> {
    let mut doc = load(file)?;
    for extra in with {
        let other = load(extra)?;
        if other.field != doc.field {
            return Err(CliError::Usage(format!(
                "{} is over {}, {} is over {}",
                extra.display(),
                other.field,
                file.display(),
                doc.field
            )));
        }
        for (name, obj) in other.objects {
            if doc.objects.contains_key(&name) {
                return Err(CliError::Usage(format!(
                    "object `{name}` is defined in more than one input"
                )));
            }
            doc.objects.insert(name, obj);
        }
    }
    Ok(doc)
}

fn matrix<'a>(doc: &'a Document, name: &str) -> Result<&'a Matrix3, CliError> {
    match doc.get(name) {
        Some(Object::Matrix(m)) => Ok(m),
        Some(other) => Err(CliError::Usage(format!(
            "`{name}` is a {}, expected a matrix",
            other.kind()
        ))),
        None => Err(CliError::Usage(format!("no object named `{name}`"))),
    }
}

fn mscalar<'a>(doc: &'a Document, name: &str) -> Result<&'a MultiScalar, CliError> {
    match doc.get(name) {
        Some(Object::MultiScalar(s)) => Ok(s),
        Some(other) => Err(CliError::Usage(format!(
            "`{name}` is a {}, expected a mscalar",
            other.kind()
        ))),
        None => Err(CliError::Usage(format!("no object named `{name}`"))),
    }
}

fn emit(
    result: Object,
    default_name: String,
    opts: &Output,
    field: FieldSpec,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    match &opts.output {
        None => writeln!(out, "{}", textio::serialize_object(&result))?,
        Some(path) => {
            let name = opts.rename.clone().unwrap_or(default_name);
            let mut doc = Document::new(field);
            doc.insert(&name, result)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            std::fs::write(path, textio::serialize_document(&doc))
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            writeln!(err, "wrote `{name}` to {}", path.display())?;
        }
    }
    Ok(EXIT_OK)
}

fn default_seed() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Det { file, name, out: o } => {
            let doc = load_all(&file, &o.with)?;
            let det = matrix(&doc, &name)?.det()?;
            emit(det.into(), format!("{name}_det"), &o, doc.field, out, err)
        }
        Command::Inv { file, name, out: o } => {
            let doc = load_all(&file, &o.with)?;
            let inv = matrix(&doc, &name)?.inverse()?;
            emit(inv.into(), format!("{name}_inv"), &o, doc.field, out, err)
        }
        Command::Adj { file, name, out: o } => {
            let doc = load_all(&file, &o.with)?;
            let adj = matrix(&doc, &name)?.adjugate()?;
            emit(adj.into(), format!("{name}_adj"), &o, doc.field, out, err)
        }
        Command::Mul { file, a, b, out: o } => {
            let doc = load_all(&file, &o.with)?;
            let prod = matrix(&doc, &a)?.odot(matrix(&doc, &b)?)?;
            emit(prod.into(), format!("{a}_mul_{b}"), &o, doc.field, out, err)
        }
        Command::Add { file, a, b, out: o } => {
            let doc = load_all(&file, &o.with)?;
            let sum = matrix(&doc, &a)?.add(matrix(&doc, &b)?)?;
            emit(sum.into(), format!("{a}_add_{b}"), &o, doc.field, out, err)
        }
        Command::Smul { file, s, a, out: o } => {
            let doc = load_all(&file, &o.with)?;
            let scaled = mscalar(&doc, &s)?.mul_matrix(matrix(&doc, &a)?)?;
            emit(
                scaled.into(),
                format!("{s}_smul_{a}"),
                &o,
                doc.field,
                out,
                err,
            )
        }
        Command::Verify {
            field,
            n,
            p,
            samples,
            seed,
            law,
        } => {
            let spec: FieldSpec = field
                .parse()
                .map_err(|e: crate::field::FieldError| CliError::Usage(e.to_string()))?;
            let laws: Vec<Law> = if law == "all" {
                Law::ALL.to_vec()
            } else {
                vec![law.parse().map_err(CliError::Usage)?]
            };
            if n == 0 || p == 0 {
                return Err(CliError::Usage("-n and -p must be positive".into()));
            }
            let seed = match seed {
                Some(s) => s,
                None => default_seed()?,
            };
            writeln!(
                out,
                "verify field={spec} n={n} p={p} samples={samples} seed={seed}"
            )?;
            let mut passed = 0;
            for law in &laws {
                let report = law.verify(n, p, spec, samples, seed)?;
                write!(out, "{}", report.to_text())?;
                writeln!(
                    err,
                    "{}: {:.1} ms",
                    law.name(),
                    report.elapsed.as_secs_f64() * 1e3
                )?;
                passed += usize::from(report.passed());
            }
            writeln!(out, "summary: {passed}/{} laws passed", laws.len())?;
            Ok(if passed == laws.len() {
                EXIT_OK
            } else {
                EXIT_DOMAIN
            })
        }
        Command::Census { q, n, p } => {
            let census = grouplab::census_gl(n, p, q)?;
            writeln!(out, "{census}")?;
            if !census.matches_closed_form() {
                writeln!(
                    err,
                    "error: enumeration disagrees with the closed form {}",
                    census.closed_form()
                )?;
                return Ok(EXIT_DOMAIN);
            }
            Ok(EXIT_OK)
        }
    }
}
