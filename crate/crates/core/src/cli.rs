//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 schema (or IR) parse error,
//! 3 no transformation, 4 ambiguous transformation, 5 runtime conversion,
//! shape or validation error, 6 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codegen::{Backend, IrBackend, JsBackend};
use crate::interp::apply;
use crate::ir::{parse_ir, Sequence};
use crate::json::JsonValue;
use crate::schema::{check, parse_schema_with_warnings, Schema};
use crate::search::{find_path, SearchOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_NO_PATH: i32 = 3;
pub const EXIT_AMBIGUOUS: i32 = 4;
pub const EXIT_RUNTIME: i32 = 5;
pub const EXIT_IO: i32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "jsonsynth",
    version,
    about = "Synthesize transformers between JSON Schemas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a transformation and emit it as code
    Synth(SynthArgs),
    /// Transform a data file
    Apply(ApplyArgs),
    /// Print the rewrite sequence relating two schemas
    Ir(PairArgs),
    /// Check a data file against a schema
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Schema the data starts in
    #[arg(long)]
    input_schema: PathBuf,
    /// Schema the data must end in
    #[arg(long)]
    output_schema: PathBuf,
    /// Write to this file instead of stdout
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Suppress warnings
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendKind {
    Js,
    Ir,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, value_enum, default_value = "js")]
    backend: BackendKind,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    /// Schema the data starts in
    #[arg(long, required_unless_present = "ir")]
    input_schema: Option<PathBuf>,
    /// Schema the data must end in
    #[arg(long, required_unless_present = "ir")]
    output_schema: Option<PathBuf>,
    /// JSON document to transform
    #[arg(long)]
    data: PathBuf,
    /// Run this textual IR instead of searching
    #[arg(long)]
    ir: Option<PathBuf>,
    /// Skip validating the data against the input schema
    #[arg(long)]
    no_validate: bool,
    /// Write to this file instead of stdout
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Suppress warnings
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, alias = "input-schema")]
    schema: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Suppress warnings
    #[arg(long)]
    quiet: bool,
}

/// A diagnostic plus the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    quiet: bool,
}

impl Ctx<'_> {
    fn warn(&mut self, msg: &str) {
        if !self.quiet {
            let _ = writeln!(self.err, "warning: {msg}");
        }
    }
}

/// Runs the CLI with process stdio.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI against the given output streams and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };

    let quiet = match &cli.command {
        Command::Synth(a) => a.pair.quiet,
        Command::Ir(a) => a.quiet,
        Command::Apply(a) => a.quiet,
        Command::Validate(a) => a.quiet,
    };
    let mut ctx = Ctx { out, err, quiet };
    let result = match cli.command {
        Command::Synth(args) => synth(&mut ctx, &args.pair, args.backend),
        Command::Ir(args) => synth(&mut ctx, &args, BackendKind::Ir),
        Command::Apply(args) => run_apply(&mut ctx, &args),
        Command::Validate(args) => run_validate(&mut ctx, &args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(ctx.err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_json(path: &Path, parse_code: i32) -> Result<JsonValue, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    JsonValue::parse(&text).map_err(|e| fail(parse_code, format!("{}: {e}", path.display())))
}

fn load_schema(ctx: &mut Ctx<'_>, path: &Path) -> Result<Schema, Failure> {
    let doc = read_json(path, EXIT_SCHEMA)?;
    let parsed = parse_schema_with_warnings(&doc)
        .map_err(|e| fail(EXIT_SCHEMA, format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        ctx.warn(&format!("{}: {w}", path.display()));
    }
    Ok(parsed.schema)
}

fn search(src: &Schema, tgt: &Schema) -> Result<Sequence, Failure> {
    match find_path(src, tgt) {
        SearchOutcome::Found(seq) => Ok(seq),
        SearchOutcome::NoPath(n) => Err(fail(EXIT_NO_PATH, n.to_string())),
        SearchOutcome::Ambiguous(a) => Err(fail(EXIT_AMBIGUOUS, a.to_string())),
    }
}

/// Writes `text` to `path` via a temporary file in the same directory, so a
/// failed run never leaves a partial file behind.
fn write_output(ctx: &mut Ctx<'_>, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| fail(EXIT_IO, format!("cannot write output: {e}"));
    match path {
        None => ctx.out.write_all(text.as_bytes()).map_err(io),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

fn synth(ctx: &mut Ctx<'_>, args: &PairArgs, backend: BackendKind) -> Result<(), Failure> {
    let src = load_schema(ctx, &args.input_schema)?;
    let tgt = load_schema(ctx, &args.output_schema)?;
    let seq = search(&src, &tgt)?;
    let program = match backend {
        BackendKind::Js => JsBackend::default().generate(&seq),
        BackendKind::Ir => IrBackend.generate(&seq),
    }
    .map_err(|e| fail(EXIT_RUNTIME, e.to_string()))?;
    write_output(ctx, args.out.as_deref(), &format!("{}\n", program.source_text))
}

fn run_apply(ctx: &mut Ctx<'_>, args: &ApplyArgs) -> Result<(), Failure> {
    let src = args
        .input_schema
        .as_deref()
        .map(|p| load_schema(ctx, p))
        .transpose()?;
    let tgt = args
        .output_schema
        .as_deref()
        .map(|p| load_schema(ctx, p))
        .transpose()?;
    let data = read_json(&args.data, EXIT_IO)?;

    if let (Some(src), false) = (&src, args.no_validate) {
        check(&data, src).map_err(|e| {
            fail(
                EXIT_RUNTIME,
                format!("input data does not match the input schema: {e}"),
            )
        })?;
    }

    let seq = match &args.ir {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| fail(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
            parse_ir(&text).map_err(|e| fail(EXIT_SCHEMA, format!("{}: {e}", path.display())))?
        }
        None => search(
            src.as_ref().expect("required by argument parser"),
            tgt.as_ref().expect("required by argument parser"),
        )?,
    };

    let result = apply(&seq, &data).map_err(|e| fail(EXIT_RUNTIME, e.to_string()))?;
    if let Some(tgt) = &tgt {
        check(&result, tgt).map_err(|e| {
            fail(
                EXIT_RUNTIME,
                format!("result does not match the output schema: {e}"),
            )
        })?;
    }
    write_output(
        ctx,
        args.out.as_deref(),
        &format!("{}\n", result.to_json_pretty()),
    )
}

fn run_validate(ctx: &mut Ctx<'_>, args: &ValidateArgs) -> Result<(), Failure> {
    let schema = load_schema(ctx, &args.schema)?;
    let data = read_json(&args.data, EXIT_IO)?;
    check(&data, &schema).map_err(|e| fail(EXIT_RUNTIME, e.to_string()))?;
    let _ = writeln!(ctx.out, "valid");
    Ok(())
}
