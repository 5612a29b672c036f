//! Command-line driver: `quasimicro {simulate|fit|verify} <subkind> [flags]`.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or malformed input, 3 model
//! error (including GARCH non-convergence, which still prints its JSON),
//! 4 a failed `verify` check.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::{json, Value};

pub mod args;
pub mod commands;
pub mod config;
pub mod csv_io;
pub mod verify;

use args::{Cli, Command, Common};
use config::Settings;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error(transparent)]
    Model(#[from] quasimicro_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) | CliError::Input(_) => 2,
            CliError::Model(_) => 3,
        }
    }
}

/// What a command produced. Nothing is written until the command has
/// finished, so failures leave no partial files behind.
pub struct Output {
    /// Main artifact: CSV or JSON text.
    pub body: String,
    /// Metadata JSON for CSV artifacts; goes to `<out>.meta.json`, or to
    /// standard error without `--out`.
    pub meta: Option<String>,
    pub exit_code: i32,
}

/// The fixed top-level schema of every JSON artifact.
pub fn envelope(seed: u64, config: Value, results: Value) -> Value {
    json!({
        "version": VERSION,
        "seed": seed,
        "config": config,
        "results": results,
    })
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Shared settings resolved for one run.
pub struct RunContext {
    pub settings: Settings,
    pub seed: u64,
    pub threads: usize,
    pub out: Option<PathBuf>,
    pub format: String,
}

impl RunContext {
    /// `with_format` is false for commands whose output is always JSON.
    pub fn new(common: &Common, with_format: bool) -> Result<Self, CliError> {
        let mut settings = Settings::load(common.config.as_deref())?;
        let seed = settings.get("seed", common.seed, 0u64)?;
        let threads = settings.get("threads", common.threads, 1usize)?;
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        let format = if with_format {
            settings.get("format", common.format.clone(), "csv".to_string())?
        } else {
            "json".to_string()
        };
        if format != "csv" && format != "json" {
            return Err(CliError::Usage(format!("unknown format `{format}`")));
        }
        Ok(Self {
            settings,
            seed,
            threads,
            out: common.out.clone(),
            format,
        })
    }

    pub fn json(&self) -> bool {
        self.format == "json"
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, output: &Output) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_file(path, &output.body)?;
            if let Some(meta) = &output.meta {
                let mut side = path.as_os_str().to_owned();
                side.push(".meta.json");
                write_file(Path::new(&side), meta)?;
            }
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("standard output: {e}")))?;
            if let Some(meta) = &output.meta {
                eprint!("{meta}");
            }
        }
    }
    Ok(())
}

fn common_of(cmd: &Command) -> &Common {
    use args::{FitKind as F, SimulateKind as S};
    match cmd {
        Command::Simulate { kind } => match kind {
            S::Wiener(a) => &a.common,
            S::Jls(a) => &a.common,
            S::Ticks(a) => &a.common,
            S::Ecology(a) => &a.common,
            S::Kinematic(a) => &a.common,
            S::Twopop(a) => &a.common,
            S::Garch(a) => &a.common,
        },
        Command::Fit { kind } => match kind {
            F::Tail(a) => &a.input.common,
            F::Garch(a) => &a.common,
            F::Jls(a) => &a.input.common,
            F::Regimes(a) => &a.input.common,
        },
        Command::Verify(a) => &a.common,
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let with_format = matches!(cli.command, Command::Simulate { .. });
    let mut ctx = RunContext::new(common_of(&cli.command), with_format)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let output = pool.install(|| match &cli.command {
        Command::Simulate { kind } => commands::simulate(kind, &mut ctx),
        Command::Fit { kind } => commands::fit(kind, &mut ctx),
        Command::Verify(_) => commands::verify(&mut ctx),
    })?;
    emit(ctx.out.as_deref(), &output)?;
    Ok(output.exit_code)
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
