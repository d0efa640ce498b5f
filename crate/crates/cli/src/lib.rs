//! Batch command surface for the `ppmm` binary. Every command writes its
//! primary outputs plus a `<command>-manifest.json` into the output
//! directory and maps failures onto exit codes: 2 for input or validation
//! problems, 3 for convergence failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub mod args;
mod commands;
mod plot;
pub mod schema;

pub use args::Cli;
use args::Command;
use schema::{ErrorReport, FileDigest, Manifest, Timing, Versions, ERROR_SCHEMA, MANIFEST_SCHEMA};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_QUALITY: u8 = 3;

/// Split-R̂ at or above this fails a fit with exit code 3.
pub const RHAT_FAILURE: f64 = 1.2;

#[derive(Debug)]
pub enum Failure {
    Invalid { kind: String, message: String },
    Quality(String),
}

impl Failure {
    pub fn invalid(kind: &str, message: impl Into<String>) -> Self {
        Failure::Invalid {
            kind: kind.to_owned(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid { .. } => EXIT_INVALID,
            Failure::Quality(_) => EXIT_QUALITY,
        }
    }

    pub fn report(&self) -> ErrorReport {
        let (kind, message) = match self {
            Failure::Invalid { kind, message } => (kind.clone(), message.clone()),
            Failure::Quality(m) => ("convergence".to_owned(), m.clone()),
        };
        ErrorReport {
            schema_version: ERROR_SCHEMA.to_owned(),
            kind,
            message,
        }
    }
}

impl From<ppmm::Error> for Failure {
    fn from(e: ppmm::Error) -> Self {
        Failure::invalid(e.kind(), e.to_string())
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

/// Tracks the files a command reads and writes for its manifest.
pub(crate) struct Run {
    command: &'static str,
    out_dir: PathBuf,
    seed: Option<u64>,
    config: serde_json::Value,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

impl Run {
    fn new(command: &'static str, out_dir: &Path, config: &impl Serialize) -> Self {
        Run {
            command,
            out_dir: out_dir.to_path_buf(),
            seed: None,
            config: serde_json::to_value(config).unwrap_or(serde_json::Value::Null),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub(crate) fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub(crate) fn out_path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub(crate) fn prepare_out_dir(&self) -> CmdResult<()> {
        fs::create_dir_all(&self.out_dir).map_err(|e| {
            Failure::invalid(
                "io",
                format!("cannot create `{}`: {e}", self.out_dir.display()),
            )
        })
    }

    pub(crate) fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> CmdResult<PathBuf> {
        let path = self.out_path(name);
        fs::write(&path, bytes).map_err(|e| {
            Failure::invalid("io", format!("cannot write `{}`: {e}", path.display()))
        })?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub(crate) fn write_json(&mut self, name: &str, value: &impl Serialize) -> CmdResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| Failure::invalid("serialization", e.to_string()))?;
        text.push('\n');
        self.write(name, text)
    }

    fn manifest(
        &self,
        argv: &[String],
        exit_code: u8,
        started: SystemTime,
        clock: Instant,
    ) -> Manifest {
        let digests = |paths: &[PathBuf]| paths.iter().filter_map(|p| digest(p).ok()).collect();
        Manifest {
            schema_version: MANIFEST_SCHEMA.to_owned(),
            command: self.command.to_owned(),
            argv: argv.to_vec(),
            config: self.config.clone(),
            seed: self.seed,
            inputs: digests(&self.inputs),
            outputs: digests(&self.outputs),
            versions: Versions {
                ppmm: ppmm::VERSION.to_owned(),
                ppmm_cli: env!("CARGO_PKG_VERSION").to_owned(),
            },
            exit_code,
            timing: Timing {
                started_unix_ms: started
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_millis()),
                elapsed_ms: clock.elapsed().as_millis(),
            },
        }
    }
}

pub fn digest(path: &Path) -> std::io::Result<FileDigest> {
    let bytes = fs::read(path)?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: format!("{:x}", Sha256::digest(&bytes)),
        bytes: bytes.len() as u64,
    })
}

/// Execute a parsed command line and return the process exit code.
pub fn run(cli: Cli, argv: &[String]) -> u8 {
    let started = SystemTime::now();
    let clock = Instant::now();
    let threads = cli.threads;
    if let Command::Template(a) = &cli.command {
        return match commands::template(a) {
            Ok(text) => {
                print!("{text}");
                EXIT_OK
            }
            Err(f) => {
                eprintln!("{}", serde_json::to_string(&f.report()).unwrap_or_default());
                f.exit_code()
            }
        };
    }
    let (mut run, outcome) = match cli.command {
        Command::Aggregate(a) => {
            let mut run = Run::new("aggregate", &a.out.out_dir, &a);
            let r = commands::aggregate(&a, &mut run);
            (run, r)
        }
        Command::Fit(a) => {
            let mut run = Run::new("fit", &a.out.out_dir, &a);
            run.seed = Some(a.seed);
            let r = commands::fit(&a, threads, &mut run);
            (run, r)
        }
        Command::Simulate(a) => {
            let mut run = Run::new("simulate", &a.out.out_dir, &a);
            run.seed = Some(a.seed);
            let r = commands::simulate(&a, &mut run);
            (run, r)
        }
        Command::Coverage(a) => {
            let mut run = Run::new("coverage", &a.out.out_dir, &a);
            run.seed = Some(a.seed);
            let r = commands::coverage(&a, threads, &mut run);
            (run, r)
        }
        Command::Plotdata(a) => {
            let mut run = Run::new("plotdata", &a.out.out_dir, &a);
            let r = plot::plotdata(&a, &mut run);
            (run, r)
        }
        Command::Template(_) => unreachable!("handled above"),
    };
    let code = match &outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let report = f.report();
            eprintln!(
                "{}",
                serde_json::to_string(&report).unwrap_or_else(|_| report.message.clone())
            );
            f.exit_code()
        }
    };
    if run.out_dir.is_dir() {
        let manifest = run.manifest(argv, code, started, clock);
        let name = format!("{}-manifest.json", run.command);
        run.outputs.clear();
        if let Err(Failure::Invalid { message, .. }) = run.write_json(&name, &manifest) {
            eprintln!("{message}");
        }
    }
    code
}
