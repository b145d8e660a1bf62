//! Command-line front end: runs scenario files through the dsql-core models
//! and writes CSV/JSON tables with a JSON run summary.

// `!(x > 0.0)` style guards are used so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod experiments;
pub mod output;
pub mod scenario;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },
    #[error(transparent)]
    Physics(#[from] dsql_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for bad input, 2 when the physics cannot deliver the request.
    pub fn exit_code(&self) -> i32 {
        use dsql_core::Error as E;
        match self {
            Self::Physics(E::Domain { .. }) => 1,
            Self::Physics(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dsql-sim", version = VERSION, about = "Ground-to-space quantum link and relativity experiment scenarios")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario file, or a bundled scenario by name.
    Run {
        scenario: String,
        /// Overrides the seed in the file.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: logical cores).
        #[arg(long, env = "DSQL_SIM_THREADS")]
        threads: Option<usize>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// List bundled scenarios.
    List,
    /// Print the toolkit version.
    Version,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub format: Format,
}

/// A finished run, before anything is written.
pub struct Execution {
    pub scenario: scenario::Scenario,
    pub result: experiments::RunResult,
    pub seed: Option<u64>,
    pub threads: usize,
    pub wall_time_s: f64,
    pub scenario_sha256: String,
}

impl Execution {
    pub fn body(&self, format: Format) -> String {
        match format {
            Format::Csv => self.result.table.to_csv(),
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.result.table.to_json()).expect("plain data");
                s.push('\n');
                s
            }
        }
    }

    pub fn summary(&self, format: Format, output_file: &Path) -> serde_json::Value {
        json!({
            "name": self.scenario.name,
            "experiment": self.scenario.kind(),
            "description": self.scenario.description,
            "toolkit_version": VERSION,
            "scenario_sha256": self.scenario_sha256,
            "seed": self.seed,
            "threads": self.threads,
            "format": match format { Format::Csv => "csv", Format::Json => "json" },
            "rows": self.result.table.rows.len(),
            "output_file": output_file.display().to_string(),
            "wall_time_s": self.wall_time_s,
            "results": self.result.extras,
        })
    }
}

/// Parses and runs scenario text on a pool of `threads` workers.
pub fn execute(
    text: &str,
    seed: Option<u64>,
    threads: Option<usize>,
) -> Result<Execution, CliError> {
    let start = Instant::now();
    let scenario = scenario::parse(text)?;
    let seed = seed.or(scenario.seed);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let result = pool.install(|| experiments::run(&scenario, seed))?;
    Ok(Execution {
        seed,
        threads: pool.current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
        scenario_sha256: hex::encode(Sha256::digest(text.as_bytes())),
        scenario,
        result,
    })
}

/// Reads a scenario from disk, falling back to the bundled catalog.
pub fn load_scenario(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        });
    }
    catalog::find(arg)
        .map(|b| b.text.to_string())
        .ok_or_else(|| {
            CliError::Usage(format!(
                "'{arg}' is neither a readable file nor a bundled scenario (see `dsql-sim list`)"
            ))
        })
}

/// Runs and writes `<dir>/<name>.<csv|json>` and `<dir>/<name>.summary.json`.
/// Returns the two paths.
pub fn run_to_dir(text: &str, opts: &RunOptions) -> Result<(PathBuf, PathBuf), CliError> {
    let exec = execute(text, opts.seed, opts.threads)?;
    let dir = opts
        .output_dir
        .clone()
        .or_else(|| exec.scenario.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let ext = match opts.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let data = dir.join(format!("{}.{ext}", exec.scenario.name));
    let summary = dir.join(format!("{}.summary.json", exec.scenario.name));
    let write = |p: &Path, s: &str| {
        std::fs::write(p, s).map_err(|source| CliError::Io {
            path: p.into(),
            source,
        })
    };
    write(&data, &exec.body(opts.format))?;
    let mut s =
        serde_json::to_string_pretty(&exec.summary(opts.format, &data)).expect("plain data");
    s.push('\n');
    write(&summary, &s)?;
    Ok((data, summary))
}

/// Entry point; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match cli.command {
        Command::Version => {
            println!("dsql-sim {VERSION}");
            0
        }
        Command::List => {
            for b in catalog::BUNDLED {
                println!("{:<24} {:<13} {}", b.name, b.experiment, b.reproduces);
            }
            0
        }
        Command::Run {
            scenario,
            seed,
            threads,
            output_dir,
            format,
        } => {
            let opts = RunOptions {
                seed,
                threads,
                output_dir,
                format,
            };
            match load_scenario(&scenario).and_then(|text| run_to_dir(&text, &opts)) {
                Ok((data, summary)) => {
                    println!("wrote {}", data.display());
                    println!("wrote {}", summary.display());
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
    }
}
