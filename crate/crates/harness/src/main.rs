use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hardyspace_harness::report::{read_csv, read_jsonl};
use hardyspace_harness::tools::{self, ToolInput};
use hardyspace_harness::{
    any_failed, emit_report, run_experiment, write_report, CheckReport, ExperimentConfig, Format,
    HarnessError, Result,
};

#[derive(Parser)]
#[command(name = "hardyspace", version, about = "Rearrangement, Hardy operator and norm toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Jsonl => Format::Jsonl,
        }
    }
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Override every pinned tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the random step-function families.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one named check, or `all`.
    Check {
        name: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// f* and f** of a configured function.
    Rearrange {
        #[command(flatten)]
        common: Common,
    },
    /// Weighted Lebesgue and Marcinkiewicz norms of a configured function.
    Norm {
        #[command(flatten)]
        common: Common,
    },
    /// A boundedness constant for configured weights.
    Constant {
        #[command(flatten)]
        common: Common,
    },
    /// Convert a saved report between formats.
    Report {
        /// Report to read (CSV or JSON lines, by extension).
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn output(reports: &[CheckReport], out: Option<&Path>, format: Format) -> Result<()> {
    match out {
        Some(path) => write_report(path, reports, format),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit_report(reports, format, &mut lock)?;
            lock.flush().map_err(|e| HarnessError::Serialize(e.to_string()))
        }
    }
}

fn check(name: Option<String>, common: Common) -> Result<Vec<CheckReport>> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_json(&read(path)?)?,
        None => ExperimentConfig::named(name.as_deref().unwrap_or("all")),
    };
    if let Some(n) = name {
        cfg.check = n;
    }
    if common.tol.is_some() {
        cfg.tol = common.tol;
    }
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    let reports = run_experiment(&cfg)?;
    let out = common.out.or(cfg.out);
    output(&reports, out.as_deref(), common.format.into())?;
    Ok(reports)
}

fn tool(f: fn(&ToolInput) -> Result<CheckReport>, common: Common) -> Result<Vec<CheckReport>> {
    let input = match &common.config {
        Some(path) => ToolInput::from_json(&read(path)?)?,
        None => ToolInput::default(),
    };
    let reports = vec![f(&input)?];
    output(&reports, common.out.as_deref(), common.format.into())?;
    Ok(reports)
}

fn report(input: PathBuf, out: Option<PathBuf>, format: Format) -> Result<Vec<CheckReport>> {
    let text = read(&input)?;
    let reports = if input.extension().is_some_and(|e| e == "csv") {
        read_csv(text.as_bytes())?
    } else {
        read_jsonl(text.as_bytes())?
    };
    output(&reports, out.as_deref(), format)?;
    Ok(reports)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { name, common } => check(name, common),
        Command::Rearrange { common } => tool(tools::rearrange, common),
        Command::Norm { common } => tool(tools::norm, common),
        Command::Constant { common } => tool(tools::constant, common),
        Command::Report { input, out, format } => report(input, out, format.into()),
    };
    match result {
        Ok(reports) if any_failed(&reports) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
