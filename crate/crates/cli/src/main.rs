//! Operator-facing binary wiring ingestion, cleaning, splitting,
//! rendering, and scoring behind one JSON config.
//!
//! Every subcommand keeps machine output on stdout or in files and
//! diagnostics on stderr, and exits nonzero when anything failed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

#[derive(Parser)]
#[command(name = "molforge", version, about = "Molecule corpus pipeline and scoring tools")]
struct Cli {
    /// Worker threads; 0 keeps the library default. Outputs never
    /// depend on this value.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonicalize SMILES read one per line.
    Canon {
        /// Input file; stdin when absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Ingest configured sources into records.jsonl, rejects.jsonl, and stats.json.
    Build {
        /// Pipeline config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Assign splits to a record file and write leakage_audit.json.
    Split {
        /// Pipeline config file.
        #[arg(long)]
        config: PathBuf,
        /// Record file; defaults to records.jsonl in the output directory.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Render instruction samples from a record file into samples.jsonl.
    Render {
        /// Pipeline config file.
        #[arg(long)]
        config: PathBuf,
        /// Record file; defaults to records.jsonl in the output directory.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Score predictions against references for one task.
    Score {
        /// Task code, e.g. FS or PP-ESOL.
        #[arg(long)]
        task: String,
        /// Predictions, one JSON object per line.
        #[arg(long)]
        predictions: PathBuf,
        /// References, one JSON object per line.
        #[arg(long)]
        references: PathBuf,
        /// Also report exact match over the first k outputs.
        #[arg(long)]
        k: Option<usize>,
        /// Report file.
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Summarize molecule statistics over a record file.
    Stats {
        /// Record file.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check SMILES validity line by line, one JSON verdict per line.
    Validate {
        /// Input file; stdin when absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // The global pool can already exist inside a test harness;
        // keeping the existing pool is fine because thread count never
        // changes any output.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let result = match cli.command {
        Command::Canon { input } => commands::canon::run(input.as_deref()),
        Command::Build { config } => commands::build::run(&config),
        Command::Split { config, input } => commands::split::run(&config, input.as_deref()),
        Command::Render { config, input } => commands::render::run(&config, input.as_deref()),
        Command::Score { task, predictions, references, k, out } => {
            commands::score::run(&task, &predictions, &references, k, &out)
        }
        Command::Stats { input } => commands::stats::run(&input),
        Command::Validate { input } => commands::validate::run(input.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
