//! `eeq`: ingest locale tables, run the analyses, query burden, serve the API.
//!
//! Exit codes: 0 success, 1 configuration or data error, 2 not found.

mod commands;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "eeq", version, about = "Energy equity analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and join the canonical CSV tables into a snapshot file.
    Ingest {
        /// Directory holding race.csv, hispanic.csv, tenure.csv, ...
        #[arg(long)]
        data_dir: PathBuf,
        /// JSON rate schedule.
        #[arg(long)]
        rates_file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Free-text provenance note stored in the snapshot.
        #[arg(long)]
        note: Option<String>,
    },
    /// Fit the consumption tree; write importance.json, metrics.json, tree.json.
    Analyze {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        tree: TreeArgs,
    },
    /// Energy burden of one locale.
    Burden {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        zip: String,
        /// Override the snapshot's state-average threshold (percent).
        #[arg(long)]
        state_average: Option<f64>,
    },
    /// Pearson correlation matrix between two feature groups, as CSV.
    Pcc {
        #[arg(long)]
        snapshot: PathBuf,
        /// Comma-separated feature names, or one of: race, tenure, income, year_built.
        #[arg(long)]
        group_a: String,
        #[arg(long)]
        group_b: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the JSON API (and optionally the portal) until interrupted.
    Serve {
        #[arg(long, env = "EEQ_SNAPSHOT")]
        snapshot: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        #[arg(long)]
        state_average: Option<f64>,
        /// Directory with the built portal assets.
        #[arg(long)]
        assets: Option<PathBuf>,
        #[command(flatten)]
        tree: TreeArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
struct TreeArgs {
    #[arg(long, default_value_t = 6)]
    max_depth: usize,
    #[arg(long, default_value_t = 5)]
    min_samples_leaf: usize,
    #[arg(long, default_value_t = 0.0)]
    min_impurity_decrease: f64,
}

impl From<TreeArgs> for eeq_core::xai::TreeParams {
    fn from(args: TreeArgs) -> Self {
        eeq_core::xai::TreeParams {
            max_depth: args.max_depth,
            min_samples_leaf: args.min_samples_leaf,
            min_impurity_decrease: args.min_impurity_decrease,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let result = match cli.command {
        Command::Ingest {
            data_dir,
            rates_file,
            out,
            note,
        } => commands::ingest(&data_dir, &rates_file, &out, note),
        Command::Analyze {
            snapshot,
            out_dir,
            tree,
        } => commands::analyze(&snapshot, &out_dir, &tree.into()),
        Command::Burden {
            snapshot,
            zip,
            state_average,
        } => commands::burden(&snapshot, &zip, state_average),
        Command::Pcc {
            snapshot,
            group_a,
            group_b,
            out,
        } => commands::pcc(&snapshot, &group_a, &group_b, &out),
        Command::Serve {
            snapshot,
            bind,
            state_average,
            assets,
            tree,
        } => commands::serve(snapshot, bind, state_average, assets, tree.into()),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
