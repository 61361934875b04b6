mod commands;
mod config;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radiocorr_core::{Error, Result};

use config::PipelineConfig;

#[derive(Debug, Parser)]
#[command(
    name = "radiocorr",
    version,
    about = "Radiomic features, classifiers and correlation-based explanation of deep features"
)]
struct Cli {
    /// TOML pipeline configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides every seed in the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Log and skip samples that fail instead of aborting.
    #[arg(long, global = true)]
    skip_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract radiomic features for every sample in a manifest.
    Extract(commands::ExtractArgs),
    /// Drop near-constant and strongly correlated feature columns.
    Preprocess(commands::PreprocessArgs),
    /// Sequential forward feature selection with the random forest.
    Select(commands::SelectArgs),
    /// Cross-validate random forests and keep the best fold model.
    Train(commands::TrainArgs),
    /// Score samples with a trained model.
    Predict(commands::PredictArgs),
    /// Correlate radiomic with deep features and count explained features.
    Explain(commands::ExplainArgs),
    /// Rebuild saliency maps from exported tensors.
    Cam(commands::CamArgs),
    /// Summarize JSON reports as Markdown.
    Report(commands::ReportArgs),
    /// Write the feature dictionary for the current configuration.
    Dictionary(DictionaryArgs),
}

#[derive(Debug, Args)]
struct DictionaryArgs {
    /// Output CSV.
    #[arg(long)]
    out: PathBuf,
}

pub struct Globals {
    pub config: PipelineConfig,
    pub skip_errors: bool,
}

fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    }
    let globals = Globals {
        config: PipelineConfig::load(cli.config.as_deref(), cli.seed)?,
        skip_errors: cli.skip_errors,
    };
    match cli.command {
        Command::Extract(a) => commands::extract(&globals, &a),
        Command::Preprocess(a) => commands::preprocess(&globals, &a),
        Command::Select(a) => commands::select(&globals, &a),
        Command::Train(a) => commands::train(&globals, &a),
        Command::Predict(a) => commands::predict(&globals, &a),
        Command::Explain(a) => commands::explain(&globals, &a),
        Command::Cam(a) => commands::cam(&globals, &a),
        Command::Report(a) => commands::report(&a),
        Command::Dictionary(a) => commands::dictionary(&globals, &a.out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_degenerate_data() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
