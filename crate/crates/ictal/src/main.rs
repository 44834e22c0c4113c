use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ictal::cli::{
    cmd_decompose, cmd_evaluate, cmd_features, cmd_synth, ConfigLayer, RunConfig, SynthOptions,
};

#[derive(Parser)]
#[command(
    name = "ictal",
    version,
    about = "EEG rhythm decomposition, phase-space ellipse features, and seizure / seizure-free classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split recordings into rhythms; write rhythm CSVs and filter-bank figures
    Decompose(CommonArgs),
    /// Compute the per-record ellipse-area feature table
    Features(CommonArgs),
    /// Screen features and run the cross-validated classifier sweep
    Evaluate(EvaluateArgs),
    /// Generate a deterministic synthetic dataset tree
    Synth(SynthArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Dataset root directory (decompose also accepts a single recording file)
    #[arg(long)]
    data: Option<PathBuf>,

    /// Output directory [default: out]
    #[arg(long)]
    out: Option<PathBuf>,

    /// JSON config file; explicit flags take precedence over it
    #[arg(long)]
    config: Option<PathBuf>,

    /// Sampling rate in Hz [default: 173.61]
    #[arg(long)]
    fs: Option<f64>,

    /// Comma-separated band edges in Hz [default: 4,8,16,30,60]
    #[arg(long, value_delimiter = ',')]
    fcut: Option<Vec<f64>>,

    /// Phase-space delay in samples [default: 1]
    #[arg(long)]
    tau: Option<usize>,

    /// Phase-space embedding dimension [default: 2]
    #[arg(long)]
    dim: Option<usize>,

    /// Distance metric: euclidean, cityblock or both [default: both]
    #[arg(long)]
    distance: Option<String>,

    /// Largest neighbor count to sweep [default: 10]
    #[arg(long)]
    kmax: Option<usize>,

    /// Number of cross-validation folds [default: 10]
    #[arg(long)]
    folds: Option<usize>,

    /// Seed for fold shuffling and synthetic data [default: 42]
    #[arg(long)]
    seed: Option<u64>,

    /// Feature scaling: raw or zscore [default: raw]
    #[arg(long)]
    scaling: Option<String>,

    /// Restrict figures (and decompose output) to one record id
    #[arg(long)]
    signal: Option<String>,

    /// Report format: csv, json or both [default: both]
    #[arg(long)]
    format: Option<String>,

    /// Screening p-value threshold [default: 0.05]
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Reuse an existing feature CSV instead of recomputing from --data
    #[arg(long)]
    features: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Seizure-class record count
    #[arg(long, default_value_t = 20)]
    s_count: usize,

    /// Seizure-free record count
    #[arg(long, default_value_t = 20)]
    sf_count: usize,

    /// Samples per record
    #[arg(long, default_value_t = 4096)]
    length: usize,

    /// Noise-amplitude ratio between the classes
    #[arg(long, default_value_t = 40.0)]
    gap: f64,

    /// Shuffle labels after generation (permutation-null fixture)
    #[arg(long, default_value_t = false)]
    permute_labels: bool,
}

impl CommonArgs {
    fn resolve(self) -> ictal::Result<RunConfig> {
        let file = match &self.config {
            Some(path) => Some(ConfigLayer::from_file(path)?),
            None => None,
        };
        let flags = ConfigLayer {
            data: self.data,
            out: self.out,
            fs: self.fs,
            f_cut: self.fcut,
            tau: self.tau,
            dim: self.dim,
            distance: self.distance,
            k_max: self.kmax,
            n_folds: self.folds,
            seed: self.seed,
            scaling: self.scaling,
            signal: self.signal,
            format: self.format,
            p_threshold: self.threshold,
        };
        RunConfig::resolve(file, flags)
    }
}

fn run(cli: Cli) -> ictal::Result<Vec<PathBuf>> {
    match cli.command {
        Command::Decompose(args) => cmd_decompose(&args.resolve()?),
        Command::Features(args) => cmd_features(&args.resolve()?),
        Command::Evaluate(args) => {
            let features = args.features.clone();
            cmd_evaluate(&args.common.resolve()?, features.as_deref())
        }
        Command::Synth(args) => {
            let opts = SynthOptions {
                s_count: args.s_count,
                sf_count: args.sf_count,
                length: args.length,
                gap: args.gap,
                permute_labels: args.permute_labels,
            };
            cmd_synth(&args.common.resolve()?, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for path in paths {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
