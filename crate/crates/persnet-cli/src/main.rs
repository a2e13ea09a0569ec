//! Command line for the persistence pipeline: generate benchmark network
//! families, turn a network or price history into a Wasserstein distance
//! series, and compare the full analysis against its pruned counterpart.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use persnet::centrality::{EdgeCost, ThresholdRank};
use persnet::io;
use persnet::persistence::PersistenceDiagram;
use persnet::pipeline::{self, ComparisonDocument, IngestMode, PipelineConfig, RunMetadata};
use persnet::simgen::{self, Experiment, SimSpec};
use persnet::Error;

#[derive(Parser)]
#[command(
    name = "persnet",
    version,
    about = "Persistence-diagram analysis of dynamic weighted networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded benchmark network family.
    Simulate(SimulateArgs),
    /// Compute the Wasserstein distance series of one input.
    Analyze(AnalyzeArgs),
    /// Run the full and pruned pipelines and report their agreement.
    Compare(CompareArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Benchmark family: hub, covariance, or ar1.
    #[arg(long)]
    experiment: Experiment,
    #[arg(long)]
    seed: u64,
    /// Number of networks; defaults to the experiment's reference size.
    #[arg(long)]
    n_networks: Option<usize>,
    /// Nodes per network; defaults to the experiment's reference size.
    #[arg(long)]
    n_nodes: Option<usize>,
    /// Samples per node; defaults to the experiment's reference size.
    #[arg(long)]
    sample_len: Option<usize>,
    /// Beta shape for the covariance experiment's partial correlations.
    #[arg(long)]
    alpha: Option<f64>,
    /// AR coefficient for the ar1 experiment.
    #[arg(long)]
    phi: Option<f64>,
    /// Directory to write the network files into.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    /// Network directory or price CSV, depending on --mode.
    #[arg(long = "in")]
    input: PathBuf,
    /// How to read the input: matrix-dir, price-corr, or logret-cloud.
    #[arg(long, default_value_t = IngestMode::MatrixDir)]
    mode: IngestMode,
    /// Pruning threshold: min, q1, q2, q3, max, or full.
    #[arg(long)]
    threshold_rank: ThresholdRank,
    /// Window length for the price modes.
    #[arg(long)]
    window: Option<usize>,
    /// Steps between window starts in the price modes.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Highest homology dimension, 0 or 1; the series compares this one.
    #[arg(long, default_value_t = 0)]
    max_dim: u8,
    /// Wasserstein order.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Filtration cap override; larger entries become absent edges.
    #[arg(long)]
    cap: Option<f64>,
    /// Position of the reference snapshot in the series.
    #[arg(long, default_value_t = 0)]
    reference_index: usize,
    /// Keep the central node chosen at the reference step instead of
    /// re-selecting it at every step.
    #[arg(long)]
    fixed_central: bool,
    /// Path-cost convention for closeness: distance or reciprocal.
    #[arg(long, default_value_t = EdgeCost::Distance)]
    centrality_cost: EdgeCost,
}

impl PipelineArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            mode: self.mode,
            threshold_rank: self.threshold_rank,
            reference_index: self.reference_index,
            max_dim: self.max_dim,
            p: self.p,
            cap_override: self.cap,
            recompute_central_each_step: !self.fixed_central,
            window: self.window,
            stride: self.stride,
            edge_cost: self.centrality_cost,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Output CSV for the distance series.
    #[arg(long)]
    out: PathBuf,
    /// Directory for per-step diagram JSON files.
    #[arg(long)]
    diagrams_out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Output JSON for the comparison document.
    #[arg(long)]
    out: PathBuf,
    /// Two comma-separated CSV paths for the underlying series, full first.
    #[arg(long, value_delimiter = ',')]
    series_out: Option<Vec<PathBuf>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Analyze(args) => analyze(args),
        Command::Compare(args) => compare(args),
    }
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    let mut spec = match args.experiment {
        Experiment::Hub => SimSpec::hub(args.seed),
        Experiment::Covariance => SimSpec::covariance(args.seed),
        Experiment::Ar1 => SimSpec::ar1(args.seed),
    };
    if let Some(v) = args.n_networks {
        spec.n_networks = v;
    }
    if let Some(v) = args.n_nodes {
        spec.n_nodes = v;
    }
    if let Some(v) = args.sample_len {
        spec.sample_len = v;
    }
    if let Some(v) = args.alpha {
        spec.alpha = v;
    }
    if let Some(v) = args.phi {
        spec.phi = v;
    }
    spec.validate()?;
    let output = simgen::generate(&spec)?;
    io::write_network_dir(
        &args.out,
        &output.network,
        Some(args.experiment.to_string()),
        Some(args.seed),
    )?;
    println!(
        "wrote {} networks of {} nodes to {} ({} degenerate vectors redrawn)",
        output.network.len(),
        output.network.n(),
        args.out.display(),
        output.regenerated
    );
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<(), Error> {
    let config = args.pipeline.config();
    config.validate()?;
    let net = pipeline::ingest(&args.pipeline.input, &config)?;
    let diagrams = pipeline::diagram_series(&net, &config)?;
    if let Some(dir) = &args.diagrams_out {
        write_diagrams(dir, &diagrams)?;
    }
    let series = pipeline::wasserstein_series(&diagrams, &config)?;
    io::write_series_csv(&args.out, net.times(), &series)?;
    println!("wrote {} distances to {}", series.len(), args.out.display());
    Ok(())
}

fn write_diagrams(dir: &Path, diagrams: &[Vec<PersistenceDiagram>]) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    let width = diagrams.len().saturating_sub(1).to_string().len().max(3);
    for (t, dims) in diagrams.iter().enumerate() {
        for diagram in dims {
            let name = format!("t_{t:0width$}_dim{}.json", diagram.dim());
            io::write_json(&dir.join(name), &diagram.to_json())?;
        }
    }
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), Error> {
    let config = args.pipeline.config();
    config.validate()?;
    if let Some(paths) = &args.series_out {
        if paths.len() != 2 {
            return Err(Error::InvalidConfig(
                "--series-out takes exactly two paths, full then pruned".into(),
            ));
        }
    }
    let net = pipeline::ingest(&args.pipeline.input, &config)?;
    let comparison = pipeline::run_comparison(&net, config.threshold_rank, &config)?;
    if let Some(paths) = &args.series_out {
        io::write_series_csv(&paths[0], net.times(), &comparison.x)?;
        io::write_series_csv(&paths[1], net.times(), &comparison.x_tilde)?;
    }
    let document = ComparisonDocument {
        comparison,
        metadata: RunMetadata::new(&config, net.cap()),
        config,
    };
    io::write_json(&args.out, &document)?;
    println!(
        "wrote comparison (adjusted R^2 {:.4}, time ratio {:.3}) to {}",
        document.comparison.r2_adj,
        document.comparison.time_ratio,
        args.out.display()
    );
    Ok(())
}
