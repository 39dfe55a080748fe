use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tecentroid::eval::Method;
use tecentroid::PairOrdering;

#[derive(Debug, Parser)]
#[command(name = "tecentroid", version, about = "Time-elastic averaging and nearest-centroid evaluation")]
pub struct Cli {
    /// Worker threads for parallel stages (default: available parallelism).
    #[arg(long, global = true, env = "TECENTROID_THREADS")]
    pub threads: Option<usize>,

    /// Write results to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Z-normalize every input series per channel before use.
    #[arg(long, global = true)]
    pub normalize: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Centroid of the series in one file.
    Avg(AvgArgs),
    /// Nearest-centroid test error of one method.
    Classify(ClassifyArgs),
    /// Leave-one-out error of each stiffness in a grid.
    TuneNu(TuneArgs),
    /// KDTW Gram matrix of the series in one file.
    Gram(GramArgs),
    /// Alignment matrix average of the first two series in a file.
    Ama(AmaArgs),
    /// Emit a synthetic dataset.
    Fixtures(FixtureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// Kernel stiffness.
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,

    /// Sakoe-Chiba corridor radius (unconstrained when absent).
    #[arg(long)]
    pub corridor: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AvgMethod {
    Dba,
    Kdba,
    Ikdba,
    Pwa,
    Ppwa,
    Preimage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ordering {
    InputOrder,
    SimilarFirst,
}

impl From<Ordering> for PairOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::InputOrder => PairOrdering::InputOrder,
            Ordering::SimilarFirst => PairOrdering::SimilarFirst,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Probe budget of the preimage search.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,

    /// Cap on preimage search sweeps.
    #[arg(long)]
    pub sweeps: Option<usize>,

    /// Initial preimage probe step.
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct AvgArgs {
    pub input: PathBuf,

    #[arg(long, value_enum)]
    pub method: AvgMethod,

    /// Only average the series carrying this label.
    #[arg(long)]
    pub class: Option<String>,

    #[command(flatten)]
    pub kernel: KernelArgs,

    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,

    #[arg(long, value_enum, default_value = "input-order")]
    pub ordering: Ordering,

    #[command(flatten)]
    pub search: SearchArgs,

    /// Also write the inertia trace as CSV to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub train: PathBuf,

    #[arg(long)]
    pub test: PathBuf,

    /// dtw-medoid, dba, kdtw-medoid, ikdba, ppwa or preimage.
    #[arg(long, value_parser = parse_method)]
    pub method: Method,

    #[command(flatten)]
    pub kernel: KernelArgs,

    /// Pick the stiffness by leave-one-out on the training set.
    #[arg(long)]
    pub tune_nu: bool,

    /// Comma-separated stiffness grid for --tune-nu.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,

    /// Dataset name in the report (default: training file stem).
    #[arg(long)]
    pub dataset: Option<String>,

    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,

    #[arg(long, value_enum, default_value = "input-order")]
    pub ordering: Ordering,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long)]
    pub train: PathBuf,

    /// kdtw-medoid, ikdba, ppwa or preimage.
    #[arg(long, value_parser = parse_method)]
    pub method: Method,

    /// Comma-separated stiffness grid.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,

    #[arg(long)]
    pub corridor: Option<usize>,

    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,

    #[arg(long, value_enum, default_value = "input-order")]
    pub ordering: Ordering,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    pub input: PathBuf,

    #[command(flatten)]
    pub kernel: KernelArgs,

    /// Emit natural logs of the kernel values.
    #[arg(long, conflicts_with = "normalized")]
    pub log: bool,

    /// Emit k(x,y) / sqrt(k(x,x) k(y,y)).
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Debug, Args)]
pub struct AmaArgs {
    pub input: PathBuf,

    #[command(flatten)]
    pub kernel: KernelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureKind {
    Triangles,
    SineHalfwave,
    Pwm,
    Cbf,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(long, value_enum)]
    pub kind: FixtureKind,

    /// Series length (ignored for cbf, which is always 128).
    #[arg(long, default_value_t = 100)]
    pub len: usize,

    #[arg(long, default_value_t = 30)]
    pub first_peak: usize,

    #[arg(long, default_value_t = 70)]
    pub second_peak: usize,

    #[arg(long, default_value_t = 25.0)]
    pub half_width: f64,

    #[arg(long, default_value_t = 1.5)]
    pub periods: f64,

    #[arg(long, default_value_t = 10)]
    pub per_class: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: tecentroid::Error| e.to_string())
}
