use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use rankcat::detect::{Detector, PropagationMode, WeightFunction};
use rankcat::eval::EpsilonStrategy;

#[derive(Debug, Parser)]
#[command(
    name = "rankcat",
    version,
    about = "Latent item categories from rankings"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Root of the output tree; runs go to <root>/<subcommand>/<name>/.
    #[arg(long, global = true, env = "RANKCAT_OUT", default_value = "out")]
    pub out_root: PathBuf,
    /// Run directory name (default: UTC timestamp).
    #[arg(long, global = true)]
    pub name: Option<String>,
    /// Report format for eval and expect; json also adds report.json to sweep and bench-sbm.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for trial and voter parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Md,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Md => "md",
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sample voter rankings with planted categories.
    Generate(GenerateArgs),
    /// Turn rankings into a thresholded similarity graph.
    BuildGraph(BuildGraphArgs),
    /// Find communities in an edge-list graph.
    Detect(DetectArgs),
    /// Score a partition against ground truth.
    Eval(EvalArgs),
    /// NMI over mixing values and voter multipliers.
    Sweep(SweepArgs),
    /// Compare detectors on stochastic block model graphs.
    BenchSbm(BenchSbmArgs),
    /// Expected intra, overall and inter-category distances.
    Expect(ExpectArgs),
    /// Categorize a MovieLens title subset from user ratings.
    IngestMovielens(IngestArgs),
    /// generate, build-graph, detect and eval in one run.
    Pipeline(PipelineArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::BuildGraph(_) => "build-graph",
            Command::Detect(_) => "detect",
            Command::Eval(_) => "eval",
            Command::Sweep(_) => "sweep",
            Command::BenchSbm(_) => "bench-sbm",
            Command::Expect(_) => "expect",
            Command::IngestMovielens(_) => "ingest-movielens",
            Command::Pipeline(_) => "pipeline",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    /// Number of categories.
    #[arg(long = "C", visible_alias = "categories", default_value_t = 2)]
    pub categories: usize,
    /// Items per category.
    #[arg(long = "S", visible_alias = "category-size", default_value_t = 20)]
    pub category_size: usize,
    /// Mixing parameter: members swapped between each pair of categories.
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long, default_value_t = 100)]
    pub voters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ThresholdArgs {
    /// Similarity threshold; defaults to the expected similarity of a random pair.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Also write the mean similarity matrix.
    #[arg(long)]
    pub dump_matrix: bool,
}

impl ThresholdArgs {
    pub fn strategy(&self) -> EpsilonStrategy {
        self.epsilon
            .map_or(EpsilonStrategy::ExpectedSimilarity, EpsilonStrategy::Fixed)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BuildGraphArgs {
    /// Rankings CSV (one row per voter).
    #[arg(long)]
    pub rankings: PathBuf,
    /// Ground truth CSV; enables the empirical alpha/beta estimate.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Wlp,
    Lp,
    Cnm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    Linear,
    Exp,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sync,
    Async,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DetectorArgs {
    #[arg(long, value_enum, default_value_t = Algo::Wlp)]
    pub algo: Algo,
    #[arg(long, value_enum, default_value_t = Weight::Linear)]
    pub weight: Weight,
    #[arg(long, value_enum, default_value_t = Mode::Async)]
    pub mode: Mode,
    /// Keep the current label when it ties for the maximum.
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub sticky_ties: Toggle,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
}

impl DetectorArgs {
    fn parts(&self) -> (PropagationMode, WeightFunction, bool) {
        let mode = match self.mode {
            Mode::Sync => PropagationMode::Sync,
            Mode::Async => PropagationMode::Async,
        };
        let weight = match self.weight {
            Weight::Linear => WeightFunction::Linear,
            Weight::Exp => WeightFunction::Exponential,
            Weight::Unit => WeightFunction::Unit,
        };
        (mode, weight, self.sticky_ties == Toggle::On)
    }

    pub fn detector(&self) -> Detector {
        self.detector_for(self.algo)
    }

    pub fn detector_for(&self, algo: Algo) -> Detector {
        let (mode, weight, sticky_ties) = self.parts();
        match algo {
            Algo::Cnm => Detector::Cnm,
            Algo::Lp => Detector::Lp { mode, sticky_ties },
            Algo::Wlp => Detector::Wlp {
                mode,
                weight,
                sticky_ties,
            },
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DetectArgs {
    /// Edge list, one `i j` pair per line; a `<graph>.json` sidecar is used if present.
    #[arg(long)]
    pub graph: PathBuf,
    /// Vertex count, for trailing isolated vertices without a sidecar.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub detector: DetectorArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EvalArgs {
    /// Ground truth CSV `item_id,category`.
    #[arg(long)]
    pub truth: PathBuf,
    /// Partition CSV `item_id,community`.
    #[arg(long)]
    pub partition: PathBuf,
    /// Graph edge list, to report modularity.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long = "C", visible_alias = "categories", default_value_t = 2)]
    pub categories: usize,
    #[arg(long = "S", visible_alias = "category-size", default_value_t = 20)]
    pub category_size: usize,
    /// Mixing values.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6")]
    pub p: Vec<usize>,
    /// Voters per item.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2")]
    pub multipliers: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[command(flatten)]
    pub detector: DetectorArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BenchSbmArgs {
    /// Intra-community edge probabilities, one benchmark point each.
    #[arg(long, value_delimiter = ',', default_value = "0.7,0.75,0.8")]
    pub p_in: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub p_out: f64,
    #[arg(long, default_value_t = 10)]
    pub communities: usize,
    #[arg(long, default_value_t = 5)]
    pub size: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "cnm,lp,wlp")]
    pub algos: Vec<Algo>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub detector: DetectorArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ExpectArgs {
    #[arg(long = "S", visible_alias = "category-size", default_value_t = 20)]
    pub category_size: usize,
    #[arg(long = "C", visible_alias = "categories", default_value_t = 2)]
    pub categories: usize,
    /// Largest mixing value; defaults to S.
    #[arg(long)]
    pub p_max: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct IngestArgs {
    /// Ratings file: `user \t item \t rating \t timestamp`.
    #[arg(long)]
    pub data: PathBuf,
    /// Item metadata: `id|title|...`.
    #[arg(long)]
    pub items: PathBuf,
    /// Title patterns, one per line (`=` for an exact title, `[group]` headers).
    #[arg(long)]
    pub subset_file: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    #[command(flatten)]
    pub detector: DetectorArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the mean similarity matrix.
    #[arg(long)]
    pub dump_matrix: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
    #[command(flatten)]
    pub detector: DetectorArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// A manifest.json written by an earlier run.
    pub manifest: PathBuf,
}
