use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "trustnet", version, about = "Community trust and resiliency analysis for signed trust networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a rating CSV and write the graph as JSON.
    Ingest(IngestArgs),
    /// Fairness/goodness scores and, optionally, the densified edge list.
    Predict(PredictArgs),
    /// Partition the network with spectral or correlation clustering.
    Cluster(ClusterArgs),
    /// Trustworthiness of each cluster in a partition.
    Trust(TrustArgs),
    /// Remove the most trustworthy community and measure the change.
    Resiliency(ResiliencyArgs),
    /// Evaluation experiments.
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Temporal hold-out error of the link predictor.
    LinkPrediction(LinkPredictionArgs),
    /// Spectral clustering with and without negative edges.
    Ablation(AblationArgs),
    /// Resiliency and MAE baseline per calendar year.
    Yearwise(YearwiseArgs),
    /// Total trust under both clustering methods.
    CompareMethods(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Spectral,
    Correlation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensifyChoice {
    /// Predict pairs within two hops that have no edge in either direction.
    MissingOnly,
    /// Predict every unobserved ordered pair, up to the pair budget.
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YearwiseChoice {
    Cumulative,
    Slice,
}

/// Flags shared by every subcommand. Every field can also come from `--config`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct Common {
    /// Rating CSV (optionally gzipped) or a graph JSON written by `ingest`.
    #[arg(long, visible_alias = "graph")]
    pub input: Option<PathBuf>,
    /// Output location.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML or JSON file with the same keys as the flags, or a run manifest.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Base seed; each randomized stage uses seed + its stage index.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Ratings are divided by this to get edge weights.
    #[arg(long)]
    pub weight_divisor: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct FgArgs {
    #[arg(long)]
    pub fg_max_iterations: Option<usize>,
    #[arg(long)]
    pub fg_tolerance: Option<f64>,
    /// Fraction of each fairness update that is applied.
    #[arg(long)]
    pub fg_relaxation: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct DensifyArgs {
    /// Cluster the observed graph without predicted edges.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_densify: Option<bool>,
    #[arg(long, value_enum)]
    pub densify: Option<DensifyChoice>,
    /// Largest number of ordered pairs `all-pairs` may score.
    #[arg(long)]
    pub pair_budget: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct MethodArgs {
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Number of spectral clusters.
    #[arg(long)]
    pub k: Option<usize>,
    /// Cleanliness parameter for correlation clustering.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Spectral embedding dimension (defaults to k).
    #[arg(long)]
    pub embedding_dim: Option<usize>,
    #[arg(long)]
    pub kmeans_restarts: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct IngestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct PredictArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub fg: FgArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub densify: DensifyArgs,
    /// Also write the observed plus predicted edge list.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub densified: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct ClusterArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub fg: FgArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub densify: DensifyArgs,
    #[arg(long)]
    pub sample: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct TrustArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Partition CSV with `node,cluster` rows.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Rows shown on stdout; files always hold every cluster.
    #[arg(long)]
    pub top: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct PhaseArgs {
    #[arg(long)]
    pub k_original: Option<usize>,
    #[arg(long)]
    pub k_disrupted: Option<usize>,
    #[arg(long)]
    pub delta_original: Option<f64>,
    #[arg(long)]
    pub delta_disrupted: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct ResiliencyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub phases: PhaseArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub fg: FgArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub densify: DensifyArgs,
    /// `temporal:<fraction>` or `node:<fraction>:<seed>`.
    #[arg(long)]
    pub sample: Option<String>,
    #[arg(long)]
    pub top: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct LinkPredictionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub fg: FgArgs,
    /// Training fractions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub train_frac: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct AblationArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub embedding_dim: Option<usize>,
    #[arg(long)]
    pub kmeans_restarts: Option<usize>,
    #[arg(long)]
    pub sample: Option<String>,
    #[arg(long)]
    pub top: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct YearwiseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub resiliency: ResiliencyArgs,
    #[arg(long, value_enum)]
    pub yearwise_mode: Option<YearwiseChoice>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct CompareArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub embedding_dim: Option<usize>,
    #[arg(long)]
    pub kmeans_restarts: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub fg: FgArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub densify: DensifyArgs,
    #[arg(long)]
    pub sample: Option<String>,
}
