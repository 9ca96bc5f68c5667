use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "csd", version, about = "Citation structural diversity pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a corpus, clean it and write canonical JSON Lines plus a report.
    Ingest(IngestArgs),
    /// Keep only the largest weakly connected component of the citation graph.
    Component(ComponentArgs),
    /// Compute diversity values for the selected papers.
    Sd(SdArgs),
    /// Correlate diversity with three-year citation counts.
    Correlate(CorrelateArgs),
    /// Ten-year normalized citation curves per diversity bin.
    Trends(TrendsArgs),
    /// Fit citation-count regressors with and without diversity features.
    Predict(PredictArgs),
    /// Run the whole analysis and write one summary JSON.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Corpus file.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Corpus file format: dblp_v13, pubmed or canonical [default: canonical].
    #[arg(long)]
    pub format: Option<String>,
    /// Output directory; results go to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads [default: available cores].
    #[arg(long)]
    pub threads: Option<usize>,
    /// Drop records with an empty title.
    #[arg(long)]
    pub require_title: bool,
    /// Drop records with an empty abstract.
    #[arg(long)]
    pub require_abstract: bool,
    /// Drop records with fewer references than this.
    #[arg(long)]
    pub min_references: Option<usize>,
    /// Remove references to papers outside the corpus.
    #[arg(long)]
    pub drop_dangling_refs: bool,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Comma-separated paper ids to evaluate.
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    /// Select target papers published in this year.
    #[arg(long)]
    pub year: Option<i32>,
    /// Select target papers from this venue.
    #[arg(long)]
    pub venue: Option<String>,
    /// Select target papers with this venue rank (Q1..Q4, A, B, C).
    #[arg(long)]
    pub rank: Option<String>,
}

#[derive(Debug, Args)]
pub struct DiversityArgs {
    /// Embedding file (JSON Lines of {"id", "vector"}).
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Fixed semantic threshold.
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    /// Fixed co-citation/coupling similarity threshold.
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
    /// Dynamic threshold rules: dblp or pubmed [default: dblp].
    #[arg(long)]
    pub theta_policy: Option<String>,
    /// Variants to compute (comma-separated or repeated). Default: all six
    /// with embeddings, plain and combined without.
    #[arg(long, value_delimiter = ',')]
    pub variant: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct PrecomputedArgs {
    /// Diversity CSV written by `csd sd`; computed on the fly when absent.
    #[arg(long)]
    pub diversity: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatArgs {
    /// Group statistic: median or iqrmean [default: both].
    #[arg(long)]
    pub stat: Option<String>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Prediction horizon in years: 1, 5 or 10 (repeatable) [default: all].
    #[arg(long, value_delimiter = ',')]
    pub horizon: Option<Vec<usize>>,
    /// Seed for the train/test split.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct ComponentArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Also write the component's edge list (citing<TAB>cited) as edges.tsv.
    #[arg(long)]
    pub edge_list: bool,
}

#[derive(Debug, Args)]
pub struct SdArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub diversity: DiversityArgs,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub diversity: DiversityArgs,
    #[command(flatten)]
    pub precomputed: PrecomputedArgs,
    #[command(flatten)]
    pub stat: StatArgs,
}

#[derive(Debug, Args)]
pub struct TrendsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub diversity: DiversityArgs,
    #[command(flatten)]
    pub precomputed: PrecomputedArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub diversity: DiversityArgs,
    #[command(flatten)]
    pub precomputed: PrecomputedArgs,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub diversity: DiversityArgs,
    #[command(flatten)]
    pub precomputed: PrecomputedArgs,
    #[command(flatten)]
    pub stat: StatArgs,
    #[command(flatten)]
    pub model: ModelArgs,
}
