use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gspi_core::experiment::ExperimentConfig;

#[derive(Debug, Parser)]
#[command(name = "gspi", version, about = "SPI/GSPI graph kernel experiments on random one- and two-cluster graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write seeded datasets as edge-list files plus a manifest.
    Generate(Common),
    /// Extract SPI or GSPI feature vectors from edge-list files.
    Features(FeaturesArgs),
    /// Cross-validated accuracy of both kernels on every (n, factor) cell.
    #[command(name = "reproduce-table1")]
    ReproduceTable1(Common),
    /// Histogram data for the averaged-profile and mixture figures.
    #[command(name = "emit-figures")]
    EmitFigures(FigureArgs),
    /// Monte-Carlo comparison against the closed-form predictions.
    #[command(name = "theory-check")]
    TheoryCheck(TheoryArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Optional JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Node counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub c0: Option<f64>,
    /// p2/p1 ratios, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub factors: Option<Vec<f64>>,
    #[arg(long)]
    pub graphs_per_class: Option<usize>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub bin_width: Option<u64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Common {
    /// Config file (if any) with flag overrides applied.
    pub fn resolve(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str(&text)?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(v) = &self.n {
            cfg.n_list = v.clone();
        }
        if let Some(v) = self.c0 {
            cfg.c0 = v;
        }
        if let Some(v) = &self.factors {
            cfg.p2_factors = v.clone();
        }
        if let Some(v) = self.graphs_per_class {
            cfg.graphs_per_class = v;
        }
        if let Some(v) = self.folds {
            cfg.folds = v;
        }
        if let Some(v) = self.bin_width {
            cfg.bin_width = v;
        }
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if self.iterations.is_some() {
            cfg.iterations = self.iterations;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Spi,
    Gspi,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    /// Edge-list files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "gspi")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1)]
    pub bin_width: u64,
    /// Also write the normalized Gram matrix of all inputs as CSV.
    #[arg(long)]
    pub gram: Option<PathBuf>,
    /// Write feature JSON lines here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "fig1,fig2,fig3")]
    pub which: Vec<Figure>,
    /// Node count for the averaged-profile figures.
    #[arg(long, default_value_t = 600)]
    pub profile_n: usize,
    #[arg(long, default_value_t = 1.3)]
    pub profile_factor: f64,
    #[arg(long, default_value_t = 400)]
    pub mixture_n: usize,
    #[arg(long, default_value_t = 0.18)]
    pub mixture_p2: f64,
    #[arg(long, default_value_t = 0.0204)]
    pub mixture_q2: f64,
    #[arg(long, default_value_t = 500)]
    pub mixture_graphs: usize,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[command(flatten)]
    pub common: Common,
    /// p2/p1 ratio of the planted model in the Monte-Carlo comparison.
    #[arg(long, default_value_t = 1.5)]
    pub factor: f64,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub distances: Vec<u32>,
    #[arg(long, default_value_t = 200)]
    pub mc_graphs: usize,
    #[arg(long, default_value_t = 64)]
    pub sources: usize,
    #[arg(long, default_value_t = 500)]
    pub mixture_graphs: usize,
    #[arg(long, default_value_t = 10_000)]
    pub lemma_cases: usize,
}
