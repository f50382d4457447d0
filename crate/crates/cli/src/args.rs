use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "varmax", version, about = "Sharp variation constants of the graph maximal operator")]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism. Results do
    /// not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// TOML file with defaults for any flag (same key names, dashes or
    /// underscores).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Constant of one graph.
    Constant(ConstantArgs),
    /// Constants of every connected graph on n vertices.
    Survey(SurveyArgs),
    /// Constants of the paths P_3 .. P_max.
    Paths(PathsArgs),
    /// Ratio of the root indicator on one tree of the large-constant family.
    Construction(ConstructionArgs),
    /// Smallest tree in the family whose ratio exceeds a target.
    ConstructionSearch(SearchArgs),
    /// Seeded sweeps over the scalar inequalities behind the complete-graph
    /// constant.
    VerifyInequalities(InequalityArgs),
    /// List connected graphs on n vertices in graph6.
    Enumerate(EnumerateArgs),
    /// Decode, encode or canonicalize a graph.
    Graph6(Graph6Args),
    /// Evaluate the maximal function and the variation ratio of one function.
    Maximal(MaximalArgs),
    /// Solve or enumerate a linear program in the text dump format.
    Lp(LpArgs),
    /// Run every acceptance check and report pass/fail per criterion.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct SearchKnobs {
    /// Certified exact search (p = 1 only).
    #[arg(long, conflicts_with = "numeric")]
    pub exact: bool,
    /// Numeric lower bound by seeded pattern search.
    #[arg(long)]
    pub numeric: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random starts for numeric mode.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Seconds before the exact search degrades to a lower bound.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Leaf-region cap before the exact search degrades to a lower bound.
    #[arg(long)]
    pub max_regions: Option<u64>,
    /// Largest order the exact search accepts (at most 7).
    #[arg(long)]
    pub size_limit: Option<usize>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Outputs {
    /// Write a CSV table here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the JSON certificates here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    /// `K5`, `P7`, `S4`, `C6`, `paw`, `diamond`, `construction:k=2,m=2` or
    /// `g6:<code>`.
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[command(flatten)]
    pub knobs: SearchKnobs,
    #[command(flatten)]
    pub out: Outputs,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[command(flatten)]
    pub knobs: SearchKnobs,
    #[command(flatten)]
    pub out: Outputs,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    #[arg(long, default_value_t = 3)]
    pub min_n: usize,
    #[arg(long)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[command(flatten)]
    pub knobs: SearchKnobs,
    #[command(flatten)]
    pub out: Outputs,
    /// Plot of value against n.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructionArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Also build the tree and write it in graph6 (at most 62 vertices).
    #[arg(long)]
    pub emit_graph6: Option<PathBuf>,
    /// Vertex budget for building; `VARMAX_BUDGET_VERTICES` overrides the
    /// default.
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long)]
    pub target: f64,
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Plot of ratio against k.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InequalityArgs {
    /// Random instances for the two-sided inequality; the complete-graph
    /// sweep uses a tenth of this.
    #[arg(long)]
    pub sweep_size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Write the list here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Graph6Args {
    /// Graph in any accepted syntax; bare graph6 codes are accepted too.
    pub graph: String,
    /// Print the canonical graph6 form instead of the input's.
    #[arg(long)]
    pub canonical: bool,
}

#[derive(Debug, Args)]
pub struct MaximalArgs {
    #[arg(long)]
    pub graph: String,
    /// Comma-separated values, e.g. `1/2,0,0,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
}

#[derive(Debug, Args)]
pub struct LpArgs {
    pub file: PathBuf,
    /// List the vertices of the feasible region instead of optimizing.
    #[arg(long)]
    pub vertices: bool,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Numeric 5-vertex survey and no 7-vertex exact path.
    #[arg(long)]
    pub skip_slow: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Proposition sweep size (default one million).
    #[arg(long)]
    pub sweep_size: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
