//! Command-line flags. Every option can also be set from a TOML config file
//! under the same kebab-case key; flags win over the file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "owent", version, about = "Ornstein-Weiss limits, Van Hove diagnostics, model sets and entropy of subshifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate a cut-and-project model set inside a query region.
    CpsEnumerate(Run<CpsEnumerateArgs>),
    /// Uniform density trace of a model set, lattice or point list.
    Density(Run<DensityArgs>),
    /// Relative density and Meyer difference check on a patch.
    MeyerCheck(Run<MeyerArgs>),
    /// K-boundary ratios of a Van Hove sequence.
    Vanhove(Run<VanhoveArgs>),
    /// Ornstein-Weiss limit of a subadditive function, with lattice transfer checks.
    OwLimit(Run<OwLimitArgs>),
    /// Compare the limits of one function along two sequences.
    OwCrosscheck(Run<OwCrosscheckArgs>),
    /// Topological entropy of a subshift, or covering numbers of a metric space.
    Entropy(Run<EntropyArgs>),
    /// Relative topological entropy of a sliding block code.
    RelativeEntropy(Run<RelativeEntropyArgs>),
    /// Entropy of the action restricted to a sublattice or Delone index set.
    Restrict(Run<RestrictArgs>),
    /// Compare n times the entropy with the entropy of the n-th power.
    PowerRule(Run<PowerRuleArgs>),
    /// Bowen's inequalities for a composed pair of codes.
    BowenChain(Run<BowenChainArgs>),
    /// Exhaustive rectangle-cover infimum on A x B.
    ProductExtension(Run<ProductExtensionArgs>),
    /// Entropy of a Bernoulli measure against the full shift.
    Bernoulli(Run<BernoulliArgs>),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CpsEnumerate(_) => "cps-enumerate",
            Command::Density(_) => "density",
            Command::MeyerCheck(_) => "meyer-check",
            Command::Vanhove(_) => "vanhove",
            Command::OwLimit(_) => "ow-limit",
            Command::OwCrosscheck(_) => "ow-crosscheck",
            Command::Entropy(_) => "entropy",
            Command::RelativeEntropy(_) => "relative-entropy",
            Command::Restrict(_) => "restrict",
            Command::PowerRule(_) => "power-rule",
            Command::BowenChain(_) => "bowen-chain",
            Command::ProductExtension(_) => "product-extension",
            Command::Bernoulli(_) => "bernoulli",
        }
    }
}

#[derive(Args, Debug)]
pub struct Run<T: Args> {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub args: T,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Svg,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Common {
    /// TOML file with default values for any of the options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report entropy values in bits.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub log2: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cov,
    Sep,
    Spa,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CpsEnumerateArgs {
    /// trivial-z, fibonacci, padic:<p>:<R>:<depth>, zd:<d> or nzd:<n1,...>.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Lower end of the query interval or box (real and integer schemes).
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<String>,
    /// Query ball p^-n Z_p for p-adic schemes; defaults to the scheme depth.
    #[arg(long, allow_hyphen_values = true)]
    pub ball: Option<i32>,
    /// Lattice coefficient bound for the enumeration sweep.
    #[arg(long)]
    pub bound: Option<i64>,
    /// Also certify injectivity and density of the projections.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub certify: Option<bool>,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DensityArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    /// scaled:<dim>:<s>, sublattice:<n1,...> or h3.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Point list file (one point per line); needs --group.
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    /// Accept a tail within this distance of the oracle even if the band misses it.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct MeyerArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<String>,
    /// Largest half-width tried for K = [-k, k].
    #[arg(long)]
    pub k_bound: Option<String>,
    /// Largest half-width searched for F.
    #[arg(long)]
    pub f_bound: Option<String>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct VanhoveArgs {
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub seq: Option<String>,
    /// box:<r>, set:<x,...>, ball:<n>, or `<k> x <k>` on products.
    #[arg(long = "K", alias = "kernel")]
    #[serde(rename = "K", alias = "kernel")]
    pub kernel: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also report the dilation ratios |K A_i| / |A_i|.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub dilate: Option<bool>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct OwLimitArgs {
    /// log-count:<subshift>, fiber:<code>, volume:<kernel>, linear:<c> or cardinality.
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Compare with the limit of the lattice restriction to s Z^d.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Check f(inner cells) <= f(A_i) <= f(outer cells) on s Z^d.
    #[arg(long)]
    pub sandwich: Option<String>,
    /// Spot-check the declared properties with this seed first.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct OwCrosscheckArgs {
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub seq_b: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EntropyArgs {
    /// full:<k>[:d2], golden-mean, hard-square, point or golden-x-full2.
    #[arg(long)]
    pub preset: Option<String>,
    /// Subshift file (JSON or TOML) instead of a preset.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    /// Comma-separated scale radii.
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Finite metric space file; reports the counts and the chain at --eps.
    #[arg(long)]
    pub metric: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RelativeEntropyArgs {
    /// four-to-two, golden-x2-proj, identity:<subshift> or to-point:<subshift>.
    #[arg(long)]
    pub preset: Option<String>,
    /// Code file (JSON or TOML) instead of a preset.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RestrictArgs {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// sublattice:<n>, sublattice:<n1>x<n2> or fibonacci.
    #[arg(long)]
    pub index: Option<String>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PowerRuleArgs {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BowenChainArgs {
    /// four-to-two-to-point, golden-x2-proj-to-point or <code>-to-point.
    #[arg(long)]
    pub preset: Option<String>,
    /// Use a random symbol-merge chain of full shifts built from this seed.
    #[arg(long)]
    pub random_seed: Option<u64>,
    /// Code files for the two factor maps.
    #[arg(long)]
    pub first: Option<PathBuf>,
    #[arg(long)]
    pub second: Option<PathBuf>,
    /// Add this amount to the composite entropy before checking.
    #[arg(long, allow_hyphen_values = true)]
    pub corrupt_fiber: Option<f64>,
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ProductExtensionArgs {
    /// cardinality, linear:<c>, log-count:<subshift> or fiber:<code>.
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub radius: Option<usize>,
    /// Comma-separated integers.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long)]
    pub margin: Option<usize>,
    #[arg(long)]
    pub max_rectangles: Option<usize>,
    #[arg(long)]
    pub max_hull: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BernoulliArgs {
    /// Comma-separated rationals summing to 1.
    #[arg(long)]
    pub probabilities: Option<String>,
}
