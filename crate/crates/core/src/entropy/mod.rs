//! Ornstein-Weiss limits, entropy reports and the numerical verifiers built on them.

pub mod checks;
pub mod function;
pub mod lattice;
pub mod ow;
pub mod report;

pub use checks::{
    bernoulli_entropy, bowen_chain_check, power_rule_check, product_extension_check, random_merge_chain, BernoulliReport, BowenChainReport,
    PowerRuleReport, ProductExtensionOptions, ProductExtensionReport, Rectangle,
};
pub use function::{DeclaredProperties, Evaluation, SubadditiveFunction};
pub use lattice::{lattice_transfer, lattice_transfer_check, sandwich_check, SandwichReport, SandwichRow, TransferReport};
pub use ow::{ow_crosscheck, ow_limit, CrosscheckReport, OWEstimate, OwRow, Trend, DEFAULT_TAIL};
pub use report::{
    lattice_restricted_entropy, relative_entropy, rounded_fibonacci, topological_entropy, EntropyOptions, EntropyReport, IndexSet,
    ScaleEstimate, PREFIX_NOTE,
};
