//! Subshifts of finite type, sliding block codes, exact pattern counting and
//! Bowen-scale covering numbers.

pub mod code;
pub mod count;
pub mod metric;
pub mod subshift;
mod sweep;
pub mod transfer;

pub use code::{CodeSpec, RuleEntry, SlidingBlockCode, SubshiftRef};
pub use count::{
    count_patterns, count_patterns_with, cov, cov_with, fiber_cov, fiber_cov_with, image_count, CountOptions, PatternCount, DEFAULT_BUDGET,
};
pub use metric::{
    cylinder_family, cylinder_scale, enumerate_patterns, metric_corpus, Bounded, ChainCheck, FiniteMetricSpace, MetricCounts,
};
pub use subshift::{ball, box_cells, BlockRecoding, Cell, CellSpec, Pattern, Subshift, SubshiftSpec};
pub use transfer::TransferMatrix;

pub(crate) fn serialize_big<S: serde::Serializer>(x: &num_bigint::BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
