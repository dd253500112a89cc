//! Ornstein-Weiss limits of subadditive functions on amenable groups, Van Hove
//! diagnostics, cut-and-project model sets, and (relative) topological entropy
//! of subshifts of finite type.

pub mod error;
pub mod groups;
pub mod numeric;
pub mod presets;

pub use error::{Error, Result};
pub mod cps;
pub mod dynamics;
pub mod entropy;
pub(crate) mod util;
