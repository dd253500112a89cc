//! Pattern counts, cylinder covering numbers and fiber covering numbers.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::dynamics::code::SlidingBlockCode;
use crate::dynamics::subshift::{box_cells, Cell, Subshift};
use crate::dynamics::sweep::{Plan, RuleTable};
use crate::error::{Error, Result};
use crate::groups::{minkowski, FiniteSet, GroupDescriptor};

pub const DEFAULT_BUDGET: usize = 4_000_000;

/// Margin override and sweep budget shared by the counting operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    /// Admissibility margin; the subshift's own margin when `None`.
    pub margin: Option<usize>,
    pub budget: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { margin: None, budget: DEFAULT_BUDGET }
    }
}

/// A count together with the data needed to interpret it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PatternCount {
    #[serde(serialize_with = "crate::dynamics::serialize_big")]
    pub count: BigUint,
    pub support_size: usize,
    pub margin: usize,
    pub window_size: usize,
}

fn cells_of(s: &Subshift, f: &FiniteSet) -> Result<Vec<Cell>> {
    match f.group() {
        GroupDescriptor::IntLattice { dim } if *dim == s.dim() => f.int_points(),
        g => Err(Error::input(format!("pattern supports must lie in Z^{}, got {g}", s.dim()))),
    }
}

/// `F ⊕ B_m` as a sorted cell list.
pub(crate) fn thicken(cells: &[Cell], dim: usize, m: usize) -> Vec<Cell> {
    if m == 0 {
        return cells.to_vec();
    }
    let m = m as i64;
    let offsets = box_cells(&vec![-m; dim], &vec![m; dim]);
    let mut out = BTreeSet::new();
    for c in cells {
        for o in &offsets {
            out.insert(c.iter().zip(o).map(|(a, b)| a + b).collect::<Cell>());
        }
    }
    out.into_iter().collect()
}

/// Number of patterns on `F` that extend to a locally admissible pattern on `F ⊕ B_m`.
pub fn count_patterns(s: &Subshift, f: &FiniteSet) -> Result<BigUint> {
    Ok(count_patterns_with(s, f, CountOptions::default())?.count)
}

pub fn count_patterns_with(s: &Subshift, f: &FiniteSet, opts: CountOptions) -> Result<PatternCount> {
    let cells = cells_of(s, f)?;
    count_cells(s, &cells, opts)
}

pub(crate) fn count_cells(s: &Subshift, cells: &[Cell], opts: CountOptions) -> Result<PatternCount> {
    let margin = opts.margin.unwrap_or(s.margin());
    if s.is_full_shift() {
        return Ok(PatternCount {
            count: BigUint::from(s.k()).pow(cells.len() as u32),
            support_size: cells.len(),
            margin,
            window_size: cells.len(),
        });
    }
    let window = thicken(cells, s.dim(), margin);
    let counted: HashSet<Cell> = cells.iter().cloned().collect();
    let plan = Plan::new(s, &window, &counted, &[])?;
    Ok(PatternCount { count: plan.count(opts.budget)?, support_size: cells.len(), margin, window_size: window.len() })
}

/// Covering number at scale `η_r` for the Bowen entourage over `A`: the
/// number of cylinder classes on `A ⊕ B_r`.
pub fn cov(s: &Subshift, a: &FiniteSet, r: usize) -> Result<BigUint> {
    Ok(cov_with(s, a, r, CountOptions::default())?.count)
}

pub fn cov_with(s: &Subshift, a: &FiniteSet, r: usize, opts: CountOptions) -> Result<PatternCount> {
    let thick = minkowski(a, &crate::dynamics::subshift::ball(s.dim(), r))?;
    count_patterns_with(s, &thick, opts)
}

/// Largest number of source patterns on `A ⊕ B_r` inside a single fiber of the
/// code, over all target patterns on the sites whose neighbourhood fits in
/// the margin window.
pub fn fiber_cov(code: &SlidingBlockCode, a: &FiniteSet, r: usize) -> Result<BigUint> {
    Ok(fiber_cov_with(code, a, r, CountOptions::default())?.count)
}

pub fn fiber_cov_with(code: &SlidingBlockCode, a: &FiniteSet, r: usize, opts: CountOptions) -> Result<PatternCount> {
    let s = code.source();
    let thick = minkowski(a, &crate::dynamics::subshift::ball(s.dim(), r))?;
    let cells = cells_of(s, &thick)?;
    let margin = opts.margin.unwrap_or(s.margin());
    let window = thicken(&cells, s.dim(), margin);
    let counted: HashSet<Cell> = cells.iter().cloned().collect();
    let sites = output_sites(code, &window);
    let plan = Plan::new(s, &window, &counted, &sites)?;
    let rule = RuleTable { k: s.k(), table: code.table(), target_k: code.target().k() };
    Ok(PatternCount { count: plan.max_fiber(&rule, opts.budget)?, support_size: cells.len(), margin, window_size: window.len() })
}

fn output_sites(code: &SlidingBlockCode, window: &[Cell]) -> Vec<Vec<Cell>> {
    let inside: HashSet<&Cell> = window.iter().collect();
    window
        .iter()
        .filter_map(|t| {
            let site: Vec<Cell> = code.neighborhood().iter().map(|n| t.iter().zip(n).map(|(a, b)| a + b).collect()).collect();
            site.iter().all(|c| inside.contains(c)).then_some(site)
        })
        .collect()
}

/// Number of distinct images, on the sites `t` with `t + N ⊆ F`, of the
/// patterns admissible on `F`.
pub fn image_count(code: &SlidingBlockCode, f: &FiniteSet, opts: CountOptions) -> Result<(BigUint, FiniteSet)> {
    let s = code.source();
    let cells = cells_of(s, f)?;
    let margin = opts.margin.unwrap_or(s.margin());
    let window = thicken(&cells, s.dim(), margin);
    let inner: HashSet<&Cell> = cells.iter().collect();
    let sites: Vec<Vec<Cell>> = output_sites(code, &window).into_iter().filter(|site| site.iter().all(|c| inner.contains(c))).collect();
    let anchors: Vec<Cell> = sites.iter().map(|site| site[0].iter().zip(&code.neighborhood()[0]).map(|(a, b)| a - b).collect()).collect();
    let plan = Plan::new(s, &window, &HashSet::new(), &sites)?;
    let rule = RuleTable { k: s.k(), table: code.table(), target_k: code.target().k() };
    let count = if sites.is_empty() { BigUint::one() } else { plan.image_count(&rule, opts.budget)? };
    Ok((count, FiniteSet::from_ints(s.dim(), &anchors)?))
}
