//! Moving subadditive functions between a group and a uniform lattice in it.

use serde::Serialize;

use crate::cps::{FundamentalDomain, LatticePreset};
use crate::entropy::function::{Evaluation, SubadditiveFunction};
use crate::entropy::ow::{ow_limit, OWEstimate, OwRow};
use crate::error::{Error, Result};
use crate::groups::{cell_union, lattice_discretize, minkowski, CompactRegion, FiniteSet, VanHoveSequence};
use crate::numeric::{format_rational, rational_to_f64, Rational};

/// `f^Λ(F) = f(C̄F)`.
pub fn lattice_transfer(f: &SubadditiveFunction, domain: &FundamentalDomain, points: &FiniteSet) -> Result<Evaluation> {
    f.evaluate(&closed_cells(domain, points)?)
}

fn closed_cells(domain: &FundamentalDomain, points: &FiniteSet) -> Result<CompactRegion> {
    match (&domain.lattice, &domain.region) {
        (LatticePreset::ScaledIntegers { dim, spacing }, _) => cell_union(points, &vec![*spacing; *dim]),
        (LatticePreset::IntSublattice { .. } | LatticePreset::HeisenbergSelf, CompactRegion::Finite(c)) => {
            Ok(CompactRegion::Finite(minkowski(c, points)?))
        }
        _ => Err(Error::unsupported(format!("closed cells over {} are not a supported region", domain.lattice.describe()))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferReport {
    pub lattice: String,
    pub covolume: String,
    pub group: OWEstimate,
    /// `f^Λ(F_i)/|F_i|` with `F_i` the lattice points whose closed cell lies in `A_i`.
    pub lattice_trace: OWEstimate,
    /// `lattice_trace.tail / μ(C)`.
    pub scaled_tail: f64,
    pub delta: f64,
    pub allowance: f64,
    pub passed: bool,
}

/// Compares `lim f(A_i)/μ(A_i)` with `μ(C)⁻¹·lim f^Λ(F_i)/|F_i|` on box sequences in ℝ^d.
pub fn lattice_transfer_check(
    f: &SubadditiveFunction,
    domain: &FundamentalDomain,
    seq: &VanHoveSequence,
    i_max: usize,
    tail_length: usize,
    tolerance: f64,
) -> Result<TransferReport> {
    let LatticePreset::ScaledIntegers { dim, spacing } = &domain.lattice else {
        return Err(Error::unsupported("the transfer check runs on lattices s·Z^d in R^d"));
    };
    let group = ow_limit(f, seq, i_max, tail_length)?;
    let mut rows = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let CompactRegion::Box(a) = seq.region(i)? else {
            return Err(Error::input("the transfer check needs a box sequence"));
        };
        let inner = lattice_discretize(&a, &vec![*spacing; *dim])?.inner;
        if inner.is_empty() {
            return Err(Error::input(format!("A_{i} contains no closed lattice cell")));
        }
        let e = lattice_transfer(f, domain, &inner)?;
        rows.push(OwRow { index: i, measure: inner.len().to_string(), f_exact: e.exact, value: e.value / inner.len() as f64 });
    }
    let lattice_trace = OWEstimate::from_rows(
        format!("{} on {}", f.label(), domain.lattice.describe()),
        format!("inner lattice points of {}", seq.label()),
        rows,
        tail_length,
    )?;
    let covol = rational_to_f64(&domain.covolume);
    let scaled_tail = lattice_trace.tail / covol;
    let delta = (scaled_tail - group.tail).abs();
    let allowance = tolerance + group.band + lattice_trace.band / covol;
    Ok(TransferReport {
        lattice: domain.lattice.describe(),
        covolume: format_rational(&domain.covolume),
        passed: delta <= allowance + 1e-12,
        group,
        lattice_trace,
        scaled_tail,
        delta,
        allowance,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SandwichRow {
    pub index: usize,
    pub inner_size: usize,
    pub outer_size: usize,
    /// `|F̂_i| / |F̌_i|`, exact.
    pub ratio: String,
    pub f_inner: String,
    pub f_region: String,
    pub f_outer: String,
    pub holds: bool,
    #[serde(skip)]
    pub exact_ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SandwichReport {
    pub function: String,
    pub sequence: String,
    pub rows: Vec<SandwichRow>,
    pub ratios_decreasing: bool,
    pub sandwich_holds: bool,
}

/// `f^Λ(F̌_i) ≤ f(A_i) ≤ f^Λ(F̂_i)` and the ratios `|F̂_i|/|F̌_i|` along a box sequence.
pub fn sandwich_check(f: &SubadditiveFunction, domain: &FundamentalDomain, seq: &VanHoveSequence, i_max: usize) -> Result<SandwichReport> {
    if !f.is_monotone() {
        return Err(Error::input("the sandwich needs a monotone function"));
    }
    let LatticePreset::ScaledIntegers { dim, spacing } = &domain.lattice else {
        return Err(Error::unsupported("the sandwich check runs on lattices s·Z^d in R^d"));
    };
    let mut rows = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let region = seq.region(i)?;
        let CompactRegion::Box(a) = &region else {
            return Err(Error::input("the sandwich check needs a box sequence"));
        };
        let d = lattice_discretize(a, &vec![*spacing; *dim])?;
        if d.inner.is_empty() {
            return Err(Error::input(format!("A_{i} contains no closed lattice cell")));
        }
        let lo = lattice_transfer(f, domain, &d.inner)?;
        let mid = f.evaluate(&region)?;
        let hi = lattice_transfer(f, domain, &d.outer)?;
        let exact_ratio = Rational::from_integer(d.outer.len() as i128) / Rational::from_integer(d.inner.len() as i128);
        rows.push(SandwichRow {
            index: i,
            inner_size: d.inner.len(),
            outer_size: d.outer.len(),
            ratio: format_rational(&exact_ratio),
            holds: compare(&lo, &mid) && compare(&mid, &hi),
            f_inner: lo.exact,
            f_region: mid.exact,
            f_outer: hi.exact,
            exact_ratio,
        });
    }
    let ratios_decreasing = rows.windows(2).all(|w| w[1].exact_ratio <= w[0].exact_ratio);
    Ok(SandwichReport {
        function: f.label().to_string(),
        sequence: seq.label().to_string(),
        sandwich_holds: rows.iter().all(|r| r.holds),
        ratios_decreasing,
        rows,
    })
}

/// `x ≤ y`, exactly when both values have rational exact forms.
fn compare(x: &Evaluation, y: &Evaluation) -> bool {
    match (crate::numeric::parse_rational(&x.exact), crate::numeric::parse_rational(&y.exact)) {
        (Ok(a), Ok(b)) => a <= b,
        _ => x.value <= y.value + 1e-12,
    }
}
