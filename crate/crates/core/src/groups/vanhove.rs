//! Van Hove sequences and their boundary diagnostics.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::element::{GroupDescriptor, PadicNumber};
use crate::groups::ops::{dilate, k_boundary};
use crate::groups::region::{haar_measure, CompactRegion, FiniteSet, PadicBall, RationalBox};
use crate::numeric::{format_rational, int, rational_to_f64, Rational};

type Generator = Arc<dyn Fn(usize) -> Result<CompactRegion> + Send + Sync>;

/// A lazily generated sequence of compact regions `A_1, A_2, …`.
#[derive(Clone)]
pub struct VanHoveSequence {
    group: GroupDescriptor,
    label: String,
    generator: Generator,
}

impl fmt::Debug for VanHoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VanHoveSequence({} in {})", self.label, self.group)
    }
}

impl VanHoveSequence {
    pub fn new(
        group: GroupDescriptor,
        label: impl Into<String>,
        generator: impl Fn(usize) -> Result<CompactRegion> + Send + Sync + 'static,
    ) -> Self {
        VanHoveSequence { group, label: label.into(), generator: Arc::new(generator) }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The region `A_i`; indices start at 1.
    pub fn region(&self, i: usize) -> Result<CompactRegion> {
        if i == 0 {
            return Err(Error::input("sequence indices start at 1"));
        }
        (self.generator)(i)
    }

    /// `A_i` as a finite set, for sequences in discrete groups.
    pub fn finite(&self, i: usize) -> Result<FiniteSet> {
        match self.region(i)? {
            CompactRegion::Finite(s) => Ok(s),
            other => Err(Error::input(format!("{} is not a finite set", other.describe()))),
        }
    }

    /// `[-s·i, s·i]^dim` in ℝ^dim.
    pub fn real_boxes(dim: usize, step: Rational) -> Self {
        Self::new(GroupDescriptor::real(dim), format!("boxes(step {})", format_rational(&step)), move |i| {
            Ok(CompactRegion::Box(RationalBox::centered(dim, step * int(i as i128))))
        })
    }

    /// `[i, i + 2s·i]^dim`: boxes drifting away from the origin.
    pub fn real_offset_boxes(dim: usize, step: Rational) -> Self {
        Self::new(GroupDescriptor::real(dim), format!("offset-boxes(step {})", format_rational(&step)), move |i| {
            let lo = int(i as i128);
            let hi = lo + step * int(2 * i as i128);
            Ok(CompactRegion::Box(RationalBox::new(vec![lo; dim], vec![hi; dim])?))
        })
    }

    /// `{0, …, s·i − 1}` in ℤ.
    pub fn int_intervals(step: usize) -> Self {
        Self::new(GroupDescriptor::int(1), format!("intervals(step {step})"), move |i| {
            Ok(CompactRegion::Finite(FiniteSet::interval(0, (step * i) as i64 - 1)))
        })
    }

    /// `{s·i, …, 3s·i − 1}` in ℤ.
    pub fn int_shifted_intervals(step: usize) -> Self {
        Self::new(GroupDescriptor::int(1), format!("shifted-intervals(step {step})"), move |i| {
            let a = (step * i) as i64;
            Ok(CompactRegion::Finite(FiniteSet::interval(a, 3 * a - 1)))
        })
    }

    /// `{-s·i, …, s·i}` in ℤ.
    pub fn int_centered_intervals(step: usize) -> Self {
        Self::new(GroupDescriptor::int(1), format!("centered-intervals(step {step})"), move |i| {
            let a = (step * i) as i64;
            Ok(CompactRegion::Finite(FiniteSet::interval(-a, a)))
        })
    }

    /// `{-s·i, …, s·i}^dim` in ℤ^dim.
    pub fn int_cubes(dim: usize, step: usize) -> Self {
        Self::new(GroupDescriptor::int(dim), format!("cubes(step {step})"), move |i| {
            let a = (step * i) as i64;
            Ok(CompactRegion::Finite(FiniteSet::int_box(&vec![-a; dim], &vec![a; dim])?))
        })
    }

    /// `{0, …, s·i − 1} × {0, …, 2s·i − 1}` in ℤ².
    pub fn int_rectangles(step: usize) -> Self {
        Self::new(GroupDescriptor::int(2), format!("rectangles(step {step})"), move |i| {
            let a = (step * i) as i64;
            Ok(CompactRegion::Finite(FiniteSet::int_box(&[0, 0], &[a - 1, 2 * a - 1])?))
        })
    }

    /// The same region at every index.
    pub fn constant(group: GroupDescriptor, region: CompactRegion) -> Self {
        let label = format!("constant({})", region.describe());
        Self::new(group, label, move |_| Ok(region.clone()))
    }

    /// `center + p^(-i) ℤ_p`.
    pub fn padic_balls(p: u64, precision: u32, center: PadicNumber) -> Self {
        let label = if center.value().is_zero() { "balls".to_string() } else { format!("balls(center {center})") };
        Self::new(GroupDescriptor::padic(p, precision), label, move |i| {
            Ok(CompactRegion::PadicBall(PadicBall::new(center.clone(), i as i32)?))
        })
    }

    /// `K·A_i`.
    pub fn dilated(kernel: CompactRegion, base: &VanHoveSequence) -> Self {
        let inner = base.clone();
        let label = format!("dilated({}; {})", kernel.describe(), base.label);
        Self::new(base.group.clone(), label, move |i| dilate(&kernel, &inner.region(i)?))
    }

    /// `A_i × B_i` in the product group.
    pub fn product(a: &VanHoveSequence, b: &VanHoveSequence) -> Result<Self> {
        let group = GroupDescriptor::product(vec![a.group.clone(), b.group.clone()])?;
        let (sa, sb) = (a.clone(), b.clone());
        let label = format!("{} x {}", a.label, b.label);
        Ok(Self::new(group, label, move |i| {
            let mut parts = Vec::new();
            for r in [sa.region(i)?, sb.region(i)?] {
                match r {
                    CompactRegion::Product(inner) => parts.extend(inner),
                    other => parts.push(other),
                }
            }
            Ok(CompactRegion::Product(parts))
        }))
    }

    /// `A_i ∩ Λ` for a subgroup given by a membership test; used for lattice
    /// restriction in ℤ^d.
    pub fn restricted(&self, label: &str, keep: impl Fn(&crate::groups::GroupElement) -> bool + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        let keep = Arc::new(keep);
        Self::new(self.group.clone(), format!("{} restricted to {label}", self.label), move |i| {
            let s = inner.finite(i)?;
            let k = keep.clone();
            Ok(CompactRegion::Finite(s.filter(|g| k(g))))
        })
    }
}

/// `K·A_n` as a sequence, with the trace of `μ(K·A_n)/μ(A_n)`.
pub fn dilated_sequence(kernel: &CompactRegion, seq: &VanHoveSequence, i_max: usize) -> Result<(VanHoveSequence, Vec<(usize, Rational)>)> {
    let dilated = VanHoveSequence::dilated(kernel.clone(), seq);
    let mut trace = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let base = haar_measure(&seq.region(i)?)?;
        if base.is_zero() {
            return Err(Error::input(format!("A_{i} has measure zero")));
        }
        trace.push((i, haar_measure(&dilated.region(i)?)? / base));
    }
    Ok((dilated, trace))
}

pub fn product_sequence(a: &VanHoveSequence, b: &VanHoveSequence) -> Result<VanHoveSequence> {
    VanHoveSequence::product(a, b)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VanHoveRow {
    pub index: usize,
    pub boundary_measure: String,
    pub measure: String,
    pub ratio: String,
    pub ratio_value: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VanHoveReport {
    pub sequence: String,
    pub group: String,
    pub kernel: String,
    pub tolerance: f64,
    pub tail_length: usize,
    pub rows: Vec<VanHoveRow>,
    pub passed: bool,
    pub reason: String,
    #[serde(skip)]
    pub exact_ratios: Vec<Rational>,
}

/// Ratios `μ(∂_K A_i)/μ(A_i)` for `i = 1..=i_max`. The verdict passes when
/// the last ratio is at most `tolerance` and the final `tail_length` ratios
/// never increase. Nothing beyond `i_max` is claimed.
pub fn van_hove_diagnostic(
    seq: &VanHoveSequence,
    kernel: &CompactRegion,
    i_max: usize,
    tolerance: f64,
    tail_length: usize,
) -> Result<VanHoveReport> {
    if i_max == 0 {
        return Err(Error::input("i_max must be positive"));
    }
    let mut rows = Vec::with_capacity(i_max);
    let mut exact = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let a = seq.region(i)?;
        let m = haar_measure(&a)?;
        if m.is_zero() {
            return Err(Error::input(format!("A_{i} has measure zero")));
        }
        let b = haar_measure(&k_boundary(kernel, &a)?)?;
        let r = b / m;
        rows.push(VanHoveRow {
            index: i,
            boundary_measure: format_rational(&b),
            measure: format_rational(&m),
            ratio: format_rational(&r),
            ratio_value: rational_to_f64(&r),
        });
        exact.push(r);
    }
    let last = *exact.last().expect("non-empty");
    let tail = &exact[exact.len().saturating_sub(tail_length.max(1))..];
    let monotone = tail.windows(2).all(|w| w[1] <= w[0]);
    let small = rational_to_f64(&last) <= tolerance;
    let reason = match (small, monotone) {
        (true, true) => format!("ratio {:.3e} at index {i_max} is within tolerance and the tail is non-increasing", rational_to_f64(&last)),
        (false, _) => format!("ratio {:.3e} at index {i_max} exceeds tolerance {tolerance:e}", rational_to_f64(&last)),
        (true, false) => "ratios increase within the tail".to_string(),
    };
    Ok(VanHoveReport {
        sequence: seq.label().to_string(),
        group: seq.group().to_string(),
        kernel: kernel.describe(),
        tolerance,
        tail_length,
        rows,
        passed: small && monotone,
        reason,
        exact_ratios: exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn real_boxes_have_closed_form_ratios() {
        let seq = VanHoveSequence::real_boxes(1, int(1));
        let k = CompactRegion::Box(RationalBox::centered(1, int(1)));
        let rep = van_hove_diagnostic(&seq, &k, 12, 1.0, 5).unwrap();
        for (i, r) in rep.exact_ratios.iter().enumerate() {
            let n = (i + 1) as i128;
            let expected = if n == 1 { int(2) } else { rat(2, n) };
            assert_eq!(*r, expected, "index {n}");
        }
        assert!(rep.passed);
    }

    #[test]
    fn constant_sequence_fails() {
        let region = CompactRegion::Box(RationalBox::centered(1, int(3)));
        let seq = VanHoveSequence::constant(GroupDescriptor::real(1), region);
        let k = CompactRegion::Box(RationalBox::centered(1, int(1)));
        let rep = van_hove_diagnostic(&seq, &k, 10, 1e-2, 5).unwrap();
        assert!(!rep.passed);
    }

    #[test]
    fn dilation_trace_tends_to_one() {
        let seq = VanHoveSequence::int_intervals(1);
        let k = CompactRegion::Finite(FiniteSet::interval(-1, 1));
        let (_, trace) = dilated_sequence(&k, &seq, 10).unwrap();
        assert_eq!(trace[9].1, rat(12, 10));
    }

    #[test]
    fn product_sequence_mixes_groups() {
        let a = VanHoveSequence::real_boxes(1, int(1));
        let b = VanHoveSequence::padic_balls(2, 10, PadicNumber::zero(2));
        let seq = product_sequence(&a, &b).unwrap();
        let m = haar_measure(&seq.region(3).unwrap()).unwrap();
        assert_eq!(m, int(6 * 8));
    }
}
