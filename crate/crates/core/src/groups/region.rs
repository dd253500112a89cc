//! Compact regions and their Haar measure.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::element::{GroupDescriptor, GroupElement, PadicNumber};
use crate::numeric::{format_rational, QSqrt5, Rational};

/// A finite subset of a group, stored sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSet {
    group: GroupDescriptor,
    elements: Vec<GroupElement>,
}

impl FiniteSet {
    pub fn new(group: GroupDescriptor, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        group.validate()?;
        let mut elements: Vec<GroupElement> = elements.into_iter().collect();
        for e in &elements {
            group.check(e)?;
        }
        elements.sort();
        elements.dedup();
        Ok(FiniteSet { group, elements })
    }

    pub(crate) fn from_sorted(group: GroupDescriptor, elements: Vec<GroupElement>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        FiniteSet { group, elements }
    }

    pub fn empty(group: GroupDescriptor) -> Self {
        FiniteSet { group, elements: Vec::new() }
    }

    /// `{lo, …, hi}` in ℤ.
    pub fn interval(lo: i64, hi: i64) -> Self {
        let elements = (lo..=hi).map(GroupElement::int1).collect();
        FiniteSet { group: GroupDescriptor::int(1), elements }
    }

    /// The integer box `Π {lo_j, …, hi_j}` in ℤ^d.
    pub fn int_box(lo: &[i64], hi: &[i64]) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::input("box corners must have the same positive dimension"));
        }
        let mut points: Vec<Vec<i64>> = vec![Vec::new()];
        for (a, b) in lo.iter().zip(hi) {
            let mut next = Vec::new();
            for p in &points {
                for x in *a..=*b {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
            points = next;
        }
        let elements = points.into_iter().map(GroupElement::Int).collect();
        Ok(FiniteSet::from_sorted(GroupDescriptor::int(lo.len()), elements))
    }

    pub fn from_ints(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        FiniteSet::new(GroupDescriptor::int(dim), points.iter().cloned().map(GroupElement::Int))
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Integer coordinates, for sets in ℤ^d.
    pub fn int_points(&self) -> Result<Vec<Vec<i64>>> {
        self.elements
            .iter()
            .map(|e| e.as_int().map(|v| v.to_vec()).ok_or_else(|| Error::input(format!("{e} is not an integer point"))))
            .collect()
    }

    pub fn inverse(&self) -> FiniteSet {
        let mut elements: Vec<GroupElement> = self.elements.iter().map(super::element::raw_inverse).collect();
        elements.sort();
        FiniteSet { group: self.group.clone(), elements }
    }

    pub fn union(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.same_group(other)?;
        let set: BTreeSet<GroupElement> = self.elements.iter().chain(&other.elements).cloned().collect();
        Ok(FiniteSet::from_sorted(self.group.clone(), set.into_iter().collect()))
    }

    pub fn intersection(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.same_group(other)?;
        let elements = self.elements.iter().filter(|e| other.contains(e)).cloned().collect();
        Ok(FiniteSet::from_sorted(self.group.clone(), elements))
    }

    pub fn difference(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.same_group(other)?;
        let elements = self.elements.iter().filter(|e| !other.contains(e)).cloned().collect();
        Ok(FiniteSet::from_sorted(self.group.clone(), elements))
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn filter(&self, mut keep: impl FnMut(&GroupElement) -> bool) -> FiniteSet {
        let elements = self.elements.iter().filter(|e| keep(e)).cloned().collect();
        FiniteSet::from_sorted(self.group.clone(), elements)
    }

    fn same_group(&self, other: &FiniteSet) -> Result<()> {
        if self.group != other.group {
            return Err(Error::input(format!("sets live in {} and {}", self.group, other.group)));
        }
        Ok(())
    }

    /// Exact JSON export; every coordinate is a string such as `"3/2"`.
    pub fn to_json(&self) -> Value {
        let elements: Vec<Value> = self.elements.iter().map(element_json).collect();
        json!({
            "group": self.group.to_string(),
            "size": self.elements.len(),
            "elements": elements,
        })
    }
}

fn element_json(e: &GroupElement) -> Value {
    match e {
        GroupElement::Int(v) => Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect()),
        GroupElement::Real(v) => Value::Array(v.iter().map(|x| Value::String(x.to_exact_string())).collect()),
        GroupElement::Heisenberg(v) => Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect()),
        GroupElement::Padic(x) => Value::Array(vec![Value::String(x.to_string())]),
        GroupElement::Tuple(parts) => Value::Array(parts.iter().map(element_json).collect()),
    }
}

/// A closed axis-parallel box `Π [lower_j, upper_j]` in ℝ^d with rational corners.
/// A box with some `upper_j < lower_j` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalBox {
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
}

impl RationalBox {
    pub fn new(lower: Vec<Rational>, upper: Vec<Rational>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::input("box corners must have the same positive dimension"));
        }
        Ok(RationalBox { lower, upper })
    }

    /// `[-r, r]^dim`.
    pub fn centered(dim: usize, r: Rational) -> Self {
        RationalBox { lower: vec![-r; dim], upper: vec![r; dim] }
    }

    pub fn interval(lo: Rational, hi: Rational) -> Self {
        RationalBox { lower: vec![lo], upper: vec![hi] }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(l, u)| u < l)
    }

    pub fn volume(&self) -> Rational {
        if self.is_empty() {
            return Rational::zero();
        }
        self.lower.iter().zip(&self.upper).fold(Rational::one(), |acc, (l, u)| acc * (u - l))
    }

    pub fn contains_point(&self, x: &[QSqrt5]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= QSqrt5::from_rational(l) && *v <= QSqrt5::from_rational(u))
    }

    pub fn translate(&self, t: &[Rational]) -> RationalBox {
        RationalBox {
            lower: self.lower.iter().zip(t).map(|(a, b)| a + b).collect(),
            upper: self.upper.iter().zip(t).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn minkowski(&self, other: &RationalBox) -> Result<RationalBox> {
        if self.dim() != other.dim() {
            return Err(Error::input("box dimensions differ"));
        }
        Ok(RationalBox {
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a + b).collect(),
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> =
            self.lower.iter().zip(&self.upper).map(|(l, u)| format!("[{}, {}]", format_rational(l), format_rational(u))).collect();
        parts.join(" x ")
    }
}

/// Lebesgue measure of a finite union of closed boxes, computed exactly on the
/// grid spanned by all box corners.
pub fn union_volume(boxes: &[RationalBox]) -> Result<Rational> {
    let boxes: Vec<&RationalBox> = boxes.iter().filter(|b| !b.is_empty()).collect();
    let Some(first) = boxes.first() else {
        return Ok(Rational::zero());
    };
    let d = first.dim();
    if boxes.iter().any(|b| b.dim() != d) {
        return Err(Error::input("box dimensions differ"));
    }
    let mut axes: Vec<Vec<Rational>> = vec![Vec::new(); d];
    for b in &boxes {
        for j in 0..d {
            axes[j].push(b.lower[j]);
            axes[j].push(b.upper[j]);
        }
    }
    for a in axes.iter_mut() {
        a.sort();
        a.dedup();
    }
    let cells_per_axis: Vec<usize> = axes.iter().map(|a| a.len().saturating_sub(1)).collect();
    let total: usize = cells_per_axis.iter().product();
    if total == 0 {
        return Ok(Rational::zero());
    }
    const CELL_LIMIT: usize = 50_000_000;
    if total > CELL_LIMIT {
        return Err(Error::Budget { what: "box union measure".into(), required: total, limit: CELL_LIMIT });
    }
    let mut covered = vec![false; total];
    for b in &boxes {
        let mut ranges = Vec::with_capacity(d);
        for j in 0..d {
            let lo = axes[j].binary_search(&b.lower[j]).expect("corner on grid");
            let hi = axes[j].binary_search(&b.upper[j]).expect("corner on grid");
            ranges.push(lo..hi);
        }
        mark_cells(&mut covered, &cells_per_axis, &ranges, 0, 0);
    }
    let mut volume = Rational::zero();
    let mut index = vec![0usize; d];
    for (flat, hit) in covered.iter().enumerate() {
        if *hit {
            let mut rem = flat;
            for j in (0..d).rev() {
                index[j] = rem % cells_per_axis[j];
                rem /= cells_per_axis[j];
            }
            let cell: Rational = (0..d).fold(Rational::one(), |acc, j| acc * (axes[j][index[j] + 1] - axes[j][index[j]]));
            volume += cell;
        }
    }
    Ok(volume)
}

fn mark_cells(covered: &mut [bool], dims: &[usize], ranges: &[std::ops::Range<usize>], axis: usize, offset: usize) {
    if axis == dims.len() {
        covered[offset] = true;
        return;
    }
    for i in ranges[axis].clone() {
        mark_cells(covered, dims, ranges, axis + 1, offset * dims[axis] + i);
    }
}

/// The ball `center + p^(-radius) ℤ_p`, with measure `p^radius`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PadicBall {
    center: PadicNumber,
    radius: i32,
}

pub(crate) fn p_power(p: u64, n: i32) -> Result<Rational> {
    let base = (p as i128).checked_pow(n.unsigned_abs()).ok_or_else(|| Error::Overflow(format!("{p}^{n}")))?;
    Ok(if n >= 0 { Rational::from_integer(base) } else { Rational::new(1, base) })
}

impl PadicBall {
    /// The center is reduced to the canonical representative in `[0, p^(-radius))`.
    pub fn new(center: PadicNumber, radius: i32) -> Result<Self> {
        let unit = p_power(center.p, -radius)?;
        let q = (center.value / unit).floor();
        let value = center.value - q * unit;
        Ok(PadicBall { center: PadicNumber { p: center.p, value }, radius })
    }

    pub fn centered(p: u64, radius: i32) -> Result<Self> {
        PadicBall::new(PadicNumber::zero(p), radius)
    }

    pub fn center(&self) -> &PadicNumber {
        &self.center
    }

    pub fn radius(&self) -> i32 {
        self.radius
    }

    pub fn prime(&self) -> u64 {
        self.center.p
    }

    pub fn measure(&self) -> Result<Rational> {
        p_power(self.center.p, self.radius)
    }

    pub fn contains(&self, x: &PadicNumber) -> bool {
        if x.p != self.center.p {
            return false;
        }
        match p_power(x.p, self.radius) {
            Ok(scale) => ((x.value - self.center.value) * scale).is_integer(),
            Err(_) => false,
        }
    }

    pub fn contains_ball(&self, other: &PadicBall) -> bool {
        other.radius <= self.radius && self.contains(&other.center)
    }
}

/// Drops balls nested in others; what remains is pairwise disjoint.
pub(crate) fn canonical_balls(mut balls: Vec<PadicBall>) -> Vec<PadicBall> {
    balls.sort_by(|a, b| b.radius.cmp(&a.radius).then_with(|| a.cmp(b)));
    let mut kept: Vec<PadicBall> = Vec::new();
    for b in balls {
        if !kept.iter().any(|k| k.contains_ball(&b)) {
            kept.push(b);
        }
    }
    kept.sort();
    kept
}

/// A compact region in one of the supported groups.
#[derive(Clone, Debug, PartialEq)]
pub enum CompactRegion {
    Finite(FiniteSet),
    Box(RationalBox),
    BoxUnion(Vec<RationalBox>),
    PadicBall(PadicBall),
    BallUnion(Vec<PadicBall>),
    /// Cartesian product, one region per factor group.
    Product(Vec<CompactRegion>),
    /// `⋃_j D_1 × … × S_j × … × D_n` with each `S_j ⊆ D_j`: the shape of a
    /// boundary of a product region.
    ProductShell {
        dilated: Vec<CompactRegion>,
        boundary: Vec<CompactRegion>,
    },
}

impl CompactRegion {
    pub fn measure(&self) -> Result<Rational> {
        match self {
            CompactRegion::Finite(s) => {
                Ok(if s.group().is_discrete() { Rational::from_integer(s.len() as i128) } else { Rational::zero() })
            }
            CompactRegion::Box(b) => Ok(b.volume()),
            CompactRegion::BoxUnion(bs) => union_volume(bs),
            CompactRegion::PadicBall(b) => b.measure(),
            CompactRegion::BallUnion(bs) => canonical_balls(bs.clone()).iter().try_fold(Rational::zero(), |acc, b| Ok(acc + b.measure()?)),
            CompactRegion::Product(parts) => parts.iter().try_fold(Rational::one(), |acc, r| Ok(acc * r.measure()?)),
            CompactRegion::ProductShell { dilated, boundary } => {
                if dilated.len() != boundary.len() {
                    return Err(Error::input("product shell arity mismatch"));
                }
                let mut full = Rational::one();
                let mut inner = Rational::one();
                for (d, s) in dilated.iter().zip(boundary) {
                    let md = d.measure()?;
                    full *= md;
                    inner *= md - s.measure()?;
                }
                Ok(full - inner)
            }
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (CompactRegion::Finite(s), _) => s.contains(g),
            (CompactRegion::Box(b), GroupElement::Real(x)) => b.contains_point(x),
            (CompactRegion::BoxUnion(bs), GroupElement::Real(x)) => bs.iter().any(|b| b.contains_point(x)),
            (CompactRegion::PadicBall(b), GroupElement::Padic(x)) => b.contains(x),
            (CompactRegion::BallUnion(bs), GroupElement::Padic(x)) => bs.iter().any(|b| b.contains(x)),
            (CompactRegion::Product(parts), GroupElement::Tuple(xs)) => {
                parts.len() == xs.len() && parts.iter().zip(xs).all(|(r, x)| r.contains(x))
            }
            (CompactRegion::ProductShell { dilated, boundary }, GroupElement::Tuple(xs)) => {
                dilated.len() == xs.len()
                    && dilated.iter().zip(xs).all(|(r, x)| r.contains(x))
                    && boundary.iter().zip(xs).any(|(r, x)| r.contains(x))
            }
            _ => false,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteSet> {
        match self {
            CompactRegion::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CompactRegion::Finite(s) => format!("finite set of {} points in {}", s.len(), s.group()),
            CompactRegion::Box(b) => b.describe(),
            CompactRegion::BoxUnion(bs) => format!("union of {} boxes", bs.len()),
            CompactRegion::PadicBall(b) => format!("{} + {}^{}Z_{}", b.center, b.prime(), -b.radius, b.prime()),
            CompactRegion::BallUnion(bs) => format!("union of {} p-adic balls", bs.len()),
            CompactRegion::Product(parts) => parts.iter().map(|p| format!("({})", p.describe())).collect::<Vec<_>>().join(" x "),
            CompactRegion::ProductShell { dilated, .. } => format!("boundary shell of a {}-fold product", dilated.len()),
        }
    }
}

/// Haar measure: counting measure on discrete groups, Lebesgue on ℝ^d,
/// μ(ℤ_p) = 1 on ℚ_p, and product measure on products.
pub fn haar_measure(region: &CompactRegion) -> Result<Rational> {
    region.measure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn haar_measures() {
        assert_eq!(haar_measure(&CompactRegion::Finite(FiniteSet::interval(-3, 3))).unwrap(), int(7));
        let b = RationalBox::new(vec![int(0), rat(1, 2)], vec![int(2), int(2)]).unwrap();
        assert_eq!(haar_measure(&CompactRegion::Box(b)).unwrap(), int(3));
        let ball = PadicBall::centered(2, 3).unwrap();
        assert_eq!(haar_measure(&CompactRegion::PadicBall(ball)).unwrap(), int(8));
        let small = PadicBall::centered(3, -2).unwrap();
        assert_eq!(small.measure().unwrap(), rat(1, 9));
    }

    #[test]
    fn box_union_counts_overlap_once() {
        let a = RationalBox::interval(int(0), int(2));
        let b = RationalBox::interval(int(1), int(3));
        let c = RationalBox::interval(int(5), int(6));
        assert_eq!(union_volume(&[a, b, c]).unwrap(), int(4));
        let sq1 = RationalBox::centered(2, int(1));
        let sq2 = sq1.translate(&[int(1), int(1)]);
        assert_eq!(union_volume(&[sq1, sq2]).unwrap(), int(7));
    }

    #[test]
    fn ball_canonical_center() {
        let x = PadicNumber::new(2, 5, 0).unwrap();
        let b = PadicBall::new(x.clone(), -2).unwrap();
        assert_eq!(b.center().value, int(1));
        assert!(b.contains(&x));
        assert!(!b.contains(&PadicNumber::new(2, 3, 0).unwrap()));
        let same = PadicBall::new(PadicNumber::new(2, 9, 0).unwrap(), -2).unwrap();
        assert_eq!(b, same);
        let nested = canonical_balls(vec![b.clone(), PadicBall::centered(2, 0).unwrap()]);
        assert_eq!(nested.len(), 1);
    }

    #[test]
    fn finite_set_json_is_exact() {
        let s = FiniteSet::new(
            GroupDescriptor::real(1),
            vec![GroupElement::real_rational(&[rat(3, 2)]), GroupElement::Real(vec![QSqrt5::tau()])],
        )
        .unwrap();
        let v = s.to_json();
        assert_eq!(v["elements"][0][0], "3/2");
        assert_eq!(v["elements"][1][0], "(1,1,2)");
    }

    proptest! {
        #[test]
        fn box_union_measure_is_inclusion_exclusion(a in -20i128..20, la in 0i128..10, b in -20i128..20, lb in 0i128..10) {
            let x = RationalBox::interval(int(a), int(a + la));
            let y = RationalBox::interval(int(b), int(b + lb));
            let overlap = (std::cmp::min(a + la, b + lb) - std::cmp::max(a, b)).max(0);
            prop_assert_eq!(union_volume(&[x, y]).unwrap(), int(la + lb - overlap));
        }
    }
}
