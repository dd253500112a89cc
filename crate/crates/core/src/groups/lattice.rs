//! Discretizing boxes along a lattice `Π s_j ℤ` with the half-open cell
//! `C = Π [0, s_j)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::element::{GroupDescriptor, GroupElement};
use crate::groups::region::{CompactRegion, FiniteSet, RationalBox};
use crate::numeric::{ceil_rational, floor_rational, int, Rational};

#[derive(Clone, Debug)]
pub struct Discretization {
    pub spacing: Vec<Rational>,
    /// Lattice points whose closed cell lies inside the box.
    pub inner: FiniteSet,
    /// Lattice points whose closed cell meets the box.
    pub outer: FiniteSet,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscretizationSummary {
    pub inner_size: usize,
    pub outer_size: usize,
}

fn axis_points(s: Rational, lo: Rational, hi: Rational) -> Vec<Rational> {
    let first = ceil_rational(&(lo / s));
    let last = floor_rational(&(hi / s));
    (first..=last).map(|k| s * int(k)).collect()
}

fn grid(axes: &[Vec<Rational>]) -> Vec<GroupElement> {
    let mut points: Vec<Vec<Rational>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for p in &points {
            for x in axis {
                let mut q = p.clone();
                q.push(*x);
                next.push(q);
            }
        }
        points = next;
    }
    let mut out: Vec<GroupElement> = points.iter().map(|p| GroupElement::real_rational(p)).collect();
    out.sort();
    out
}

/// Inner and outer lattice approximations of a box: `inner = {z : z + C̄ ⊆ A}`
/// and `outer = {z : (z + C̄) ∩ A ≠ ∅}`.
pub fn lattice_discretize(a: &RationalBox, spacing: &[Rational]) -> Result<Discretization> {
    if spacing.len() != a.dim() {
        return Err(Error::input("spacing and box dimensions differ"));
    }
    if spacing.iter().any(|s| *s <= int(0)) {
        return Err(Error::input("lattice spacing must be positive"));
    }
    let mut inner_axes = Vec::new();
    let mut outer_axes = Vec::new();
    for j in 0..a.dim() {
        let s = spacing[j];
        inner_axes.push(axis_points(s, a.lower[j], a.upper[j] - s));
        outer_axes.push(axis_points(s, a.lower[j] - s, a.upper[j]));
    }
    let group = GroupDescriptor::real(a.dim());
    Ok(Discretization {
        spacing: spacing.to_vec(),
        inner: FiniteSet::from_sorted(group.clone(), grid(&inner_axes)),
        outer: FiniteSet::from_sorted(group, grid(&outer_axes)),
    })
}

/// `C̄·F`, the union of closed cells over the lattice points of `F`.
pub fn cell_union(points: &FiniteSet, spacing: &[Rational]) -> Result<CompactRegion> {
    let mut boxes = Vec::with_capacity(points.len());
    for p in points.iter() {
        let coords: Vec<Rational> = p
            .as_real()
            .and_then(|v| v.iter().map(|x| x.as_rational()).collect())
            .ok_or_else(|| Error::input(format!("{p} is not a rational lattice point")))?;
        let upper = coords.iter().zip(spacing).map(|(x, s)| x + s).collect();
        boxes.push(RationalBox::new(coords, upper)?);
    }
    Ok(CompactRegion::BoxUnion(boxes))
}

impl Discretization {
    pub fn summary(&self) -> DiscretizationSummary {
        DiscretizationSummary { inner_size: self.inner.len(), outer_size: self.outer.len() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::region::haar_measure;
    use crate::numeric::rat;

    #[test]
    fn unit_interval() {
        let d = lattice_discretize(&RationalBox::interval(int(0), int(1)), &[int(1)]).unwrap();
        assert_eq!(d.inner.len(), 1);
        assert_eq!(d.outer.len(), 3);
    }

    #[test]
    fn symmetric_box_sizes() {
        for n in 1..20i128 {
            let d = lattice_discretize(&RationalBox::centered(2, int(n)), &[int(1), int(1)]).unwrap();
            assert_eq!(d.inner.len() as i128, (2 * n) * (2 * n));
            assert_eq!(d.outer.len() as i128, (2 * n + 2) * (2 * n + 2));
        }
    }

    #[test]
    fn cells_sandwich_the_box() {
        let a = RationalBox::new(vec![rat(-7, 3)], vec![rat(5, 2)]).unwrap();
        let d = lattice_discretize(&a, &[rat(1, 2)]).unwrap();
        let inner = haar_measure(&cell_union(&d.inner, &[rat(1, 2)]).unwrap()).unwrap();
        let outer = haar_measure(&cell_union(&d.outer, &[rat(1, 2)]).unwrap()).unwrap();
        assert!(inner <= a.volume() && a.volume() <= outer);
    }
}
