//! Minkowski products and K-boundaries.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::groups::element::{raw_inverse, raw_op, GroupElement, PadicNumber};
use crate::groups::region::{canonical_balls, CompactRegion, FiniteSet, PadicBall, RationalBox};
use crate::numeric::Rational;

const MINKOWSKI_LIMIT: usize = 20_000_000;

/// `A·B = {ab : a ∈ A, b ∈ B}`; every product is checked against the group's
/// precision.
pub fn minkowski(a: &FiniteSet, b: &FiniteSet) -> Result<FiniteSet> {
    if a.group() != b.group() {
        return Err(Error::input(format!("sets live in {} and {}", a.group(), b.group())));
    }
    let pairs = a.len().saturating_mul(b.len());
    if pairs > MINKOWSKI_LIMIT {
        return Err(Error::Budget { what: "Minkowski product".into(), required: pairs, limit: MINKOWSKI_LIMIT });
    }
    let mut out = Vec::with_capacity(pairs);
    for x in a.iter() {
        for y in b.iter() {
            let z = raw_op(x, y)?;
            a.group().check(&z)?;
            out.push(z);
        }
    }
    out.sort();
    out.dedup();
    Ok(FiniteSet::from_sorted(a.group().clone(), out))
}

fn rational_point(g: &GroupElement) -> Option<Vec<Rational>> {
    g.as_real()?.iter().map(|x| x.as_rational()).collect()
}

fn boxes_of(r: &CompactRegion) -> Option<Vec<RationalBox>> {
    match r {
        CompactRegion::Box(b) => Some(vec![b.clone()]),
        CompactRegion::BoxUnion(bs) => Some(bs.clone()),
        _ => None,
    }
}

/// Balls of a p-adic region; isolated points come back as `None` radius.
fn padic_pieces(r: &CompactRegion) -> Option<Vec<(PadicNumber, Option<i32>)>> {
    match r {
        CompactRegion::PadicBall(b) => Some(vec![(b.center().clone(), Some(b.radius()))]),
        CompactRegion::BallUnion(bs) => Some(bs.iter().map(|b| (b.center().clone(), Some(b.radius()))).collect()),
        CompactRegion::Finite(s) => s
            .iter()
            .map(|e| match e {
                GroupElement::Padic(x) => Some((x.clone(), None)),
                _ => None,
            })
            .collect(),
        _ => None,
    }
}

fn ball_region(mut balls: Vec<PadicBall>) -> CompactRegion {
    balls = canonical_balls(balls);
    if balls.len() == 1 {
        CompactRegion::PadicBall(balls.pop().expect("one ball"))
    } else {
        CompactRegion::BallUnion(balls)
    }
}

/// The closure of `K·A` for the supported pairings of region shapes.
pub fn dilate(k: &CompactRegion, a: &CompactRegion) -> Result<CompactRegion> {
    use CompactRegion as R;
    match (k, a) {
        (R::Finite(x), R::Finite(y)) => Ok(R::Finite(minkowski(x, y)?)),
        (R::Product(xs), R::Product(ys)) => {
            if xs.len() != ys.len() {
                return Err(Error::input("product arities differ"));
            }
            Ok(R::Product(xs.iter().zip(ys).map(|(x, y)| dilate(x, y)).collect::<Result<_>>()?))
        }
        _ => {
            if let (Some(kb), Some(ab)) = (boxes_of(k), boxes_of(a)) {
                let mut out = Vec::new();
                for x in &kb {
                    for y in &ab {
                        out.push(x.minkowski(y)?);
                    }
                }
                return Ok(if out.len() == 1 { R::Box(out.pop().expect("one box")) } else { R::BoxUnion(out) });
            }
            let translated = match (k, a) {
                (R::Finite(pts), other) | (other, R::Finite(pts)) => boxes_of(other).map(|bs| (pts, bs)),
                _ => None,
            };
            if let Some((pts, ab)) = translated {
                let mut out = Vec::new();
                for p in pts.iter() {
                    let t = rational_point(p).ok_or_else(|| Error::unsupported("translating boxes by non-rational points"))?;
                    for b in &ab {
                        if t.len() != b.dim() {
                            return Err(Error::input("point and box dimensions differ"));
                        }
                        out.push(b.translate(&t));
                    }
                }
                return Ok(R::BoxUnion(out));
            }
            if let (Some(kp), Some(ap)) = (padic_pieces(k), padic_pieces(a)) {
                let mut balls = Vec::new();
                for (c1, r1) in &kp {
                    for (c2, r2) in &ap {
                        if c1.prime() != c2.prime() {
                            return Err(Error::input("p-adic regions over different primes"));
                        }
                        let radius = match (r1, r2) {
                            (Some(x), Some(y)) => (*x).max(*y),
                            (Some(x), None) | (None, Some(x)) => *x,
                            (None, None) => {
                                return Err(Error::unsupported("mixed finite and ball p-adic regions"));
                            }
                        };
                        balls.push(PadicBall::new(c1.add(c2)?, radius)?);
                    }
                }
                return Ok(ball_region(balls));
            }
            Err(Error::unsupported(format!("dilating {} by {}", a.describe(), k.describe())))
        }
    }
}

/// `∂_K A = cl(KA) ∩ cl(K·A^c)`.
pub fn k_boundary(k: &CompactRegion, a: &CompactRegion) -> Result<CompactRegion> {
    use CompactRegion as R;
    match (k, a) {
        (R::Finite(ks), R::Finite(as_)) => {
            if !ks.group().is_discrete() {
                return Err(Error::unsupported("finite K-boundaries in a non-discrete group"));
            }
            let ka = minkowski(ks, as_)?;
            let inv: Vec<GroupElement> = ks.iter().map(raw_inverse).collect();
            let mut out = Vec::new();
            for g in ka.iter() {
                for ki in &inv {
                    if !as_.contains(&raw_op(ki, g)?) {
                        out.push(g.clone());
                        break;
                    }
                }
            }
            Ok(R::Finite(ka.filter(|g| out.binary_search(g).is_ok())))
        }
        (R::Box(kb), R::Box(ab)) => Ok(box_shell(kb, ab)?),
        (R::Product(ks), R::Product(as_)) => {
            if ks.len() != as_.len() {
                return Err(Error::input("product arities differ"));
            }
            let dilated = ks.iter().zip(as_).map(|(x, y)| dilate(x, y)).collect::<Result<_>>()?;
            let boundary = ks.iter().zip(as_).map(|(x, y)| k_boundary(x, y)).collect::<Result<_>>()?;
            Ok(R::ProductShell { dilated, boundary })
        }
        (_, R::PadicBall(ball)) => {
            let pieces = padic_pieces(k).ok_or_else(|| Error::unsupported(format!("p-adic boundary with K = {}", k.describe())))?;
            let ka = dilate(k, a)?;
            if pieces.iter().any(|(_, r)| r.is_some_and(|r| r > ball.radius())) {
                return Ok(ka);
            }
            // Every translate k + A is a coset of p^(-n)ℤ_p; the boundary is empty
            // exactly when they all coincide.
            let cosets: BTreeSet<PadicBall> =
                pieces.iter().map(|(c, _)| PadicBall::new(c.add(ball.center())?, ball.radius())).collect::<Result<_>>()?;
            Ok(if cosets.len() <= 1 { R::BallUnion(Vec::new()) } else { ka })
        }
        _ => Err(Error::unsupported(format!("K-boundary of {} with K = {}", a.describe(), k.describe()))),
    }
}

/// The closed outer box minus the open box `Π (a_lo + k_hi, a_hi + k_lo)`,
/// written as a union of closed slabs.
fn box_shell(k: &RationalBox, a: &RationalBox) -> Result<CompactRegion> {
    let outer = k.minkowski(a)?;
    if a.is_empty() || k.is_empty() {
        return Ok(CompactRegion::BoxUnion(Vec::new()));
    }
    let d = outer.dim();
    let inner_lo: Vec<Rational> = (0..d).map(|j| a.lower[j] + k.upper[j]).collect();
    let inner_hi: Vec<Rational> = (0..d).map(|j| a.upper[j] + k.lower[j]).collect();
    if (0..d).any(|j| inner_lo[j] >= inner_hi[j]) {
        return Ok(CompactRegion::Box(outer));
    }
    let mut slabs = Vec::with_capacity(2 * d);
    for j in 0..d {
        let mut low = outer.clone();
        low.upper[j] = inner_lo[j];
        slabs.push(low);
        let mut high = outer.clone();
        high.lower[j] = inner_hi[j];
        slabs.push(high);
    }
    Ok(CompactRegion::BoxUnion(slabs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::element::GroupDescriptor;
    use crate::groups::region::haar_measure;
    use crate::numeric::{int, rat, QSqrt5};
    use proptest::prelude::*;

    #[test]
    fn interval_boundary_in_z() {
        let k = CompactRegion::Finite(FiniteSet::interval(0, 1));
        let a = CompactRegion::Finite(FiniteSet::interval(-5, 5));
        let b = k_boundary(&k, &a).unwrap();
        let pts: Vec<i64> = b.as_finite().unwrap().iter().map(|e| e.as_int().unwrap()[0]).collect();
        assert_eq!(pts, vec![-5, 6]);
    }

    #[test]
    fn box_boundary_in_r2() {
        let k = CompactRegion::Box(RationalBox::centered(2, int(1)));
        let a = CompactRegion::Box(RationalBox::centered(2, int(10)));
        let b = k_boundary(&k, &a).unwrap();
        // (22)^2 − (18)^2
        assert_eq!(haar_measure(&b).unwrap(), int(160));
        let inside = GroupElement::real_rational(&[int(0), int(0)]);
        let edge = GroupElement::real_rational(&[int(9), int(0)]);
        let open_inner = GroupElement::real_rational(&[rat(17, 2), int(0)]);
        assert!(!b.contains(&inside));
        assert!(b.contains(&edge));
        assert!(!b.contains(&open_inner));
    }

    #[test]
    fn thin_box_boundary_is_everything() {
        let k = CompactRegion::Box(RationalBox::centered(1, int(2)));
        let a = CompactRegion::Box(RationalBox::centered(1, int(1)));
        assert_eq!(haar_measure(&k_boundary(&k, &a).unwrap()).unwrap(), int(6));
    }

    #[test]
    fn padic_balls_have_empty_boundary() {
        let k = CompactRegion::PadicBall(PadicBall::centered(3, 0).unwrap());
        for n in 0..5 {
            let a = CompactRegion::PadicBall(PadicBall::centered(3, n).unwrap());
            assert_eq!(haar_measure(&k_boundary(&k, &a).unwrap()).unwrap(), int(0));
        }
        let big = CompactRegion::PadicBall(PadicBall::centered(3, 2).unwrap());
        let a = CompactRegion::PadicBall(PadicBall::centered(3, 1).unwrap());
        assert_eq!(haar_measure(&k_boundary(&big, &a).unwrap()).unwrap(), int(9));
    }

    #[test]
    fn padic_points_in_distinct_cosets() {
        let g = GroupDescriptor::padic(2, 4);
        let pts = FiniteSet::new(
            g,
            vec![GroupElement::Padic(PadicNumber::new(2, 0, 0).unwrap()), GroupElement::Padic(PadicNumber::new(2, 1, 2).unwrap())],
        )
        .unwrap();
        let a = CompactRegion::PadicBall(PadicBall::centered(2, 1).unwrap());
        let b = k_boundary(&CompactRegion::Finite(pts), &a).unwrap();
        assert_eq!(haar_measure(&b).unwrap(), int(4));
    }

    #[test]
    fn heisenberg_minkowski_respects_order() {
        let g = GroupDescriptor::HeisenbergInt;
        let x = FiniteSet::new(g.clone(), vec![GroupElement::Heisenberg([1, 0, 0])]).unwrap();
        let y = FiniteSet::new(g, vec![GroupElement::Heisenberg([0, 1, 0])]).unwrap();
        assert_ne!(minkowski(&x, &y).unwrap(), minkowski(&y, &x).unwrap());
    }

    #[test]
    fn product_boundary_measure() {
        let k = CompactRegion::Product(vec![
            CompactRegion::Box(RationalBox::centered(1, int(1))),
            CompactRegion::PadicBall(PadicBall::centered(2, 0).unwrap()),
        ]);
        let a = CompactRegion::Product(vec![
            CompactRegion::Box(RationalBox::centered(1, int(10))),
            CompactRegion::PadicBall(PadicBall::centered(2, 3).unwrap()),
        ]);
        // (22·8) − (18·8)
        assert_eq!(haar_measure(&k_boundary(&k, &a).unwrap()).unwrap(), int(32));
        let inside = GroupElement::Tuple(vec![
            GroupElement::Real(vec![QSqrt5::from_int(10)]),
            GroupElement::Padic(PadicNumber::new(2, 1, 1).unwrap()),
        ]);
        assert!(k_boundary(&k, &a).unwrap().contains(&inside));
    }

    fn small_set() -> impl Strategy<Value = FiniteSet> {
        proptest::collection::vec((-6i64..6, -6i64..6), 1..12)
            .prop_map(|v| FiniteSet::from_ints(2, &v.into_iter().map(|(a, b)| vec![a, b]).collect::<Vec<_>>()).unwrap())
    }

    proptest! {
        #[test]
        fn boundary_lies_in_dilation(k in small_set(), a in small_set()) {
            let kr = CompactRegion::Finite(k.clone());
            let ar = CompactRegion::Finite(a.clone());
            let b = k_boundary(&kr, &ar).unwrap();
            let ka = minkowski(&k, &a).unwrap();
            prop_assert!(b.as_finite().unwrap().is_subset(&ka));
            // Points of KA off the boundary satisfy K⁻¹g ⊆ A.
            for g in ka.iter().filter(|g| !b.contains(g)) {
                for x in k.iter() {
                    prop_assert!(a.contains(&raw_op(&raw_inverse(x), g).unwrap()));
                }
            }
        }

        #[test]
        fn translates_of_boundaries_stay_in_boundaries(l in small_set(), k in small_set(), a in small_set()) {
            let kr = CompactRegion::Finite(k.clone());
            let ar = CompactRegion::Finite(a.clone());
            let lhs = minkowski(&l, k_boundary(&kr, &ar).unwrap().as_finite().unwrap()).unwrap();
            let lk = CompactRegion::Finite(minkowski(&l, &k).unwrap());
            let rhs = k_boundary(&lk, &ar).unwrap();
            prop_assert!(lhs.is_subset(rhs.as_finite().unwrap()));
        }

        #[test]
        fn dilation_by_neighbourhood_of_identity(l in small_set(), a in small_set()) {
            let l = l.union(&FiniteSet::from_ints(2, &[vec![0, 0]]).unwrap()).unwrap();
            let la = minkowski(&l, &a).unwrap();
            let b = k_boundary(&CompactRegion::Finite(l), &CompactRegion::Finite(a.clone())).unwrap();
            let cover = a.union(b.as_finite().unwrap()).unwrap();
            prop_assert!(la.is_subset(&cover));
        }

        #[test]
        fn boundary_is_monotone_in_kernel(k in small_set(), extra in small_set(), a in small_set()) {
            let ar = CompactRegion::Finite(a);
            let small = k_boundary(&CompactRegion::Finite(k.clone()), &ar).unwrap();
            let big = k_boundary(&CompactRegion::Finite(k.union(&extra).unwrap()), &ar).unwrap();
            prop_assert!(small.as_finite().unwrap().is_subset(big.as_finite().unwrap()));
        }

        #[test]
        fn heisenberg_boundary_inclusion(
            l in proptest::collection::vec((-2i64..2, -2i64..2, -2i64..2), 1..4),
            k in proptest::collection::vec((-2i64..2, -2i64..2, -2i64..2), 1..4),
            a in proptest::collection::vec((-3i64..3, -3i64..3, -3i64..3), 1..10),
        ) {
            let g = GroupDescriptor::HeisenbergInt;
            let mk = |v: Vec<(i64, i64, i64)>| FiniteSet::new(g.clone(), v.into_iter().map(|(x, y, z)| GroupElement::Heisenberg([x, y, z]))).unwrap();
            let (l, k, a) = (mk(l), mk(k), mk(a));
            let ar = CompactRegion::Finite(a);
            let lhs = minkowski(&l, k_boundary(&CompactRegion::Finite(k.clone()), &ar).unwrap().as_finite().unwrap()).unwrap();
            let rhs = k_boundary(&CompactRegion::Finite(minkowski(&l, &k).unwrap()), &ar).unwrap();
            prop_assert!(lhs.is_subset(rhs.as_finite().unwrap()));
        }

        #[test]
        fn measure_is_translation_invariant(lo in -30i128..30, len in 0i128..20, t in -50i128..50) {
            let b = RationalBox::interval(int(lo), int(lo + len));
            let moved = b.translate(&[rat(t, 3)]);
            prop_assert_eq!(haar_measure(&CompactRegion::Box(b)).unwrap(), haar_measure(&CompactRegion::Box(moved)).unwrap());
        }

        #[test]
        fn minkowski_size_bounds(k in small_set(), a in small_set()) {
            let ka = minkowski(&k, &a).unwrap();
            prop_assert!(ka.len() >= a.len().max(k.len()));
            prop_assert!(ka.len() <= a.len() * k.len());
        }
    }
}
