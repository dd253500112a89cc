//! Separated, spanning and covering numbers of finite metric spaces.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::count::thicken;
use crate::dynamics::subshift::{Cell, Subshift};
use crate::error::{Error, Result};
use crate::groups::{minkowski, FiniteSet, GroupDescriptor};
use crate::numeric::{format_rational, int, rat, Rational};
use crate::util::bitset::BitSet;
use crate::util::setcover::{greedy_cover, min_cover};

/// Instances with more points are handled greedily, with bounds only.
pub const EXACT_LIMIT: usize = 24;
const NODE_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

/// One of the three numbers; `exact` is false for certified greedy bounds
/// (a lower bound for `sep`, upper bounds for `spa` and `cov`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounded {
    pub value: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricCounts {
    pub epsilon: String,
    pub sep: Bounded,
    pub spa: Bounded,
    pub cov: Bounded,
}

/// `cov(ε) ≤ spa(ε/2) ≤ sep(ε/2) ≤ cov(ε/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainCheck {
    pub epsilon: String,
    pub cov: usize,
    pub spa_half: usize,
    pub sep_half: usize,
    pub cov_half: usize,
    pub exact: bool,
    pub holds: bool,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::input("a metric space needs at least one point"));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::input("distance matrix must be square with one row per point"));
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(Error::input(format!("d({i},{i}) must be 0")));
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::input(format!("distance is not symmetric at ({i},{j})")));
                }
                if i != j && dist[i][j] <= Rational::zero() {
                    return Err(Error::input(format!("distinct points {i} and {j} must have positive distance")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] {
                        return Err(Error::input(format!("triangle inequality fails for ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// Points of ℚ^d under the sup metric.
    pub fn from_points_sup(points: &[Vec<i64>]) -> Result<Self> {
        let labels = (0..points.len()).map(|i| i.to_string()).collect();
        let dist = points
            .iter()
            .map(|p| points.iter().map(|q| int(p.iter().zip(q).map(|(a, b)| (a - b).abs()).max().unwrap_or(0) as i128)).collect())
            .collect();
        FiniteMetricSpace::new(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distance(&self, i: usize, j: usize) -> Rational {
        self.dist[i][j]
    }

    /// Number of classes when "closer than `eps`" is an equivalence relation
    /// (always the case in an ultrametric). Then every class is at once a
    /// maximal separated choice, a spanning choice and a cover element.
    fn classes(&self, eps: Rational) -> Option<usize> {
        let n = self.len();
        let mut rep: Vec<usize> = Vec::new();
        let mut class = vec![0usize; n];
        for i in 0..n {
            match rep.iter().position(|r| self.dist[*r][i] < eps) {
                Some(c) => class[i] = c,
                None => {
                    class[i] = rep.len();
                    rep.push(i);
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if (self.dist[i][j] < eps) != (class[i] == class[j]) {
                    return None;
                }
            }
        }
        Some(rep.len())
    }

    fn close(&self, eps: Rational) -> Vec<u64> {
        let n = self.len();
        (0..n).map(|i| (0..n).filter(|j| *j != i && self.dist[i][*j] < eps).fold(0u64, |m, j| m | (1 << j))).collect()
    }

    fn closed_neighbourhoods(&self, eps: Rational) -> Vec<BitSet> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = BitSet::new(n);
                for j in 0..n {
                    if self.dist[i][j] < eps {
                        s.insert(j);
                    }
                }
                s
            })
            .collect()
    }

    /// Largest subset whose points are pairwise at least `eps` apart.
    pub fn sep(&self, eps: Rational) -> Bounded {
        if let Some(c) = self.classes(eps) {
            return Bounded { value: c, exact: true };
        }
        let n = self.len();
        if n > EXACT_LIMIT {
            let mut chosen: Vec<usize> = Vec::new();
            for i in 0..n {
                if chosen.iter().all(|j| self.dist[i][*j] >= eps) {
                    chosen.push(i);
                }
            }
            return Bounded { value: chosen.len(), exact: false };
        }
        let close = self.close(eps);
        let mut best = 0;
        max_independent(&close, (1u64 << n) - 1, 0, &mut best);
        Bounded { value: best, exact: true }
    }

    /// Smallest subset with every point closer than `eps` to one of its members.
    pub fn spa(&self, eps: Rational) -> Bounded {
        if let Some(c) = self.classes(eps) {
            return Bounded { value: c, exact: true };
        }
        let n = self.len();
        let sets = self.closed_neighbourhoods(eps);
        let universe = BitSet::full(n);
        if n > EXACT_LIMIT {
            let g = greedy_cover(&universe, &sets).expect("every point spans itself");
            return Bounded { value: g.len(), exact: false };
        }
        let sol = min_cover(&universe, &sets, NODE_BUDGET).expect("every point spans itself");
        Bounded { value: sol.chosen.len(), exact: sol.exact }
    }

    /// Smallest cover by subsets of diameter less than `eps`.
    pub fn cov(&self, eps: Rational) -> Bounded {
        if let Some(c) = self.classes(eps) {
            return Bounded { value: c, exact: true };
        }
        let n = self.len();
        if n > EXACT_LIMIT {
            let mut left: Vec<bool> = vec![true; n];
            let mut parts = 0;
            for i in 0..n {
                if !left[i] {
                    continue;
                }
                parts += 1;
                let mut part = vec![i];
                left[i] = false;
                for j in i + 1..n {
                    if left[j] && part.iter().all(|p| self.dist[*p][j] < eps) {
                        part.push(j);
                        left[j] = false;
                    }
                }
            }
            return Bounded { value: parts, exact: false };
        }
        let close = self.close(eps);
        let mut cliques = Vec::new();
        bron_kerbosch(&close, 0, (1u64 << n) - 1, 0, &mut cliques);
        let sets: Vec<BitSet> = cliques
            .iter()
            .map(|m| {
                let mut s = BitSet::new(n);
                for j in 0..n {
                    if m >> j & 1 == 1 {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        let sol = min_cover(&BitSet::full(n), &sets, NODE_BUDGET).expect("singletons are cliques");
        Bounded { value: sol.chosen.len(), exact: sol.exact }
    }

    pub fn counts(&self, eps: Rational) -> MetricCounts {
        MetricCounts { epsilon: format_rational(&eps), sep: self.sep(eps), spa: self.spa(eps), cov: self.cov(eps) }
    }

    pub fn chain(&self, eps: Rational) -> ChainCheck {
        let half = eps / int(2);
        let (c, sp, se, ch) = (self.cov(eps), self.spa(half), self.sep(half), self.cov(half));
        ChainCheck {
            epsilon: format_rational(&eps),
            cov: c.value,
            spa_half: sp.value,
            sep_half: se.value,
            cov_half: ch.value,
            exact: c.exact && sp.exact && se.exact && ch.exact,
            holds: c.value <= sp.value && sp.value <= se.value && se.value <= ch.value,
        }
    }

    /// Every distinct nonzero distance, plus one value above the diameter.
    pub fn critical_scales(&self) -> Vec<Rational> {
        let mut d: Vec<Rational> = self.dist.iter().flatten().filter(|x| !x.is_zero()).cloned().collect();
        d.sort();
        d.dedup();
        let top = d.last().cloned().unwrap_or_else(Rational::one) + int(1);
        d.push(top);
        d
    }
}

fn max_independent(close: &[u64], candidates: u64, size: usize, best: &mut usize) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + candidates.count_ones() as usize <= *best {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let rest = candidates & !(1 << v);
    max_independent(close, rest & !close[v], size + 1, best);
    max_independent(close, rest, size, best);
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut todo = p & !adj[pivot];
    while todo != 0 {
        let v = todo.trailing_zeros() as usize;
        todo &= todo - 1;
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// All patterns on `F` that extend to a locally admissible pattern on `F ⊕ B_m`,
/// listed by brute force in cell order. Meant for small windows and as an
/// independent check of the sweep.
pub fn enumerate_patterns(s: &Subshift, f: &FiniteSet, margin: usize, limit: usize) -> Result<(Vec<Cell>, Vec<Vec<u8>>)> {
    let cells = match f.group() {
        GroupDescriptor::IntLattice { dim } if *dim == s.dim() => f.int_points()?,
        g => return Err(Error::input(format!("pattern supports must lie in Z^{}, got {g}", s.dim()))),
    };
    let window = thicken(&cells, s.dim(), margin);
    let inner: Vec<usize> = cells.iter().map(|c| window.iter().position(|w| w == c).expect("support in window")).collect();
    let mut found = std::collections::BTreeSet::new();
    let mut partial: Vec<u8> = Vec::with_capacity(window.len());
    let mut lookup = std::collections::HashMap::new();
    let mut nodes = 0usize;
    extend(s, &window, &inner, &mut partial, &mut lookup, &mut found, &mut nodes, limit)?;
    Ok((cells, found.into_iter().collect()))
}

#[allow(clippy::too_many_arguments)]
fn extend(
    s: &Subshift,
    window: &[Cell],
    inner: &[usize],
    partial: &mut Vec<u8>,
    lookup: &mut std::collections::HashMap<Cell, u8>,
    found: &mut std::collections::BTreeSet<Vec<u8>>,
    nodes: &mut usize,
    limit: usize,
) -> Result<()> {
    *nodes += 1;
    if *nodes > limit {
        return Err(Error::Budget { what: "brute-force pattern enumeration".into(), required: *nodes, limit });
    }
    if partial.len() == window.len() {
        found.insert(inner.iter().map(|i| partial[*i]).collect());
        return Ok(());
    }
    let cell = &window[partial.len()];
    for a in 0..s.k() as u8 {
        partial.push(a);
        lookup.insert(cell.clone(), a);
        if !s.violates_at(lookup, cell) {
            extend(s, window, inner, partial, lookup, found, nodes, limit)?;
        }
        lookup.remove(cell);
        partial.pop();
    }
    Ok(())
}

/// Cylinder classes on `A ⊕ B_fine` with the Bowen metric `2^{-ρ}`, where `ρ`
/// is the least radius at which two patterns differ on `A ⊕ B_ρ`. At
/// `ε = 2^{-r}` with `r ≤ fine`, closeness means agreeing on `A ⊕ B_r`.
pub fn cylinder_family(s: &Subshift, a: &FiniteSet, fine: usize) -> Result<FiniteMetricSpace> {
    let window = minkowski(a, &crate::dynamics::subshift::ball(s.dim(), fine))?;
    let (cells, patterns) = enumerate_patterns(s, &window, s.margin(), 1_000_000)?;
    if patterns.len() > 4096 {
        return Err(Error::Budget { what: "cylinder family size".into(), required: patterns.len(), limit: 4096 });
    }
    let support = a.int_points()?;
    let level: Vec<usize> = cells
        .iter()
        .map(|c| {
            support
                .iter()
                .map(|p| p.iter().zip(c).map(|(x, y)| (x - y).unsigned_abs() as usize).max().unwrap_or(0))
                .min()
                .expect("non-empty support")
        })
        .collect();
    let dist: Vec<Vec<Rational>> = patterns
        .iter()
        .map(|x| {
            patterns
                .iter()
                .map(|y| match (0..cells.len()).filter(|i| x[*i] != y[*i]).map(|i| level[i]).min() {
                    None => Rational::zero(),
                    Some(rho) => rat(1, 1i128 << rho),
                })
                .collect()
        })
        .collect();
    let labels = patterns.iter().map(|p| p.iter().map(|sym| s.alphabet()[*sym as usize].as_str()).collect::<Vec<_>>().join("")).collect();
    FiniteMetricSpace::new(labels, dist)
}

/// The scale `2^{-r}` matching `η_r` on a cylinder family.
pub fn cylinder_scale(r: usize) -> Rational {
    rat(1, 1i128 << r)
}

/// A reproducible corpus of small metric spaces: sup-metric point clouds,
/// random ultrametrics, shortest-path metrics of weighted graphs, and
/// uniform discrete spaces.
pub fn metric_corpus(seed: u64, count: usize, max_points: usize) -> Vec<FiniteMetricSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=max_points.max(1));
        let space = match out.len() % 4 {
            0 => {
                let dim = rng.gen_range(1..=2);
                let mut pts: Vec<Vec<i64>> = Vec::new();
                while pts.len() < n {
                    let p: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..8)).collect();
                    if !pts.contains(&p) {
                        pts.push(p);
                    }
                    if pts.len() < n && pts.len() as i64 >= 8i64.pow(dim as u32) {
                        break;
                    }
                }
                FiniteMetricSpace::from_points_sup(&pts)
            }
            1 => {
                // Ultrametric from a random hierarchy: d(i,j) = 2^(level of first split).
                let codes: Vec<u32> = (0..n).map(|_| rng.gen_range(0..64)).collect();
                let dist = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i == j {
                                    Rational::zero()
                                } else {
                                    let x = codes[i] ^ codes[j];
                                    int(1i128 << (32 - x.leading_zeros()))
                                }
                            })
                            .collect()
                    })
                    .collect();
                FiniteMetricSpace::new((0..n).map(|i| i.to_string()).collect(), dist)
            }
            2 => {
                let mut w = vec![vec![i128::MAX / 4; n]; n];
                for (i, row) in w.iter_mut().enumerate() {
                    row[i] = 0;
                }
                for i in 1..n {
                    let j = rng.gen_range(0..i);
                    let c = rng.gen_range(1..6);
                    w[i][j] = c;
                    w[j][i] = c;
                }
                for _ in 0..n {
                    let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    if i != j {
                        let c = rng.gen_range(1..6);
                        w[i][j] = w[i][j].min(c);
                        w[j][i] = w[i][j];
                    }
                }
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            w[i][j] = w[i][j].min(w[i][k] + w[k][j]);
                        }
                    }
                }
                let dist = w.iter().map(|row| row.iter().map(|x| int(*x)).collect()).collect();
                FiniteMetricSpace::new((0..n).map(|i| i.to_string()).collect(), dist)
            }
            _ => {
                let dist = (0..n).map(|i| (0..n).map(|j| if i == j { Rational::zero() } else { Rational::one() }).collect()).collect();
                FiniteMetricSpace::new((0..n).map(|i| i.to_string()).collect(), dist)
            }
        };
        out.push(space.expect("corpus spaces are metrics"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(m: &FiniteMetricSpace, eps: Rational) -> (usize, usize, usize) {
        let n = m.len();
        let subsets = 1u32 << n;
        let members = |s: u32| (0..n).filter(move |i| s >> i & 1 == 1);
        let mut sep = 0;
        let mut spa = n;
        for s in 1..subsets {
            let size = s.count_ones() as usize;
            if members(s).all(|i| members(s).all(|j| i == j || m.distance(i, j) >= eps)) {
                sep = sep.max(size);
            }
            if (0..n).all(|x| members(s).any(|c| m.distance(x, c) < eps)) {
                spa = spa.min(size);
            }
        }
        // Minimum partition into small-diameter blocks by dynamic programming over subsets.
        let small: Vec<bool> = (0..subsets).map(|s| members(s).all(|i| members(s).all(|j| m.distance(i, j) < eps))).collect();
        let mut best = vec![usize::MAX; subsets as usize];
        best[0] = 0;
        for s in 1..subsets {
            let low = s & s.wrapping_neg();
            let mut sub = s;
            while sub > 0 {
                if sub & low != 0 && small[sub as usize] && best[(s ^ sub) as usize] != usize::MAX {
                    best[s as usize] = best[s as usize].min(best[(s ^ sub) as usize] + 1);
                }
                sub = (sub - 1) & s;
            }
        }
        (sep, spa, best[subsets as usize - 1])
    }

    #[test]
    fn documented_examples() {
        let four = FiniteMetricSpace::new(
            (0..4).map(|i| i.to_string()).collect(),
            (0..4).map(|i| (0..4).map(|j| if i == j { int(0) } else { int(1) }).collect()).collect(),
        )
        .unwrap();
        assert_eq!(four.sep(rat(1, 2)).value, 4);
        assert_eq!(four.spa(rat(1, 2)).value, 4);
        let path = FiniteMetricSpace::from_points_sup(&[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(path.sep(rat(3, 2)).value, 2);
        assert_eq!(path.spa(rat(3, 2)).value, 1);
        assert_eq!(path.cov(rat(3, 2)).value, 2);
    }

    #[test]
    fn rejects_non_metrics() {
        let bad = vec![vec![int(0), int(1), int(5)], vec![int(1), int(0), int(1)], vec![int(5), int(1), int(0)]];
        assert!(FiniteMetricSpace::new(vec!["a".into(), "b".into(), "c".into()], bad).is_err());
    }

    #[test]
    fn exact_values_match_exhaustive_search() {
        for m in metric_corpus(7, 40, 8) {
            for eps in m.critical_scales() {
                let (sep, spa, cov) = brute(&m, eps);
                assert_eq!(m.sep(eps).value, sep);
                assert_eq!(m.spa(eps).value, spa);
                assert_eq!(m.cov(eps).value, cov);
            }
        }
    }

    #[test]
    fn cylinders_collapse() {
        let full2 = Subshift::full_shift(2, 1).unwrap();
        let m = cylinder_family(&full2, &FiniteSet::interval(0, 0), 1).unwrap();
        assert_eq!(m.len(), 8);
        for (r, classes) in [(0, 2), (1, 8)] {
            let c = m.counts(cylinder_scale(r));
            assert_eq!((c.sep.value, c.spa.value, c.cov.value), (classes, classes, classes));
        }
        let gm = Subshift::golden_mean();
        let m = cylinder_family(&gm, &FiniteSet::interval(0, 1), 1).unwrap();
        let c = m.counts(cylinder_scale(0));
        assert_eq!((c.sep.value, c.spa.value, c.cov.value), (3, 3, 3));
    }

    #[test]
    fn large_cylinder_families_stay_exact() {
        let gm = Subshift::golden_mean();
        let m = cylinder_family(&gm, &FiniteSet::interval(0, 3), 2).unwrap();
        assert!(m.len() > 24);
        for r in 0..=2 {
            let c = m.counts(cylinder_scale(r));
            let want = crate::dynamics::count_patterns(&gm, &FiniteSet::interval(-(r as i64), 3 + r as i64)).unwrap();
            assert!(c.sep.exact && c.spa.exact && c.cov.exact);
            assert_eq!(num_bigint::BigUint::from(c.cov.value), want);
            assert_eq!((c.sep.value, c.spa.value), (c.cov.value, c.cov.value));
        }
    }

    #[test]
    fn greedy_bounds_bracket() {
        let pts: Vec<Vec<i64>> = (0..30).map(|i| vec![i % 7, i / 7]).collect();
        let m = FiniteMetricSpace::from_points_sup(&pts).unwrap();
        let c = m.counts(int(2));
        assert!(!c.sep.exact && !c.spa.exact && !c.cov.exact);
        assert!(c.sep.value <= c.cov.value);
        assert!(c.spa.value >= 1);
    }

    proptest! {
        #[test]
        fn chain_holds(seed in 0u64..500) {
            for m in metric_corpus(seed, 4, 10) {
                for eps in m.critical_scales() {
                    let check = m.chain(eps);
                    prop_assert!(check.holds, "{check:?}");
                }
            }
        }
    }
}
