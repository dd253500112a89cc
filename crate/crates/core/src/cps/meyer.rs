//! Relative density and the Meyer difference property on a finite patch of a
//! point set in ℝ.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{FiniteSet, GroupDescriptor, RationalBox};
use crate::numeric::{format_rational, QSqrt5, Rational};
use crate::util::bitset::BitSet;
use crate::util::setcover::min_cover;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeyerStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MeyerReport {
    pub status: MeyerStatus,
    pub reason: String,
    pub points_in_support: usize,
    pub relatively_dense: Option<bool>,
    /// Smallest r with `[-r, r] + ω ⊇ query`.
    pub covering_radius: Option<String>,
    pub dense_violation: Option<String>,
    pub meyer_difference: Option<bool>,
    pub difference_count: usize,
    pub witness_f: Vec<String>,
    pub witness_minimal: bool,
    pub uncovered_difference: Option<String>,
}

const COVER_NODE_BUDGET: usize = 200_000;

/// Checks `K·ω ⊇ query` with `K = [-r, r]`, `r ≤ k_bound`, and
/// `(ω − ω) ∩ query ⊆ F + ω` for a finite `F ⊆ [-f_bound, f_bound]`, using
/// only the points of `points` inside `support`.
pub fn meyer_check(
    points: &FiniteSet,
    support: &RationalBox,
    query: &RationalBox,
    k_bound: Rational,
    f_bound: Rational,
) -> Result<MeyerReport> {
    if *points.group() != GroupDescriptor::real(1) || support.dim() != 1 || query.dim() != 1 {
        return Err(Error::unsupported("Meyer checks are implemented for point sets in R"));
    }
    let q = |r: &Rational| QSqrt5::from_rational(r);
    let (qlo, qhi) = (q(&query.lower[0]), q(&query.upper[0]));
    let (slo, shi) = (q(&support.lower[0]), q(&support.upper[0]));
    let margin = q(&(k_bound + f_bound));
    let pts: Vec<QSqrt5> = points.iter().map(|g| g.as_real().expect("real points")[0]).filter(|x| *x >= slo && *x <= shi).collect();
    let mut report = MeyerReport {
        status: MeyerStatus::Inconclusive,
        reason: String::new(),
        points_in_support: pts.len(),
        relatively_dense: None,
        covering_radius: None,
        dense_violation: None,
        meyer_difference: None,
        difference_count: 0,
        witness_f: Vec::new(),
        witness_minimal: false,
        uncovered_difference: None,
    };
    if slo > qlo - margin || shi < qhi + margin {
        report.reason = "support does not extend past the query by k_bound + f_bound".into();
        return Ok(report);
    }
    if pts.is_empty() {
        report.status = MeyerStatus::Fail;
        report.relatively_dense = Some(false);
        report.reason = "no points in the support".into();
        return Ok(report);
    }

    let nearest = |x: QSqrt5| -> QSqrt5 {
        let i = pts.partition_point(|p| *p < x);
        let mut best: Option<QSqrt5> = None;
        for j in [i.wrapping_sub(1), i] {
            if let Some(p) = pts.get(j) {
                let d = (x - *p).abs();
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best.expect("non-empty")
    };
    let half = QSqrt5::from_rational(&Rational::new(1, 2));
    let mut candidates = vec![qlo, qhi];
    for w in pts.windows(2) {
        let mid = (w[0] + w[1]) * half;
        candidates.push(mid.max(qlo).min(qhi));
    }
    let (radius, worst) = candidates.into_iter().map(|x| (nearest(x), x)).max_by(|a, b| a.0.cmp(&b.0)).expect("candidates");
    let dense = radius <= q(&k_bound);
    report.relatively_dense = Some(dense);
    report.covering_radius = Some(radius.to_exact_string());
    if !dense {
        report.dense_violation = Some(worst.to_exact_string());
    }

    let in_set: BTreeSet<QSqrt5> = pts.iter().cloned().collect();
    let mut diffs = BTreeSet::new();
    for x in &pts {
        for y in &pts {
            let d = *x - *y;
            if d >= qlo && d <= qhi {
                diffs.insert(d);
            }
        }
    }
    let diffs: Vec<QSqrt5> = diffs.into_iter().collect();
    report.difference_count = diffs.len();
    let fb = q(&f_bound);
    let mut fs = BTreeSet::new();
    for d in &diffs {
        let lo = pts.partition_point(|p| *p < *d - fb);
        for w in pts[lo..].iter().take_while(|w| **w <= *d + fb) {
            fs.insert(*d - *w);
        }
    }
    let mut fs: Vec<QSqrt5> = fs.into_iter().collect();
    fs.sort_by(|a, b| a.abs().cmp(&b.abs()).then(a.cmp(b)));
    let sets: Vec<BitSet> = fs
        .iter()
        .map(|f| {
            let mut s = BitSet::new(diffs.len());
            for (i, d) in diffs.iter().enumerate() {
                if in_set.contains(&(*d - *f)) {
                    s.insert(i);
                }
            }
            s
        })
        .collect();
    let universe = BitSet::full(diffs.len());
    match min_cover(&universe, &sets, COVER_NODE_BUDGET) {
        Some(sol) => {
            report.meyer_difference = Some(true);
            report.witness_f = sol.chosen.iter().map(|i| fs[*i].to_exact_string()).collect();
            report.witness_minimal = sol.exact;
        }
        None => {
            report.meyer_difference = Some(false);
            let covered = sets.iter().fold(BitSet::new(diffs.len()), |acc, s| {
                let mut acc = acc;
                for i in s.iter() {
                    acc.insert(i);
                }
                acc
            });
            let missing = universe.difference(&covered).first().expect("some difference is uncovered");
            report.uncovered_difference = Some(diffs[missing].to_exact_string());
        }
    }
    let ok = dense && report.meyer_difference == Some(true);
    report.status = if ok { MeyerStatus::Pass } else { MeyerStatus::Fail };
    report.reason = match (dense, report.meyer_difference) {
        (true, Some(true)) => format!("covering radius {} and a difference witness of size {}", radius, report.witness_f.len()),
        (false, _) => format!("covering radius {} exceeds {}", radius, format_rational(&k_bound)),
        _ => "a difference is not within f_bound of the set".into(),
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::scheme::{enumerate_model_set, interval_query, ModelSet};
    use crate::groups::GroupElement;
    use crate::numeric::{int, rat};

    #[test]
    fn integers_are_meyer() {
        let pts = enumerate_model_set(&ModelSet::trivial_z(), &interval_query(int(-30), int(30))).unwrap();
        let r = meyer_check(&pts, &RationalBox::interval(int(-30), int(30)), &RationalBox::interval(int(-10), int(10)), int(1), int(1))
            .unwrap();
        assert_eq!(r.status, MeyerStatus::Pass);
        assert_eq!(r.covering_radius.as_deref(), Some("1/2"));
        assert_eq!(r.witness_f, vec!["0"]);
    }

    #[test]
    fn squares_are_not_relatively_dense() {
        let pts = FiniteSet::new(GroupDescriptor::real(1), (0..=60i128).map(|n| GroupElement::real_rational(&[int(n * n)]))).unwrap();
        let r = meyer_check(&pts, &RationalBox::interval(int(-20), int(2520)), &RationalBox::interval(int(0), int(2500)), int(5), int(5))
            .unwrap();
        assert_eq!(r.status, MeyerStatus::Fail);
        assert_eq!(r.relatively_dense, Some(false));
    }

    #[test]
    fn small_margin_is_inconclusive() {
        let pts = enumerate_model_set(&ModelSet::trivial_z(), &interval_query(int(-12), int(12))).unwrap();
        let r = meyer_check(&pts, &RationalBox::interval(int(-12), int(12)), &RationalBox::interval(int(-10), int(10)), int(2), rat(3, 2))
            .unwrap();
        assert_eq!(r.status, MeyerStatus::Inconclusive);
    }
}
