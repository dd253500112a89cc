//! Topological, relative and lattice-restricted entropy along Van Hove sequences.

use serde::Serialize;

use crate::cps::{enumerate_model_set, interval_query, ModelSet};
use crate::dynamics::{ball, CountOptions, SlidingBlockCode, Subshift};
use crate::entropy::function::{int_point, SubadditiveFunction};
use crate::entropy::ow::{ow_limit, OWEstimate, OwRow, DEFAULT_TAIL};
use crate::error::{Error, Result};
use crate::groups::{minkowski, CompactRegion, FiniteSet, GroupDescriptor, GroupElement, VanHoveSequence};
use crate::numeric::{int, QSqrt5};

/// Report metadata attached to every estimate.
pub const PREFIX_NOTE: &str = "bands are empirical; verdicts describe the computed prefix of each trace, not the limit";

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyOptions {
    /// Scale radii `r` of the entourages `η_r`.
    pub scales: Vec<usize>,
    pub i_max: usize,
    pub tail_length: usize,
    pub count: CountOptions,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        EntropyOptions { scales: vec![0, 1, 2], i_max: 30, tail_length: DEFAULT_TAIL, count: CountOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScaleEstimate {
    pub radius: usize,
    pub estimate: OWEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EntropyReport {
    pub kind: String,
    pub system: String,
    pub sequence: String,
    pub per_scale: Vec<ScaleEstimate>,
    /// `densityFactor · max_r tail_r`.
    pub sup_value: f64,
    pub sup_radius: usize,
    /// Half-width of the band at the maximizing scale, times the density factor.
    pub sup_band: f64,
    pub density_factor: f64,
    pub density_exact: String,
    /// Tails never drop by more than the sum of neighbouring bands as `r` grows.
    pub tails_monotone: bool,
    pub log_base: String,
    pub note: String,
}

impl EntropyReport {
    fn assemble(
        kind: &str,
        system: String,
        sequence: String,
        per_scale: Vec<ScaleEstimate>,
        density_factor: f64,
        density_exact: String,
    ) -> Result<Self> {
        let best = per_scale
            .iter()
            .fold(None::<&ScaleEstimate>, |acc, s| match acc {
                Some(b) if b.estimate.tail >= s.estimate.tail => Some(b),
                _ => Some(s),
            })
            .ok_or_else(|| Error::input("at least one scale is required"))?;
        let tails_monotone =
            per_scale.windows(2).all(|w| w[1].estimate.tail + w[0].estimate.band + w[1].estimate.band + 1e-12 >= w[0].estimate.tail);
        Ok(EntropyReport {
            kind: kind.into(),
            system,
            sequence,
            sup_value: density_factor * best.estimate.tail,
            sup_radius: best.radius,
            sup_band: density_factor * best.estimate.band,
            per_scale,
            density_factor,
            density_exact,
            tails_monotone,
            log_base: "e".into(),
            note: PREFIX_NOTE.into(),
        })
    }

    pub fn scale(&self, radius: usize) -> Option<&OWEstimate> {
        self.per_scale.iter().find(|s| s.radius == radius).map(|s| &s.estimate)
    }

    /// The same report with every value in bits.
    pub fn in_log2(&self) -> EntropyReport {
        let c = std::f64::consts::LN_2;
        let mut out = self.clone();
        for s in &mut out.per_scale {
            s.estimate = s.estimate.scaled(c);
        }
        out.sup_value /= c;
        out.sup_band /= c;
        out.log_base = "2".into();
        out
    }

    /// Adds `delta` to every trace value; used to build deliberately wrong reports.
    pub fn offset(&self, delta: f64) -> EntropyReport {
        let mut out = self.clone();
        for s in &mut out.per_scale {
            for r in &mut s.estimate.rows {
                r.value += delta;
            }
            s.estimate.tail += delta;
        }
        out.sup_value += self.density_factor * delta;
        out
    }
}

fn sorted_scales(opts: &EntropyOptions) -> Result<Vec<usize>> {
    let mut scales = opts.scales.clone();
    scales.sort_unstable();
    scales.dedup();
    if scales.is_empty() {
        return Err(Error::input("at least one scale radius is required"));
    }
    Ok(scales)
}

/// `B_r ⊕ A_i`, also a Van Hove sequence with the same limits.
fn thickened(seq: &VanHoveSequence, dim: usize, r: usize) -> VanHoveSequence {
    if r == 0 {
        seq.clone()
    } else {
        VanHoveSequence::dilated(CompactRegion::Finite(ball(dim, r)), seq)
    }
}

fn check_sequence(seq: &VanHoveSequence, dim: usize) -> Result<()> {
    match seq.group() {
        GroupDescriptor::IntLattice { dim: d } if *d == dim => Ok(()),
        g => Err(Error::input(format!("entropy of a Z^{dim} subshift needs a sequence in Z^{dim}, got {g}"))),
    }
}

/// Per scale `r`, the trace `log cov(A_i, r)/|B_r ⊕ A_i|`.
pub fn topological_entropy(s: &Subshift, seq: &VanHoveSequence, opts: &EntropyOptions) -> Result<EntropyReport> {
    check_sequence(seq, s.dim())?;
    let f = SubadditiveFunction::log_pattern_count(s, 0, opts.count)?;
    let mut per_scale = Vec::new();
    for r in sorted_scales(opts)? {
        let estimate = ow_limit(&f, &thickened(seq, s.dim(), r), opts.i_max, opts.tail_length)?;
        per_scale.push(ScaleEstimate { radius: r, estimate });
    }
    EntropyReport::assemble("topological", s.name().to_string(), seq.label().to_string(), per_scale, 1.0, "1".into())
}

/// Per scale `r`, the trace `log cov_p(A_i, r)/|B_r ⊕ A_i|`.
pub fn relative_entropy(code: &SlidingBlockCode, seq: &VanHoveSequence, opts: &EntropyOptions) -> Result<EntropyReport> {
    let dim = code.source().dim();
    check_sequence(seq, dim)?;
    let f = SubadditiveFunction::log_fiber_cov(code, 0, opts.count)?;
    let mut per_scale = Vec::new();
    for r in sorted_scales(opts)? {
        let estimate = ow_limit(&f, &thickened(seq, dim, r), opts.i_max, opts.tail_length)?;
        per_scale.push(ScaleEstimate { radius: r, estimate });
    }
    EntropyReport::assemble("relative", code.name().to_string(), seq.label().to_string(), per_scale, 1.0, "1".into())
}

/// Index sets along which an action is restricted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexSet {
    /// `n_1ℤ × … × n_dℤ`, acting through the higher-block recoding.
    Sublattice(Vec<usize>),
    /// The Fibonacci model set rounded to the nearest integers, a Delone subset of ℤ.
    FibonacciSampled,
}

impl IndexSet {
    /// `sublattice:<n>` (every axis), `sublattice:<n1>x<n2>`, or `fibonacci`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let text = text.trim();
        if text == "fibonacci" {
            return Ok(IndexSet::FibonacciSampled);
        }
        let body = text.strip_prefix("sublattice:").unwrap_or(text);
        let parts: Vec<usize> = body
            .split('x')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::input(format!("bad index set {text:?}"))))
            .collect::<Result<_>>()?;
        let moduli = if parts.len() == 1 { vec![parts[0]; dim] } else { parts };
        if moduli.len() != dim || moduli.contains(&0) {
            return Err(Error::input(format!("index set {text:?} needs {dim} positive moduli")));
        }
        Ok(IndexSet::Sublattice(moduli))
    }

    pub fn describe(&self) -> String {
        match self {
            IndexSet::Sublattice(n) => n.iter().map(|m| format!("{m}Z")).collect::<Vec<_>>().join(" x "),
            IndexSet::FibonacciSampled => "rounded Fibonacci model set".into(),
        }
    }
}

/// `dens(Λ)·sup_r lim log cov(F_i, r)/|F_i|` with `F_i = A_i ∩ Λ`.
///
/// For sublattices the covering numbers are those of the restricted action,
/// realised as the higher-block recoding acting on `F_i / n`; the per-scale
/// traces are normalised by `|B_r ⊕ F_i|` there. For the Fibonacci index set
/// the covering numbers are taken in the original shift and scale `r` is
/// normalised by `|Λ ∩ (B_r ⊕ A_i)|`.
pub fn lattice_restricted_entropy(s: &Subshift, index: &IndexSet, seq: &VanHoveSequence, opts: &EntropyOptions) -> Result<EntropyReport> {
    check_sequence(seq, s.dim())?;
    match index {
        IndexSet::Sublattice(moduli) => {
            let rec = s.higher_block(moduli)?;
            let dim = s.dim();
            let n: Vec<i64> = moduli.iter().map(|m| *m as i64).collect();
            let base = seq.clone();
            let nn = n.clone();
            let restricted =
                VanHoveSequence::new(GroupDescriptor::int(dim), format!("({}) ∩ {} / n", seq.label(), index.describe()), move |i| {
                    let a = base.finite(i)?;
                    let pts: Vec<Vec<i64>> = a
                        .iter()
                        .filter_map(int_point)
                        .filter(|p| p.iter().zip(&nn).all(|(x, m)| x.rem_euclid(*m) == 0))
                        .map(|p| p.iter().zip(&nn).map(|(x, m)| x / m).collect())
                        .collect();
                    Ok(CompactRegion::Finite(FiniteSet::from_ints(dim, &pts)?))
                });
            let inner = topological_entropy(&rec.recoded, &restricted, opts)?;
            let covol: usize = moduli.iter().product();
            EntropyReport::assemble(
                "restricted",
                format!("{} restricted to {}", s.name(), index.describe()),
                seq.label().to_string(),
                inner.per_scale,
                1.0 / covol as f64,
                format!("1/{covol}"),
            )
        }
        IndexSet::FibonacciSampled => {
            if s.dim() != 1 {
                return Err(Error::unsupported("the Fibonacci index set lives in Z"));
            }
            let mut per_scale = Vec::new();
            for r in sorted_scales(opts)? {
                let f = SubadditiveFunction::log_pattern_count(s, r, opts.count)?;
                let mut rows = Vec::with_capacity(opts.i_max);
                for i in 1..=opts.i_max {
                    let a = seq.finite(i)?;
                    let sampled = fibonacci_points(&a)?;
                    let thick = fibonacci_points(&minkowski(&a, &ball(1, r))?)?;
                    if thick.is_empty() {
                        return Err(Error::input(format!("A_{i} misses the index set")));
                    }
                    let e = f.evaluate(&CompactRegion::Finite(sampled))?;
                    rows.push(OwRow { index: i, measure: thick.len().to_string(), f_exact: e.exact, value: e.value / thick.len() as f64 });
                }
                let label = format!("{}, index points of B_{r} + A_i", f.label());
                let sequence = format!("({}) ∩ rounded Fibonacci", seq.label());
                per_scale.push(ScaleEstimate { radius: r, estimate: OWEstimate::from_rows(label, sequence, rows, opts.tail_length)? });
            }
            let dens = ModelSet::fibonacci().density_oracle()?;
            EntropyReport::assemble(
                "restricted",
                format!("{} sampled on {}", s.name(), index.describe()),
                seq.label().to_string(),
                per_scale,
                dens.to_f64(),
                dens.to_exact_string(),
            )
        }
    }
}

/// `a ∩ Λ` for the rounded Fibonacci set `Λ`.
fn fibonacci_points(a: &FiniteSet) -> Result<FiniteSet> {
    let pts = a.int_points()?;
    let lo = pts.iter().map(|p| p[0]).min().unwrap_or(0);
    let hi = pts.iter().map(|p| p[0]).max().unwrap_or(0);
    let keep: Vec<Vec<i64>> =
        rounded_fibonacci(lo - 1, hi + 1)?.into_iter().map(|x| vec![x]).filter(|p| a.contains(&GroupElement::Int(p.clone()))).collect();
    FiniteSet::from_ints(1, &keep)
}

/// Nearest integers to the Fibonacci model set points in `[lo, hi]`.
pub fn rounded_fibonacci(lo: i64, hi: i64) -> Result<Vec<i64>> {
    let ms = ModelSet::fibonacci();
    let pts = enumerate_model_set(&ms, &interval_query(int(lo as i128), int(hi as i128)))?;
    let mut out: Vec<i64> = pts.iter().filter_map(|g| g.as_real().map(|v| v[0])).map(|x: QSqrt5| x.round() as i64).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::TransferMatrix;

    fn opts(i_max: usize) -> EntropyOptions {
        EntropyOptions { i_max, ..Default::default() }
    }

    #[test]
    fn full_shifts_are_exact_at_every_index() {
        for k in 2..=4 {
            let s = Subshift::full_shift(k, 1).unwrap();
            let rep = topological_entropy(&s, &VanHoveSequence::int_intervals(1), &opts(20)).unwrap();
            for sc in &rep.per_scale {
                for row in &sc.estimate.rows {
                    assert!((row.value - (k as f64).ln()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn golden_mean_approaches_log_tau() {
        let rep = topological_entropy(&Subshift::golden_mean(), &VanHoveSequence::int_intervals(10), &opts(30)).unwrap();
        let oracle = TransferMatrix::new(&Subshift::golden_mean()).unwrap().entropy();
        assert!((rep.sup_value - oracle).abs() < 1e-3, "{} vs {oracle}", rep.sup_value);
        assert!(rep.tails_monotone);
        let bits = rep.in_log2();
        assert!((bits.sup_value * std::f64::consts::LN_2 - rep.sup_value).abs() < 1e-12);
    }

    #[test]
    fn point_has_zero_entropy() {
        let rep = topological_entropy(&Subshift::single_point(1), &VanHoveSequence::int_intervals(1), &opts(5)).unwrap();
        assert_eq!(rep.sup_value, 0.0);
    }

    #[test]
    fn relative_entropy_of_simple_codes() {
        let seq = VanHoveSequence::int_intervals(1);
        let two = Subshift::full_shift(2, 1).unwrap();
        let id = relative_entropy(&SlidingBlockCode::identity(&two), &seq, &opts(10)).unwrap();
        assert_eq!(id.sup_value, 0.0);
        let proj = relative_entropy(&SlidingBlockCode::four_to_two(), &seq, &opts(10)).unwrap();
        assert!((proj.sup_value - 2f64.ln()).abs() < 1e-12);
        let gm = Subshift::golden_mean();
        let to_point = relative_entropy(&SlidingBlockCode::to_point(&gm), &seq, &opts(10)).unwrap();
        let top = topological_entropy(&gm, &seq, &opts(10)).unwrap();
        assert_eq!(to_point.per_scale.len(), top.per_scale.len());
        for (a, b) in to_point.per_scale.iter().zip(&top.per_scale) {
            assert_eq!(a.estimate.values(), b.estimate.values());
        }
    }

    #[test]
    fn restriction_preserves_entropy() {
        let seq = VanHoveSequence::int_intervals(10);
        let two = Subshift::full_shift(2, 1).unwrap();
        let rep = lattice_restricted_entropy(&two, &IndexSet::Sublattice(vec![3]), &seq, &opts(10)).unwrap();
        assert!((rep.sup_value - 2f64.ln()).abs() < 1e-12);
        let gm = Subshift::golden_mean();
        let rep = lattice_restricted_entropy(&gm, &IndexSet::Sublattice(vec![2]), &seq, &opts(30)).unwrap();
        let oracle = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((rep.sup_value - oracle.ln()).abs() < 1e-3, "{}", rep.sup_value);
    }

    #[test]
    fn fibonacci_sampling() {
        let lam = rounded_fibonacci(-10, 10).unwrap();
        assert!(lam.windows(2).all(|w| w[1] - w[0] >= 1 && w[1] - w[0] <= 2));
        let two = Subshift::full_shift(2, 1).unwrap();
        let rep =
            lattice_restricted_entropy(&two, &IndexSet::FibonacciSampled, &VanHoveSequence::int_centered_intervals(10), &opts(20)).unwrap();
        assert!((rep.sup_value - 2f64.ln()).abs() < 2e-2, "{}", rep.sup_value);
    }

    #[test]
    fn index_sets_parse() {
        assert_eq!(IndexSet::parse("sublattice:2", 2).unwrap(), IndexSet::Sublattice(vec![2, 2]));
        assert_eq!(IndexSet::parse("2x3", 2).unwrap(), IndexSet::Sublattice(vec![2, 3]));
        assert!(IndexSet::parse("0", 1).is_err());
    }
}
