//! Numerical verifiers: power rule, factor-chain inequalities, product
//! extensions and Bernoulli entropies.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{SlidingBlockCode, Subshift};
use crate::entropy::function::SubadditiveFunction;
use crate::entropy::report::{lattice_restricted_entropy, relative_entropy, topological_entropy, EntropyOptions, EntropyReport, IndexSet};
use crate::error::{Error, Result};
use crate::groups::{CompactRegion, FiniteSet, GroupDescriptor, VanHoveSequence};
use crate::numeric::{format_rational, rational_to_f64, Rational};

const FLOAT_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PowerRuleReport {
    pub subshift: String,
    pub n: usize,
    pub entropy: f64,
    pub n_times_entropy: f64,
    /// Entropy of the `nℤ`-action, without the density factor.
    pub power_entropy: f64,
    pub delta: f64,
    pub allowance: f64,
    pub passed: bool,
}

/// `n·E(s)` against the entropy of the restricted action of `nℤ`.
pub fn power_rule_check(s: &Subshift, n: usize, seq: &VanHoveSequence, opts: &EntropyOptions, tolerance: f64) -> Result<PowerRuleReport> {
    if s.dim() != 1 {
        return Err(Error::input("the power rule check is for subshifts over Z"));
    }
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    let base = topological_entropy(s, seq, opts)?;
    let restricted = lattice_restricted_entropy(s, &IndexSet::Sublattice(vec![n]), seq, opts)?;
    let power_entropy = restricted.sup_value / restricted.density_factor;
    let n_times = n as f64 * base.sup_value;
    let delta = (n_times - power_entropy).abs();
    let allowance = tolerance + n as f64 * base.sup_band + restricted.sup_band / restricted.density_factor;
    Ok(PowerRuleReport {
        subshift: s.name().to_string(),
        n,
        entropy: base.sup_value,
        n_times_entropy: n_times,
        power_entropy,
        delta,
        allowance,
        passed: delta <= allowance + FLOAT_SLACK,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BowenChainReport {
    pub first: String,
    pub second: String,
    /// `E(φ→ψ)`, `E(ψ→ρ)` and `E(φ→ρ)`.
    pub e_first: f64,
    pub e_second: f64,
    pub e_composite: f64,
    pub allowance: f64,
    /// `E(φ→ρ) − max{E(φ→ψ), E(ψ→ρ)}`.
    pub lower_gap: f64,
    /// `E(φ→ψ) + E(ψ→ρ) − E(φ→ρ)`.
    pub upper_gap: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub passed: bool,
}

impl BowenChainReport {
    pub fn from_reports(first: &EntropyReport, second: &EntropyReport, composite: &EntropyReport) -> Self {
        let (a, b, c) = (first.sup_value, second.sup_value, composite.sup_value);
        let allowance = first.sup_band + second.sup_band + composite.sup_band + FLOAT_SLACK;
        let lower_gap = c - a.max(b);
        let upper_gap = a + b - c;
        let lower_holds = lower_gap >= -allowance;
        let upper_holds = upper_gap >= -allowance;
        BowenChainReport {
            first: first.system.clone(),
            second: second.system.clone(),
            e_first: a,
            e_second: b,
            e_composite: c,
            allowance,
            lower_gap,
            upper_gap,
            lower_holds,
            upper_holds,
            passed: lower_holds && upper_holds,
        }
    }
}

/// `max{E(φ→ψ), E(ψ→ρ)} ≤ E(φ→ρ) ≤ E(φ→ψ) + E(ψ→ρ)` for `p: X → Y`, `q: Y → Z`.
pub fn bowen_chain_check(
    p: &SlidingBlockCode,
    q: &SlidingBlockCode,
    seq: &VanHoveSequence,
    opts: &EntropyOptions,
) -> Result<(BowenChainReport, [EntropyReport; 3])> {
    let pq = p.then(q)?;
    let first = relative_entropy(p, seq, opts)?;
    let second = relative_entropy(q, seq, opts)?;
    let composite = relative_entropy(&pq, seq, opts)?;
    Ok((BowenChainReport::from_reports(&first, &second, &composite), [first, second, composite]))
}

/// Full `k`-shift → full `k₂`-shift → full `k₃`-shift by random surjective
/// symbol merges, with `k ≤ max_alphabet`.
pub fn random_merge_chain(seed: u64, max_alphabet: usize) -> Result<(SlidingBlockCode, SlidingBlockCode)> {
    if max_alphabet < 2 {
        return Err(Error::input("random chains need an alphabet of at least 2 symbols"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(2..=max_alphabet);
    let k2 = rng.gen_range(1..=k);
    let k3 = rng.gen_range(1..=k2);
    let merge = |rng: &mut ChaCha8Rng, from: usize, to: usize| -> Vec<u8> {
        let mut map: Vec<u8> = (0..from).map(|i| if i < to { i as u8 } else { rng.gen_range(0..to) as u8 }).collect();
        map.shuffle(rng);
        map
    };
    let (m1, m2) = (merge(&mut rng, k, k2), merge(&mut rng, k2, k3));
    let x = Subshift::full_shift(k, 1)?;
    let y = Subshift::full_shift(k2, 1)?;
    let z = Subshift::full_shift(k3, 1)?;
    let p = SlidingBlockCode::symbol_map(format!("merge{k}to{k2}:{m1:?}"), x, y.clone(), &m1)?;
    let q = SlidingBlockCode::symbol_map(format!("merge{k2}to{k3}:{m2:?}"), y, z, &m2)?;
    Ok((p, q))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Rectangle {
    pub c: Vec<i64>,
    pub d: Vec<i64>,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductExtensionReport {
    pub function: String,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    /// `f(A)·|B|`.
    pub expected: f64,
    pub expected_exact: Option<String>,
    /// Smallest `Σ f(C_n)·|D_n|` over covers of `A × B` from the family.
    pub infimum: f64,
    pub infimum_exact: Option<String>,
    pub cover: Vec<Rectangle>,
    pub family_size: usize,
    pub max_rectangles: Option<usize>,
    pub margin: usize,
    pub passed: bool,
}

/// Limits for the rectangle family in [`product_extension_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductExtensionOptions {
    /// `C ⊆ hull(A) ± margin`, `D ⊆ hull(B) ± margin`.
    pub margin: usize,
    /// Largest number of rectangles in a cover; unbounded when `None`.
    pub max_rectangles: Option<usize>,
    /// Largest hull size after the margin, per factor.
    pub max_hull: usize,
}

impl Default for ProductExtensionOptions {
    fn default() -> Self {
        ProductExtensionOptions { margin: 1, max_rectangles: None, max_hull: 12 }
    }
}

fn subsets(points: &[i64]) -> Vec<Vec<i64>> {
    (1u32..(1 << points.len())).map(|m| points.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| *x).collect()).collect()
}

/// Exhaustive infimum of `Σ f(C_n)·|D_n|` over covers of `A × B` by rectangles
/// `C_n × D_n` from a bounded family, against `f(A)·|B|`.
pub fn product_extension_check(
    f: &SubadditiveFunction,
    a: &FiniteSet,
    b: &FiniteSet,
    opts: ProductExtensionOptions,
) -> Result<ProductExtensionReport> {
    if *f.group() != GroupDescriptor::int(1) {
        return Err(Error::input("the product extension check takes a function on Z"));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("A and B must be non-empty"));
    }
    let pa: Vec<i64> = a.int_points()?.into_iter().map(|p| p[0]).collect();
    let pb: Vec<i64> = b.int_points()?.into_iter().map(|p| p[0]).collect();
    let cells = pa.len() * pb.len();
    if cells > 20 {
        return Err(Error::Budget { what: "cells of A x B".into(), required: cells, limit: 20 });
    }
    let m = opts.margin as i64;
    let hull = |p: &[i64]| -> Vec<i64> { (p[0] - m..=p[p.len() - 1] + m).collect() };
    let (ha, hb) = (hull(&pa), hull(&pb));
    if ha.len() > opts.max_hull || hb.len() > opts.max_hull {
        return Err(Error::Budget { what: "rectangle family hull".into(), required: ha.len().max(hb.len()), limit: opts.max_hull });
    }
    let value = |c: &[i64]| -> Result<(f64, Option<Rational>)> {
        let region = CompactRegion::Finite(FiniteSet::from_ints(1, &c.iter().map(|x| vec![*x]).collect::<Vec<_>>())?);
        let e = f.evaluate(&region)?;
        Ok((e.value, crate::numeric::parse_rational(&e.exact).ok()))
    };
    let cs = subsets(&ha);
    let ds = subsets(&hb);
    let mut f_of: Vec<(f64, Option<Rational>)> = Vec::with_capacity(cs.len());
    for c in &cs {
        f_of.push(value(c)?);
    }
    // Cheapest rectangle per covered mask.
    let mut best_rect: HashMap<u32, (f64, usize, usize)> = HashMap::new();
    for (ci, c) in cs.iter().enumerate() {
        let rows: Vec<usize> = pa.iter().enumerate().filter(|(_, x)| c.contains(x)).map(|(i, _)| i).collect();
        if rows.is_empty() {
            continue;
        }
        for (di, d) in ds.iter().enumerate() {
            let mut mask = 0u32;
            for (j, y) in pb.iter().enumerate() {
                if d.contains(y) {
                    for i in &rows {
                        mask |= 1 << (i * pb.len() + j);
                    }
                }
            }
            if mask == 0 {
                continue;
            }
            let cost = f_of[ci].0 * d.len() as f64;
            let e = best_rect.entry(mask).or_insert((cost, ci, di));
            if cost < e.0 {
                *e = (cost, ci, di);
            }
        }
    }
    let mut rects: Vec<(u32, f64, usize, usize)> = best_rect.into_iter().map(|(m, (c, ci, di))| (m, c, ci, di)).collect();
    rects.sort_by_key(|r| r.0);
    let full = (1u32 << cells) - 1;
    let layers = opts.max_rectangles.unwrap_or(cells).min(cells);
    // dist[mask] = cheapest cover of exactly-covered set `mask`, with a back pointer.
    let size = 1usize << cells;
    let mut dist = vec![f64::INFINITY; size];
    let mut back: Vec<Option<(u32, usize)>> = vec![None; size];
    dist[0] = 0.0;
    for _ in 0..layers {
        let snapshot = dist.clone();
        for mask in 0..size {
            if !snapshot[mask].is_finite() || mask as u32 == full {
                continue;
            }
            let low = (!(mask as u32)).trailing_zeros();
            for (ri, r) in rects.iter().enumerate() {
                if r.0 >> low & 1 == 0 {
                    continue;
                }
                let next = (mask as u32 | r.0) as usize;
                let cost = snapshot[mask] + r.1;
                if cost < dist[next] - 1e-15 {
                    dist[next] = cost;
                    back[next] = Some((mask as u32, ri));
                }
            }
        }
    }
    let infimum = dist[full as usize];
    let mut cover = Vec::new();
    let mut exact_sum: Option<Rational> = Some(Rational::zero());
    let mut at = full;
    while at != 0 {
        let (prev, ri) = back[at as usize].expect("reachable masks have back pointers");
        let (_, cost, ci, di) = rects[ri];
        exact_sum = exact_sum.and_then(|s| f_of[ci].1.map(|q| s + q * Rational::from_integer(ds[di].len() as i128)));
        cover.push(Rectangle { c: cs[ci].clone(), d: ds[di].clone(), cost });
        at = prev;
    }
    let (fa, fa_exact) = value(&pa)?;
    let expected = fa * pb.len() as f64;
    let expected_exact = fa_exact.map(|q| q * Rational::from_integer(pb.len() as i128));
    let passed = match (&expected_exact, &exact_sum) {
        (Some(e), Some(s)) => (e - s).abs().is_zero(),
        _ => (expected - infimum).abs() <= FLOAT_SLACK * expected.abs().max(1.0),
    };
    Ok(ProductExtensionReport {
        function: f.label().to_string(),
        a: pa,
        b: pb,
        expected,
        expected_exact: expected_exact.map(|q| format_rational(&q)),
        infimum,
        infimum_exact: exact_sum.filter(|_| fa_exact.is_some()).map(|q| format_rational(&q)),
        cover,
        family_size: rects.len(),
        max_rectangles: opts.max_rectangles,
        margin: opts.margin,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BernoulliReport {
    pub probabilities: Vec<String>,
    pub entropy: f64,
    pub log_k: f64,
    /// Entropy of the full k-shift computed from pattern counts.
    pub topological: f64,
    pub uniform: bool,
    /// `h ≤ E`, with equality exactly for the uniform vector.
    pub passed: bool,
}

/// `−Σ p_i log p_i`, compared with the entropy of the full `k`-shift.
pub fn bernoulli_entropy(p: &[Rational]) -> Result<BernoulliReport> {
    if p.is_empty() {
        return Err(Error::input("a probability vector needs at least one entry"));
    }
    if p.iter().any(|x| x.is_negative()) {
        return Err(Error::input("probabilities must be nonnegative"));
    }
    let total: Rational = p.iter().fold(Rational::zero(), |acc, x| acc + x);
    if total != Rational::from_integer(1) {
        return Err(Error::input(format!("probabilities sum to {}, not 1", format_rational(&total))));
    }
    let entropy: f64 = p
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| {
            let v = rational_to_f64(x);
            -v * v.ln()
        })
        .sum();
    let k = p.len();
    let full = Subshift::full_shift(k, 1)?;
    let opts = EntropyOptions { scales: vec![0], i_max: 8, ..Default::default() };
    let topological = topological_entropy(&full, &VanHoveSequence::int_intervals(1), &opts)?.sup_value;
    let uniform = p.iter().all(|x| *x == p[0]);
    let log_k = (k as f64).ln();
    let passed = if uniform { (entropy - topological).abs() <= 1e-12 } else { entropy < topological - 1e-12 };
    Ok(BernoulliReport { probabilities: p.iter().map(format_rational).collect(), entropy, log_k, topological, uniform, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::CountOptions;
    use crate::numeric::{int, rat};

    #[test]
    fn power_rule_for_full_and_golden() {
        let seq = VanHoveSequence::int_intervals(10);
        let opts = EntropyOptions { i_max: 30, ..Default::default() };
        let two = Subshift::full_shift(2, 1).unwrap();
        let r = power_rule_check(&two, 3, &seq, &opts, 0.0).unwrap();
        assert!(r.passed && r.delta < 1e-12, "{r:?}");
        let r = power_rule_check(&Subshift::golden_mean(), 2, &seq, &opts, 1e-3).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn four_two_point_chain_is_tight() {
        let p = SlidingBlockCode::four_to_two();
        let q = SlidingBlockCode::to_point(p.target());
        let opts = EntropyOptions { i_max: 12, ..Default::default() };
        let (r, _) = bowen_chain_check(&p, &q, &VanHoveSequence::int_intervals(1), &opts).unwrap();
        assert!(r.passed);
        assert!((r.e_first - 2f64.ln()).abs() < 1e-12);
        assert!((r.e_composite - 4f64.ln()).abs() < 1e-12);
        assert!(r.upper_gap.abs() < 1e-12);
    }

    #[test]
    fn random_chains_are_consistent() {
        for seed in 0..5 {
            let (p, q) = random_merge_chain(seed, 6).unwrap();
            let opts = EntropyOptions { i_max: 12, ..Default::default() };
            let (r, _) = bowen_chain_check(&p, &q, &VanHoveSequence::int_intervals(1), &opts).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn product_extension_examples() {
        let card = SubadditiveFunction::linear(GroupDescriptor::int(1), int(1)).unwrap();
        let r = product_extension_check(&card, &FiniteSet::interval(0, 1), &FiniteSet::interval(0, 2), Default::default()).unwrap();
        assert_eq!(r.expected_exact.as_deref(), Some("6"));
        assert!(r.passed, "{r:?}");
        let logc = SubadditiveFunction::log_pattern_count(&Subshift::full_shift(2, 1).unwrap(), 0, CountOptions::default()).unwrap();
        let r = product_extension_check(&logc, &FiniteSet::interval(0, 0), &FiniteSet::interval(0, 3), Default::default()).unwrap();
        assert!((r.infimum - 4.0 * 2f64.ln()).abs() < 1e-12 && r.passed);
    }

    #[test]
    fn bernoulli_values() {
        let r = bernoulli_entropy(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert!(r.uniform && r.passed && (r.entropy - 2f64.ln()).abs() < 1e-15);
        let r = bernoulli_entropy(&[int(1), int(0)]).unwrap();
        assert_eq!(r.entropy, 0.0);
        assert!(r.passed);
        let r = bernoulli_entropy(&[rat(1, 4), rat(3, 4)]).unwrap();
        let expected = 0.25 * 4f64.ln() + 0.75 * (4.0f64 / 3.0).ln();
        assert!((r.entropy - expected).abs() < 1e-15 && r.passed);
        assert!(bernoulli_entropy(&[rat(1, 2), rat(1, 3)]).is_err());
    }
}
