//! Subadditive set functions with spot-checked properties.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{count_patterns_with, cov_with, fiber_cov_with, CountOptions, SlidingBlockCode, Subshift};
use crate::error::{Error, Result};
use crate::groups::{dilate, haar_measure, CompactRegion, FiniteSet, GroupDescriptor, GroupElement, RationalBox};
use crate::numeric::{format_rational, int, ln_biguint, rat, rational_to_f64, Rational};

const SPOT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeclaredProperties {
    pub subadditive: bool,
    pub right_invariant: bool,
    pub monotone: bool,
}

impl DeclaredProperties {
    pub const ALL: DeclaredProperties = DeclaredProperties { subadditive: true, right_invariant: true, monotone: true };
}

type Evaluator = Arc<dyn Fn(&CompactRegion) -> Result<f64> + Send + Sync>;

#[derive(Clone)]
enum Kind {
    LogPatternCount { subshift: Subshift, radius: usize, opts: CountOptions },
    LogFiberCov { code: SlidingBlockCode, radius: usize, opts: CountOptions },
    DilationVolume { kernel: CompactRegion },
    Linear { c: Rational },
    User(Evaluator),
}

/// A value `f(A)` with its exact form when one exists.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub exact: String,
}

/// A map `f` from compact subsets of a group to ℝ.
#[derive(Clone)]
pub struct SubadditiveFunction {
    label: String,
    builtin: &'static str,
    group: GroupDescriptor,
    kind: Kind,
    declared: DeclaredProperties,
}

impl fmt::Debug for SubadditiveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubadditiveFunction({} on {})", self.label, self.group)
    }
}

impl SubadditiveFunction {
    /// `F ↦ log cov(F, r)`, the log of the number of cylinder classes on `F ⊕ B_r`.
    pub fn log_pattern_count(subshift: &Subshift, radius: usize, opts: CountOptions) -> Result<Self> {
        let f = SubadditiveFunction {
            label: format!("log-count[{}, r={radius}]", subshift.name()),
            builtin: "log-pattern-count",
            group: GroupDescriptor::int(subshift.dim()),
            kind: Kind::LogPatternCount { subshift: subshift.clone(), radius, opts },
            declared: DeclaredProperties::ALL,
        };
        f.spot_check(0x5eed)?;
        Ok(f)
    }

    /// `F ↦ log cov_p(F, r)` for a sliding block code `p`.
    pub fn log_fiber_cov(code: &SlidingBlockCode, radius: usize, opts: CountOptions) -> Result<Self> {
        let f = SubadditiveFunction {
            label: format!("log-fiber[{}, r={radius}]", code.name()),
            builtin: "log-fiber-cov",
            group: GroupDescriptor::int(code.source().dim()),
            kind: Kind::LogFiberCov { code: code.clone(), radius, opts },
            declared: DeclaredProperties::ALL,
        };
        f.spot_check(0x5eed)?;
        Ok(f)
    }

    /// `A ↦ μ(K₀A)`.
    pub fn dilation_volume(group: GroupDescriptor, kernel: CompactRegion) -> Result<Self> {
        let f = SubadditiveFunction {
            label: format!("dilation-volume[{}]", kernel.describe()),
            builtin: "dilation-volume",
            group,
            kind: Kind::DilationVolume { kernel },
            declared: DeclaredProperties::ALL,
        };
        f.spot_check(0x5eed)?;
        Ok(f)
    }

    /// `A ↦ c·μ(A)`; with counting measure on ℤ and `c = 1` this is the cardinality.
    pub fn linear(group: GroupDescriptor, c: Rational) -> Result<Self> {
        if c < int(0) {
            return Err(Error::input("the linear built-in needs c >= 0 to be monotone"));
        }
        let f = SubadditiveFunction {
            label: format!("linear[c={}]", format_rational(&c)),
            builtin: "linear",
            group,
            kind: Kind::Linear { c },
            declared: DeclaredProperties::ALL,
        };
        f.spot_check(0x5eed)?;
        Ok(f)
    }

    /// A caller-supplied evaluator; its declared properties are taken on trust.
    pub fn user(
        label: impl Into<String>,
        group: GroupDescriptor,
        declared: DeclaredProperties,
        f: impl Fn(&CompactRegion) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        SubadditiveFunction { label: label.into(), builtin: "user", group, kind: Kind::User(Arc::new(f)), declared }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn builtin(&self) -> &'static str {
        self.builtin
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn declared(&self) -> DeclaredProperties {
        self.declared
    }

    /// Monotone built-ins usable in lattice sandwiches.
    pub fn is_monotone(&self) -> bool {
        self.declared.monotone
    }

    pub fn evaluate(&self, a: &CompactRegion) -> Result<Evaluation> {
        let finite = || -> Result<&FiniteSet> {
            a.as_finite().ok_or_else(|| Error::input(format!("{} needs a finite subset of {}", self.label, self.group)))
        };
        match &self.kind {
            Kind::LogPatternCount { subshift, radius, opts } => {
                let c = if *radius == 0 {
                    count_patterns_with(subshift, finite()?, *opts)?
                } else {
                    cov_with(subshift, finite()?, *radius, *opts)?
                };
                Ok(Evaluation { value: ln_biguint(&c.count), exact: format!("log {}", c.count) })
            }
            Kind::LogFiberCov { code, radius, opts } => {
                let c = fiber_cov_with(code, finite()?, *radius, *opts)?;
                Ok(Evaluation { value: ln_biguint(&c.count), exact: format!("log {}", c.count) })
            }
            Kind::DilationVolume { kernel } => {
                let m = haar_measure(&dilate(kernel, a)?)?;
                Ok(Evaluation { value: rational_to_f64(&m), exact: format_rational(&m) })
            }
            Kind::Linear { c } => {
                let m = *c * haar_measure(a)?;
                Ok(Evaluation { value: rational_to_f64(&m), exact: format_rational(&m) })
            }
            Kind::User(f) => {
                let v = f(a)?;
                if !v.is_finite() {
                    return Err(Error::input(format!("{} returned a non-finite value", self.label)));
                }
                Ok(Evaluation { value: v, exact: format!("{v}") })
            }
        }
    }

    fn value(&self, a: &CompactRegion) -> Result<f64> {
        Ok(self.evaluate(a)?.value)
    }

    /// Random disjoint pairs, translates and nested pairs, checked against
    /// the declared properties. Groups other than ℤ^d and ℝ^d are skipped.
    pub fn spot_check(&self, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..6 {
            let Some((a, b, union, shifted_a)) = self.sample(&mut rng)? else {
                return Ok(());
            };
            let (fa, fb, fu, fs) = (self.value(&a)?, self.value(&b)?, self.value(&union)?, self.value(&shifted_a)?);
            if self.declared.subadditive && fu > fa + fb + SPOT_TOLERANCE {
                return Err(Error::Property(format!("{}: f(A∪B) = {fu} exceeds f(A)+f(B) = {}", self.label, fa + fb)));
            }
            if self.declared.right_invariant && (fs - fa).abs() > SPOT_TOLERANCE {
                return Err(Error::Property(format!("{}: f(A+g) = {fs} differs from f(A) = {fa}", self.label)));
            }
            if self.declared.monotone && fa > fu + SPOT_TOLERANCE {
                return Err(Error::Property(format!("{}: f(A) = {fa} exceeds f(A∪B) = {fu}", self.label)));
            }
        }
        Ok(())
    }

    #[allow(clippy::type_complexity)]
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Option<(CompactRegion, CompactRegion, CompactRegion, CompactRegion)>> {
        match &self.group {
            GroupDescriptor::IntLattice { dim } => {
                let dim = *dim;
                let mut pts: Vec<Vec<i64>> = Vec::new();
                let size = rng.gen_range(2..=6);
                while pts.len() < size {
                    let p: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
                    if !pts.contains(&p) {
                        pts.push(p);
                    }
                }
                let cut = rng.gen_range(1..size);
                let a = FiniteSet::from_ints(dim, &pts[..cut])?;
                let b = FiniteSet::from_ints(dim, &pts[cut..])?;
                let g: Vec<i64> = (0..dim).map(|_| rng.gen_range(-5..=5)).collect();
                let shifted: Vec<Vec<i64>> = pts[..cut].iter().map(|p| p.iter().zip(&g).map(|(x, y)| x + y).collect()).collect();
                Ok(Some((
                    CompactRegion::Finite(a.clone()),
                    CompactRegion::Finite(b.clone()),
                    CompactRegion::Finite(a.union(&b)?),
                    CompactRegion::Finite(FiniteSet::from_ints(dim, &shifted)?),
                )))
            }
            GroupDescriptor::RealVector { dim } => {
                let dim = *dim;
                let corner = |rng: &mut ChaCha8Rng| -> Vec<Rational> { (0..dim).map(|_| rat(rng.gen_range(-8..=8), 2)).collect() };
                let lo = corner(rng);
                let len_a: Vec<Rational> = (0..dim).map(|_| rat(rng.gen_range(1..=6), 2)).collect();
                let hi_a: Vec<Rational> = lo.iter().zip(&len_a).map(|(l, d)| l + d).collect();
                // B starts where A ends along the first axis.
                let mut lo_b = lo.clone();
                lo_b[0] = hi_a[0];
                let hi_b: Vec<Rational> = lo_b.iter().map(|l| l + rat(rng.gen_range(1..=6), 2)).collect();
                let a = RationalBox::new(lo, hi_a)?;
                let b = RationalBox::new(lo_b, hi_b)?;
                let g: Vec<Rational> = (0..dim).map(|_| rat(rng.gen_range(-9..=9), 3)).collect();
                let shifted = a.translate(&g);
                Ok(Some((
                    CompactRegion::Box(a.clone()),
                    CompactRegion::Box(b.clone()),
                    CompactRegion::BoxUnion(vec![a, b]),
                    CompactRegion::Box(shifted),
                )))
            }
            _ => Ok(None),
        }
    }
}

pub(crate) fn int_point(g: &GroupElement) -> Option<Vec<i64>> {
    match g {
        GroupElement::Int(v) => Some(v.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn built_ins_pass_their_spot_checks() {
        let opts = CountOptions::default();
        SubadditiveFunction::log_pattern_count(&Subshift::golden_mean(), 0, opts).unwrap();
        SubadditiveFunction::log_pattern_count(&Subshift::hard_square(), 1, opts).unwrap();
        SubadditiveFunction::log_fiber_cov(&SlidingBlockCode::golden_projection(), 1, opts).unwrap();
        let k = CompactRegion::Box(RationalBox::centered(2, int(1)));
        SubadditiveFunction::dilation_volume(GroupDescriptor::real(2), k).unwrap();
        SubadditiveFunction::linear(GroupDescriptor::int(1), int(1)).unwrap();
    }

    #[test]
    fn spot_checks_catch_false_declarations() {
        // Squared cardinality is not subadditive.
        let f = SubadditiveFunction::user("square", GroupDescriptor::int(1), DeclaredProperties::ALL, |a| {
            let n = a.as_finite().map(|f| f.len()).unwrap_or(0) as f64;
            Ok(n * n)
        });
        assert!(matches!(f.spot_check(1), Err(Error::Property(_))));
    }

    #[test]
    fn evaluations_are_exact_where_possible() {
        let f =
            SubadditiveFunction::dilation_volume(GroupDescriptor::real(1), CompactRegion::Box(RationalBox::centered(1, int(1)))).unwrap();
        let e = f.evaluate(&CompactRegion::Box(RationalBox::centered(1, int(3)))).unwrap();
        assert_eq!(e.exact, "8");
        let g = SubadditiveFunction::log_pattern_count(&Subshift::golden_mean(), 1, CountOptions::default()).unwrap();
        let e = g.evaluate(&CompactRegion::Finite(FiniteSet::interval(0, 2))).unwrap();
        assert_eq!(e.exact, "log 13");
    }
}
