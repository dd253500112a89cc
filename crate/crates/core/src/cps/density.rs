//! Preset lattices, fundamental domains and uniform density traces.

use num_traits::Zero;
use serde::Serialize;

use crate::cps::scheme::{enumerate_model_set, Lattice, ModelSet};
use crate::error::{Error, Result};
use crate::groups::{haar_measure, CompactRegion, FiniteSet, GroupDescriptor, GroupElement, RationalBox, VanHoveSequence};
use crate::numeric::{ceil_rational, floor_rational, format_rational, int, rational_to_f64, QSqrt5, Rational};

/// Lattices with closed-form fundamental domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticePreset {
    /// `s·ℤ^dim` in ℝ^dim with domain `[0, s)^dim`.
    ScaledIntegers { dim: usize, spacing: Rational },
    /// `n_1ℤ × … × n_dℤ` in ℤ^d with domain `Π {0, …, n_j − 1}`.
    IntSublattice { moduli: Vec<i64> },
    /// H₃(ℤ) in itself with domain `{e}`.
    HeisenbergSelf,
    /// H₃(ℤ) in H₃(ℝ); only the covolume 1 is available.
    HeisenbergInReal,
}

impl LatticePreset {
    pub fn covolume(&self) -> Rational {
        match self {
            LatticePreset::ScaledIntegers { dim, spacing } => (0..*dim).fold(int(1), |acc, _| acc * spacing),
            LatticePreset::IntSublattice { moduli } => int(moduli.iter().map(|n| *n as i128).product()),
            LatticePreset::HeisenbergSelf | LatticePreset::HeisenbergInReal => int(1),
        }
    }

    pub fn ambient(&self) -> Result<GroupDescriptor> {
        match self {
            LatticePreset::ScaledIntegers { dim, .. } => Ok(GroupDescriptor::real(*dim)),
            LatticePreset::IntSublattice { moduli } => Ok(GroupDescriptor::int(moduli.len())),
            LatticePreset::HeisenbergSelf => Ok(GroupDescriptor::HeisenbergInt),
            LatticePreset::HeisenbergInReal => Err(Error::unsupported("H3(R) is not a supported ambient group")),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LatticePreset::ScaledIntegers { dim, spacing } => format!("{}Z^{dim} in R^{dim}", format_rational(spacing)),
            LatticePreset::IntSublattice { moduli } => moduli.iter().map(|n| format!("{n}Z")).collect::<Vec<_>>().join(" x "),
            LatticePreset::HeisenbergSelf => "H3(Z) in H3(Z)".into(),
            LatticePreset::HeisenbergInReal => "H3(Z) in H3(R)".into(),
        }
    }

    /// `|Λ ∩ A|` for a region of the ambient group.
    pub fn count_in(&self, region: &CompactRegion) -> Result<u64> {
        match (self, region) {
            (LatticePreset::ScaledIntegers { dim, spacing }, CompactRegion::Box(b)) if b.dim() == *dim => {
                let mut total: u64 = 1;
                for j in 0..*dim {
                    let lo = ceil_rational(&(b.lower[j] / spacing));
                    let hi = floor_rational(&(b.upper[j] / spacing));
                    total = total.saturating_mul((hi - lo + 1).max(0) as u64);
                }
                Ok(total)
            }
            (LatticePreset::IntSublattice { moduli }, CompactRegion::Finite(s)) => {
                Ok(s.int_points()?.iter().filter(|p| p.iter().zip(moduli).all(|(x, n)| x.rem_euclid(*n) == 0)).count() as u64)
            }
            (LatticePreset::HeisenbergSelf, CompactRegion::Finite(s)) => Ok(s.len() as u64),
            _ => Err(Error::unsupported(format!("counting {} points in {}", self.describe(), region.describe()))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalDomain {
    pub lattice: LatticePreset,
    /// The closure of the domain; the domain itself is half-open along each axis.
    pub region: CompactRegion,
    pub covolume: Rational,
}

impl FundamentalDomain {
    pub fn density(&self) -> Rational {
        Rational::from_integer(1) / self.covolume
    }

    /// Writes `g = c + z` with `z ∈ Λ` and `c` in the half-open domain.
    pub fn decompose(&self, g: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        match (&self.lattice, g) {
            (LatticePreset::ScaledIntegers { spacing, .. }, GroupElement::Real(x)) => {
                let mut c = Vec::new();
                let mut z = Vec::new();
                for v in x {
                    let q = v.as_rational().ok_or_else(|| Error::unsupported("decomposing irrational points"))?;
                    let k = floor_rational(&(q / spacing));
                    z.push(spacing * int(k));
                    c.push(q - spacing * int(k));
                }
                Ok((GroupElement::real_rational(&c), GroupElement::real_rational(&z)))
            }
            (LatticePreset::IntSublattice { moduli }, GroupElement::Int(x)) => {
                let c: Vec<i64> = x.iter().zip(moduli).map(|(v, n)| v.rem_euclid(*n)).collect();
                let z: Vec<i64> = x.iter().zip(&c).map(|(v, r)| v - r).collect();
                Ok((GroupElement::Int(c), GroupElement::Int(z)))
            }
            (LatticePreset::HeisenbergSelf, GroupElement::Heisenberg(_)) => Ok((GroupElement::Heisenberg([0, 0, 0]), g.clone())),
            _ => Err(Error::input(format!("{g} is not in the ambient group of {}", self.lattice.describe()))),
        }
    }

    fn in_domain(&self, c: &GroupElement) -> bool {
        match (&self.lattice, c) {
            (LatticePreset::ScaledIntegers { spacing, .. }, GroupElement::Real(x)) => {
                x.iter().all(|v| *v >= QSqrt5::zero() && *v < QSqrt5::from_rational(spacing))
            }
            (LatticePreset::IntSublattice { moduli }, GroupElement::Int(x)) => x.iter().zip(moduli).all(|(v, n)| (0..*n).contains(v)),
            (LatticePreset::HeisenbergSelf, GroupElement::Heisenberg(v)) => *v == [0, 0, 0],
            _ => false,
        }
    }

    /// Checks on each sample that exactly one lattice point `z` among the
    /// neighbours of the computed one leaves `g − z` in the domain.
    pub fn verify_tiling(&self, samples: &[GroupElement]) -> Result<bool> {
        for g in samples {
            let (c, z) = self.decompose(g)?;
            if !self.in_domain(&c) {
                return Ok(false);
            }
            let hits = match (&self.lattice, g, &z) {
                (LatticePreset::ScaledIntegers { spacing, .. }, GroupElement::Real(x), GroupElement::Real(zv)) => {
                    let d = x.len();
                    let mut hits = 0;
                    for code in 0..3usize.pow(d as u32) {
                        let mut rest = code;
                        let mut cand = Vec::with_capacity(d);
                        for j in 0..d {
                            let delta = (rest % 3) as i128 - 1;
                            rest /= 3;
                            cand.push(x[j] - zv[j] - QSqrt5::from_rational(&(spacing * int(delta))));
                        }
                        if self.in_domain(&GroupElement::Real(cand)) {
                            hits += 1;
                        }
                    }
                    hits
                }
                (LatticePreset::IntSublattice { moduli }, GroupElement::Int(x), GroupElement::Int(zv)) => {
                    let d = x.len();
                    let mut hits = 0;
                    for code in 0..3usize.pow(d as u32) {
                        let mut rest = code;
                        let mut cand = Vec::with_capacity(d);
                        for j in 0..d {
                            let delta = (rest % 3) as i64 - 1;
                            rest /= 3;
                            cand.push(x[j] - zv[j] - delta * moduli[j]);
                        }
                        if self.in_domain(&GroupElement::Int(cand)) {
                            hits += 1;
                        }
                    }
                    hits
                }
                _ => 1,
            };
            if hits != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn fundamental_domain(lattice: &LatticePreset) -> Result<FundamentalDomain> {
    let region = match lattice {
        LatticePreset::ScaledIntegers { dim, spacing } => {
            if *spacing <= int(0) || *dim == 0 {
                return Err(Error::input("spacing and dimension must be positive"));
            }
            CompactRegion::Box(RationalBox::new(vec![int(0); *dim], vec![*spacing; *dim])?)
        }
        LatticePreset::IntSublattice { moduli } => {
            if moduli.is_empty() || moduli.iter().any(|n| *n < 1) {
                return Err(Error::input("moduli must be positive"));
            }
            let hi: Vec<i64> = moduli.iter().map(|n| n - 1).collect();
            CompactRegion::Finite(FiniteSet::int_box(&vec![0; moduli.len()], &hi)?)
        }
        LatticePreset::HeisenbergSelf => {
            CompactRegion::Finite(FiniteSet::new(GroupDescriptor::HeisenbergInt, vec![GroupElement::Heisenberg([0, 0, 0])])?)
        }
        LatticePreset::HeisenbergInReal => {
            return Err(Error::NoClosedForm("H3(Z) in H3(R): the domain H3([0,1)) is not a supported region; covolume is 1".into()))
        }
    };
    Ok(FundamentalDomain { lattice: lattice.clone(), covolume: haar_measure(&region)?, region })
}

/// Where the points come from in a density trace.
#[derive(Clone, Copy, Debug)]
pub enum PointSource<'a> {
    ModelSet(&'a ModelSet),
    Lattice(&'a LatticePreset),
    Points(&'a FiniteSet),
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DensityRow {
    pub index: usize,
    pub count: u64,
    pub measure: String,
    pub ratio: String,
    pub ratio_value: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DensityTrace {
    pub source: String,
    pub sequence: String,
    pub rows: Vec<DensityRow>,
    pub tail: f64,
    pub band_low: f64,
    pub band_high: f64,
    pub oracle: Option<f64>,
    pub oracle_exact: Option<String>,
    pub band_contains_oracle: Option<bool>,
    /// `max_i |ratio_i − oracle|·μ(A_i)^(1/d)` over the trace: the measured
    /// constant in the `O(μ(A_i)^(-1/d))` convergence.
    pub rate_constant: Option<f64>,
}

fn rate_dimension(g: &GroupDescriptor) -> f64 {
    match g {
        GroupDescriptor::IntLattice { dim } | GroupDescriptor::RealVector { dim } => *dim as f64,
        GroupDescriptor::HeisenbergInt => 4.0,
        GroupDescriptor::PadicTruncated { .. } => 1.0,
        GroupDescriptor::Product { factors } => factors.iter().map(rate_dimension).sum(),
    }
}

/// `|ω ∩ A_i|/μ(A_i)` for `i = 1..=i_max`, with the oscillation band of the
/// last `window` values.
pub fn uniform_density(source: PointSource<'_>, seq: &VanHoveSequence, i_max: usize, window: usize) -> Result<DensityTrace> {
    if i_max == 0 {
        return Err(Error::input("i_max must be positive"));
    }
    let (label, oracle_exact): (String, Option<QSqrt5>) = match source {
        PointSource::ModelSet(ms) => {
            if ms.physical_group() != seq.group() && !same_family(ms.physical_group(), seq.group()) {
                return Err(Error::input(format!("model set lives in {}, sequence in {}", ms.physical_group(), seq.group())));
            }
            (ms.scheme.name.clone(), Some(ms.density_oracle()?))
        }
        PointSource::Lattice(l) => (l.describe(), Some(QSqrt5::from_rational(&(Rational::from_integer(1) / l.covolume())))),
        PointSource::Points(p) => (format!("{} given points", p.len()), None),
    };
    let mut rows = Vec::with_capacity(i_max);
    let mut values = Vec::with_capacity(i_max);
    let mut measures = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let region = seq.region(i)?;
        let m = haar_measure(&region)?;
        if m.is_zero() {
            return Err(Error::input(format!("A_{i} has measure zero")));
        }
        let count = match source {
            PointSource::ModelSet(ms) => enumerate_model_set(ms, &region)?.len() as u64,
            PointSource::Lattice(l) => l.count_in(&region)?,
            PointSource::Points(p) => p.iter().filter(|g| region.contains(g)).count() as u64,
        };
        let ratio = Rational::from_integer(count as i128) / m;
        rows.push(DensityRow {
            index: i,
            count,
            measure: format_rational(&m),
            ratio: format_rational(&ratio),
            ratio_value: rational_to_f64(&ratio),
        });
        values.push(rational_to_f64(&ratio));
        measures.push(rational_to_f64(&m));
    }
    let tail_slice = &values[values.len().saturating_sub(window.max(1))..];
    let band_low = tail_slice.iter().cloned().fold(f64::INFINITY, f64::min);
    let band_high = tail_slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let oracle = oracle_exact.map(|q| q.to_f64());
    let d = rate_dimension(seq.group());
    let rate_constant = oracle.map(|o| values.iter().zip(&measures).map(|(v, m)| (v - o).abs() * m.powf(1.0 / d)).fold(0.0, f64::max));
    Ok(DensityTrace {
        source: label,
        sequence: seq.label().to_string(),
        tail: *values.last().expect("non-empty"),
        band_low,
        band_high,
        oracle,
        oracle_exact: oracle_exact.map(|q| q.to_exact_string()),
        band_contains_oracle: oracle.map(|o| band_low - 1e-12 <= o && o <= band_high + 1e-12),
        rate_constant,
        rows,
    })
}

fn same_family(a: &GroupDescriptor, b: &GroupDescriptor) -> bool {
    matches!(
        (a, b),
        (GroupDescriptor::PadicTruncated { p: p1, .. }, GroupDescriptor::PadicTruncated { p: p2, .. }) if p1 == p2
    )
}

/// The lattice behind a scheme whose internal group is trivial, if any.
pub fn lattice_of(ms: &ModelSet) -> Option<LatticePreset> {
    match (&ms.scheme.lattice, &ms.scheme.physical) {
        (Lattice::Generators { internal_dim: 0, vectors, .. }, GroupDescriptor::IntLattice { .. }) => {
            let moduli: Option<Vec<i64>> =
                vectors.iter().enumerate().map(|(i, v)| v[i].as_rational().map(|q| q.to_integer() as i64)).collect();
            moduli.map(|moduli| LatticePreset::IntSublattice { moduli })
        }
        (Lattice::Generators { internal_dim: 0, vectors, .. }, GroupDescriptor::RealVector { dim }) => {
            vectors[0][0].as_rational().map(|spacing| LatticePreset::ScaledIntegers { dim: *dim, spacing })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::PadicNumber;
    use crate::numeric::rat;

    #[test]
    fn preset_domains() {
        let d = fundamental_domain(&LatticePreset::ScaledIntegers { dim: 2, spacing: int(1) }).unwrap();
        assert_eq!(d.covolume, int(1));
        assert_eq!(d.density(), int(1));
        let n = fundamental_domain(&LatticePreset::IntSublattice { moduli: vec![5] }).unwrap();
        assert_eq!(n.density(), rat(1, 5));
        let m = fundamental_domain(&LatticePreset::IntSublattice { moduli: vec![2, 3] }).unwrap();
        assert_eq!(m.covolume, int(6));
        assert!(matches!(fundamental_domain(&LatticePreset::HeisenbergInReal), Err(Error::NoClosedForm(_))));
        assert!(d.region.contains(&GroupElement::real_rational(&[int(0), int(0)])));
    }

    #[test]
    fn tiling_decomposition_is_unique() {
        let d = fundamental_domain(&LatticePreset::ScaledIntegers { dim: 2, spacing: rat(1, 2) }).unwrap();
        let samples: Vec<GroupElement> =
            (-6..6).flat_map(|a| (-6..6).map(move |b| GroupElement::real_rational(&[rat(a, 3), rat(b, 4)]))).collect();
        assert!(d.verify_tiling(&samples).unwrap());
        let z = fundamental_domain(&LatticePreset::IntSublattice { moduli: vec![2, 3] }).unwrap();
        let samples: Vec<GroupElement> = (-7..7).flat_map(|a| (-7..7).map(move |b| GroupElement::Int(vec![a, b]))).collect();
        assert!(z.verify_tiling(&samples).unwrap());
    }

    #[test]
    fn integers_in_real_boxes() {
        let seq = VanHoveSequence::real_boxes(1, int(1));
        let l = LatticePreset::ScaledIntegers { dim: 1, spacing: int(1) };
        let t = uniform_density(PointSource::Lattice(&l), &seq, 10, 5).unwrap();
        for (i, row) in t.rows.iter().enumerate() {
            let n = (i + 1) as i128;
            assert_eq!(row.ratio, format_rational(&rat(2 * n + 1, 2 * n)));
        }
    }

    #[test]
    fn multiples_in_intervals() {
        let seq = VanHoveSequence::int_centered_intervals(10);
        let l = LatticePreset::IntSublattice { moduli: vec![3] };
        let t = uniform_density(PointSource::Lattice(&l), &seq, 20, 5).unwrap();
        assert!((t.tail - 1.0 / 3.0).abs() < 1e-2);
    }

    #[test]
    fn padic_density_tends_to_window_length() {
        let ms = ModelSet::padic(2, int(1), 12).unwrap();
        let seq = VanHoveSequence::padic_balls(2, 12, PadicNumber::zero(2));
        let t = uniform_density(PointSource::ModelSet(&ms), &seq, 12, 5).unwrap();
        for (i, row) in t.rows.iter().enumerate() {
            let p = 2i128.pow(i as u32 + 1);
            assert_eq!(row.ratio, format_rational(&rat(2 * p + 1, p)));
        }
        assert!((t.rate_constant.unwrap() - 1.0).abs() < 1e-12);
    }
}
