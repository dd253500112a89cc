//! Named groups, Van Hove sequences and kernels, as used on the command line.

use crate::error::{Error, Result};
use crate::groups::{CompactRegion, FiniteSet, GroupDescriptor, GroupElement, PadicBall, PadicNumber, RationalBox, VanHoveSequence};
use crate::numeric::{int, parse_rational, Rational};

/// Default step of the one-dimensional interval families.
pub const INTERVAL_STEP: usize = 10;
pub const DEFAULT_PADIC_PRECISION: u32 = 40;

/// `z<d>`, `r<d>`, `h3`, `q<p>` or `q<p>:<precision>`, joined by `*` for products.
pub fn parse_group(text: &str) -> Result<GroupDescriptor> {
    let text = text.trim();
    if text.contains('*') {
        let factors = text.split('*').map(parse_group).collect::<Result<Vec<_>>>()?;
        return GroupDescriptor::product(factors);
    }
    let bad = || Error::input(format!("unknown group {text:?}; expected z<d>, r<d>, h3, q<p>[:precision] or a '*' product"));
    let g = if text == "h3" {
        GroupDescriptor::HeisenbergInt
    } else if let Some(d) = text.strip_prefix('z') {
        GroupDescriptor::int(d.parse().map_err(|_| bad())?)
    } else if let Some(d) = text.strip_prefix('r') {
        GroupDescriptor::real(d.parse().map_err(|_| bad())?)
    } else if let Some(rest) = text.strip_prefix('q') {
        let (p, prec) = match rest.split_once(':') {
            Some((p, n)) => (p, n.parse().map_err(|_| bad())?),
            None => (rest, DEFAULT_PADIC_PRECISION),
        };
        GroupDescriptor::padic(p.parse().map_err(|_| bad())?, prec)
    } else {
        return Err(bad());
    };
    g.validate()?;
    Ok(g)
}

fn split_step(name: &str) -> Result<(&str, Option<&str>)> {
    Ok(match name.split_once(':') {
        Some((base, arg)) => (base, Some(arg)),
        None => (name, None),
    })
}

fn usize_arg(arg: Option<&str>, default: usize, name: &str) -> Result<usize> {
    match arg {
        None => Ok(default),
        Some(a) => a.parse::<usize>().ok().filter(|v| *v > 0).ok_or_else(|| Error::input(format!("bad step {a:?} in sequence {name:?}"))),
    }
}

fn rational_arg(arg: Option<&str>, default: Rational, name: &str) -> Result<Rational> {
    match arg {
        None => Ok(default),
        Some(a) => {
            let v = parse_rational(a)?;
            if v <= int(0) {
                return Err(Error::input(format!("bad step {a:?} in sequence {name:?}")));
            }
            Ok(v)
        }
    }
}

/// `{0, …, 2s·i − 1}` in ℤ.
pub fn even_intervals(step: usize) -> VanHoveSequence {
    VanHoveSequence::new(GroupDescriptor::int(1), format!("even-intervals(step {step})"), move |i| {
        Ok(CompactRegion::Finite(FiniteSet::interval(0, (2 * step * i) as i64 - 1)))
    })
}

/// The unit cell of a group: `{e}` in discrete groups, `[0,1]^d` in ℝ^d,
/// `ℤ_p` in ℚ_p, and products of these.
pub fn unit_region(group: &GroupDescriptor) -> Result<CompactRegion> {
    Ok(match group {
        GroupDescriptor::RealVector { dim } => CompactRegion::Box(RationalBox::new(vec![int(0); *dim], vec![int(1); *dim])?),
        GroupDescriptor::PadicTruncated { p, .. } => CompactRegion::PadicBall(PadicBall::centered(*p, 0)?),
        GroupDescriptor::Product { factors } => CompactRegion::Product(factors.iter().map(unit_region).collect::<Result<Vec<_>>>()?),
        g => CompactRegion::Finite(FiniteSet::new(g.clone(), vec![g.identity()])?),
    })
}

/// Sequence presets for a group. In ℤ: `intervals`, `shifted-intervals`,
/// `centered-intervals`, `even-intervals` (default step 10, `:<step>` to
/// override); in ℤ^d: `cubes[:step]`, and in ℤ² also `rectangles[:step]`;
/// in ℝ^d: `boxes[:step]`, `offset-boxes[:step]`; in ℚ_p: `balls`; in any
/// group: `constant`. For a product of two groups, `<seq> x <seq>`.
pub fn parse_sequence(name: &str, group: &GroupDescriptor) -> Result<VanHoveSequence> {
    let name = name.trim();
    if let Some((left, right)) = name.split_once(" x ") {
        let GroupDescriptor::Product { factors } = group else {
            return Err(Error::input(format!("{name:?} needs a product group")));
        };
        if factors.len() != 2 {
            return Err(Error::input("product sequences take exactly two factors"));
        }
        let a = parse_sequence(left, &factors[0])?;
        let b = parse_sequence(right, &factors[1])?;
        return VanHoveSequence::product(&a, &b);
    }
    let (base, arg) = split_step(name)?;
    let unknown = || Error::input(format!("sequence {name:?} is not available on {group}"));
    match (base, group) {
        ("constant", g) => Ok(VanHoveSequence::constant(g.clone(), unit_region(g)?)),
        ("intervals", GroupDescriptor::IntLattice { dim: 1 }) => Ok(VanHoveSequence::int_intervals(usize_arg(arg, INTERVAL_STEP, name)?)),
        ("shifted-intervals", GroupDescriptor::IntLattice { dim: 1 }) => {
            Ok(VanHoveSequence::int_shifted_intervals(usize_arg(arg, INTERVAL_STEP, name)?))
        }
        ("centered-intervals", GroupDescriptor::IntLattice { dim: 1 }) => {
            Ok(VanHoveSequence::int_centered_intervals(usize_arg(arg, INTERVAL_STEP, name)?))
        }
        ("even-intervals", GroupDescriptor::IntLattice { dim: 1 }) => Ok(even_intervals(usize_arg(arg, INTERVAL_STEP, name)?)),
        ("cubes", GroupDescriptor::IntLattice { dim }) => Ok(VanHoveSequence::int_cubes(*dim, usize_arg(arg, 1, name)?)),
        ("rectangles", GroupDescriptor::IntLattice { dim: 2 }) => Ok(VanHoveSequence::int_rectangles(usize_arg(arg, 1, name)?)),
        ("boxes", GroupDescriptor::RealVector { dim }) => Ok(VanHoveSequence::real_boxes(*dim, rational_arg(arg, int(1), name)?)),
        ("offset-boxes", GroupDescriptor::RealVector { dim }) => {
            Ok(VanHoveSequence::real_offset_boxes(*dim, rational_arg(arg, int(1), name)?))
        }
        ("balls", GroupDescriptor::PadicTruncated { p, precision }) => {
            let center = match arg {
                None => PadicNumber::zero(*p),
                Some(c) => PadicNumber::from_rational(*p, parse_rational(c)?)?,
            };
            Ok(VanHoveSequence::padic_balls(*p, *precision, center))
        }
        _ => Err(unknown()),
    }
}

/// Kernels: `box:<r>` (the centred box of radius `r` in ℝ^d or ℤ^d),
/// `set:<x>,<y>,…` (a finite subset of ℤ), `ball:<n>` (`p^{-n}ℤ_p`), or
/// kernels for product factors joined by ` x `.
pub fn parse_kernel(text: &str, group: &GroupDescriptor) -> Result<CompactRegion> {
    let text = text.trim();
    if let Some((left, right)) = text.split_once(" x ") {
        let GroupDescriptor::Product { factors } = group else {
            return Err(Error::input(format!("{text:?} needs a product group")));
        };
        if factors.len() != 2 {
            return Err(Error::input("product kernels take exactly two factors"));
        }
        return Ok(CompactRegion::Product(vec![parse_kernel(left, &factors[0])?, parse_kernel(right, &factors[1])?]));
    }
    let bad = || Error::input(format!("kernel {text:?} is not available on {group}"));
    let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
    match (kind, group) {
        ("box", GroupDescriptor::RealVector { dim }) => Ok(CompactRegion::Box(RationalBox::centered(*dim, parse_rational(arg)?))),
        ("box", GroupDescriptor::IntLattice { dim }) => {
            let r: i64 = arg.parse().map_err(|_| bad())?;
            Ok(CompactRegion::Finite(FiniteSet::int_box(&vec![-r; *dim], &vec![r; *dim])?))
        }
        ("set", GroupDescriptor::IntLattice { dim: 1 }) => {
            let pts = arg.split(',').map(|x| x.trim().parse::<i64>().map(|v| vec![v]).map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
            Ok(CompactRegion::Finite(FiniteSet::from_ints(1, &pts)?))
        }
        ("ball", GroupDescriptor::PadicTruncated { p, .. }) => {
            Ok(CompactRegion::PadicBall(PadicBall::centered(*p, arg.parse().map_err(|_| bad())?)?))
        }
        ("set", GroupDescriptor::HeisenbergInt) => {
            let pts = arg
                .split(';')
                .map(|t| {
                    let v: Vec<i64> = t.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<_>>()?;
                    let arr: [i64; 3] = v.try_into().map_err(|_| bad())?;
                    Ok(GroupElement::Heisenberg(arr))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CompactRegion::Finite(FiniteSet::new(GroupDescriptor::HeisenbergInt, pts)?))
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{haar_measure, van_hove_diagnostic};

    #[test]
    fn groups_parse() {
        assert_eq!(parse_group("z2").unwrap(), GroupDescriptor::int(2));
        assert_eq!(parse_group("q2:5").unwrap(), GroupDescriptor::padic(2, 5));
        assert!(matches!(parse_group("z1*q3").unwrap(), GroupDescriptor::Product { .. }));
        assert!(parse_group("q4").is_err());
        assert!(parse_group("w1").is_err());
    }

    #[test]
    fn constant_sequence_fails_in_r1() {
        let g = parse_group("r1").unwrap();
        let seq = parse_sequence("constant", &g).unwrap();
        let k = parse_kernel("box:1", &g).unwrap();
        let rep = van_hove_diagnostic(&seq, &k, 5, 0.05, 5).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.rows[0].ratio, "3");
    }

    #[test]
    fn sequences_by_name() {
        let z = parse_group("z1").unwrap();
        let s = parse_sequence("even-intervals:2", &z).unwrap();
        assert_eq!(haar_measure(&s.region(3).unwrap()).unwrap(), int(12));
        assert!(parse_sequence("boxes", &z).is_err());
        let prod = parse_group("z1*q2:8").unwrap();
        let s = parse_sequence("intervals:1 x balls", &prod).unwrap();
        assert_eq!(haar_measure(&s.region(2).unwrap()).unwrap(), int(8));
    }
}
