//! Group descriptors and concrete elements.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, QSqrt5, Rational};

/// A locally compact group the crate can compute in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupDescriptor {
    /// ℤ^dim with counting measure.
    IntLattice {
        dim: usize,
    },
    /// ℝ^dim with Lebesgue measure; coordinates are exact elements of ℚ(√5).
    RealVector {
        dim: usize,
    },
    /// The integer Heisenberg group with counting measure.
    HeisenbergInt,
    /// ℚ_p with Haar measure normalized so that μ(ℤ_p) = 1; elements may carry
    /// at most `precision` powers of p in the denominator.
    PadicTruncated {
        p: u64,
        precision: u32,
    },
    Product {
        factors: Vec<GroupDescriptor>,
    },
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl GroupDescriptor {
    pub fn int(dim: usize) -> Self {
        GroupDescriptor::IntLattice { dim }
    }

    pub fn real(dim: usize) -> Self {
        GroupDescriptor::RealVector { dim }
    }

    pub fn padic(p: u64, precision: u32) -> Self {
        GroupDescriptor::PadicTruncated { p, precision }
    }

    /// Direct product; nested products are flattened.
    pub fn product(factors: Vec<GroupDescriptor>) -> Result<Self> {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                GroupDescriptor::Product { factors } => flat.extend(factors),
                other => flat.push(other),
            }
        }
        let g = GroupDescriptor::Product { factors: flat };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::IntLattice { dim } | GroupDescriptor::RealVector { dim } => {
                if *dim == 0 || *dim > 8 {
                    return Err(Error::input(format!("dimension {dim} outside 1..=8")));
                }
            }
            GroupDescriptor::HeisenbergInt => {}
            GroupDescriptor::PadicTruncated { p, precision } => {
                if !is_prime(*p) {
                    return Err(Error::input(format!("{p} is not prime")));
                }
                if *precision == 0 || *precision > 60 {
                    return Err(Error::input(format!("p-adic precision {precision} outside 1..=60")));
                }
            }
            GroupDescriptor::Product { factors } => {
                if factors.len() < 2 {
                    return Err(Error::input("a product needs at least two factors"));
                }
                for f in factors {
                    if matches!(f, GroupDescriptor::Product { .. }) {
                        return Err(Error::input("nested product descriptor"));
                    }
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Discrete groups carry counting measure.
    pub fn is_discrete(&self) -> bool {
        match self {
            GroupDescriptor::IntLattice { .. } | GroupDescriptor::HeisenbergInt => true,
            GroupDescriptor::RealVector { .. } | GroupDescriptor::PadicTruncated { .. } => false,
            GroupDescriptor::Product { factors } => factors.iter().all(|f| f.is_discrete()),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupDescriptor::HeisenbergInt => false,
            GroupDescriptor::Product { factors } => factors.iter().all(|f| f.is_abelian()),
            _ => true,
        }
    }

    pub fn factors(&self) -> Vec<GroupDescriptor> {
        match self {
            GroupDescriptor::Product { factors } => factors.clone(),
            other => vec![other.clone()],
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupDescriptor::IntLattice { dim } => GroupElement::Int(vec![0; *dim]),
            GroupDescriptor::RealVector { dim } => GroupElement::Real(vec![QSqrt5::zero(); *dim]),
            GroupDescriptor::HeisenbergInt => GroupElement::Heisenberg([0, 0, 0]),
            GroupDescriptor::PadicTruncated { p, .. } => GroupElement::Padic(PadicNumber::zero(*p)),
            GroupDescriptor::Product { factors } => GroupElement::Tuple(factors.iter().map(|f| f.identity()).collect()),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupDescriptor::IntLattice { dim }, GroupElement::Int(v)) => v.len() == *dim,
            (GroupDescriptor::RealVector { dim }, GroupElement::Real(v)) => v.len() == *dim,
            (GroupDescriptor::HeisenbergInt, GroupElement::Heisenberg(_)) => true,
            (GroupDescriptor::PadicTruncated { p, precision }, GroupElement::Padic(x)) => x.p == *p && x.depth() <= *precision,
            (GroupDescriptor::Product { factors }, GroupElement::Tuple(parts)) => {
                factors.len() == parts.len() && factors.iter().zip(parts).all(|(f, e)| f.contains(e))
            }
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else if let (GroupDescriptor::PadicTruncated { precision, .. }, GroupElement::Padic(x)) = (self, g) {
            Err(Error::Precision(format!("{x} needs depth {} but the group keeps {precision}", x.depth())))
        } else {
            Err(Error::input(format!("{g} is not an element of {self}")))
        }
    }

    /// The group law `a·b`.
    pub fn op(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let out = raw_op(a, b)?;
        self.check(&out)?;
        Ok(out)
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(raw_inverse(a))
    }
}

pub(crate) fn raw_op(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    Ok(match (a, b) {
        (GroupElement::Int(x), GroupElement::Int(y)) if x.len() == y.len() => {
            let mut out = Vec::with_capacity(x.len());
            for (u, v) in x.iter().zip(y) {
                out.push(u.checked_add(*v).ok_or_else(|| Error::Overflow("integer coordinate".into()))?);
            }
            GroupElement::Int(out)
        }
        (GroupElement::Real(x), GroupElement::Real(y)) if x.len() == y.len() => {
            let mut out = Vec::with_capacity(x.len());
            for (u, v) in x.iter().zip(y) {
                out.push(u.checked_add(v).ok_or_else(|| Error::Overflow("real coordinate".into()))?);
            }
            GroupElement::Real(out)
        }
        (GroupElement::Heisenberg([a1, b1, c1]), GroupElement::Heisenberg([a2, b2, c2])) => {
            let ov = || Error::Overflow("Heisenberg coordinate".into());
            let cross = a1.checked_mul(*b2).ok_or_else(ov)?;
            GroupElement::Heisenberg([
                a1.checked_add(*a2).ok_or_else(ov)?,
                b1.checked_add(*b2).ok_or_else(ov)?,
                c1.checked_add(*c2).and_then(|c| c.checked_add(cross)).ok_or_else(ov)?,
            ])
        }
        (GroupElement::Padic(x), GroupElement::Padic(y)) if x.p == y.p => GroupElement::Padic(x.add(y)?),
        (GroupElement::Tuple(x), GroupElement::Tuple(y)) if x.len() == y.len() => {
            GroupElement::Tuple(x.iter().zip(y).map(|(u, v)| raw_op(u, v)).collect::<Result<_>>()?)
        }
        _ => return Err(Error::input(format!("cannot multiply {a} and {b}"))),
    })
}

pub(crate) fn raw_inverse(a: &GroupElement) -> GroupElement {
    match a {
        GroupElement::Int(x) => GroupElement::Int(x.iter().map(|v| -v).collect()),
        GroupElement::Real(x) => GroupElement::Real(x.iter().map(|v| -*v).collect()),
        // (a,b,c)⁻¹ = (−a, −b, ab − c)
        GroupElement::Heisenberg([x, y, z]) => GroupElement::Heisenberg([-x, -y, x * y - z]),
        GroupElement::Padic(x) => GroupElement::Padic(x.neg()),
        GroupElement::Tuple(parts) => GroupElement::Tuple(parts.iter().map(raw_inverse).collect()),
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::IntLattice { dim } => write!(f, "Z^{dim}"),
            GroupDescriptor::RealVector { dim } => write!(f, "R^{dim}"),
            GroupDescriptor::HeisenbergInt => write!(f, "H3(Z)"),
            GroupDescriptor::PadicTruncated { p, precision } => write!(f, "Q_{p}[depth {precision}]"),
            GroupDescriptor::Product { factors } => {
                let names: Vec<String> = factors.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", names.join(" x "))
            }
        }
    }
}

/// A p-adic number with finitely many digits after the point: a rational whose
/// denominator is a power of p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PadicNumber {
    pub(crate) p: u64,
    pub(crate) value: Rational,
}

impl PadicNumber {
    pub fn zero(p: u64) -> Self {
        PadicNumber { p, value: Rational::zero() }
    }

    /// The number `a · p^(-k)`.
    pub fn new(p: u64, a: i128, k: i32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        let pp = p as i128;
        let scale = pp.checked_pow(k.unsigned_abs()).ok_or_else(|| Error::Overflow(format!("{p}^{k}")))?;
        let value = if k >= 0 {
            Rational::new(a, scale)
        } else {
            Rational::from_integer(a.checked_mul(scale).ok_or_else(|| Error::Overflow(format!("{a}*{p}^{}", -k)))?)
        };
        Ok(PadicNumber { p, value })
    }

    pub fn from_rational(p: u64, value: Rational) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        let mut d = *value.denom();
        while d % p as i128 == 0 {
            d /= p as i128;
        }
        if d != 1 {
            return Err(Error::input(format!("{} has a denominator that is not a power of {p}", format_rational(&value))));
        }
        Ok(PadicNumber { p, value })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// The exponent k in the reduced form a·p^(-k), clamped at zero.
    pub fn depth(&self) -> u32 {
        let mut d = *self.value.denom();
        let mut k = 0;
        while d > 1 {
            d /= self.p as i128;
            k += 1;
        }
        k
    }

    /// p-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        if self.value.is_zero() {
            return None;
        }
        let depth = self.depth();
        if depth > 0 {
            return Some(-(depth as i32));
        }
        let mut n = self.value.numer().abs();
        let mut v = 0;
        while n % self.p as i128 == 0 {
            n /= self.p as i128;
            v += 1;
        }
        Some(v)
    }

    /// Membership in the ball `p^(-n) ℤ_p`.
    pub fn in_ball(&self, n: i32) -> bool {
        match self.valuation() {
            None => true,
            Some(v) => v >= -n,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let value =
            num_traits::CheckedAdd::checked_add(&self.value, &other.value).ok_or_else(|| Error::Overflow("p-adic addition".into()))?;
        Ok(PadicNumber { p: self.p, value })
    }

    pub fn neg(&self) -> Self {
        PadicNumber { p: self.p, value: -self.value }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}

/// An element of one of the supported groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Int(Vec<i64>),
    Real(Vec<QSqrt5>),
    Heisenberg([i64; 3]),
    Padic(PadicNumber),
    Tuple(Vec<GroupElement>),
}

impl GroupElement {
    pub fn int1(n: i64) -> Self {
        GroupElement::Int(vec![n])
    }

    pub fn real_rational(coords: &[Rational]) -> Self {
        GroupElement::Real(coords.iter().map(QSqrt5::from_rational).collect())
    }

    pub fn as_int(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<&[QSqrt5]> {
        match self {
            GroupElement::Real(v) => Some(v),
            _ => None,
        }
    }

    /// Canonical exact text: coordinates joined by commas, tuples in brackets.
    pub fn to_exact_string(&self) -> String {
        match self {
            GroupElement::Int(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            GroupElement::Real(v) => v.iter().map(|x| x.to_exact_string()).collect::<Vec<_>>().join(","),
            GroupElement::Heisenberg([a, b, c]) => format!("{a},{b},{c}"),
            GroupElement::Padic(x) => x.to_string(),
            GroupElement::Tuple(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| format!("[{}]", p.to_exact_string())).collect();
                inner.join("x")
            }
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_exact_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use proptest::prelude::*;

    #[test]
    fn heisenberg_law_is_non_abelian() {
        let g = GroupDescriptor::HeisenbergInt;
        let x = GroupElement::Heisenberg([1, 0, 0]);
        let y = GroupElement::Heisenberg([0, 1, 0]);
        assert_eq!(g.op(&x, &y).unwrap(), GroupElement::Heisenberg([1, 1, 1]));
        assert_eq!(g.op(&y, &x).unwrap(), GroupElement::Heisenberg([1, 1, 0]));
        assert!(!g.is_abelian());
    }

    #[test]
    fn padic_depth_and_valuation() {
        let x = PadicNumber::new(2, 3, 2).unwrap();
        assert_eq!(x.depth(), 2);
        assert_eq!(x.valuation(), Some(-2));
        let y = PadicNumber::new(2, 3, -3).unwrap();
        assert_eq!(y.valuation(), Some(3));
        assert_eq!(PadicNumber::new(3, 9, 2).unwrap().value, rat(1, 1));
        assert!(PadicNumber::from_rational(2, rat(1, 3)).is_err());
    }

    #[test]
    fn precision_overflow_is_loud() {
        let g = GroupDescriptor::padic(2, 3);
        let x = GroupElement::Padic(PadicNumber::new(2, 1, 4).unwrap());
        assert!(matches!(g.check(&x), Err(Error::Precision(_))));
        let y = GroupElement::Padic(PadicNumber::new(2, 1, 3).unwrap());
        assert!(g.op(&y, &y).is_ok());
    }

    #[test]
    fn products_flatten() {
        let inner = GroupDescriptor::product(vec![GroupDescriptor::int(1), GroupDescriptor::real(1)]).unwrap();
        let g = GroupDescriptor::product(vec![inner, GroupDescriptor::padic(3, 2)]).unwrap();
        assert_eq!(g.factors().len(), 3);
        assert!(GroupDescriptor::product(vec![GroupDescriptor::int(1)]).is_err());
        assert!(GroupDescriptor::padic(4, 2).validate().is_err());
    }

    fn heis() -> impl Strategy<Value = GroupElement> {
        (-50i64..50, -50i64..50, -50i64..50).prop_map(|(a, b, c)| GroupElement::Heisenberg([a, b, c]))
    }

    proptest! {
        #[test]
        fn heisenberg_axioms(x in heis(), y in heis(), z in heis()) {
            let g = GroupDescriptor::HeisenbergInt;
            let left = g.op(&g.op(&x, &y).unwrap(), &z).unwrap();
            let right = g.op(&x, &g.op(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(g.op(&x, &g.inverse(&x).unwrap()).unwrap(), g.identity());
            prop_assert_eq!(g.op(&g.inverse(&x).unwrap(), &x).unwrap(), g.identity());
        }

        #[test]
        fn padic_addition_is_a_group(a in -200i128..200, k in 0i32..4, b in -200i128..200, l in 0i32..4) {
            let g = GroupDescriptor::padic(3, 4);
            let x = GroupElement::Padic(PadicNumber::new(3, a, k).unwrap());
            let y = GroupElement::Padic(PadicNumber::new(3, b, l).unwrap());
            let s = g.op(&x, &y).unwrap();
            prop_assert_eq!(g.op(&s, &g.inverse(&y).unwrap()).unwrap(), x);
        }
    }
}
