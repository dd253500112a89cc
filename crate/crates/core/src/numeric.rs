//! Exact scalars: rationals over `i128`, the quadratic field ℚ(√5), and a
//! logarithm for big pattern counts.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"7"`, `"-3/2"` or a terminating decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::input(format!("not a rational number: {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::input(format!("zero denominator in {t:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let w: i128 = if whole.is_empty() || whole == "-" || whole == "+" { 0 } else { whole.parse().map_err(|_| bad())? };
        let f: i128 = frac.parse().map_err(|_| bad())?;
        let scale = 10i128.pow(frac.len() as u32);
        let mag = w.abs() * scale + f;
        let signed = if negative || w < 0 { -mag } else { mag };
        return Ok(Rational::new(signed, scale));
    }
    t.parse::<i128>().map(Rational::from_integer).map_err(|_| bad())
}

/// `"3/2"` or `"5"`; the inverse of [`parse_rational`].
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn floor_rational(q: &Rational) -> i128 {
    q.floor().to_integer()
}

pub fn ceil_rational(q: &Rational) -> i128 {
    q.ceil().to_integer()
}

/// Natural logarithm of an arbitrarily large count.
pub fn ln_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// An element `(a + b·√5) / c` of ℚ(√5), kept in lowest terms with `c > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QSqrt5 {
    a: i128,
    b: i128,
    c: i128,
}

impl QSqrt5 {
    pub fn new(a: i128, b: i128, c: i128) -> Result<Self> {
        if c == 0 {
            return Err(Error::input("zero denominator in quadratic number"));
        }
        Ok(Self::normalized(a, b, c))
    }

    fn normalized(a: i128, b: i128, c: i128) -> Self {
        let (mut a, mut b, mut c) = (a, b, c);
        if c < 0 {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if g > 1 {
            a /= g;
            b /= g;
            c /= g;
        }
        QSqrt5 { a, b, c }
    }

    pub fn zero() -> Self {
        QSqrt5 { a: 0, b: 0, c: 1 }
    }

    pub fn from_int(n: i128) -> Self {
        QSqrt5 { a: n, b: 0, c: 1 }
    }

    pub fn from_rational(q: &Rational) -> Self {
        Self::normalized(*q.numer(), 0, *q.denom())
    }

    /// The golden ratio (1 + √5)/2.
    pub fn tau() -> Self {
        QSqrt5 { a: 1, b: 1, c: 2 }
    }

    /// The Galois conjugate of τ, (1 − √5)/2.
    pub fn tau_conjugate() -> Self {
        QSqrt5 { a: 1, b: -1, c: 2 }
    }

    pub fn sqrt5() -> Self {
        QSqrt5 { a: 0, b: 1, c: 1 }
    }

    pub fn parts(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.c)
    }

    /// Galois conjugation √5 ↦ −√5.
    pub fn conjugate(&self) -> Self {
        QSqrt5 { a: self.a, b: -self.b, c: self.c }
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| Rational::new(self.a, self.c))
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Sign of `a + b√5`, decided with integer arithmetic only.
    pub fn signum(&self) -> i32 {
        let sa = self.a.signum() as i32;
        let sb = self.b.signum() as i32;
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        let a2 = self.a.checked_mul(self.a).expect("quadratic sign overflow");
        let b2 = self.b.checked_mul(self.b).and_then(|v| v.checked_mul(5)).expect("quadratic sign overflow");
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -*self
        } else {
            *self
        }
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * 5f64.sqrt()) / self.c as f64
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        let a = self.a.checked_mul(o.c)?.checked_add(o.a.checked_mul(self.c)?)?;
        let b = self.b.checked_mul(o.c)?.checked_add(o.b.checked_mul(self.c)?)?;
        let c = self.c.checked_mul(o.c)?;
        Some(Self::normalized(a, b, c))
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let a = self.a.checked_mul(o.a)?.checked_add(self.b.checked_mul(o.b)?.checked_mul(5)?)?;
        let b = self.a.checked_mul(o.b)?.checked_add(self.b.checked_mul(o.a)?)?;
        let c = self.c.checked_mul(o.c)?;
        Some(Self::normalized(a, b, c))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::input("inverse of zero"));
        }
        // c / (a + b√5) = c (a − b√5) / (a² − 5b²)
        let norm = self
            .a
            .checked_mul(self.a)
            .zip(self.b.checked_mul(self.b).and_then(|v| v.checked_mul(5)))
            .and_then(|(x, y)| x.checked_sub(y))
            .ok_or_else(|| Error::Overflow("quadratic inverse".into()))?;
        let a = self.c.checked_mul(self.a);
        let b = self.c.checked_mul(-self.b);
        match (a, b) {
            (Some(a), Some(b)) => Ok(Self::normalized(a, b, norm)),
            _ => Err(Error::Overflow("quadratic inverse".into())),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        *self * Self::from_rational(q)
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> i128 {
        let mut guess = self.to_f64().floor() as i128;
        while QSqrt5::from_int(guess) > *self {
            guess -= 1;
        }
        while QSqrt5::from_int(guess + 1) <= *self {
            guess += 1;
        }
        guess
    }

    /// Nearest integer, ties rounded up.
    pub fn round(&self) -> i128 {
        (*self + QSqrt5::from_rational(&rat(1, 2))).floor()
    }

    /// Text form: a rational `"p/q"` or the triple `"(a,b,c)"` for (a + b√5)/c.
    pub fn to_exact_string(&self) -> String {
        match self.as_rational() {
            Some(q) => format_rational(&q),
            None => format!("({},{},{})", self.a, self.b, self.c),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::input(format!("expected (a,b,c), got {t:?}")));
            }
            let p = |s: &str| s.trim().parse::<i128>().map_err(|_| Error::input(format!("bad integer in {t:?}")));
            return QSqrt5::new(p(parts[0])?, p(parts[1])?, p(parts[2])?);
        }
        parse_rational(t).map(|q| QSqrt5::from_rational(&q))
    }
}

impl Add for QSqrt5 {
    type Output = QSqrt5;
    fn add(self, o: Self) -> Self {
        self.checked_add(&o).expect("quadratic addition overflow")
    }
}

impl Sub for QSqrt5 {
    type Output = QSqrt5;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for QSqrt5 {
    type Output = QSqrt5;
    fn mul(self, o: Self) -> Self {
        self.checked_mul(&o).expect("quadratic multiplication overflow")
    }
}

impl Neg for QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> Self {
        QSqrt5 { a: -self.a, b: -self.b, c: self.c }
    }
}

impl Ord for QSqrt5 {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self - *other).signum() {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl PartialOrd for QSqrt5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

impl Zero for QSqrt5 {
    fn zero() -> Self {
        QSqrt5::zero()
    }
    fn is_zero(&self) -> bool {
        QSqrt5::is_zero(self)
    }
}

impl One for QSqrt5 {
    fn one() -> Self {
        QSqrt5::from_int(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/2", "-7", "0", "-1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn tau_satisfies_its_minimal_polynomial() {
        let t = QSqrt5::tau();
        assert_eq!(t * t, t + QSqrt5::from_int(1));
        assert_eq!(t * QSqrt5::tau_conjugate(), QSqrt5::from_int(-1));
        assert_eq!(t.inverse().unwrap(), t - QSqrt5::from_int(1));
    }

    #[test]
    fn ordering_near_cancellation() {
        // 161 − 72√5 ≈ 0.0062 > 0 and 360 − 161√5 ≈ −0.0025 < 0
        assert!(QSqrt5::new(161, -72, 1).unwrap().signum() > 0);
        assert!(QSqrt5::new(360, -161, 1).unwrap().signum() < 0);
        assert_eq!(QSqrt5::tau().floor(), 1);
        assert_eq!((-QSqrt5::tau()).floor(), -2);
    }

    #[test]
    fn exact_string_round_trip() {
        let x = QSqrt5::new(3, -4, 6).unwrap();
        assert_eq!(QSqrt5::parse(&x.to_exact_string()).unwrap(), x);
        assert_eq!(QSqrt5::parse("5/10").unwrap().to_exact_string(), "1/2");
    }

    #[test]
    fn log_of_large_counts() {
        let n = BigUint::from(2u32).pow(5000);
        assert!((ln_biguint(&n) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(ln_biguint(&BigUint::from(1u32)), 0.0);
    }

    proptest! {
        #[test]
        fn order_agrees_with_floats(a in -500i128..500, b in -500i128..500, c in 1i128..50,
                                    d in -500i128..500, e in -500i128..500, f in 1i128..50) {
            let x = QSqrt5::new(a, b, c).unwrap();
            let y = QSqrt5::new(d, e, f).unwrap();
            let gap = x.to_f64() - y.to_f64();
            if gap.abs() > 1e-9 {
                prop_assert_eq!(x < y, gap < 0.0);
            }
            prop_assert_eq!((x + y) - y, x);
        }

        #[test]
        fn inverse_is_two_sided(a in -300i128..300, b in -300i128..300, c in 1i128..40) {
            let x = QSqrt5::new(a, b, c).unwrap();
            prop_assume!(!x.is_zero());
            prop_assert_eq!(x * x.inverse().unwrap(), QSqrt5::from_int(1));
        }
    }
}
