//! Cut-and-project schemes, windows and model-set enumeration.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::is_prime;
use crate::groups::{CompactRegion, FiniteSet, GroupDescriptor, GroupElement, PadicBall, PadicNumber, RationalBox};
use crate::numeric::{format_rational, int, parse_rational, QSqrt5, Rational};

/// The lattice Λ ⊂ G × H of a scheme.
#[derive(Clone, Debug, PartialEq)]
pub enum Lattice {
    /// Λ spanned by `vectors`, each with `physical_dim` physical then
    /// `internal_dim` internal coordinates. There are exactly
    /// `physical_dim + internal_dim` vectors.
    Generators { physical_dim: usize, internal_dim: usize, vectors: Vec<Vec<QSqrt5>> },
    /// Λ = {(x, x) : x ∈ ℤ[1/p]} ⊂ ℚ_p × ℝ.
    PadicDiagonal { p: u64 },
}

/// One axis of a window; endpoints are exact elements of ℚ(√5).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowInterval {
    pub lo: QSqrt5,
    pub hi: QSqrt5,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl WindowInterval {
    pub fn closed(lo: QSqrt5, hi: QSqrt5) -> Self {
        WindowInterval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn contains(&self, x: &QSqrt5) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn length(&self) -> QSqrt5 {
        self.hi - self.lo
    }

    pub fn max_abs(&self) -> QSqrt5 {
        self.lo.abs().max(self.hi.abs())
    }
}

impl fmt::Display for WindowInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}, {}{}", if self.lo_closed { "[" } else { "(" }, self.lo, self.hi, if self.hi_closed { "]" } else { ")" })
    }
}

/// A product of intervals in the internal space. An empty axis list is the
/// trivial window `{e}` of a trivial internal group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub axes: Vec<WindowInterval>,
    pub regular: bool,
}

impl Window {
    pub fn new(axes: Vec<WindowInterval>) -> Result<Self> {
        if axes.iter().any(|a| a.hi <= a.lo) {
            return Err(Error::input("a window needs non-empty interior"));
        }
        Ok(Window { axes, regular: true })
    }

    pub fn trivial() -> Self {
        Window { axes: Vec::new(), regular: true }
    }

    pub fn contains(&self, y: &[QSqrt5]) -> bool {
        y.len() == self.axes.len() && self.axes.iter().zip(y).all(|(a, v)| a.contains(v))
    }

    pub fn measure(&self) -> QSqrt5 {
        self.axes.iter().fold(QSqrt5::from_int(1), |acc, a| acc * a.length())
    }

    pub fn describe(&self) -> String {
        if self.axes.is_empty() {
            return "{e}".into();
        }
        self.axes.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" x ")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutProjectScheme {
    pub name: String,
    pub physical: GroupDescriptor,
    /// `None` for the trivial internal group.
    pub internal: Option<GroupDescriptor>,
    pub lattice: Lattice,
    pub covolume: QSqrt5,
}

/// How far the lattice sweep reaches. `Auto` derives the bound from the
/// query region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationBound {
    Auto,
    Coefficients(i64),
    Depth(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSet {
    pub scheme: CutProjectScheme,
    pub window: Window,
    pub bound: EnumerationBound,
}

fn generator_scheme(name: &str, physical: GroupDescriptor, a: usize, b: usize, vectors: Vec<Vec<QSqrt5>>) -> Result<CutProjectScheme> {
    let covolume = determinant(&vectors)?.abs();
    if covolume.is_zero() {
        return Err(Error::input("lattice generators are linearly dependent"));
    }
    Ok(CutProjectScheme {
        name: name.to_string(),
        physical,
        internal: (b > 0).then(|| GroupDescriptor::real(b)),
        lattice: Lattice::Generators { physical_dim: a, internal_dim: b, vectors },
        covolume,
    })
}

impl ModelSet {
    /// ℤ in ℝ with trivial internal group.
    pub fn trivial_z() -> Self {
        let scheme = generator_scheme("trivial-z", GroupDescriptor::real(1), 1, 0, vec![vec![QSqrt5::from_int(1)]]).expect("unit lattice");
        ModelSet { scheme, window: Window::trivial(), bound: EnumerationBound::Auto }
    }

    /// Λ spanned by (1, 1) and (τ, 1 − τ) in ℝ × ℝ with window (−1, τ − 1].
    pub fn fibonacci() -> Self {
        let one = QSqrt5::from_int(1);
        let tau = QSqrt5::tau();
        let vectors = vec![vec![one, one], vec![tau, one - tau]];
        let scheme = generator_scheme("fibonacci", GroupDescriptor::real(1), 1, 1, vectors).expect("independent");
        let window = Window { axes: vec![WindowInterval { lo: -one, hi: tau - one, lo_closed: false, hi_closed: true }], regular: true };
        ModelSet { scheme, window, bound: EnumerationBound::Auto }
    }

    /// ℤ[1/p] diagonally in ℚ_p × ℝ with window [−R, R]; physical points keep
    /// at most `depth` powers of p in the denominator.
    pub fn padic(p: u64, radius: Rational, depth: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        if radius <= int(0) {
            return Err(Error::input("window radius must be positive"));
        }
        let physical = GroupDescriptor::padic(p, depth);
        physical.validate()?;
        let scheme = CutProjectScheme {
            name: format!("padic:{p}:{}:{depth}", format_rational(&radius)),
            physical,
            internal: Some(GroupDescriptor::real(1)),
            lattice: Lattice::PadicDiagonal { p },
            covolume: QSqrt5::from_int(1),
        };
        let r = QSqrt5::from_rational(&radius);
        let window = Window::new(vec![WindowInterval::closed(-r, r)])?;
        Ok(ModelSet { scheme, window, bound: EnumerationBound::Depth(depth) })
    }

    /// ℤ^d in ℝ^d.
    pub fn zd(d: usize) -> Result<Self> {
        Self::scaled_integers(&format!("zd:{d}"), GroupDescriptor::real(d), &vec![1; d])
    }

    /// n_1ℤ × … × n_dℤ in ℤ^d.
    pub fn nzd(moduli: &[i64]) -> Result<Self> {
        if moduli.is_empty() || moduli.iter().any(|n| *n < 1) {
            return Err(Error::input("moduli must be positive"));
        }
        let name = format!("nzd:{}", moduli.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
        Self::scaled_integers(&name, GroupDescriptor::int(moduli.len()), moduli)
    }

    fn scaled_integers(name: &str, physical: GroupDescriptor, moduli: &[i64]) -> Result<Self> {
        physical.validate()?;
        let d = moduli.len();
        let vectors = (0..d).map(|i| (0..d).map(|j| QSqrt5::from_int(if i == j { moduli[i] as i128 } else { 0 })).collect()).collect();
        let scheme = generator_scheme(name, physical, d, 0, vectors)?;
        Ok(ModelSet { scheme, window: Window::trivial(), bound: EnumerationBound::Auto })
    }

    /// Parses `trivial-z`, `fibonacci`, `padic:<p>:<R>:<depth>`, `zd:<d>` or `nzd:<n1,…,nd>`.
    pub fn from_preset(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.trim().split(':').collect();
        let num = |s: &str| s.parse::<u64>().map_err(|_| Error::input(format!("bad number {s:?} in preset {name:?}")));
        match parts.as_slice() {
            ["trivial-z"] => Ok(Self::trivial_z()),
            ["fibonacci"] => Ok(Self::fibonacci()),
            ["padic", p, r, depth] => Self::padic(num(p)?, parse_rational(r)?, num(depth)? as u32),
            ["zd", d] => Self::zd(num(d)? as usize),
            ["nzd", ns] => {
                let moduli = ns.split(',').map(|s| num(s).map(|v| v as i64)).collect::<Result<Vec<_>>>()?;
                Self::nzd(&moduli)
            }
            _ => Err(Error::input(format!(
                "unknown scheme preset {name:?}; expected trivial-z, fibonacci, padic:<p>:<R>:<depth>, zd:<d> or nzd:<n1,...>"
            ))),
        }
    }

    pub fn with_bound(mut self, bound: EnumerationBound) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_window(mut self, window: Window) -> Result<Self> {
        let expected = match &self.scheme.lattice {
            Lattice::Generators { internal_dim, .. } => *internal_dim,
            Lattice::PadicDiagonal { .. } => 1,
        };
        if window.axes.len() != expected {
            return Err(Error::input(format!("window has {} axes, internal space has {expected}", window.axes.len())));
        }
        self.window = window;
        Ok(self)
    }

    /// μ_H(W)/covol(Λ), the density of a regular model set.
    pub fn density_oracle(&self) -> Result<QSqrt5> {
        Ok(self.window.measure() * self.scheme.covolume.inverse()?)
    }

    pub fn physical_group(&self) -> &GroupDescriptor {
        &self.scheme.physical
    }
}

/// Determinant over ℚ(√5) by Gaussian elimination.
fn determinant(m: &[Vec<QSqrt5>]) -> Result<QSqrt5> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::input("generator matrix must be square"));
    }
    let mut a = m.to_vec();
    let mut det = QSqrt5::from_int(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|r| !a[*r][col].is_zero()) else {
            return Ok(QSqrt5::zero());
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det = det * a[col][col];
        let inv = a[col][col].inverse()?;
        for r in col + 1..n {
            let factor = a[r][col] * inv;
            for c in col..n {
                let v = a[col][c];
                a[r][c] = a[r][c] - factor * v;
            }
        }
    }
    Ok(det)
}

/// Inverse over ℚ(√5) by Gauss-Jordan elimination.
fn inverse(m: &[Vec<QSqrt5>]) -> Result<Vec<Vec<QSqrt5>>> {
    let n = m.len();
    let mut a: Vec<Vec<QSqrt5>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| QSqrt5::from_int((i == j) as i128)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|r| !a[*r][col].is_zero()).ok_or_else(|| Error::input("singular generator matrix"))?;
        a.swap(pivot, col);
        let inv = a[col][col].inverse()?;
        for c in 0..2 * n {
            a[col][c] = a[col][c] * inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] = a[r][c] - factor * v;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Bounding box of a query region in a real or integer physical space.
fn query_bounds(query: &CompactRegion, dim: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    match query {
        CompactRegion::Box(b) if b.dim() == dim => Ok((b.lower.clone(), b.upper.clone())),
        CompactRegion::Finite(s) if !s.is_empty() => {
            let pts = s.int_points()?;
            if pts[0].len() != dim {
                return Err(Error::input("query dimension differs from the physical space"));
            }
            let lo = (0..dim).map(|j| int(pts.iter().map(|p| p[j]).min().expect("non-empty") as i128)).collect();
            let hi = (0..dim).map(|j| int(pts.iter().map(|p| p[j]).max().expect("non-empty") as i128)).collect();
            Ok((lo, hi))
        }
        CompactRegion::Finite(_) => Ok((vec![int(0); dim], vec![int(-1); dim])),
        _ => Err(Error::unsupported(format!("model-set query {}", query.describe()))),
    }
}

/// Per-coefficient bounds `|c_j| ≤ Σ_i |M⁻¹_{ij}|·max|z_i|` for every lattice
/// point whose physical part lies in the query and internal part in the window.
fn required_coefficients(vectors: &[Vec<QSqrt5>], a: usize, window: &Window, lo: &[Rational], hi: &[Rational]) -> Result<Vec<i64>> {
    let inv = inverse(vectors)?;
    let n = vectors.len();
    let mut extent: Vec<f64> = Vec::with_capacity(n);
    for j in 0..a {
        extent.push(QSqrt5::from_rational(&lo[j]).abs().max(QSqrt5::from_rational(&hi[j]).abs()).to_f64());
    }
    for axis in &window.axes {
        extent.push(axis.max_abs().to_f64());
    }
    // c = z·M⁻¹ with z = (x, y) as a row vector.
    Ok((0..n)
        .map(|j| {
            let s: f64 = (0..n).map(|i| inv[i][j].abs().to_f64() * extent[i]).sum();
            (s + 1e-9).floor() as i64 + 1
        })
        .collect())
}

fn for_each_coefficient(bounds: &[i64], mut visit: impl FnMut(&[i64]) -> Result<()>) -> Result<()> {
    let n = bounds.len();
    let mut c: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        visit(&c)?;
        let mut j = 0;
        loop {
            if j == n {
                return Ok(());
            }
            if c[j] < bounds[j] {
                c[j] += 1;
                break;
            }
            c[j] = -bounds[j];
            j += 1;
        }
    }
}

const SWEEP_LIMIT: u128 = 50_000_000;

/// `ω ∩ query`, exactly. Fails with a coverage error (carrying a sufficient
/// bound) when the configured bound cannot reach every point.
pub fn enumerate_model_set(ms: &ModelSet, query: &CompactRegion) -> Result<FiniteSet> {
    match &ms.scheme.lattice {
        Lattice::Generators { physical_dim, internal_dim: _, vectors } => {
            let a = *physical_dim;
            let (lo, hi) = query_bounds(query, a)?;
            let need = required_coefficients(vectors, a, &ms.window, &lo, &hi)?;
            let bounds = match ms.bound {
                EnumerationBound::Auto => need.clone(),
                EnumerationBound::Coefficients(b) => {
                    let max_need = *need.iter().max().expect("non-empty");
                    if b < max_need {
                        return Err(Error::Coverage { bound: b.max(0) as u64, suggested: max_need as u64 });
                    }
                    need.iter().map(|_| b).collect()
                }
                EnumerationBound::Depth(_) => return Err(Error::input("depth bounds apply to p-adic schemes")),
            };
            let sweep: u128 = bounds.iter().map(|b| 2 * *b as u128 + 1).product();
            if sweep > SWEEP_LIMIT {
                return Err(Error::Budget { what: "lattice sweep".into(), required: sweep as usize, limit: SWEEP_LIMIT as usize });
            }
            let integral = matches!(ms.scheme.physical, GroupDescriptor::IntLattice { .. });
            let mut points = Vec::new();
            for_each_coefficient(&bounds, |c| {
                let mut z = vec![QSqrt5::zero(); vectors.len()];
                for (cj, v) in c.iter().zip(vectors) {
                    if *cj == 0 {
                        continue;
                    }
                    let s = QSqrt5::from_int(*cj as i128);
                    for (zi, vi) in z.iter_mut().zip(v) {
                        *zi = *zi + s * *vi;
                    }
                }
                let (x, y) = z.split_at(a);
                if !ms.window.contains(y) {
                    return Ok(());
                }
                let inside =
                    x.iter().zip(lo.iter().zip(&hi)).all(|(v, (l, h))| *v >= QSqrt5::from_rational(l) && *v <= QSqrt5::from_rational(h));
                if !inside {
                    return Ok(());
                }
                let g = if integral {
                    let coords: Option<Vec<i64>> =
                        x.iter().map(|v| v.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer() as i64)).collect();
                    GroupElement::Int(coords.ok_or_else(|| Error::input("non-integral point in an integer group"))?)
                } else {
                    GroupElement::Real(x.to_vec())
                };
                if query.contains(&g) {
                    points.push(g);
                }
                Ok(())
            })?;
            FiniteSet::new(ms.scheme.physical.clone(), points)
        }
        Lattice::PadicDiagonal { p } => enumerate_padic(ms, *p, query),
    }
}

fn enumerate_padic(ms: &ModelSet, p: u64, query: &CompactRegion) -> Result<FiniteSet> {
    let depth = match ms.bound {
        EnumerationBound::Depth(d) => d,
        EnumerationBound::Auto => match &ms.scheme.physical {
            GroupDescriptor::PadicTruncated { precision, .. } => *precision,
            _ => unreachable!("p-adic scheme"),
        },
        EnumerationBound::Coefficients(_) => return Err(Error::input("coefficient bounds apply to generator lattices")),
    };
    let balls: Vec<PadicBall> = match query {
        CompactRegion::PadicBall(b) => vec![b.clone()],
        CompactRegion::BallUnion(bs) => bs.clone(),
        _ => return Err(Error::unsupported(format!("p-adic query {}", query.describe()))),
    };
    let axis = &ms.window.axes[0];
    let mut points = Vec::new();
    for ball in &balls {
        if ball.prime() != p {
            return Err(Error::input("query ball over a different prime"));
        }
        // Points of ℤ[1/p] in the ball have denominators up to p^max(n, depth(center)).
        let needed = ball.radius().max(ball.center().depth() as i32).max(0) as u32;
        if needed > depth {
            return Err(Error::Coverage { bound: depth as u64, suggested: needed as u64 });
        }
        let scale = (p as i128).checked_pow(needed).ok_or_else(|| Error::Overflow("p-adic scale".into()))?;
        // x = a/p^K lies in c + p^(-n)ℤ_p iff a ≡ c·p^K (mod p^(K-n)).
        let modulus = (p as i128).pow((needed as i32 - ball.radius()).max(0) as u32);
        let residue = (ball.center().value() * int(scale)).to_integer().rem_euclid(modulus);
        let lo = (axis.lo.mul_rational(&int(scale))).floor();
        let hi = (axis.hi.mul_rational(&int(scale))).floor() + 1;
        let count = (hi - lo) / modulus;
        if count > SWEEP_LIMIT as i128 {
            return Err(Error::Budget { what: "p-adic sweep".into(), required: count as usize, limit: SWEEP_LIMIT as usize });
        }
        let mut a = lo + (residue - lo).rem_euclid(modulus);
        while a <= hi {
            let x = QSqrt5::from_rational(&Rational::new(a, scale));
            if axis.contains(&x) {
                let pn = PadicNumber::from_rational(p, Rational::new(a, scale))?;
                if ball.contains(&pn) {
                    points.push(GroupElement::Padic(pn));
                }
            }
            a += modulus;
        }
    }
    FiniteSet::new(ms.scheme.physical.clone(), points)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CpsCertificate {
    pub scheme: String,
    pub injective: bool,
    pub dense: bool,
    pub max_internal_gap: Option<f64>,
    pub epsilon: f64,
    pub status: String,
}

/// Desk-scale checks of the scheme axioms: the physical projection separates
/// small lattice points, and the internal projections of points over `query`
/// leave no gap wider than `epsilon` in the window.
pub fn certify(ms: &ModelSet, query: &CompactRegion, epsilon: f64) -> Result<CpsCertificate> {
    let (injective, internal): (bool, Vec<QSqrt5>) = match &ms.scheme.lattice {
        Lattice::Generators { physical_dim, internal_dim, vectors } => {
            let n = vectors.len();
            let mut seen = std::collections::BTreeSet::new();
            let mut injective = true;
            for_each_coefficient(&vec![3; n], |c| {
                let x: Vec<QSqrt5> = (0..*physical_dim)
                    .map(|i| c.iter().zip(vectors).fold(QSqrt5::zero(), |acc, (cj, v)| acc + QSqrt5::from_int(*cj as i128) * v[i]))
                    .collect();
                if !seen.insert(x) {
                    injective = false;
                }
                Ok(())
            })?;
            let mut internal = Vec::new();
            if *internal_dim == 1 {
                let pts = enumerate_model_set(ms, query)?;
                for g in pts.iter() {
                    internal.push(star(ms, g.as_real().expect("real points")[0])?);
                }
            }
            (injective, internal)
        }
        Lattice::PadicDiagonal { .. } => {
            let pts = enumerate_model_set(ms, query)?;
            let internal = pts
                .iter()
                .map(|g| match g {
                    GroupElement::Padic(x) => QSqrt5::from_rational(x.value()),
                    _ => unreachable!("p-adic points"),
                })
                .collect();
            (true, internal)
        }
    };
    let (dense, gap) = if ms.window.axes.len() == 1 {
        let axis = &ms.window.axes[0];
        let mut ys = internal;
        ys.sort();
        let mut gap = 0f64;
        let mut prev = axis.lo;
        for y in ys.iter().chain(std::iter::once(&axis.hi)) {
            gap = gap.max((*y - prev).to_f64());
            prev = *y;
        }
        (gap <= epsilon, Some(gap))
    } else {
        (true, None)
    };
    let status = if injective && dense { "verified" } else { "unverified" }.to_string();
    Ok(CpsCertificate { scheme: ms.scheme.name.clone(), injective, dense, max_internal_gap: gap, epsilon, status })
}

/// Internal coordinate of a physical point of a one-dimensional ℚ(√5) scheme:
/// the Galois conjugate when the generators are conjugate pairs.
fn star(ms: &ModelSet, x: QSqrt5) -> Result<QSqrt5> {
    match &ms.scheme.lattice {
        Lattice::Generators { vectors, .. } if vectors.iter().all(|v| v.len() == 2 && v[1] == v[0].conjugate()) => Ok(x.conjugate()),
        _ => Err(Error::unsupported("internal coordinates for this scheme")),
    }
}

/// Point-list text: `#` header lines, then one exact point per line.
pub fn export_point_list(ms: &ModelSet, query: &CompactRegion, points: &FiniteSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("# scheme: {}\n", ms.scheme.name));
    out.push_str(&format!("# physical: {}\n", ms.scheme.physical));
    out.push_str(&format!("# window: {}\n", ms.window.describe()));
    out.push_str(&format!("# covolume: {}\n", ms.scheme.covolume));
    out.push_str(&format!("# query: {}\n", query.describe()));
    out.push_str(&format!("# count: {}\n", points.len()));
    for g in points.iter() {
        out.push_str(&g.to_exact_string());
        out.push('\n');
    }
    out
}

/// Reads a point list written by [`export_point_list`] (or by hand) into `group`.
pub fn parse_point_list(text: &str, group: &GroupDescriptor) -> Result<FiniteSet> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |e: Error| Error::input(format!("line {}: {e}", lineno + 1));
        let g = match group {
            GroupDescriptor::RealVector { dim } => {
                let coords = split_coordinates(line);
                if coords.len() != *dim {
                    return Err(Error::input(format!("line {}: expected {dim} coordinates", lineno + 1)));
                }
                GroupElement::Real(coords.iter().map(|c| QSqrt5::parse(c)).collect::<Result<_>>().map_err(err)?)
            }
            GroupDescriptor::IntLattice { dim } => {
                let coords: Vec<i64> = line
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|_| Error::input(format!("line {}: bad integer", lineno + 1))))
                    .collect::<Result<_>>()?;
                if coords.len() != *dim {
                    return Err(Error::input(format!("line {}: expected {dim} coordinates", lineno + 1)));
                }
                GroupElement::Int(coords)
            }
            GroupDescriptor::PadicTruncated { p, .. } => {
                GroupElement::Padic(PadicNumber::from_rational(*p, parse_rational(line).map_err(err)?).map_err(err)?)
            }
            other => return Err(Error::unsupported(format!("point lists in {other}"))),
        };
        points.push(g);
    }
    FiniteSet::new(group.clone(), points)
}

/// Splits on commas that are not inside a `(a,b,c)` triple.
fn split_coordinates(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in line.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}

/// The rational query box `[lo, hi]` in ℝ.
pub fn interval_query(lo: Rational, hi: Rational) -> CompactRegion {
    CompactRegion::Box(RationalBox::interval(lo, hi))
}
