//! Subshifts of finite type over ℤ^d and their patterns.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::FiniteSet;

pub type Cell = Vec<i64>;

/// A finite pattern: symbols (alphabet indices) on distinct cells, sorted by cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    cells: Vec<(Cell, u8)>,
}

impl Pattern {
    pub fn new(mut cells: Vec<(Cell, u8)>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::input("a pattern needs at least one cell"));
        }
        let dim = cells[0].0.len();
        if dim == 0 || cells.iter().any(|(c, _)| c.len() != dim) {
            return Err(Error::input("pattern cells must share one positive dimension"));
        }
        cells.sort();
        for w in cells.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::input(format!("cell {:?} assigned twice", w[0].0)));
            }
        }
        Ok(Pattern { cells })
    }

    /// A word placed on `{0, …, len − 1}`.
    pub fn word(symbols: &[u8]) -> Result<Self> {
        Pattern::new(symbols.iter().enumerate().map(|(i, s)| (vec![i as i64], *s)).collect())
    }

    pub fn cells(&self) -> &[(Cell, u8)] {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.cells[0].0.len()
    }

    /// Largest cell in lexicographic order.
    pub fn last_cell(&self) -> &Cell {
        &self.cells.last().expect("non-empty").0
    }

    pub fn first_cell(&self) -> &Cell {
        &self.cells[0].0
    }

    /// Number of cells spanned along each axis.
    pub fn extent(&self) -> Vec<i64> {
        (0..self.dim())
            .map(|j| {
                let lo = self.cells.iter().map(|(c, _)| c[j]).min().expect("non-empty");
                let hi = self.cells.iter().map(|(c, _)| c[j]).max().expect("non-empty");
                hi - lo + 1
            })
            .collect()
    }

    pub fn max_symbol(&self) -> u8 {
        self.cells.iter().map(|(_, s)| *s).max().expect("non-empty")
    }

    pub fn translate(&self, t: &[i64]) -> Pattern {
        Pattern { cells: self.cells.iter().map(|(c, s)| (c.iter().zip(t).map(|(a, b)| a + b).collect(), *s)).collect() }
    }
}

/// A subshift of finite type: configurations in `alphabet^(ℤ^dim)` avoiding
/// every forbidden pattern. Counts are taken up to the admissibility margin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subshift {
    name: String,
    alphabet: Vec<String>,
    dim: usize,
    forbidden: Vec<Pattern>,
    margin: usize,
}

pub const MAX_ALPHABET: usize = 250;

impl Subshift {
    pub fn new(name: impl Into<String>, alphabet: Vec<String>, dim: usize, forbidden: Vec<Pattern>) -> Result<Self> {
        if alphabet.is_empty() || alphabet.len() > MAX_ALPHABET {
            return Err(Error::input(format!("alphabet size must be in 1..={MAX_ALPHABET}")));
        }
        let distinct: BTreeSet<&String> = alphabet.iter().collect();
        if distinct.len() != alphabet.len() {
            return Err(Error::input("alphabet symbols must be distinct"));
        }
        if dim == 0 || dim > 2 {
            return Err(Error::unsupported(format!("subshifts over Z^{dim}; dimensions 1 and 2 are supported")));
        }
        for p in &forbidden {
            if p.dim() != dim {
                return Err(Error::input("forbidden pattern dimension differs from the subshift"));
            }
            if p.max_symbol() as usize >= alphabet.len() {
                return Err(Error::input("forbidden pattern uses a symbol outside the alphabet"));
            }
        }
        let mut forbidden = forbidden;
        forbidden.sort();
        forbidden.dedup();
        let margin = forbidden.iter().flat_map(|p| p.extent()).max().unwrap_or(0) as usize;
        Ok(Subshift { name: name.into(), alphabet, dim, forbidden, margin })
    }

    pub fn full_shift(k: usize, dim: usize) -> Result<Self> {
        let name = if dim == 1 { format!("full:{k}") } else { format!("full:{k}:d{dim}") };
        Subshift::new(name, (0..k).map(|i| i.to_string()).collect(), dim, Vec::new())
    }

    /// Binary sequences without two consecutive 1s.
    pub fn golden_mean() -> Self {
        Subshift::new("golden-mean", vec!["0".into(), "1".into()], 1, vec![Pattern::word(&[1, 1]).expect("word")]).expect("valid preset")
    }

    /// Binary ℤ² configurations without horizontally or vertically adjacent 1s.
    pub fn hard_square() -> Self {
        let h = Pattern::new(vec![(vec![0, 0], 1), (vec![0, 1], 1)]).expect("pattern");
        let v = Pattern::new(vec![(vec![0, 0], 1), (vec![1, 0], 1)]).expect("pattern");
        let mut s = Subshift::new("hard-square", vec!["0".into(), "1".into()], 2, vec![h, v]).expect("valid preset");
        s.margin = 1;
        s
    }

    /// The one-point system.
    pub fn single_point(dim: usize) -> Self {
        Subshift::new("point", vec!["*".into()], dim, Vec::new()).expect("valid preset")
    }

    /// `X × Y` with symbols `(a, b)` encoded as `a·|B| + b` and written `a|b`.
    pub fn product(a: &Subshift, b: &Subshift) -> Result<Self> {
        if a.dim != b.dim {
            return Err(Error::input("product factors must share the dimension"));
        }
        let kb = b.alphabet.len();
        let size = a.alphabet.len() * kb;
        if size > MAX_ALPHABET {
            return Err(Error::input("product alphabet is too large"));
        }
        let alphabet = a.alphabet.iter().flat_map(|x| b.alphabet.iter().map(move |y| format!("{x}|{y}"))).collect();
        let mut forbidden = Vec::new();
        let lift = |p: &Pattern, other: usize, encode: &dyn Fn(u8, u8) -> u8, out: &mut Vec<Pattern>| -> Result<()> {
            let n = p.cells.len();
            let total = other.checked_pow(n as u32).filter(|t| *t <= 100_000).ok_or_else(|| Error::Budget {
                what: "lifting forbidden patterns to a product".into(),
                required: usize::MAX,
                limit: 100_000,
            })?;
            for code in 0..total {
                let mut rest = code;
                let mut cells = Vec::with_capacity(n);
                for (c, s) in &p.cells {
                    cells.push((c.clone(), encode(*s, (rest % other) as u8)));
                    rest /= other;
                }
                out.push(Pattern::new(cells)?);
            }
            Ok(())
        };
        for p in &a.forbidden {
            lift(p, kb, &|s, o| s * kb as u8 + o, &mut forbidden)?;
        }
        for p in &b.forbidden {
            lift(p, a.alphabet.len(), &|s, o| o * kb as u8 + s, &mut forbidden)?;
        }
        let mut s = Subshift::new(format!("{}x{}", a.name, b.name), alphabet, a.dim, forbidden)?;
        s.margin = a.margin.max(b.margin);
        Ok(s)
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn k(&self) -> usize {
        self.alphabet.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn is_full_shift(&self) -> bool {
        self.forbidden.is_empty()
    }

    /// Same configuration space, ignoring names and margins.
    pub fn same_system(&self, other: &Subshift) -> bool {
        self.alphabet.len() == other.alphabet.len() && self.dim == other.dim && self.forbidden == other.forbidden
    }

    /// Whether a pattern contains no forbidden occurrence lying entirely inside it.
    pub fn locally_admissible(&self, cells: &[(Cell, u8)]) -> bool {
        let lookup: std::collections::HashMap<&Cell, u8> = cells.iter().map(|(c, s)| (c, *s)).collect();
        for p in &self.forbidden {
            let anchor = p.first_cell();
            for (c, _) in cells {
                let t: Vec<i64> = c.iter().zip(anchor).map(|(a, b)| a - b).collect();
                let hit = p.cells.iter().all(|(pc, ps)| {
                    let q: Cell = pc.iter().zip(&t).map(|(a, b)| a + b).collect();
                    lookup.get(&q) == Some(ps)
                });
                if hit {
                    return false;
                }
            }
        }
        true
    }

    /// Whether some forbidden occurrence through `cell` lies inside the assignment.
    pub(crate) fn violates_at(&self, lookup: &std::collections::HashMap<Cell, u8>, cell: &[i64]) -> bool {
        self.forbidden.iter().any(|p| {
            p.cells.iter().any(|(anchor, _)| {
                let t: Vec<i64> = cell.iter().zip(anchor).map(|(a, b)| a - b).collect();
                p.cells.iter().all(|(pc, ps)| {
                    let q: Cell = pc.iter().zip(&t).map(|(a, b)| a + b).collect();
                    lookup.get(&q) == Some(ps)
                })
            })
        })
    }

    pub fn to_spec(&self) -> SubshiftSpec {
        SubshiftSpec {
            name: Some(self.name.clone()),
            alphabet: self.alphabet.clone(),
            dimension: self.dim,
            forbidden: self
                .forbidden
                .iter()
                .map(|p| p.cells.iter().map(|(c, s)| CellSpec { offset: c.clone(), symbol: self.alphabet[*s as usize].clone() }).collect())
                .collect(),
            margin: Some(self.margin),
        }
    }

    pub fn from_spec(spec: &SubshiftSpec) -> Result<Self> {
        let index = |sym: &str| -> Result<u8> {
            spec.alphabet
                .iter()
                .position(|a| a == sym)
                .map(|i| i as u8)
                .ok_or_else(|| Error::input(format!("symbol {sym:?} is not in the alphabet")))
        };
        let mut forbidden = Vec::new();
        for cells in &spec.forbidden {
            let cells = cells.iter().map(|c| Ok((c.offset.clone(), index(&c.symbol)?))).collect::<Result<Vec<_>>>()?;
            forbidden.push(Pattern::new(cells)?);
        }
        let mut s = Subshift::new(spec.name.clone().unwrap_or_else(|| "custom".into()), spec.alphabet.clone(), spec.dimension, forbidden)?;
        if let Some(m) = spec.margin {
            s.margin = m;
        }
        Ok(s)
    }

    /// Presets: `full:<k>`, `full:<k>:d2`, `golden-mean`, `hard-square`, `point`,
    /// `golden-x-full2`.
    pub fn from_preset(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.trim().split(':').collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::input(format!("bad number in subshift preset {name:?}")));
        match parts.as_slice() {
            ["full", k] => Subshift::full_shift(num(k)?, 1),
            ["full", k, "d2"] => Subshift::full_shift(num(k)?, 2),
            ["golden-mean"] => Ok(Subshift::golden_mean()),
            ["hard-square"] => Ok(Subshift::hard_square()),
            ["point"] => Ok(Subshift::single_point(1)),
            ["golden-x-full2"] => Subshift::product(&Subshift::golden_mean(), &Subshift::full_shift(2, 1)?),
            _ => Err(Error::input(format!(
                "unknown subshift preset {name:?}; expected full:<k>, full:<k>:d2, golden-mean, hard-square, point or golden-x-full2"
            ))),
        }
    }

    /// Recoding by blocks `Π {0, …, n_j − 1}`: the result is a subshift over
    /// ℤ^d whose symbols are the locally admissible block patterns, and whose
    /// configurations correspond to configurations of `self` restricted to the
    /// sublattice `Π n_jℤ` acting by shifts.
    pub fn higher_block(&self, block: &[usize]) -> Result<BlockRecoding> {
        if block.len() != self.dim || block.contains(&0) {
            return Err(Error::input("block shape must have one positive size per axis"));
        }
        let shape: Vec<i64> = block.iter().map(|n| *n as i64).collect();
        let cells: Vec<Cell> = box_cells(&vec![0; self.dim], &shape.iter().map(|n| n - 1).collect::<Vec<_>>());
        let k = self.k();
        let total = k.checked_pow(cells.len() as u32).filter(|t| *t <= 1 << 22).ok_or_else(|| Error::Budget {
            what: "block alphabet enumeration".into(),
            required: usize::MAX,
            limit: 1 << 22,
        })?;
        let mut blocks: Vec<Vec<u8>> = Vec::new();
        for code in 0..total {
            let mut rest = code;
            let mut symbols: Vec<u8> = cells
                .iter()
                .map(|_| {
                    let s = (rest % k) as u8;
                    rest /= k;
                    s
                })
                .collect();
            symbols.reverse();
            let pat: Vec<(Cell, u8)> = cells.iter().cloned().zip(symbols.iter().cloned()).collect();
            if self.locally_admissible(&pat) {
                blocks.push(symbols);
            }
        }
        if blocks.len() > MAX_ALPHABET {
            return Err(Error::Budget { what: "block alphabet".into(), required: blocks.len(), limit: MAX_ALPHABET });
        }
        if blocks.is_empty() {
            return Err(Error::input("no admissible block"));
        }
        let cell_index = |c: &Cell| -> usize { cells.iter().position(|x| x == c).expect("cell in block") };
        let mut forbidden = BTreeSet::new();
        for p in &self.forbidden {
            let first = p.first_cell().clone();
            for start in &cells {
                let t: Vec<i64> = start.iter().zip(&first).map(|(a, b)| a - b).collect();
                let placed = p.translate(&t);
                // Group the placed cells by block.
                let mut by_block: std::collections::BTreeMap<Cell, Vec<(usize, u8)>> = Default::default();
                for (c, s) in placed.cells() {
                    let b: Cell = c.iter().zip(&shape).map(|(x, n)| x.div_euclid(*n)).collect();
                    let off: Cell = c.iter().zip(&shape).map(|(x, n)| x.rem_euclid(*n)).collect();
                    by_block.entry(b).or_default().push((cell_index(&off), *s));
                }
                if by_block.len() < 2 {
                    continue;
                }
                let choices: Vec<(Cell, Vec<u8>)> = by_block
                    .iter()
                    .map(|(b, req)| {
                        let ok = blocks
                            .iter()
                            .enumerate()
                            .filter(|(_, sym)| req.iter().all(|(i, s)| sym[*i] == *s))
                            .map(|(j, _)| j as u8)
                            .collect();
                        (b.clone(), ok)
                    })
                    .collect();
                let combos: usize = choices.iter().map(|(_, c)| c.len()).product();
                if combos > 1 << 20 {
                    return Err(Error::Budget { what: "recoded forbidden patterns".into(), required: combos, limit: 1 << 20 });
                }
                for code in 0..combos {
                    let mut rest = code;
                    let mut pcells = Vec::with_capacity(choices.len());
                    for (b, opts) in &choices {
                        pcells.push((b.clone(), opts[rest % opts.len()]));
                        rest /= opts.len();
                    }
                    forbidden.insert(Pattern::new(pcells)?);
                }
            }
        }
        let alphabet = blocks.iter().map(|b| b.iter().map(|s| self.alphabet[*s as usize].as_str()).collect::<Vec<_>>().join("")).collect();
        let name = format!("{}[{}-blocks]", self.name, block.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x"));
        let recoded = Subshift::new(name, alphabet, self.dim, forbidden.into_iter().collect())?;
        Ok(BlockRecoding { recoded, block: block.to_vec(), block_cells: cells, blocks })
    }
}

/// A higher-block presentation of a subshift.
#[derive(Clone, Debug)]
pub struct BlockRecoding {
    pub recoded: Subshift,
    pub block: Vec<usize>,
    pub block_cells: Vec<Cell>,
    /// `blocks[s]` lists the original symbols of recoded symbol `s`, cell by cell.
    pub blocks: Vec<Vec<u8>>,
}

/// All cells of the integer box `Π [lo_j, hi_j]`, lexicographically sorted.
pub fn box_cells(lo: &[i64], hi: &[i64]) -> Vec<Cell> {
    let mut out: Vec<Cell> = vec![Vec::new()];
    for (a, b) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &out {
            for x in *a..=*b {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// The centred box `B_r = {-r, …, r}^dim`.
pub fn ball(dim: usize, r: usize) -> FiniteSet {
    let r = r as i64;
    FiniteSet::int_box(&vec![-r; dim], &vec![r; dim]).expect("valid box")
}

/// One forbidden cell in a subshift spec file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub offset: Vec<i64>,
    pub symbol: String,
}

/// File form of a subshift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubshiftSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub alphabet: Vec<String>,
    pub dimension: usize,
    #[serde(default)]
    pub forbidden: Vec<Vec<CellSpec>>,
    #[serde(default)]
    pub margin: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        assert_eq!(Subshift::from_preset("full:3").unwrap().k(), 3);
        assert_eq!(Subshift::from_preset("golden-mean").unwrap().margin(), 2);
        assert_eq!(Subshift::from_preset("hard-square").unwrap().margin(), 1);
        assert_eq!(Subshift::from_preset("golden-x-full2").unwrap().k(), 4);
        assert!(Subshift::from_preset("nope").is_err());
    }

    #[test]
    fn spec_round_trip() {
        let s = Subshift::hard_square();
        let json = serde_json::to_string(&s.to_spec()).unwrap();
        let back = Subshift::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert!(back.same_system(&s));
        assert!(serde_json::from_str::<SubshiftSpec>(r#"{"alphabet":["0"],"dimension":1,"extra":1}"#).is_err());
    }

    #[test]
    fn golden_two_blocks() {
        let r = Subshift::golden_mean().higher_block(&[2]).unwrap();
        assert_eq!(r.recoded.alphabet(), &["00", "01", "10"]);
        // 01 followed by 10 is the only forbidden transition.
        assert_eq!(r.recoded.forbidden().len(), 1);
    }

    #[test]
    fn product_lifts_constraints() {
        let p = Subshift::product(&Subshift::golden_mean(), &Subshift::full_shift(2, 1).unwrap()).unwrap();
        assert_eq!(p.forbidden().len(), 4);
        assert!(!p.locally_admissible(&[(vec![0], 2), (vec![1], 3)]));
        assert!(p.locally_admissible(&[(vec![0], 1), (vec![1], 3)]));
    }
}
