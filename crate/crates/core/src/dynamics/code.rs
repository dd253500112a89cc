//! Sliding block codes between subshifts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::subshift::{Cell, Subshift, SubshiftSpec};
use crate::error::{Error, Result};

const UNDEFINED: u8 = u8::MAX;
const TABLE_LIMIT: usize = 1 << 20;

/// A shift-commuting map `x ↦ (t ↦ rule(x|_{t+N}))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlidingBlockCode {
    name: String,
    source: Subshift,
    target: Subshift,
    neighborhood: Vec<Cell>,
    /// Indexed by `Σ_j x_{n_j} · k^j` over the neighbourhood order.
    table: Vec<u8>,
}

fn table_size(k: usize, n: usize) -> Result<usize> {
    k.checked_pow(n as u32).filter(|t| *t <= TABLE_LIMIT).ok_or_else(|| Error::Budget {
        what: "rule table".into(),
        required: usize::MAX,
        limit: TABLE_LIMIT,
    })
}

fn decode(mut idx: usize, k: usize, n: usize) -> Vec<u8> {
    (0..n)
        .map(|_| {
            let s = (idx % k) as u8;
            idx /= k;
            s
        })
        .collect()
}

impl SlidingBlockCode {
    /// Builds the rule table from a function of the neighbourhood symbols.
    pub fn new(
        name: impl Into<String>,
        source: Subshift,
        target: Subshift,
        neighborhood: Vec<Cell>,
        rule: impl Fn(&[u8]) -> Option<u8>,
    ) -> Result<Self> {
        if neighborhood.is_empty() || neighborhood.iter().any(|n| n.len() != source.dim()) {
            return Err(Error::input("neighbourhood must be a non-empty list of cells of the source dimension"));
        }
        if source.dim() != target.dim() {
            return Err(Error::input("source and target dimensions differ"));
        }
        let size = table_size(source.k(), neighborhood.len())?;
        let mut table = Vec::with_capacity(size);
        for idx in 0..size {
            let window = decode(idx, source.k(), neighborhood.len());
            table.push(match rule(&window) {
                Some(b) if (b as usize) < target.k() => b,
                Some(b) => return Err(Error::input(format!("rule image {b} is outside the target alphabet"))),
                None => UNDEFINED,
            });
        }
        let code = SlidingBlockCode { name: name.into(), source, target, neighborhood, table };
        code.check_total()?;
        Ok(code)
    }

    fn check_total(&self) -> Result<()> {
        for (idx, b) in self.table.iter().enumerate() {
            if *b != UNDEFINED {
                continue;
            }
            let window = decode(idx, self.source.k(), self.neighborhood.len());
            let pat: Vec<(Cell, u8)> = self.neighborhood.iter().cloned().zip(window.iter().cloned()).collect();
            if self.source.locally_admissible(&pat) {
                let shown: Vec<&str> = window.iter().map(|s| self.source.alphabet()[*s as usize].as_str()).collect();
                return Err(Error::input(format!("rule is undefined on the admissible window {shown:?}")));
            }
        }
        Ok(())
    }

    /// A one-site code given by `map[a]` for each source symbol `a`.
    pub fn symbol_map(name: impl Into<String>, source: Subshift, target: Subshift, map: &[u8]) -> Result<Self> {
        if map.len() != source.k() {
            return Err(Error::input("symbol map must list one image per source symbol"));
        }
        let dim = source.dim();
        SlidingBlockCode::new(name, source, target, vec![vec![0; dim]], |w| Some(map[w[0] as usize]))
    }

    pub fn identity(s: &Subshift) -> Self {
        let map: Vec<u8> = (0..s.k() as u8).collect();
        SlidingBlockCode::symbol_map(format!("identity:{}", s.name()), s.clone(), s.clone(), &map).expect("valid code")
    }

    pub fn to_point(s: &Subshift) -> Self {
        SlidingBlockCode::symbol_map(format!("to-point:{}", s.name()), s.clone(), Subshift::single_point(s.dim()), &vec![0; s.k()])
            .expect("valid code")
    }

    /// Full 4-shift onto the full 2-shift by `0,1 ↦ 0` and `2,3 ↦ 1`.
    pub fn four_to_two() -> Self {
        let four = Subshift::full_shift(4, 1).expect("preset");
        let two = Subshift::full_shift(2, 1).expect("preset");
        SlidingBlockCode::symbol_map("four-to-two", four, two, &[0, 0, 1, 1]).expect("valid code")
    }

    /// Golden mean × full 2-shift onto the golden mean factor.
    pub fn golden_projection() -> Self {
        let source = Subshift::from_preset("golden-x-full2").expect("preset");
        SlidingBlockCode::symbol_map("golden-x2-proj", source, Subshift::golden_mean(), &[0, 0, 1, 1]).expect("valid code")
    }

    /// Presets: `four-to-two`, `golden-x2-proj`, `identity:<subshift>`, `to-point:<subshift>`.
    pub fn from_preset(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(rest) = name.strip_prefix("identity:") {
            return Ok(SlidingBlockCode::identity(&Subshift::from_preset(rest)?));
        }
        if let Some(rest) = name.strip_prefix("to-point:") {
            return Ok(SlidingBlockCode::to_point(&Subshift::from_preset(rest)?));
        }
        match name {
            "four-to-two" => Ok(SlidingBlockCode::four_to_two()),
            "golden-x2-proj" => Ok(SlidingBlockCode::golden_projection()),
            _ => Err(Error::input(format!(
                "unknown code preset {name:?}; expected four-to-two, golden-x2-proj, identity:<subshift> or to-point:<subshift>"
            ))),
        }
    }

    /// `q ∘ p`: first apply `self`, then `q`.
    pub fn then(&self, q: &SlidingBlockCode) -> Result<Self> {
        if !self.target.same_system(&q.source) {
            return Err(Error::input(format!("codes are not composable: {} does not feed {}", self.name, q.name)));
        }
        let mut cells: Vec<Cell> = q
            .neighborhood
            .iter()
            .flat_map(|a| self.neighborhood.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        cells.sort();
        cells.dedup();
        let pos = |c: &Cell| cells.iter().position(|x| x == c).expect("cell in composite neighbourhood");
        let layout: Vec<Vec<usize>> = q
            .neighborhood
            .iter()
            .map(|a| self.neighborhood.iter().map(|b| pos(&a.iter().zip(b).map(|(x, y)| x + y).collect())).collect())
            .collect();
        SlidingBlockCode::new(format!("{}>{}", self.name, q.name), self.source.clone(), q.target.clone(), cells.clone(), |w| {
            let mid: Option<Vec<u8>> = layout
                .iter()
                .map(|idx| {
                    let inner: Vec<u8> = idx.iter().map(|i| w[*i]).collect();
                    self.apply(&inner)
                })
                .collect();
            q.apply(&mid?)
        })
    }

    /// The image of one neighbourhood window, if the rule is defined there.
    pub fn apply(&self, window: &[u8]) -> Option<u8> {
        let k = self.source.k();
        let idx = window.iter().rev().fold(0usize, |acc, s| acc * k + *s as usize);
        let b = self.table[idx];
        (b != UNDEFINED).then_some(b)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Subshift {
        &self.source
    }

    pub fn target(&self) -> &Subshift {
        &self.target
    }

    pub fn neighborhood(&self) -> &[Cell] {
        &self.neighborhood
    }

    pub(crate) fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        let source = spec.source.resolve()?;
        let target = spec.target.resolve()?;
        let index = |s: &Subshift, sym: &str| -> Result<u8> {
            s.alphabet()
                .iter()
                .position(|a| a == sym)
                .map(|i| i as u8)
                .ok_or_else(|| Error::input(format!("symbol {sym:?} is not in the alphabet of {}", s.name())))
        };
        let mut rule: BTreeMap<Vec<u8>, u8> = BTreeMap::new();
        for entry in &spec.rule {
            if entry.window.len() != spec.neighborhood.len() {
                return Err(Error::input("rule window length differs from the neighbourhood size"));
            }
            let w = entry.window.iter().map(|s| index(&source, s)).collect::<Result<Vec<u8>>>()?;
            let b = index(&target, &entry.image)?;
            if rule.insert(w, b).is_some_and(|old| old != b) {
                return Err(Error::input("rule table assigns two images to one window"));
            }
        }
        SlidingBlockCode::new(spec.name.clone().unwrap_or_else(|| "custom".into()), source, target, spec.neighborhood.clone(), |w| {
            rule.get(w).copied()
        })
    }
}

/// A subshift given inline or by preset name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubshiftRef {
    Preset(String),
    Spec(SubshiftSpec),
}

impl SubshiftRef {
    pub fn resolve(&self) -> Result<Subshift> {
        match self {
            SubshiftRef::Preset(name) => Subshift::from_preset(name),
            SubshiftRef::Spec(spec) => Subshift::from_spec(spec),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleEntry {
    pub window: Vec<String>,
    pub image: String,
}

/// File form of a sliding block code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub source: SubshiftRef,
    pub target: SubshiftRef,
    pub neighborhood: Vec<Vec<i64>>,
    pub rule: Vec<RuleEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_of_symbol_maps() {
        let p = SlidingBlockCode::four_to_two();
        let q = SlidingBlockCode::to_point(p.target());
        let pq = p.then(&q).unwrap();
        assert_eq!(pq.target().k(), 1);
        assert_eq!(pq.apply(&[3]), Some(0));
        assert!(q.then(&p).is_err());
    }

    #[test]
    fn block_rules_compose() {
        let two = Subshift::full_shift(2, 1).unwrap();
        let xor = SlidingBlockCode::new("xor", two.clone(), two.clone(), vec![vec![0], vec![1]], |w| Some(w[0] ^ w[1])).unwrap();
        let twice = xor.then(&xor).unwrap();
        assert_eq!(twice.neighborhood().len(), 3);
        // x0 ^ x2 after two rounds.
        assert_eq!(twice.apply(&[1, 1, 0]), Some(1));
        assert_eq!(twice.apply(&[1, 0, 1]), Some(0));
    }

    #[test]
    fn spec_requires_total_rules() {
        let json = r#"{"source":"golden-mean","target":"full:2","neighborhood":[[0],[1]],
            "rule":[{"window":["0","0"],"image":"0"},{"window":["0","1"],"image":"1"},{"window":["1","0"],"image":"1"}]}"#;
        let spec: CodeSpec = serde_json::from_str(json).unwrap();
        let code = SlidingBlockCode::from_spec(&spec).unwrap();
        assert_eq!(code.apply(&[1, 1]), None);
        let partial = r#"{"source":"full:2","target":"full:2","neighborhood":[[0]],"rule":[{"window":["0"],"image":"0"}]}"#;
        let spec: CodeSpec = serde_json::from_str(partial).unwrap();
        assert!(SlidingBlockCode::from_spec(&spec).is_err());
    }
}
