//! Exact pattern counting by a row-major sweep over a finite window of ℤ^d.
//!
//! The sweep keeps, for every class of partial assignments, the set of
//! possible "recent" states (symbols still needed by a later constraint).
//! Counted cells split classes, existential (margin) cells merge them.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::dynamics::subshift::{Cell, Subshift};
use crate::error::{Error, Result};

const ABSENT: u8 = u8::MAX;

type State = Box<[u8]>;
type StateSet = Vec<State>;
type Frontier = BTreeMap<StateSet, BigUint>;

/// A local rule evaluated on a fixed neighbourhood, as a lookup table.
pub(crate) struct RuleTable<'a> {
    pub k: usize,
    pub table: &'a [u8],
    pub target_k: usize,
}

pub(crate) struct Plan {
    k: usize,
    width: usize,
    lin: Vec<i64>,
    counted: Vec<bool>,
    checks: Vec<Vec<Vec<(usize, u8)>>>,
    outputs: Vec<Vec<Vec<usize>>>,
    expire: Vec<Vec<usize>>,
}

/// Row-major linear coordinates for cells of a bounded window.
struct Geometry {
    lo: Vec<i64>,
    strides: Vec<i64>,
}

impl Geometry {
    fn new(cells: &[Cell]) -> Geometry {
        let dim = cells[0].len();
        let lo: Vec<i64> = (0..dim).map(|j| cells.iter().map(|c| c[j]).min().expect("non-empty")).collect();
        let hi: Vec<i64> = (0..dim).map(|j| cells.iter().map(|c| c[j]).max().expect("non-empty")).collect();
        let mut strides = vec![1i64; dim];
        for j in (0..dim.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * (hi[j + 1] - lo[j + 1] + 1);
        }
        Geometry { lo, strides }
    }

    fn lin(&self, c: &[i64]) -> i64 {
        c.iter().zip(&self.lo).zip(&self.strides).map(|((x, l), s)| (x - l) * s).sum()
    }
}

impl Plan {
    /// `window` holds every cell the sweep visits; `counted` marks the ones whose
    /// symbols are being counted. `outputs` lists neighbourhood placements whose
    /// image symbol is constrained, each given as its cells in rule order.
    pub(crate) fn new(s: &Subshift, window: &[Cell], counted: &HashSet<Cell>, outputs: &[Vec<Cell>]) -> Result<Plan> {
        if window.is_empty() {
            return Ok(Plan {
                k: s.k(),
                width: 1,
                lin: Vec::new(),
                counted: Vec::new(),
                checks: Vec::new(),
                outputs: Vec::new(),
                expire: Vec::new(),
            });
        }
        let geo = Geometry::new(window);
        let mut cells: Vec<(i64, Cell)> = window.iter().map(|c| (geo.lin(c), c.clone())).collect();
        cells.sort();
        cells.dedup();
        let index: HashMap<&Cell, usize> = cells.iter().enumerate().map(|(i, (_, c))| (c, i)).collect();
        let n = cells.len();
        let lin: Vec<i64> = cells.iter().map(|(l, _)| *l).collect();
        let mut last_use: Vec<usize> = (0..n).collect();
        let mut checks = vec![Vec::new(); n];
        let mut width = 1usize;
        for (i, (l, c)) in cells.iter().enumerate() {
            for p in s.forbidden() {
                let last = p.last_cell();
                let t: Vec<i64> = c.iter().zip(last).map(|(a, b)| a - b).collect();
                let mut placed = Vec::with_capacity(p.cells().len());
                let mut inside = true;
                for (pc, sym) in p.cells() {
                    let q: Cell = pc.iter().zip(&t).map(|(a, b)| a + b).collect();
                    match index.get(&q) {
                        Some(j) => placed.push((*j, *sym)),
                        None => {
                            inside = false;
                            break;
                        }
                    }
                }
                if !inside {
                    continue;
                }
                let check: Vec<(usize, u8)> = placed
                    .iter()
                    .map(|(j, sym)| {
                        last_use[*j] = last_use[*j].max(i);
                        ((l - lin[*j]) as usize, *sym)
                    })
                    .collect();
                width = width.max(check.iter().map(|(b, _)| b + 1).max().unwrap_or(1));
                checks[i].push(check);
            }
        }
        let mut outs = vec![Vec::new(); n];
        for site in outputs {
            let idx = site
                .iter()
                .map(|c| index.get(c).copied().ok_or_else(|| Error::input("output neighbourhood leaves the window")))
                .collect::<Result<Vec<usize>>>()?;
            let at = *idx.iter().max().expect("non-empty neighbourhood");
            let backs: Vec<usize> = idx
                .iter()
                .map(|j| {
                    last_use[*j] = last_use[*j].max(at);
                    (lin[at] - lin[*j]) as usize
                })
                .collect();
            width = width.max(backs.iter().max().map(|b| b + 1).unwrap_or(1));
            outs[at].push(backs);
        }
        let mut expire = vec![Vec::new(); n];
        for (j, u) in last_use.iter().enumerate() {
            expire[*u].push((lin[*u] - lin[j]) as usize);
        }
        if width > 1 << 16 {
            return Err(Error::Budget { what: "sweep state width".into(), required: width, limit: 1 << 16 });
        }
        Ok(Plan { k: s.k(), width, counted: cells.iter().map(|(_, c)| counted.contains(c)).collect(), lin, checks, outputs: outs, expire })
    }

    fn initial(&self) -> Frontier {
        let mut f = Frontier::new();
        f.insert(vec![vec![ABSENT; self.width].into_boxed_slice()], BigUint::one());
        f
    }

    fn shifted(&self, state: &[u8], gap: usize, symbol: u8) -> State {
        let w = self.width;
        let mut next = vec![ABSENT; w];
        if gap < w {
            next[..w - gap].copy_from_slice(&state[gap..]);
        }
        next[w - 1] = symbol;
        next.into_boxed_slice()
    }

    fn admissible(&self, state: &[u8], i: usize) -> bool {
        let w = self.width;
        !self.checks[i].iter().any(|check| check.iter().all(|(b, sym)| state[w - 1 - b] == *sym))
    }

    fn step(&self, f: Frontier, i: usize) -> Frontier {
        let gap = if i == 0 { self.width } else { (self.lin[i] - self.lin[i - 1]) as usize };
        let mut out = Frontier::new();
        for (set, count) in f {
            if self.counted[i] {
                for a in 0..self.k as u8 {
                    let next = normalize(set.iter().map(|s| self.shifted(s, gap, a)).filter(|s| self.admissible(s, i)).collect());
                    if !next.is_empty() {
                        *out.entry(next).or_default() += &count;
                    }
                }
            } else {
                let next = normalize(
                    set.iter()
                        .flat_map(|s| (0..self.k as u8).map(move |a| (s, a)))
                        .map(|(s, a)| self.shifted(s, gap, a))
                        .filter(|s| self.admissible(s, i))
                        .collect(),
                );
                if !next.is_empty() {
                    *out.entry(next).or_default() += count;
                }
            }
        }
        out
    }

    fn expire(&self, f: Frontier, i: usize) -> Frontier {
        if self.expire[i].is_empty() {
            return f;
        }
        let w = self.width;
        let mut out = Frontier::new();
        for (set, count) in f {
            let next = normalize(
                set.into_iter()
                    .map(|mut s| {
                        for b in &self.expire[i] {
                            s[w - 1 - b] = ABSENT;
                        }
                        s
                    })
                    .collect(),
            );
            *out.entry(next).or_default() += count;
        }
        out
    }

    fn image(&self, state: &[u8], backs: &[usize], rule: &RuleTable<'_>) -> u8 {
        let w = self.width;
        let mut idx = 0usize;
        for b in backs.iter().rev() {
            let sym = state[w - 1 - b];
            debug_assert_ne!(sym, ABSENT);
            idx = idx * rule.k + sym as usize;
        }
        rule.table[idx]
    }

    fn filter(&self, f: &Frontier, backs: &[usize], rule: &RuleTable<'_>, b: u8) -> Frontier {
        let mut out = Frontier::new();
        for (set, count) in f {
            let kept: StateSet = set.iter().filter(|s| self.image(s, backs, rule) == b).cloned().collect();
            if !kept.is_empty() {
                *out.entry(kept).or_default() += count;
            }
        }
        out
    }

    fn check_budget(&self, f: &Frontier, budget: usize) -> Result<()> {
        let states: usize = f.keys().map(|s| s.len()).sum();
        if states > budget {
            return Err(Error::Budget { what: "pattern-count sweep states".into(), required: states, limit: budget });
        }
        Ok(())
    }

    /// Number of assignments to the counted cells that extend to the whole window.
    pub(crate) fn count(&self, budget: usize) -> Result<BigUint> {
        let mut f = self.initial();
        for i in 0..self.lin.len() {
            f = self.expire(self.step(f, i), i);
            self.check_budget(&f, budget)?;
        }
        Ok(f.values().sum())
    }

    /// Largest number of counted assignments sharing one image on the output sites.
    pub(crate) fn max_fiber(&self, rule: &RuleTable<'_>, budget: usize) -> Result<BigUint> {
        let mut memo = HashMap::new();
        self.solve(0, self.initial(), rule, budget, &mut memo)
    }

    fn solve(
        &self,
        i: usize,
        f: Frontier,
        rule: &RuleTable<'_>,
        budget: usize,
        memo: &mut HashMap<(usize, Frontier), BigUint>,
    ) -> Result<BigUint> {
        if f.is_empty() {
            return Ok(BigUint::zero());
        }
        if i == self.lin.len() {
            return Ok(f.values().sum());
        }
        let g = f.values().fold(BigUint::zero(), |g, c| g.gcd(c));
        let f: Frontier = f.into_iter().map(|(s, c)| (s, c / &g)).collect();
        let key = (i, f);
        if let Some(v) = memo.get(&key) {
            return Ok(v * &g);
        }
        let stepped = self.step(key.1.clone(), i);
        self.check_budget(&stepped, budget)?;
        let v = self.branch(i, stepped, 0, rule, budget, memo)?;
        if memo.len() >= budget {
            return Err(Error::Budget { what: "fiber search memo".into(), required: memo.len() + 1, limit: budget });
        }
        memo.insert(key, v.clone());
        Ok(v * g)
    }

    fn branch(
        &self,
        i: usize,
        f: Frontier,
        j: usize,
        rule: &RuleTable<'_>,
        budget: usize,
        memo: &mut HashMap<(usize, Frontier), BigUint>,
    ) -> Result<BigUint> {
        if j == self.outputs[i].len() {
            return self.solve(i + 1, self.expire(f, i), rule, budget, memo);
        }
        let mut best = BigUint::zero();
        for b in 0..rule.target_k as u8 {
            let sub = self.filter(&f, &self.outputs[i][j], rule, b);
            if sub.is_empty() {
                continue;
            }
            best = best.max(self.branch(i, sub, j + 1, rule, budget, memo)?);
        }
        Ok(best)
    }

    /// Number of distinct images on the output sites of assignments admissible on the window.
    pub(crate) fn image_count(&self, rule: &RuleTable<'_>, budget: usize) -> Result<BigUint> {
        let mut f = self.initial();
        for i in 0..self.lin.len() {
            f = self.step(f, i);
            for backs in &self.outputs[i] {
                let mut next = Frontier::new();
                for b in 0..rule.target_k as u8 {
                    for (s, c) in self.filter(&f, backs, rule, b) {
                        *next.entry(s).or_default() += c;
                    }
                }
                f = next;
            }
            f = self.expire(f, i);
            self.check_budget(&f, budget)?;
        }
        Ok(f.values().sum())
    }
}

fn normalize(mut set: StateSet) -> StateSet {
    set.sort_unstable();
    set.dedup();
    set
}
