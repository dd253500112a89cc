//! Minimum-cardinality set cover: greedy upper bound, then branch and bound.

use crate::util::bitset::BitSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    pub chosen: Vec<usize>,
    /// False when the node budget ran out and `chosen` is only the best cover found.
    pub exact: bool,
}

/// Greedy cover with lowest-index tie-breaking; `None` if some element is uncoverable.
pub fn greedy_cover(universe: &BitSet, sets: &[BitSet]) -> Option<Vec<usize>> {
    let mut left = universe.clone();
    let mut chosen = Vec::new();
    while !left.is_empty() {
        let (best, gain) =
            sets.iter()
                .enumerate()
                .map(|(i, s)| (i, s.intersection_count(&left)))
                .fold((usize::MAX, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if gain == 0 {
            return None;
        }
        chosen.push(best);
        left = left.difference(&sets[best]);
    }
    Some(chosen)
}

pub fn min_cover(universe: &BitSet, sets: &[BitSet], node_budget: usize) -> Option<CoverSolution> {
    let greedy = greedy_cover(universe, sets)?;
    let mut search = Search { sets, best: greedy, nodes: 0, budget: node_budget, exhausted: false };
    let mut chosen = Vec::new();
    search.go(universe.clone(), &mut chosen);
    let mut best = search.best;
    best.sort();
    Some(CoverSolution { chosen: best, exact: !search.exhausted })
}

struct Search<'a> {
    sets: &'a [BitSet],
    best: Vec<usize>,
    nodes: usize,
    budget: usize,
    exhausted: bool,
}

impl Search<'_> {
    fn go(&mut self, left: BitSet, chosen: &mut Vec<usize>) {
        if left.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let max_gain = self.sets.iter().map(|s| s.intersection_count(&left)).max().unwrap_or(0);
        if max_gain == 0 {
            return;
        }
        let lower = chosen.len() + left.count().div_ceil(max_gain);
        if lower >= self.best.len() {
            return;
        }
        // Branch on the element with the fewest covering sets.
        let pivot = left.iter().min_by_key(|e| self.sets.iter().filter(|s| s.contains(*e)).count()).expect("non-empty");
        let mut options: Vec<usize> = (0..self.sets.len()).filter(|i| self.sets[*i].contains(pivot)).collect();
        options.sort_by_key(|i| std::cmp::Reverse(self.sets[*i].intersection_count(&left)));
        for i in options {
            chosen.push(i);
            self.go(left.difference(&self.sets[i]), chosen);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(len: usize, items: &[usize]) -> BitSet {
        let mut s = BitSet::new(len);
        for i in items {
            s.insert(*i);
        }
        s
    }

    #[test]
    fn exact_beats_greedy() {
        // Greedy takes the big middle set first and needs three sets; two suffice.
        let u = BitSet::full(6);
        let sets = vec![set(6, &[0, 1, 2]), set(6, &[3, 4, 5]), set(6, &[1, 2, 3, 4]), set(6, &[0]), set(6, &[5])];
        let g = greedy_cover(&u, &sets).unwrap();
        assert_eq!(g.len(), 3);
        let e = min_cover(&u, &sets, 10_000).unwrap();
        assert_eq!(e.chosen, vec![0, 1]);
        assert!(e.exact);
    }

    #[test]
    fn uncoverable() {
        let u = BitSet::full(3);
        assert!(min_cover(&u, &[set(3, &[0, 1])], 100).is_none());
    }
}
