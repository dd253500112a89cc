//! Transfer matrices of one-dimensional subshifts of finite type.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dynamics::subshift::{Cell, Subshift};
use crate::error::{Error, Result};

const STATE_LIMIT: usize = 4096;

/// Words of length `L − 1` as states, where `L` is the longest forbidden
/// extent; an edge joins two overlapping states whose union is admissible.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    order: usize,
    states: Vec<Vec<u8>>,
    edges: Vec<Vec<usize>>,
    /// Admissible words shorter than the state length, by length.
    short_counts: Vec<u64>,
}

fn as_pattern(word: &[u8]) -> Vec<(Cell, u8)> {
    word.iter().enumerate().map(|(i, s)| (vec![i as i64], *s)).collect()
}

fn words(s: &Subshift, len: usize) -> Result<Vec<Vec<u8>>> {
    let mut out: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for a in 0..s.k() as u8 {
                let mut v = w.clone();
                v.push(a);
                if s.locally_admissible(&as_pattern(&v)) {
                    next.push(v);
                }
            }
        }
        if next.len() > STATE_LIMIT {
            return Err(Error::Budget { what: "transfer matrix states".into(), required: next.len(), limit: STATE_LIMIT });
        }
        out = next;
    }
    Ok(out)
}

impl TransferMatrix {
    pub fn new(s: &Subshift) -> Result<Self> {
        if s.dim() != 1 {
            return Err(Error::unsupported("transfer matrices are built for one-dimensional subshifts"));
        }
        let order = s.forbidden().iter().map(|p| p.extent()[0] as usize).max().unwrap_or(1).max(1);
        let short_counts = (0..order).map(|l| words(s, l).map(|w| w.len() as u64)).collect::<Result<Vec<_>>>()?;
        let states = words(s, order - 1)?;
        let index: std::collections::HashMap<&[u8], usize> = states.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let mut edges = vec![Vec::new(); states.len()];
        for (i, w) in states.iter().enumerate() {
            for a in 0..s.k() as u8 {
                let mut v = w.clone();
                v.push(a);
                if !s.locally_admissible(&as_pattern(&v)) {
                    continue;
                }
                if let Some(j) = index.get(&v[1..]) {
                    edges[i].push(*j);
                }
            }
        }
        Ok(TransferMatrix { order, states, edges, short_counts })
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    /// Number of locally admissible words of length `n`.
    pub fn count(&self, n: usize) -> BigUint {
        if n < self.order {
            return BigUint::from(self.short_counts[n]);
        }
        let mut v = vec![BigUint::one(); self.states.len()];
        for _ in 0..n - (self.order - 1) {
            let mut next = vec![BigUint::zero(); v.len()];
            for (i, targets) in self.edges.iter().enumerate() {
                for j in targets {
                    next[*j] += &v[i];
                }
            }
            v = next;
        }
        v.into_iter().sum()
    }

    /// Perron root, by power iteration on `A + I` so that periodic matrices converge.
    pub fn spectral_radius(&self) -> f64 {
        let n = self.states.len();
        let mut v = vec![1.0f64; n];
        let mut lambda = 0.0;
        for _ in 0..200_000 {
            let mut next = v.clone();
            for (i, targets) in self.edges.iter().enumerate() {
                for j in targets {
                    next[*j] += v[i];
                }
            }
            let norm = next.iter().cloned().fold(0.0, f64::max);
            if norm == 0.0 {
                return 0.0;
            }
            for x in &mut next {
                *x /= norm;
            }
            let delta = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = next;
            let done = (norm - lambda).abs() < 1e-15 && delta < 1e-14;
            lambda = norm;
            if done {
                break;
            }
        }
        lambda - 1.0
    }

    /// `log ρ(A)`, the entropy of the subshift.
    pub fn entropy(&self) -> f64 {
        let rho = self.spectral_radius();
        if rho <= 0.0 {
            0.0
        } else {
            rho.ln()
        }
    }
}
