//! Ornstein-Weiss limit estimates along Van Hove sequences.

use serde::Serialize;

use crate::entropy::function::SubadditiveFunction;
use crate::error::{Error, Result};
use crate::groups::{haar_measure, VanHoveSequence};
use crate::numeric::{format_rational, rational_to_f64};

pub const DEFAULT_TAIL: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OwRow {
    pub index: usize,
    pub measure: String,
    pub f_exact: String,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Constant,
    NonIncreasing,
    NonDecreasing,
    Mixed,
}

/// Trace of `f(A_i)/μ(A_i)` with a tail estimate: the mean of the last
/// `tail_length` values, with half their spread as the band.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OWEstimate {
    pub function: String,
    pub sequence: String,
    pub rows: Vec<OwRow>,
    pub tail: f64,
    pub band: f64,
    pub tail_length: usize,
    pub trend: Trend,
}

impl OWEstimate {
    pub fn from_rows(function: String, sequence: String, rows: Vec<OwRow>, tail_length: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::input("an estimate needs at least one trace value"));
        }
        let k = tail_length.clamp(1, rows.len());
        let window: Vec<f64> = rows[rows.len() - k..].iter().map(|r| r.value).collect();
        let tail = window.iter().sum::<f64>() / k as f64;
        let max = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = window.iter().cloned().fold(f64::INFINITY, f64::min);
        let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
        let up = values.windows(2).all(|w| w[1] >= w[0]);
        let down = values.windows(2).all(|w| w[1] <= w[0]);
        let trend = match (up, down) {
            (true, true) => Trend::Constant,
            (true, false) => Trend::NonDecreasing,
            (false, true) => Trend::NonIncreasing,
            (false, false) => Trend::Mixed,
        };
        Ok(OWEstimate { function, sequence, rows, tail, band: (max - min) / 2.0, tail_length: k, trend })
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    /// Divides every value by `c`, for unit changes.
    pub fn scaled(&self, c: f64) -> OWEstimate {
        let mut out = self.clone();
        for r in &mut out.rows {
            r.value /= c;
        }
        out.tail /= c;
        out.band /= c;
        out
    }
}

fn at_index(e: Error, i: usize) -> Error {
    match e {
        Error::Budget { what, required, limit } => Error::Budget { what: format!("{what} at index {i}"), required, limit },
        Error::InvalidInput(m) => Error::InvalidInput(format!("at index {i}: {m}")),
        Error::Unsupported(m) => Error::Unsupported(format!("at index {i}: {m}")),
        Error::Precision(m) => Error::Precision(format!("at index {i}: {m}")),
        Error::Overflow(m) => Error::Overflow(format!("at index {i}: {m}")),
        other => other,
    }
}

/// `f(A_i)/μ(A_i)` for `i = 1..=i_max`.
pub fn ow_limit(f: &SubadditiveFunction, seq: &VanHoveSequence, i_max: usize, tail_length: usize) -> Result<OWEstimate> {
    if i_max == 0 {
        return Err(Error::input("i_max must be positive"));
    }
    if seq.group() != f.group() {
        return Err(Error::input(format!("{} lives on {}, the sequence on {}", f.label(), f.group(), seq.group())));
    }
    let mut rows = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let row = (|| -> Result<OwRow> {
            let a = seq.region(i)?;
            let m = haar_measure(&a)?;
            if m <= crate::numeric::int(0) {
                return Err(Error::input("A_i has measure zero"));
            }
            let e = f.evaluate(&a)?;
            Ok(OwRow { index: i, measure: format_rational(&m), f_exact: e.exact, value: e.value / rational_to_f64(&m) })
        })()
        .map_err(|e| at_index(e, i))?;
        rows.push(row);
    }
    OWEstimate::from_rows(f.label().to_string(), seq.label().to_string(), rows, tail_length)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrosscheckReport {
    pub a: OWEstimate,
    pub b: OWEstimate,
    pub delta: f64,
    pub allowance: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares the tails along two sequences: pass iff `|Δ| ≤ tolerance + band_a + band_b`.
pub fn ow_crosscheck(
    f: &SubadditiveFunction,
    seq_a: &VanHoveSequence,
    seq_b: &VanHoveSequence,
    i_max: usize,
    tolerance: f64,
    tail_length: usize,
) -> Result<CrosscheckReport> {
    let a = ow_limit(f, seq_a, i_max, tail_length)?;
    let b = ow_limit(f, seq_b, i_max, tail_length)?;
    let delta = (a.tail - b.tail).abs();
    let allowance = tolerance + a.band + b.band;
    Ok(CrosscheckReport { passed: delta <= allowance, delta, allowance, tolerance, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{CountOptions, Subshift};
    use crate::groups::{CompactRegion, GroupDescriptor, RationalBox};
    use crate::numeric::int;

    #[test]
    fn full_shift_trace_is_exact() {
        let f = SubadditiveFunction::log_pattern_count(&Subshift::full_shift(2, 1).unwrap(), 0, CountOptions::default()).unwrap();
        let est = ow_limit(&f, &VanHoveSequence::int_intervals(1), 12, DEFAULT_TAIL).unwrap();
        for r in &est.rows {
            assert!((r.value - 2f64.ln()).abs() < 1e-12);
        }
        assert!(est.band < 1e-12);
    }

    #[test]
    fn dilation_trace_matches_closed_form() {
        let g = GroupDescriptor::real(1);
        let f = SubadditiveFunction::dilation_volume(g, CompactRegion::Box(RationalBox::centered(1, int(1)))).unwrap();
        let est = ow_limit(&f, &VanHoveSequence::real_boxes(1, int(1)), 10, DEFAULT_TAIL).unwrap();
        for r in &est.rows {
            let n = r.index as f64;
            assert!((r.value - (2.0 * n + 2.0) / (2.0 * n)).abs() < 1e-12);
        }
        assert_eq!(est.trend, Trend::NonIncreasing);
        let lin = SubadditiveFunction::linear(GroupDescriptor::real(1), int(3)).unwrap();
        let est = ow_limit(&lin, &VanHoveSequence::real_boxes(1, int(1)), 5, DEFAULT_TAIL).unwrap();
        assert_eq!(est.trend, Trend::Constant);
        assert_eq!(est.tail, 3.0);
    }

    #[test]
    fn errors_name_the_index() {
        let f = SubadditiveFunction::log_pattern_count(&Subshift::hard_square(), 0, CountOptions { margin: None, budget: 400 }).unwrap();
        let err = ow_limit(&f, &VanHoveSequence::int_cubes(2, 1), 8, DEFAULT_TAIL).unwrap_err();
        assert!(err.is_budget());
        assert!(err.to_string().contains("at index"), "{err}");
    }
}
