//! Turning option strings and files into library objects.

use std::path::Path;

use serde::de::DeserializeOwned;

use owent::cps::LatticePreset;
use owent::dynamics::{CodeSpec, CountOptions, FiniteMetricSpace, SlidingBlockCode, Subshift, SubshiftSpec, DEFAULT_BUDGET};
use owent::entropy::SubadditiveFunction;
use owent::groups::{FiniteSet, GroupDescriptor};
use owent::numeric::{int, parse_rational, Rational};
use owent::presets::{parse_group, parse_kernel};

use crate::CliError;

/// Reads a JSON file, or TOML when the extension is `.toml`.
pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| e.to_string())
    } else {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn subshift(preset: Option<&str>, spec: Option<&Path>, default: &str) -> Result<Subshift, CliError> {
    match (preset, spec) {
        (Some(_), Some(_)) => Err(CliError::input("give either a preset or a spec file, not both")),
        (_, Some(path)) => Ok(Subshift::from_spec(&read_document::<SubshiftSpec>(path)?)?),
        (p, None) => Ok(Subshift::from_preset(p.unwrap_or(default))?),
    }
}

pub fn code(preset: Option<&str>, spec: Option<&Path>, default: &str) -> Result<SlidingBlockCode, CliError> {
    match (preset, spec) {
        (Some(_), Some(_)) => Err(CliError::input("give either a preset or a spec file, not both")),
        (_, Some(path)) => Ok(SlidingBlockCode::from_spec(&read_document::<CodeSpec>(path)?)?),
        (p, None) => Ok(SlidingBlockCode::from_preset(p.unwrap_or(default))?),
    }
}

pub fn count_options(budget: Option<usize>) -> CountOptions {
    CountOptions { margin: None, budget: budget.unwrap_or(DEFAULT_BUDGET) }
}

pub fn scales(text: Option<&str>) -> Result<Vec<usize>, CliError> {
    let Some(text) = text else { return Ok(vec![0, 1, 2]) };
    text.split(',').map(|s| s.trim().parse::<usize>().map_err(|_| CliError::input(format!("bad scale radius {s:?}")))).collect()
}

pub fn int_list(text: &str) -> Result<FiniteSet, CliError> {
    let pts = text
        .split(',')
        .map(|s| s.trim().parse::<i64>().map(|v| vec![v]).map_err(|_| CliError::input(format!("bad integer {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteSet::from_ints(1, &pts)?)
}

pub fn rationals(text: &str) -> Result<Vec<Rational>, CliError> {
    Ok(text.split(',').map(|s| parse_rational(s.trim())).collect::<owent::Result<Vec<_>>>()?)
}

/// `scaled:<dim>:<s>`, `sublattice:<n1,...>` or `h3`.
pub fn lattice(text: &str) -> Result<LatticePreset, CliError> {
    let bad = || CliError::input(format!("unknown lattice {text:?}; expected scaled:<dim>:<s>, sublattice:<n1,...> or h3"));
    let parts: Vec<&str> = text.trim().split(':').collect();
    match parts.as_slice() {
        ["h3"] => Ok(LatticePreset::HeisenbergSelf),
        ["scaled", dim, s] => Ok(LatticePreset::ScaledIntegers { dim: dim.parse().map_err(|_| bad())?, spacing: parse_rational(s)? }),
        ["sublattice", ns] => Ok(LatticePreset::IntSublattice {
            moduli: ns.split(',').map(|n| n.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<_, _>>()?,
        }),
        _ => Err(bad()),
    }
}

/// The group a function lives on: `--group`, else what the function implies.
pub fn function_group(text: &str, group: Option<&str>) -> Result<GroupDescriptor, CliError> {
    if let Some(g) = group {
        return Ok(parse_group(g)?);
    }
    if let Some(name) = text.strip_prefix("log-count:") {
        return Ok(GroupDescriptor::int(Subshift::from_preset(name)?.dim()));
    }
    if let Some(name) = text.strip_prefix("fiber:") {
        return Ok(GroupDescriptor::int(SlidingBlockCode::from_preset(name)?.source().dim()));
    }
    Ok(GroupDescriptor::int(1))
}

/// `log-count:<subshift>`, `fiber:<code>`, `volume:<kernel>`, `linear:<c>` or `cardinality`.
pub fn function(text: &str, group: &GroupDescriptor, radius: usize, opts: CountOptions) -> Result<SubadditiveFunction, CliError> {
    let text = text.trim();
    let f = if let Some(name) = text.strip_prefix("log-count:") {
        SubadditiveFunction::log_pattern_count(&Subshift::from_preset(name)?, radius, opts)?
    } else if let Some(name) = text.strip_prefix("fiber:") {
        SubadditiveFunction::log_fiber_cov(&SlidingBlockCode::from_preset(name)?, radius, opts)?
    } else if let Some(k) = text.strip_prefix("volume:") {
        SubadditiveFunction::dilation_volume(group.clone(), parse_kernel(k, group)?)?
    } else if let Some(c) = text.strip_prefix("linear:") {
        SubadditiveFunction::linear(group.clone(), parse_rational(c)?)?
    } else if text == "cardinality" {
        SubadditiveFunction::linear(group.clone(), int(1))?
    } else {
        return Err(CliError::input(format!(
            "unknown function {text:?}; expected log-count:<subshift>, fiber:<code>, volume:<kernel>, linear:<c> or cardinality"
        )));
    };
    if f.group() != group {
        return Err(CliError::input(format!("{} lives on {}, not {group}", f.label(), f.group())));
    }
    Ok(f)
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricFile {
    #[serde(default)]
    labels: Option<Vec<String>>,
    distances: Vec<Vec<Entry>>,
}

/// `{ labels = [...], distances = [[...], ...] }` with rational entries.
pub fn metric_space(path: &Path) -> Result<FiniteMetricSpace, CliError> {
    let file: MetricFile = read_document(path)?;
    let dist = file
        .distances
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    Entry::Int(n) => Ok(int(*n as i128)),
                    Entry::Text(s) => parse_rational(s),
                })
                .collect::<owent::Result<Vec<_>>>()
        })
        .collect::<owent::Result<Vec<_>>>()?;
    let labels = file.labels.unwrap_or_else(|| (0..dist.len()).map(|i| i.to_string()).collect());
    Ok(FiniteMetricSpace::new(labels, dist)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functions_and_groups() {
        let g = function_group("log-count:full:2:d2", None).unwrap();
        assert_eq!(g, GroupDescriptor::int(2));
        let f = function("cardinality", &GroupDescriptor::int(1), 0, CountOptions::default()).unwrap();
        assert!(f.is_monotone());
        assert!(function("log-count:golden-mean", &GroupDescriptor::int(2), 0, CountOptions::default()).is_err());
        assert!(function("volume:box:1", &GroupDescriptor::real(2), 0, CountOptions::default()).is_ok());
        assert!(function("entropy", &GroupDescriptor::int(1), 0, CountOptions::default()).is_err());
    }

    #[test]
    fn small_parsers() {
        assert_eq!(scales(Some("0, 2")).unwrap(), vec![0, 2]);
        assert_eq!(int_list("-1,0,3").unwrap().len(), 3);
        assert!(matches!(lattice("sublattice:2,3").unwrap(), LatticePreset::IntSublattice { .. }));
        assert!(lattice("scaled:1").is_err());
    }
}
