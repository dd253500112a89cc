//! TOML config files: a flat table of option values, optionally naming the
//! command it was written for.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Common;
use crate::CliError;

const COMMON_KEYS: [&str; 3] = ["format", "output", "log2"];

fn load(path: &Path, command: &str) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::input(format!("config {}: {e}", path.display())))?;
    let Value::Object(mut map) = serde_json::to_value(table).map_err(|e| CliError::input(e.to_string()))? else {
        unreachable!("a TOML table serializes to an object")
    };
    if let Some(named) = map.remove("command") {
        if named.as_str() != Some(command) {
            return Err(CliError::input(format!("config {} is for command {named}, not {command}", path.display())));
        }
    }
    Ok(map)
}

fn flags_value<T: Serialize>(flags: &T) -> Map<String, Value> {
    match serde_json::to_value(flags) {
        Ok(Value::Object(map)) => map.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => Map::new(),
    }
}

fn overlay<T: Serialize + DeserializeOwned>(file: Map<String, Value>, flags: &T) -> Result<T, CliError> {
    let mut merged = file;
    merged.extend(flags_value(flags));
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::input(format!("config: {e}")))
}

/// Fills options missing on the command line from `--config`.
pub fn merge<T: Serialize + DeserializeOwned>(command: &str, common: &Common, args: &T) -> Result<(Common, T), CliError> {
    let Some(path) = &common.config else {
        return Ok((common.clone(), overlay(Map::new(), args)?));
    };
    let mut file = load(path, command)?;
    let shared: Map<String, Value> = COMMON_KEYS.iter().filter_map(|k| file.remove(*k).map(|v| (k.to_string(), v))).collect();
    let mut common_out: Common = overlay(shared, common)?;
    common_out.config = common.config.clone();
    Ok((common_out, overlay(file, args)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{EntropyArgs, Format};
    use std::io::Write;

    fn config(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn flags_override_file() {
        let f = config("command = \"entropy\"\npreset = \"golden-mean\"\nimax = 12\nformat = \"csv\"\n");
        let common = Common { config: Some(f.path().into()), ..Default::default() };
        let flags = EntropyArgs { imax: Some(20), ..Default::default() };
        let (c, a) = merge("entropy", &common, &flags).unwrap();
        assert_eq!(a.preset.as_deref(), Some("golden-mean"));
        assert_eq!(a.imax, Some(20));
        assert_eq!(c.format, Some(Format::Csv));
    }

    #[test]
    fn unknown_keys_and_wrong_command_rejected() {
        let common = |f: &tempfile::NamedTempFile| Common { config: Some(f.path().into()), ..Default::default() };
        let f = config("imax = 5\ncolour = \"red\"\n");
        assert!(merge("entropy", &common(&f), &EntropyArgs::default()).is_err());
        let g = config("command = \"density\"\n");
        assert!(merge("entropy", &common(&g), &EntropyArgs::default()).is_err());
    }
}
