//! Optional configuration file: either a flat JSON object or `key = value`
//! lines. Values from the file are used only where the matching command-line
//! flag is absent.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_").to_ascii_lowercase()
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let trimmed = text.trim_start();
        let mut values = BTreeMap::new();
        if trimmed.starts_with('{') {
            let json: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
            let object = json.as_object().ok_or("configuration must be a JSON object")?;
            for (key, value) in object {
                values.insert(normalize_key(key), json_scalar(value)?);
            }
        } else {
            for (lineno, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
                values.insert(normalize_key(key), value.trim().trim_matches('"').to_string());
            }
        }
        Ok(ConfigFile { values })
    }

    /// Typed lookup; a present but unparsable value is a usage error.
    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}' = '{raw}': {e}"))),
        }
    }
}

fn json_scalar(value: &serde_json::Value) -> Result<String, String> {
    match value {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::Bool(b) => Ok(b.to_string()),
        serde_json::Value::Array(items) => {
            items.iter().map(json_scalar).collect::<Result<Vec<_>, _>>().map(|v| v.join(","))
        }
        other => Err(format!("unsupported configuration value {other}")),
    }
}

/// Resolves one setting: command line, then config file, then default.
pub fn resolve<T: FromStr>(cli: Option<T>, file: &ConfigFile, key: &str, default: T) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    match cli {
        Some(v) => Ok(v),
        None => Ok(file.get(key)?.unwrap_or(default)),
    }
}

/// Like [`resolve`] without a default.
pub fn resolve_opt<T: FromStr>(cli: Option<T>, file: &ConfigFile, key: &str) -> CliResult<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match cli {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

/// Comma-separated list, or an inclusive range `start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [start, stop, step] => {
                let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
                if !(step > 0.0) || stop < start {
                    return Err(format!("range '{s}' needs start <= stop and a positive step"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + step * i as f64).collect()
            }
            [_] => s.split(',').map(parse).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("'{s}' is neither a list nor start:stop:step")),
        };
        if values.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Grid(values))
    }
}

/// Comma-separated list of sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct Sizes(pub Vec<usize>);

impl FromStr for Sizes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Sizes)
    }
}
