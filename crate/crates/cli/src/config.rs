//! Run configuration: a JSON file with global settings and one section per
//! subcommand, overlaid by command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub resolution: Option<usize>,
    /// Per-subcommand parameters keyed by subcommand name.
    #[serde(default)]
    pub commands: Map<String, Value>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn section(&self, command: &str) -> Option<&Value> {
        self.commands.get(command)
    }
}

/// JSON given inline (`{…}` or `[…]`) or as a path to a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonArg(pub Value);

impl FromStr for JsonArg {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<JsonArg> {
        let t = s.trim_start();
        let text = if t.starts_with('{') || t.starts_with('[') {
            s.to_string()
        } else {
            std::fs::read_to_string(s).with_context(|| format!("reading {s}"))?
        };
        Ok(JsonArg(serde_json::from_str(&text).with_context(|| format!("parsing JSON from {s}"))?))
    }
}

impl JsonArg {
    pub fn parse<T: DeserializeOwned>(&self, what: &str) -> Result<T> {
        serde_json::from_value(self.0.clone()).with_context(|| format!("invalid {what} JSON"))
    }
}

/// Overlays the flags set on the command line onto the config section.
pub fn merge<T: Serialize + DeserializeOwned>(cli: &T, section: Option<&Value>) -> Result<T> {
    let mut base = match section {
        Some(Value::Object(m)) => m.clone(),
        Some(_) => bail!("config command sections must be JSON objects"),
        None => Map::new(),
    };
    let Value::Object(flags) = serde_json::to_value(cli)? else {
        bail!("command arguments must serialize to an object");
    };
    for (k, v) in flags {
        if !v.is_null() {
            base.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(base)).context("invalid command parameters in config")
}

pub fn need<T>(value: Option<T>, name: &str) -> Result<T> {
    value.with_context(|| format!("missing required parameter --{name}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    struct Args {
        a: Option<f64>,
        b: Option<f64>,
    }

    #[test]
    fn flags_override_config() {
        let section = serde_json::json!({"a": 1.0, "b": 2.0});
        let merged = merge(&Args { a: None, b: Some(5.0) }, Some(&section)).unwrap();
        assert_eq!(merged, Args { a: Some(1.0), b: Some(5.0) });
        assert!(merge(&Args { a: None, b: None }, Some(&serde_json::json!(3))).is_err());
    }

    #[test]
    fn json_arg_inline() {
        let j: JsonArg = "[[0, 1]]".parse().unwrap();
        assert_eq!(j.0, serde_json::json!([[0, 1]]));
        assert!("/nonexistent/file.json".parse::<JsonArg>().is_err());
    }
}
