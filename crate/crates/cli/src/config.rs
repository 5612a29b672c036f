//! `key = value` configuration files and flag/file/default resolution.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::CliError;

/// Parameters from an optional config file plus the echo of every resolved
/// value, in resolution order.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    echo: Map<String, Value>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
        let key = normalize(k);
        if key.is_empty() {
            return Err(format!("line {}: empty key", lineno + 1));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let file = match path {
            None => BTreeMap::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                parse_config(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
            }
        };
        Ok(Self {
            file,
            echo: Map::new(),
        })
    }

    /// Flag value if given, else the file entry, else `default`.
    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Into<Value> + Clone,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(&normalize(key)) {
                Some(raw) => raw
                    .parse()
                    .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}")))?,
                None => default,
            },
        };
        self.echo.insert(key.to_string(), value.clone().into());
        Ok(value)
    }

    pub fn get_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Into<Value> + Clone,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(&normalize(key)) {
                Some(raw) => Some(
                    raw.parse()
                        .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.echo.insert(key.to_string(), v.clone().into());
        }
        Ok(value)
    }

    pub fn record(&mut self, key: &str, value: Value) {
        self.echo.insert(key.to_string(), value);
    }

    pub fn echo(&self) -> Value {
        Value::Object(self.echo.clone())
    }
}
