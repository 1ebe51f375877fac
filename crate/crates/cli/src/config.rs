//! Flat `key = value` run files and their merge with command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qrg_core::{Model, Observable};

use crate::args::{Format, OutputArgs};
use crate::UsageError;

const KEYS: [&str; 10] = [
    "model",
    "observable",
    "steps",
    "gamma-min",
    "gamma-max",
    "points",
    "max-steps",
    "output",
    "out-dir",
    "format",
];

/// Parsed run file. Keys use the long-flag spelling; `_` is accepted for `-`.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, UsageError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| UsageError(format!("cannot read config {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                UsageError(format!("config line {}: expected key=value", lineno + 1))
            })?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(UsageError(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| UsageError(format!("config key {key}: {e}")))
            })
            .transpose()
    }

    /// Flag value if given, else the config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn pick_str(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.values.get(key).cloned())
    }
}

pub fn parse_model(s: &str) -> Result<Model, UsageError> {
    s.parse().map_err(UsageError)
}

pub fn parse_observable(s: &str) -> Result<Observable, UsageError> {
    s.parse().map_err(UsageError)
}

/// Observables for `trace-distance`, `tau` or `both`.
pub fn parse_observables(s: &str) -> Result<Vec<Observable>, UsageError> {
    if s == "both" {
        Ok(Observable::ALL.to_vec())
    } else {
        Ok(vec![parse_observable(s)?])
    }
}

pub fn parse_steps(s: &str) -> Result<Vec<usize>, UsageError> {
    let steps = s
        .split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| {
                UsageError(format!(
                    "invalid step '{}' (expected integers >= 0)",
                    t.trim()
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if steps.is_empty() {
        return Err(UsageError("steps must not be empty".into()));
    }
    Ok(steps)
}

fn parse_format(s: &str) -> Result<Format, UsageError> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(UsageError(format!(
            "unknown format '{other}' (expected csv or json)"
        ))),
    }
}

/// Where and how a command writes its data.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTarget {
    /// `None` means standard output.
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl OutputTarget {
    /// Resolution order: `--output`, then `--out-dir`/config `out-dir`, then
    /// `QRG_OUT_DIR`, then the working directory, with `default_stem` plus
    /// the format extension as file name.
    pub fn resolve(
        args: &OutputArgs,
        config: &ConfigFile,
        default_stem: &str,
    ) -> Result<Self, UsageError> {
        let format = match args.format {
            Some(f) => f,
            None => config
                .values
                .get("format")
                .map(|s| parse_format(s))
                .transpose()?
                .unwrap_or(Format::Csv),
        };
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let explicit = args
            .output
            .clone()
            .or_else(|| config.values.get("output").map(PathBuf::from));
        let path = match explicit {
            Some(p) if p.as_os_str() == "-" => None,
            Some(p) => Some(p),
            None => {
                let dir = args
                    .out_dir
                    .clone()
                    .or_else(|| config.values.get("out-dir").map(PathBuf::from))
                    .or_else(|| std::env::var_os("QRG_OUT_DIR").map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from("."));
                Some(dir.join(format!("{default_stem}.{ext}")))
            }
        };
        Ok(Self { path, format })
    }
}
