//! Run settings: per-command defaults, an optional config file, and flags,
//! merged in that order of increasing priority.

use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandName {
    EncodeKe,
    Evolve,
    Fidelity,
    Metrics,
    ErrorBudget,
}

const ENCODE_KE: &[(&str, &str)] = &[
    ("qubits", "5"),
    ("d", "10"),
    ("dt", "0.1"),
    ("mass", "1"),
    ("method", "qate"),
    ("window", "none"),
    ("cp_budget", "auto"),
    ("format", "csv"),
];

const EVOLVE: &[(&str, &str)] = &[
    ("qubits", "5"),
    ("d", "10"),
    ("dt", "0.1"),
    ("steps", "1"),
    ("trotter_steps", "10,20,40,50"),
    ("k0", "1"),
    ("potential", "single"),
    ("eta", "1"),
    ("mass", "1"),
    ("shots", "10000"),
    ("seed", "0"),
    ("mode", "centered"),
    ("format", "csv"),
];

const FIDELITY: &[(&str, &str)] = &[
    ("qubits", "3..9"),
    ("d", "10"),
    ("dt", "0.1"),
    ("steps", "1"),
    ("trotter_steps", "10"),
    ("k0", "1"),
    ("potential", "single"),
    ("eta", "1"),
    ("mass", "1"),
    ("shots", "10000"),
    ("seed", "0"),
    ("mode", "centered"),
    ("format", "csv"),
];

const METRICS: &[(&str, &str)] = &[("qubits", "3..6"), ("format", "csv")];

const ERROR_BUDGET: &[(&str, &str)] = &[
    ("qubits", "5"),
    ("d", "10"),
    ("dt", "0.1"),
    ("h", "auto"),
    ("l2", "auto"),
    ("sigma_g2", "0"),
    ("t1", "100"),
    ("t2", "100"),
    ("sigma_cr2", "0"),
    ("format", "csv"),
];

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::EncodeKe => "encode-ke",
            CommandName::Evolve => "evolve",
            CommandName::Fidelity => "fidelity",
            CommandName::Metrics => "metrics",
            CommandName::ErrorBudget => "error-budget",
        }
    }

    /// Accepted keys with their defaults, in manifest order.
    pub fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            CommandName::EncodeKe => ENCODE_KE,
            CommandName::Evolve => EVOLVE,
            CommandName::Fidelity => FIDELITY,
            CommandName::Metrics => METRICS,
            CommandName::ErrorBudget => ERROR_BUDGET,
        }
    }
}

/// Flag spelling and file spelling are interchangeable: `trotter-steps`
/// and `trotter_steps` name the same key.
fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    /// Set when the file is a manifest.
    pub command: Option<String>,
    pub entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigIo {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// A JSON object when the text starts with `{`, otherwise `key = value`
    /// lines with `#` comments.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file = if text.trim_start().starts_with('{') {
            Self::parse_json(text)?
        } else {
            Self::parse_lines(text)?
        };
        for (i, (key, _)) in file.entries.iter().enumerate() {
            if file.entries[..i].iter().any(|(k, _)| k == key) {
                return Err(CliError::Usage(format!("key {key:?} given twice")));
            }
        }
        Ok(file)
    }

    fn parse_lines(text: &str) -> Result<Self, CliError> {
        let mut entries = Vec::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("line {}: expected key = value", number + 1))
            })?;
            entries.push((normalize_key(key), value.trim().to_string()));
        }
        Ok(ConfigFile {
            command: None,
            entries,
        })
    }

    fn parse_json(text: &str) -> Result<Self, CliError> {
        let object: Map<String, Value> = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("invalid JSON config: {e}")))?;
        let mut file = ConfigFile::default();
        for (key, value) in object {
            let key = normalize_key(&key);
            let text = scalar_text(&key, &value)?;
            if key == "command" {
                file.command = Some(text);
            } else {
                file.entries.push((key, text));
            }
        }
        Ok(file)
    }
}

fn scalar_text(key: &str, value: &Value) -> Result<String, CliError> {
    match value {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Array(items) => items
            .iter()
            .map(|v| scalar_text(key, v))
            .collect::<Result<Vec<_>, _>>()
            .map(|parts| parts.join(",")),
        _ => Err(CliError::Usage(format!("unsupported value for {key:?}"))),
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    command: CommandName,
    entries: Vec<(&'static str, String)>,
}

impl Settings {
    /// `flags` holds `(key, value)` for every flag the user passed.
    pub fn resolve(
        command: CommandName,
        file: Option<&ConfigFile>,
        flags: &[(&str, String)],
    ) -> Result<Self, CliError> {
        let defaults = command.defaults();
        let mut entries: Vec<(&'static str, String)> =
            defaults.iter().map(|&(k, v)| (k, v.to_string())).collect();
        let mut set = |key: &str, value: &str, origin: &str| -> Result<(), CliError> {
            let slot = entries.iter_mut().find(|(k, _)| *k == key).ok_or_else(|| {
                CliError::Usage(format!(
                    "{origin} {key:?} does not apply to {}",
                    command.as_str()
                ))
            })?;
            slot.1 = value.to_string();
            Ok(())
        };
        if let Some(file) = file {
            if let Some(name) = &file.command {
                if name != command.as_str() {
                    return Err(CliError::Usage(format!(
                        "manifest is for {name:?}, not {:?}",
                        command.as_str()
                    )));
                }
            }
            for (key, value) in &file.entries {
                set(key, value, "config key")?;
            }
        }
        for (key, value) in flags {
            set(&normalize_key(key), value, "flag")?;
        }
        Ok(Settings { command, entries })
    }

    pub fn command(&self) -> CommandName {
        self.command
    }

    pub fn get(&self, key: &str) -> &str {
        self.entries
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
            .unwrap_or_else(|| panic!("{key} is not a setting of {}", self.command.as_str()))
    }

    pub fn parse<T>(&self, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        let raw = self.get(key);
        raw.parse()
            .map_err(|e| CliError::Usage(format!("invalid value {raw:?} for {key}: {e}")))
    }

    /// `None` for the literal `auto`.
    pub fn parse_auto<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if self.get(key) == "auto" {
            Ok(None)
        } else {
            self.parse(key).map(Some)
        }
    }

    pub fn list(&self, key: &str) -> Result<Vec<usize>, CliError> {
        parse_list(self.get(key)).map_err(|e| {
            CliError::Usage(format!("invalid value {:?} for {key}: {e}", self.get(key)))
        })
    }

    /// The command and every setting, as pretty JSON with a trailing newline.
    pub fn manifest(&self) -> String {
        let mut object = Map::new();
        object.insert(
            "command".into(),
            Value::String(self.command.as_str().into()),
        );
        for (k, v) in &self.entries {
            object.insert((*k).into(), Value::String(v.clone()));
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(object))
            .expect("string map always serializes");
        text.push('\n');
        text
    }
}

/// Comma-separated items, each a number or an inclusive range `a..b`.
/// A range with `b < a` is empty.
pub fn parse_list(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|e| format!("{item}: {e}"))?;
                let b: usize = b.trim().parse().map_err(|e| format!("{item}: {e}"))?;
                out.extend(a..=b);
            }
            None => out.push(item.parse().map_err(|e| format!("{item}: {e}"))?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("11..15").unwrap(), vec![11, 12, 13, 14, 15]);
        assert_eq!(parse_list("10, 20,40").unwrap(), vec![10, 20, 40]);
        assert_eq!(parse_list("1..2,7").unwrap(), vec![1, 2, 7]);
        assert!(parse_list("4..3").unwrap().is_empty());
        assert!(parse_list("").unwrap().is_empty());
        assert!(parse_list("x").is_err());
        assert!(parse_list("1..").is_err());
    }

    #[test]
    fn key_value_file() {
        let f =
            ConfigFile::parse("# comment\nqubits = 4\ntrotter-steps=10,20  # inline\n\n").unwrap();
        assert_eq!(f.command, None);
        assert_eq!(
            f.entries,
            vec![
                ("qubits".into(), "4".into()),
                ("trotter_steps".into(), "10,20".into())
            ]
        );
        assert!(ConfigFile::parse("qubits 4").is_err());
        assert!(ConfigFile::parse("a=1\na=2").is_err());
    }

    #[test]
    fn json_file() {
        let f =
            ConfigFile::parse(r#"{"command": "evolve", "dt": 0.25, "trotter_steps": [10, 20]}"#)
                .unwrap();
        assert_eq!(f.command.as_deref(), Some("evolve"));
        assert_eq!(
            f.entries,
            vec![
                ("dt".into(), "0.25".into()),
                ("trotter_steps".into(), "10,20".into())
            ]
        );
        assert!(ConfigFile::parse(r#"{"dt": {"x": 1}}"#).is_err());
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let file = ConfigFile::parse("qubits = 4\ndt = 0.2").unwrap();
        let s =
            Settings::resolve(CommandName::Evolve, Some(&file), &[("dt", "0.3".into())]).unwrap();
        assert_eq!(s.get("qubits"), "4");
        assert_eq!(s.get("dt"), "0.3");
        assert_eq!(s.get("shots"), "10000");
        assert_eq!(s.parse::<f64>("dt").unwrap(), 0.3);
    }

    #[test]
    fn foreign_keys_are_rejected() {
        let err =
            Settings::resolve(CommandName::Metrics, None, &[("shots", "5".into())]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let file = ConfigFile::parse("bogus = 1").unwrap();
        assert!(Settings::resolve(CommandName::Metrics, Some(&file), &[]).is_err());
        let manifest = ConfigFile::parse(r#"{"command": "metrics"}"#).unwrap();
        assert!(Settings::resolve(CommandName::Evolve, Some(&manifest), &[]).is_err());
    }

    #[test]
    fn manifest_round_trips() {
        let s =
            Settings::resolve(CommandName::Fidelity, None, &[("mode", "paper".into())]).unwrap();
        let text = s.manifest();
        assert!(text.starts_with("{\n  \"command\": \"fidelity\",\n  \"qubits\": \"3..9\""));
        let again = Settings::resolve(
            CommandName::Fidelity,
            Some(&ConfigFile::parse(&text).unwrap()),
            &[],
        )
        .unwrap();
        assert_eq!(again, s);
        assert_eq!(again.manifest(), text);
    }

    #[test]
    fn auto_and_bad_values() {
        let s = Settings::resolve(CommandName::ErrorBudget, None, &[("t1", "abc".into())]).unwrap();
        assert_eq!(s.parse_auto::<f64>("h").unwrap(), None);
        assert_eq!(s.parse::<f64>("t1").unwrap_err().exit_code(), 2);
    }
}
