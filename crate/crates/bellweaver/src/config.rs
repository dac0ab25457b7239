//! Run configuration: defaults, then a JSON config file, then command-line
//! flags. The resolved configuration and its hash are embedded in outputs.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const TOOL: &str = concat!("bellweaver ", env!("CARGO_PKG_VERSION"));
pub const SEED_ENV: &str = "BELLWEAVER_SEED";

/// Provenance block written into every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub tool: String,
    pub command: String,
    pub config_hash: String,
    pub config: Value,
}

impl Meta {
    pub fn new<T: Serialize>(command: &str, config: &T) -> Self {
        let config = serde_json::to_value(config).expect("configs serialize");
        Meta { tool: TOOL.into(), command: command.into(), config_hash: config_hash(command, &config), config }
    }

    /// One-line form for text outputs.
    pub fn comment_line(&self) -> String {
        format!("# {} command={} config_hash={} config={}", self.tool, self.command, self.config_hash, self.config)
    }
}

/// First 16 hex digits of SHA-256 over the command name and compact config.
pub fn config_hash(command: &str, config: &Value) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    h.update(config.to_string().as_bytes());
    hex::encode(h.finalize())[..16].to_string()
}

pub fn load_config_file(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let value: Value = serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })?;
    match value {
        Value::Object(mut map) => {
            // A previously written output can be fed back: use its embedded config.
            if let Some(Value::Object(meta)) = map.remove("meta") {
                if let Some(cfg @ Value::Object(_)) = meta.get("config") {
                    return Ok(cfg.clone());
                }
            }
            Ok(Value::Object(map))
        }
        _ => Err(CliError::usage(format!("{}: config must be a JSON object", path.display()))),
    }
}

/// Seed from the environment, if set.
pub fn env_seed() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::usage(format!("{SEED_ENV}='{s}' is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn overlay(base: &mut Map<String, Value>, top: &Value) {
    if let Value::Object(top) = top {
        for (k, v) in top {
            if !v.is_null() {
                base.insert(k.clone(), v.clone());
            }
        }
    }
}

/// Merges `defaults`, then `file`, then `flags` (null flag values are
/// ignored) and deserializes the result.
pub fn resolve<T>(defaults: &T, file: Option<&Value>, flags: &Value) -> CliResult<T>
where
    T: Serialize + DeserializeOwned,
{
    let mut merged = match serde_json::to_value(defaults).expect("configs serialize") {
        Value::Object(m) => m,
        _ => unreachable!("configs are structs"),
    };
    if let Some(file) = file {
        overlay(&mut merged, file);
    }
    overlay(&mut merged, flags);
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::usage(format!("invalid configuration: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Demo {
        steps: usize,
        sigma: f64,
        seed: u64,
    }

    #[test]
    fn flags_override_file_overrides_defaults() {
        let d = Demo { steps: 10, sigma: 1.0, seed: 0 };
        let file = json!({"steps": 20, "seed": 5});
        let flags = json!({"steps": 30, "sigma": null});
        let r: Demo = resolve(&d, Some(&file), &flags).unwrap();
        assert_eq!(r, Demo { steps: 30, sigma: 1.0, seed: 5 });
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let d = Demo { steps: 10, sigma: 1.0, seed: 0 };
        assert!(resolve(&d, Some(&json!({"stepz": 1})), &json!({})).is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = config_hash("hom scan", &json!({"steps": 1}));
        assert_eq!(a.len(), 16);
        assert_eq!(a, config_hash("hom scan", &json!({"steps": 1})));
        assert_ne!(a, config_hash("hom scan", &json!({"steps": 2})));
        assert_ne!(a, config_hash("tomo run", &json!({"steps": 1})));
    }
}
