//! `--config` files: flat maps with the same keys as the long flags.

use crate::CliError;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use std::path::Path;

/// Reads a TOML or JSON config. A run manifest is accepted too; its `config`
/// object is used.
pub fn load(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::data(format!("cannot read config {}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    let value: Value = if is_json {
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?
    } else {
        toml::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?
    };
    let Value::Object(mut map) = value else {
        return Err(CliError::usage(format!("config {} must be a table of settings", path.display())));
    };
    if map.contains_key("tool") {
        if let Some(Value::Object(inner)) = map.remove("config") {
            return Ok(inner);
        }
    }
    Ok(map)
}

/// Flags win over the config file; absent flags fall back to it.
pub fn resolve<T: Serialize + DeserializeOwned>(flags: T, config: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = config else {
        return Ok(flags);
    };
    let Value::Object(given) = serde_json::to_value(&flags).expect("flags serialize") else {
        unreachable!("argument structs serialize to objects")
    };
    let mut merged = load(path)?;
    let unknown: Vec<&String> = merged.keys().filter(|k| !given.contains_key(*k)).collect();
    if !unknown.is_empty() {
        log::warn!("ignoring config keys not used by this command: {unknown:?}");
    }
    merged.retain(|k, _| given.contains_key(k));
    for (k, v) in given {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
}

/// The settings as recorded in a run manifest.
pub fn snapshot<T: Serialize>(settings: &T) -> Value {
    let Value::Object(map) = serde_json::to_value(settings).expect("settings serialize") else {
        unreachable!("argument structs serialize to objects")
    };
    Value::Object(map.into_iter().filter(|(_, v)| !v.is_null()).collect())
}
