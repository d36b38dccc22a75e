//! Assessment settings read from a file, as JSON or `key = value` lines.

use std::collections::BTreeSet;
use std::path::Path;

use clusterability::{AssessmentConfig, Error, Result};
use serde_json::{Map, Value};

/// Settings from a config file plus the names of the keys it set.
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    pub config: AssessmentConfig,
    pub keys: BTreeSet<String>,
}

impl FileConfig {
    pub fn sets(&self, key: &str) -> bool {
        self.keys.contains(key)
    }
}

pub fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<FileConfig> {
    let object = if text.trim_start().starts_with('{') {
        match serde_json::from_str::<Value>(text) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(invalid("config JSON must be an object")),
            Err(e) => return Err(invalid(&format!("config JSON: {e}"))),
        }
    } else {
        parse_key_values(text)?
    };
    let keys = object.keys().cloned().collect();
    let config: AssessmentConfig =
        serde_json::from_value(Value::Object(object)).map_err(|e| invalid(&format!("config: {e}")))?;
    config.validate()?;
    Ok(FileConfig { config, keys })
}

/// `a.b = v` lines become nested objects; values that parse as JSON
/// (numbers, booleans, null) keep that type, anything else is a string.
fn parse_key_values(text: &str) -> Result<Map<String, Value>> {
    let mut root = Map::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, raw) = line
            .split_once('=')
            .ok_or_else(|| invalid(&format!("config line {}: expected key = value", i + 1)))?;
        let raw = raw.trim();
        let value = serde_json::from_str::<Value>(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let parts: Vec<&str> = key.trim().split('.').collect();
        let mut node = &mut root;
        for part in &parts[..parts.len() - 1] {
            node = node
                .entry(part.to_string())
                .or_insert_with(|| Value::Object(Map::new()))
                .as_object_mut()
                .ok_or_else(|| invalid(&format!("config line {}: '{part}' is not a section", i + 1)))?;
        }
        node.insert(parts[parts.len() - 1].to_string(), value);
    }
    Ok(root)
}

fn invalid(msg: &str) -> Error {
    Error::InvalidArgument(msg.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clusterability::StandardizationMode;

    #[test]
    fn key_value_form() {
        let fc = parse("# settings\nalpha = 0.01\nseed=9\nstandardization = zscore\nkde_grid.points = 1024\n").unwrap();
        assert_eq!(fc.config.alpha, 0.01);
        assert_eq!(fc.config.seed, 9);
        assert_eq!(fc.config.standardization, StandardizationMode::CenterAndUnitVariance);
        assert_eq!(fc.config.kde_grid.points, 1024);
        assert!(fc.sets("alpha") && !fc.sets("hopkins_runs"));
    }

    #[test]
    fn json_form() {
        let fc = parse(r#"{"hopkins_runs": 5, "silverman_calibrated": false}"#).unwrap();
        assert_eq!(fc.config.hopkins_runs, 5);
        assert!(!fc.config.silverman_calibrated);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(parse("alhpa = 0.1").is_err());
        assert!(parse("alpha = 2").is_err());
        assert!(parse("just text").is_err());
    }
}
