//! Run configuration: a JSON object whose keys mirror the long flags of the
//! command. Flags given on the command line override keys from the file.

use std::path::Path;
use std::sync::Arc;

use friedrichs_lab::{DomainDescriptor2D, ModelSpace64, RadialWeight64};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Merges `flags` over the object in `file` (if any) and deserializes the result.
///
/// Unknown keys are rejected by the target type. A `command` key in the file
/// must name the command being run.
pub fn resolve<C>(command: &str, file: Option<&Path>, flags: &C) -> CliResult<C>
where
    C: Serialize + DeserializeOwned,
{
    let mut merged = match file {
        Some(path) => read_object(path)?,
        None => Map::new(),
    };
    if let Some(v) = merged.remove("command") {
        if v.as_str() != Some(command) {
            return Err(CliError::key("command", format!("file is for {v}, not \"{command}\"")));
        }
    }
    let Value::Object(overrides) = serde_json::to_value(flags).expect("flag structs serialize") else {
        unreachable!("flag structs serialize to objects");
    };
    for (k, v) in overrides {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| {
        let msg = e.to_string();
        let key = backticked(&msg).unwrap_or("?").to_string();
        CliError::Key { key, message: msg }
    })
}

fn read_object(path: &Path) -> CliResult<Map<String, Value>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(CliError::Usage(format!(
            "{}: config must be a JSON object",
            path.display()
        ))),
        Err(e) => Err(CliError::Usage(format!("{}: {e}", path.display()))),
    }
}

/// First `` `name` `` in a serde message, which is how serde quotes field names.
fn backticked(msg: &str) -> Option<&str> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(&msg[start..start + len])
}

pub fn require<T: Copy>(value: Option<T>, key: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::key(key, "required for this command"))
}

/// `hartogs`, `exp-hartogs` or `power:<rho>`.
pub fn parse_space(text: &str) -> CliResult<Arc<ModelSpace64>> {
    let space = match text {
        "hartogs" => ModelSpace64::hartogs(),
        "exp-hartogs" => ModelSpace64::exp_hartogs(),
        _ => {
            let rho = text
                .strip_prefix("power:")
                .and_then(|r| r.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::key(
                        "space",
                        format!("expected hartogs, exp-hartogs or power:<rho>, got {text:?}"),
                    )
                })?;
            ModelSpace64::new(RadialWeight64::power(rho).map_err(|e| CliError::key("space", e.to_string()))?)
        }
    };
    Ok(Arc::new(space))
}

pub fn parse_domain(text: &str) -> CliResult<DomainDescriptor2D> {
    match text {
        "hartogs" => Ok(DomainDescriptor2D::hartogs()),
        "exp-hartogs" => Ok(DomainDescriptor2D::exp_hartogs()),
        _ => Err(CliError::key(
            "domain",
            format!("expected hartogs or exp-hartogs, got {text:?}"),
        )),
    }
}

/// `lo..hi` or `lo..=hi`, both inclusive.
pub fn parse_range(text: &str) -> CliResult<(i32, i32)> {
    let bad = || CliError::key("range", format!("expected lo..hi, got {text:?}"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi): (i32, i32) = (
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    );
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Serialize, serde::Deserialize, PartialEq)]
    #[serde(deny_unknown_fields)]
    struct Demo {
        #[serde(skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"command": "probe", "p": 3.0, "seed": 9}"#).unwrap();
        let got = resolve(
            "probe",
            Some(&path),
            &Demo {
                p: Some(2.5),
                seed: None,
            },
        )
        .unwrap();
        assert_eq!(
            got,
            Demo {
                p: Some(2.5),
                seed: Some(9)
            }
        );
    }

    #[test]
    fn unknown_key_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"q": 1}"#).unwrap();
        match resolve("probe", Some(&path), &Demo { p: None, seed: None }) {
            Err(CliError::Key { key, .. }) => assert_eq!(key, "q"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-3..3").unwrap(), (-3, 3));
        assert_eq!(parse_range("-3..=3").unwrap(), (-3, 3));
        assert!(parse_range("3..-3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn spaces() {
        assert!(parse_space("power:2").is_ok());
        assert!(parse_space("power:-1").is_err());
        assert!(parse_space("disk").is_err());
    }
}
