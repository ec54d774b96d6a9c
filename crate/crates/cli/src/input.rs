use std::fs;

use polymod::CoeffQ;
use serde::de::DeserializeOwned;

pub struct UsageError(pub String);

/// Inline JSON, or the contents of a file when the argument is `@path`.
fn source(name: &str, arg: &str) -> Result<String, UsageError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| UsageError(format!("--{name}: cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn parse_json<T: DeserializeOwned>(name: &str, arg: &str) -> Result<T, UsageError> {
    let text = source(name, arg)?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("--{name}: {e}")))
}

/// A rational like `-3/4`, or a JSON scalar object `{"re":…,"im":…}`.
pub fn parse_scalar(name: &str, arg: &str) -> Result<CoeffQ, UsageError> {
    let text = source(name, arg)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| UsageError(format!("--{name}: {e}")))
    } else {
        text.parse().map_err(|e: polymod::Error| UsageError(format!("--{name}: {e}")))
    }
}
