//! Merging a JSON config file with command-line flags.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

/// Overlays the flags that were given on top of the config file's values.
/// Unknown keys in the file are rejected by `T`'s deserializer.
pub fn resolve<T: Serialize + DeserializeOwned>(
    flags: &T,
    config: Option<&Path>,
) -> Result<T, CliError> {
    let mut merged = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            match serde_json::from_str::<Value>(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            {
                Value::Object(map) => map,
                _ => {
                    return Err(CliError::Usage(format!(
                        "{}: expected a JSON object",
                        path.display()
                    )))
                }
            }
        }
        None => Map::new(),
    };
    if let Value::Object(given) =
        serde_json::to_value(flags).map_err(|e| CliError::Internal(e.to_string()))?
    {
        merged.extend(given.into_iter().filter(|(_, v)| !v.is_null()));
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Usage(format!("config: {e}")))
}
