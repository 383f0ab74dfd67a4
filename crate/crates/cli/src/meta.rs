use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Failure;

/// Block written next to every output file. `argv` alone is enough to
/// replay the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub parameters: Value,
    pub outputs: Vec<String>,
}

impl Metadata {
    pub fn new(command: &str, argv: &[String], parameters: &impl Serialize) -> Result<Self, Failure> {
        Ok(Self {
            tool: "frankmin".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv: argv.to_vec(),
            parameters: serde_json::to_value(parameters)?,
            outputs: Vec::new(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{} is not JSON: {e}", path.display())))?;
        let meta = v.get("metadata").cloned().unwrap_or(v);
        serde_json::from_value(meta).map_err(|e| Failure::usage(format!("{} has no metadata block: {e}", path.display())))
    }
}

/// Writes `{"metadata": meta, ...body}` as pretty JSON with a trailing
/// newline.
pub fn write_json(path: &Path, meta: &Metadata, body: Value) -> Result<(), Failure> {
    let mut obj = serde_json::Map::new();
    obj.insert("metadata".into(), serde_json::to_value(meta)?);
    if let Value::Object(m) = body {
        obj.extend(m);
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(obj))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
