use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::Format;

/// A command result: a JSON value and the equivalent TSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Document {
    pub fn new(json: Value, header: Vec<&'static str>) -> Self {
        Document {
            json,
            header,
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    /// JSON objects have their keys sorted (serde_json's map is ordered).
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut s = self.header.join("\t");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Request {
    pub subcommand: String,
    pub args: Vec<String>,
}

/// Provenance record written next to a result.
#[derive(Serialize, Debug)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub request: Request,
    pub wall_time_ms: u128,
    /// SHA-256 of the emitted result bytes, lowercase hex.
    pub content_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(subcommand: &str, args: Vec<String>, wall: Duration, content: &[u8]) -> Self {
        RunManifest {
            tool: "wittkit",
            version: env!("CARGO_PKG_VERSION"),
            request: Request {
                subcommand: subcommand.to_string(),
                args,
            },
            wall_time_ms: wall.as_millis(),
            content_sha256: sha256_hex(content),
        }
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("manifest serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        s.push('\n');
        s
    }
}
