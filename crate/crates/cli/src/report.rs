//! The JSON document every subcommand emits.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    /// The parameters the command ran with, after defaults and env.
    pub inputs: Value,
    pub body: Value,
    /// Wall-clock times; kept out of `body` so bodies are reproducible.
    pub timings: Vec<Timing>,
}

impl ReportDocument {
    pub fn new(command: &str, inputs: impl Serialize, body: impl Serialize) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs: serde_json::to_value(inputs).expect("inputs serialize"),
            body: serde_json::to_value(body).expect("body serializes"),
            timings: Vec::new(),
        }
    }

    pub fn with_timing(mut self, stage: &str, precision: Option<u32>, seconds: f64) -> Self {
        self.timings.push(Timing {
            stage: stage.to_string(),
            precision,
            seconds,
        });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
