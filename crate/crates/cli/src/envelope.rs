//! The JSON output envelope shared by every subcommand.

use serde::Serialize;
use serde_json::Value;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const DOMAIN: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
    pub const REJECTED: i32 = 4;
    pub const USAGE: i32 = 64;
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_file: Option<String>,
    pub exit_code: i32,
}

impl Envelope {
    pub fn new(command: &str, inputs: Value, result: Value, exit_code: i32) -> Self {
        Envelope {
            command: command.into(),
            inputs,
            result,
            trace: None,
            trace_file: None,
            exit_code,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelopes always serialize");
        s.push('\n');
        s
    }
}
