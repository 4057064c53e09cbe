//! The JSON trace document.

use parity_forge_core::kernel::{ProofStep, ProofTrace, Statement};
use serde::{Deserialize, Serialize};

/// Version tag carried by every trace document.
pub const TRACE_SCHEMA: &str = "parity-forge/trace/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    schema: String,
    goal: Statement,
    steps: Vec<ProofStep>,
}

#[derive(Serialize)]
struct DocumentRef<'a> {
    schema: &'static str,
    goal: &'a Statement,
    steps: &'a [ProofStep],
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed trace document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unsupported trace schema {0:?}, expected {TRACE_SCHEMA:?}")]
    Version(String),
}

fn as_ref(t: &ProofTrace) -> DocumentRef<'_> {
    DocumentRef {
        schema: TRACE_SCHEMA,
        goal: &t.goal,
        steps: &t.steps,
    }
}

/// The document as a JSON value.
pub fn trace_value(t: &ProofTrace) -> serde_json::Value {
    serde_json::to_value(as_ref(t)).expect("trace documents always serialize")
}

/// Pretty-printed document with a trailing newline. Identical traces give
/// identical bytes.
pub fn trace_to_json(t: &ProofTrace) -> String {
    let mut s = serde_json::to_string_pretty(&as_ref(t)).expect("trace documents always serialize");
    s.push('\n');
    s
}

pub fn trace_from_value(v: serde_json::Value) -> Result<ProofTrace, DocumentError> {
    let doc: Document = serde_json::from_value(v)?;
    if doc.schema != TRACE_SCHEMA {
        return Err(DocumentError::Version(doc.schema));
    }
    Ok(ProofTrace {
        goal: doc.goal,
        steps: doc.steps,
    })
}

pub fn trace_from_json(s: &str) -> Result<ProofTrace, DocumentError> {
    trace_from_value(serde_json::from_str(s)?)
}
