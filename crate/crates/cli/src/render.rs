use parity_forge_core::kernel::{check_trace, render_text, CheckResult, ProofTrace};
use parity_forge_core::{Error, Result};

use crate::document::trace_to_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Renders an accepted trace; a rejected one is refused.
pub fn render_trace(t: &ProofTrace, format: Format) -> Result<String> {
    match format {
        Format::Text => render_text(t),
        Format::Json => match check_trace(t) {
            CheckResult::Accepted => Ok(trace_to_json(t)),
            rejected => Err(Error::RenderRefused(rejected.to_string())),
        },
    }
}
