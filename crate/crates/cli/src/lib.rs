//! Command-line front end for `parity-forge-core`, plus the JSON trace
//! document, the output envelope and the kernel mutation harness.

pub mod app;
pub mod document;
pub mod envelope;
pub mod mutation;
pub mod render;

pub use app::run;
pub use document::{trace_from_json, trace_to_json, TRACE_SCHEMA};
pub use envelope::{exit, Envelope};
pub use render::{render_trace, Format};
