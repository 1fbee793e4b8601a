//! Plumbing behind the `shapmc` binary: file ingestion that accepts either
//! MLP weight documents or synthetic game specs, and the text export
//! formats. Kept as a library so the formats are testable without spawning
//! the binary.

pub mod input;
pub mod output;
