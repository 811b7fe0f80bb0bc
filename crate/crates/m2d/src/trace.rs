//! Transcript and trace files.

use m2d_core::dialog::Dialog;

use crate::story::canonical_json;

/// "S1: ...\nS2: ...\n", one line per turn.
pub fn transcript(d: &Dialog) -> String {
    d.transcript()
}

/// The dialog with its per-sentence origins and transforms and every
/// sampling decision, as canonical JSON.
pub fn trace_json(d: &Dialog) -> String {
    canonical_json(d)
}

/// Rebuilds the transcript from a trace document.
pub fn transcript_from_trace(text: &str) -> Result<String, serde_json::Error> {
    let d: Dialog = serde_json::from_str(text)?;
    Ok(d.transcript())
}
