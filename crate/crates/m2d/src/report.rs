//! Per-run feature counts.

use std::collections::BTreeMap;

use m2d_core::dialog::{Dialog, Origin, Role, Transform};
use m2d_core::personality::{FeatureId, Speaker};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeakerCounts {
    pub tokens: usize,
    pub sentences: usize,
    pub questions: usize,
    pub markers: usize,
    /// Realized occurrences per feature id.
    pub features: BTreeMap<String, usize>,
}

impl SpeakerCounts {
    pub fn feature(&self, f: FeatureId) -> usize {
        self.features.get(f.name()).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub preset: String,
    pub seed: u64,
    /// S1's share of the content units.
    pub ratio_achieved: f64,
    pub transforms: usize,
    pub speakers: [SpeakerCounts; 2],
}

/// Words in a sentence: whitespace-separated chunks with a letter or digit.
pub fn token_count(text: &str) -> usize {
    text.split_whitespace()
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .count()
}

/// The feature an elaboration sentence is counted under. Only the
/// sentence that opens an elaboration counts.
fn elaboration_feature(role: Role, feature: FeatureId) -> Option<FeatureId> {
    match role {
        Role::Question
        | Role::Rhetorical
        | Role::Provoking
        | Role::Repetition
        | Role::Paraphrase
        | Role::StateChange
        | Role::CorrectionPreface
        | Role::Interjection => Some(feature),
        Role::FalseStatement | Role::Resume => None,
    }
}

impl RunReport {
    pub fn from_dialog(d: &Dialog) -> RunReport {
        let mut speakers: [SpeakerCounts; 2] = Default::default();
        for (_, speaker, s) in d.sentences() {
            let c = &mut speakers[speaker.index()];
            c.sentences += 1;
            c.tokens += token_count(&s.text);
            if s.text.ends_with('?') {
                c.questions += 1;
            }
            let mut bump = |f: FeatureId| *c.features.entry(f.name().to_string()).or_insert(0) += 1;
            let paraphrase = matches!(s.origin, Origin::Elaboration { role: Role::Paraphrase, .. });
            if let Origin::Elaboration { feature, role, .. } = &s.origin {
                if let Some(f) = elaboration_feature(*role, *feature) {
                    bump(f);
                }
            }
            for t in &s.transforms {
                match t {
                    Transform::Marker { feature, .. } => {
                        bump(*feature);
                        c.markers += 1;
                    }
                    Transform::Exclamation => bump(FeatureId::Exclamation),
                    Transform::TagQuestion => bump(FeatureId::TagQuestions),
                    Transform::LexicalChoice { .. } if !paraphrase => bump(FeatureId::LexicalChoice),
                    _ => {}
                }
            }
        }
        let total = d.allocation.speakers.len();
        RunReport {
            preset: d.params.preset.clone(),
            seed: d.seed,
            ratio_achieved: if total == 0 {
                0.0
            } else {
                d.allocation.count(Speaker::S1) as f64 / total as f64
            },
            transforms: d.transform_count(),
            speakers,
        }
    }

    pub fn total_markers(&self) -> usize {
        self.speakers.iter().map(|s| s.markers).sum()
    }

    pub fn total_questions(&self) -> usize {
        self.speakers.iter().map(|s| s.questions).sum()
    }
}

/// Aligned plain-text table, one row per report.
pub fn render_table(reports: &[RunReport]) -> String {
    let header = [
        "preset", "seed", "ratio", "transforms", "markers", "questions", "S1 tokens", "S2 tokens",
    ];
    let rows: Vec<[String; 8]> = reports
        .iter()
        .map(|r| {
            [
                r.preset.clone(),
                r.seed.to_string(),
                format!("{:.2}", r.ratio_achieved),
                r.transforms.to_string(),
                r.total_markers().to_string(),
                r.total_questions().to_string(),
                r.speakers[0].tokens.to_string(),
                r.speakers[1].tokens.to_string(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_skip_punctuation() {
        assert_eq!(token_count("Err ... it rained."), 3);
        assert_eq!(token_count("The red apples were tasty and ---"), 6);
    }
}
