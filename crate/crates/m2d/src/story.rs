//! Story documents: strict and lax parsing, canonical serialization.

use std::fmt;

use m2d_core::{validate_refs, Story};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Unknown keys are errors.
    #[default]
    Strict,
    /// Unknown keys are dropped with a warning.
    Lax,
}

/// Where a parse problem was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    LineColumn { line: usize, column: usize },
    /// JSON path such as `sentences[2].children[0].node`.
    Path(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::LineColumn { line, column } => write!(f, "line {line}, column {column}"),
            Location::Path(p) => write!(f, "at {p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    pub location: Location,
    pub message: String,
}

impl ParseError {
    fn from_json(e: &serde_json::Error) -> Self {
        let full = e.to_string();
        // serde_json appends " at line L column C"; the location is kept
        // separately.
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_string(),
            None => full,
        };
        ParseError {
            location: Location::LineColumn {
                line: e.line(),
                column: e.column(),
            },
            message,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedStory {
    pub story: Story,
    /// Unknown keys dropped in lax mode.
    pub warnings: Vec<String>,
}

const STORY_KEYS: &[&str] = &["title", "characters", "sentences"];
const CHARACTER_KEYS: &[&str] = &["id", "lexeme", "gender", "number", "proper"];
const NODE_KEYS: &[&str] = &["lexeme", "class", "features", "ref", "children"];
const CHILD_KEYS: &[&str] = &["rel", "node"];
const FEATURE_KEYS: &[&str] = &[
    "article",
    "mood",
    "number",
    "person",
    "polarity",
    "possessor",
    "possessor_pronoun",
    "punct",
    "sep",
    "slot",
    "tense",
    "truncated",
];

fn strip(obj: &mut Map<String, Value>, known: &[&str], path: &str, warnings: &mut Vec<String>) {
    let unknown: Vec<String> = obj
        .keys()
        .filter(|k| !known.contains(&k.as_str()))
        .cloned()
        .collect();
    for k in unknown {
        obj.remove(&k);
        let at = if path.is_empty() { "top level".to_string() } else { path.to_string() };
        warnings.push(format!("ignored unknown key `{k}` at {at}"));
    }
}

fn strip_node(v: &mut Value, path: &str, warnings: &mut Vec<String>) {
    let Some(obj) = v.as_object_mut() else {
        return;
    };
    strip(obj, NODE_KEYS, path, warnings);
    if let Some(Value::Object(f)) = obj.get_mut("features") {
        strip(f, FEATURE_KEYS, &format!("{path}.features"), warnings);
    }
    if let Some(Value::Array(children)) = obj.get_mut("children") {
        for (i, c) in children.iter_mut().enumerate() {
            let cp = format!("{path}.children[{i}]");
            if let Some(co) = c.as_object_mut() {
                strip(co, CHILD_KEYS, &cp, warnings);
                if let Some(n) = co.get_mut("node") {
                    strip_node(n, &format!("{cp}.node"), warnings);
                }
            }
        }
    }
}

fn strip_unknown(v: &mut Value) -> Vec<String> {
    let mut warnings = Vec::new();
    let Some(top) = v.as_object_mut() else {
        return warnings;
    };
    strip(top, STORY_KEYS, "", &mut warnings);
    if let Some(Value::Array(chars)) = top.get_mut("characters") {
        for (i, c) in chars.iter_mut().enumerate() {
            if let Some(co) = c.as_object_mut() {
                strip(co, CHARACTER_KEYS, &format!("characters[{i}]"), &mut warnings);
            }
        }
    }
    if let Some(Value::Array(sents)) = top.get_mut("sentences") {
        for (i, s) in sents.iter_mut().enumerate() {
            strip_node(s, &format!("sentences[{i}]"), &mut warnings);
        }
    }
    warnings
}

/// Parses a story document. Syntax errors, unknown relation labels or
/// feature values, unknown keys (strict mode) and references to undeclared
/// characters are errors. Tree-shape rules are left to
/// [`Story::validate`].
pub fn parse_story(text: &str, mode: ParseMode) -> Result<ParsedStory, ParseError> {
    let (story, warnings) = match mode {
        ParseMode::Strict => (
            serde_json::from_str::<Story>(text).map_err(|e| ParseError::from_json(&e))?,
            Vec::new(),
        ),
        ParseMode::Lax => {
            let mut v: Value = serde_json::from_str(text).map_err(|e| ParseError::from_json(&e))?;
            let warnings = strip_unknown(&mut v);
            let story = serde_json::from_value::<Story>(v).map_err(|e| ParseError {
                location: Location::Path("document".into()),
                message: e.to_string(),
            })?;
            (story, warnings)
        }
    };
    for (i, s) in story.sentences.iter().enumerate() {
        if let Some(d) = validate_refs(s, story.cast()).into_iter().next() {
            return Err(ParseError {
                location: Location::Path(format!("sentences[{i}] node {}", d.path)),
                message: d.message,
            });
        }
    }
    Ok(ParsedStory { story, warnings })
}

/// Canonical form: sorted keys, two-space indentation, trailing newline.
/// Structurally equal stories serialize to identical bytes.
pub fn serialize_story(story: &Story) -> String {
    canonical_json(story)
}

/// Any serializable value as sorted-key, two-space-indented JSON.
pub fn canonical_json<T: serde::Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("in-memory values serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"title": "t", "sentences": [
        {"lexeme": "rain", "class": "verb", "features": {"tense": "past"}}
    ]}"#;

    #[test]
    fn minimal_document() {
        let p = parse_story(MINIMAL, ParseMode::Strict).unwrap();
        assert_eq!(p.story.sentences.len(), 1);
        assert!(p.story.characters.is_empty());
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn bad_relation_is_named() {
        let doc = r#"{"title": "t", "sentences": [
            {"lexeme": "run", "class": "verb", "children": [
                {"rel": "IV", "node": {"lexeme": "x", "class": "noun"}}]}]}"#;
        let e = parse_story(doc, ParseMode::Strict).unwrap_err();
        assert!(e.message.contains("IV"), "{e}");
        assert!(matches!(e.location, Location::LineColumn { line: 3, .. }), "{e}");
    }

    #[test]
    fn unknown_keys_strict_and_lax() {
        let doc = r#"{"title": "t", "colour": 1, "sentences": [
            {"lexeme": "rain", "class": "verb", "weight": 2, "features": {"tense": "past", "x": 1}}]}"#;
        assert!(parse_story(doc, ParseMode::Strict).is_err());
        let p = parse_story(doc, ParseMode::Lax).unwrap();
        assert_eq!(p.warnings.len(), 3);
        assert!(p.warnings.iter().any(|w| w.contains("`x` at sentences[0].features")));
    }

    #[test]
    fn undeclared_ref() {
        let doc = r#"{"title": "t", "sentences": [
            {"lexeme": "sleep", "class": "verb", "features": {"tense": "past"}, "children": [
                {"rel": "I", "node": {"lexeme": "fox", "class": "noun", "ref": "fox"}}]}]}"#;
        let e = parse_story(doc, ParseMode::Strict).unwrap_err();
        assert!(e.to_string().contains("fox"), "{e}");
    }

    #[test]
    fn canonical_round_trip() {
        let p = parse_story(MINIMAL, ParseMode::Strict).unwrap();
        let out = serialize_story(&p.story);
        let again = parse_story(&out, ParseMode::Strict).unwrap();
        assert_eq!(again.story, p.story);
        assert_eq!(serialize_story(&again.story), out);
        let at = |k: &str| out.find(&format!("\"{k}\"")).unwrap();
        assert!(at("characters") < at("sentences") && at("sentences") < at("title"));
        assert!(out.contains("\n  \"title\": \"t\""));
    }
}
