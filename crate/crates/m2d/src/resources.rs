//! Loading the morphology, lexicon, marker inventory and canned lines.
//!
//! The shipped files are compiled in. A directory named by
//! `M2D_LEXICON_DIR` (or passed explicitly) replaces any of them file by
//! file.

use std::path::{Path, PathBuf};

use m2d_core::dialog::{CannedLines, ResourceError, Resources};
use m2d_core::realize::MorphData;
use m2d_core::state::{Lexicon, LexiconData};
use m2d_core::transforms::MarkerSpec;
use m2d_core::MorphLexicon;

pub const LEXICON_DIR_VAR: &str = "M2D_LEXICON_DIR";

pub const MORPH_FILE: &str = "morph.json";
pub const LEXICON_FILE: &str = "lexicon.json";
pub const MARKERS_FILE: &str = "markers.json";
pub const CANNED_FILE: &str = "canned.json";

const SHIPPED: [(&str, &str); 4] = [
    (MORPH_FILE, include_str!("../data/morph.json")),
    (LEXICON_FILE, include_str!("../data/lexicon.json")),
    (MARKERS_FILE, include_str!("../data/markers.json")),
    (CANNED_FILE, include_str!("../data/canned.json")),
];

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{name}: {source}")]
    Json {
        name: String,
        source: serde_json::Error,
    },
    #[error("{name}: {message}")]
    Invalid { name: String, message: String },
    #[error("resources: {0}")]
    Resources(ResourceError),
}

fn read(dir: Option<&Path>, name: &str) -> Result<(String, String), LoadError> {
    if let Some(d) = dir {
        let p = d.join(name);
        if p.exists() {
            let text = std::fs::read_to_string(&p).map_err(|source| LoadError::Io {
                path: p.clone(),
                source,
            })?;
            return Ok((p.display().to_string(), text));
        }
    }
    let text = SHIPPED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| (*t).to_string())
        .expect("every file name has a shipped default");
    Ok((format!("<shipped {name}>"), text))
}

fn parse<T: serde::de::DeserializeOwned>(dir: Option<&Path>, name: &str) -> Result<(String, T), LoadError> {
    let (label, text) = read(dir, name)?;
    let v = serde_json::from_str(&text).map_err(|source| LoadError::Json {
        name: label.clone(),
        source,
    })?;
    Ok((label, v))
}

/// Loads every resource, taking files from `dir` where present.
pub fn load_resources(dir: Option<&Path>) -> Result<Resources, LoadError> {
    let (label, morph): (_, MorphData) = parse(dir, MORPH_FILE)?;
    let morph = MorphLexicon::new(morph).map_err(|e| LoadError::Invalid {
        name: label,
        message: e.to_string(),
    })?;
    let (label, lex): (_, LexiconData) = parse(dir, LEXICON_FILE)?;
    let lexicon = Lexicon::new(lex).map_err(|e| LoadError::Invalid {
        name: label,
        message: e.to_string(),
    })?;
    let (_, markers): (_, Vec<MarkerSpec>) = parse(dir, MARKERS_FILE)?;
    let (_, canned): (_, CannedLines) = parse(dir, CANNED_FILE)?;
    Resources::new(morph, lexicon, markers, canned).map_err(LoadError::Resources)
}

/// Loads resources from `M2D_LEXICON_DIR` when set, else the shipped set.
pub fn load_default_resources() -> Result<Resources, LoadError> {
    let dir = std::env::var_os(LEXICON_DIR_VAR).map(PathBuf::from);
    load_resources(dir.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_set_loads() {
        let r = load_resources(None).unwrap();
        assert!(r.marker("emphasizer_great").is_some());
        assert_eq!(r.lexicon.antonym("weedy"), Some("weedless"));
        assert_eq!(
            r.canned.correction_preface,
            "I don't think that's quite right, actually."
        );
    }

    #[test]
    fn directory_overrides_one_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join(LEXICON_FILE),
            r#"{"antonyms": [["weedy", "tidy"]], "synonyms": {}}"#,
        )
        .unwrap();
        let r = load_resources(Some(dir.path())).unwrap();
        assert_eq!(r.lexicon.antonym("weedy"), Some("tidy"));
        assert!(r.marker("ack_yeah").is_some());
    }

    #[test]
    fn bad_file_is_reported_with_its_path() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join(MARKERS_FILE), "[{").unwrap();
        let e = load_resources(Some(dir.path())).unwrap_err();
        assert!(e.to_string().contains("markers.json"), "{e}");
    }
}
