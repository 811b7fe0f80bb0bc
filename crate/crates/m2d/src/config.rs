//! Config documents: a preset plus field overrides.
//!
//! ```json
//! {"preset": "chatty", "seed": 7,
//!  "overrides": {"ratio": 0.6, "realize.em_dash": true},
//!  "speaker_overrides": {"S1": {"exclamation": 0.9, "caps": {"questions": 2}}}}
//! ```
//!
//! Override keys name `ParameterSet` fields, with dots for nested fields.
//! Speaker overrides accept a feature id as shorthand for its frequency,
//! or one of `frequencies`, `markers`, `caps` (merged entry by entry) and
//! `lexical` (replaced).

use m2d_core::dialog::Resources;
use m2d_core::personality::{known_groups, preset, FeatureId, ParameterSet};
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

fn err(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoadedConfig {
    pub params: ParameterSet,
    pub seed: Option<u64>,
    /// One line per clamped value.
    pub warnings: Vec<String>,
}

const TOP_KEYS: &[&str] = &["preset", "seed", "overrides", "speaker_overrides"];
const SPEAKER_MAPS: &[&str] = &["frequencies", "markers", "caps"];

fn check_params(v: &Value, path: &str) -> Result<ParameterSet, ConfigError> {
    serde_json::from_value(v.clone()).map_err(|e| err(path, e.to_string()))
}

fn set_field(root: &mut Value, key: &str, value: Value) -> Result<(), ConfigError> {
    let path = format!("overrides.{key}");
    let segments: Vec<&str> = key.split('.').collect();
    if matches!(segments[0], "preset" | "speakers") {
        return Err(err(path, "not overridable here; use `preset` or `speaker_overrides`"));
    }
    let mut cur = root;
    for (i, seg) in segments.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| err(&path, "is not an object"))?;
        let slot = obj
            .get_mut(*seg)
            .ok_or_else(|| err(&path, format!("unknown field `{seg}`")))?;
        if i + 1 == segments.len() {
            *slot = value;
            return Ok(());
        }
        cur = slot;
    }
    Ok(())
}

fn check_map_keys(kind: &str, map: &Map<String, Value>, path: &str) -> Result<(), ConfigError> {
    for k in map.keys() {
        let ok = match kind {
            "frequencies" => FeatureId::from_name(k).is_some(),
            "caps" => known_groups().contains(&k.as_str()),
            _ => true,
        };
        if !ok {
            let what = if kind == "caps" { "group" } else { "feature id" };
            return Err(err(format!("{path}.{k}"), format!("unknown {what} `{k}`")));
        }
    }
    Ok(())
}

fn apply_speaker(profile: &mut Value, overrides: &Map<String, Value>, path: &str) -> Result<(), ConfigError> {
    let profile = profile.as_object_mut().expect("profiles serialize as objects");
    for (k, v) in overrides {
        let p = format!("{path}.{k}");
        if FeatureId::from_name(k).is_some() {
            profile
                .get_mut("frequencies")
                .and_then(Value::as_object_mut)
                .expect("profile has frequencies")
                .insert(k.clone(), v.clone());
        } else if SPEAKER_MAPS.contains(&k.as_str()) {
            let entries = v.as_object().ok_or_else(|| err(&p, "expected an object"))?;
            check_map_keys(k, entries, &p)?;
            let target = profile
                .get_mut(k.as_str())
                .and_then(Value::as_object_mut)
                .expect("profile maps serialize as objects");
            for (ek, ev) in entries {
                target.insert(ek.clone(), ev.clone());
            }
        } else if k == "lexical" {
            profile.insert(k.clone(), v.clone());
        } else {
            return Err(err(p, format!("unknown feature id or profile field `{k}`")));
        }
    }
    Ok(())
}

/// Builds a parameter set from a config document. Values out of range are
/// clamped and reported in `warnings`.
pub fn load_params(text: &str) -> Result<LoadedConfig, ConfigError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| err("<document>", e.to_string()))?;
    let top = doc.as_object().ok_or_else(|| err("<document>", "expected an object"))?;
    if let Some(k) = top.keys().find(|k| !TOP_KEYS.contains(&k.as_str())) {
        return Err(err(k.clone(), "unknown field"));
    }
    let name = top
        .get("preset")
        .ok_or_else(|| err("preset", "missing"))?
        .as_str()
        .ok_or_else(|| err("preset", "expected a string"))?;
    let base = preset(name).map_err(|e| err("preset", e.to_string()))?;
    let seed = match top.get("seed") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| err("seed", "expected a non-negative integer"))?),
    };

    let mut v = serde_json::to_value(&base).expect("parameter sets serialize");
    if let Some(o) = top.get("overrides") {
        let o = o.as_object().ok_or_else(|| err("overrides", "expected an object"))?;
        for (k, val) in o {
            set_field(&mut v, k, val.clone())?;
            check_params(&v, &format!("overrides.{k}"))?;
        }
    }
    if let Some(so) = top.get("speaker_overrides") {
        let so = so
            .as_object()
            .ok_or_else(|| err("speaker_overrides", "expected an object"))?;
        for (speaker, o) in so {
            let idx = match speaker.as_str() {
                "S1" => 0,
                "S2" => 1,
                _ => return Err(err(format!("speaker_overrides.{speaker}"), "expected S1 or S2")),
            };
            let path = format!("speaker_overrides.{speaker}");
            let o = o.as_object().ok_or_else(|| err(&path, "expected an object"))?;
            apply_speaker(&mut v["speakers"][idx], o, &path)?;
            check_params(&v, &path)?;
        }
    }
    let mut params = check_params(&v, "<document>")?;
    let warnings = params.clamp();
    Ok(LoadedConfig {
        params,
        seed,
        warnings,
    })
}

/// Marker ids named in profiles must exist in the inventory.
pub fn check_markers(params: &ParameterSet, res: &Resources) -> Result<(), ConfigError> {
    for (i, p) in params.speakers.iter().enumerate() {
        for id in p.markers.keys() {
            if res.marker(id).and_then(|m| m.feature).is_none() {
                return Err(err(
                    format!("speaker_overrides.S{}.markers.{id}", i + 1),
                    format!("`{id}` is not a selectable marker"),
                ));
            }
        }
    }
    Ok(())
}
